#pragma once

#include <functional>
#include <vector>

#include "stringchain/chain.hpp"
#include "stringchain/timesim.hpp"

namespace stringchain {

/// H(lambda) z = (1,0) W_0(0) for (lambda - B d/dx) W = 0 with the tension
/// input (0,1) W_0(0) = z and the clamped end (1,0) W_{N-1}(N) = 0.
/// Throws InvalidArgument for Re lambda <= 0 and SingularBoundaryMatrix.
cplx transfer_value(const ChainConfig& cfg, cplx lambda, cplx z = 1.0);

struct TransferSample {
  cplx lambda;
  cplx value;
};

std::vector<TransferSample> transfer_scan(const ChainConfig& cfg, double gamma, const BetaGrid& scan,
                                          unsigned jobs = 1);

struct TransferSup {
  double sup_abs = 0.0;
  double argmax_beta = 0.0;
};

/// Throws EmptyScan.
TransferSup transfer_sup_scan(const ChainConfig& cfg, double gamma, const BetaGrid& scan,
                              unsigned jobs = 1);

void write_csv(std::ostream& os, const std::vector<TransferSample>& samples);

/// Sum of edge traversal times there and back, 2 sum_j 1 / sqrt(rho_j).
double round_trip_time(const ChainConfig& cfg);

/// int_0^T |u_t(t,0)|^2 dt / int_0^T v^2 dt for the forced chain started at rest.
/// Returns 0 for a vanishing input.
double admissibility_ratio(const ChainConfig& cfg, const std::function<double(double)>& v, double T,
                           SimOptions opts);

/// int_0^T |u_t(t,0)|^2 dt / |(phi0, phi1)|_H^2 for the conservative chain,
/// with |.|_H^2 twice the energy. Throws DegenerateData for zero data.
double observability_ratio(const ChainConfig& cfg, const WaveState& init, double T, SimOptions opts);

}  // namespace stringchain
