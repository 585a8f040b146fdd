#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stringchain/chain.hpp"
#include "stringchain/transfer_matrix.hpp"

namespace stringchain {

/// Solution of (i beta - B d/dx) W = G with (1,-1) W_0(0) = 0, (1,0) W_{N-1}(N) = 0
/// and W continuous at the joints. Edge 0 is written W_0(x) = E_0(x-1) F_0 - G~_0(x),
/// edge j >= 1 as W_j(x) = E_j(x-j) F_j - G~_j(x).
struct WaveResolventSolution {
  ChainFunction w;
  std::vector<Vec2C> f;      // F_0 .. F_{N-1}
  Vec2C y;                   // right-hand side of H F_0 = Y
  std::vector<Vec2C> gamma;  // Gamma_0 .. Gamma_N with F_j = P_j F_0 - Gamma_j
};

/// Throws SingularBoundaryMatrix, QuadratureTooCoarse.
WaveResolventSolution wave_resolvent(const ChainConfig& cfg, double beta, const VectorSource& g,
                                     std::size_t points_per_edge);
/// Samples of G are interpolated linearly; the solution uses the grids of g.
WaveResolventSolution wave_resolvent(const ChainConfig& cfg, double beta, const ChainFunction& g);

/// ||i beta W - B W' - G|| / ||G|| in the energy norm, W' by five-point differences.
double wave_residual(const ChainConfig& cfg, double beta, const WaveResolventSolution& sol,
                     const VectorSource& g);

/// Solution of i beta u + i rho u'' = g with rho_0 u'(0) = i u(0), u(N) = 0,
/// continuity of u and rho u' at the joints.
struct SchrodingerResolventSolution {
  ChainFunction u;
  std::vector<Vec2C> coeffs;               // (u_j(j), rho_j u_j'(j))
  std::optional<Vec2C> omega;              // beta > 0 only
  std::optional<Vec2C> alpha_gamma;        // P (1, i)^T, beta > 0 only
  double residual = 0.0;
};

/// Throws ZeroBeta, SingularDenominator, QuadratureTooCoarse and
/// SignConventionMismatch when the solution fails its own residual check.
SchrodingerResolventSolution schrodinger_resolvent(const ChainConfig& cfg, double beta,
                                                   const ScalarSource& g,
                                                   std::size_t points_per_edge);
SchrodingerResolventSolution schrodinger_resolvent(const ChainConfig& cfg, double beta,
                                                   const ChainFunction& g);

/// ||i beta u + i rho u'' - g|| / (|beta| ||u|| + ||g||).
double schrodinger_residual(const ChainConfig& cfg, double beta, const ChainFunction& u,
                            const ScalarSource& g);

/// Points per edge that keep at least `cells_per_period` cells per oscillation
/// period on every edge (never below `minimum`).
std::size_t resolved_points(const ChainConfig& cfg, double frequency, double cells_per_period,
                            std::size_t minimum);

/// Seeded smooth source on the chain: a few low cosine modes plus
/// e^{+-i k_j (x - j)} carriers with slowly varying envelopes, k_j = carrier / c_j
/// (wave) or sqrt(|carrier| / rho_j) (Schroedinger).
VectorSource probe_vector(const ChainConfig& cfg, double beta, std::uint64_t seed);
ScalarSource probe_scalar(const ChainConfig& cfg, double beta, std::uint64_t seed);

struct NormSample {
  double beta = 0.0;
  double estimate = 0.0;  // max of ||W|| / ||G|| over the span of the probes
  int probes = 0;
  double residual_max = 0.0;
};

/// Probe p uses seed + p, so the probe sets are nested and the estimate is
/// nondecreasing in `probes`.
std::vector<NormSample> wave_resolvent_norm_scan(const ChainConfig& cfg,
                                                 const std::vector<double>& betas, int probes,
                                                 std::uint64_t seed = 0, unsigned jobs = 1);
std::vector<NormSample> schrodinger_norm_scan(const ChainConfig& cfg,
                                              const std::vector<double>& betas, int probes,
                                              std::uint64_t seed = 0, unsigned jobs = 1);

void write_csv(std::ostream& os, const std::vector<NormSample>& samples);

}  // namespace stringchain
