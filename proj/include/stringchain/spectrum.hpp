#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "stringchain/chain.hpp"
#include "stringchain/transfer_matrix.hpp"

namespace stringchain {

enum class System { Wave, Schrodinger };

/// det H(lambda) of the damped wave chain; zeros are the eigenvalues.
cplx char_det_wave(const ChainConfig& cfg, cplx lambda);

/// First component of P(mu) (1, i)^T with mu = -i lambda and P the product of
/// Schroedinger edge steps, divided by its value at lambda = 1.
cplx char_det_schrodinger(const ChainConfig& cfg, cplx lambda);

cplx char_det(const ChainConfig& cfg, cplx lambda, System which);

struct Eigenvalue {
  cplx value;
  double residual = 0.0;  // |char_det| at value
};

struct EigenSet {
  std::vector<Eigenvalue> eigenvalues;  // sorted by Im, then Re
  Rect search_rect;
  std::optional<double> abscissa;  // max Re over eigenvalues
  std::optional<int> winding;      // argument-principle count, when audited
};

struct RootOptions {
  int nx = 64;
  int ny = 256;
  double tol = 1e-10;
  double promotion = std::numeric_limits<double>::infinity();
  int max_newton = 60;
  double dedup = 1e-8;
  bool audit = false;
  unsigned jobs = 1;
};

/// Grid scan of |char_det| for interior local minima below `promotion`,
/// Newton refinement with a central-difference derivative. Re max is clamped
/// to -1e-6. Candidates whose iteration leaves the rectangle are discarded;
/// a candidate that stalls inside throws NoConvergence.
EigenSet find_eigenvalues(const ChainConfig& cfg, Rect rect, System which,
                          const RootOptions& opts = {});

/// Argument-principle zero count on the boundary of rect.
int winding_number(const ChainConfig& cfg, const Rect& rect, System which);

struct AxisGap {
  double gap = 0.0;  // min |char_det(i beta)|
  double argmin_beta = 0.0;
};

/// Throws EmptyScan.
AxisGap imaginary_axis_gap(const ChainConfig& cfg, System which, const BetaGrid& scan,
                           unsigned jobs = 1);

void write_csv(std::ostream& os, const EigenSet& set);
nlohmann::json summary_json(const EigenSet& set, double tol);

}  // namespace stringchain
