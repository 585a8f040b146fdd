#pragma once

#include <span>

#include "stringchain/chain.hpp"

namespace stringchain {

/// exp(i beta x B^{-1}) for B = [[0,1],[rho,0]]:
/// [[cos t, i sin t / c], [i c sin t, cos t]] with c = sqrt(rho), t = beta x / c.
Mat2C exp_osc(double rho, double beta, double x);

/// exp(lambda x B^{-1}) = [[cosh z, sinh z / c], [c sinh z, cosh z]], z = lambda x / c.
/// Agrees with exp_osc(rho, beta, x) at lambda = i beta.
Mat2C exp_hyp(double rho, cplx lambda, double x);

/// cosh and sinh of a complex argument that stay finite (no inf*0 NaN) for
/// |Re z| up to the double range.
void cosh_sinh(cplx z, cplx& ch, cplx& sh);

/// First row of the boundary matrix.
///   Feedback:      (1,-1) exp(-lambda B_0^{-1})  -- damped end, rho_0 u_x = u_t
///   NeumannInput:  (0, 1) exp(-lambda B_0^{-1})  -- prescribed tension input
enum class LeftRow { Feedback, NeumannInput };

struct BoundaryMatrices {
  Mat2C h;        // second row (1,0) . P
  Mat2C h_tilde;  // second row (0,1) . P
};

/// Ordered product exp(lambda B_{j-1}^{-1}) ... exp(lambda B_1^{-1}); identity
/// when j <= 1.
Mat2C interior_product(const ChainConfig& cfg, cplx lambda, std::size_t j);

/// Boundary matrices acting on F_0 = W_0(1). P is the propagator from x = 1 to
/// x = N, i.e. exp(lambda B_{N-1}^{-1}) M_{N-1}(lambda) for N >= 2 and the
/// identity for N = 1.
BoundaryMatrices boundary_matrices(const ChainConfig& cfg, cplx lambda,
                                   LeftRow row = LeftRow::Feedback);

struct DetPair {
  cplx d;
  cplx d_tilde;

  double cross() const { return std::real(d * std::conj(d_tilde)); }
};

/// (det H, det H~) by the edge-by-edge recursion
///   D'  = cosh(lambda/c) D + sinh(lambda/c)/c D~
///   D~' = c sinh(lambda/c) D + cosh(lambda/c) D~
/// seeded with the single-edge determinants.
DetPair det_pair(const ChainConfig& cfg, cplx lambda, LeftRow row = LeftRow::Feedback);

struct DetBound {
  double analytic = 0.0;  // rigorous lower bound on |D_{N-1}(i beta)| for all real beta
  double numeric = 0.0;   // min |D_{N-1}(i beta)| over the scan grid
  double argmin_beta = 0.0;
};

/// Lower bound for |det H_{N-1}(i beta)| from the Gram-matrix argument plus
/// the minimum over a beta grid. Throws EmptyScan.
DetBound det_lower_bound(const ChainConfig& cfg, const BetaGrid& scan, unsigned jobs = 1);

/// Analytic part of det_lower_bound (no scan).
double det_lower_bound_analytic(const ChainConfig& cfg);

/// Positive constant k_{N-1} with Re(D conj D~) >= k_{N-1} on Re lambda = gamma
/// for the NeumannInput boundary matrix.
double transfer_positivity_bound(const ChainConfig& cfg, double gamma);

/// Transfer matrix of -i rho u'' = lambda u across a unit edge acting on
/// (u, rho u'), written in mu = -i lambda (mu = beta on lambda = i beta):
/// [[cos w, sin(w)/(w rho)], [-rho w sin w, cos w]], w = sqrt(mu / rho).
/// Entire in mu; the beta -> 0 limit is [[1, 1/rho], [0, 1]].
Mat2C schrodinger_step(double rho, cplx mu);

/// Real-beta form; throws NonPositiveBeta for beta <= 0.
Mat2C schrodinger_step(double rho, double beta);

}  // namespace stringchain
