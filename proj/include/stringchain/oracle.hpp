#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "stringchain/chain.hpp"
#include "stringchain/transfer_matrix.hpp"

namespace stringchain {

/// Finite-difference ground truth. Every edge carries m equispaced nodes,
/// joints are shared nodes and the clamped node x = N is eliminated, so one
/// scalar field has N (m - 1) unknowns at x = 0, h, ..., N - h.
class DofMap {
 public:
  struct Location {
    std::size_t edge;
    std::size_t index;
    int component;
  };

  DofMap() = default;
  DofMap(std::size_t n_edges, std::size_t points, int components);

  std::size_t n_edges() const noexcept { return n_edges_; }
  std::size_t points() const noexcept { return points_; }
  int components() const noexcept { return components_; }
  std::size_t nodes() const noexcept { return n_edges_ * (points_ - 1); }
  std::size_t size() const noexcept { return nodes() * static_cast<std::size_t>(components_); }
  double spacing() const { return 1.0 / static_cast<double>(points_ - 1); }

  /// Row of sample `index` on `edge`. Throws InvalidArgument for the clamped node.
  std::size_t row(std::size_t edge, std::size_t index, int component = 0) const;
  /// Canonical location of a row; a joint is reported on the edge it starts.
  Location locate(std::size_t row) const;

 private:
  std::size_t n_edges_ = 0;
  std::size_t points_ = 0;
  int components_ = 1;
};

enum class WaveBoundary { Damped, Conservative };

/// A discretized generator with the Gram matrix of its energy inner product.
struct FdOperator {
  std::size_t dimension = 0;
  Eigen::SparseMatrix<cplx> entries;
  Eigen::SparseMatrix<double> gram;
  DofMap dof_map;

  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(entries); }
};

/// Lumped-mass discretization of the wave generator on (u, v):
/// [[0, I], [-M^{-1} K, -M^{-1} D]] with D = e_0 e_0^T for the damped end.
/// Gram matrix blockdiag(K, M). Throws TooCoarse for m < 8.
FdOperator fd_wave_matrix(const ChainConfig& cfg, std::size_t m,
                          WaveBoundary boundary = WaveBoundary::Damped);

/// M^{-1} (i K - D) for the Schroedinger generator, Gram matrix M.
FdOperator fd_schrodinger_matrix(const ChainConfig& cfg, std::size_t m);

/// All eigenvalues by a dense QR sweep, sorted by imaginary then real part.
std::vector<cplx> fd_eigenvalues(const FdOperator& op);

/// Newton on det(lambda^2 M + lambda D + K) through the tridiagonal continuant.
/// Throws NoConvergence.
cplx fd_wave_eigenvalue_refine(const ChainConfig& cfg, std::size_t m, cplx guess,
                               WaveBoundary boundary = WaveBoundary::Damped);

struct FdEigenvalue {
  cplx value;   // Richardson combination of the two levels below
  cplx fine;    // m points per edge
  cplx coarse;  // (m + 1) / 2 points per edge
};

/// Eigenvalues of the damped wave discretization inside rect. Candidates come
/// from a dense solve at about m / 4 points per edge and are then refined on
/// the two finer levels.
std::vector<FdEigenvalue> fd_wave_spectrum(const ChainConfig& cfg, const Rect& rect,
                                           std::size_t m);

/// ||(i beta - A)^{-1}|| measured in the Gram norm. Throws SingularShift.
double fd_resolvent_norm(const FdOperator& op, double beta);

enum class BvpKind { Wave, Schrodinger, Transfer };

/// Two-point boundary value problems solved by the oracle.
///   Wave:        (lambda - B d/dx) W = G, (1,-1) W_0(0) = 0, (1,0) W_{N-1}(N) = 0
///   Transfer:    (lambda - B d/dx) W = 0, (0,1) W_0(0) = z, (1,0) W_{N-1}(N) = 0
///   Schrodinger: i beta u + i rho u'' = g, rho_0 u'(0) = i u(0), u(N) = 0
struct BvpData {
  BvpKind kind = BvpKind::Wave;
  cplx lambda{0.0, 0.0};
  VectorSource vector_source;
  ScalarSource scalar_source;
  cplx z{1.0, 0.0};
};

/// Box scheme (first-order systems) or lumped finite volumes (Schroedinger)
/// on m points per edge, sparse direct solve. Throws TooCoarse, SingularSystem.
ChainFunction fd_bvp_solve(const ChainConfig& cfg, const BvpData& data, std::size_t m);

/// fd_bvp_solve at m and 2m - 1 points, combined to cancel the h^2 term.
/// Sampled on the m-point grid.
ChainFunction fd_bvp_richardson(const ChainConfig& cfg, const BvpData& data, std::size_t m);

}  // namespace stringchain
