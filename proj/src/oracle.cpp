#include "stringchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace stringchain {

using SpMatC = Eigen::SparseMatrix<cplx>;
using SpMatD = Eigen::SparseMatrix<double>;

DofMap::DofMap(std::size_t n_edges, std::size_t points, int components)
    : n_edges_(n_edges), points_(points), components_(components) {
  if (points < 8) throw Error(ErrorCode::TooCoarse, "need at least 8 points per edge");
}

std::size_t DofMap::row(std::size_t edge, std::size_t index, int component) const {
  if (edge >= n_edges_ || index >= points_ || component < 0 || component >= components_)
    throw Error(ErrorCode::InvalidArgument, "dof out of range");
  const std::size_t g = edge * (points_ - 1) + index;
  if (g >= nodes()) throw Error(ErrorCode::InvalidArgument, "clamped node carries no dof");
  return static_cast<std::size_t>(component) * nodes() + g;
}

DofMap::Location DofMap::locate(std::size_t row) const {
  if (row >= size()) throw Error(ErrorCode::InvalidArgument, "row out of range");
  const std::size_t g = row % nodes();
  const int comp = static_cast<int>(row / nodes());
  return {g / (points_ - 1), g % (points_ - 1), comp};
}

namespace {

/// Lumped mass and the tridiagonal stiffness sum_j rho_j |u'|^2 over free nodes.
struct Pencil {
  std::vector<double> mass;
  std::vector<double> kdiag;
  std::vector<double> koff;  // koff[g] couples g and g + 1
};

Pencil assemble_pencil(const ChainConfig& cfg, const DofMap& map) {
  validate_config(cfg);
  const std::size_t n = map.nodes();
  const double h = map.spacing();
  Pencil p;
  p.mass.assign(n, h);
  p.mass[0] = 0.5 * h;
  p.kdiag.assign(n, 0.0);
  p.koff.assign(n > 0 ? n - 1 : 0, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const double k = cfg.density(c / (map.points() - 1)) / h;
    p.kdiag[c] += k;
    if (c + 1 < n) {
      p.kdiag[c + 1] += k;
      p.koff[c] -= k;
    }
  }
  return p;
}

void push_stiffness(std::vector<Eigen::Triplet<cplx>>& t, const Pencil& p, std::size_t row0,
                    std::size_t col0, cplx factor, bool divide_by_mass) {
  const std::size_t n = p.mass.size();
  for (std::size_t g = 0; g < n; ++g) {
    const double s = divide_by_mass ? 1.0 / p.mass[g] : 1.0;
    t.emplace_back(row0 + g, col0 + g, factor * p.kdiag[g] * s);
    if (g + 1 < n) t.emplace_back(row0 + g, col0 + g + 1, factor * p.koff[g] * s);
    if (g > 0) t.emplace_back(row0 + g, col0 + g - 1, factor * p.koff[g - 1] * s);
  }
}

SpMatD stiffness_matrix(const Pencil& p) {
  const std::size_t n = p.mass.size();
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t g = 0; g < n; ++g) {
    t.emplace_back(g, g, p.kdiag[g]);
    if (g + 1 < n) {
      t.emplace_back(g, g + 1, p.koff[g]);
      t.emplace_back(g + 1, g, p.koff[g]);
    }
  }
  SpMatD k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

void sort_spectrum(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
}

}  // namespace

FdOperator fd_wave_matrix(const ChainConfig& cfg, std::size_t m, WaveBoundary boundary) {
  FdOperator op;
  op.dof_map = DofMap(cfg.n_edges(), m, 2);
  const Pencil p = assemble_pencil(cfg, op.dof_map);
  const std::size_t n = p.mass.size();
  op.dimension = 2 * n;

  std::vector<Eigen::Triplet<cplx>> t;
  for (std::size_t g = 0; g < n; ++g) t.emplace_back(g, n + g, 1.0);
  push_stiffness(t, p, n, 0, -1.0, true);
  if (boundary == WaveBoundary::Damped) t.emplace_back(n, n, -1.0 / p.mass[0]);
  op.entries.resize(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
  op.entries.setFromTriplets(t.begin(), t.end());

  std::vector<Eigen::Triplet<double>> gt;
  const SpMatD k = stiffness_matrix(p);
  for (int c = 0; c < k.outerSize(); ++c)
    for (SpMatD::InnerIterator it(k, c); it; ++it) gt.emplace_back(it.row(), it.col(), it.value());
  for (std::size_t g = 0; g < n; ++g) gt.emplace_back(n + g, n + g, p.mass[g]);
  op.gram.resize(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
  op.gram.setFromTriplets(gt.begin(), gt.end());
  return op;
}

FdOperator fd_schrodinger_matrix(const ChainConfig& cfg, std::size_t m) {
  FdOperator op;
  op.dof_map = DofMap(cfg.n_edges(), m, 1);
  const Pencil p = assemble_pencil(cfg, op.dof_map);
  const std::size_t n = p.mass.size();
  op.dimension = n;

  std::vector<Eigen::Triplet<cplx>> t;
  push_stiffness(t, p, 0, 0, cplx(0.0, 1.0), true);
  t.emplace_back(0, 0, -1.0 / p.mass[0]);
  op.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.entries.setFromTriplets(t.begin(), t.end());

  std::vector<Eigen::Triplet<double>> gt;
  for (std::size_t g = 0; g < n; ++g) gt.emplace_back(g, g, p.mass[g]);
  op.gram.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.gram.setFromTriplets(gt.begin(), gt.end());
  return op;
}

std::vector<cplx> fd_eigenvalues(const FdOperator& op) {
  const Eigen::MatrixXcd a = op.dense();
  std::vector<cplx> out;
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a.real(), false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolve failed");
    out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolve failed");
    out.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  }
  sort_spectrum(out);
  return out;
}

cplx fd_wave_eigenvalue_refine(const ChainConfig& cfg, std::size_t m, cplx guess,
                               WaveBoundary boundary) {
  const DofMap map(cfg.n_edges(), m, 1);
  const Pencil p = assemble_pencil(cfg, map);
  const std::size_t n = p.mass.size();
  const double damp = boundary == WaveBoundary::Damped ? 1.0 : 0.0;

  cplx lambda = guess;
  double last_step = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 60; ++iter) {
    auto diag = [&](std::size_t g) {
      return lambda * lambda * p.mass[g] + (g == 0 ? damp * lambda : 0.0) + p.kdiag[g];
    };
    auto ddiag = [&](std::size_t g) { return 2.0 * lambda * p.mass[g] + (g == 0 ? damp : 0.0); };
    cplx q2 = 1.0, dq2 = 0.0;
    cplx q1 = diag(0), dq1 = ddiag(0);
    for (std::size_t g = 1; g < n; ++g) {
      const double b2 = p.koff[g - 1] * p.koff[g - 1];
      const cplx a = diag(g);
      const cplx q = a * q1 - b2 * q2;
      const cplx dq = ddiag(g) * q1 + a * dq1 - b2 * dq2;
      q2 = q1;
      dq2 = dq1;
      q1 = q;
      dq1 = dq;
      const double s = std::abs(q1) + std::abs(q2);
      if (s > 1e100 || (s < 1e-100 && s > 0.0)) {
        q1 /= s;
        q2 /= s;
        dq1 /= s;
        dq2 /= s;
      }
    }
    const cplx step = q1 / dq1;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    lambda -= step;
    const double size = std::abs(step);
    const double scale = 1.0 + std::abs(lambda);
    if (size <= 1e-13 * scale) return lambda;
    /// Rounding floor of the recursion: steps stop shrinking once tiny.
    if (size <= 1e-8 * scale && size >= 0.5 * last_step) return lambda;
    last_step = size;
  }
  throw Error(ErrorCode::NoConvergence, "discrete eigenvalue refinement did not converge");
}

std::vector<FdEigenvalue> fd_wave_spectrum(const ChainConfig& cfg, const Rect& rect,
                                           std::size_t m) {
  const std::size_t m_mid = (m + 1) / 2;
  const std::size_t m_coarse = std::max<std::size_t>(8, (m + 3) / 4);
  const std::vector<cplx> seeds = fd_eigenvalues(fd_wave_matrix(cfg, m_coarse));
  const Rect wide{rect.re_min - 1.0, rect.re_max + 1.0, rect.im_min - 2.0, rect.im_max + 2.0};

  const double hc = 1.0 / static_cast<double>(m_mid - 1);
  const double hf = 1.0 / static_cast<double>(m - 1);
  std::vector<FdEigenvalue> out;
  for (const cplx s : seeds) {
    if (!wide.contains(s)) continue;
    FdEigenvalue e;
    e.coarse = fd_wave_eigenvalue_refine(cfg, m_mid, s);
    e.fine = fd_wave_eigenvalue_refine(cfg, m, e.coarse);
    e.value = (hc * hc * e.fine - hf * hf * e.coarse) / (hc * hc - hf * hf);
    if (!rect.contains(e.value, 1e-9)) continue;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const FdEigenvalue& o) { return std::abs(o.fine - e.fine) < 1e-8; });
    if (!dup) out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const FdEigenvalue& a, const FdEigenvalue& b) {
    if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
    return a.value.real() < b.value.real();
  });
  return out;
}

double fd_resolvent_norm(const FdOperator& op, double beta) {
  const auto n = static_cast<Eigen::Index>(op.dimension);
  SpMatC id(n, n);
  id.setIdentity();
  const SpMatC shifted = cplx(0.0, beta) * id - op.entries;
  const SpMatC shifted_adj = SpMatC(shifted.adjoint());

  Eigen::SparseLU<SpMatC> lu, lu_adj;
  lu.compute(shifted);
  lu_adj.compute(shifted_adj);
  if (lu.info() != Eigen::Success || lu_adj.info() != Eigen::Success)
    throw Error(ErrorCode::SingularShift, "i beta - A is singular");

  Eigen::SimplicialLLT<SpMatD, Eigen::Lower, Eigen::NaturalOrdering<int>> chol(op.gram);
  if (chol.info() != Eigen::Success) throw Error(ErrorCode::SingularShift, "Gram matrix not SPD");
  const SpMatC l = SpMatD(chol.matrixL()).cast<cplx>();
  const SpMatC lt = SpMatC(l.transpose());

  // X = L^T S^{-1} L^{-T}, X^* = L^{-1} S^{-*} L.
  Eigen::SparseLU<SpMatC> l_lu(l), lt_lu(lt);
  auto apply = [&](const Eigen::MatrixXcd& q) -> Eigen::MatrixXcd {
    return lt * lu.solve(lt_lu.solve(q));
  };
  auto apply_adj = [&](const Eigen::MatrixXcd& q) -> Eigen::MatrixXcd {
    return l_lu.solve(lu_adj.solve(l * q));
  };

  const Eigen::Index k = std::min<Eigen::Index>(4, n);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd q(n, k);
  for (Eigen::Index i = 0; i < q.size(); ++i) q.data()[i] = cplx(nd(rng), nd(rng));
  q = Eigen::HouseholderQR<Eigen::MatrixXcd>(q).householderQ() * Eigen::MatrixXcd::Identity(n, k);

  double sigma = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    const Eigen::MatrixXcd z = apply(q);
    const Eigen::MatrixXcd small = z.adjoint() * z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(small);
    const double next = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    if (!std::isfinite(next)) throw Error(ErrorCode::SingularShift, "resolvent norm overflow");
    const bool done = iter > 2 && std::abs(next - sigma) <= 1e-10 * next;
    sigma = next;
    if (done) break;
    q = Eigen::HouseholderQR<Eigen::MatrixXcd>(apply_adj(z)).householderQ() *
        Eigen::MatrixXcd::Identity(n, k);
  }
  if (sigma > 1e14) throw Error(ErrorCode::SingularShift, "i beta is numerically an eigenvalue");
  return sigma;
}

namespace {

ChainFunction solve_first_order(const ChainConfig& cfg, const BvpData& data, std::size_t m) {
  const std::size_t ne = cfg.n_edges();
  const std::size_t nodes = ne * (m - 1) + 1;
  const double h = 1.0 / static_cast<double>(m - 1);
  const auto dim = static_cast<Eigen::Index>(2 * nodes);
  const bool transfer = data.kind == BvpKind::Transfer;
  if (!transfer && !data.vector_source)
    throw Error(ErrorCode::InvalidArgument, "wave problem needs a source");

  std::vector<Eigen::Triplet<cplx>> t;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
  if (transfer) {
    t.emplace_back(0, 1, 1.0);
    rhs(0) = data.z;
  } else {
    t.emplace_back(0, 0, 1.0);
    t.emplace_back(0, 1, -1.0);
  }
  for (std::size_t c = 0; c + 1 < nodes; ++c) {
    const std::size_t j = c / (m - 1);
    const double rho = cfg.density(j);
    const auto r = static_cast<Eigen::Index>(1 + 2 * c);
    const auto a = static_cast<Eigen::Index>(2 * c);
    const auto b = static_cast<Eigen::Index>(2 * c + 2);
    const cplx half = 0.5 * data.lambda;
    // row r: lambda avg(W1) - (W2' ), row r+1: lambda avg(W2) - rho (W1')
    t.emplace_back(r, a, half);
    t.emplace_back(r, b, half);
    t.emplace_back(r, a + 1, 1.0 / h);
    t.emplace_back(r, b + 1, -1.0 / h);
    t.emplace_back(r + 1, a + 1, half);
    t.emplace_back(r + 1, b + 1, half);
    t.emplace_back(r + 1, a, rho / h);
    t.emplace_back(r + 1, b, -rho / h);
    if (!transfer) {
      const double xm = (static_cast<double>(c) + 0.5) * h;
      const Vec2C g = data.vector_source(j, xm);
      rhs(r) = g(0);
      rhs(r + 1) = g(1);
    }
  }
  t.emplace_back(dim - 1, static_cast<Eigen::Index>(2 * (nodes - 1)), 1.0);

  SpMatC a(dim, dim);
  a.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMatC> lu(a);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "box scheme singular");
  const Eigen::VectorXcd w = lu.solve(rhs);

  ChainFunction out = ChainFunction::uniform(ne, m, 2);
  for (std::size_t j = 0; j < ne; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t g = j * (m - 1) + i;
      out.set_vec(j, i, Vec2C(w(static_cast<Eigen::Index>(2 * g)), w(static_cast<Eigen::Index>(2 * g + 1))));
    }
  return out;
}

ChainFunction solve_schrodinger(const ChainConfig& cfg, const BvpData& data, std::size_t m) {
  if (!data.scalar_source) throw Error(ErrorCode::InvalidArgument, "Schrodinger problem needs a source");
  const DofMap map(cfg.n_edges(), m, 1);
  const Pencil p = assemble_pencil(cfg, map);
  const std::size_t n = p.mass.size();
  const double h = map.spacing();
  const cplx beta_i = data.lambda;

  std::vector<Eigen::Triplet<cplx>> t;
  push_stiffness(t, p, 0, 0, cplx(0.0, -1.0), false);
  for (std::size_t g = 0; g < n; ++g) t.emplace_back(g, g, beta_i * p.mass[g]);
  t.emplace_back(0, 0, 1.0);

  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t g = 0; g < n; ++g) {
    const std::size_t j = g / (m - 1);
    const double x = static_cast<double>(g) * h;
    cplx v = 0.5 * h * data.scalar_source(j, x);
    if (g % (m - 1) == 0 && g > 0) v += 0.5 * h * data.scalar_source(j - 1, x);
    else if (g > 0) v += 0.5 * h * data.scalar_source(j, x);
    rhs(static_cast<Eigen::Index>(g)) = v;
  }

  SpMatC a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  a.setFromTriplets(t.begin(), t.end());
  Eigen::SparseLU<SpMatC> lu(a);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "finite volume system singular");
  const Eigen::VectorXcd u = lu.solve(rhs);

  ChainFunction out = ChainFunction::uniform(cfg.n_edges(), m, 1);
  for (std::size_t j = 0; j < cfg.n_edges(); ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t g = j * (m - 1) + i;
      out.at(j, i) = g < n ? u(static_cast<Eigen::Index>(g)) : cplx(0.0, 0.0);
    }
  return out;
}

}  // namespace

ChainFunction fd_bvp_solve(const ChainConfig& cfg, const BvpData& data, std::size_t m) {
  validate_config(cfg);
  if (m < 8) throw Error(ErrorCode::TooCoarse, "need at least 8 points per edge");
  if (data.kind == BvpKind::Schrodinger) return solve_schrodinger(cfg, data, m);
  return solve_first_order(cfg, data, m);
}

ChainFunction fd_bvp_richardson(const ChainConfig& cfg, const BvpData& data, std::size_t m) {
  ChainFunction coarse = fd_bvp_solve(cfg, data, m);
  const ChainFunction fine = fd_bvp_solve(cfg, data, 2 * m - 1);
  for (std::size_t j = 0; j < coarse.n_edges(); ++j)
    for (std::size_t i = 0; i < coarse.size(j); ++i)
      for (int c = 0; c < coarse.arity(); ++c)
        coarse.at(j, i, c) = (4.0 * fine.at(j, 2 * i, c) - coarse.at(j, i, c)) / 3.0;
  return coarse;
}

}  // namespace stringchain
