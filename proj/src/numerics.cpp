#include "numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace stringchain::detail {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int order) {
  const std::size_t n = nodes.size();
  const auto m = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<cplx> derivative5(std::span<const double> x, std::span<const cplx> f, int order) {
  const std::size_t n = x.size();
  if (n < 5) throw Error(ErrorCode::GridMismatch, "five-point stencil needs five samples");
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = std::min(i >= 2 ? i - 2 : 0, n - 5);
    const auto w = fornberg_weights(x[i], x.subspan(lo, 5), order);
    cplx s = 0.0;
    for (std::size_t k = 0; k < 5; ++k) s += w[static_cast<std::size_t>(order)][k] * f[lo + k];
    out[i] = s;
  }
  return out;
}

cplx interpolate(const ChainFunction& f, std::size_t edge, double x, int comp) {
  const auto g = f.grid(edge);
  auto it = std::upper_bound(g.begin(), g.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - g.begin());
  hi = std::clamp<std::size_t>(hi, 1, g.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = (x - g[lo]) / (g[hi] - g[lo]);
  return (1.0 - t) * f.at(edge, lo, comp) + t * f.at(edge, hi, comp);
}

double max_cell(std::span<const double> x) {
  double m = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) m = std::max(m, x[i] - x[i - 1]);
  return m;
}

double span_gain(const Eigen::MatrixXcd& src_gram, const Eigen::MatrixXcd& out_gram) {
  const Eigen::Index n = src_gram.rows();
  std::vector<Eigen::Index> kept;
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
    Eigen::VectorXcd row(r);
    for (Eigen::Index i = 0; i < r; ++i) {
      cplx s = src_gram(k, kept[static_cast<std::size_t>(i)]);
      for (Eigen::Index q = 0; q < i; ++q) s -= row(q) * std::conj(l(i, q));
      row(i) = s / l(i, i).real();
    }
    const double d = src_gram(k, k).real() - row.squaredNorm();
    if (!(d > 1e-20 * src_gram(k, k).real())) continue;
    l.row(r).head(r) = row.transpose();
    l(r, r) = std::sqrt(d);
    kept.push_back(k);
  }
  const Eigen::Index r = static_cast<Eigen::Index>(kept.size());
  if (r == 0) return 0.0;
  Eigen::MatrixXcd o(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      o(i, j) = out_gram(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
  const Eigen::MatrixXcd lr = l.topLeftCorner(r, r);
  const auto tri = lr.triangularView<Eigen::Lower>();
  const Eigen::MatrixXcd a = tri.solve(o);
  const Eigen::MatrixXcd c = tri.solve(Eigen::MatrixXcd(a.adjoint())).adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace stringchain::detail
