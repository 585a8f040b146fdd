#include "stringchain/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/LU>

#include "numerics.hpp"
#include "stringchain/parallel.hpp"

namespace stringchain {

namespace {

using detail::kGaussNodes;
using detail::kGaussWeights;

constexpr cplx kI{0.0, 1.0};

void check_resolution(std::span<const double> grid, double wavenumber) {
  if (wavenumber == 0.0) return;
  const double period = 2.0 * std::numbers::pi / std::abs(wavenumber);
  if (detail::max_cell(grid) > period / 10.0)
    throw Error(ErrorCode::QuadratureTooCoarse, "fewer than 10 cells per oscillation period");
}

std::vector<std::vector<double>> uniform_grids(std::size_t n_edges, std::size_t points) {
  if (points < 5) throw Error(ErrorCode::GridMismatch, "need at least 5 points per edge");
  return ChainFunction::uniform(n_edges, points, 1).grids();
}

WaveResolventSolution solve_wave(const ChainConfig& cfg, double beta,
                                 const std::vector<std::vector<double>>& grids,
                                 const VectorSource& g) {
  validate_config(cfg);
  const std::size_t ne = cfg.n_edges();
  if (grids.size() != ne) throw Error(ErrorCode::GridMismatch, "grid count differs from edge count");

  // gt[j][i] = G~_j(x_i)
  std::vector<std::vector<Vec2C>> gt(ne);
  for (std::size_t j = 0; j < ne; ++j) {
    const auto& x = grids[j];
    const double rho = cfg.density(j);
    check_resolution(x, beta / cfg.speed(j));
    const double base = static_cast<double>(j);
    std::vector<Vec2C> q(x.size(), Vec2C::Zero());
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double h = x[i + 1] - x[i];
      Vec2C acc = Vec2C::Zero();
      for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
        const double t = 0.5 * h * (1.0 + kGaussNodes[k]);
        const Vec2C s = g(j, x[i] + t);
        const Vec2C binv_g(s(1) / rho, s(0));
        acc += (0.5 * h * kGaussWeights[k]) * (exp_osc(rho, beta, -t) * binv_g);
      }
      q[i + 1] = q[i] + exp_osc(rho, beta, base - x[i]) * acc;
    }
    const Vec2C q_base = j == 0 ? q.back() : Vec2C(Vec2C::Zero());
    gt[j].resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      gt[j][i] = exp_osc(rho, beta, x[i] - base) * (q[i] - q_base);
  }

  WaveResolventSolution sol;
  sol.gamma.assign(ne + 1, Vec2C::Zero());
  Mat2C p = Mat2C::Identity();
  for (std::size_t j = 1; j < ne; ++j) {
    const Mat2C e = exp_osc(cfg.density(j), beta, 1.0);
    sol.gamma[j + 1] = e * sol.gamma[j] + gt[j].back();
    p = e * p;
  }

  Mat2C h;
  h.row(0) = Eigen::RowVector2cd(1.0, -1.0) * exp_osc(cfg.density(0), beta, -1.0);
  h.row(1) = p.row(0);
  const cplx det = h.determinant();
  if (std::abs(det) < 1e-14) throw Error(ErrorCode::SingularBoundaryMatrix, "|det H| below 1e-14");
  sol.y = Vec2C(gt[0].front()(0) - gt[0].front()(1), sol.gamma[ne](0));
  const Vec2C f0 = h.inverse() * sol.y;

  sol.f.assign(ne, f0);
  for (std::size_t j = 1; j + 1 < ne; ++j)
    sol.f[j + 1] = exp_osc(cfg.density(j), beta, 1.0) * sol.f[j] - gt[j].back();

  sol.w = ChainFunction(2, grids);
  for (std::size_t j = 0; j < ne; ++j) {
    const double base = j == 0 ? 1.0 : static_cast<double>(j);
    for (std::size_t i = 0; i < grids[j].size(); ++i)
      sol.w.set_vec(j, i, exp_osc(cfg.density(j), beta, grids[j][i] - base) * sol.f[j] - gt[j][i]);
  }
  return sol;
}

double wave_inner(const ChainConfig& cfg, const ChainFunction& a, const ChainFunction& b,
                  cplx* cross) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.n_edges(); ++j) {
    const auto w = quadrature_weights(a.grid(j));
    const double rho = cfg.density(j);
    for (std::size_t i = 0; i < w.size(); ++i)
      s += w[i] * (a.at(j, i, 0) * std::conj(b.at(j, i, 0)) + a.at(j, i, 1) * std::conj(b.at(j, i, 1)) / rho);
  }
  if (cross) *cross = s;
  return s.real();
}

double scalar_inner(const ChainFunction& a, const ChainFunction& b, cplx* cross) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < a.n_edges(); ++j) {
    const auto w = quadrature_weights(a.grid(j));
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a.at(j, i) * std::conj(b.at(j, i));
  }
  if (cross) *cross = s;
  return s.real();
}

SchrodingerResolventSolution solve_schrodinger_pos(const ChainConfig& cfg, double beta,
                                                   const std::vector<std::vector<double>>& grids,
                                                   const ScalarSource& g) {
  const std::size_t ne = cfg.n_edges();
  std::vector<std::vector<cplx>> gv(ne), gd(ne);  // G_j and rho_j G_j'
  std::vector<Vec2C> wj(ne);
  for (std::size_t j = 0; j < ne; ++j) {
    const auto& x = grids[j];
    const double rho = cfg.density(j);
    const double k = std::sqrt(beta / rho);
    check_resolution(x, k);
    const double base = static_cast<double>(j);
    cplx cacc = 0.0, sacc = 0.0;
    gv[j].resize(x.size());
    gd[j].resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0) {
        const double h = x[i] - x[i - 1];
        for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
          const double s = x[i - 1] + 0.5 * h * (1.0 + kGaussNodes[q]);
          const cplx f = -kI * g(j, s) / rho;
          const double w = 0.5 * h * kGaussWeights[q];
          cacc += w * std::cos(k * (s - base)) * f;
          sacc += w * std::sin(k * (s - base)) * f;
        }
      }
      const double t = x[i] - base;
      gv[j][i] = (std::sin(k * t) * cacc - std::cos(k * t) * sacc) / k;
      gd[j][i] = rho * (std::cos(k * t) * cacc + std::sin(k * t) * sacc);
    }
    wj[j] = Vec2C(gv[j].back(), gd[j].back());
  }

  Mat2C p = Mat2C::Identity();
  Vec2C s = Vec2C::Zero();
  std::vector<Mat2C> m(ne);
  for (std::size_t j = 0; j < ne; ++j) {
    m[j] = schrodinger_step(cfg.density(j), beta);
    p = m[j] * p;
    s = m[j] * s + wj[j];
  }
  SchrodingerResolventSolution sol;
  sol.alpha_gamma = p * Vec2C(1.0, kI);
  sol.omega = Vec2C(-s);
  const cplx denom = (*sol.alpha_gamma)(0);
  if (std::abs(denom) < 1e-14) throw Error(ErrorCode::SingularDenominator, "alpha + i gamma vanishes");
  const cplx c01 = (*sol.omega)(0) / denom;

  sol.coeffs.assign(ne, Vec2C(c01, kI * c01));
  for (std::size_t j = 0; j + 1 < ne; ++j) sol.coeffs[j + 1] = m[j] * sol.coeffs[j] + wj[j];

  sol.u = ChainFunction(1, grids);
  for (std::size_t j = 0; j < ne; ++j) {
    const double rho = cfg.density(j);
    const double k = std::sqrt(beta / rho);
    for (std::size_t i = 0; i < grids[j].size(); ++i) {
      const double t = grids[j][i] - static_cast<double>(j);
      sol.u.at(j, i) = sol.coeffs[j](0) * std::cos(k * t) +
                       sol.coeffs[j](1) * std::sin(k * t) / (k * rho) + gv[j][i];
    }
  }
  return sol;
}

SchrodingerResolventSolution solve_schrodinger_neg(const ChainConfig& cfg, double beta,
                                                   const std::vector<std::vector<double>>& grids,
                                                   const ScalarSource& g) {
  const std::size_t ne = cfg.n_edges();
  // Particular solution -(1/2w) int e^{-w|x-s|} f(s) ds on each edge, f = -i g / rho.
  std::vector<std::vector<cplx>> up(ne), dup(ne);
  for (std::size_t j = 0; j < ne; ++j) {
    const auto& x = grids[j];
    const double rho = cfg.density(j);
    const double w = std::sqrt(-beta / rho);
    check_resolution(x, w);
    const std::size_t n = x.size();
    std::vector<cplx> left(n, 0.0), right(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = x[i + 1] - x[i];
      cplx to_right = 0.0, to_left = 0.0;
      for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
        const double t = 0.5 * h * (1.0 + kGaussNodes[q]);
        const cplx f = -kI * g(j, x[i] + t) / rho;
        const double wq = 0.5 * h * kGaussWeights[q];
        to_right += wq * std::exp(-w * (h - t)) * f;
        to_left += wq * std::exp(-w * t) * f;
      }
      left[i + 1] = std::exp(-w * h) * left[i] + to_right;
      right[i] = to_left;  // completed below
    }
    for (std::size_t i = n - 1; i-- > 0;)
      right[i] += std::exp(-w * (x[i + 1] - x[i])) * right[i + 1];
    up[j].resize(n);
    dup[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      up[j][i] = -(left[i] + right[i]) / (2.0 * w);
      dup[j][i] = 0.5 * (left[i] - right[i]);
    }
  }

  // Unknowns (a_j, b_j): u_j = a_j e^{-w(x-j)} + b_j e^{-w(j+1-x)} + particular.
  const auto n2 = static_cast<Eigen::Index>(2 * ne);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n2, n2);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n2);
  auto w_of = [&](std::size_t j) { return std::sqrt(-beta / cfg.density(j)); };
  {
    const double rho = cfg.density(0);
    const double w = w_of(0);
    const double e = std::exp(-w);
    a(0, 0) = rho * (-w) - kI;
    a(0, 1) = rho * w * e - kI * e;
    rhs(0) = -(rho * dup[0].front() - kI * up[0].front());
  }
  for (std::size_t j = 1; j < ne; ++j) {
    const auto r = static_cast<Eigen::Index>(2 * j - 1);
    const auto cl = static_cast<Eigen::Index>(2 * (j - 1));
    const auto cr = static_cast<Eigen::Index>(2 * j);
    const double wl = w_of(j - 1), wr = w_of(j);
    const double el = std::exp(-wl), er = std::exp(-wr);
    const double rl = cfg.density(j - 1), rr = cfg.density(j);
    a(r, cl) = el;
    a(r, cl + 1) = 1.0;
    a(r, cr) = -1.0;
    a(r, cr + 1) = -er;
    rhs(r) = up[j].front() - up[j - 1].back();
    a(r + 1, cl) = rl * (-wl * el);
    a(r + 1, cl + 1) = rl * wl;
    a(r + 1, cr) = -rr * (-wr);
    a(r + 1, cr + 1) = -rr * wr * er;
    rhs(r + 1) = rr * dup[j].front() - rl * dup[j - 1].back();
  }
  {
    const auto c = static_cast<Eigen::Index>(2 * (ne - 1));
    a(n2 - 1, c) = std::exp(-w_of(ne - 1));
    a(n2 - 1, c + 1) = 1.0;
    rhs(n2 - 1) = -up[ne - 1].back();
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularDenominator, "edge system singular");
  const Eigen::VectorXcd ab = lu.solve(rhs);

  SchrodingerResolventSolution sol;
  sol.u = ChainFunction(1, grids);
  sol.coeffs.resize(ne);
  for (std::size_t j = 0; j < ne; ++j) {
    const double w = w_of(j);
    const double rho = cfg.density(j);
    const cplx aj = ab(static_cast<Eigen::Index>(2 * j));
    const cplx bj = ab(static_cast<Eigen::Index>(2 * j + 1));
    for (std::size_t i = 0; i < grids[j].size(); ++i) {
      const double t = grids[j][i] - static_cast<double>(j);
      sol.u.at(j, i) = aj * std::exp(-w * t) + bj * std::exp(-w * (1.0 - t)) + up[j][i];
    }
    const double e = std::exp(-w);
    sol.coeffs[j] = Vec2C(aj + bj * e + up[j].front(), rho * (-w * aj + w * e * bj + dup[j].front()));
  }
  return sol;
}

SchrodingerResolventSolution solve_schrodinger(const ChainConfig& cfg, double beta,
                                               const std::vector<std::vector<double>>& grids,
                                               const ScalarSource& g) {
  validate_config(cfg);
  if (beta == 0.0) throw Error(ErrorCode::ZeroBeta, "beta must be nonzero");
  if (grids.size() != cfg.n_edges()) throw Error(ErrorCode::GridMismatch, "grid count differs from edge count");
  SchrodingerResolventSolution sol =
      beta > 0.0 ? solve_schrodinger_pos(cfg, beta, grids, g) : solve_schrodinger_neg(cfg, beta, grids, g);
  sol.residual = schrodinger_residual(cfg, beta, sol.u, g);
  if (!(sol.residual <= 5e-2))
    throw Error(ErrorCode::SignConventionMismatch, "closed-form solution fails its residual check");
  return sol;
}

}  // namespace

WaveResolventSolution wave_resolvent(const ChainConfig& cfg, double beta, const VectorSource& g,
                                     std::size_t points_per_edge) {
  return solve_wave(cfg, beta, uniform_grids(cfg.n_edges(), points_per_edge), g);
}

WaveResolventSolution wave_resolvent(const ChainConfig& cfg, double beta, const ChainFunction& g) {
  if (g.arity() != 2) throw Error(ErrorCode::ArityMismatch, "wave source must be a 2-vector field");
  g.validate();
  return solve_wave(cfg, beta, g.grids(), [&g](std::size_t j, double x) {
    return Vec2C(detail::interpolate(g, j, x, 0), detail::interpolate(g, j, x, 1));
  });
}

double wave_residual(const ChainConfig& cfg, double beta, const WaveResolventSolution& sol,
                     const VectorSource& g) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < sol.w.n_edges(); ++j) {
    const auto x = sol.w.grid(j);
    const double rho = cfg.density(j);
    const auto w1 = sol.w.component(j, 0);
    const auto w2 = sol.w.component(j, 1);
    const auto d1 = detail::derivative5(x, w1, 1);
    const auto d2 = detail::derivative5(x, w2, 1);
    const auto wq = quadrature_weights(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Vec2C gi = g(j, x[i]);
      const cplx r1 = kI * beta * w1[i] - d2[i] - gi(0);
      const cplx r2 = kI * beta * w2[i] - rho * d1[i] - gi(1);
      num += wq[i] * (std::norm(r1) + std::norm(r2) / rho);
      den += wq[i] * (std::norm(gi(0)) + std::norm(gi(1)) / rho);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

SchrodingerResolventSolution schrodinger_resolvent(const ChainConfig& cfg, double beta,
                                                   const ScalarSource& g,
                                                   std::size_t points_per_edge) {
  return solve_schrodinger(cfg, beta, uniform_grids(cfg.n_edges(), points_per_edge), g);
}

SchrodingerResolventSolution schrodinger_resolvent(const ChainConfig& cfg, double beta,
                                                   const ChainFunction& g) {
  if (g.arity() != 1) throw Error(ErrorCode::ArityMismatch, "Schrodinger source must be scalar");
  g.validate();
  return solve_schrodinger(cfg, beta, g.grids(),
                           [&g](std::size_t j, double x) { return detail::interpolate(g, j, x, 0); });
}

double schrodinger_residual(const ChainConfig& cfg, double beta, const ChainFunction& u,
                            const ScalarSource& g) {
  double num = 0.0, un = 0.0, gn = 0.0;
  for (std::size_t j = 0; j < u.n_edges(); ++j) {
    const auto x = u.grid(j);
    const double rho = cfg.density(j);
    const auto v = u.component(j, 0);
    const auto d2 = detail::derivative5(x, v, 2);
    const auto wq = quadrature_weights(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const cplx gi = g(j, x[i]);
      num += wq[i] * std::norm(kI * beta * v[i] + kI * rho * d2[i] - gi);
      un += wq[i] * std::norm(v[i]);
      gn += wq[i] * std::norm(gi);
    }
  }
  const double scale = std::abs(beta) * std::sqrt(un) + std::sqrt(gn);
  return scale > 0.0 ? std::sqrt(num) / scale : std::sqrt(num);
}

std::size_t resolved_points(const ChainConfig& cfg, double frequency, double cells_per_period,
                            std::size_t minimum) {
  double cmin = cfg.speed(0);
  for (std::size_t j = 1; j < cfg.n_edges(); ++j) cmin = std::min(cmin, cfg.speed(j));
  const double k = std::abs(frequency) / cmin;
  auto cells = static_cast<std::size_t>(std::ceil(cells_per_period * k / (2.0 * std::numbers::pi)));
  std::size_t points = std::max(minimum, cells + 1);
  if (points % 2 == 0) ++points;
  return points;
}

namespace {

struct ProbeTerms {
  std::vector<std::array<cplx, 4>> low;       // per edge and component
  std::vector<std::array<cplx, 4>> carrier;   // (+ const, + cos, - const, - cos)
};

ProbeTerms make_terms(std::size_t slots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ProbeTerms t;
  t.low.resize(slots);
  t.carrier.resize(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    for (std::size_t k = 0; k < 4; ++k)
      t.low[s][k] = cplx(nd(rng), nd(rng)) / (1.0 + static_cast<double>(k));
    for (std::size_t k = 0; k < 4; ++k) t.carrier[s][k] = cplx(nd(rng), nd(rng));
  }
  return t;
}

cplx eval_terms(const ProbeTerms& t, std::size_t slot, double tt, double k) {
  const auto& lo = t.low[slot];
  const auto& ca = t.carrier[slot];
  const double pi = std::numbers::pi;
  cplx v = 0.0;
  for (std::size_t q = 0; q < 4; ++q) v += lo[q] * std::cos(static_cast<double>(q) * pi * tt);
  const double env = std::cos(pi * tt);
  const cplx ep = std::polar(1.0, k * tt);
  v += ep * (ca[0] + ca[1] * env) + std::conj(ep) * (ca[2] + ca[3] * env);
  return v;
}

}  // namespace

VectorSource probe_vector(const ChainConfig& cfg, double beta, std::uint64_t seed) {
  const std::size_t ne = cfg.n_edges();
  auto terms = std::make_shared<ProbeTerms>(make_terms(2 * ne, seed));
  std::vector<double> k(ne);
  for (std::size_t j = 0; j < ne; ++j) k[j] = beta / cfg.speed(j);
  return [terms, k](std::size_t j, double x) {
    const double t = x - static_cast<double>(j);
    return Vec2C(eval_terms(*terms, 2 * j, t, k[j]), eval_terms(*terms, 2 * j + 1, t, k[j]));
  };
}

ScalarSource probe_scalar(const ChainConfig& cfg, double beta, std::uint64_t seed) {
  const std::size_t ne = cfg.n_edges();
  auto terms = std::make_shared<ProbeTerms>(make_terms(ne, seed));
  std::vector<double> k(ne);
  for (std::size_t j = 0; j < ne; ++j) k[j] = std::sqrt(std::abs(beta) / cfg.density(j));
  return [terms, k](std::size_t j, double x) {
    return eval_terms(*terms, j, x - static_cast<double>(j), k[j]);
  };
}

std::vector<NormSample> wave_resolvent_norm_scan(const ChainConfig& cfg,
                                                 const std::vector<double>& betas, int probes,
                                                 std::uint64_t seed, unsigned jobs) {
  validate_config(cfg);
  if (probes < 1) throw Error(ErrorCode::InvalidArgument, "probes must be at least 1");
  std::vector<NormSample> out(betas.size());
  parallel_for(betas.size(), jobs, [&](std::size_t b) {
    const double beta = betas[b];
    const std::size_t points = resolved_points(cfg, beta, 16.0, 201);
    const auto np = static_cast<std::size_t>(probes);
    std::vector<ChainFunction> src, res;
    NormSample s{beta, 0.0, probes, 0.0};
    const auto grids = uniform_grids(cfg.n_edges(), points);
    for (std::size_t p = 0; p < np; ++p) {
      const VectorSource g = probe_vector(cfg, beta, seed + p);
      WaveResolventSolution sol = solve_wave(cfg, beta, grids, g);
      s.residual_max = std::max(s.residual_max, wave_residual(cfg, beta, sol, g));
      src.push_back(sample_vector(grids, g));
      res.push_back(std::move(sol.w));
    }
    Eigen::MatrixXcd gs(np, np), gw(np, np);
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t q = 0; q < np; ++q) {
        cplx a, c;
        wave_inner(cfg, src[q], src[p], &a);
        wave_inner(cfg, res[q], res[p], &c);
        gs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = a;
        gw(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = c;
      }
    s.estimate = detail::span_gain(gs, gw);
    out[b] = s;
  });
  return out;
}

std::vector<NormSample> schrodinger_norm_scan(const ChainConfig& cfg,
                                              const std::vector<double>& betas, int probes,
                                              std::uint64_t seed, unsigned jobs) {
  validate_config(cfg);
  if (probes < 1) throw Error(ErrorCode::InvalidArgument, "probes must be at least 1");
  for (double b : betas)
    if (b == 0.0) throw Error(ErrorCode::ZeroBeta, "beta must be nonzero");
  std::vector<NormSample> out(betas.size());
  parallel_for(betas.size(), jobs, [&](std::size_t b) {
    const double beta = betas[b];
    const std::size_t points = resolved_points(cfg, std::sqrt(std::abs(beta)), 16.0, 201);
    const auto np = static_cast<std::size_t>(probes);
    std::vector<ChainFunction> src, res;
    NormSample s{beta, 0.0, probes, 0.0};
    const auto grids = uniform_grids(cfg.n_edges(), points);
    for (std::size_t p = 0; p < np; ++p) {
      const ScalarSource g = probe_scalar(cfg, beta, seed + p);
      SchrodingerResolventSolution sol = solve_schrodinger(cfg, beta, grids, g);
      s.residual_max = std::max(s.residual_max, sol.residual);
      src.push_back(sample_scalar(grids, g));
      res.push_back(std::move(sol.u));
    }
    Eigen::MatrixXcd gs(np, np), gu(np, np);
    for (std::size_t p = 0; p < np; ++p)
      for (std::size_t q = 0; q < np; ++q) {
        cplx a, c;
        scalar_inner(src[q], src[p], &a);
        scalar_inner(res[q], res[p], &c);
        gs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = a;
        gu(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = c;
      }
    s.estimate = detail::span_gain(gs, gu);
    out[b] = s;
  });
  return out;
}

void write_csv(std::ostream& os, const std::vector<NormSample>& samples) {
  os.precision(17);
  os << "beta,norm_estimate,probes,residual_max\n";
  for (const auto& s : samples)
    os << s.beta << ',' << s.estimate << ',' << s.probes << ',' << s.residual_max << '\n';
}

}  // namespace stringchain
