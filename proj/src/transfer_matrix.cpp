#include "stringchain/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stringchain/parallel.hpp"

namespace stringchain {

namespace {

double checked_speed(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw Error(ErrorCode::NonPositiveDensity, "density must be positive and finite");
  return std::sqrt(rho);
}

constexpr cplx kI{0.0, 1.0};

}  // namespace

void cosh_sinh(cplx z, cplx& ch, cplx& sh) {
  const double x = z.real();
  const double y = z.imag();
  if (x == 0.0) {
    ch = cplx(std::cos(y), 0.0);
    sh = cplx(0.0, std::sin(y));
    return;
  }
  if (std::abs(x) < 700.0) {
    ch = std::cosh(z);
    sh = std::sinh(z);
    return;
  }
  // e^{-|x|} is below double resolution relative to e^{|x|}.
  const double e = std::exp(std::abs(x) - std::log(2.0));
  const double s = x > 0.0 ? 1.0 : -1.0;
  const double c = std::cos(y);
  const double sn = std::sin(y);
  ch = cplx(e * c, s * e * sn);
  sh = cplx(s * e * c, e * sn);
}

Mat2C exp_osc(double rho, double beta, double x) {
  const double c = checked_speed(rho);
  const double t = beta * x / c;
  const double cs = std::cos(t);
  const double sn = std::sin(t);
  Mat2C m;
  m << cs, kI * sn / c, kI * c * sn, cs;
  return m;
}

Mat2C exp_hyp(double rho, cplx lambda, double x) {
  const double c = checked_speed(rho);
  cplx ch, sh;
  cosh_sinh(lambda * x / c, ch, sh);
  Mat2C m;
  m << ch, sh / c, c * sh, ch;
  return m;
}

Mat2C interior_product(const ChainConfig& cfg, cplx lambda, std::size_t j) {
  Mat2C p = Mat2C::Identity();
  // Descending index: the factor for edge k = j-1 ends up leftmost.
  for (std::size_t k = 1; k < j; ++k) p = exp_hyp(cfg.density(k), lambda, 1.0) * p;
  return p;
}

namespace {

Eigen::RowVector2cd left_row(const ChainConfig& cfg, cplx lambda, LeftRow row) {
  const Mat2C back = exp_hyp(cfg.density(0), lambda, -1.0);
  if (row == LeftRow::Feedback) return Eigen::RowVector2cd(1.0, -1.0) * back;
  return Eigen::RowVector2cd(0.0, 1.0) * back;
}

}  // namespace

BoundaryMatrices boundary_matrices(const ChainConfig& cfg, cplx lambda, LeftRow row) {
  validate_config(cfg);
  const std::size_t n = cfg.n_edges();
  const Eigen::RowVector2cd r1 = left_row(cfg, lambda, row);
  Mat2C p = Mat2C::Identity();
  if (n >= 2) p = exp_hyp(cfg.density(n - 1), lambda, 1.0) * interior_product(cfg, lambda, n - 1);

  BoundaryMatrices out;
  out.h.row(0) = r1;
  out.h.row(1) = p.row(0);
  out.h_tilde.row(0) = r1;
  out.h_tilde.row(1) = p.row(1);
  return out;
}

DetPair det_pair(const ChainConfig& cfg, cplx lambda, LeftRow row) {
  validate_config(cfg);
  DetPair dp;
  {
    const double c = cfg.speed(0);
    cplx ch, sh;
    cosh_sinh(lambda / c, ch, sh);
    if (row == LeftRow::Feedback) {
      dp.d = ch + sh / c;
      dp.d_tilde = ch + c * sh;
    } else {
      dp.d = -ch;
      dp.d_tilde = -c * sh;
    }
  }
  for (std::size_t k = 1; k < cfg.n_edges(); ++k) {
    const double c = cfg.speed(k);
    cplx ch, sh;
    cosh_sinh(lambda / c, ch, sh);
    const cplx d = ch * dp.d + sh / c * dp.d_tilde;
    const cplx dt = c * sh * dp.d + ch * dp.d_tilde;
    dp.d = d;
    dp.d_tilde = dt;
  }
  return dp;
}

double det_lower_bound_analytic(const ChainConfig& cfg) {
  validate_config(cfg);
  // On the imaginary axis every edge maps (D, D~) -> (cos D + i sin D~/c,
  // i c sin D + cos D~) starting from (1, 1). |D'|^2 is the quadratic form of
  // [[|D|^2, Im(D conj D~)/c], [., |D~|^2/rho]] at the unit vector (cos, sin);
  // that matrix has determinant Re(D conj D~)^2 / rho = 1/rho and trace
  // bounded by a^2 + b^2/rho where a >= |D|, b >= |D~| for every beta.
  double a = 1.0;
  double b = 1.0;
  const std::size_t n = cfg.n_edges();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double rho = cfg.density(k);
    const double a_next = std::sqrt(a * a + b * b / rho);
    const double b_next = std::sqrt(rho * a * a + b * b);
    a = a_next;
    b = b_next;
  }
  const double rho = cfg.density(n - 1);
  const double det = 1.0 / rho;
  const double trace = a * a + b * b / rho;
  const double disc = std::max(0.0, trace * trace - 4.0 * det);
  const double mu_min = 2.0 * det / (trace + std::sqrt(disc));
  return std::sqrt(mu_min);
}

DetBound det_lower_bound(const ChainConfig& cfg, const BetaGrid& scan, unsigned jobs) {
  validate_config(cfg);
  const std::size_t count = scan.count();
  const std::size_t chunks = std::min<std::size_t>(count, 64);
  std::vector<double> best(chunks, std::numeric_limits<double>::infinity());
  std::vector<double> where(chunks, 0.0);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t lo = count * c / chunks;
    const std::size_t hi = count * (c + 1) / chunks;
    for (std::size_t i = lo; i < hi; ++i) {
      const double beta = scan.at(i);
      const double v = std::abs(det_pair(cfg, cplx(0.0, beta)).d);
      if (v < best[c]) {
        best[c] = v;
        where[c] = beta;
      }
    }
  });
  DetBound out;
  out.analytic = det_lower_bound_analytic(cfg);
  const auto it = std::min_element(best.begin(), best.end());
  out.numeric = *it;
  out.argmin_beta = where[static_cast<std::size_t>(it - best.begin())];
  return out;
}

double transfer_positivity_bound(const ChainConfig& cfg, double gamma) {
  validate_config(cfg);
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  const double c0 = cfg.speed(0);
  double k = 0.5 * c0 * std::sinh(2.0 * gamma / c0);
  for (std::size_t j = 1; j < cfg.n_edges(); ++j) k *= std::cosh(2.0 * gamma / cfg.speed(j));
  return k;
}

Mat2C schrodinger_step(double rho, cplx mu) {
  checked_speed(rho);
  const cplx w2 = mu / rho;
  cplx cw, sinc;
  if (std::abs(w2) < 1e-8) {
    cw = 1.0 - w2 / 2.0 + w2 * w2 / 24.0;
    sinc = 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  } else {
    const cplx w = std::sqrt(w2);
    cw = std::cos(w);
    sinc = std::sin(w) / w;
  }
  Mat2C m;
  m << cw, sinc / rho, -mu * sinc, cw;
  return m;
}

Mat2C schrodinger_step(double rho, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::NonPositiveBeta, "beta must be positive");
  return schrodinger_step(rho, cplx(beta, 0.0));
}

}  // namespace stringchain
