#include "stringchain/timesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace stringchain {

namespace {

struct Grid1D {
  std::size_t m = 0;      // points per edge
  std::size_t n = 0;      // free nodes, x = N excluded
  double h = 0.0;
  std::vector<double> mass;
  std::vector<double> kdiag;
  std::vector<double> koff;
};

Grid1D make_grid(const ChainConfig& cfg, std::size_t m) {
  validate_config(cfg);
  if (m < 5) throw Error(ErrorCode::GridMismatch, "need at least 5 points per edge");
  Grid1D g;
  g.m = m;
  g.n = cfg.n_edges() * (m - 1);
  g.h = 1.0 / static_cast<double>(m - 1);
  g.mass.assign(g.n, g.h);
  g.mass[0] = 0.5 * g.h;
  g.kdiag.assign(g.n, 0.0);
  g.koff.assign(g.n - 1, 0.0);
  for (std::size_t c = 0; c < g.n; ++c) {
    const double k = cfg.density(c / (m - 1)) / g.h;
    g.kdiag[c] += k;
    if (c + 1 < g.n) {
      g.kdiag[c + 1] += k;
      g.koff[c] -= k;
    }
  }
  return g;
}

template <class T>
T apply_k(const Grid1D& g, const std::vector<T>& u, std::size_t i) {
  T s = g.kdiag[i] * u[i];
  if (i + 1 < g.n) s += g.koff[i] * u[i + 1];
  if (i > 0) s += g.koff[i - 1] * u[i - 1];
  return s;
}

template <class T>
T quad_k(const Grid1D& g, const std::vector<T>& a, const std::vector<T>& b) {
  T s{};
  for (std::size_t i = 0; i < g.n; ++i) s += a[i] * apply_k(g, b, i);
  return s;
}

void check_grid(const ChainFunction& f, const Grid1D& g, std::size_t n_edges) {
  const ChainFunction ref = ChainFunction::uniform(n_edges, g.m, 1);
  if (f.n_edges() != n_edges || !f.same_grids(ref, 1e-12))
    throw Error(ErrorCode::GridMismatch, "state must be sampled on the simulation grid");
}

std::vector<double> to_nodes_real(const ChainFunction& f, const Grid1D& g) {
  std::vector<double> out(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const cplx v = f.at(i / (g.m - 1), i % (g.m - 1));
    if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real())))
      throw Error(ErrorCode::InvalidArgument, "wave simulation expects real data");
    out[i] = v.real();
  }
  return out;
}

template <class T>
ChainFunction from_nodes(const std::vector<T>& u, const Grid1D& g, std::size_t n_edges) {
  ChainFunction f = ChainFunction::uniform(n_edges, g.m, 1);
  for (std::size_t j = 0; j < n_edges; ++j)
    for (std::size_t i = 0; i < g.m; ++i) {
      const std::size_t node = j * (g.m - 1) + i;
      f.at(j, i) = node < g.n ? cplx(u[node]) : cplx(0.0, 0.0);
    }
  return f;
}

}  // namespace

WaveRun simulate_wave(const ChainConfig& cfg, const WaveState& init, const SimOptions& opts,
                      const WaveDrive& drive) {
  const Grid1D g = make_grid(cfg, opts.points_per_edge);
  if (!(opts.cfl > 0.0) || opts.cfl > 1.0) throw Error(ErrorCode::CflViolation, "cfl must lie in (0, 1]");
  if (!(opts.T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  if (drive.mode == WaveMode::Forced && !drive.input)
    throw Error(ErrorCode::InvalidArgument, "forced mode needs an input signal");
  check_grid(init.u, g, cfg.n_edges());
  check_grid(init.v, g, cfg.n_edges());
  init.validate(1e-8);

  double cmax = 0.0;
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) cmax = std::max(cmax, cfg.speed(j));
  const double dt = opts.cfl * g.h / cmax;
  const auto steps = static_cast<std::size_t>(std::ceil(opts.T / dt - 1e-9));
  const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);
  const double damp = drive.mode == WaveMode::Damped ? 1.0 : 0.0;
  auto force = [&](double t) { return drive.mode == WaveMode::Forced ? -drive.input(t) : 0.0; };

  std::vector<double> um = to_nodes_real(init.u, g);
  const std::vector<double> v0 = to_nodes_real(init.v, g);
  std::vector<double> uc(g.n), un(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    double acc = -apply_k(g, um, i);
    if (i == 0) acc += -damp * v0[0] + force(0.0);
    uc[i] = um[i] + dt * v0[i] + 0.5 * dt * dt * acc / g.mass[i];
  }

  auto energy = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
    double kin = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      const double d = (hi[i] - lo[i]) / dt;
      kin += g.mass[i] * d * d;
    }
    return 0.5 * kin + 0.5 * quad_k(g, hi, lo);
  };

  WaveRun run;
  run.dt = dt;
  run.steps = steps;
  double e_prev = energy(um, uc);
  const double e_first = e_prev;
  double flux = 0.0;
  run.trace.times.push_back(0.5 * dt);
  run.trace.energies.push_back(e_prev);
  run.trace.boundary_flux.push_back(0.0);

  const double m0 = g.mass[0];
  const double diag0 = m0 / (dt * dt) + damp / (2.0 * dt);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    for (std::size_t i = 1; i < g.n; ++i)
      un[i] = 2.0 * uc[i] - um[i] - dt * dt * apply_k(g, uc, i) / g.mass[i];
    const double f = force(t);
    un[0] = (m0 * (2.0 * uc[0] - um[0]) / (dt * dt) + damp * um[0] / (2.0 * dt) - apply_k(g, uc, 0) + f) / diag0;
    run.input_energy += dt * f * f;

    const double vb = (un[0] - um[0]) / (2.0 * dt);
    flux += dt * vb * vb;
    const double e = energy(uc, un);
    if (e_first > 0.0) run.max_energy_rise = std::max(run.max_energy_rise, (e - e_prev) / e_first);
    e_prev = e;
    if (n % stride == 0 || n == steps) {
      run.trace.times.push_back(t + 0.5 * dt);
      run.trace.energies.push_back(e);
      run.trace.boundary_flux.push_back(flux);
    }
    if (n == steps) {
      std::vector<double> vel(g.n);
      for (std::size_t i = 0; i < g.n; ++i) vel[i] = (un[i] - um[i]) / (2.0 * dt);
      run.final_state.u = from_nodes(uc, g, cfg.n_edges());
      run.final_state.v = from_nodes(vel, g, cfg.n_edges());
    }
    std::swap(um, uc);
    std::swap(uc, un);
  }
  return run;
}

SchrodingerRun simulate_schrodinger(const ChainConfig& cfg, const ChainFunction& u0,
                                    const SimOptions& opts) {
  const Grid1D g = make_grid(cfg, opts.points_per_edge);
  if (u0.arity() != 1) throw Error(ErrorCode::ArityMismatch, "initial data must be scalar");
  check_grid(u0, g, cfg.n_edges());
  if (!(opts.dt > 0.0) || !(opts.T > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt and T must be positive");
  if (std::abs(u0.at(cfg.n_edges() - 1, g.m - 1)) > 1e-8)
    throw Error(ErrorCode::InvalidArgument, "initial data must vanish at x = N");

  const double dt = opts.dt;
  // One step solves (M + theta h (D - i K)) u' = (M - (1 - theta) h (D - i K)) u.
  struct Stepper {
    double theta, h;
    std::vector<cplx> piv, mult, up;
  };
  auto factor = [&](double theta, double h) {
    const cplx a(0.0, -theta * h);
    Stepper st{theta, h, std::vector<cplx>(g.n), std::vector<cplx>(g.n, 0.0), std::vector<cplx>(g.n, 0.0)};
    std::vector<cplx> diag(g.n), low(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
      diag[i] = g.mass[i] + a * g.kdiag[i];
      if (i + 1 < g.n) st.up[i] = a * g.koff[i];
      if (i > 0) low[i] = a * g.koff[i - 1];
    }
    diag[0] += theta * h;
    st.piv[0] = diag[0];
    for (std::size_t i = 1; i < g.n; ++i) {
      if (std::abs(st.piv[i - 1]) < 1e-300) throw Error(ErrorCode::LinearSolveFailure, "zero pivot");
      st.mult[i] = low[i] / st.piv[i - 1];
      st.piv[i] = diag[i] - st.mult[i] * st.up[i - 1];
    }
    if (std::abs(st.piv[g.n - 1]) < 1e-300) throw Error(ErrorCode::LinearSolveFailure, "zero pivot");
    return st;
  };
  const Stepper crank = factor(0.5, dt);
  const Stepper euler = factor(1.0, 0.5 * dt);

  std::vector<cplx> u(g.n), rhs(g.n);
  for (std::size_t i = 0; i < g.n; ++i) u[i] = u0.at(i / (g.m - 1), i % (g.m - 1));

  double flux = 0.0;
  auto advance = [&](const Stepper& st) {
    const double explicit_part = (1.0 - st.theta) * st.h;
    const cplx b(0.0, explicit_part);
    for (std::size_t i = 0; i < g.n; ++i) rhs[i] = g.mass[i] * u[i] + b * apply_k(g, u, i);
    rhs[0] -= explicit_part * u[0];
    const cplx old0 = u[0];
    for (std::size_t i = 1; i < g.n; ++i) rhs[i] -= st.mult[i] * rhs[i - 1];
    u[g.n - 1] = rhs[g.n - 1] / st.piv[g.n - 1];
    for (std::size_t i = g.n - 1; i-- > 0;) u[i] = (rhs[i] - st.up[i] * u[i + 1]) / st.piv[i];
    const cplx boundary = st.theta * u[0] + (1.0 - st.theta) * old0;
    flux += st.h * std::norm(boundary);
  };

  auto energy = [&] {
    double e = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) e += g.mass[i] * std::norm(u[i]);
    return 0.5 * e;
  };

  SchrodingerRun run;
  const auto steps = static_cast<std::size_t>(std::ceil(opts.T / dt - 1e-9));
  const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);
  run.trace.times.push_back(0.0);
  run.trace.energies.push_back(energy());
  run.trace.boundary_flux.push_back(0.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    if (n <= opts.startup_steps) {
      advance(euler);
      advance(euler);
    } else {
      advance(crank);
    }
    if (n % stride == 0 || n == steps) {
      run.trace.times.push_back(static_cast<double>(n) * dt);
      run.trace.energies.push_back(energy());
      run.trace.boundary_flux.push_back(flux);
    }
  }
  run.final_state = from_nodes(u, g, cfg.n_edges());
  return run;
}

double fit_decay_rate(const EnergyTrace& trace) {
  const auto& t = trace.times;
  const auto& e = trace.energies;
  if (t.size() != e.size() || t.size() < 10) throw Error(ErrorCode::InsufficientDecay, "too few samples");
  const double floor = 1e-12 * e.front();
  double t_eff = t.front();
  std::size_t alive = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (e[i] > floor) {
      t_eff = t[i];
      ++alive;
    }
  if (alive < 10) throw Error(ErrorCode::InsufficientDecay, "too few samples above the floor");
  const double lo = 0.2 * t_eff, hi = 0.9 * t_eff;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < lo || t[i] > hi || !(e[i] > floor)) continue;
    const double y = std::log(e[i]);
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++n;
  }
  if (n < 10) throw Error(ErrorCode::InsufficientDecay, "too few samples in the fit window");
  const double dn = static_cast<double>(n);
  const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  const double rate = -slope;
  if (!(rate > 1e-8)) throw Error(ErrorCode::InsufficientDecay, "energy does not decay");
  return rate;
}

ChainFunction sample_on_sim_grid(const ChainConfig& cfg, std::size_t points_per_edge,
                                 const ScalarSource& fn) {
  validate_config(cfg);
  return sample_scalar(ChainFunction::uniform(cfg.n_edges(), points_per_edge, 1).grids(), fn);
}

WaveState rest_state(const ChainConfig& cfg, std::size_t points_per_edge) {
  const auto zero = [](std::size_t, double) { return cplx(0.0); };
  return WaveState{sample_on_sim_grid(cfg, points_per_edge, zero),
                   sample_on_sim_grid(cfg, points_per_edge, zero)};
}

WaveState bump_state(const ChainConfig& cfg, std::size_t points_per_edge, double center,
                     double width) {
  const auto bump = [=](std::size_t, double x) -> cplx {
    const double r = (x - center) / width;
    if (std::abs(r) >= 1.0) return 0.0;
    return std::pow(std::cos(0.5 * std::numbers::pi * r), 6);
  };
  WaveState s;
  s.u = sample_on_sim_grid(cfg, points_per_edge, bump);
  s.v = sample_on_sim_grid(cfg, points_per_edge, [](std::size_t, double) { return cplx(0.0); });
  return s;
}

namespace {

/// (u, rho u') at x = N for the conservative chain, started from (1, 0).
std::vector<Eigen::Vector2d> shoot(const ChainConfig& cfg, double omega) {
  std::vector<Eigen::Vector2d> left(cfg.n_edges() + 1);
  Eigen::Vector2d s(1.0, 0.0);
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) {
    left[j] = s;
    const double c = cfg.speed(j);
    const double k = omega / c;
    Eigen::Matrix2d m;
    m << std::cos(k), std::sin(k) / (omega * c), -omega * c * std::sin(k), std::cos(k);
    s = m * s;
  }
  left.back() = s;
  return left;
}

}  // namespace

double conservative_mode_frequency(const ChainConfig& cfg, int index) {
  validate_config(cfg);
  if (index < 0) throw Error(ErrorCode::InvalidArgument, "mode index must be nonnegative");
  double cmin = cfg.speed(0);
  for (std::size_t j = 1; j < cfg.n_edges(); ++j) cmin = std::min(cmin, cfg.speed(j));
  const double step = 0.01 * cmin;
  double a = 1e-6;
  double fa = shoot(cfg, a).back()(0);
  int found = 0;
  for (int it = 0; it < 1000000; ++it) {
    const double b = a + step;
    const double fb = shoot(cfg, b).back()(0);
    if ((fa < 0.0) != (fb < 0.0)) {
      if (found == index) {
        double lo = a, hi = b, flo = fa;
        for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
          const double mid = 0.5 * (lo + hi);
          const double fm = shoot(cfg, mid).back()(0);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
      ++found;
    }
    a = b;
    fa = fb;
  }
  throw Error(ErrorCode::NoConvergence, "conservative mode not bracketed");
}

WaveState conservative_mode_state(const ChainConfig& cfg, std::size_t points_per_edge, int index) {
  const double omega = conservative_mode_frequency(cfg, index);
  const auto left = shoot(cfg, omega);
  const auto mode = [&](std::size_t j, double x) -> cplx {
    const double c = cfg.speed(j);
    const double k = omega / c;
    const double t = x - static_cast<double>(j);
    return left[j](0) * std::cos(k * t) + left[j](1) * std::sin(k * t) / (omega * c);
  };
  WaveState s;
  s.u = sample_on_sim_grid(cfg, points_per_edge, mode);
  s.u.at(cfg.n_edges() - 1, points_per_edge - 1) = 0.0;
  s.v = sample_on_sim_grid(cfg, points_per_edge, [](std::size_t, double) { return cplx(0.0); });
  return s;
}

}  // namespace stringchain
