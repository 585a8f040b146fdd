#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stringchain/chain.hpp"
#include "stringchain/oracle.hpp"
#include "stringchain/parallel.hpp"
#include "stringchain/resolvent.hpp"
#include "stringchain/spectrum.hpp"
#include "stringchain/timesim.hpp"
#include "stringchain/transfer_function.hpp"
#include "stringchain/transfer_matrix.hpp"

using namespace stringchain;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLn3 = std::log(3.0);

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ChainConfig random_config(std::mt19937_64& rng, int n_min, int n_max) {
  std::uniform_int_distribution<int> n(n_min, n_max);
  std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
  ChainConfig cfg;
  const int edges = n(rng);
  for (int j = 0; j < edges; ++j) cfg.densities.push_back(std::exp(log_rho(rng)));
  return cfg;
}

double rel_l2(const ChainFunction& a, const ChainFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < b.n_edges(); ++j) {
    const auto w = quadrature_weights(b.grid(j));
    for (std::size_t i = 0; i < w.size(); ++i)
      for (int c = 0; c < b.arity(); ++c) {
        num += w[i] * std::norm(a.at(j, i, c) - b.at(j, i, c));
        den += w[i] * std::norm(b.at(j, i, c));
      }
  }
  return std::sqrt(num / den);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return out;
}

double nearest(const std::vector<cplx>& set, cplx z) {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& s : set) best = std::min(best, std::abs(s - z));
  return best;
}

/// Energy left at time t in a single matched string (rho = 1) started from
/// displacement f with zero velocity: the left-going half is absorbed at x = 0,
/// the right-going half reflects at x = 1 and is absorbed on its return.
double dalembert_energy(const std::function<double(double)>& fprime, double t) {
  const int n = 20000;
  auto alive = [&](double s) {
    // left-going half started at s reaches x = 0 at time s; right-going at 2 - s
    double e = 0.0;
    if (t < s) e += 1.0;
    if (t < 2.0 - s) e += 1.0;
    return e;
  };
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = (i + 0.5) / n;
    e += 0.25 * fprime(s) * fprime(s) * alive(s) / n;
  }
  return e;
}

Outcome c1_determinant_identity() {
  Outcome o;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> beta(-200.0, 200.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ChainConfig cfg = random_config(rng, 1, 6);
    worst = std::max(worst, std::abs(det_pair(cfg, cplx(0.0, beta(rng))).cross() - 1.0));
  }
  o.check(worst <= 1e-9, "max |Re(D conj Dt) - 1| = " + fmt(worst));
  o.note("max dev " + fmt(worst));
  return o;
}

Outcome c2_unimodularity() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> beta(-50.0, 50.0), re(-1.0, 1.0), x(0.0, 1.0);
  double det_err = 0.0, cont_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double rho = std::exp(log_rho(rng)), b = beta(rng), xx = x(rng);
    const cplx lambda(re(rng), beta(rng));
    det_err = std::max(det_err, std::abs(exp_osc(rho, b, xx).determinant() - 1.0));
    det_err = std::max(det_err, std::abs(exp_hyp(rho, lambda, xx).determinant() - 1.0));
    cont_err = std::max(cont_err, (exp_hyp(rho, cplx(0.0, b), xx) - exp_osc(rho, b, xx)).cwiseAbs().maxCoeff());
  }
  o.check(det_err <= 1e-12, "det error " + fmt(det_err));
  o.check(cont_err <= 1e-13, "continuation error " + fmt(cont_err));
  o.note("det " + fmt(det_err) + ", continuation " + fmt(cont_err));
  return o;
}

Outcome c3_axis_gap() {
  Outcome o;
  std::mt19937_64 rng(303);
  double worst_margin = std::numeric_limits<double>::infinity(), worst_gap = worst_margin;
  for (int i = 0; i < 20; ++i) {
    const ChainConfig cfg = random_config(rng, 1, 6);
    const DetBound b = det_lower_bound(cfg, BetaGrid{-200.0, 200.0, 1e-3}, default_jobs());
    worst_gap = std::min(worst_gap, b.numeric);
    worst_margin = std::min(worst_margin, b.numeric - b.analytic);
  }
  o.check(worst_gap > 0.0, "gap not positive");
  o.check(worst_margin >= -1e-9, "numeric below analytic by " + fmt(-worst_margin));
  o.note("min gap " + fmt(worst_gap) + ", min(numeric - analytic) " + fmt(worst_margin));
  return o;
}

Outcome c4_known_roots() {
  Outcome o;
  const EigenSet set = find_eigenvalues(ChainConfig{{0.25}}, Rect{-1.0, 0.0, 0.0, 10.0}, System::Wave);
  // tanh(2 lambda) = -1/2: lambda = (artanh(-1/2) + i k pi) / 2, k = 0 .. 6 in the rectangle
  o.check(set.eigenvalues.size() == 7, "found " + std::to_string(set.eigenvalues.size()) + " roots, expected 7");
  double re_err = 0.0, gap_err = 0.0;
  for (std::size_t k = 0; k < set.eigenvalues.size(); ++k) {
    const cplx z = set.eigenvalues[k].value;
    re_err = std::max(re_err, std::abs(z.real() + kLn3 / 4.0));
    if (k > 0) gap_err = std::max(gap_err, std::abs(z.imag() - set.eigenvalues[k - 1].value.imag() - kPi / 2.0));
  }
  o.check(re_err <= 1e-8, "Re error " + fmt(re_err));
  o.check(gap_err <= 1e-8, "spacing error " + fmt(gap_err));
  const EigenSet none = find_eigenvalues(ChainConfig{{1.0}}, Rect{-1.0, 0.0, 0.0, 10.0}, System::Wave);
  o.check(none.eigenvalues.empty(), "rho = 1 returned roots");
  o.note(std::to_string(set.eigenvalues.size()) + " roots, Re err " + fmt(re_err) + ", spacing err " + fmt(gap_err));
  return o;
}

Outcome c5_oracle_eigenvalues() {
  Outcome o;
  const ChainConfig cfg{{1.0, 4.0}};
  const Rect rect{-2.0, 0.0, 0.0, 30.0};
  RootOptions ro;
  ro.jobs = default_jobs();
  const EigenSet set = find_eigenvalues(cfg, rect, System::Wave, ro);
  const auto fd = fd_wave_spectrum(cfg, Rect{-2.5, 0.5, -0.5, 30.5}, 400);
  std::vector<cplx> fd_values, roots;
  for (const auto& e : fd) fd_values.push_back(e.value);
  for (const auto& e : set.eigenvalues) roots.push_back(e.value);
  double worst = 0.0, max_re = -std::numeric_limits<double>::infinity();
  for (const cplx& r : roots) {
    worst = std::max(worst, nearest(fd_values, r));
    max_re = std::max(max_re, r.real());
  }
  int unmatched = 0;
  for (const cplx& f : fd_values)
    if (rect.contains(f, -1e-2) && nearest(roots, f) > 1e-2) ++unmatched;
  o.check(!roots.empty(), "no roots");
  o.check(worst <= 1e-2, "root to fd distance " + fmt(worst));
  o.check(unmatched == 0, std::to_string(unmatched) + " fd eigenvalues without a root");
  o.check(max_re < 0.0, "root with Re >= 0");
  o.note(std::to_string(roots.size()) + " roots, max distance " + fmt(worst) + ", max Re " + fmt(max_re));
  return o;
}

Outcome c6_resolvent_oracle() {
  Outcome o;
  const ChainConfig cfg{{1.0, 4.0, 9.0}};
  const VectorSource g = [](std::size_t j, double x) {
    return Vec2C(cplx(std::cos(3.0 * x) + static_cast<double>(j), 0.5 * std::sin(2.0 * x)),
                 cplx(x * x, -std::cos(x + static_cast<double>(j))));
  };
  double worst_diff = 0.0, worst_res = 0.0;
  for (double beta : {1.0, 10.0, 100.0}) {
    const std::size_t m = 1001;
    const WaveResolventSolution sol = wave_resolvent(cfg, beta, g, m);
    BvpData data;
    data.kind = BvpKind::Wave;
    data.lambda = cplx(0.0, beta);
    data.vector_source = g;
    worst_diff = std::max(worst_diff, rel_l2(sol.w, fd_bvp_richardson(cfg, data, m)));
    const WaveResolventSolution fine = wave_resolvent(cfg, beta, g, 2000);
    worst_res = std::max(worst_res, wave_residual(cfg, beta, fine, g));
  }
  o.check(worst_diff <= 1e-2, "relative L2 difference " + fmt(worst_diff));
  o.check(worst_res <= 1e-3, "self-residual " + fmt(worst_res));
  o.note("max rel diff " + fmt(worst_diff) + ", max residual " + fmt(worst_res));
  return o;
}

Outcome c7_uniform_resolvent() {
  Outcome o;
  const ChainConfig cfg{{1.0, 2.0}};
  const auto betas = log_grid(10.0, 1e4, 40);
  const auto samples = wave_resolvent_norm_scan(cfg, betas, 12, 0, default_jobs());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : samples) {
    lo = std::min(lo, s.estimate);
    hi = std::max(hi, s.estimate);
  }
  o.check(std::isfinite(hi) && hi / lo < 10.0, "sup/inf " + fmt(hi / lo));
  double worst = 1.0;
  int compared = 0;
  for (const auto& s : samples) {
    if (s.beta > 200.0) continue;
    const std::size_t m = resolved_points(cfg, s.beta, 32.0, 201);
    const double ref = fd_resolvent_norm(fd_wave_matrix(cfg, m), s.beta);
    const double ratio = std::max(ref / s.estimate, s.estimate / ref);
    worst = std::max(worst, ratio);
    ++compared;
  }
  o.check(compared > 0, "no oracle comparisons");
  o.check(worst <= 3.0, "probe/fd ratio " + fmt(worst));
  o.note("sup/inf " + fmt(hi / lo) + ", " + std::to_string(compared) + " fd comparisons, worst ratio " + fmt(worst));
  return o;
}

Outcome c8_decay_rate() {
  Outcome o;
  const ChainConfig cfg{{1.0, 4.0}};
  RootOptions ro;
  ro.jobs = default_jobs();
  const EigenSet set = find_eigenvalues(cfg, Rect{-3.0, 0.0, 0.0, 60.0}, System::Wave, ro);
  o.check(set.abscissa.has_value(), "no abscissa");
  const double target = 2.0 * std::abs(set.abscissa.value_or(0.0));
  SimOptions opts;
  opts.points_per_edge = 2000;
  opts.cfl = 0.5;
  opts.T = 40.0;
  opts.record_stride = 20;
  const WaveRun run = simulate_wave(cfg, bump_state(cfg, opts.points_per_edge, 0.5, 0.25), opts);
  const double omega = fit_decay_rate(run.trace);
  const double rel = std::abs(omega - target) / target;
  o.check(rel <= 0.15, "fitted " + fmt(omega) + " vs " + fmt(target));
  o.check(run.max_energy_rise <= 1e-6, "energy rise " + fmt(run.max_energy_rise));
  const auto& tr = run.trace;
  const double lost = tr.energies.front() - tr.energies.back();
  const double balance = std::abs(lost - (tr.boundary_flux.back() - tr.boundary_flux.front())) / lost;
  o.check(balance <= 1e-2, "flux balance " + fmt(balance));
  o.note("omega " + fmt(omega) + " vs 2|abscissa| " + fmt(target) + ", rise " + fmt(run.max_energy_rise) +
         ", balance " + fmt(balance));
  return o;
}

Outcome c9_extinction() {
  Outcome o;
  const ChainConfig cfg{{1.0}};
  SimOptions opts;
  opts.points_per_edge = 2000;
  opts.T = 4.0;
  const double center = 0.5, width = 0.25;
  const WaveRun run = simulate_wave(cfg, bump_state(cfg, opts.points_per_edge, center, width), opts);
  const auto& tr = run.trace;
  const double e0 = tr.energies.front();
  double worst_tail = 0.0, mid = 0.0, mid_t = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (tr.times[i] >= 2.2) worst_tail = std::max(worst_tail, tr.energies[i] / e0);
    if (std::abs(tr.times[i] - 1.0) < std::abs(mid_t - 1.0)) {
      mid_t = tr.times[i];
      mid = tr.energies[i];
    }
  }
  const auto fprime = [&](double x) {
    const double s = (x - center) / width;
    if (std::abs(s) >= 1.0) return 0.0;
    const double c = std::cos(kPi * s / 2.0);
    return -6.0 * std::pow(c, 5) * std::sin(kPi * s / 2.0) * kPi / (2.0 * width);
  };
  const double exact_mid = dalembert_energy(fprime, mid_t) / dalembert_energy(fprime, 0.0);
  const double mid_err = std::abs(mid / e0 - exact_mid);
  o.check(worst_tail <= 1e-6, "E/E0 after 2.2 reaches " + fmt(worst_tail));
  o.check(mid_err <= 1e-3, "E(1)/E0 off the traveling-wave value by " + fmt(mid_err));
  o.note("max E/E0 for t >= 2.2: " + fmt(worst_tail) + ", E(1)/E0 error " + fmt(mid_err));
  return o;
}

Outcome c10_transfer() {
  Outcome o;
  const ChainConfig one{{1.0}};
  double err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const cplx lambda(1.0, -50.0 + k * (100.0 / 99.0));
    err = std::max(err, std::abs(transfer_value(one, lambda) + std::tanh(lambda)));
  }
  o.check(err <= 1e-10, "|H + tanh| " + fmt(err));
  const TransferSup a = transfer_sup_scan(one, 1.0, BetaGrid{-50.0, 50.0, 1e-2}, default_jobs());
  const TransferSup b = transfer_sup_scan(one, 1.0, BetaGrid{-50.0, 50.0, 5e-3}, default_jobs());
  const double change = std::abs(a.sup_abs - b.sup_abs) / b.sup_abs;
  o.check(std::isfinite(a.sup_abs) && change < 1e-2, "sup change " + fmt(change));
  o.check(b.sup_abs <= 1.0 / std::tanh(1.0) + 1e-12, "sup above coth 1");
  const ChainConfig three{{1.0, 4.0, 0.5}};
  double bvp = 0.0;
  for (cplx lambda : {cplx(1.0, 3.0), cplx(0.5, -7.0)}) {
    BvpData data;
    data.kind = BvpKind::Transfer;
    data.lambda = lambda;
    const cplx ref = fd_bvp_richardson(three, data, 1001).at(0, 0, 0);
    bvp = std::max(bvp, std::abs(transfer_value(three, lambda) - ref) / std::abs(ref));
  }
  o.check(bvp <= 5e-3, "oracle difference " + fmt(bvp));
  o.note("tanh err " + fmt(err) + ", sup " + fmt(b.sup_abs) + " (change " + fmt(change) + "), oracle " + fmt(bvp));
  return o;
}

Outcome c11_schrodinger() {
  Outcome o;
  const ChainConfig cfg{{1.0, 4.0}};
  SimOptions opts;
  opts.points_per_edge = 401;
  opts.dt = 1e-3;
  opts.T = 5.0;
  const ChainFunction u0 = sample_on_sim_grid(cfg, opts.points_per_edge, [](std::size_t, double x) {
    return cplx(std::sin(kPi * x / 2.0), 0.0);
  });
  const SchrodingerRun run = simulate_schrodinger(cfg, u0, opts);
  const auto& tr = run.trace;
  bool strict = true;
  for (std::size_t i = 1; i < tr.energies.size(); ++i) strict = strict && tr.energies[i] < tr.energies[i - 1];
  const double lost = tr.energies.front() - tr.energies.back();
  const double balance = std::abs(lost - (tr.boundary_flux.back() - tr.boundary_flux.front())) / lost;
  o.check(strict, "energy not strictly decreasing");
  o.check(balance <= 1e-2, "flux balance " + fmt(balance));

  const auto pos = schrodinger_norm_scan(cfg, log_grid(1e2, 1e4, 9), 8, 0, default_jobs());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : pos) {
    lo = std::min(lo, s.estimate);
    hi = std::max(hi, s.estimate);
  }
  o.check(std::isfinite(hi) && hi <= 10.0 * pos.front().estimate, "beta > 0 ratios grow to " + fmt(hi));
  std::vector<double> neg_betas;
  for (double b : log_grid(1e2, 1e4, 9)) neg_betas.push_back(-b);
  const auto neg = schrodinger_norm_scan(cfg, neg_betas, 8, 0, default_jobs());
  const double margin = 1.01;
  double worst_neg = 0.0;
  for (const auto& s : neg) worst_neg = std::max(worst_neg, s.estimate * std::abs(s.beta));
  o.check(worst_neg <= margin, "beta < 0 ratio times |beta| " + fmt(worst_neg));

  double worst = 0.0;
  struct Case {
    ChainConfig cfg;
    double beta;
    ScalarSource g;
  };
  const std::vector<Case> cases{
      {ChainConfig{{1.0}}, 25.0, [](std::size_t, double) { return cplx(1.0, 0.0); }},
      {cfg, 100.0, [](std::size_t j, double x) { return cplx(std::cos(2.0 * x), static_cast<double>(j) + x); }}};
  for (const auto& c : cases) {
    const std::size_t m = 1001;
    const auto sol = schrodinger_resolvent(c.cfg, c.beta, c.g, m);
    BvpData data;
    data.kind = BvpKind::Schrodinger;
    data.lambda = cplx(0.0, c.beta);
    data.scalar_source = c.g;
    worst = std::max(worst, rel_l2(sol.u, fd_bvp_richardson(c.cfg, data, m)));
  }
  o.check(worst <= 1e-2, "closed form vs oracle " + fmt(worst));
  o.note("balance " + fmt(balance) + ", beta>0 ratios [" + fmt(lo) + ", " + fmt(hi) + "], max |beta| ratio (beta<0) " +
         fmt(worst_neg) + ", oracle " + fmt(worst));
  return o;
}

Outcome c12_io_ratios() {
  Outcome o;
  const ChainConfig cfg{{1.0}};
  const auto v = [](double t) { return std::sin(2.0 * kPi * t); };
  SimOptions coarse;
  coarse.points_per_edge = 1000;
  coarse.cfl = 0.5;
  SimOptions fine = coarse;
  fine.cfl = 0.25;
  const double a = admissibility_ratio(cfg, v, 4.0, coarse);
  const double b = admissibility_ratio(cfg, v, 4.0, fine);
  const double change = std::abs(a - b) / b;
  o.check(std::isfinite(a) && std::isfinite(b) && change <= 5e-2, "admissibility change " + fmt(change));

  const double T = std::max(4.0, round_trip_time(cfg));
  const double mode = observability_ratio(cfg, conservative_mode_state(cfg, 1000), T, coarse);
  o.check(mode > 0.1, "mode observability " + fmt(mode));
  const double far = observability_ratio(cfg, bump_state(cfg, 1000, 0.85, 0.1), 0.5, coarse);
  o.check(far < 1e-3, "far-data observability " + fmt(far));
  o.note("admissibility " + fmt(a) + "/" + fmt(b) + ", mode " + fmt(mode) + ", far " + fmt(far));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "determinant_identity", 1.0, c1_determinant_identity},
      {2, "unimodularity_and_continuation", 1.0, c2_unimodularity},
      {3, "imaginary_axis_gap", 30.0, c3_axis_gap},
      {4, "known_root_reproduction", 10.0, c4_known_roots},
      {5, "oracle_eigenvalue_agreement", 60.0, c5_oracle_eigenvalues},
      {6, "resolvent_closed_form_vs_oracle", 30.0, c6_resolvent_oracle},
      {7, "uniform_resolvent_boundedness", 60.0, c7_uniform_resolvent},
      {8, "decay_rate_consistency", 60.0, c8_decay_rate},
      {9, "finite_time_extinction", 10.0, c9_extinction},
      {10, "transfer_function", 20.0, c10_transfer},
      {11, "schrodinger_suite", 90.0, c11_schrodinger},
      {12, "admissibility_observability", 60.0, c12_io_ratios},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) out.check(false, "runtime " + fmt(secs) + " s over budget " + fmt(c.budget_s) + " s");
    if (!out.pass) ++failures;
    std::printf("%s %2d %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, secs, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
