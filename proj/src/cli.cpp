#include "stringchain/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stringchain/chain.hpp"
#include "stringchain/oracle.hpp"
#include "stringchain/parallel.hpp"
#include "stringchain/resolvent.hpp"
#include "stringchain/spectrum.hpp"
#include "stringchain/timesim.hpp"
#include "stringchain/transfer_function.hpp"
#include "stringchain/transfer_matrix.hpp"

namespace stringchain {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  unsigned jobs = 0;
  std::uint64_t seed = 0;
};

struct Context {
  ChainConfig cfg;
  Common common;
  json options = json::object();
  json outputs = json::array();
  std::ostream* out = nullptr;

  std::ofstream open(const std::string& name) {
    const fs::path p = fs::path(common.out_dir) / name;
    std::ofstream f(p);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
    outputs.push_back(p.string());
    return f;
  }
};

std::vector<double> parse_list(const std::string& text, std::size_t expected) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
  if (expected && v.size() != expected)
    throw CLI::ValidationError("expected " + std::to_string(expected) + " comma-separated numbers");
  return v;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 1 || lo == 0.0 || hi == 0.0 || (lo < 0.0) != (hi < 0.0))
    throw Error(ErrorCode::EmptyScan, "log grid needs nonzero endpoints of one sign");
  const double sign = lo < 0.0 ? -1.0 : 1.0;
  const double a = std::log(std::abs(lo)), b = std::log(std::abs(hi));
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = sign * std::exp(count == 1 ? a : a + (b - a) * i / (count - 1));
  return out;
}

System parse_system(const std::string& s) {
  if (s == "wave") return System::Wave;
  if (s == "schrodinger") return System::Schrodinger;
  throw CLI::ValidationError("system must be wave or schrodinger");
}

struct VerifyLine {
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<VerifyLine> verify_suite(const ChainConfig& cfg, std::uint64_t seed, unsigned jobs) {
  std::vector<VerifyLine> lines;
  auto add = [&](std::string name, bool pass, double value) {
    std::ostringstream d;
    d.precision(6);
    d << value;
    lines.push_back({std::move(name), pass, d.str()});
  };

  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> beta(-200.0, 200.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
      worst = std::max(worst, std::abs(det_pair(cfg, cplx(0.0, beta(rng))).cross() - 1.0));
    add("cross_identity", worst <= 1e-9, worst);
  }
  {
    const DetBound b = det_lower_bound(cfg, BetaGrid{-50.0, 50.0, 1e-3}, jobs);
    add("det_bound", b.numeric >= b.analytic - 1e-9 && b.numeric > 0.0, b.numeric - b.analytic);
  }
  {
    const double gamma = 0.5;
    const double k = transfer_positivity_bound(cfg, gamma);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = -200; i <= 200; ++i)
      worst = std::min(worst, det_pair(cfg, cplx(gamma, 0.25 * i), LeftRow::NeumannInput).cross() - k);
    add("transfer_positivity", worst >= -1e-9, worst);
  }
  {
    const cplx lambda(1.0, 2.0);
    BvpData data;
    data.kind = BvpKind::Transfer;
    data.lambda = lambda;
    const ChainFunction w = fd_bvp_richardson(cfg, data, 801);
    const cplx h = transfer_value(cfg, lambda);
    const double rel = std::abs(w.at(0, 0, 0) - h) / std::abs(h);
    add("transfer_vs_oracle", rel <= 5e-3, rel);
  }
  {
    const double beta = 5.0;
    const VectorSource g = probe_vector(cfg, beta, seed);
    const std::size_t m = 801;
    const WaveResolventSolution sol = wave_resolvent(cfg, beta, g, m);
    BvpData data;
    data.kind = BvpKind::Wave;
    data.lambda = cplx(0.0, beta);
    data.vector_source = g;
    const ChainFunction ref = fd_bvp_richardson(cfg, data, m);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < cfg.n_edges(); ++j) {
      const auto w = quadrature_weights(ref.grid(j));
      for (std::size_t i = 0; i < w.size(); ++i)
        for (int c = 0; c < 2; ++c) {
          num += w[i] * std::norm(sol.w.at(j, i, c) - ref.at(j, i, c));
          den += w[i] * std::norm(ref.at(j, i, c));
        }
    }
    const double rel = std::sqrt(num / den);
    add("wave_resolvent_vs_oracle", rel <= 1e-2, rel);
  }
  {
    RootOptions o;
    o.jobs = jobs;
    const EigenSet set = find_eigenvalues(cfg, Rect{-3.0, 0.0, 0.0, 20.0}, System::Wave, o);
    const double abscissa = set.abscissa.value_or(-std::numeric_limits<double>::infinity());
    add("wave_spectrum_left", abscissa < 0.0, abscissa);
  }
  {
    const ScalarSource g = probe_scalar(cfg, 25.0, seed);
    const auto sol = schrodinger_resolvent(cfg, 25.0, g, resolved_points(cfg, 5.0, 40.0, 401));
    add("schrodinger_residual", sol.residual <= 1e-3, sol.residual);
  }
  return lines;
}

double extinction_time(const EnergyTrace& trace, double ratio) {
  const double e0 = trace.energies.front();
  double t = trace.times.back();
  for (std::size_t i = trace.energies.size(); i-- > 0;) {
    if (trace.energies[i] > ratio * e0) break;
    t = trace.times[i];
  }
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral and time-domain analysis of damped string chains"};
  app.require_subcommand(1, 1);
  Common common;
  common.jobs = default_jobs();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "chain JSON {\"densities\": [...]}")->required();
    sub->add_option("--out", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--jobs", common.jobs, "worker threads (STRINGCHAIN_JOBS overrides)");
    sub->add_option("--seed", common.seed, "probe seed")->capture_default_str();
  };

  // Options shared by name across subcommands.
  std::string rect_text = "-2,0,0,30";
  std::string system_text = "wave";
  int nx = 64, ny = 256;
  double tol = 1e-10;
  bool audit = false;
  double beta_min = -200.0, beta_max = 200.0, step = 1e-3;
  double gamma = 1.0;
  int count = 40, probes = 12;
  double T = 20.0, cfl = 0.5, dt = 1e-3, center = 0.5, width = 0.25;
  std::size_t points = 2000, stride = 10;
  std::string mode_text = "damped";

  auto* spectrum = app.add_subcommand("spectrum", "locate eigenvalues in a rectangle");
  add_common(spectrum);
  spectrum->add_option("--rect", rect_text, "re_min,re_max,im_min,im_max")->capture_default_str();
  spectrum->add_option("--system", system_text, "wave or schrodinger")->capture_default_str();
  spectrum->add_option("--nx", nx, "scan columns")->capture_default_str();
  spectrum->add_option("--ny", ny, "scan rows")->capture_default_str();
  spectrum->add_option("--tol", tol, "Newton residual tolerance")->capture_default_str();
  spectrum->add_flag("--audit", audit, "argument-principle count on the rectangle");

  auto* gap = app.add_subcommand("gap", "min |char det| on the imaginary axis");
  add_common(gap);
  gap->add_option("--system", system_text, "wave or schrodinger")->capture_default_str();
  gap->add_option("--beta-min", beta_min)->capture_default_str();
  gap->add_option("--beta-max", beta_max)->capture_default_str();
  gap->add_option("--step", step)->capture_default_str();

  auto* det_bound = app.add_subcommand("det-bound", "analytic and scanned lower bound of |det H|");
  add_common(det_bound);
  det_bound->add_option("--beta-min", beta_min)->capture_default_str();
  det_bound->add_option("--beta-max", beta_max)->capture_default_str();
  det_bound->add_option("--step", step)->capture_default_str();

  double scan_min = 10.0, scan_max = 1e4;
  auto* rscan = app.add_subcommand("resolvent-scan", "probe estimates of the wave resolvent norm");
  add_common(rscan);
  rscan->add_option("--beta-min", scan_min)->capture_default_str();
  rscan->add_option("--beta-max", scan_max)->capture_default_str();
  rscan->add_option("--count", count, "log-spaced samples")->capture_default_str();
  rscan->add_option("--probes", probes)->capture_default_str();

  auto* sscan = app.add_subcommand("schrodinger-scan", "probe estimates of the Schrodinger resolvent norm");
  add_common(sscan);
  sscan->add_option("--beta-min", scan_min)->capture_default_str();
  sscan->add_option("--beta-max", scan_max)->capture_default_str();
  sscan->add_option("--count", count, "log-spaced samples")->capture_default_str();
  sscan->add_option("--probes", probes)->capture_default_str();

  double t_min = -50.0, t_max = 50.0, t_step = 1e-2;
  auto* tscan = app.add_subcommand("transfer-scan", "|H| on the line Re lambda = gamma");
  add_common(tscan);
  tscan->add_option("--gamma", gamma)->capture_default_str();
  tscan->add_option("--beta-min", t_min)->capture_default_str();
  tscan->add_option("--beta-max", t_max)->capture_default_str();
  tscan->add_option("--step", t_step)->capture_default_str();

  auto* decay = app.add_subcommand("decay", "wave energy decay from a displacement bump");
  add_common(decay);
  decay->add_option("--T", T)->capture_default_str();
  decay->add_option("--points", points, "points per edge")->capture_default_str();
  decay->add_option("--cfl", cfl)->capture_default_str();
  decay->add_option("--stride", stride, "record every n-th step")->capture_default_str();
  decay->add_option("--center", center, "bump centre")->capture_default_str();
  decay->add_option("--width", width, "bump half-width")->capture_default_str();
  decay->add_option("--mode", mode_text, "damped or conservative")->capture_default_str();

  double s_T = 5.0;
  std::size_t s_points = 401;
  auto* sdecay = app.add_subcommand("schrodinger-decay", "Crank-Nicolson run from u0 = sin(pi x / N)");
  add_common(sdecay);
  sdecay->add_option("--T", s_T)->capture_default_str();
  sdecay->add_option("--points", s_points, "points per edge")->capture_default_str();
  sdecay->add_option("--dt", dt)->capture_default_str();
  sdecay->add_option("--stride", stride)->capture_default_str();
  std::size_t startup = SimOptions{}.startup_steps;
  sdecay->add_option("--startup", startup, "steps taken as implicit Euler half-step pairs")->capture_default_str();

  double io_T = 4.0;
  std::size_t io_points = 1000;
  auto* io = app.add_subcommand("io-ratios", "admissibility and observability ratios");
  add_common(io);
  io->add_option("--T", io_T)->capture_default_str();
  io->add_option("--points", io_points)->capture_default_str();
  io->add_option("--cfl", cfl)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "invariant and oracle checks");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (std::getenv("STRINGCHAIN_JOBS")) common.jobs = default_jobs();
  common.jobs = std::max(1u, common.jobs);

  Context ctx;
  ctx.common = common;
  ctx.out = &out;
  try {
    ctx.cfg = load_config(common.config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto started = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  int code = kExitOk;
  try {
    fs::create_directories(common.out_dir);
    if (sub == spectrum) {
      const auto r = parse_list(rect_text, 4);
      RootOptions o;
      o.nx = nx;
      o.ny = ny;
      o.tol = tol;
      o.audit = audit;
      o.jobs = common.jobs;
      const System which = parse_system(system_text);
      const EigenSet set = find_eigenvalues(ctx.cfg, Rect{r[0], r[1], r[2], r[3]}, which, o);
      ctx.options = {{"rect", r}, {"system", system_text}, {"nx", nx}, {"ny", ny}, {"tol", tol}, {"audit", audit}};
      auto f = ctx.open("eigenvalues.csv");
      write_csv(f, set);
      auto s = ctx.open("spectrum.json");
      s << summary_json(set, tol).dump(2) << '\n';
      out << "spectrum: " << set.eigenvalues.size() << " eigenvalues, abscissa "
          << (set.abscissa ? std::to_string(*set.abscissa) : std::string("none")) << '\n';
    } else if (sub == gap) {
      const System which = parse_system(system_text);
      const AxisGap g = imaginary_axis_gap(ctx.cfg, which, BetaGrid{beta_min, beta_max, step}, common.jobs);
      ctx.options = {{"system", system_text}, {"beta_min", beta_min}, {"beta_max", beta_max}, {"step", step}};
      json j{{"gap", g.gap}, {"argmin_beta", g.argmin_beta}};
      if (which == System::Wave) j["gamma_analytic"] = det_lower_bound_analytic(ctx.cfg);
      auto f = ctx.open("gap.json");
      f << j.dump(2) << '\n';
      out << "gap: " << g.gap << " at beta " << g.argmin_beta << '\n';
      if (!(g.gap > 0.0)) code = kExitValidation;
    } else if (sub == det_bound) {
      const BetaGrid grid{beta_min, beta_max, step};
      const DetBound b = det_lower_bound(ctx.cfg, grid, common.jobs);
      ctx.options = {{"beta_min", beta_min}, {"beta_max", beta_max}, {"step", step}};
      auto f = ctx.open("det_scan.csv");
      f.precision(17);
      f << "beta,re_D,im_D,abs_D,re_Dt,im_Dt,re_DDbar\n";
      for (std::size_t i = 0; i < grid.count(); ++i) {
        const double beta = grid.at(i);
        const DetPair d = det_pair(ctx.cfg, cplx(0.0, beta));
        f << beta << ',' << d.d.real() << ',' << d.d.imag() << ',' << std::abs(d.d) << ','
          << d.d_tilde.real() << ',' << d.d_tilde.imag() << ',' << d.cross() << '\n';
      }
      auto s = ctx.open("det_bound.json");
      s << json{{"gamma_analytic", b.analytic}, {"gamma_numeric", b.numeric}, {"argmin_beta", b.argmin_beta}}.dump(2)
        << '\n';
      out << "det-bound: analytic " << b.analytic << ", numeric " << b.numeric << '\n';
      if (b.numeric < b.analytic - 1e-9) code = kExitValidation;
    } else if (sub == rscan || sub == sscan) {
      const auto betas = log_grid(scan_min, scan_max, count);
      ctx.options = {{"beta_min", scan_min}, {"beta_max", scan_max}, {"count", count}, {"probes", probes}};
      const auto samples = sub == rscan
                               ? wave_resolvent_norm_scan(ctx.cfg, betas, probes, common.seed, common.jobs)
                               : schrodinger_norm_scan(ctx.cfg, betas, probes, common.seed, common.jobs);
      auto f = ctx.open(sub == rscan ? "resolvent_scan.csv" : "schrodinger_scan.csv");
      write_csv(f, samples);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& s : samples) {
        lo = std::min(lo, s.estimate);
        hi = std::max(hi, s.estimate);
      }
      out << name << ": estimates in [" << lo << ", " << hi << "]\n";
    } else if (sub == tscan) {
      const BetaGrid grid{t_min, t_max, t_step};
      ctx.options = {{"gamma", gamma}, {"beta_min", t_min}, {"beta_max", t_max}, {"step", t_step}};
      const auto samples = transfer_scan(ctx.cfg, gamma, grid, common.jobs);
      auto f = ctx.open("transfer_scan.csv");
      write_csv(f, samples);
      const TransferSup sup = transfer_sup_scan(ctx.cfg, gamma, grid, common.jobs);
      out << "transfer-scan: sup |H| = " << sup.sup_abs << " at beta " << sup.argmax_beta << '\n';
    } else if (sub == decay) {
      if (mode_text != "damped" && mode_text != "conservative")
        throw CLI::ValidationError("mode must be damped or conservative");
      SimOptions o;
      o.points_per_edge = points;
      o.cfl = cfl;
      o.T = T;
      o.record_stride = stride;
      const WaveState init = bump_state(ctx.cfg, points, center, width);
      const WaveMode mode = mode_text == "damped" ? WaveMode::Damped : WaveMode::Conservative;
      const WaveRun run = simulate_wave(ctx.cfg, init, o, WaveDrive{mode, {}});
      ctx.options = {{"T", T}, {"points", points}, {"cfl", cfl}, {"stride", stride},
                     {"center", center}, {"width", width}, {"mode", mode_text}};
      EnergyTrace trace = run.trace;
      json j{{"dt", run.dt}, {"steps", run.steps}, {"max_energy_rise", run.max_energy_rise}};
      try {
        trace.fitted_rate = fit_decay_rate(trace);
        j["fitted_rate"] = *trace.fitted_rate;
      } catch (const Error& e) {
        j["fitted_rate"] = nullptr;
        j["fit_error"] = e.what();
      }
      const double ext = extinction_time(trace, 1e-6);
      j["extinction_time_1e-6"] = ext;
      auto f = ctx.open("energy.csv");
      write_csv(f, trace);
      auto s = ctx.open("decay.json");
      s << j.dump(2) << '\n';
      out << "decay: E/E0 <= 1e-6 from t = " << ext;
      if (trace.fitted_rate) out << ", fitted rate " << *trace.fitted_rate;
      out << '\n';
    } else if (sub == sdecay) {
      SimOptions o;
      o.points_per_edge = s_points;
      o.dt = dt;
      o.T = s_T;
      o.record_stride = stride;
      o.startup_steps = startup;
      const double len = static_cast<double>(ctx.cfg.n_edges());
      const ChainFunction u0 = sample_on_sim_grid(ctx.cfg, s_points, [&](std::size_t, double x) {
        return cplx(std::sin(std::numbers::pi * x / len), 0.0);
      });
      SchrodingerRun run = simulate_schrodinger(ctx.cfg, u0, o);
      ctx.options = {{"T", s_T}, {"points", s_points}, {"dt", dt}, {"stride", stride}, {"startup", startup}};
      json j;
      try {
        run.trace.fitted_rate = fit_decay_rate(run.trace);
        j["fitted_rate"] = *run.trace.fitted_rate;
      } catch (const Error& e) {
        j["fitted_rate"] = nullptr;
        j["fit_error"] = e.what();
      }
      const double balance = run.trace.energies.front() - run.trace.energies.back() - run.trace.boundary_flux.back();
      j["balance_error"] = balance;
      auto f = ctx.open("energy.csv");
      write_csv(f, run.trace);
      auto s = ctx.open("schrodinger_decay.json");
      s << j.dump(2) << '\n';
      out << "schrodinger-decay: E(T)/E(0) = " << run.trace.energies.back() / run.trace.energies.front() << '\n';
    } else if (sub == io) {
      SimOptions o;
      o.points_per_edge = io_points;
      o.cfl = cfl;
      const double adm = admissibility_ratio(
          ctx.cfg, [](double t) { return std::sin(2.0 * std::numbers::pi * t); }, io_T, o);
      const double obs = observability_ratio(ctx.cfg, conservative_mode_state(ctx.cfg, io_points), io_T, o);
      ctx.options = {{"T", io_T}, {"points", io_points}, {"cfl", cfl}};
      auto f = ctx.open("io_ratios.json");
      f << json{{"admissibility", adm}, {"observability", obs}, {"round_trip", round_trip_time(ctx.cfg)}}.dump(2)
        << '\n';
      out << "io-ratios: admissibility " << adm << ", observability " << obs << '\n';
    } else if (sub == verify) {
      const auto lines = verify_suite(ctx.cfg, common.seed, common.jobs);
      auto f = ctx.open("verify.txt");
      bool all = true;
      for (const auto& l : lines) {
        const std::string row = std::string(l.pass ? "PASS " : "FAIL ") + l.name + " " + l.detail;
        f << row << '\n';
        out << row << '\n';
        all = all && l.pass;
      }
      if (!all) code = kExitValidation;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    const ErrorCode c = e.code();
    if (c == ErrorCode::InvalidArgument || c == ErrorCode::EmptyScan) return kExitUsage;
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest{{"command", name},
                {"config", config_to_json(ctx.cfg)},
                {"options", ctx.options},
                {"outputs", ctx.outputs},
                {"seed", common.seed},
                {"jobs", common.jobs},
                {"wall_time_s", wall},
                {"version", kVersion}};
  std::ofstream m(fs::path(common.out_dir) / "manifest.json");
  m << manifest.dump(2) << '\n';
  return code;
}

}  // namespace stringchain
