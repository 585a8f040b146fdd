#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stringchain/spectrum.hpp"
#include "stringchain/timesim.hpp"
#include "support.hpp"

using namespace stringchain;

namespace {

constexpr double kPi = std::numbers::pi;

EnergyTrace synthetic(double (*e)(double), double T, std::size_t n) {
  EnergyTrace tr;
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(n);
    tr.times.push_back(t);
    tr.energies.push_back(e(t));
    tr.boundary_flux.push_back(0.0);
  }
  return tr;
}

}  // namespace

TEST_CASE("fit of exact exponential") {
  const EnergyTrace tr = synthetic([](double t) { return 7.0 * std::exp(-3.0 * t); }, 10.0, 2000);
  CHECK(std::abs(fit_decay_rate(tr) - 3.0) < 1e-9);
}

TEST_CASE("fit of oscillating decay") {
  const EnergyTrace tr = synthetic([](double t) { return std::exp(-t) * (2.0 + std::cos(10.0 * t)); }, 30.0, 6000);
  CHECK(std::abs(fit_decay_rate(tr) - 1.0) < 0.05);
}

TEST_CASE("flat trace has no decay") {
  const EnergyTrace tr = synthetic([](double) { return 2.0; }, 10.0, 100);
  try {
    fit_decay_rate(tr);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientDecay);
  }
}

TEST_CASE("conservative runs keep their energy") {
  const ChainConfig cfg{{1.0, 4.0}};
  SimOptions o;
  o.points_per_edge = 2000;
  o.T = 10.0;
  o.record_stride = 50;
  const WaveRun run = simulate_wave(cfg, bump_state(cfg, o.points_per_edge, 0.8, 0.3), o,
                                    WaveDrive{WaveMode::Conservative, {}});
  const auto& e = run.trace.energies;
  CHECK(std::abs(e.back() - e.front()) <= 1e-4 * e.front());
}

TEST_CASE("matched string goes extinct") {
  const ChainConfig cfg{{1.0}};
  SimOptions o;
  o.points_per_edge = 2000;
  o.T = 3.0;
  const WaveRun run = simulate_wave(cfg, bump_state(cfg, o.points_per_edge, 0.5, 0.25), o);
  const auto& tr = run.trace;
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    if (tr.times[i] >= 2.2) CHECK(tr.energies[i] <= 1e-6 * tr.energies.front());
}

TEST_CASE("damped energy drop equals the boundary flux") {
  const ChainConfig cfg{{1.0, 4.0}};
  SimOptions o;
  o.points_per_edge = 800;
  o.T = 6.0;
  const WaveRun run = simulate_wave(cfg, bump_state(cfg, o.points_per_edge, 1.5, 0.3), o);
  const auto& tr = run.trace;
  CHECK(run.max_energy_rise <= 1e-6);
  const double lost = tr.energies.front() - tr.energies.back();
  CHECK(std::abs(lost - (tr.boundary_flux.back() - tr.boundary_flux.front())) <= 1e-2 * lost);
}

TEST_CASE("damped decay rate tracks the spectral abscissa") {
  const ChainConfig cfg{{1.0, 4.0}};
  const EigenSet set = find_eigenvalues(cfg, Rect{-3.0, 0.0, 0.0, 40.0}, System::Wave);
  REQUIRE(set.abscissa.has_value());
  SimOptions o;
  o.points_per_edge = 1000;
  o.T = 20.0;
  o.record_stride = 10;
  const WaveRun run = simulate_wave(cfg, bump_state(cfg, o.points_per_edge, 0.5, 0.25), o);
  const double target = 2.0 * std::abs(*set.abscissa);
  CHECK(std::abs(fit_decay_rate(run.trace) - target) <= 0.15 * target);
}

TEST_CASE("simulation input checks") {
  const ChainConfig cfg{{1.0}};
  SimOptions o;
  o.points_per_edge = 200;
  o.cfl = 1.5;
  try {
    simulate_wave(cfg, bump_state(cfg, 200, 0.5, 0.2), o);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CflViolation);
  }
  o.cfl = 0.5;
  try {
    simulate_wave(cfg, bump_state(cfg, 100, 0.5, 0.2), o);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("conservative mode frequency of a single string") {
  CHECK(conservative_mode_frequency(ChainConfig{{1.0}}) == doctest::Approx(kPi / 2.0).epsilon(1e-9));
  CHECK(conservative_mode_frequency(ChainConfig{{4.0}}) == doctest::Approx(kPi).epsilon(1e-9));
  const WaveState s = conservative_mode_state(ChainConfig{{1.0}}, 101);
  CHECK(std::abs(s.u.at(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(s.u.at(0, 100)) < 1e-12);
}

TEST_CASE("schrodinger zero data stays zero") {
  const ChainConfig cfg{{1.0, 2.0}};
  SimOptions o;
  o.points_per_edge = 101;
  o.T = 0.5;
  const SchrodingerRun run =
      simulate_schrodinger(cfg, sample_on_sim_grid(cfg, 101, [](std::size_t, double) { return cplx(0.0); }), o);
  for (double e : run.trace.energies) CHECK(e == 0.0);
}

TEST_CASE("schrodinger energy decays log-linearly") {
  const ChainConfig cfg{{1.0}};
  SimOptions o;
  o.points_per_edge = 401;
  o.dt = 1e-3;
  o.T = 5.0;
  const SchrodingerRun run = simulate_schrodinger(
      cfg, sample_on_sim_grid(cfg, 401, [](std::size_t, double x) { return cplx(std::sin(kPi * x)); }), o);
  const auto& tr = run.trace;
  for (std::size_t i = 1; i < tr.energies.size(); ++i) CHECK(tr.energies[i] < tr.energies[i - 1]);
  const double lost = tr.energies.front() - tr.energies.back();
  CHECK(std::abs(lost - (tr.boundary_flux.back() - tr.boundary_flux.front())) <= 1e-2 * lost);

  const double rate = fit_decay_rate(tr);
  const EigenSet set = find_eigenvalues(cfg, Rect{-5.0, 0.0, 0.0, 60.0}, System::Schrodinger);
  REQUIRE(set.abscissa.has_value());
  CHECK(std::abs(rate - 2.0 * std::abs(*set.abscissa)) <= 0.15 * 2.0 * std::abs(*set.abscissa));
}
