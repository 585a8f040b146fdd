#pragma once

#include <functional>

#include "stringchain/chain.hpp"

namespace stringchain {

struct SimOptions {
  std::size_t points_per_edge = 401;
  double cfl = 0.5;   // wave: dt = cfl * min_j h_j / sqrt(rho_j)
  double dt = 1e-3;   // Schroedinger step
  /// Schroedinger: leading steps taken as two implicit Euler half-steps each.
  std::size_t startup_steps = 2;
  double T = 10.0;
  std::size_t record_stride = 1;
};

enum class WaveMode { Damped, Conservative, Forced };

struct WaveDrive {
  WaveMode mode = WaveMode::Damped;
  /// Tension input v(t) with rho_0 u_x(t, 0) = v(t), Forced mode only.
  std::function<double(double)> input;
};

struct WaveRun {
  EnergyTrace trace;
  WaveState final_state;
  double dt = 0.0;
  std::size_t steps = 0;
  /// Largest single-step energy increase divided by the first recorded energy.
  double max_energy_rise = 0.0;
  /// int_0^T v(t)^2 dt for forced runs.
  double input_energy = 0.0;
};

/// Leapfrog on the lumped-mass discretization; the damped node x = 0 is
/// implicit and solved in closed form. The recorded energy is the conserved
/// quantity of the scheme,
///   E^{n+1/2} = 1/2 |(u^{n+1} - u^n)/dt|_M^2 + 1/2 (u^{n+1})^T K u^n,
/// which drops each step by exactly dt |(u_0^{n+1} - u_0^{n-1}) / (2 dt)|^2 in
/// damped mode. Recorded at t = (n + 1/2) dt. Throws CflViolation, GridMismatch.
WaveRun simulate_wave(const ChainConfig& cfg, const WaveState& init, const SimOptions& opts,
                      const WaveDrive& drive = {});

struct SchrodingerRun {
  EnergyTrace trace;
  ChainFunction final_state;
};

/// Crank-Nicolson for M u_t = (i K - D) u with a tridiagonal solve per step.
/// E^{n+1} - E^n = -dt |(u_0^{n+1} + u_0^n) / 2|^2 exactly; the implicit Euler
/// startup half-steps h add the dissipation -1/2 |u^{n+1} - u^n|_M^2 to their
/// own balance -h |u_0^{n+1}|^2.
/// Throws LinearSolveFailure, GridMismatch.
SchrodingerRun simulate_schrodinger(const ChainConfig& cfg, const ChainFunction& u0,
                                    const SimOptions& opts);

/// Least-squares slope of log E over [0.2, 0.9] T_eff, T_eff the last time
/// with E > 1e-12 E(0). Returns the decay rate. Throws InsufficientDecay.
double fit_decay_rate(const EnergyTrace& trace);

/// Zero displacement and velocity on the simulation grid.
WaveState rest_state(const ChainConfig& cfg, std::size_t points_per_edge);

/// Displacement bump cos^6 centred at `center` with half-width `width`,
/// zero velocity, sampled on the simulation grid.
WaveState bump_state(const ChainConfig& cfg, std::size_t points_per_edge, double center,
                     double width);

/// Lowest mode of the conservative chain (rho_0 u_x(0) = 0, u(N) = 0),
/// normalized to u(0) = 1. Returns its angular frequency.
double conservative_mode_frequency(const ChainConfig& cfg, int index = 0);
WaveState conservative_mode_state(const ChainConfig& cfg, std::size_t points_per_edge, int index = 0);

/// Uniform scalar samples of fn on the simulation grid.
ChainFunction sample_on_sim_grid(const ChainConfig& cfg, std::size_t points_per_edge,
                                 const ScalarSource& fn);

}  // namespace stringchain
