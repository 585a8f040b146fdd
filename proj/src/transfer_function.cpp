#include "stringchain/transfer_function.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "stringchain/parallel.hpp"
#include "stringchain/transfer_matrix.hpp"

namespace stringchain {

cplx transfer_value(const ChainConfig& cfg, cplx lambda, cplx z) {
  if (!(lambda.real() > 0.0)) throw Error(ErrorCode::InvalidArgument, "transfer function needs Re lambda > 0");
  const BoundaryMatrices bm = boundary_matrices(cfg, lambda, LeftRow::NeumannInput);
  const cplx det = bm.h.determinant();
  if (std::abs(det) < 1e-14) throw Error(ErrorCode::SingularBoundaryMatrix, "|det| below 1e-14");
  const Vec2C f0 = bm.h.inverse() * Vec2C(z, 0.0);
  const Vec2C w00 = exp_hyp(cfg.density(0), lambda, -1.0) * f0;
  return w00(0);
}

std::vector<TransferSample> transfer_scan(const ChainConfig& cfg, double gamma, const BetaGrid& scan,
                                          unsigned jobs) {
  const std::size_t count = scan.count();
  std::vector<TransferSample> out(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    const cplx lambda(gamma, scan.at(i));
    out[i] = TransferSample{lambda, transfer_value(cfg, lambda)};
  });
  return out;
}

TransferSup transfer_sup_scan(const ChainConfig& cfg, double gamma, const BetaGrid& scan, unsigned jobs) {
  const auto samples = transfer_scan(cfg, gamma, scan, jobs);
  TransferSup sup;
  for (const auto& s : samples)
    if (std::abs(s.value) > sup.sup_abs) {
      sup.sup_abs = std::abs(s.value);
      sup.argmax_beta = s.lambda.imag();
    }
  return sup;
}

void write_csv(std::ostream& os, const std::vector<TransferSample>& samples) {
  os.precision(17);
  os << "gamma,beta,re_H,im_H,abs_H\n";
  for (const auto& s : samples)
    os << s.lambda.real() << ',' << s.lambda.imag() << ',' << s.value.real() << ',' << s.value.imag()
       << ',' << std::abs(s.value) << '\n';
}

double round_trip_time(const ChainConfig& cfg) {
  validate_config(cfg);
  double t = 0.0;
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) t += 1.0 / cfg.speed(j);
  return 2.0 * t;
}

double admissibility_ratio(const ChainConfig& cfg, const std::function<double(double)>& v, double T,
                           SimOptions opts) {
  opts.T = T;
  const WaveState rest = rest_state(cfg, opts.points_per_edge);
  WaveDrive drive{WaveMode::Forced, v};
  const WaveRun run = simulate_wave(cfg, rest, opts, drive);
  if (run.input_energy == 0.0) return 0.0;
  return run.trace.boundary_flux.back() / run.input_energy;
}

double observability_ratio(const ChainConfig& cfg, const WaveState& init, double T, SimOptions opts) {
  opts.T = T;
  const double e0 = energy_wave(init, cfg);
  if (!(e0 > 0.0)) throw Error(ErrorCode::DegenerateData, "initial data carry no energy");
  const WaveRun run = simulate_wave(cfg, init, opts, WaveDrive{WaveMode::Conservative, {}});
  return run.trace.boundary_flux.back() / (2.0 * e0);
}

}  // namespace stringchain
