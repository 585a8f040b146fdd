#include "stringchain/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "stringchain/parallel.hpp"

namespace stringchain {

cplx char_det_wave(const ChainConfig& cfg, cplx lambda) { return det_pair(cfg, lambda).d; }

namespace {

cplx schrodinger_raw(const ChainConfig& cfg, cplx lambda) {
  const cplx mu = cplx(0.0, -1.0) * lambda;
  Mat2C p = Mat2C::Identity();
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) p = schrodinger_step(cfg.density(j), mu) * p;
  return p(0, 0) + cplx(0.0, 1.0) * p(0, 1);
}

}  // namespace

cplx char_det_schrodinger(const ChainConfig& cfg, cplx lambda) {
  validate_config(cfg);
  return schrodinger_raw(cfg, lambda) / schrodinger_raw(cfg, cplx(1.0, 0.0));
}

cplx char_det(const ChainConfig& cfg, cplx lambda, System which) {
  return which == System::Wave ? char_det_wave(cfg, lambda) : char_det_schrodinger(cfg, lambda);
}

namespace {

template <class Fn>
double phase_walk(const Fn& fn, cplx za, cplx fa, cplx zb, cplx fb, int depth) {
  const double d = std::arg(fb / fa);
  if (std::abs(d) <= 0.5 || depth >= 40) return d;
  const cplx zm = 0.5 * (za + zb);
  const cplx fm = fn(zm);
  return phase_walk(fn, za, fa, zm, fm, depth + 1) + phase_walk(fn, zm, fm, zb, fb, depth + 1);
}

}  // namespace

int winding_number(const ChainConfig& cfg, const Rect& rect, System which) {
  validate_config(cfg);
  auto fn = [&](cplx z) { return char_det(cfg, z, which); };
  const cplx corners[4] = {cplx(rect.re_min, rect.im_min), cplx(rect.re_max, rect.im_min),
                           cplx(rect.re_max, rect.im_max), cplx(rect.re_min, rect.im_max)};
  double total = 0.0;
  for (int s = 0; s < 4; ++s) {
    const cplx a = corners[s];
    const cplx b = corners[(s + 1) % 4];
    const int pieces = std::max(64, static_cast<int>(std::ceil(std::abs(b - a) * 32.0)));
    cplx za = a;
    cplx fa = fn(a);
    for (int k = 1; k <= pieces; ++k) {
      const cplx zb = a + (b - a) * (static_cast<double>(k) / pieces);
      const cplx fb = fn(zb);
      total += phase_walk(fn, za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

EigenSet find_eigenvalues(const ChainConfig& cfg, Rect rect, System which, const RootOptions& opts) {
  validate_config(cfg);
  if (opts.nx < 16 || opts.ny < 16) throw Error(ErrorCode::InvalidArgument, "grid must be at least 16x16");
  rect.re_max = std::min(rect.re_max, -1e-6);
  if (!(rect.re_min < rect.re_max) || !(rect.im_min < rect.im_max))
    throw Error(ErrorCode::InvalidArgument, "empty search rectangle");

  const double dx = (rect.re_max - rect.re_min) / opts.nx;
  const double dy = (rect.im_max - rect.im_min) / opts.ny;
  const int cols = opts.nx + 3;
  const int rows = opts.ny + 3;
  auto node = [&](int i, int k) {
    return cplx(rect.re_min + (i - 1) * dx, rect.im_min + (k - 1) * dy);
  };
  std::vector<double> mag(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows));
  parallel_for(static_cast<std::size_t>(rows), opts.jobs, [&](std::size_t k) {
    for (int i = 0; i < cols; ++i)
      mag[k * static_cast<std::size_t>(cols) + static_cast<std::size_t>(i)] =
          std::abs(char_det(cfg, node(i, static_cast<int>(k)), which));
  });
  auto at = [&](int i, int k) {
    return mag[static_cast<std::size_t>(k) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(i)];
  };

  std::vector<cplx> seeds;
  for (int k = 1; k + 1 < rows; ++k)
    for (int i = 1; i + 1 < cols; ++i) {
      const double v = at(i, k);
      if (!(v < opts.promotion)) continue;
      bool minimum = true;
      for (int dk = -1; dk <= 1 && minimum; ++dk)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dk == 0) continue;
          const double w = at(i + di, k + dk);
          // ties are broken toward the lower index so plateaus yield one seed
          if (w < v || (w == v && (dk < 0 || (dk == 0 && di < 0)))) {
            minimum = false;
            break;
          }
        }
      if (minimum) seeds.push_back(node(i, k));
    }

  const Rect outer{rect.re_min - 2 * dx, rect.re_max + 2 * dx, rect.im_min - 2 * dy, rect.im_max + 2 * dy};
  std::vector<std::optional<Eigenvalue>> refined(seeds.size());
  parallel_for(seeds.size(), opts.jobs, [&](std::size_t s) {
    cplx z = seeds[s];
    cplx f = char_det(cfg, z, which);
    for (int iter = 0; iter < opts.max_newton; ++iter) {
      const double h = 1e-7 * (1.0 + std::abs(z));
      const cplx df = (char_det(cfg, z + h, which) - char_det(cfg, z - h, which)) / (2.0 * h);
      const cplx step = f / df;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      z -= step;
      if (!outer.contains(z)) return;
      f = char_det(cfg, z, which);
      const bool tiny = std::abs(step) <= 1e-14 * (1.0 + std::abs(z));
      if (std::abs(f) <= opts.tol || tiny) {
        // one polishing step once the tolerance is met
        const cplx df2 = (char_det(cfg, z + h, which) - char_det(cfg, z - h, which)) / (2.0 * h);
        const cplx z2 = z - f / df2;
        const cplx f2 = char_det(cfg, z2, which);
        if (std::abs(f2) <= std::abs(f)) {
          z = z2;
          f = f2;
        }
        refined[s] = Eigenvalue{z, std::abs(f)};
        return;
      }
    }
    std::ostringstream msg;
    msg << "candidate near " << seeds[s] << " stalled at " << z << " with residual " << std::abs(f);
    throw Error(ErrorCode::NoConvergence, msg.str());
  });

  EigenSet out;
  out.search_rect = rect;
  for (const auto& r : refined) {
    if (!r || !rect.contains(r->value, 1e-9)) continue;
    const bool dup = std::any_of(out.eigenvalues.begin(), out.eigenvalues.end(), [&](const Eigenvalue& e) {
      return std::abs(e.value - r->value) < opts.dedup;
    });
    if (!dup) out.eigenvalues.push_back(*r);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
    return a.value.real() < b.value.real();
  });
  for (const auto& e : out.eigenvalues)
    out.abscissa = out.abscissa ? std::max(*out.abscissa, e.value.real()) : e.value.real();
  if (opts.audit) {
    const Rect wide{rect.re_min - 0.5 * dx, rect.re_max + 0.5 * dx, rect.im_min - 0.5 * dy,
                    rect.im_max + 0.5 * dy};
    out.winding = winding_number(cfg, wide, which);
  }
  return out;
}

AxisGap imaginary_axis_gap(const ChainConfig& cfg, System which, const BetaGrid& scan, unsigned jobs) {
  validate_config(cfg);
  const std::size_t count = scan.count();
  const std::size_t chunks = std::min<std::size_t>(count, 64);
  std::vector<AxisGap> best(chunks, AxisGap{std::numeric_limits<double>::infinity(), 0.0});
  parallel_for(chunks, jobs, [&](std::size_t c) {
    for (std::size_t i = count * c / chunks; i < count * (c + 1) / chunks; ++i) {
      const double beta = scan.at(i);
      const double v = std::abs(char_det(cfg, cplx(0.0, beta), which));
      if (v < best[c].gap) best[c] = AxisGap{v, beta};
    }
  });
  return *std::min_element(best.begin(), best.end(),
                           [](const AxisGap& a, const AxisGap& b) { return a.gap < b.gap; });
}

void write_csv(std::ostream& os, const EigenSet& set) {
  os.precision(17);
  os << "re,im,residual\n";
  for (const auto& e : set.eigenvalues)
    os << e.value.real() << ',' << e.value.imag() << ',' << e.residual << '\n';
}

nlohmann::json summary_json(const EigenSet& set, double tol) {
  nlohmann::json j;
  j["abscissa"] = set.abscissa ? nlohmann::json(*set.abscissa) : nlohmann::json(nullptr);
  j["count"] = set.eigenvalues.size();
  j["rect"] = {set.search_rect.re_min, set.search_rect.re_max, set.search_rect.im_min,
               set.search_rect.im_max};
  j["tol"] = tol;
  if (set.winding) j["winding"] = *set.winding;
  return j;
}

}  // namespace stringchain
