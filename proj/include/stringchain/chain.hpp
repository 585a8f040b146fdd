#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

#include "stringchain/error.hpp"

namespace stringchain {

using cplx = std::complex<double>;
using Vec2C = Eigen::Vector2cd;
using Mat2C = Eigen::Matrix2cd;

/// Number of edges and the density of every string. Edge j occupies [j, j+1].
struct ChainConfig {
  std::vector<double> densities;

  std::size_t n_edges() const noexcept { return densities.size(); }
  double density(std::size_t j) const { return densities.at(j); }
  /// Wave speed sqrt(rho_j).
  double speed(std::size_t j) const;
};

/// Returns cfg unchanged or throws EmptyChain / NonPositiveDensity.
ChainConfig validate_config(ChainConfig cfg);

ChainConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ChainConfig& cfg);
ChainConfig load_config(const std::string& path);

/// Uniformly spaced real grid: min, min+step, ..., <= max.
struct BetaGrid {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::size_t count() const;
  double at(std::size_t i) const { return min + step * static_cast<double>(i); }
};

/// Closed complex rectangle [re_min, re_max] x [im_min, im_max].
struct Rect {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(cplx z, double tol = 0.0) const {
    return z.real() >= re_min - tol && z.real() <= re_max + tol && z.imag() >= im_min - tol &&
           z.imag() <= im_max + tol;
  }
};

/// Source terms given as callables of (edge, x).
using ScalarSource = std::function<cplx(std::size_t, double)>;
using VectorSource = std::function<Vec2C(std::size_t, double)>;

/// Per-edge sampled complex function on the chain. Arity 1 holds scalars,
/// arity 2 holds 2-vectors (stored interleaved).
class ChainFunction {
 public:
  ChainFunction() = default;
  ChainFunction(int arity, std::vector<std::vector<double>> grids);

  /// `points` equispaced samples per edge, both endpoints included.
  static ChainFunction uniform(std::size_t n_edges, std::size_t points, int arity);

  int arity() const noexcept { return arity_; }
  std::size_t n_edges() const noexcept { return grids_.size(); }
  std::size_t size(std::size_t edge) const { return grids_.at(edge).size(); }
  std::span<const double> grid(std::size_t edge) const { return grids_.at(edge); }
  const std::vector<std::vector<double>>& grids() const noexcept { return grids_; }

  cplx& at(std::size_t edge, std::size_t i, int comp = 0) {
    return values_[edge][static_cast<std::size_t>(arity_) * i + static_cast<std::size_t>(comp)];
  }
  cplx at(std::size_t edge, std::size_t i, int comp = 0) const {
    return values_[edge][static_cast<std::size_t>(arity_) * i + static_cast<std::size_t>(comp)];
  }
  Vec2C vec(std::size_t edge, std::size_t i) const;
  void set_vec(std::size_t edge, std::size_t i, const Vec2C& v);

  /// Component `comp` of edge `edge` as a contiguous copy.
  std::vector<cplx> component(std::size_t edge, int comp = 0) const;

  void scale(cplx factor);

  /// Checks grid j spans [j, j+1] strictly increasingly; throws GridMismatch.
  void validate() const;

  bool same_grids(const ChainFunction& other, double tol = 1e-12) const;

 private:
  int arity_ = 1;
  std::vector<std::vector<double>> grids_;
  std::vector<std::vector<cplx>> values_;
};

ChainFunction sample_scalar(const std::vector<std::vector<double>>& grids,
                            const std::function<cplx(std::size_t, double)>& fn);
ChainFunction sample_vector(const std::vector<std::vector<double>>& grids,
                            const std::function<Vec2C(std::size_t, double)>& fn);

void write_csv(std::ostream& os, const ChainFunction& f);
ChainFunction read_csv(std::istream& is);

/// Displacement u and velocity v = du/dt of the string chain.
struct WaveState {
  ChainFunction u;
  ChainFunction v;

  /// Checks joint continuity and the clamped end u_{N-1}(N) = 0.
  void validate(double tol = 1e-8) const;
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  /// Cumulative boundary flux at the damped end, aligned with `times`.
  std::vector<double> boundary_flux;
  std::optional<double> fitted_rate;
};

void write_csv(std::ostream& os, const EnergyTrace& trace);

/// Composite Simpson weights for an odd number of points, trapezoid
/// otherwise. Grids need not be uniform.
std::vector<double> quadrature_weights(std::span<const double> x);
double integrate(std::span<const double> x, std::span<const double> f);

/// Second-order first derivative on a possibly nonuniform grid: centered in
/// the interior, one-sided three-point at both ends.
std::vector<cplx> differentiate(std::span<const double> x, std::span<const cplx> f);

double energy_wave(const WaveState& state, const ChainConfig& cfg);
double energy_first_order(const ChainFunction& v, const ChainConfig& cfg);
double energy_schrodinger(const ChainFunction& u, const ChainConfig& cfg);

/// V_j = (du_j/dt, rho_j du_j/dx) sampled on the grid of `state.u`.
ChainFunction first_order_from_wave(const WaveState& state, const ChainConfig& cfg);

}  // namespace stringchain
