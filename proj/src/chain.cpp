#include "stringchain/chain.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace stringchain {

double ChainConfig::speed(std::size_t j) const { return std::sqrt(density(j)); }

ChainConfig validate_config(ChainConfig cfg) {
  if (cfg.densities.empty()) throw Error(ErrorCode::EmptyChain, "chain needs at least one edge");
  for (std::size_t j = 0; j < cfg.densities.size(); ++j) {
    const double rho = cfg.densities[j];
    if (!std::isfinite(rho) || rho <= 0.0) {
      std::ostringstream msg;
      msg << "density of edge " << j << " is " << rho;
      throw Error(ErrorCode::NonPositiveDensity, msg.str());
    }
  }
  return cfg;
}

ChainConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("densities") || !j["densities"].is_array())
    throw Error(ErrorCode::ParseError, "config must be an object with a \"densities\" array");
  ChainConfig cfg;
  for (const auto& v : j["densities"]) {
    if (!v.is_number()) throw Error(ErrorCode::ParseError, "densities must be numbers");
    cfg.densities.push_back(v.get<double>());
  }
  return validate_config(std::move(cfg));
}

nlohmann::json config_to_json(const ChainConfig& cfg) {
  return nlohmann::json{{"densities", cfg.densities}};
}

ChainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return config_from_json(j);
}

std::size_t BetaGrid::count() const {
  if (!(step > 0.0) || !(max >= min) || !std::isfinite(min) || !std::isfinite(max))
    throw Error(ErrorCode::EmptyScan, "scan range is empty");
  // Tolerate the last point landing a rounding error past max.
  return static_cast<std::size_t>(std::floor((max - min) / step * (1.0 + 1e-12) + 1e-9)) + 1;
}

ChainFunction::ChainFunction(int arity, std::vector<std::vector<double>> grids)
    : arity_(arity), grids_(std::move(grids)) {
  if (arity_ != 1 && arity_ != 2) throw Error(ErrorCode::ArityMismatch, "arity must be 1 or 2");
  values_.resize(grids_.size());
  for (std::size_t j = 0; j < grids_.size(); ++j)
    values_[j].assign(grids_[j].size() * static_cast<std::size_t>(arity_), cplx{});
}

ChainFunction ChainFunction::uniform(std::size_t n_edges, std::size_t points, int arity) {
  if (points < 2) throw Error(ErrorCode::GridMismatch, "need at least two points per edge");
  std::vector<std::vector<double>> grids(n_edges);
  const double h = 1.0 / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < n_edges; ++j) {
    grids[j].resize(points);
    for (std::size_t i = 0; i < points; ++i)
      grids[j][i] = static_cast<double>(j) + h * static_cast<double>(i);
    grids[j].back() = static_cast<double>(j + 1);
  }
  return ChainFunction(arity, std::move(grids));
}

Vec2C ChainFunction::vec(std::size_t edge, std::size_t i) const {
  if (arity_ != 2) throw Error(ErrorCode::ArityMismatch, "vec() needs arity 2");
  return Vec2C(at(edge, i, 0), at(edge, i, 1));
}

void ChainFunction::set_vec(std::size_t edge, std::size_t i, const Vec2C& v) {
  if (arity_ != 2) throw Error(ErrorCode::ArityMismatch, "set_vec() needs arity 2");
  at(edge, i, 0) = v(0);
  at(edge, i, 1) = v(1);
}

std::vector<cplx> ChainFunction::component(std::size_t edge, int comp) const {
  if (comp < 0 || comp >= arity_) throw Error(ErrorCode::ArityMismatch, "component out of range");
  std::vector<cplx> out(size(edge));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(edge, i, comp);
  return out;
}

void ChainFunction::scale(cplx factor) {
  for (auto& edge : values_)
    for (auto& v : edge) v *= factor;
}

void ChainFunction::validate() const {
  for (std::size_t j = 0; j < grids_.size(); ++j) {
    const auto& g = grids_[j];
    const double a = static_cast<double>(j);
    if (g.size() < 2 || std::abs(g.front() - a) > 1e-12 || std::abs(g.back() - (a + 1.0)) > 1e-12) {
      std::ostringstream msg;
      msg << "grid of edge " << j << " does not span [" << j << ", " << j + 1 << "]";
      throw Error(ErrorCode::GridMismatch, msg.str());
    }
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1]))
        throw Error(ErrorCode::GridMismatch, "grid is not strictly increasing");
  }
}

bool ChainFunction::same_grids(const ChainFunction& other, double tol) const {
  if (other.n_edges() != n_edges()) return false;
  for (std::size_t j = 0; j < n_edges(); ++j) {
    if (other.size(j) != size(j)) return false;
    for (std::size_t i = 0; i < size(j); ++i)
      if (std::abs(other.grids_[j][i] - grids_[j][i]) > tol) return false;
  }
  return true;
}

ChainFunction sample_scalar(const std::vector<std::vector<double>>& grids,
                            const std::function<cplx(std::size_t, double)>& fn) {
  ChainFunction f(1, grids);
  for (std::size_t j = 0; j < grids.size(); ++j)
    for (std::size_t i = 0; i < grids[j].size(); ++i) f.at(j, i) = fn(j, grids[j][i]);
  return f;
}

ChainFunction sample_vector(const std::vector<std::vector<double>>& grids,
                            const std::function<Vec2C(std::size_t, double)>& fn) {
  ChainFunction f(2, grids);
  for (std::size_t j = 0; j < grids.size(); ++j)
    for (std::size_t i = 0; i < grids[j].size(); ++i) f.set_vec(j, i, fn(j, grids[j][i]));
  return f;
}

void write_csv(std::ostream& os, const ChainFunction& f) {
  os << (f.arity() == 2 ? "edge,x,re,im,re2,im2\n" : "edge,x,re,im\n");
  os << std::setprecision(17);
  for (std::size_t j = 0; j < f.n_edges(); ++j) {
    for (std::size_t i = 0; i < f.size(j); ++i) {
      os << j << ',' << f.grid(j)[i];
      for (int c = 0; c < f.arity(); ++c) os << ',' << f.at(j, i, c).real() << ',' << f.at(j, i, c).imag();
      os << '\n';
    }
  }
}

ChainFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "empty CSV");
  int arity = 0;
  if (line.rfind("edge,x,re,im,re2,im2", 0) == 0) arity = 2;
  else if (line.rfind("edge,x,re,im", 0) == 0) arity = 1;
  else throw Error(ErrorCode::ParseError, "unexpected CSV header: " + line);

  std::map<std::size_t, std::vector<std::pair<double, std::vector<cplx>>>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> fields;
    while (std::getline(ss, cell, ',')) {
      try {
        fields.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad CSV field: " + cell);
      }
    }
    if (fields.size() != static_cast<std::size_t>(2 + 2 * arity))
      throw Error(ErrorCode::ArityMismatch, "CSV row has wrong column count: " + line);
    std::vector<cplx> vals;
    for (int c = 0; c < arity; ++c) vals.emplace_back(fields[2 + 2 * c], fields[3 + 2 * c]);
    rows[static_cast<std::size_t>(fields[0])].emplace_back(fields[1], std::move(vals));
  }
  std::vector<std::vector<double>> grids;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (!rows.count(j)) throw Error(ErrorCode::GridMismatch, "CSV edges are not contiguous");
    std::vector<double> g;
    for (const auto& r : rows[j]) g.push_back(r.first);
    grids.push_back(std::move(g));
  }
  ChainFunction f(arity, std::move(grids));
  for (std::size_t j = 0; j < f.n_edges(); ++j)
    for (std::size_t i = 0; i < f.size(j); ++i)
      for (int c = 0; c < arity; ++c) f.at(j, i, c) = rows[j][i].second[static_cast<std::size_t>(c)];
  f.validate();
  return f;
}

void WaveState::validate(double tol) const {
  u.validate();
  v.validate();
  if (u.arity() != 1 || v.arity() != 1) throw Error(ErrorCode::ArityMismatch, "wave state is scalar");
  if (!u.same_grids(v)) throw Error(ErrorCode::GridMismatch, "u and v grids differ");
  const std::size_t n = u.n_edges();
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(u.at(j - 1, u.size(j - 1) - 1) - u.at(j, 0)) > tol)
      throw Error(ErrorCode::GridMismatch, "displacement is discontinuous at a joint");
  }
  if (std::abs(u.at(n - 1, u.size(n - 1) - 1)) > tol)
    throw Error(ErrorCode::GridMismatch, "clamped end u_{N-1}(N) is not zero");
}

void write_csv(std::ostream& os, const EnergyTrace& trace) {
  os << "t,E,boundary_flux_cum\n" << std::setprecision(17);
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    os << trace.times[i] << ',' << trace.energies[i] << ',' << trace.boundary_flux[i] << '\n';
}

std::vector<double> quadrature_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  if (n % 2 == 1 && n >= 3) {
    // Nonuniform composite Simpson over consecutive pairs of cells.
    for (std::size_t i = 0; i + 2 < n; i += 2) {
      const double h0 = x[i + 1] - x[i];
      const double h1 = x[i + 2] - x[i + 1];
      const double s = (h0 + h1) / 6.0;
      w[i] += s * (2.0 - h1 / h0);
      w[i + 1] += s * (h0 + h1) * (h0 + h1) / (h0 * h1);
      w[i + 2] += s * (2.0 - h0 / h1);
    }
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double h = x[i + 1] - x[i];
      w[i] += 0.5 * h;
      w[i + 1] += 0.5 * h;
    }
  }
  return w;
}

double integrate(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) throw Error(ErrorCode::GridMismatch, "integrand length mismatch");
  const auto w = quadrature_weights(x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f[i];
  return s;
}

std::vector<cplx> differentiate(std::span<const double> x, std::span<const cplx> f) {
  const std::size_t n = x.size();
  if (n != f.size()) throw Error(ErrorCode::GridMismatch, "derivative length mismatch");
  if (n < 3) throw Error(ErrorCode::GridMismatch, "need at least three points per edge");
  std::vector<cplx> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    d[i] = -h1 / (h0 * (h0 + h1)) * f[i - 1] + (h1 - h0) / (h0 * h1) * f[i] +
           h0 / (h1 * (h0 + h1)) * f[i + 1];
  }
  {
    const double h0 = x[1] - x[0];
    const double h1 = x[2] - x[1];
    d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * f[0] + (h0 + h1) / (h0 * h1) * f[1] -
           h0 / (h1 * (h0 + h1)) * f[2];
  }
  {
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    d[n - 1] = h1 / (h0 * (h0 + h1)) * f[n - 3] - (h0 + h1) / (h0 * h1) * f[n - 2] +
               (2.0 * h1 + h0) / (h1 * (h0 + h1)) * f[n - 1];
  }
  return d;
}

namespace {

void check_edges(const ChainFunction& f, const ChainConfig& cfg) {
  if (f.n_edges() != cfg.n_edges())
    throw Error(ErrorCode::GridMismatch, "function and config disagree on the number of edges");
  f.validate();
}

}  // namespace

double energy_wave(const WaveState& state, const ChainConfig& cfg) {
  check_edges(state.u, cfg);
  check_edges(state.v, cfg);
  if (!state.u.same_grids(state.v)) throw Error(ErrorCode::GridMismatch, "u and v grids differ");
  if (state.u.arity() != 1 || state.v.arity() != 1)
    throw Error(ErrorCode::ArityMismatch, "wave state must be scalar");
  double e = 0.0;
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) {
    const auto x = state.u.grid(j);
    const auto u = state.u.component(j);
    const auto ux = differentiate(x, u);
    std::vector<double> dens(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      dens[i] = std::norm(state.v.at(j, i)) + cfg.density(j) * std::norm(ux[i]);
    e += integrate(x, dens);
  }
  return 0.5 * e;
}

double energy_first_order(const ChainFunction& v, const ChainConfig& cfg) {
  if (v.arity() != 2) throw Error(ErrorCode::ArityMismatch, "first-order state has 2 components");
  check_edges(v, cfg);
  double e = 0.0;
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) {
    const auto x = v.grid(j);
    std::vector<double> dens(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      dens[i] = cfg.density(j) * std::norm(v.at(j, i, 0)) + std::norm(v.at(j, i, 1));
    e += integrate(x, dens);
  }
  return 0.5 * e;
}

double energy_schrodinger(const ChainFunction& u, const ChainConfig& cfg) {
  if (u.arity() != 1) throw Error(ErrorCode::ArityMismatch, "Schrodinger state is scalar");
  check_edges(u, cfg);
  double e = 0.0;
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) {
    const auto x = u.grid(j);
    std::vector<double> dens(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dens[i] = std::norm(u.at(j, i));
    e += integrate(x, dens);
  }
  return 0.5 * e;
}

ChainFunction first_order_from_wave(const WaveState& state, const ChainConfig& cfg) {
  check_edges(state.u, cfg);
  if (!state.u.same_grids(state.v)) throw Error(ErrorCode::GridMismatch, "u and v grids differ");
  ChainFunction out(2, state.u.grids());
  for (std::size_t j = 0; j < cfg.n_edges(); ++j) {
    const auto ux = differentiate(state.u.grid(j), state.u.component(j));
    for (std::size_t i = 0; i < ux.size(); ++i)
      out.set_vec(j, i, Vec2C(state.v.at(j, i), cfg.density(j) * ux[i]));
  }
  return out;
}

}  // namespace stringchain
