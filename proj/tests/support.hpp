#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "stringchain/chain.hpp"

namespace testing {

using stringchain::ChainConfig;
using stringchain::ChainFunction;
using stringchain::cplx;

/// Relative L2 distance of a from b, using the quadrature of b's grid.
inline double rel_l2(const ChainFunction& a, const ChainFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < b.n_edges(); ++j) {
    const auto w = stringchain::quadrature_weights(b.grid(j));
    for (std::size_t i = 0; i < w.size(); ++i)
      for (int c = 0; c < b.arity(); ++c) {
        num += w[i] * std::norm(a.at(j, i, c) - b.at(j, i, c));
        den += w[i] * std::norm(b.at(j, i, c));
      }
  }
  return std::sqrt(num / den);
}

inline double l2(const ChainFunction& a) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.n_edges(); ++j) {
    const auto w = stringchain::quadrature_weights(a.grid(j));
    for (std::size_t i = 0; i < w.size(); ++i)
      for (int c = 0; c < a.arity(); ++c) s += w[i] * std::norm(a.at(j, i, c));
  }
  return std::sqrt(s);
}

inline ChainConfig random_config(std::mt19937_64& rng, int n_min, int n_max) {
  std::uniform_int_distribution<int> n(n_min, n_max);
  std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
  ChainConfig cfg;
  const int edges = n(rng);
  for (int j = 0; j < edges; ++j) cfg.densities.push_back(std::exp(log_rho(rng)));
  return cfg;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("stringchain_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
