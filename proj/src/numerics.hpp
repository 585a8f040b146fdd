#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "stringchain/chain.hpp"

namespace stringchain::detail {

/// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

/// Finite-difference weights at x0 for derivatives 0..order on arbitrary nodes.
/// Returns w[d][k] for derivative d and node k.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int order);

/// Derivative of given order on a grid with a five-point stencil (shifted at
/// the ends).
std::vector<cplx> derivative5(std::span<const double> x, std::span<const cplx> f, int order);

/// Linear interpolation of component `comp` of edge `edge` at x.
cplx interpolate(const ChainFunction& f, std::size_t edge, double x, int comp);

/// Largest cell width of a grid.
double max_cell(std::span<const double> x);

/// Largest eigenvalue of the Gram ratio <A v, A v> / <v, v> over the span of
/// the given sources, where `src_gram` and `out_gram` are the Gram matrices
/// of sources and outputs in the same inner product order. Sources whose
/// Gram-Schmidt remainder falls below 1e-10 of their norm are skipped, which
/// keeps nested probe sets nested.
double span_gain(const Eigen::MatrixXcd& src_gram, const Eigen::MatrixXcd& out_gram);

}  // namespace stringchain::detail
