#pragma once

#include <array>
#include <cmath>

#include "wgporo/mesh.hpp"

namespace wgporo::quadrature {

/// 3-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 3> kWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
inline const std::array<double, 3> kNodes{-std::sqrt(0.6), 0.0, std::sqrt(0.6)};

/// Tensor Gauss integral over the axis-aligned cube of side `h` centred at
/// `center`; `f` receives absolute coordinates.
template <class F>
auto integrate_cell(const Point& center, double h, int dim, F&& f) {
  using R = decltype(f(center));
  R sum{};
  const int nz = dim == 3 ? 3 : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        Point x = center;
        x[0] += 0.5 * h * kNodes[i];
        x[1] += 0.5 * h * kNodes[j];
        double w = kWeights[i] * kWeights[j];
        if (dim == 3) {
          x[2] += 0.5 * h * kNodes[k];
          w *= kWeights[k];
        }
        sum += w * f(x);
      }
  return sum * std::pow(0.5 * h, dim);
}

/// Tensor Gauss integral over the facet of side `h` centred at `center`
/// with normal along `axis`.
template <class F>
auto integrate_face(const Point& center, double h, int dim, int axis, F&& f) {
  using R = decltype(f(center));
  R sum{};
  std::array<int, 2> tangent{};
  int t = 0;
  for (int c = 0; c < dim; ++c)
    if (c != axis) tangent[t++] = c;
  const int nj = dim == 3 ? 3 : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < 3; ++i) {
      Point x = center;
      x[tangent[0]] += 0.5 * h * kNodes[i];
      double w = kWeights[i];
      if (dim == 3) {
        x[tangent[1]] += 0.5 * h * kNodes[j];
        w *= kWeights[j];
      }
      sum += w * f(x);
    }
  return sum * std::pow(0.5 * h, dim - 1);
}

}  // namespace wgporo::quadrature
