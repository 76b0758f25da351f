// Copyright 2026 The phonctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

/// @file
/// Quadrature helpers: periodic trapezoid on the torus and adaptive Gauss-Kronrod.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cstddef>
#include <type_traits>

namespace phonctl::quad {

/// Trapezoid rule on the unit torus with nodes k_j = -1/2 + j/n.
template <class F>
auto torus_trapezoid(F&& f, std::size_t n) {
  using R = std::invoke_result_t<F, double>;
  R sum{};
  const double h = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) sum += f(-0.5 + h * static_cast<double>(j));
  return sum * h;
}

/// Adaptive 31-point Gauss-Kronrod on [a, b].
template <class F>
double adaptive(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 20) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol,
                                                                         &err);
}

/// Composite trapezoid weights for n uniform samples with spacing h.
inline double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace phonctl::quad
