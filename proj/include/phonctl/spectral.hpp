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
/// Cosine kernel C_omega, its Laplace transform, the boundary value of the
/// Laplace transform on the band, and the scattering amplitudes theta, theta_F.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "phonctl/dispersion.hpp"
#include "phonctl/error.hpp"
#include "phonctl/quadrature.hpp"

namespace phonctl {

using cplx = std::complex<double>;

inline constexpr double kBandEdgeThreshold = 1e-3;

inline double c_omega_time(const DispersionSpec& spec, double t, std::size_t nodes = 4096) {
  require(t >= 0.0, ErrorCode::kValidation, "c_omega_time needs t >= 0");
  return quad::torus_trapezoid([&](double k) { return std::cos(spec.omega(k) * t); }, nodes);
}

struct LaplaceOptions {
  std::size_t min_nodes = 4096;
  std::size_t max_nodes = std::size_t{1} << 22;
};

/// Node count resolving the near-pole of Z/(Z^2 + omega^2) when Re Z is small.
inline std::size_t laplace_nodes(const DispersionSpec& spec, double re_z, const LaplaceOptions& opt) {
  const double want = 40.0 * spec.omega_prime_bound() / (kTwoPi * re_z);
  std::size_t n = opt.min_nodes;
  while (static_cast<double>(n) < want && n < opt.max_nodes) n *= 2;
  return std::min(n, opt.max_nodes);
}

inline cplx laplace_c_omega(const DispersionSpec& spec, cplx z, const LaplaceOptions& opt = {}) {
  require(z.real() > 0.0, ErrorCode::kDomainError, "laplace_c_omega needs Re Z > 0");
  const std::size_t n = laplace_nodes(spec, z.real(), opt);
  const cplx z2 = z * z;
  const double w0sq = spec.omega0() * spec.omega0();
  const double g = spec.gamma();
  // The integrand is even in k: sum the half torus [0, 1/2] with end weights 1/2.
  const double h = 1.0 / static_cast<double>(n);
  cplx sum{};
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j <= half; ++j) {
    const double k = h * static_cast<double>(j);
    const double wsq = w0sq + g * (1.0 - std::cos(kTwoPi * k));
    const cplx term = z / (z2 + wsq);
    sum += (j == 0 || j == half) ? term : 2.0 * term;
  }
  return sum * h;
}

enum class LimLcMethod { kClosedForm, kNumericOracle };

/// Placement of 1/|omega'| in the closed form. kJointScale divides both the
/// logarithm and C_{omega,0}; kSplitScale divides only C_{omega,0}.
enum class LimLcReading { kJointScale, kSplitScale };

struct LimLcOptions {
  LimLcReading reading = LimLcReading::kJointScale;
  double z0 = 1.0;
  int j_first = 4;
  int j_last = 14;
  double band_edge_threshold = kBandEdgeThreshold;
  double quad_tol = 1e-10;
};

/// C_{omega,0}(omega(k)) written in the variable h = phi_+(w).
inline double c_omega_0(const DispersionSpec& spec, double k, double tol = 1e-10) {
  k = std::abs(wrap_torus(k));
  const double wk = spec.omega(k);
  const double wpk = spec.omega_prime(k);
  auto g = [&](double h) {
    const double dw = wk - spec.omega(h);
    if (dw == 0.0) return spec.omega_second(k) / wpk;
    return (wpk - spec.omega_prime(h)) / dw;
  };
  double s = 0.0;
  if (k > 0.0) s += quad::adaptive(g, 0.0, k, tol, 8);
  if (k < 0.5) s += quad::adaptive(g, k, 0.5, tol, 8);
  return s;
}

inline void check_band_edge(const DispersionSpec& spec, double k, double threshold) {
  const double wp = std::abs(spec.omega_prime(k));
  require(wp >= threshold && k != 0.0 && std::abs(k) != 0.5, ErrorCode::kBandEdge,
          "|omega'(" + std::to_string(k) + ")| = " + std::to_string(wp) + " below band-edge threshold");
}

inline cplx lim_laplace_closed_form(const DispersionSpec& spec, double k, const LimLcOptions& opt) {
  const double wk = spec.omega(k);
  const double awp = std::abs(spec.omega_prime(k));
  const double a = quad::adaptive([&](double h) { return 1.0 / (wk + spec.omega(h)); }, 0.0, 0.5,
                                  opt.quad_tol);
  const double lg = std::log((wk - spec.omega_min()) / (spec.omega_max() - wk));
  const double c0 = c_omega_0(spec, k, opt.quad_tol);
  const double im = opt.reading == LimLcReading::kJointScale ? a + (lg + c0) / awp
                                                           : a + lg + c0 / awp;
  return {kPi / awp, im};
}

inline cplx lim_laplace_oracle(const DispersionSpec& spec, double k, const LimLcOptions& opt) {
  const double wk = spec.omega(k);
  const int count = opt.j_last - opt.j_first + 1;
  require(count >= 3, ErrorCode::kValidation, "oracle needs at least three Z values");
  std::vector<cplx> l(count), r1(count), r2(count);
  for (int i = 0; i < count; ++i) {
    const double re = std::ldexp(opt.z0, -(opt.j_first + i));
    l[i] = laplace_c_omega(spec, cplx(re, -wk));
  }
  for (int i = 1; i < count; ++i) r1[i] = 2.0 * l[i] - l[i - 1];
  for (int i = 2; i < count; ++i) r2[i] = (4.0 * r1[i] - r1[i - 1]) / 3.0;
  return r2[count - 1];
}

/// Limit of L(C_omega)(Z - i omega(k)) as Z -> 0+. Even in k.
inline cplx lim_laplace_c_omega(const DispersionSpec& spec, Wavenumber kw,
                                LimLcMethod method = LimLcMethod::kClosedForm,
                                const LimLcOptions& opt = {}) {
  const double k = std::abs(kw.value());
  check_band_edge(spec, k, opt.band_edge_threshold);
  return method == LimLcMethod::kClosedForm ? lim_laplace_closed_form(spec, k, opt)
                                            : lim_laplace_oracle(spec, k, opt);
}

inline cplx theta_from_limit(double nu, cplx lim_lc) { return 1.0 / (1.0 + nu * lim_lc); }

inline void check_l1(cplx fhat) {
  require(fhat.real() < 0.0, ErrorCode::kAssumptionL1Violated,
          "Re F^ = " + std::to_string(fhat.real()) + " is not negative");
}

inline cplx theta_f_from_limit(cplx fhat, cplx lim_lc) {
  check_l1(fhat);
  return 1.0 / (1.0 - std::conj(fhat) * lim_lc);
}

inline cplx theta(const DispersionSpec& spec, double nu, Wavenumber k) {
  require(nu >= 0.0, ErrorCode::kValidation, "friction must be non-negative");
  if (nu == 0.0) return {1.0, 0.0};
  return theta_from_limit(nu, lim_laplace_c_omega(spec, k));
}

inline cplx theta_f(const DispersionSpec& spec, cplx fhat, Wavenumber k) {
  check_l1(fhat);
  return theta_f_from_limit(fhat, lim_laplace_c_omega(spec, k));
}

struct SpectralPoint {
  double k = 0.0;
  cplx lim_lc;
  cplx theta;
};

}  // namespace phonctl
