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
/// Nearest-neighbour dispersion relation on the unit torus:
/// omega(k) = sqrt(omega0^2 + gamma (1 - cos 2 pi k)).

#include <cmath>
#include <numbers>
#include <string>

#include "phonctl/error.hpp"

namespace phonctl {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Centered representative of k modulo 1 in (-1/2, 1/2]; -1/2 maps to +1/2.
inline double wrap_torus(double k) {
  double r = k - std::floor(k + 0.5);
  if (r <= -0.5) r += 1.0;
  return r == -0.5 ? 0.5 : r;
}

class Wavenumber {
 public:
  constexpr Wavenumber() = default;
  explicit Wavenumber(double k) : k_(wrap_torus(k)) {}
  double value() const { return k_; }
  Wavenumber operator-() const { return Wavenumber(-k_); }

 private:
  double k_ = 0.0;
};

class DispersionSpec {
 public:
  DispersionSpec(double omega0, double gamma) : omega0_(omega0), gamma_(gamma) {
    require(std::isfinite(omega0) && omega0 > 0.0, ErrorCode::kValidation,
            "omega0 must be positive and finite");
    require(std::isfinite(gamma) && gamma > 0.0, ErrorCode::kValidation,
            "gamma must be positive and finite");
  }

  double omega0() const { return omega0_; }
  double gamma() const { return gamma_; }
  double omega_min() const { return omega0_; }
  double omega_max() const { return std::sqrt(omega0_ * omega0_ + 2.0 * gamma_); }

  double omega(double k) const {
    return std::sqrt(omega0_ * omega0_ + gamma_ * (1.0 - std::cos(kTwoPi * k)));
  }
  double omega_prime(double k) const {
    return gamma_ * kPi * std::sin(kTwoPi * k) / omega(k);
  }
  double omega_second(double k) const {
    const double w = omega(k);
    const double wp = omega_prime(k);
    return (2.0 * kPi * kPi * gamma_ * std::cos(kTwoPi * k) - wp * wp) / w;
  }
  double group_velocity(double k) const { return omega_prime(k) / kTwoPi; }

  /// Upper bound of |omega'| on the torus (attained nowhere, used for grid sizing).
  double omega_prime_bound() const { return gamma_ * kPi / omega0_; }

 private:
  double omega0_;
  double gamma_;
};

struct DispersionPoint {
  Wavenumber k;
  double omega = 0.0;
  double omega_prime = 0.0;
  double v_g = 0.0;
};

inline DispersionPoint evaluate(const DispersionSpec& spec, Wavenumber k) {
  DispersionPoint p;
  p.k = k;
  p.omega = spec.omega(k.value());
  p.omega_prime = spec.omega_prime(k.value());
  p.v_g = p.omega_prime / kTwoPi;
  return p;
}

enum class Branch { kPositive, kNegative };

inline Wavenumber phi_inverse(const DispersionSpec& spec, double wbar, Branch branch) {
  require(std::isfinite(wbar) && wbar >= spec.omega_min() && wbar <= spec.omega_max(),
          ErrorCode::kOutOfBand, "frequency " + std::to_string(wbar) + " outside the band");
  const double w0 = spec.omega0();
  double s = std::sqrt((wbar * wbar - w0 * w0) / (2.0 * spec.gamma()));
  s = std::min(s, 1.0);
  const double k = std::asin(s) / kPi;
  return Wavenumber(branch == Branch::kPositive ? k : -k);
}

/// phi_1 with phi'_+(w) = phi_1(w) / sqrt(w - omega_min) near the lower edge.
inline double phi1(const DispersionSpec& spec, double w) {
  const double w0 = spec.omega0();
  const double g = spec.gamma();
  return w / (kPi * std::sqrt(w + w0) * std::sqrt(2.0 * g - (w * w - w0 * w0)));
}

/// phi_2 with phi'_+(w) = phi_2(w) / sqrt(omega_max - w) near the upper edge.
inline double phi2(const DispersionSpec& spec, double w) {
  const double w0 = spec.omega0();
  return w / (kPi * std::sqrt(spec.omega_max() + w) * std::sqrt(w * w - w0 * w0));
}

enum class Difference { kCentral, kPlus, kMinus };

inline double d_epsilon(const DispersionSpec& spec, Wavenumber k, double xi, double eps,
                        Difference variant) {
  require(eps > 0.0, ErrorCode::kValidation, "eps must be positive");
  const double kv = k.value();
  switch (variant) {
    case Difference::kCentral:
      return (spec.omega(wrap_torus(kv + 0.5 * eps * xi)) -
              spec.omega(wrap_torus(kv - 0.5 * eps * xi))) / eps;
    case Difference::kPlus:
      return (spec.omega(wrap_torus(kv + eps * xi)) - spec.omega(kv)) / eps;
    case Difference::kMinus:
      return (spec.omega(kv) - spec.omega(wrap_torus(kv - eps * xi))) / eps;
  }
  return 0.0;
}

struct AssumptionReport {
  bool sigma_even = false;
  bool sigma_positive = false;
  bool omega_monotone = false;
  bool edge_min_regular = false;
  bool edge_max_regular = false;
  double max_even_defect = 0.0;
  double edge_min_product = 0.0;
  double edge_min_limit = 0.0;
  double edge_max_product = 0.0;
  double edge_max_limit = 0.0;

  bool all_pass() const {
    return sigma_even && sigma_positive && omega_monotone && edge_min_regular && edge_max_regular;
  }
};

inline AssumptionReport check_assumptions(const DispersionSpec& spec, int grid = 1024) {
  AssumptionReport r;
  r.sigma_positive = true;
  for (int j = 0; j < grid; ++j) {
    const double k = -0.5 + static_cast<double>(j) / grid;
    const double s = spec.omega(k) * spec.omega(k);
    const double sm = spec.omega(-k) * spec.omega(-k);
    r.max_even_defect = std::max(r.max_even_defect, std::abs(s - sm));
    if (!(s > 0.0)) r.sigma_positive = false;
  }
  r.sigma_even = r.max_even_defect <= 1e-14;

  r.omega_monotone = true;
  double prev = spec.omega(0.0);
  for (int j = 1; j <= grid / 2; ++j) {
    const double w = spec.omega(static_cast<double>(j) / grid);
    if (!(w > prev)) r.omega_monotone = false;
    prev = w;
  }

  // One-sided difference quotients of phi_+ a short distance inside each edge.
  const double h = 1e-6;
  const double wmin = spec.omega_min();
  const double wmax = spec.omega_max();
  auto phi = [&](double w) { return phi_inverse(spec, w, Branch::kPositive).value(); };
  const double d_lo = 1e-4 * (wmax - wmin);
  const double w_lo = wmin + d_lo;
  const double dphi_lo = (phi(w_lo + h) - phi(w_lo)) / h;
  r.edge_min_product = dphi_lo * std::sqrt(w_lo + 0.5 * h - wmin);
  r.edge_min_limit = phi1(spec, wmin);
  r.edge_min_regular = std::abs(r.edge_min_product - r.edge_min_limit) < 1e-3 * r.edge_min_limit;

  const double w_hi = wmax - d_lo;
  const double dphi_hi = (phi(w_hi) - phi(w_hi - h)) / h;
  r.edge_max_product = dphi_hi * std::sqrt(wmax - (w_hi - 0.5 * h));
  r.edge_max_limit = phi2(spec, wmax);
  r.edge_max_regular = std::abs(r.edge_max_product - r.edge_max_limit) < 1e-3 * r.edge_max_limit;
  return r;
}

}  // namespace phonctl
