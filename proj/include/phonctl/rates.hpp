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
/// Absorption, transmission and reflection rates at the thermostatted site,
/// without control and under memory feedback.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "phonctl/dispersion.hpp"
#include "phonctl/error.hpp"
#include "phonctl/spectral.hpp"

namespace phonctl {

inline constexpr double kRateTolerance = 1e-9;

struct RateTriple {
  double k = 0.0;
  double r_a = 0.0;
  double r_t = 1.0;
  double r_r = 0.0;
  bool clamped = false;

  double sum() const { return r_a + r_t + r_r; }
};

/// Rejects components beyond the tolerance, clamps the rest into [0, 1].
inline RateTriple finalize_rates(RateTriple r) {
  for (double* c : {&r.r_a, &r.r_t, &r.r_r}) {
    require(std::isfinite(*c) && *c >= -kRateTolerance && *c <= 1.0 + kRateTolerance,
            ErrorCode::kNonPhysical,
            "rate component " + std::to_string(*c) + " at k = " + std::to_string(r.k));
    if (*c < 0.0 || *c > 1.0) {
      *c = std::clamp(*c, 0.0, 1.0);
      r.clamped = true;
    }
  }
  return r;
}

inline RateTriple rates_uncontrolled_from_limit(const DispersionSpec& spec, double nu, double k,
                                                cplx lim_lc) {
  const double v = std::abs(spec.group_velocity(k));
  const cplx th = theta_from_limit(nu, lim_lc);
  RateTriple r;
  r.k = k;
  r.r_a = nu * std::norm(th) / v;
  r.r_r = nu * r.r_a / (4.0 * v);
  r.r_t = 1.0 - th.real() * nu / v + nu * r.r_a / (4.0 * v);
  return finalize_rates(r);
}

inline RateTriple rates_uncontrolled(const DispersionSpec& spec, double nu, Wavenumber k) {
  require(std::isfinite(nu) && nu >= 0.0, ErrorCode::kValidation, "friction must be >= 0");
  check_band_edge(spec, k.value(), kBandEdgeThreshold);
  if (nu == 0.0) return RateTriple{k.value(), 0.0, 1.0, 0.0, false};
  return rates_uncontrolled_from_limit(spec, nu, k.value(), lim_laplace_c_omega(spec, k));
}

inline RateTriple rates_feedback_from_limit(const DispersionSpec& spec, cplx fhat, double k,
                                            cplx lim_lc) {
  const double v = std::abs(spec.group_velocity(k));
  const cplx th = theta_f_from_limit(fhat, lim_lc);
  const double m = std::norm(fhat) * std::norm(th) / (4.0 * v * v);
  RateTriple r;
  r.k = k;
  r.r_a = -fhat.real() * std::norm(th) / v;
  r.r_t = 1.0 + (std::conj(fhat) * th).real() / v + m;
  r.r_r = m;
  return finalize_rates(r);
}

inline RateTriple rates_feedback(const DispersionSpec& spec, cplx fhat, Wavenumber k) {
  check_l1(fhat);
  return rates_feedback_from_limit(spec, fhat, k.value(), lim_laplace_c_omega(spec, k));
}

struct Uncontrolled {
  double nu = 0.0;
};

/// F^(omega(k)/2 pi) as a function of k.
struct Feedback {
  std::function<cplx(double)> fhat;
};

using RateControl = std::variant<Uncontrolled, Feedback>;

struct RatePoint {
  double k = 0.0;
  std::optional<RateTriple> rates;
  std::optional<ErrorCode> error;
  std::string message;
};

inline std::vector<RatePoint> rate_grid(const DispersionSpec& spec, const RateControl& control,
                                        std::span<const double> k_grid) {
  std::vector<RatePoint> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) {
    RatePoint p;
    p.k = k;
    try {
      if (const auto* u = std::get_if<Uncontrolled>(&control)) {
        p.rates = rates_uncontrolled(spec, u->nu, Wavenumber(k));
      } else {
        const auto& f = std::get<Feedback>(control);
        p.rates = rates_feedback(spec, f.fhat(k), Wavenumber(k));
      }
    } catch (const Error& e) {
      p.error = e.code();
      p.message = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace phonctl
