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
/// Feedback control synthesis: admissibility of target rates, the frequency
/// design (RE, IM, FT, TH, Fbar), time-domain controls with smooth cutoff,
/// half-line Fourier transforms and round-trip rate recovery.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phonctl/dispersion.hpp"
#include "phonctl/error.hpp"
#include "phonctl/rates.hpp"
#include "phonctl/spectral.hpp"

namespace phonctl {

struct TargetRates {
  std::vector<double> k;
  std::vector<double> r_a;
  std::vector<double> r_t;
  std::vector<double> r_r;
  double c1 = 0.0;

  std::size_t size() const { return k.size(); }

  /// Linear interpolation in k, constant beyond the sampled range.
  RateTriple at(double kv) const {
    kv = std::abs(kv);
    if (kv <= k.front()) return {kv, r_a.front(), r_t.front(), r_r.front(), false};
    if (kv >= k.back()) return {kv, r_a.back(), r_t.back(), r_r.back(), false};
    const auto it = std::upper_bound(k.begin(), k.end(), kv);
    const std::size_t j = static_cast<std::size_t>(it - k.begin());
    const double w = (kv - k[j - 1]) / (k[j] - k[j - 1]);
    auto lerp = [&](const std::vector<double>& f) { return (1.0 - w) * f[j - 1] + w * f[j]; };
    return {kv, lerp(r_a), lerp(r_t), lerp(r_r), false};
  }
};

struct CheckResult {
  std::string name;
  bool ran = false;
  bool passed = false;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<CheckResult> checks;

  bool admissible() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return !c.ran || c.passed; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (c.ran && !c.passed) out.push_back(c.name);
    return out;
  }
};

struct TargetCheckOptions {
  double sum_tolerance = 1e-6;
  double h5_tolerance = 1e-12;
  double max_jump = 0.1;
};

inline AdmissibilityReport check_targets(const TargetRates& tr, const TargetCheckOptions& opt = {}) {
  AdmissibilityReport rep;
  const std::size_t n = tr.size();
  const bool shape_ok = n > 0 && tr.r_a.size() == n && tr.r_t.size() == n && tr.r_r.size() == n;

  CheckResult grid{"grid", true, shape_ok, ""};
  if (shape_ok) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!(tr.k[i] > 0.0 && tr.k[i] < 0.5) || (i > 0 && !(tr.k[i] > tr.k[i - 1]))) {
        grid.passed = false;
        grid.detail = "k must be strictly increasing inside (0, 1/2); offending k = " +
                      std::to_string(tr.k[i]);
        break;
      }
    }
  } else {
    grid.detail = "columns must be non-empty and of equal length";
  }
  rep.checks.push_back(grid);
  rep.checks.push_back({"H1", true, true, "evenness holds by restriction to (0, 1/2)"});
  if (!grid.passed) return rep;

  CheckResult h2{"H2", true, true, ""}, h3{"H3", true, tr.c1 > 0.0, ""}, h4{"H4", true, true, ""},
      h5{"H5", true, true, ""};
  if (!(tr.c1 > 0.0)) h3.detail = "c1 must be positive";
  for (std::size_t i = 0; i < n; ++i) {
    const double s = tr.r_a[i] + tr.r_t[i] + tr.r_r[i];
    if (h2.passed && std::abs(s - 1.0) > opt.sum_tolerance) {
      h2.passed = false;
      h2.detail = "sum " + std::to_string(s) + " at k = " + std::to_string(tr.k[i]);
    }
    if (h3.passed && !(tr.r_t[i] > 0.0 && tr.r_r[i] > 0.0 && tr.r_a[i] >= tr.c1)) {
      h3.passed = false;
      h3.detail = "need r_t > 0, r_r > 0, r_a >= c1 at k = " + std::to_string(tr.k[i]);
    }
    if (h5.passed && tr.r_t[i] >= 0.0 && tr.r_r[i] >= 0.0 &&
        std::sqrt(tr.r_t[i]) + std::sqrt(tr.r_r[i]) < 1.0 - opt.h5_tolerance) {
      h5.passed = false;
      h5.detail = "sqrt(r_t) + sqrt(r_r) < 1 at k = " + std::to_string(tr.k[i]);
    }
    if (h4.passed && i > 0) {
      const double jump = std::max({std::abs(tr.r_a[i] - tr.r_a[i - 1]),
                                    std::abs(tr.r_t[i] - tr.r_t[i - 1]),
                                    std::abs(tr.r_r[i] - tr.r_r[i - 1])});
      if (jump > opt.max_jump) {
        h4.passed = false;
        h4.detail = "jump " + std::to_string(jump) + " between neighbouring grid points";
      }
    }
  }
  rep.checks.push_back(h2);
  rep.checks.push_back(h3);
  rep.checks.push_back(h4);
  rep.checks.push_back(h5);
  rep.checks.push_back({"H6", false, false, "evaluated after the frequency design"});
  return rep;
}

struct DesignPoint {
  double k = 0.0;
  double v_g = 0.0;
  double re = 0.0;
  double im = 0.0;
  cplx ft;
  cplx th;
  cplx fbar;
};

/// RE, IM, FT, TH and Fbar = FT/TH at one wavenumber, given the boundary value of L(C_omega).
inline DesignPoint design_point(const DispersionSpec& spec, const RateTriple& r, cplx lim_lc) {
  DesignPoint p;
  p.k = r.k;
  p.v_g = std::abs(spec.group_velocity(r.k));
  p.re = p.v_g * (r.r_t - r.r_r - 1.0);
  const double disc = 4.0 * p.v_g * p.v_g * r.r_r - p.re * p.re;
  p.im = std::sqrt(std::max(disc, 0.0));
  p.ft = {p.re, p.im};
  p.th = 1.0 + p.ft * lim_lc;
  p.fbar = p.ft / p.th;
  return p;
}

struct DesignOptions {
  std::size_t u_nodes = 2048;
  double edge_margin = 1e-4;
};

struct FrequencyDesign {
  DispersionSpec spec;
  double c1 = 0.0;
  std::vector<DesignPoint> points;
  std::vector<double> u;
  std::vector<cplx> fbar;
  double min_th = 0.0;
  bool th_bound_ok = false;
  bool fbar_bound_ok = false;
  double min_disc = 0.0;
};

inline FrequencyDesign build_frequency_design(const TargetRates& tr, const DispersionSpec& spec,
                                              const DesignOptions& opt = {}) {
  const auto rep = check_targets(tr);
  for (const char* h : {"grid", "H2", "H3", "H5"}) {
    const auto* c = rep.find(h);
    require(c && c->passed, ErrorCode::kValidation,
            std::string("targets fail ") + h + (c ? ": " + c->detail : ""));
  }
  FrequencyDesign d{spec, tr.c1, {}, {}, {}, 0.0, true, true, 0.0};
  d.min_th = std::numeric_limits<double>::infinity();
  d.min_disc = std::numeric_limits<double>::infinity();
  auto add_point = [&](const RateTriple& r) {
    const cplx l = lim_laplace_c_omega(spec, Wavenumber(r.k));
    DesignPoint p = design_point(spec, r, l);
    const double th = std::abs(p.th);
    require(th >= tr.c1 / 8.0, ErrorCode::kDegenerateTH,
            "|TH| = " + std::to_string(th) + " at k = " + std::to_string(r.k));
    d.min_th = std::min(d.min_th, th);
    d.min_disc = std::min(d.min_disc, 4.0 * p.v_g * p.v_g * r.r_r - p.re * p.re);
    if (th < tr.c1 / 4.0) d.th_bound_ok = false;
    if (std::abs(p.fbar) > 8.0 * p.v_g * r.r_r / tr.c1) d.fbar_bound_ok = false;
    return p;
  };
  for (std::size_t i = 0; i < tr.size(); ++i)
    d.points.push_back(add_point({tr.k[i], tr.r_a[i], tr.r_t[i], tr.r_r[i], false}));

  const double wmin = spec.omega_min(), wmax = spec.omega_max();
  const double delta = opt.edge_margin * (wmax - wmin);
  d.u.resize(opt.u_nodes);
  d.fbar.resize(opt.u_nodes);
  for (std::size_t i = 0; i < opt.u_nodes; ++i) {
    const double u = wmin + delta + (wmax - wmin - 2.0 * delta) * static_cast<double>(i) /
                                        static_cast<double>(opt.u_nodes - 1);
    d.u[i] = u;
    const double k = phi_inverse(spec, u, Branch::kPositive).value();
    d.fbar[i] = add_point(tr.at(k)).fbar;
  }
  return d;
}

/// Quintic smoothstep: 1 on [0, N], 0 on [N+1, inf).
inline double smooth_cutoff(double t, int n) {
  const double s = t - static_cast<double>(n);
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

struct SynthesizedControl {
  std::vector<double> t;
  std::vector<double> f;
  int n_cutoff = 0;
  std::vector<double> f_n;
  std::vector<double> k;
  std::vector<cplx> fhat;
  // Set for least-squares controls: F = sum_j coeffs[j] hat((t - j h)/h).
  double hat_spacing = 0.0;
  std::vector<double> coeffs;

  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }

  double f_n_at(double tv) const {
    if (tv < 0.0 || (n_cutoff > 0 && tv >= n_cutoff + 1.0)) return 0.0;
    if (!coeffs.empty()) {
      const double x = tv / hat_spacing;
      const auto j = static_cast<std::size_t>(std::floor(x));
      const double w = x - static_cast<double>(j);
      double v = 0.0;
      if (j < coeffs.size()) v += (1.0 - w) * coeffs[j];
      if (j + 1 < coeffs.size()) v += w * coeffs[j + 1];
      return v * (n_cutoff > 0 ? smooth_cutoff(tv, n_cutoff) : 1.0);
    }
    if (tv > t.back()) return 0.0;
    const double x = tv / dt();
    const auto j = std::min(static_cast<std::size_t>(x), t.size() - 1);
    if (j + 1 >= t.size()) return f_n[j];
    const double w = x - static_cast<double>(j);
    return (1.0 - w) * f_n[j] + w * f_n[j + 1];
  }
};

/// Uniform time grid on [0, N + 1 + 10/omega_min] with at least 20 samples per
/// period 2 pi/omega_max and an integer number of samples per hat spacing.
inline std::vector<double> make_time_grid(const DispersionSpec& spec, int n, double hat_spacing = 0.25,
                                          int min_per_hat = 8) {
  const double dt_max = kTwoPi / (20.0 * spec.omega_max());
  const int per_hat = std::max(min_per_hat, static_cast<int>(std::ceil(hat_spacing / dt_max)));
  const double dt = hat_spacing / per_hat;
  const double t_max = n + 1.0 + 10.0 / spec.omega_min();
  const auto count = static_cast<std::size_t>(std::ceil(t_max / dt)) + 1;
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = dt * static_cast<double>(i);
  return t;
}

inline void check_uniform_grid(std::span<const double> t) {
  require(t.size() >= 2 && t[0] == 0.0, ErrorCode::kValidation, "time grid must start at 0");
  const double dt = t[1] - t[0];
  require(dt > 0.0, ErrorCode::kValidation, "time grid must increase");
  for (std::size_t i = 1; i < t.size(); ++i)
    require(std::abs(t[i] - t[i - 1] - dt) < 1e-9 * dt, ErrorCode::kValidation,
            "time grid must be uniform");
}

/// Trapezoid weights of a uniform u grid.
inline double u_weight(const std::vector<double>& u, std::size_t i) {
  const double h = u[1] - u[0];
  return quad::trapezoid_weight(i, u.size(), h);
}

/// Cosine inversion F(t) = (2/pi) int Re(Fbar(u)) cos(ut) du over the band grid.
inline SynthesizedControl synthesize_f(const FrequencyDesign& d, std::span<const double> t_grid) {
  check_uniform_grid(t_grid);
  SynthesizedControl c;
  c.t.assign(t_grid.begin(), t_grid.end());
  c.f.resize(c.t.size());
  for (std::size_t j = 0; j < c.t.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.u.size(); ++i)
      s += u_weight(d.u, i) * d.fbar[i].real() * std::cos(d.u[i] * c.t[j]);
    c.f[j] = 2.0 / kPi * s;
  }
  c.f_n = c.f;
  return c;
}

inline SynthesizedControl apply_cutoff(SynthesizedControl c, int n) {
  require(n >= 1, ErrorCode::kValidation, "cutoff horizon must be >= 1");
  require(!c.t.empty() && n + 1.0 <= c.t.back() + 1e-12, ErrorCode::kHorizonExceeded,
          "N + 1 = " + std::to_string(n + 1) + " exceeds the time grid");
  c.n_cutoff = n;
  c.f_n.resize(c.f.size());
  for (std::size_t i = 0; i < c.t.size(); ++i) c.f_n[i] = c.f[i] * smooth_cutoff(c.t[i], n);
  c.fhat.clear();
  c.k.clear();
  return c;
}

struct HalfLineTransform {
  std::vector<double> s;
  std::vector<double> fc;
  std::vector<double> fs;

  /// F^(s/2 pi) = f^c(s) - i f^s(s).
  cplx fhat(std::size_t i) const { return {fc[i], -fs[i]}; }
};

inline HalfLineTransform half_line_transforms(const SynthesizedControl& c,
                                              std::span<const double> freq) {
  HalfLineTransform h;
  h.s.assign(freq.begin(), freq.end());
  h.fc.assign(freq.size(), 0.0);
  h.fs.assign(freq.size(), 0.0);
  const double dt = c.dt();
  std::size_t last = c.f_n.size();
  while (last > 0 && c.f_n[last - 1] == 0.0) --last;
  for (std::size_t m = 0; m < freq.size(); ++m) {
    double sc = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < last; ++i) {
      const double w = quad::trapezoid_weight(i, c.f_n.size(), dt) * c.f_n[i];
      sc += w * std::cos(freq[m] * c.t[i]);
      ss += w * std::sin(freq[m] * c.t[i]);
    }
    h.fc[m] = sc;
    h.fs[m] = ss;
  }
  return h;
}

/// Fills c.k and c.fhat = F^_N(omega(k)/2 pi) and enforces L1 on the grid.
inline void attach_fhat(SynthesizedControl& c, const DispersionSpec& spec,
                        std::span<const double> k_grid) {
  std::vector<double> w(k_grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = spec.omega(k_grid[i]);
  const auto h = half_line_transforms(c, w);
  c.k.assign(k_grid.begin(), k_grid.end());
  c.fhat.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    c.fhat[i] = h.fhat(i);
    require(c.fhat[i].real() < 0.0, ErrorCode::kAssumptionL1Violated,
            "Re F^_N >= 0 at k = " + std::to_string(c.k[i]));
  }
}

struct H6Report {
  std::vector<double> t;
  std::vector<double> cos_side;
  std::vector<double> sin_side;
  double max_discrepancy = 0.0;
  double threshold = 0.0;
  bool flagged = false;
};

/// Compares (2/pi) int Re Fbar cos(ut) du with (2/pi) int Im Fbar sin(ut) du.
inline H6Report check_h6(const FrequencyDesign& d, std::span<const double> t_probe,
                         double relative_threshold = 5e-2) {
  H6Report r;
  r.t.assign(t_probe.begin(), t_probe.end());
  double fmax = 0.0;
  for (double t : t_probe) {
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < d.u.size(); ++i) {
      const double w = u_weight(d.u, i);
      c += w * d.fbar[i].real() * std::cos(d.u[i] * t);
      s += w * d.fbar[i].imag() * std::sin(d.u[i] * t);
    }
    r.cos_side.push_back(2.0 / kPi * c);
    r.sin_side.push_back(2.0 / kPi * s);
    fmax = std::max(fmax, std::abs(r.cos_side.back()));
    r.max_discrepancy = std::max(r.max_discrepancy, std::abs(r.cos_side.back() - r.sin_side.back()));
  }
  r.threshold = relative_threshold * fmax;
  r.flagged = r.max_discrepancy > r.threshold;
  return r;
}

struct FitOptions {
  double hat_spacing = 0.25;
  int min_per_hat = 8;
  double tikhonov = 1e-8;
  std::size_t u_stride = 1;
};

/// Causal control F_N = cutoff_N * sum_j c_j hat_j on [0, N + 1] whose transform
/// int F_N(t) e^{iut} dt matches Fbar(u) on the band in the least-squares sense.
inline SynthesizedControl fit_causal_control(const FrequencyDesign& d, int n,
                                             std::span<const double> k_grid,
                                             const FitOptions& opt = {}) {
  require(n >= 1, ErrorCode::kValidation, "cutoff horizon must be >= 1");
  SynthesizedControl c;
  c.t = make_time_grid(d.spec, n, opt.hat_spacing, opt.min_per_hat);
  const double dt = c.t[1];
  const int per_hat = static_cast<int>(std::lround(opt.hat_spacing / dt));
  const auto nb = static_cast<std::size_t>(std::lround((n + 1.0) / opt.hat_spacing));
  const std::size_t support = nb * static_cast<std::size_t>(per_hat) + 1;

  std::vector<double> window(support), wt(support);
  for (std::size_t i = 0; i < support; ++i) {
    window[i] = smooth_cutoff(c.t[i], n);
    wt[i] = quad::trapezoid_weight(i, support, dt);
  }
  // Transform of hat j at frequency u: cosine part into row r_cos, sine part into row r_sin.
  auto hat_row = [&](double u, Eigen::MatrixXd& rows_out, Eigen::Index r_cos, Eigen::Index r_sin) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::size_t lo = j == 0 ? 0 : (j - 1) * per_hat;
      const std::size_t hi = std::min(support - 1, (j + 1) * per_hat);
      double sc = 0.0, ss = 0.0;
      for (std::size_t i = lo; i <= hi; ++i) {
        const double x = std::abs(c.t[i] / opt.hat_spacing - static_cast<double>(j));
        const double g = wt[i] * window[i] * std::max(0.0, 1.0 - x);
        sc += g * std::cos(u * c.t[i]);
        ss += g * std::sin(u * c.t[i]);
      }
      rows_out(r_cos, static_cast<Eigen::Index>(j)) = sc;
      rows_out(r_sin, static_cast<Eigen::Index>(j)) = ss;
    }
  };

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < d.u.size(); i += opt.u_stride) rows.push_back(i);
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto cols = static_cast<Eigen::Index>(nb);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, cols);
  Eigen::VectorXd b(2 * m);
  for (Eigen::Index r = 0; r < m; ++r) {
    b(r) = d.fbar[rows[r]].real();
    b(m + r) = d.fbar[rows[r]].imag();
    hat_row(d.u[rows[r]], a, r, m + r);
  }
  Eigen::MatrixXd normal = a.transpose() * a;
  const double smax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(normal, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .maxCoeff();
  normal.diagonal().array() += opt.tikhonov * smax;
  const Eigen::VectorXd coef = normal.ldlt().solve(a.transpose() * b);

  c.hat_spacing = opt.hat_spacing;
  c.coeffs.assign(coef.data(), coef.data() + coef.size());
  c.n_cutoff = 0;
  c.f.resize(c.t.size());
  for (std::size_t i = 0; i < c.t.size(); ++i) c.f[i] = c.f_n_at(c.t[i]);
  c.n_cutoff = n;
  c.f_n.resize(c.t.size());
  for (std::size_t i = 0; i < c.t.size(); ++i) c.f_n[i] = c.f_n_at(c.t[i]);
  attach_fhat(c, d.spec, k_grid);
  return c;
}

/// Largest Re F^_N(w) over `points` uniform frequencies in [0, top].
inline double max_real_fhat(const SynthesizedControl& c, double top, std::size_t points) {
  require(points >= 2 && top > 0.0, ErrorCode::kValidation, "need a non-empty frequency range");
  std::vector<double> w(points);
  for (std::size_t i = 0; i < points; ++i) w[i] = top * static_cast<double>(i) / static_cast<double>(points - 1);
  const auto h = half_line_transforms(c, w);
  return *std::max_element(h.fc.begin(), h.fc.end());
}

inline std::vector<RatePoint> roundtrip_rates(const SynthesizedControl& c, const DispersionSpec& spec,
                                              std::span<const double> k_grid) {
  std::vector<double> w(k_grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = spec.omega(k_grid[i]);
  const auto h = half_line_transforms(c, w);
  std::vector<RatePoint> out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    RatePoint p;
    p.k = k_grid[i];
    try {
      p.rates = rates_feedback(spec, h.fhat(i), Wavenumber(k_grid[i]));
    } catch (const Error& e) {
      p.error = e.code();
      p.message = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Root-mean-square of (r_t, r_r) deviations over k in [margin, 1/2 - margin].
/// Points with errors count as missing and make the result infinite.
inline double roundtrip_error(const std::vector<RatePoint>& recovered, const TargetRates& tr,
                              double margin = 0.05) {
  double s = 0.0;
  std::size_t count = 0;
  for (const auto& p : recovered) {
    if (p.k < margin || p.k > 0.5 - margin) continue;
    if (!p.rates) return std::numeric_limits<double>::infinity();
    const RateTriple t = tr.at(p.k);
    s += std::pow(p.rates->r_t - t.r_t, 2) + std::pow(p.rates->r_r - t.r_r, 2);
    ++count;
  }
  return count ? std::sqrt(s / static_cast<double>(count)) : 0.0;
}

/// Constant triple (0.35, 0.49, 0.16) on n points of [0.01, 0.49].
inline TargetRates constant_target_family(std::size_t n = 96) {
  TargetRates t;
  t.c1 = 0.35;
  for (std::size_t i = 0; i < n; ++i) {
    t.k.push_back(0.01 + 0.48 * static_cast<double>(i) / static_cast<double>(n - 1));
    t.r_a.push_back(0.35);
    t.r_t.push_back(0.49);
    t.r_r.push_back(0.16);
  }
  return t;
}

/// r_a = 0.3 + 0.1 sin(2 pi k), split into r_t : r_r with ratio s = 0.7 + 0.1 cos(2 pi k).
inline TargetRates smooth_target_family(std::size_t n = 96) {
  TargetRates t;
  t.c1 = 0.3;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = 0.01 + 0.48 * static_cast<double>(i) / static_cast<double>(n - 1);
    const double ra = 0.3 + 0.1 * std::sin(kTwoPi * k);
    const double s = 0.7 + 0.1 * std::cos(kTwoPi * k);
    t.k.push_back(k);
    t.r_a.push_back(ra);
    t.r_t.push_back((1.0 - ra) * s);
    t.r_r.push_back((1.0 - ra) * (1.0 - s));
  }
  return t;
}

/// Kernel samples F_N(i dt) for the simulator, i = 0 .. (N + 1) / dt.
inline std::vector<double> sample_kernel(const SynthesizedControl& c, double dt) {
  require(c.n_cutoff > 0 && dt > 0.0, ErrorCode::kValidation, "kernel sampling needs a cut-off control");
  const auto steps = static_cast<std::size_t>(std::ceil((c.n_cutoff + 1.0) / dt));
  std::vector<double> out(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out[i] = c.f_n_at(dt * static_cast<double>(i));
  return out;
}

}  // namespace phonctl
