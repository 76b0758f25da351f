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
/// Monte-Carlo simulation of the thermostatted chain in Fourier space.
/// One step: psi^ <- exp(-i omega dt) psi^ + i G dt + i sqrt(2 nu T) dW, where G is
/// -nu alpha_0 + F(t) (impulsive) or (F * alpha_0)(t) (feedback) and dW is one
/// Gaussian increment shared by all modes.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <random>
#include <thread>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "phonctl/dispersion.hpp"
#include "phonctl/error.hpp"
#include "phonctl/fft.hpp"
#include "phonctl/quadrature.hpp"

namespace phonctl {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

/// Unit bump eta_w(t) = (2/w) cos^2(pi t / 2w) on [0, w].
class ImpulsivePulse {
 public:
  ImpulsivePulse(double width, double eps) : width_(width), eps_(eps) {
    require(width > 0.0 && eps > 0.0 && eps <= 1.0, ErrorCode::kValidation,
            "pulse needs width > 0 and eps in (0, 1]");
  }

  double width() const { return width_; }
  double eps() const { return eps_; }

  double bump(double t) const {
    if (t < 0.0 || t > width_) return 0.0;
    const double c = std::cos(kPi * t / (2.0 * width_));
    return 2.0 / width_ * c * c;
  }
  /// Control value at microscopic time t.
  double operator()(double t) const { return bump(t) / std::sqrt(eps_); }

  /// int eta_w(t) exp(-i omega t) dt, with eta_w = (1 + cos(pi t / w)) / w.
  cplx transform(double omega) const {
    const double a = kPi / width_;
    const double ow = omega * width_;
    if (std::abs(ow) < 1e-3 || std::abs(std::abs(omega) - a) < 1e-3 * a) {
      using Gauss = boost::math::quadrature::gauss<double, 30>;
      return {Gauss::integrate([&](double t) { return bump(t) * std::cos(omega * t); }, 0.0, width_),
              Gauss::integrate([&](double t) { return -bump(t) * std::sin(omega * t); }, 0.0, width_)};
    }
    const cplx e = std::polar(1.0, -ow);
    const cplx flat = (1.0 - e) / (cplx(0.0, 1.0) * omega);
    const cplx wave = cplx(0.0, 1.0) * omega * (1.0 + e) / (a * a - omega * omega);
    return (flat + wave) / width_;
  }
  /// The frequency response F(k) = eta^(omega(k)).
  cplx script_f(const DispersionSpec& spec, double k) const { return transform(spec.omega(k)); }

  /// int eta_w^2 = 3 / (2 w).
  double square_integral() const { return 1.5 / width_; }

  /// int_0^{t/eps} eps F(s)^2 ds for the scaled control.
  double scaled_energy(double t_macro) const {
    const double top = std::min(width_, t_macro / eps_);
    return eps_ * quad::adaptive([&](double s) { return std::pow((*this)(s), 2); }, 0.0, top);
  }

 private:
  double width_;
  double eps_;
};

inline ImpulsivePulse impulsive_pulse(double width, double eps, double dt) {
  require(width >= 2.0 * dt, ErrorCode::kValidation, "pulse width must be at least 2 dt");
  return ImpulsivePulse(width, eps);
}

struct NoControl {};
struct ImpulsiveControl {
  ImpulsivePulse pulse;
};
/// Kernel samples F_N(i dt), i = 0..L; zero beyond.
struct FeedbackControl {
  std::vector<double> kernel;
};
using SimControl = std::variant<NoControl, ImpulsiveControl, FeedbackControl>;

/// Kernel -nu eta_w sampled on the step grid; width w = 1 step reproduces -nu alpha_0.
inline FeedbackControl friction_kernel(double nu, std::size_t width_steps, double dt) {
  const ImpulsivePulse p(static_cast<double>(width_steps) * dt, 1.0);
  FeedbackControl c;
  for (std::size_t i = 0; i <= width_steps; ++i) c.kernel.push_back(-nu * p.bump(dt * static_cast<double>(i)));
  return c;
}

struct SimConfig {
  std::size_t n_modes = 512;
  double eps = 1.0 / 512.0;
  double nu = 1.0;
  double temperature = 0.0;
  double dt = 0.05;
  std::size_t n_realizations = 1;
  std::uint64_t seed = 0;
  SimControl control = NoControl{};
  std::size_t max_steps = std::size_t{1} << 24;
  unsigned threads = 1;
};

inline void validate(const SimConfig& c, const DispersionSpec& spec) {
  require(c.n_modes >= 4 && c.n_modes % 2 == 0, ErrorCode::kValidation, "n_modes must be even and >= 4");
  require(c.eps > 0.0 && c.eps <= 1.0, ErrorCode::kValidation, "eps must lie in (0, 1]");
  require(c.nu >= 0.0 && std::isfinite(c.nu), ErrorCode::kValidation, "nu must be >= 0");
  require(c.temperature >= 0.0 && std::isfinite(c.temperature), ErrorCode::kValidation,
          "temperature must be >= 0");
  require(c.dt > 0.0 && c.dt * spec.omega_max() < 0.1, ErrorCode::kValidation,
          "dt * omega_max must be below 0.1");
  require(c.n_realizations >= 1, ErrorCode::kValidation, "need at least one realization");
  if (const auto* f = std::get_if<FeedbackControl>(&c.control))
    require(!f->kernel.empty(), ErrorCode::kHistoryUnderflow, "feedback kernel is empty");
}

/// Fixed per-run data: mode grid, rotations, noise amplitude.
struct SimContext {
  SimConfig config;
  std::vector<double> k;
  std::vector<double> omega;
  std::vector<std::complex<long double>> rotation;
  double noise_amp = 0.0;

  SimContext(const DispersionSpec& spec, SimConfig cfg) : config(std::move(cfg)) {
    validate(config, spec);
    const std::size_t n = config.n_modes;
    k.resize(n);
    omega.resize(n);
    rotation.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      k[j] = static_cast<double>(j) / static_cast<double>(n) - 0.5;
      omega[j] = spec.omega(k[j]);
      const long double th = static_cast<long double>(omega[j]) * static_cast<long double>(config.dt);
      rotation[j] = {std::cos(th), -std::sin(th)};
    }
    noise_amp = std::sqrt(2.0 * config.nu * config.temperature * config.dt);
  }

  std::size_t history_length() const {
    if (const auto* f = std::get_if<FeedbackControl>(&config.control)) return f->kernel.size();
    return 1;
  }
};

struct Realization {
  std::vector<cplx> psi_hat;
  std::vector<double> alpha0_history;  // ring buffer, slot step % size
  double t_micro = 0.0;
  std::size_t step = 0;
};

inline double alpha0(const Realization& r) {
  double s = 0.0;
  for (const cplx& z : r.psi_hat) s += z.imag();
  return s / static_cast<double>(r.psi_hat.size());
}

inline double energy(const Realization& r, double eps) {
  double s = 0.0;
  for (const cplx& z : r.psi_hat) s += std::norm(z);
  return eps * s / static_cast<double>(r.psi_hat.size());
}

/// Psi(t) = mean_k Im(psi^(0,k) exp(-i omega(k) t)).
inline double free_alpha0(const std::vector<cplx>& psi0, const std::vector<double>& omega, double t) {
  double s = 0.0;
  for (std::size_t j = 0; j < psi0.size(); ++j) s += (psi0[j] * std::polar(1.0, -omega[j] * t)).imag();
  return s / static_cast<double>(psi0.size());
}

struct ZeroProfile {};
struct ThermalProfile {
  double temperature = 1.0;
};
/// Gaussian packet with Wigner profile mass * N(x; x0, sigma_x) N(k; k0, eps/(4 pi sigma_x)).
struct PacketProfile {
  double x0 = -0.15;
  double sigma_x = 0.02;
  double k0 = 0.25;
  double mass = 1.0;
};

struct InitialMeasure {
  std::variant<ZeroProfile, ThermalProfile, PacketProfile> profile = ZeroProfile{};
  double support_margin = 0.02;
};

inline bool in_bad_set(double k, double margin) {
  const double a = std::abs(wrap_torus(k));
  return a < margin || 0.5 - a < margin;
}

inline Realization init_realization(const SimContext& ctx, const InitialMeasure& m, Rng& rng) {
  const std::size_t n = ctx.config.n_modes;
  const double eps = ctx.config.eps;
  Realization r;
  r.psi_hat.assign(n, cplx{});
  r.alpha0_history.assign(ctx.history_length(), 0.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  if (const auto* th = std::get_if<ThermalProfile>(&m.profile)) {
    const double amp = std::sqrt(2.0 * th->temperature / eps);
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = phase(rng);
      if (in_bad_set(ctx.k[j], m.support_margin)) continue;
      r.psi_hat[j] = std::polar(amp, u);
      any = true;
    }
    require(any || th->temperature == 0.0, ErrorCode::kUnsupportedMeasure,
            "thermal envelope lies entirely in the excluded band-edge set");
  } else if (const auto* p = std::get_if<PacketProfile>(&m.profile)) {
    require(p->sigma_x > 0.0 && p->mass >= 0.0, ErrorCode::kValidation, "packet needs sigma_x > 0, mass >= 0");
    std::vector<cplx> sites(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double site = static_cast<double>(i) - static_cast<double>(n / 2);
      const double x = site * eps;
      sites[i] = std::exp(-(x - p->x0) * (x - p->x0) / (4.0 * p->sigma_x * p->sigma_x)) *
                 std::polar(1.0, kTwoPi * p->k0 * site);
    }
    thread_local std::unique_ptr<Dft> dft;
    if (!dft || dft->size() != n) dft = std::make_unique<Dft>(n);
    r.psi_hat = from_sites(*dft, sites);
    double before = 0.0, after = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      before += std::norm(r.psi_hat[j]);
      if (in_bad_set(ctx.k[j], m.support_margin)) r.psi_hat[j] = 0.0;
      after += std::norm(r.psi_hat[j]);
    }
    require(after > 0.0 || before == 0.0, ErrorCode::kUnsupportedMeasure,
            "packet lies entirely in the excluded band-edge set");
    // Wigner mass (eps/2) * mean |psi^|^2 equals the requested mass.
    const double scale = after > 0.0 ? std::sqrt(p->mass / (0.5 * eps * after / static_cast<double>(n))) : 0.0;
    const cplx global = std::polar(scale, phase(rng));
    for (auto& z : r.psi_hat) z *= global;
  }
  return r;
}

inline void push_history(Realization& r, double a0) {
  r.alpha0_history[r.step % r.alpha0_history.size()] = a0;
}

inline void advance(Realization& r, const SimContext& ctx, double drive, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double kick = drive * ctx.config.dt;
  const double noise = ctx.noise_amp > 0.0 ? ctx.noise_amp * gauss(rng) : 0.0;
  const double add = kick + noise;
  // The product is formed in extended precision so per-mode moduli do not drift.
  for (std::size_t j = 0; j < r.psi_hat.size(); ++j) {
    const long double c = ctx.rotation[j].real(), s = ctx.rotation[j].imag();
    const long double x = r.psi_hat[j].real(), y = r.psi_hat[j].imag();
    r.psi_hat[j] = {static_cast<double>(c * x - s * y), static_cast<double>(s * x + c * y) + add};
  }
  ++r.step;
  r.t_micro = static_cast<double>(r.step) * ctx.config.dt;
}

/// One step with drive -nu alpha_0 + F(t).
inline void step_impulsive(Realization& r, const SimContext& ctx, double f_value, Rng& rng) {
  const double a0 = alpha0(r);
  push_history(r, a0);
  advance(r, ctx, -ctx.config.nu * a0 + f_value, rng);
}

/// Trapezoid approximation of int_0^t F(t - s) alpha_0(s) ds over the stored history.
inline double feedback_convolution(const Realization& r, const std::vector<double>& kernel, double dt) {
  const std::size_t n = r.step;  // alpha_0 stored for steps 0..n
  if (n == 0) return 0.0;
  const std::size_t len = r.alpha0_history.size();
  const std::size_t top = std::min(n, kernel.size() - 1);
  double s = 0.0;
  for (std::size_t lag = 0; lag <= top; ++lag) {
    const double w = (lag == 0 || lag == n) ? 0.5 : 1.0;
    s += w * kernel[lag] * r.alpha0_history[(n - lag) % len];
  }
  return s * dt;
}

/// One step with drive (F * alpha_0)(t).
inline void step_feedback(Realization& r, const SimContext& ctx, Rng& rng) {
  const auto* f = std::get_if<FeedbackControl>(&ctx.config.control);
  require(f != nullptr, ErrorCode::kValidation, "step_feedback needs a feedback control");
  require(r.alpha0_history.size() >= f->kernel.size(), ErrorCode::kHistoryUnderflow,
          "alpha_0 history shorter than the kernel support");
  push_history(r, alpha0(r));
  advance(r, ctx, feedback_convolution(r, f->kernel, ctx.config.dt), rng);
}

inline void step(Realization& r, const SimContext& ctx, Rng& rng) {
  if (std::holds_alternative<FeedbackControl>(ctx.config.control)) {
    step_feedback(r, ctx, rng);
  } else if (const auto* imp = std::get_if<ImpulsiveControl>(&ctx.config.control)) {
    step_impulsive(r, ctx, imp->pulse(r.t_micro), rng);
  } else {
    step_impulsive(r, ctx, 0.0, rng);
  }
}

/// Independent stream for realization `index`.
inline Rng realization_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x70686f6eu};
  return Rng(seq);
}

struct Observers {
  std::size_t energy_samples = 21;
  std::vector<double> snapshot_times;
};

struct Snapshot {
  double t_macro = 0.0;
  std::size_t step = 0;
  std::vector<std::vector<cplx>> psi_hat;  // one vector per realization, index order
};

struct EnsembleSummary {
  std::vector<double> t_macro;
  std::vector<double> mean_energy;
  std::vector<double> stderr_energy;
  std::vector<Snapshot> snapshots;
  std::vector<double> k;
  double eps = 0.0;
  std::size_t steps = 0;
};

inline std::size_t macro_to_steps(double t_macro, double eps, double dt) {
  return static_cast<std::size_t>(std::llround(t_macro / (eps * dt)));
}

inline EnsembleSummary run_ensemble(const DispersionSpec& spec, const SimConfig& config,
                                    const InitialMeasure& measure, double horizon_macro,
                                    const Observers& obs = {}) {
  const SimContext ctx(spec, config);
  require(horizon_macro >= 0.0, ErrorCode::kValidation, "horizon must be >= 0");
  const std::size_t steps = macro_to_steps(horizon_macro, config.eps, config.dt);
  require(steps <= config.max_steps, ErrorCode::kBudgetExceeded,
          std::to_string(steps) + " steps exceed the cap of " + std::to_string(config.max_steps));

  const std::size_t ne = std::max<std::size_t>(obs.energy_samples, 2);
  std::vector<std::size_t> energy_steps(ne);
  for (std::size_t i = 0; i < ne; ++i) energy_steps[i] = steps * i / (ne - 1);
  std::vector<std::size_t> snap_steps;
  for (double t : obs.snapshot_times) {
    require(t >= 0.0 && t <= horizon_macro + 1e-12, ErrorCode::kValidation,
            "snapshot time outside [0, horizon]");
    snap_steps.push_back(macro_to_steps(t, config.eps, config.dt));
  }

  const std::size_t m = config.n_realizations;
  std::vector<std::vector<double>> energies(m, std::vector<double>(ne));
  std::vector<std::vector<std::vector<cplx>>> snaps(snap_steps.size(), std::vector<std::vector<cplx>>(m));

  auto run_one = [&](std::size_t idx) {
    Rng rng = realization_rng(config.seed, idx);
    Realization r = init_realization(ctx, measure, rng);
    std::size_t e = 0;
    for (std::size_t s = 0;; ++s) {
      while (e < ne && energy_steps[e] == s) energies[idx][e++] = energy(r, config.eps);
      for (std::size_t q = 0; q < snap_steps.size(); ++q)
        if (snap_steps[q] == s) snaps[q][idx] = r.psi_hat;
      if (s == steps) break;
      step(r, ctx, rng);
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, m));
  if (threads <= 1) {
    for (std::size_t i = 0; i < m; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < m; i = next++) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EnsembleSummary out;
  out.k = ctx.k;
  out.eps = config.eps;
  out.steps = steps;
  for (std::size_t e = 0; e < ne; ++e) {
    out.t_macro.push_back(static_cast<double>(energy_steps[e]) * config.dt * config.eps);
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += energies[i][e];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) var += std::pow(energies[i][e] - mean, 2);
    out.mean_energy.push_back(mean);
    out.stderr_energy.push_back(m > 1 ? std::sqrt(var / static_cast<double>(m - 1) / static_cast<double>(m)) : 0.0);
  }
  for (std::size_t q = 0; q < snap_steps.size(); ++q)
    out.snapshots.push_back({static_cast<double>(snap_steps[q]) * config.dt * config.eps, snap_steps[q],
                             std::move(snaps[q])});
  return out;
}

/// Least-squares slope of mean energy against macroscopic time.
inline double energy_slope(const EnsembleSummary& s) {
  const std::size_t n = s.t_macro.size();
  double mt = 0.0, me = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += s.t_macro[i];
    me += s.mean_energy[i];
  }
  mt /= static_cast<double>(n);
  me /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (s.t_macro[i] - mt) * (s.mean_energy[i] - me);
    den += (s.t_macro[i] - mt) * (s.t_macro[i] - mt);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace phonctl
