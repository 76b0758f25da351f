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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "phonctl/chain_sim.hpp"
#include "phonctl/control_synthesis.hpp"

using namespace phonctl;

namespace {

const DispersionSpec kUnit(1.0, 1.0);

SimConfig small_config(double nu, double temperature) {
  SimConfig c;
  c.n_modes = 64;
  c.eps = 1.0 / 64;
  c.nu = nu;
  c.temperature = temperature;
  return c;
}

TEST(Pulse, UnitMassAndSquareIntegral) {
  ImpulsivePulse p(0.5, 1.0);
  EXPECT_NEAR(quad::adaptive([&](double t) { return p.bump(t); }, 0.0, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(quad::adaptive([&](double t) { return p.bump(t) * p.bump(t); }, 0.0, 0.5), p.square_integral(), 1e-12);
  EXPECT_EQ(p.bump(-0.1), 0.0);
  EXPECT_EQ(p.bump(0.6), 0.0);
}

TEST(Pulse, NarrowWidthTransformIsFlat) {
  ImpulsivePulse p(1e-4, 1.0);
  for (double k : {0.05, 0.25, 0.45}) EXPECT_NEAR(std::abs(p.script_f(kUnit, k) - 1.0), 0.0, 1e-3);
}

TEST(Pulse, ScaledEnergyIndependentOfEps) {
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    ImpulsivePulse p(0.5, eps);
    EXPECT_NEAR(p.scaled_energy(1.0), 3.0, 1e-9) << eps;
  }
}

TEST(Pulse, WidthBelowTwoStepsRejected) {
  EXPECT_THROW(impulsive_pulse(0.05, 1.0, 0.05), Error);
  EXPECT_NO_THROW(impulsive_pulse(0.1, 1.0, 0.05));
}

TEST(Config, Validation) {
  auto c = small_config(1.0, 0.0);
  c.dt = 0.1;
  EXPECT_THROW(SimContext(kUnit, c), Error);
  c = small_config(-1.0, 0.0);
  EXPECT_THROW(SimContext(kUnit, c), Error);
  c = small_config(1.0, 0.0);
  c.n_modes = 63;
  EXPECT_THROW(SimContext(kUnit, c), Error);
  c = small_config(1.0, 0.0);
  c.control = FeedbackControl{};
  EXPECT_THROW(SimContext(kUnit, c), Error);
}

TEST(Energy, ConstantField) {
  Realization r;
  r.psi_hat.assign(64, cplx(1.0, 0.0));
  EXPECT_DOUBLE_EQ(energy(r, 1.0 / 64), 1.0 / 64);
  r.psi_hat.assign(64, cplx{});
  EXPECT_EQ(energy(r, 1.0 / 64), 0.0);
}

TEST(Init, ThermalSamplerNormalization) {
  SimConfig c;
  const SimContext ctx(kUnit, c);
  InitialMeasure m{ThermalProfile{1.0}, 0.02};
  Rng rng = realization_rng(1, 0);
  auto r = init_realization(ctx, m, rng);
  std::size_t good = 0;
  for (std::size_t j = 0; j < c.n_modes; ++j) {
    if (in_bad_set(ctx.k[j], 0.02)) {
      EXPECT_EQ(r.psi_hat[j], cplx{});
    } else {
      EXPECT_NEAR(0.5 * c.eps * std::norm(r.psi_hat[j]), 1.0, 1e-12);
      ++good;
    }
  }
  EXPECT_NEAR(energy(r, c.eps), 2.0 * good / c.n_modes, 1e-12);
}

TEST(Init, PacketMassAndSeparation) {
  SimConfig c;
  const SimContext ctx(kUnit, c);
  InitialMeasure m{PacketProfile{-0.15, 0.02, 0.25, 1.0}, 0.02};
  Rng rng = realization_rng(3, 0);
  auto r = init_realization(ctx, m, rng);
  EXPECT_NEAR(0.5 * energy(r, c.eps), 1.0, 1e-12);
  Dft dft(c.n_modes);
  auto sites = to_sites(dft, r.psi_hat);
  double near = 0.0, total = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double x = (static_cast<double>(i) - 256.0) * c.eps;
    total += std::norm(sites[i]);
    if (std::abs(x + 0.15) < 0.1) near += std::norm(sites[i]);
  }
  EXPECT_GT(near / total, 0.999);
}

TEST(Init, PacketAmplitudesDecorrelate) {
  SimConfig c;
  c.n_modes = 128;
  c.eps = 1.0 / 128;
  const SimContext ctx(kUnit, c);
  InitialMeasure m{PacketProfile{-0.15, 0.05, 0.25, 1.0}, 0.02};
  const std::size_t j = 96, h = 100;
  cplx acc{};
  double scale = 0.0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    Rng rng = realization_rng(11, d);
    auto r = init_realization(ctx, m, rng);
    acc += r.psi_hat[j] * r.psi_hat[h];
    scale = std::abs(r.psi_hat[j]) * std::abs(r.psi_hat[h]);
  }
  EXPECT_LT(std::abs(acc) / draws, 3.0 / std::sqrt(draws) * scale);
}

TEST(Init, EmptyEnvelopeRejected) {
  SimConfig c;
  const SimContext ctx(kUnit, c);
  InitialMeasure m{ThermalProfile{1.0}, 0.3};
  Rng rng = realization_rng(0, 0);
  EXPECT_THROW(init_realization(ctx, m, rng), Error);
}

TEST(Step, FreeEvolutionConservesModulus) {
  SimConfig c = small_config(0.0, 0.0);
  const SimContext ctx(kUnit, c);
  Rng rng = realization_rng(5, 0);
  auto r = init_realization(ctx, {ThermalProfile{1.0}, 0.02}, rng);
  const auto psi0 = r.psi_hat;
  for (int s = 0; s < 100000; ++s) step(r, ctx, rng);
  double worst = 0.0;
  for (std::size_t j = 0; j < psi0.size(); ++j)
    if (std::abs(psi0[j]) > 0.0)
      worst = std::max(worst, std::abs(std::abs(r.psi_hat[j]) / std::abs(psi0[j]) - 1.0));
  EXPECT_LT(worst, 1e-12);
  EXPECT_NEAR(alpha0(r), free_alpha0(psi0, ctx.omega, r.t_micro), 1e-8);
}

TEST(Step, SharedNoiseAcrossModes) {
  SimConfig c = small_config(0.0, 1.0);
  SimContext ctx(kUnit, c);
  ctx.noise_amp = 0.3;
  for (auto& z : ctx.rotation) z = 1.0;
  Realization r;
  r.psi_hat.assign(c.n_modes, cplx{});
  r.alpha0_history.assign(1, 0.0);
  Rng rng = realization_rng(2, 0);
  for (int s = 0; s < 50; ++s) {
    const double a = r.psi_hat[3].imag(), b = r.psi_hat[40].imag();
    step(r, ctx, rng);
    const double da = r.psi_hat[3].imag() - a, db = r.psi_hat[40].imag() - b;
    EXPECT_EQ(da, db);
    EXPECT_NE(da, 0.0);
  }
}

TEST(Step, FrictionEnergyDecrement) {
  SimConfig c = small_config(1.0, 0.0);
  c.dt = 0.01;
  const SimContext ctx(kUnit, c);
  Rng rng = realization_rng(8, 0);
  auto r = init_realization(ctx, {ThermalProfile{1.0}, 0.02}, rng);
  for (int s = 0; s < 20; ++s) {
    const double e0 = energy(r, c.eps) / c.eps;
    const double a = alpha0(r);
    step(r, ctx, rng);
    const double de = energy(r, c.eps) / c.eps - e0;
    const double tol = 2.0 * c.dt * c.dt * (kUnit.omega_max() * std::abs(a) * std::sqrt(e0) + a * a);
    EXPECT_NEAR(de, -2.0 * a * a * c.dt, tol);
  }
}

TEST(Feedback, ZeroKernelMatchesFreeRotation) {
  SimConfig a = small_config(0.0, 0.0);
  SimConfig b = a;
  b.control = FeedbackControl{std::vector<double>(11, 0.0)};
  const SimContext ca(kUnit, a), cb(kUnit, b);
  Rng r1 = realization_rng(4, 0), r2 = realization_rng(4, 0);
  auto x = init_realization(ca, {ThermalProfile{1.0}, 0.02}, r1);
  auto y = init_realization(cb, {ThermalProfile{1.0}, 0.02}, r2);
  for (int s = 0; s < 500; ++s) {
    step(x, ca, r1);
    step(y, cb, r2);
  }
  EXPECT_EQ(x.psi_hat, y.psi_hat);
}

TEST(Feedback, OneStepKernelIsFriction) {
  SimConfig a = small_config(1.5, 1.0);
  SimConfig b = a;
  b.control = friction_kernel(1.5, 1, b.dt);
  const SimContext ca(kUnit, a), cb(kUnit, b);
  Rng r1 = realization_rng(4, 1);
  auto x = init_realization(ca, {ThermalProfile{1.0}, 0.02}, r1);
  // The convolution over [0, 0] vanishes, so start both after one friction step.
  step(x, ca, r1);
  auto y = x;
  y.alpha0_history.assign(cb.history_length(), 0.0);
  Rng r2 = r1;
  double worst = 0.0;
  for (int s = 0; s < 400; ++s) {
    step(x, ca, r1);
    step(y, cb, r2);
    for (std::size_t j = 0; j < x.psi_hat.size(); ++j)
      worst = std::max(worst, std::abs(x.psi_hat[j] - y.psi_hat[j]) / std::abs(x.psi_hat[j]));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Feedback, NarrowingKernelConvergesToFriction) {
  SimConfig a = small_config(1.0, 0.0);
  a.dt = 0.01;
  const SimContext ca(kUnit, a);
  Rng r1 = realization_rng(6, 0);
  auto x = init_realization(ca, {ThermalProfile{1.0}, 0.02}, r1);
  const auto start = x;
  for (int s = 0; s < 2000; ++s) step(x, ca, r1);
  std::vector<double> errs;
  for (std::size_t w : {4u, 2u, 1u}) {
    SimConfig b = a;
    b.control = friction_kernel(1.0, w, b.dt);
    const SimContext cb(kUnit, b);
    auto y = start;
    y.alpha0_history.assign(cb.history_length(), 0.0);
    Rng r2 = realization_rng(6, 0);
    for (int s = 0; s < 2000; ++s) step(y, cb, r2);
    double e = 0.0;
    for (std::size_t j = 0; j < x.psi_hat.size(); ++j) e = std::max(e, std::abs(x.psi_hat[j] - y.psi_hat[j]));
    errs.push_back(e);
  }
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[2], errs[1]);
}

TEST(Feedback, HistoryUnderflow) {
  SimConfig b = small_config(0.0, 0.0);
  b.control = friction_kernel(1.0, 4, b.dt);
  const SimContext cb(kUnit, b);
  Realization r;
  r.psi_hat.assign(b.n_modes, cplx{});
  r.alpha0_history.assign(2, 0.0);
  Rng rng = realization_rng(0, 0);
  EXPECT_THROW(step(r, cb, rng), Error);
}

TEST(Ensemble, ZeroMeasureReportsZeros) {
  auto c = small_config(1.0, 0.0);
  auto s = run_ensemble(kUnit, c, {}, 0.5, {5, {0.0, 0.5}});
  for (double e : s.mean_energy) EXPECT_EQ(e, 0.0);
  for (const auto& snap : s.snapshots)
    for (const auto& z : snap.psi_hat[0]) EXPECT_EQ(z, cplx{});
}

TEST(Ensemble, BudgetExceeded) {
  auto c = small_config(1.0, 0.0);
  c.max_steps = 100;
  EXPECT_THROW(run_ensemble(kUnit, c, {}, 1.0), Error);
}

bool same_bytes(const EnsembleSummary& a, const EnsembleSummary& b) {
  auto eq = [](const auto& x, const auto& y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(x[0])) == 0;
  };
  if (!eq(a.t_macro, b.t_macro) || !eq(a.mean_energy, b.mean_energy) || !eq(a.stderr_energy, b.stderr_energy))
    return false;
  if (a.snapshots.size() != b.snapshots.size()) return false;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i)
    for (std::size_t m = 0; m < a.snapshots[i].psi_hat.size(); ++m)
      if (!eq(a.snapshots[i].psi_hat[m], b.snapshots[i].psi_hat[m])) return false;
  return true;
}

TEST(Ensemble, DeterministicAcrossThreadCounts) {
  auto c = small_config(1.0, 1.0);
  c.n_realizations = 6;
  c.seed = 42;
  const InitialMeasure m{ThermalProfile{1.0}, 0.02};
  const Observers obs{9, {0.25}};
  c.threads = 1;
  auto a = run_ensemble(kUnit, c, m, 0.5, obs);
  auto b = run_ensemble(kUnit, c, m, 0.5, obs);
  c.threads = 4;
  auto d = run_ensemble(kUnit, c, m, 0.5, obs);
  EXPECT_TRUE(same_bytes(a, b));
  EXPECT_TRUE(same_bytes(a, d));
  c.seed = 43;
  auto e = run_ensemble(kUnit, c, m, 0.5, obs);
  EXPECT_FALSE(same_bytes(a, e));
}

TEST(Ensemble, ThermalEnergyStaysNearEquilibrium) {
  SimConfig c = small_config(1.0, 1.0);
  c.n_modes = 128;
  c.eps = 1.0 / 128;
  c.n_realizations = 40;
  auto s = run_ensemble(kUnit, c, {ThermalProfile{1.0}, 0.02}, 1.0, {11, {}});
  const double e0 = s.mean_energy.front();
  for (double e : s.mean_energy) EXPECT_NEAR(e / e0, 1.0, 0.1);
  EXPECT_LE(energy_slope(s), 2.0 * 1.2);
}

TEST(Ensemble, FrictionDissipatesAtZeroTemperature) {
  SimConfig c = small_config(1.0, 0.0);
  c.n_realizations = 4;
  auto s = run_ensemble(kUnit, c, {ThermalProfile{1.0}, 0.02}, 1.0, {11, {}});
  for (std::size_t i = 1; i < s.mean_energy.size(); ++i) EXPECT_LE(s.mean_energy[i], s.mean_energy[i - 1] + 1e-12);
}

}  // namespace

namespace {

TEST(Pulse, ClosedFormTransformMatchesQuadrature) {
  for (double w : {0.1, 0.5, 2.0}) {
    ImpulsivePulse p(w, 1.0);
    for (double om : {0.0, 1e-5, 1.0, 1.7, M_PI / w, 2.2}) {
      const double re = quad::adaptive([&](double t) { return p.bump(t) * std::cos(om * t); }, 0.0, w);
      const double im = quad::adaptive([&](double t) { return -p.bump(t) * std::sin(om * t); }, 0.0, w);
      EXPECT_LT(std::abs(p.transform(om) - cplx(re, im)), 1e-12) << w << " " << om;
    }
  }
}

TEST(Feedback, PassiveKernelDissipatesPacket) {
  // F(t) = -e^{-t} has Re F^ = -1 / (1 + w^2) < 0 at every frequency.
  const InitialMeasure pk{PacketProfile{-0.15, 0.02, 0.25, 1.0}, 0.02};
  for (double dt : {0.05, 0.025}) {
    std::vector<double> kernel;
    for (double t = 0.0; t < 20.0; t += dt) kernel.push_back(-std::exp(-t));
    SimConfig c;
    c.nu = 1.0;
    c.temperature = 0.0;
    c.dt = dt;
    c.control = FeedbackControl{kernel};
    const auto s = run_ensemble(kUnit, c, pk, 1.0, {21, {}});
    for (std::size_t i = 1; i < s.mean_energy.size(); ++i)
      EXPECT_LE(s.mean_energy[i], s.mean_energy[i - 1] + 1e-12) << dt << " " << i;
    EXPECT_LT(s.mean_energy.back(), 0.7 * s.mean_energy.front());
  }
}

TEST(Feedback, SynthesizedControlDissipatesPacket) {
  // The least-squares control only has Re F^ < 0 on the band; N = 8 with a
  // fine step keeps the closed loop stable, longer horizons do not.
  const auto tr = constant_target_family();
  const auto d = build_frequency_design(tr, kUnit);
  const auto ctl = fit_causal_control(d, 8, tr.k);
  SimConfig c;
  c.nu = 1.0;
  c.temperature = 0.0;
  c.dt = 0.0125;
  c.control = FeedbackControl{sample_kernel(ctl, c.dt)};
  const auto s = run_ensemble(kUnit, c, {PacketProfile{-0.15, 0.02, 0.25, 1.0}, 0.02}, 1.0, {21, {}});
  for (std::size_t i = 1; i < s.mean_energy.size(); ++i)
    EXPECT_LE(s.mean_energy[i], s.mean_energy[i - 1] + 1e-6 * s.mean_energy.front()) << i;
  EXPECT_LT(s.mean_energy.back(), 0.7 * s.mean_energy.front());
}

}  // namespace
