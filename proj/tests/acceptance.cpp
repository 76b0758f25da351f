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

// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "phonctl/chain_sim.hpp"
#include "phonctl/control_synthesis.hpp"
#include "phonctl/rates.hpp"
#include "phonctl/spectral.hpp"
#include "phonctl/wigner.hpp"

using namespace phonctl;

namespace {

const DispersionSpec kSpec(1.0, 1.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> midpoints(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return v;
}

const std::vector<double>& rate_grid_k() {
  static const auto ks = linspace(0.05, 0.45, 512);
  return ks;
}

const std::vector<cplx>& grid_limits() {
  static const auto lims = [] {
    std::vector<cplx> out;
    for (double k : rate_grid_k()) out.push_back(lim_laplace_c_omega(kSpec, Wavenumber(k)));
    return out;
  }();
  return lims;
}

/// Transfer function of the N = 64 least-squares control for the constant target.
const std::vector<cplx>& fixture_fhat() {
  static const auto f = [] {
    const auto d = build_frequency_design(constant_target_family(), kSpec);
    return fit_causal_control(d, 64, rate_grid_k()).fhat;
  }();
  return f;
}

std::vector<std::pair<std::string, std::function<cplx(std::size_t)>>> feedback_cases() {
  return {{"F=-1", [](std::size_t) { return cplx(-1.0, 0.0); }},
          {"round-trip fixture", [](std::size_t i) { return fixture_fhat()[i]; }},
          {"F=-1+0.5i", [](std::size_t) { return cplx(-1.0, 0.5); }}};
}

Outcome rate_sum_identity() {
  const auto& ks = rate_grid_k();
  const auto& lims = grid_limits();
  double worst = 0.0;
  for (double nu : {0.5, 1.0, 2.0})
    for (std::size_t i = 0; i < ks.size(); ++i)
      worst = std::max(worst, std::abs(rates_uncontrolled_from_limit(kSpec, nu, ks[i], lims[i]).sum() - 1.0));
  for (const auto& [name, f] : feedback_cases())
    for (std::size_t i = 0; i < ks.size(); ++i)
      worst = std::max(worst, std::abs(rates_feedback_from_limit(kSpec, f(i), ks[i], lims[i]).sum() - 1.0));
  return {worst < 1e-6, "max |r_a+r_t+r_r-1| = " + fmt("%.3e", worst) + " over 3 frictions and 3 feedback controls"};
}

Outcome limit_oracle_agreement() {
  const auto ks = linspace(0.05, 0.45, 64);
  double worst = 0.0, worst_split = 0.0;
  LimLcOptions split;
  split.reading = LimLcReading::kSplitScale;
  for (double k : ks) {
    const cplx ref = lim_laplace_c_omega(kSpec, Wavenumber(k), LimLcMethod::kNumericOracle);
    const cplx app = lim_laplace_c_omega(kSpec, Wavenumber(k));
    const cplx st = lim_laplace_c_omega(kSpec, Wavenumber(k), LimLcMethod::kClosedForm, split);
    worst = std::max(worst, std::abs(app - ref) / std::abs(ref));
    worst_split = std::max(worst_split, std::abs(st - ref) / std::abs(ref));
  }
  return {worst < 1e-3, "selected reading: joint 1/|omega'| scale, max rel err = " + fmt("%.3e", worst) +
                            " (split-scale reading: " + fmt("%.3e", worst_split) + ")"};
}

Outcome theta_identities() {
  const auto& ks = rate_grid_k();
  const auto& lims = grid_limits();
  double worst = 0.0, worst_f = 0.0;
  for (double nu : {0.5, 1.0, 2.0}) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const cplx th = theta_from_limit(nu, lims[i]);
      const double wp = std::abs(kSpec.omega_prime(ks[i]));
      worst = std::max(worst, std::abs(th.real() - (1.0 + nu * kPi / wp) * std::norm(th)));
    }
  }
  for (const auto& [name, f] : feedback_cases()) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const cplx fh = f(i);
      const cplx th = theta_f_from_limit(fh, lims[i]);
      const double wp = std::abs(kSpec.omega_prime(ks[i]));
      const double lhs = (std::conj(fh) * th).real();
      const double rhs = (fh.real() - std::norm(fh) * kPi / wp) * std::norm(th);
      worst_f = std::max(worst_f, std::abs(lhs - rhs));
    }
  }
  return {worst < 1e-6 && worst_f < 1e-6,
          "theta residual " + fmt("%.3e", worst) + ", theta_F residual " + fmt("%.3e", worst_f)};
}

Outcome feedback_friction_equivalence() {
  const auto& ks = rate_grid_k();
  const auto& lims = grid_limits();
  double worst = 0.0;
  for (double nu : {0.5, 1.0, 2.0}) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const auto a = rates_feedback_from_limit(kSpec, cplx(-nu, 0.0), ks[i], lims[i]);
      const auto b = rates_uncontrolled_from_limit(kSpec, nu, ks[i], lims[i]);
      worst = std::max({worst, std::abs(a.r_a - b.r_a), std::abs(a.r_t - b.r_t), std::abs(a.r_r - b.r_r)});
    }
  }
  const auto xs = midpoints(-0.5, 0.5, 128);
  const auto kk = midpoints(-0.5, 0.5, 128);
  const auto packet = packet_wigner(PacketProfile{-0.15, 0.05, 0.25, 1.0}, 1.0 / 512);
  double worst_field = 0.0;
  for (double nu : {0.5, 1.0, 2.0}) {
    const auto fa =
        kinetic_feedback(packet, kSpec, nu, 1.0, [nu](double) { return cplx(-nu, 0.0); }, 0.8, xs, kk);
    const auto fb = kinetic_impulsive(packet, kSpec, nu, 1.0, [](double) { return cplx{}; }, 0.8, xs, kk);
    for (std::size_t i = 0; i < fa.regular.size(); ++i)
      worst_field = std::max(worst_field, std::abs(fa.regular[i] - fb.regular[i]));
    for (std::size_t j = 0; j < kk.size(); ++j) worst_field = std::max(worst_field, std::abs(fb.atom_weight[j]));
  }
  return {worst < 1e-9 && worst_field < 1e-9,
          "rates " + fmt("%.3e", worst) + ", 128x128 kinetic field " + fmt("%.3e", worst_field)};
}

Outcome control_round_trip() {
  std::string detail;
  bool ok = true;
  for (const auto& [name, tr] : {std::pair{"constant", constant_target_family()},
                                 std::pair{"smooth", smooth_target_family()}}) {
    const auto d = build_frequency_design(tr, kSpec);
    double prev = std::numeric_limits<double>::infinity();
    detail += std::string(detail.empty() ? "" : "; ") + name + ":";
    for (int n : {8, 16, 32, 64}) {
      const auto c = fit_causal_control(d, n, tr.k);
      const double err = roundtrip_error(roundtrip_rates(c, kSpec, tr.k), tr);
      detail += " N=" + std::to_string(n) + " " + fmt("%.3e", err);
      ok = ok && err <= prev;
      prev = err;
    }
    ok = ok && prev < 5e-2;
  }
  return {ok, detail};
}

Outcome thermal_equilibrium() {
  SimConfig c;
  c.nu = 1.0;
  c.temperature = 1.0;
  c.n_realizations = 200;
  c.seed = 2024;
  c.threads = 0;
  const auto s = run_ensemble(kSpec, c, {ThermalProfile{1.0}, 0.02}, 1.0, {21, {1.0}});
  WignerAccumulator acc(c.n_modes, c.eps, {0.0});
  for (const auto& r : s.snapshots.front().psi_hat) acc.add(r);
  const auto g = acc.result(1.0);
  double sum = 0.0, var = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < g.cols(); ++j) {
    const double a = std::abs(g.k[j]);
    if (a < 0.2 || a > 0.3) continue;
    sum += g.at(0, j).real();
    var += g.std_error[j] * g.std_error[j];
    ++count;
  }
  const double mid = sum / static_cast<double>(count);
  const double se = std::sqrt(var) / static_cast<double>(count);
  const double slope = energy_slope(s);
  const bool ok = std::abs(mid - 1.0) < 0.1 && slope <= 2.0 * c.nu * c.temperature * 1.2;
  return {ok, "mid-band W(t=1) = " + fmt("%.4f", mid) + " +- " + fmt("%.4f", se) + " (T = 1), energy slope " +
                  fmt("%.4f", slope) + " (bound 2.4)"};
}

Outcome scattering_fractions() {
  SimConfig c;
  c.nu = 1.0;
  c.temperature = 0.0;
  c.n_realizations = 500;
  c.seed = 7;
  c.threads = 0;
  const PacketProfile p{-0.15, 0.02, 0.25, 1.0};
  const auto s = run_ensemble(kSpec, c, {p, 0.02}, 1.0, {11, {0.0, 1.0}});
  const auto xi = full_xi_grid(c.n_modes, c.eps);
  const double mass0 = wigner_mass(estimate_wigner(s.snapshots[0], xi, c.eps));
  const auto w1 = to_position(estimate_wigner(s.snapshots[1], xi, c.eps));
  const auto measured = energy_fractions(w1, mass0);

  const auto ref = rates_uncontrolled(kSpec, 1.0, Wavenumber(0.25));
  const auto field = kinetic_impulsive(packet_wigner(p, c.eps), kSpec, 1.0, 0.0, [](double) { return cplx{}; },
                                       1.0, midpoints(-1.0, 1.0, 4000), midpoints(-0.5, 0.5, 2048));
  const auto closed = energy_fractions(field);

  const double dm = std::max({std::abs(measured.transmitted - ref.r_t), std::abs(measured.reflected - ref.r_r),
                              std::abs(measured.absorbed - ref.r_a)});
  const double dc = std::max({std::abs(closed.transmitted - ref.r_t), std::abs(closed.reflected - ref.r_r),
                              std::abs(closed.absorbed - ref.r_a)});
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "measured (T,R,A) = (%.4f, %.4f, %.4f), closed form (%.5f, %.5f, %.5f), rates (%.5f, %.5f, %.5f)",
                measured.transmitted, measured.reflected, measured.absorbed, closed.transmitted, closed.reflected,
                closed.absorbed, ref.r_t, ref.r_r, ref.r_a);
  return {dm < 0.1 && dc < 1e-3, buf};
}

bool same_summary(const EnsembleSummary& a, const EnsembleSummary& b) {
  auto eq = [](const auto& x, const auto& y) {
    return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(x[0])) == 0;
  };
  if (!eq(a.t_macro, b.t_macro) || !eq(a.mean_energy, b.mean_energy) || !eq(a.stderr_energy, b.stderr_energy) ||
      a.snapshots.size() != b.snapshots.size())
    return false;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    if (a.snapshots[i].psi_hat.size() != b.snapshots[i].psi_hat.size()) return false;
    for (std::size_t m = 0; m < a.snapshots[i].psi_hat.size(); ++m)
      if (!eq(a.snapshots[i].psi_hat[m], b.snapshots[i].psi_hat[m])) return false;
  }
  const auto xi = full_xi_grid(a.k.size(), a.eps);
  const auto wa = estimate_wigner(a.snapshots.back(), xi, a.eps);
  const auto wb = estimate_wigner(b.snapshots.back(), xi, b.eps);
  return eq(wa.values, wb.values) && eq(wa.std_error, wb.std_error);
}

Outcome determinism() {
  SimConfig c;
  c.nu = 1.0;
  c.temperature = 1.0;
  c.n_realizations = 12;
  c.seed = 99;
  const InitialMeasure m{ThermalProfile{1.0}, 0.02};
  const Observers obs{11, {0.0, 0.05}};
  std::vector<EnsembleSummary> runs;
  for (unsigned threads : {1u, 1u, 3u, 4u}) {
    c.threads = threads;
    runs.push_back(run_ensemble(kSpec, c, m, 0.05, obs));
  }
  bool ok = true;
  for (std::size_t i = 1; i < runs.size(); ++i) ok = ok && same_summary(runs[0], runs[i]);
  c.seed = 100;
  c.threads = 1;
  const bool differs = !same_summary(runs[0], run_ensemble(kSpec, c, m, 0.05, obs));
  return {ok && differs, std::string("threads {1,1,3,4} ") + (ok ? "byte-identical" : "differ") +
                             ", other seed " + (differs ? "differs" : "identical")};
}

}  // namespace

int main() {
  const std::vector<std::tuple<const char*, Outcome (*)(), double>> criteria{
      {"rate-sum identity", rate_sum_identity, 5.0},
      {"limit oracle agreement", limit_oracle_agreement, 10.0},
      {"theta identities", theta_identities, 0.0},
      {"feedback/friction equivalence", feedback_friction_equivalence, 0.0},
      {"control round trip", control_round_trip, 120.0},
      {"thermal equilibrium", thermal_equilibrium, 600.0},
      {"scattering fractions", scattering_fractions, 1200.0},
      {"determinism", determinism, 0.0},
  };
  int failed = 0;
  for (const auto& [name, run, budget] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.1f s", secs);
    if (budget > 0.0) {
      timing += fmt(" of %.0f s budget", budget);
      if (secs > budget) {
        o.pass = false;
        o.detail += "; over runtime budget";
      }
    }
    std::printf("%s %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
