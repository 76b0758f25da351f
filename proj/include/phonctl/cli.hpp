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
/// Subcommands of the phonctl executable: rates, design, simulate, compare.
/// Exit codes: 0 ok, 2 validation, 3 runtime, 4 inadmissible targets.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "phonctl/chain_sim.hpp"
#include "phonctl/control_synthesis.hpp"
#include "phonctl/io.hpp"
#include "phonctl/rates.hpp"
#include "phonctl/wigner.hpp"

namespace phonctl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum Exit : int { kOk = 0, kValidationExit = 2, kRuntimeExit = 3, kInadmissibleExit = 4 };

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kValidation:
    case ErrorCode::kSchema:
    case ErrorCode::kIo:
      return kValidationExit;
    default:
      return kRuntimeExit;
  }
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

inline std::vector<double> midpoints(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return v;
}

// ---------------------------------------------------------------- rates

struct RatesArgs {
  double omega0 = 1.0;
  double gamma = 1.0;
  double nu = 1.0;
  std::size_t grid = 256;
  double k_min = 0.05;
  double k_max = 0.45;
  std::optional<double> fhat_re;
  double fhat_im = 0.0;
  fs::path out = ".";
};

inline int cmd_rates(const RatesArgs& a) {
  const DispersionSpec spec(a.omega0, a.gamma);
  require(a.grid >= 1, ErrorCode::kValidation, "--grid must be >= 1");
  require(a.k_min < a.k_max || a.grid == 1, ErrorCode::kValidation, "--k-min must be below --k-max");
  require(a.nu >= 0.0, ErrorCode::kValidation, "--nu must be >= 0");
  const auto ks = linspace(a.k_min, a.k_max, a.grid);
  RateControl control = Uncontrolled{a.nu};
  if (a.fhat_re) {
    const cplx f(*a.fhat_re, a.fhat_im);
    require(f.real() < 0.0, ErrorCode::kValidation, "feedback needs Re F^ < 0");
    control = Feedback{[f](double) { return f; }};
  }
  const auto pts = rate_grid(spec, control, ks);
  io::Table t{"rates", {"k", "r_a", "r_t", "r_r", "sum"}, {}};
  for (const auto& p : pts) {
    if (!p.rates) throw Error(*p.error, p.message);
    t.rows.push_back({p.k, p.rates->r_a, p.rates->r_t, p.rates->r_r, p.rates->sum()});
  }
  io::write_csv(a.out / "rates.csv", t);
  return kOk;
}

// ---------------------------------------------------------------- design

struct DesignArgs {
  double omega0 = 1.0;
  double gamma = 1.0;
  fs::path targets;
  std::optional<double> c1;
  std::vector<int> n_sweep{64};
  double tikhonov = 1e-8;
  fs::path out = ".";
};

inline const std::vector<std::string>& target_columns() {
  static const std::vector<std::string> c{"k", "r_a", "r_t", "r_r"};
  return c;
}

inline TargetRates read_targets(const fs::path& path, std::optional<double> c1) {
  const auto t = io::read_csv(path, "targets", target_columns());
  require(!t.rows.empty(), ErrorCode::kSchema, "targets file has no rows");
  TargetRates tr;
  tr.k = t.values("k");
  tr.r_a = t.values("r_a");
  tr.r_t = t.values("r_t");
  tr.r_r = t.values("r_r");
  tr.c1 = c1 ? *c1 : *std::min_element(tr.r_a.begin(), tr.r_a.end());
  return tr;
}

inline void write_targets(const fs::path& path, const TargetRates& tr) {
  io::Table t{"targets", target_columns(), {}};
  for (std::size_t i = 0; i < tr.size(); ++i) t.rows.push_back({tr.k[i], tr.r_a[i], tr.r_t[i], tr.r_r[i]});
  io::write_csv(path, t);
}

inline json checks_json(const AdmissibilityReport& rep) {
  json arr = json::array();
  for (const auto& c : rep.checks)
    arr.push_back({{"name", c.name}, {"ran", c.ran}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

inline int cmd_design(const DesignArgs& a) {
  const DispersionSpec spec(a.omega0, a.gamma);
  require(!a.n_sweep.empty(), ErrorCode::kValidation, "--n-sweep needs at least one value");
  for (int n : a.n_sweep) require(n >= 1, ErrorCode::kValidation, "cut-off horizons must be >= 1");
  require(a.tikhonov >= 0.0, ErrorCode::kValidation, "--tikhonov must be >= 0");
  const TargetRates tr = read_targets(a.targets, a.c1);

  const auto rep = check_targets(tr);
  json report{{"schema", "admissibility/v1"}, {"c1", tr.c1}, {"checks", checks_json(rep)}, {"failed", rep.failed()}};
  if (!rep.admissible()) {
    report["admissible"] = false;
    io::write_json(a.out / "admissibility.json", report);
    std::cerr << "targets inadmissible:";
    for (const auto& f : rep.failed()) std::cerr << ' ' << f;
    std::cerr << '\n';
    return kInadmissibleExit;
  }

  const auto d = build_frequency_design(tr, spec);
  io::Table design{"design", {"k", "RE", "IM", "FT_re", "FT_im", "TH_re", "TH_im", "Fbar_re", "Fbar_im"}, {}};
  for (const auto& p : d.points)
    design.rows.push_back({p.k, p.re, p.im, p.ft.real(), p.ft.imag(), p.th.real(), p.th.imag(), p.fbar.real(),
                           p.fbar.imag()});

  std::vector<int> sweep = a.n_sweep;
  std::sort(sweep.begin(), sweep.end());
  sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());
  FitOptions fit;
  fit.tikhonov = a.tikhonov;
  io::Table recovered{"recovered_rates", {"N", "k", "r_a", "r_t", "r_r", "target_t", "target_r", "error_l2"}, {}};
  json errors = json::array();
  SynthesizedControl last;
  bool l1_ok = true;
  std::string l1_detail;
  for (int n : sweep) {
    SynthesizedControl c;
    try {
      c = fit_causal_control(d, n, tr.k, fit);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAssumptionL1Violated) throw;
      l1_ok = false;
      l1_detail = "N = " + std::to_string(n) + ": " + e.what();
      break;
    }
    const auto rec = roundtrip_rates(c, spec, tr.k);
    const double err = roundtrip_error(rec, tr);
    errors.push_back({{"N", n}, {"error_l2", err}});
    for (const auto& p : rec) {
      if (!p.rates) throw Error(*p.error, p.message);
      const auto t = tr.at(p.k);
      recovered.rows.push_back({static_cast<double>(n), p.k, p.rates->r_a, p.rates->r_t, p.rates->r_r, t.r_t,
                                t.r_r, err});
    }
    last = std::move(c);
  }

  std::vector<double> probe = linspace(0.5, 20.0, 40);
  const auto h6 = check_h6(d, probe);
  report["design"] = {{"min_abs_TH", d.min_th},
                      {"TH_bound_ok", d.th_bound_ok},
                      {"Fbar_bound_ok", d.fbar_bound_ok},
                      {"min_discriminant", d.min_disc}};
  report["H6"] = {{"max_discrepancy", h6.max_discrepancy}, {"threshold", h6.threshold}, {"flagged", h6.flagged}};
  report["L1"] = {{"passed", l1_ok}, {"detail", l1_detail}};
  if (l1_ok) {
    // Off-band sign of Re F^_N; positive values can destabilise the closed loop.
    const double top = 4.0 * std::numbers::pi / fit.hat_spacing;
    const double worst = max_real_fhat(last, top, 4096);
    report["passivity"] = {{"N", sweep.back()}, {"omega_top", top}, {"max_re_fhat", worst}, {"passive", worst <= 0.0}};
  }
  report["error_vs_N"] = errors;
  report["admissible"] = l1_ok;
  io::write_json(a.out / "admissibility.json", report);
  if (!l1_ok) {
    std::cerr << "synthesized control violates L1: " << l1_detail << '\n';
    return kInadmissibleExit;
  }

  io::Table control{"control", {"t", "F", "F_N"}, {}};
  for (std::size_t i = 0; i < last.t.size(); ++i) control.rows.push_back({last.t[i], last.f[i], last.f_n[i]});
  io::write_csv(a.out / "design.csv", design);
  io::write_csv(a.out / "control.csv", control);
  io::write_csv(a.out / "recovered_rates.csv", recovered);
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  double omega0 = 1.0;
  double gamma = 1.0;
  double nu = 1.0;
  double temperature = 0.0;
  std::size_t n_modes = 512;
  std::optional<double> eps;
  double dt = 0.05;
  std::size_t realizations = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double horizon = 1.0;
  std::vector<double> snapshots;
  std::string measure = "thermal";
  double packet_x0 = -0.15;
  double packet_sigma = 0.02;
  double packet_k0 = 0.25;
  double packet_mass = 1.0;
  double support_margin = 0.02;
  std::string control = "none";
  double pulse_width = 0.5;
  fs::path kernel;
  std::size_t max_steps = std::size_t{1} << 24;
  std::size_t energy_samples = 21;
  fs::path out = ".";
};

/// F_N(i dt) by linear interpolation of control.csv, up to its last nonzero sample.
inline std::vector<double> kernel_from_control_csv(const fs::path& path, double dt) {
  const auto t = io::read_csv(path, "control", {"t", "F", "F_N"});
  const auto ts = t.values("t");
  const auto fn = t.values("F_N");
  require(ts.size() >= 2, ErrorCode::kSchema, "control.csv needs at least two rows");
  std::size_t last = 0;
  for (std::size_t i = 0; i < fn.size(); ++i)
    if (fn[i] != 0.0) last = i;
  const double top = ts[std::min(last + 1, ts.size() - 1)];
  const auto steps = static_cast<std::size_t>(std::ceil(top / dt));
  std::vector<double> k(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double tv = dt * static_cast<double>(i);
    const auto it = std::upper_bound(ts.begin(), ts.end(), tv);
    if (it == ts.begin() || it == ts.end()) {
      k[i] = it == ts.begin() ? fn.front() : 0.0;
      continue;
    }
    const auto j = static_cast<std::size_t>(it - ts.begin());
    const double w = (tv - ts[j - 1]) / (ts[j] - ts[j - 1]);
    k[i] = (1.0 - w) * fn[j - 1] + w * fn[j];
  }
  return k;
}

inline json battery_json() {
  json arr = json::array();
  const auto b = standard_test_battery();
  for (std::size_t i = 0; i < b.size(); ++i)
    arr.push_back({{"id", i}, {"xc", b[i].xc}, {"sx", b[i].sx}, {"kc", b[i].kc}, {"sk", b[i].sk}});
  return arr;
}

inline std::string snapshot_stem(std::size_t i) { return "wigner_" + std::to_string(i); }

inline void write_grid_with_sidecar(const fs::path& dir, const std::string& stem, const WignerGrid& g, json meta) {
  io::write_grid(dir / (stem + ".bin"), {g.rows(), g.cols(), g.eps, g.t}, g.values);
  const double dx = g.axis.size() > 1 ? g.axis[1] - g.axis[0] : 0.0;
  const double dk = g.k.size() > 1 ? g.k[1] - g.k[0] : 0.0;
  meta["schema"] = "wigner/v1";
  meta["binary"] = stem + ".bin";
  meta["t"] = g.t;
  meta["eps"] = g.eps;
  meta["rows"] = g.rows();
  meta["cols"] = g.cols();
  meta["domain"] = g.position ? "position" : "xi";
  meta["x"] = {{"first", g.axis.front()}, {"step", dx}, {"count", g.rows()}};
  meta["k"] = {{"first", g.k.front()}, {"step", dk}, {"count", g.cols()}};
  // Cell edges: rows are centred on x values, columns on k values.
  meta["extent"] = {g.axis.front() - 0.5 * dx, g.axis.back() + 0.5 * dx, g.k.front() - 0.5 * dk,
                    g.k.back() + 0.5 * dk};
  meta["realizations"] = g.realizations;
  io::write_json(dir / (stem + ".json"), meta);
}

inline int cmd_simulate(const SimulateArgs& a) {
  const DispersionSpec spec(a.omega0, a.gamma);
  SimConfig c;
  c.n_modes = a.n_modes;
  c.eps = a.eps ? *a.eps : 1.0 / static_cast<double>(a.n_modes);
  c.nu = a.nu;
  c.temperature = a.temperature;
  c.dt = a.dt;
  c.n_realizations = a.realizations;
  c.seed = a.seed;
  c.threads = a.threads;
  c.max_steps = a.max_steps;

  json control{{"kind", a.control}};
  if (a.control == "pulse") {
    c.control = ImpulsiveControl{impulsive_pulse(a.pulse_width, c.eps, c.dt)};
    control["width"] = a.pulse_width;
  } else if (a.control == "feedback") {
    require(!a.kernel.empty(), ErrorCode::kValidation, "--control feedback needs --kernel control.csv");
    FeedbackControl fb{kernel_from_control_csv(a.kernel, c.dt)};
    control["kernel_dt"] = c.dt;
    control["kernel"] = fb.kernel;
    c.control = std::move(fb);
  } else if (a.control == "friction-feedback") {
    c.control = friction_kernel(c.nu, 1, c.dt);
    control["nu"] = c.nu;
  } else {
    require(a.control == "none", ErrorCode::kValidation, "unknown --control " + a.control);
  }

  InitialMeasure m;
  m.support_margin = a.support_margin;
  json measure{{"kind", a.measure}, {"support_margin", a.support_margin}};
  if (a.measure == "thermal") {
    m.profile = ThermalProfile{a.temperature};
    measure["temperature"] = a.temperature;
  } else if (a.measure == "packet") {
    m.profile = PacketProfile{a.packet_x0, a.packet_sigma, a.packet_k0, a.packet_mass};
    measure.update({{"x0", a.packet_x0}, {"sigma_x", a.packet_sigma}, {"k0", a.packet_k0}, {"mass", a.packet_mass}});
  } else {
    require(a.measure == "zero", ErrorCode::kValidation, "unknown --measure " + a.measure);
  }
  require(a.horizon >= 0.0, ErrorCode::kValidation, "--horizon must be >= 0");
  std::vector<double> snaps = a.snapshots;
  if (snaps.empty()) snaps = {0.0, a.horizon};
  for (double t : snaps)
    require(t >= 0.0 && t <= a.horizon, ErrorCode::kValidation, "snapshot times must lie in [0, horizon]");

  const auto s = run_ensemble(spec, c, m, a.horizon, {a.energy_samples, snaps});

  io::Table energy{"energy", {"t_macro", "mean_energy", "stderr"}, {}};
  for (std::size_t i = 0; i < s.t_macro.size(); ++i)
    energy.rows.push_back({s.t_macro[i], s.mean_energy[i], s.stderr_energy[i]});
  io::write_csv(a.out / "energy.csv", energy);

  const json run{{"omega0", a.omega0}, {"gamma", a.gamma},     {"nu", c.nu},           {"temperature", c.temperature},
                 {"n_modes", c.n_modes}, {"eps", c.eps},       {"dt", c.dt},           {"realizations", c.n_realizations},
                 {"seed", c.seed},       {"measure", measure}, {"control", control}};
  const auto xi = full_xi_grid(c.n_modes, c.eps);
  std::vector<PhaseSpaceFunction> fns;
  for (const auto& t : standard_test_battery()) fns.push_back(t);
  for (std::size_t i = 0; i < s.snapshots.size(); ++i) {
    WignerAccumulator acc(c.n_modes, c.eps, xi);
    acc.set_test_functions(fns);
    for (const auto& r : s.snapshots[i].psi_hat) acc.add(r);
    const auto grid = to_position(acc.result(s.snapshots[i].t_macro));
    json pairs = battery_json();
    const auto stats = acc.pairings();
    for (std::size_t f = 0; f < stats.size(); ++f) {
      pairs[f]["mean"] = stats[f].mean;
      pairs[f]["stderr"] = stats[f].std_error;
    }
    write_grid_with_sidecar(a.out, snapshot_stem(i), grid,
                            {{"run", run}, {"pairings", pairs}, {"mass", wigner_mass(grid)}});
  }
  return kOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  fs::path snapshot;
  std::size_t x_points = 2048;
  std::size_t k_points = 1024;
  double margin = 0.05;
  fs::path out = ".";
};

/// F^ of a sampled kernel through the half-line transforms of its trapezoid interpolant.
inline std::function<cplx(double)> kernel_fhat(const DispersionSpec& spec, std::vector<double> kernel, double dt) {
  SynthesizedControl c;
  for (std::size_t i = 0; i < kernel.size(); ++i) c.t.push_back(dt * static_cast<double>(i));
  c.f = kernel;
  c.f_n = std::move(kernel);
  return [spec, c](double k) {
    const auto h = half_line_transforms(c, std::vector<double>{spec.omega(k)});
    return h.fhat(0);
  };
}

struct KineticSetup {
  PhaseSpaceFunction w0;
  bool feedback = false;
  std::function<cplx(double)> response;
  double nu = 0.0;
  double temperature = 0.0;
};

inline KineticSetup kinetic_setup(const DispersionSpec& spec, const json& run) {
  KineticSetup s;
  s.nu = run.at("nu").get<double>();
  s.temperature = run.at("temperature").get<double>();
  const double eps = run.at("eps").get<double>();
  const auto& m = run.at("measure");
  const std::string mk = m.at("kind").get<std::string>();
  if (mk == "packet") {
    s.w0 = packet_wigner({m.at("x0").get<double>(), m.at("sigma_x").get<double>(), m.at("k0").get<double>(),
                          m.at("mass").get<double>()},
                         eps);
  } else if (mk == "thermal") {
    s.w0 = thermal_wigner(m.at("temperature").get<double>(), m.at("support_margin").get<double>());
  } else {
    require(mk == "zero", ErrorCode::kSchema, "unknown measure kind " + mk);
    s.w0 = [](double, double) { return 0.0; };
  }
  const auto& c = run.at("control");
  const std::string ck = c.at("kind").get<std::string>();
  if (ck == "pulse") {
    const ImpulsivePulse p(c.at("width").get<double>(), 1.0);
    s.response = [p, spec](double k) { return p.script_f(spec, k); };
  } else if (ck == "feedback") {
    s.feedback = true;
    s.response = kernel_fhat(spec, c.at("kernel").get<std::vector<double>>(), c.at("kernel_dt").get<double>());
  } else if (ck == "friction-feedback") {
    s.feedback = true;
    const double nu = s.nu;
    s.response = [nu](double) { return cplx(-nu, 0.0); };
  } else {
    require(ck == "none", ErrorCode::kSchema, "unknown control kind " + ck);
    s.response = [](double) { return cplx{}; };
  }
  return s;
}

inline KineticField kinetic_for(const DispersionSpec& spec, const KineticSetup& s, double t,
                                std::span<const double> xs, std::span<const double> ks) {
  return s.feedback ? kinetic_feedback(s.w0, spec, s.nu, s.temperature, s.response, t, xs, ks)
                    : kinetic_impulsive(s.w0, spec, s.nu, s.temperature, s.response, t, xs, ks);
}

inline WignerGrid load_grid(const fs::path& sidecar, json& meta) {
  meta = io::read_json(sidecar);
  require(meta.value("schema", "") == "wigner/v1", ErrorCode::kSchema, "sidecar schema must be wigner/v1");
  io::GridHeader h;
  WignerGrid g;
  g.values = io::read_grid(sidecar.parent_path() / meta.at("binary").get<std::string>(), h);
  require(h.rows == meta.at("rows").get<std::uint64_t>() && h.cols == meta.at("cols").get<std::uint64_t>() &&
              h.eps == meta.at("eps").get<double>() && h.t == meta.at("t").get<double>(),
          ErrorCode::kGridMismatch, "binary header disagrees with the sidecar");
  g.t = h.t;
  g.eps = h.eps;
  g.position = meta.at("domain") == "position";
  const auto& x = meta.at("x");
  const auto& k = meta.at("k");
  for (std::uint64_t i = 0; i < h.rows; ++i)
    g.axis.push_back(x.at("first").get<double>() + x.at("step").get<double>() * static_cast<double>(i));
  for (std::uint64_t j = 0; j < h.cols; ++j)
    g.k.push_back(k.at("first").get<double>() + k.at("step").get<double>() * static_cast<double>(j));
  g.realizations = meta.value("realizations", std::size_t{0});
  return g;
}

inline int cmd_compare(const CompareArgs& a) {
  require(a.x_points >= 2 && a.k_points >= 2, ErrorCode::kValidation, "closed-form grid needs >= 2 points per axis");
  json meta;
  const WignerGrid g = load_grid(a.snapshot, meta);
  require(g.position, ErrorCode::kGridMismatch, "compare needs a position-space snapshot");
  const json& run = meta.at("run");
  const DispersionSpec spec(run.at("omega0").get<double>(), run.at("gamma").get<double>());
  const KineticSetup setup = kinetic_setup(spec, run);

  const double half = 0.5 * static_cast<double>(g.cols()) * g.eps;
  const auto xs = midpoints(-half, half, a.x_points);
  const auto ks = midpoints(-0.5, 0.5, a.k_points);
  const KineticField field = kinetic_for(spec, setup, g.t, xs, ks);

  io::Table cmp{"compare", {"test_fn_id", "simulated", "closed_form", "abs_diff", "stderr"}, {}};
  const auto battery = standard_test_battery();
  const auto& pairs = meta.at("pairings");
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const double sim = pairs.at(i).at("mean").get<double>();
    const double ref = pair_with_test_function(field, battery[i]);
    cmp.rows.push_back({static_cast<double>(i), sim, ref, std::abs(sim - ref), pairs.at(i).at("stderr").get<double>()});
  }

  // Closed-form field on the simulation grid, for side-by-side plots.
  const KineticField on_grid = kinetic_for(spec, setup, g.t, g.axis, g.k);
  WignerGrid kg = g;
  for (std::size_t i = 0; i < on_grid.regular.size(); ++i) kg.values[i] = on_grid.regular[i];
  json kmeta{{"run", run}, {"source", "closed_form"}, {"atom", {{"k", on_grid.k}, {"x", on_grid.atom_x},
                                                                {"weight", on_grid.atom_weight}}}};

  std::optional<io::Table> fractions;
  const auto& m = run.at("measure");
  if (m.at("kind") == "packet") {
    const double k0 = m.at("k0").get<double>();
    const auto measured = energy_fractions(g, m.at("mass").get<double>(), {a.margin});
    const RateTriple r = setup.feedback ? rates_feedback(spec, setup.response(k0), Wavenumber(k0))
                                        : rates_uncontrolled(spec, setup.nu, Wavenumber(k0));
    fractions = io::Table{"fractions",
                          {"k0", "measured_t", "measured_r", "measured_a", "theory_t", "theory_r", "theory_a"},
                          {{k0, measured.transmitted, measured.reflected, measured.absorbed, r.r_t, r.r_r, r.r_a}}};
  }

  io::write_csv(a.out / "compare.csv", cmp);
  write_grid_with_sidecar(a.out, "kinetic", kg, kmeta);
  if (fractions) io::write_csv(a.out / "fractions.csv", *fractions);
  return kOk;
}

// ---------------------------------------------------------------- entry point

inline int run(int argc, char** argv) {
  CLI::App app{"Thermostatted chain: scattering rates, feedback control design and kinetic-limit simulation"};
  app.set_config("--config", "", "TOML/INI file of option values; command-line flags take precedence");
  app.require_subcommand(1);

  RatesArgs ra;
  auto* rates = app.add_subcommand("rates", "absorption/transmission/reflection rates on a k grid");
  rates->add_option("--omega0", ra.omega0, "dispersion omega_0 > 0")->required();
  rates->add_option("--gamma", ra.gamma, "dispersion gamma > 0")->required();
  rates->add_option("--nu", ra.nu, "thermostat friction");
  rates->add_option("--grid", ra.grid, "number of k points");
  rates->add_option("--k-min", ra.k_min);
  rates->add_option("--k-max", ra.k_max);
  rates->add_option("--fhat-re", ra.fhat_re, "constant feedback response, real part (< 0)");
  rates->add_option("--fhat-im", ra.fhat_im, "constant feedback response, imaginary part");
  rates->add_option("--out", ra.out, "output directory");

  DesignArgs da;
  auto* design = app.add_subcommand("design", "synthesize a feedback control from target rates");
  design->add_option("--omega0", da.omega0)->required();
  design->add_option("--gamma", da.gamma)->required();
  design->add_option("--targets", da.targets, "targets CSV (schema targets/v1)")->required();
  design->add_option("--c1", da.c1, "lower bound on r_a; defaults to min r_a");
  design->add_option("--n-sweep", da.n_sweep, "cut-off horizons N")->delimiter(',');
  design->add_option("--tikhonov", da.tikhonov, "relative ridge weight of the least-squares fit");
  design->add_option("--out", da.out);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo ensemble of the chain");
  sim->add_option("--omega0", sa.omega0)->required();
  sim->add_option("--gamma", sa.gamma)->required();
  sim->add_option("--nu", sa.nu);
  sim->add_option("--temperature", sa.temperature);
  sim->add_option("--n-modes", sa.n_modes);
  sim->add_option("--eps", sa.eps, "defaults to 1/n-modes");
  sim->add_option("--dt", sa.dt, "microscopic time step");
  sim->add_option("--realizations", sa.realizations);
  sim->add_option("--seed", sa.seed);
  sim->add_option("--threads", sa.threads, "worker threads, 0 = hardware concurrency");
  sim->add_option("--horizon", sa.horizon, "macroscopic horizon");
  sim->add_option("--snapshots", sa.snapshots, "macroscopic snapshot times")->delimiter(',');
  sim->add_option("--measure", sa.measure)->check(CLI::IsMember({"thermal", "packet", "zero"}));
  sim->add_option("--packet-x0", sa.packet_x0);
  sim->add_option("--packet-sigma", sa.packet_sigma);
  sim->add_option("--packet-k0", sa.packet_k0);
  sim->add_option("--packet-mass", sa.packet_mass);
  sim->add_option("--support-margin", sa.support_margin);
  sim->add_option("--control", sa.control)->check(CLI::IsMember({"none", "pulse", "feedback", "friction-feedback"}));
  sim->add_option("--pulse-width", sa.pulse_width);
  sim->add_option("--kernel", sa.kernel, "control.csv from the design command");
  sim->add_option("--max-steps", sa.max_steps);
  sim->add_option("--energy-samples", sa.energy_samples);
  sim->add_option("--out", sa.out);

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "pair a snapshot with the closed-form kinetic field");
  cmp->add_option("--snapshot", ca.snapshot, "snapshot sidecar JSON")->required();
  cmp->add_option("--x-points", ca.x_points);
  cmp->add_option("--k-points", ca.k_points);
  cmp->add_option("--margin", ca.margin, "half-width of the excluded band around x = 0");
  cmp->add_option("--out", ca.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationExit;
  }
  try {
    if (*rates) return cmd_rates(ra);
    if (*design) return cmd_design(da);
    if (*sim) return cmd_simulate(sa);
    return cmd_compare(ca);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeExit;
  }
}

}  // namespace phonctl::cli
