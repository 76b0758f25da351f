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
/// Wigner distribution: ensemble estimate from Fourier amplitudes, closed-form
/// kinetic limits, weak pairings and scattered energy fractions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "phonctl/chain_sim.hpp"
#include "phonctl/dispersion.hpp"
#include "phonctl/error.hpp"
#include "phonctl/fft.hpp"
#include "phonctl/rates.hpp"

namespace phonctl {

/// Rows are xi values (or x values once `position` is set), columns are k.
struct WignerGrid {
  double t = 0.0;
  double eps = 0.0;
  bool position = false;
  std::vector<double> axis;
  std::vector<double> k;
  std::vector<cplx> values;
  std::vector<double> std_error;
  std::size_t realizations = 0;

  std::size_t rows() const { return axis.size(); }
  std::size_t cols() const { return k.size(); }
  cplx at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
};

/// Offset p with k +- eps xi / 2 = k +- p / (2n).
inline long xi_offset(double xi, double eps, std::size_t n) {
  const double p = eps * xi * static_cast<double>(n);
  const double pr = std::round(p);
  require(std::abs(p - pr) < 1e-9 * std::max(1.0, std::abs(p)), ErrorCode::kGridMismatch,
          "eps xi / 2 = " + std::to_string(0.5 * eps * xi) + " is not a multiple of 1/(2n)");
  return static_cast<long>(pr);
}

/// xi_p = p / (eps n), p = -n .. n-1.
inline std::vector<double> full_xi_grid(std::size_t n, double eps) {
  std::vector<double> xi(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i)
    xi[i] = (static_cast<double>(i) - static_cast<double>(n)) / (eps * static_cast<double>(n));
  return xi;
}

using PhaseSpaceFunction = std::function<double(double x, double k)>;

struct PairingStat {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mergeable accumulator of (eps/2) conj(psi^(k - eps xi/2)) psi^(k + eps xi/2).
class WignerAccumulator {
 public:
  WignerAccumulator(std::size_t n_modes, double eps, std::vector<double> xi)
      : n_(n_modes), eps_(eps), xi_(std::move(xi)), dft_(std::make_unique<Dft>(n_modes)) {
    for (double x : xi_) p_.push_back(xi_offset(x, eps_, n_));
    sum_.assign(xi_.size() * n_, cplx{});
    sumsq_.assign(xi_.size() * n_, 0.0);
  }

  /// Test functions paired per realization; needs the full xi grid.
  void set_test_functions(const std::vector<PhaseSpaceFunction>& fns) {
    require(is_full_grid(), ErrorCode::kGridMismatch, "pairings need the full xi grid");
    const std::size_t m = 2 * n_;
    Dft big(m);
    const double dx = 0.5 * eps_;
    kernels_.clear();
    for (const auto& f : fns) {
      std::vector<cplx> g(m * n_);
      std::vector<cplx> col(m), out(m);
      for (std::size_t j = 0; j < n_; ++j) {
        const double k = mode_k(j);
        for (std::size_t q = 0; q < m; ++q) {
          long qc = static_cast<long>(q);
          if (qc >= static_cast<long>(n_)) qc -= static_cast<long>(m);
          col[q] = f(dx * static_cast<double>(qc), k) * dx;
        }
        big.backward(col.data(), out.data());
        // Row p of the accumulator grid holds offset p_[row] = row - n.
        for (std::size_t row = 0; row < m; ++row) {
          const long p = p_[row];
          g[row * n_ + j] = out[static_cast<std::size_t>((p % static_cast<long>(m) + static_cast<long>(m)) %
                                                         static_cast<long>(m))];
        }
      }
      kernels_.push_back(std::move(g));
    }
    pair_sum_.assign(fns.size(), 0.0);
    pair_sumsq_.assign(fns.size(), 0.0);
  }

  void add(const std::vector<cplx>& psi_hat) {
    require(psi_hat.size() == n_, ErrorCode::kGridMismatch, "snapshot size differs from the mode grid");
    const auto half = half_shift(*dft_, psi_hat);
    const long n = static_cast<long>(n_);
    auto amp = [&](long j, long q) -> cplx {
      if (q % 2 == 0) return psi_hat[static_cast<std::size_t>(((j + q / 2) % n + n) % n)];
      const long base = (q > 0) ? (q - 1) / 2 : -((-q + 1) / 2);
      return half[static_cast<std::size_t>(((j + base) % n + n) % n)];
    };
    std::vector<double> pair(kernels_.size(), 0.0);
    for (std::size_t row = 0; row < p_.size(); ++row) {
      const long p = p_[row];
      for (long j = 0; j < n; ++j) {
        const cplx w = 0.5 * eps_ * std::conj(amp(j, -p)) * amp(j, p);
        const std::size_t idx = row * n_ + static_cast<std::size_t>(j);
        sum_[idx] += w;
        sumsq_[idx] += std::norm(w);
        for (std::size_t f = 0; f < kernels_.size(); ++f) pair[f] += (w * kernels_[f][idx]).real();
      }
    }
    const double scale = xi_step() / static_cast<double>(n_);
    for (std::size_t f = 0; f < kernels_.size(); ++f) {
      pair_sum_[f] += pair[f] * scale;
      pair_sumsq_[f] += std::pow(pair[f] * scale, 2);
    }
    ++count_;
  }

  void merge(const WignerAccumulator& o) {
    require(o.n_ == n_ && o.xi_ == xi_ && o.kernels_.size() == kernels_.size(), ErrorCode::kGridMismatch,
            "accumulators differ in shape");
    for (std::size_t i = 0; i < sum_.size(); ++i) {
      sum_[i] += o.sum_[i];
      sumsq_[i] += o.sumsq_[i];
    }
    for (std::size_t f = 0; f < pair_sum_.size(); ++f) {
      pair_sum_[f] += o.pair_sum_[f];
      pair_sumsq_[f] += o.pair_sumsq_[f];
    }
    count_ += o.count_;
  }

  std::size_t count() const { return count_; }

  WignerGrid result(double t) const {
    WignerGrid g;
    g.t = t;
    g.eps = eps_;
    g.axis = xi_;
    g.realizations = count_;
    for (std::size_t j = 0; j < n_; ++j) g.k.push_back(mode_k(j));
    g.values.resize(sum_.size());
    g.std_error.resize(sum_.size());
    const double m = static_cast<double>(std::max<std::size_t>(count_, 1));
    for (std::size_t i = 0; i < sum_.size(); ++i) {
      g.values[i] = sum_[i] / m;
      const double var = count_ > 1 ? (sumsq_[i] - m * std::norm(g.values[i])) / (m - 1.0) : 0.0;
      g.std_error[i] = std::sqrt(std::max(var, 0.0) / m);
    }
    return g;
  }

  std::vector<PairingStat> pairings() const {
    std::vector<PairingStat> out;
    const double m = static_cast<double>(std::max<std::size_t>(count_, 1));
    for (std::size_t f = 0; f < pair_sum_.size(); ++f) {
      const double mean = pair_sum_[f] / m;
      const double var = count_ > 1 ? (pair_sumsq_[f] - m * mean * mean) / (m - 1.0) : 0.0;
      out.push_back({mean, std::sqrt(std::max(var, 0.0) / m)});
    }
    return out;
  }

 private:
  double mode_k(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(n_) - 0.5; }
  double xi_step() const { return 1.0 / (eps_ * static_cast<double>(n_)); }
  bool is_full_grid() const {
    if (p_.size() != 2 * n_) return false;
    for (std::size_t i = 0; i < p_.size(); ++i)
      if (p_[i] != static_cast<long>(i) - static_cast<long>(n_)) return false;
    return true;
  }

  std::size_t n_;
  double eps_;
  std::vector<double> xi_;
  std::vector<long> p_;
  std::unique_ptr<Dft> dft_;
  std::vector<cplx> sum_;
  std::vector<double> sumsq_;
  std::vector<std::vector<cplx>> kernels_;
  std::vector<double> pair_sum_;
  std::vector<double> pair_sumsq_;
  std::size_t count_ = 0;
};

inline WignerGrid estimate_wigner(const Snapshot& snap, std::span<const double> xi_grid, double eps) {
  require(!snap.psi_hat.empty(), ErrorCode::kValidation, "snapshot holds no realizations");
  WignerAccumulator acc(snap.psi_hat.front().size(), eps, {xi_grid.begin(), xi_grid.end()});
  for (const auto& r : snap.psi_hat) acc.add(r);
  return acc.result(snap.t_macro);
}

/// W(x_q, k) = sum_p W^(xi_p, k) exp(2 pi i xi_p x_q) dxi on x_q = q eps / 2.
inline WignerGrid to_position(const WignerGrid& g) {
  const std::size_t n = g.cols();
  require(!g.position && g.rows() == 2 * n, ErrorCode::kGridMismatch, "position transform needs the full xi grid");
  for (std::size_t i = 0; i < g.rows(); ++i)
    require(xi_offset(g.axis[i], g.eps, n) == static_cast<long>(i) - static_cast<long>(n), ErrorCode::kGridMismatch,
            "xi grid must be p / (eps n), p = -n .. n-1");
  const std::size_t m = 2 * n;
  const double dxi = 1.0 / (g.eps * static_cast<double>(n));
  Dft dft(m);
  WignerGrid out;
  out.t = g.t;
  out.eps = g.eps;
  out.position = true;
  out.k = g.k;
  out.realizations = g.realizations;
  out.axis.resize(m);
  for (std::size_t q = 0; q < m; ++q)
    out.axis[q] = 0.5 * g.eps * (static_cast<double>(q) - static_cast<double>(n));
  out.values.assign(m * n, cplx{});
  std::vector<cplx> a(m), b(m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t row = 0; row < m; ++row) {
      const long p = static_cast<long>(row) - static_cast<long>(n);
      a[static_cast<std::size_t>((p + static_cast<long>(m)) % static_cast<long>(m))] = g.at(row, j);
    }
    dft.backward(a.data(), b.data());
    for (std::size_t row = 0; row < m; ++row) {
      const long q = static_cast<long>(row) - static_cast<long>(n);
      out.values[row * n + j] = b[static_cast<std::size_t>((q + static_cast<long>(m)) % static_cast<long>(m))] * dxi;
    }
  }
  return out;
}

struct KineticField {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> k;
  std::vector<double> regular;  // row-major [x][k]
  std::vector<double> atom_weight;
  std::vector<double> atom_x;
  double initial_mass = 0.0;

  double at(std::size_t ix, std::size_t ik) const { return regular[ix * k.size() + ik]; }
  double dx() const { return x.size() > 1 ? x[1] - x[0] : 1.0; }
  double dk() const { return k.size() > 1 ? k[1] - k[0] : 1.0; }
};

struct KineticCoefficients {
  double v = 0.0;
  double r_a = 0.0;
  double r_t = 1.0;
  double r_r = 0.0;
  double thermal = 0.0;
  double atom = 0.0;
};

/// Modes this close to the band edge barely move and are left unscattered.
inline bool near_band_edge(const DispersionSpec& spec, double k) {
  const double a = std::abs(wrap_torus(k));
  return a == 0.0 || a == 0.5 || std::abs(spec.omega_prime(k)) < kBandEdgeThreshold;
}

/// Ballistic transport outside [0, v t], scattering plateau inside.
inline KineticField kinetic_field(const PhaseSpaceFunction& w0, const std::vector<KineticCoefficients>& c,
                                  double t, std::span<const double> x_grid, std::span<const double> k_grid) {
  KineticField f;
  f.t = t;
  f.x.assign(x_grid.begin(), x_grid.end());
  f.k.assign(k_grid.begin(), k_grid.end());
  const std::size_t nk = f.k.size();
  f.regular.resize(f.x.size() * nk);
  double mass = 0.0;
  for (std::size_t ix = 0; ix < f.x.size(); ++ix) {
    const double x = f.x[ix];
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const double k = f.k[ik];
      const double vt = c[ik].v * t;
      const double lo = std::min(0.0, vt), hi = std::max(0.0, vt);
      const double ballistic = w0(x - vt, k);
      double w;
      if (x >= lo && x <= hi && hi > lo) {
        w = c[ik].thermal + c[ik].r_t * ballistic + c[ik].r_r * w0(-x + vt, -k);
      } else {
        w = ballistic;
      }
      f.regular[ix * nk + ik] = w;
      mass += w0(x, k);
    }
  }
  f.initial_mass = mass * f.dx() * f.dk();
  for (std::size_t ik = 0; ik < nk; ++ik) {
    f.atom_weight.push_back(c[ik].atom);
    f.atom_x.push_back(c[ik].v * t);
  }
  return f;
}

inline KineticField kinetic_impulsive(const PhaseSpaceFunction& w0, const DispersionSpec& spec, double nu,
                                      double temperature, const std::function<cplx(double)>& script_f,
                                      double t, std::span<const double> x_grid, std::span<const double> k_grid) {
  std::vector<KineticCoefficients> c;
  for (double k : k_grid) {
    const double v = spec.group_velocity(k);
    if (near_band_edge(spec, k)) {
      c.push_back({v});
      continue;
    }
    const RateTriple r = rates_uncontrolled(spec, nu, Wavenumber(k));
    const double atom = nu > 0.0 ? std::abs(v) * r.r_a * std::norm(script_f(k)) / nu : 0.0;
    c.push_back({v, r.r_a, r.r_t, r.r_r, r.r_a * temperature, atom});
  }
  return kinetic_field(w0, c, t, x_grid, k_grid);
}

inline KineticField kinetic_feedback(const PhaseSpaceFunction& w0, const DispersionSpec& spec, double nu,
                                     double temperature, const std::function<cplx(double)>& fhat, double t,
                                     std::span<const double> x_grid, std::span<const double> k_grid) {
  std::vector<KineticCoefficients> c;
  for (double k : k_grid) {
    const double v = spec.group_velocity(k);
    if (near_band_edge(spec, k)) {
      c.push_back({v});
      continue;
    }
    const cplx f = fhat(k);
    const RateTriple r = rates_feedback(spec, f, Wavenumber(k));
    c.push_back({v, r.r_a, r.r_t, r.r_r, -nu * temperature * r.r_a / f.real(), 0.0});
  }
  return kinetic_field(w0, c, t, x_grid, k_grid);
}

inline double pair_with_test_function(const KineticField& f, const PhaseSpaceFunction& o) {
  double s = 0.0;
  const std::size_t nk = f.k.size();
  for (std::size_t ix = 0; ix < f.x.size(); ++ix)
    for (std::size_t ik = 0; ik < nk; ++ik) s += o(f.x[ix], f.k[ik]) * f.regular[ix * nk + ik];
  s *= f.dx() * f.dk();
  double atom = 0.0;
  for (std::size_t ik = 0; ik < nk; ++ik) atom += f.atom_weight[ik] * o(f.atom_x[ik], f.k[ik]);
  return s + atom * f.dk();
}

inline double pair_with_test_function(const WignerGrid& g, const PhaseSpaceFunction& o) {
  require(g.position, ErrorCode::kGridMismatch, "pairing needs a position-space grid");
  const double dx = 0.5 * g.eps;
  const double dk = 1.0 / static_cast<double>(g.cols());
  double s = 0.0;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) s += o(g.axis[r], g.k[c]) * g.at(r, c).real();
  return s * dx * dk;
}

/// exp(-(x - xc)^2 / 2 sx^2) exp(-d(k, kc)^2 / 2 sk^2), d the torus distance.
struct GaussianTest {
  double xc = 0.0;
  double sx = 0.05;
  double kc = 0.25;
  double sk = 0.05;

  double operator()(double x, double k) const {
    const double dk = wrap_torus(k - kc);
    return std::exp(-(x - xc) * (x - xc) / (2.0 * sx * sx) - dk * dk / (2.0 * sk * sk));
  }
};

inline std::vector<GaussianTest> standard_test_battery() {
  std::vector<GaussianTest> out;
  for (double kc : {-0.25, 0.25})
    for (double xc : {-0.25, -0.1, 0.1, 0.25}) out.push_back({xc, 0.05, kc, 0.05});
  return out;
}

struct Fractions {
  double transmitted = 0.0;
  double reflected = 0.0;
  double absorbed = 0.0;
};

struct FractionOptions {
  double margin = 0.05;
  double max_band_mass = 0.05;
};

namespace detail {
template <class Value>
Fractions region_fractions(const std::vector<double>& x, const std::vector<double>& k, Value value, double dxdk,
                           double initial_mass, const FractionOptions& opt) {
  require(initial_mass > 0.0, ErrorCode::kValidation, "initial mass must be positive");
  double tr = 0.0, rf = 0.0, band = 0.0;
  for (std::size_t ix = 0; ix < x.size(); ++ix) {
    for (std::size_t ik = 0; ik < k.size(); ++ik) {
      const double w = value(ix, ik);
      if (std::abs(x[ix]) <= opt.margin) {
        band += w;
      } else if (x[ix] > opt.margin && k[ik] > 0.0) {
        tr += w;
      } else if (x[ix] < -opt.margin && k[ik] < 0.0) {
        rf += w;
      }
    }
  }
  band *= dxdk / initial_mass;
  require(std::abs(band) <= opt.max_band_mass, ErrorCode::kPacketNotSeparated,
          "mass fraction " + std::to_string(band) + " remains within the margin band");
  Fractions f;
  f.transmitted = tr * dxdk / initial_mass;
  f.reflected = rf * dxdk / initial_mass;
  f.absorbed = 1.0 - f.transmitted - f.reflected;
  return f;
}
}  // namespace detail

inline Fractions energy_fractions(const KineticField& f, const FractionOptions& opt = {}) {
  const std::size_t nk = f.k.size();
  return detail::region_fractions(
      f.x, f.k, [&](std::size_t ix, std::size_t ik) { return f.regular[ix * nk + ik]; }, f.dx() * f.dk(),
      f.initial_mass, opt);
}

inline Fractions energy_fractions(const WignerGrid& g, double initial_mass, const FractionOptions& opt = {}) {
  require(g.position, ErrorCode::kGridMismatch, "fractions need a position-space grid");
  return detail::region_fractions(
      g.axis, g.k, [&](std::size_t r, std::size_t c) { return g.at(r, c).real(); },
      0.5 * g.eps / static_cast<double>(g.cols()), initial_mass, opt);
}

/// Wigner mass int int W dx dk of an estimate on any xi grid containing 0.
inline double wigner_mass(const WignerGrid& g) {
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (!g.position && g.axis[r] == 0.0) {
      double s = 0.0;
      for (std::size_t c = 0; c < g.cols(); ++c) s += g.at(r, c).real();
      return s / static_cast<double>(g.cols());
    }
  }
  require(g.position, ErrorCode::kGridMismatch, "xi grid lacks xi = 0");
  double s = 0.0;
  for (const auto& v : g.values) s += v.real();
  return s * 0.5 * g.eps / static_cast<double>(g.cols());
}

/// Initial Wigner profile of the packet sampler (torus-wrapped in k).
inline PhaseSpaceFunction packet_wigner(const PacketProfile& p, double eps) {
  const double sk = eps / (4.0 * kPi * p.sigma_x);
  return [p, sk](double x, double k) {
    const double dk = wrap_torus(k - p.k0);
    return p.mass * std::exp(-(x - p.x0) * (x - p.x0) / (2.0 * p.sigma_x * p.sigma_x)) /
           (std::sqrt(kTwoPi) * p.sigma_x) * std::exp(-dk * dk / (2.0 * sk * sk)) / (std::sqrt(kTwoPi) * sk);
  };
}

inline PhaseSpaceFunction thermal_wigner(double temperature, double support_margin) {
  return [=](double, double k) { return in_bad_set(k, support_margin) ? 0.0 : temperature; };
}

}  // namespace phonctl
