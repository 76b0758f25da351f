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
/// Transforms between Fourier amplitudes psi^(k_j), k_j = j/n - 1/2, and site
/// values psi_m, m in [-n/2, n/2). Thin RAII wrapper over FFTW.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

namespace phonctl {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

class Dft {
 public:
  explicit Dft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Dft() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  std::size_t size() const { return n_; }

  /// y_j = sum_m x_m exp(-2 pi i j m / n).
  void forward(const std::complex<double>* x, std::complex<double>* y) { run(fwd_, x, y); }
  /// y_m = sum_j x_j exp(+2 pi i j m / n).
  void backward(const std::complex<double>* x, std::complex<double>* y) { run(bwd_, x, y); }

 private:
  void run(fftw_plan p, const std::complex<double>* x, std::complex<double>* y) {
    auto* in = reinterpret_cast<std::complex<double>*>(in_);
    auto* out = reinterpret_cast<std::complex<double>*>(out_);
    for (std::size_t i = 0; i < n_; ++i) in[i] = x[i];
    fftw_execute(p);
    for (std::size_t i = 0; i < n_; ++i) y[i] = out[i];
  }

  std::size_t n_;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// Site values psi_m, stored at index m + n/2.
inline std::vector<std::complex<double>> to_sites(Dft& dft, const std::vector<std::complex<double>>& psi_hat) {
  const std::size_t n = psi_hat.size();
  std::vector<std::complex<double>> b(n), sites(n);
  dft.backward(psi_hat.data(), b.data());
  for (std::size_t i = 0; i < n; ++i) {
    const long m = static_cast<long>(i) - static_cast<long>(n / 2);
    const std::size_t idx = static_cast<std::size_t>((m % static_cast<long>(n) + static_cast<long>(n)) %
                                                     static_cast<long>(n));
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    sites[i] = sign * b[idx] / static_cast<double>(n);
  }
  return sites;
}

/// Fourier amplitudes from site values stored at index m + n/2.
inline std::vector<std::complex<double>> from_sites(Dft& dft, const std::vector<std::complex<double>>& sites) {
  const std::size_t n = sites.size();
  std::vector<std::complex<double>> y(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long m = static_cast<long>(i) - static_cast<long>(n / 2);
    const std::size_t idx = static_cast<std::size_t>((m % static_cast<long>(n) + static_cast<long>(n)) %
                                                     static_cast<long>(n));
    y[idx] = ((m % 2 == 0) ? 1.0 : -1.0) * sites[i];
  }
  dft.forward(y.data(), out.data());
  return out;
}

/// psi^(k_j + 1/(2n)) by exact trigonometric-polynomial evaluation.
inline std::vector<std::complex<double>> half_shift(Dft& dft, const std::vector<std::complex<double>>& psi_hat) {
  const std::size_t n = psi_hat.size();
  std::vector<std::complex<double>> b(n), out(n);
  dft.backward(psi_hat.data(), b.data());
  const double pi = 3.14159265358979323846;
  for (std::size_t idx = 0; idx < n; ++idx) {
    // idx = m mod n with m centered in [-n/2, n/2).
    long m = static_cast<long>(idx);
    if (m >= static_cast<long>(n / 2)) m -= static_cast<long>(n);
    b[idx] *= std::polar(1.0 / static_cast<double>(n), -pi * static_cast<double>(m) / static_cast<double>(n));
  }
  dft.forward(b.data(), out.data());
  return out;
}

}  // namespace phonctl
