// core/src/fft.cc

// Copyright 2026  The doalab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "doalab/fft.h"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "doalab/error.h"

namespace doalab {

namespace {
// fftw plan creation/destruction mutates global planner state.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  size_t n = 0;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Impl(size_t size) : n(size) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE);
  }

  ~Impl() {
    {
      std::lock_guard<std::mutex> lock(PlannerMutex());
      if (fwd) fftw_destroy_plan(fwd);
      if (inv) fftw_destroy_plan(inv);
    }
    fftw_free(real);
    fftw_free(cplx);
  }
};

RealFft::RealFft(size_t n) : impl_(std::make_unique<Impl>(n)) {
  Require(n >= 2 && n % 2 == 0, ErrorKind::kInvalidArgument,
          "RealFft size must be even and >= 2");
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

size_t RealFft::size() const { return impl_->n; }
size_t RealFft::bins() const { return impl_->n / 2 + 1; }

void RealFft::Forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const size_t n = impl_->n;
  Require(in.size() == n, ErrorKind::kInvalidArgument, "Forward: bad input length");
  Require(out.size() == bins(), ErrorKind::kInvalidArgument, "Forward: bad output length");
  std::memcpy(impl_->real, in.data(), n * sizeof(double));
  fftw_execute(impl_->fwd);
  std::memcpy(out.data(), impl_->cplx, bins() * sizeof(fftw_complex));
}

void RealFft::Inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const size_t n = impl_->n;
  Require(in.size() == bins(), ErrorKind::kInvalidArgument, "Inverse: bad input length");
  Require(out.size() == n, ErrorKind::kInvalidArgument, "Inverse: bad output length");
  // c2r destroys its input, which is why the transform runs out of scratch.
  std::memcpy(impl_->cplx, in.data(), bins() * sizeof(fftw_complex));
  fftw_execute(impl_->inv);
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) out[i] = impl_->real[i] * scale;
}

std::vector<std::complex<double>> RealFft::Forward(std::span<const double> in) {
  std::vector<std::complex<double>> out(bins());
  Forward(in, out);
  return out;
}

std::vector<double> RealFft::Inverse(std::span<const std::complex<double>> in) {
  std::vector<double> out(size());
  Inverse(in, out);
  return out;
}

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b) {
  Require(!a.empty() && !b.empty(), ErrorKind::kInvalidArgument,
          "FftConvolve: empty input");
  const size_t out_len = a.size() + b.size() - 1;
  const size_t nfft = NextPow2(out_len);
  RealFft fft(nfft);

  std::vector<double> pa(nfft, 0.0), pb(nfft, 0.0);
  std::memcpy(pa.data(), a.data(), a.size() * sizeof(double));
  std::memcpy(pb.data(), b.data(), b.size() * sizeof(double));

  auto fa = fft.Forward(pa);
  auto fb = fft.Forward(pb);
  for (size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];

  auto full = fft.Inverse(fa);
  full.resize(out_len);
  return full;
}

}  // namespace doalab
