// core/include/doalab/fft.h

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

#ifndef DOALAB_FFT_H_
#define DOALAB_FFT_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace doalab {

// One-dimensional real transform of a fixed size, double precision.
// forward() produces the one-sided spectrum (n/2 + 1 bins); inverse() is its
// exact inverse including the 1/n scaling. Each instance owns its plans and
// scratch buffers: construction is guarded internally (plan creation is not
// thread-safe), execution is safe as long as instances are not shared across
// threads without external synchronization.
class RealFft {
 public:
  explicit RealFft(size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  size_t size() const;
  size_t bins() const;  // n/2 + 1

  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

  std::vector<std::complex<double>> Forward(std::span<const double> in);
  std::vector<double> Inverse(std::span<const std::complex<double>> in);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Smallest power of two >= n. All overlap-free convolutions here pad to a
// power of two, which fftw handles on its fastest code paths.
size_t NextPow2(size_t n);

// Full linear convolution, length a + b - 1, computed via the frequency
// domain. Used by signal rendering; tests compare it against the O(n^2) form.
std::vector<double> FftConvolve(std::span<const double> a, std::span<const double> b);

}  // namespace doalab

#endif  // DOALAB_FFT_H_
