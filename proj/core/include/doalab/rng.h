// core/include/doalab/rng.h

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

#ifndef DOALAB_RNG_H_
#define DOALAB_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>

namespace doalab {

// splitmix64 finalizer; used both as a bit mixer for seed derivation and as
// the expansion step when turning one master seed into named streams.
inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t Fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t MixSeed(uint64_t seed, uint64_t v) {
  return SplitMix64(seed ^ SplitMix64(v));
}

inline uint64_t MixSeed(uint64_t seed, std::string_view tag) {
  return MixSeed(seed, Fnv1a64(tag.data(), tag.size()));
}

template <class... Rest>
uint64_t MixSeed(uint64_t seed, uint64_t v, Rest... rest) {
  return MixSeed(MixSeed(seed, v), rest...);
}

template <class... Rest>
uint64_t MixSeed(uint64_t seed, std::string_view tag, Rest... rest) {
  return MixSeed(MixSeed(seed, tag), rest...);
}

// Deterministic random stream. The engine is mt19937_64 (output sequence is
// pinned by the standard) and all mappings to doubles/ints are explicit here,
// so generated datasets are reproducible independent of the C++ library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(SplitMix64(seed)) {}

  uint64_t NextU64() { return engine_(); }

  // [0, 1), 53-bit resolution
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // [0, bound), unbiased via rejection
  uint64_t UniformInt(uint64_t bound) {
    uint64_t t = (0 - bound) % bound;
    for (;;) {
      uint64_t r = NextU64();
      if (r >= t) return r % bound;
    }
  }

  // Box-Muller; second value of each pair is cached
  double Gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 1.0 - Uniform();  // (0, 1]
    double u2 = Uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  void FillGaussian(std::span<double> out) {
    for (double& v : out) v = Gaussian();
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace doalab

#endif  // DOALAB_RNG_H_
