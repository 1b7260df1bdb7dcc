// tests/test_rng.cc

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

#include "doalab/rng.h"

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

namespace doalab {
namespace {

TEST_CASE("splitmix64 matches the reference sequence") {
  // Frozen from an independent reimplementation of the published splitmix64.
  CHECK(SplitMix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(SplitMix64(1) == 0x910a2dec89025cc1ULL);
  CHECK(SplitMix64(0xdeadbeefULL) == 0x4adfb90f68c9eb9bULL);
}

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(Fnv1a64("", 0) == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a", 1) == 0xaf63dc4c8601ec8cULL);
  CHECK(Fnv1a64("foobar", 6) == 0x85944171f73967e8ULL);
}

TEST_CASE("fnv1a64 chains across calls") {
  const uint64_t whole = Fnv1a64("foobar", 6);
  const uint64_t split = Fnv1a64("bar", 3, Fnv1a64("foo", 3));
  CHECK(whole == split);
}

TEST_CASE("the underlying engine is the standard-pinned mt19937_64") {
  // The C++ standard fixes the 10000th output of a default-seeded
  // mt19937_64; if this fails, determinism claims are void on this platform.
  std::mt19937_64 engine;
  engine.discard(9999);
  CHECK(engine() == 9981545732273789042ULL);
}

TEST_CASE("same seed reproduces, different seed diverges") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t va = a.NextU64();
    all_equal = all_equal && (va == b.NextU64());
    any_diff = any_diff || (va != c.NextU64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform doubles live in [0, 1) with the right moments") {
  Rng rng(7);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 0.004);
  CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("ranged uniform stays in bounds") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.Uniform(-3.0, 5.0);
    REQUIRE(u >= -3.0);
    REQUIRE(u < 5.0);
  }
}

TEST_CASE("uniform integers cover the range without bias") {
  Rng rng(13);
  const uint64_t bound = 7;
  std::vector<int> hits(bound, 0);
  const int n = 21000;
  for (int i = 0; i < n; ++i) {
    const uint64_t v = rng.UniformInt(bound);
    REQUIRE(v < bound);
    ++hits[v];
  }
  for (uint64_t v = 0; v < bound; ++v) CHECK(hits[v] > n / 7 * 8 / 10);
  CHECK(Rng(1).UniformInt(1) == 0);
}

TEST_CASE("gaussian moments") {
  Rng rng(17);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.Gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.025);
}

TEST_CASE("fill gaussian matches scalar draws") {
  Rng a(23), b(23);
  std::vector<double> block(64);
  a.FillGaussian(block);
  for (double v : block) CHECK(v == b.Gaussian());
}

TEST_CASE("mix seed separates streams and respects order") {
  CHECK(MixSeed(1, "alpha") != MixSeed(1, "beta"));
  CHECK(MixSeed(1, "alpha") != MixSeed(2, "alpha"));
  CHECK(MixSeed(1, uint64_t{2}, uint64_t{3}) != MixSeed(1, uint64_t{3}, uint64_t{2}));
  // Variadic form is the left fold of the two-argument form.
  CHECK(MixSeed(1, uint64_t{2}, uint64_t{3}) == MixSeed(MixSeed(1, uint64_t{2}), uint64_t{3}));
  CHECK(MixSeed(9, "room", uint64_t{4}) == MixSeed(MixSeed(9, "room"), uint64_t{4}));

  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 1000; ++i) seen.insert(MixSeed(77, i));
  CHECK(seen.size() == 1000);
}

}  // namespace
}  // namespace doalab
