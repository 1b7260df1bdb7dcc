// tests/test_datagen.cc

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

#include "doalab/datagen.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <filesystem>
#include <set>
#include <vector>

#include "doalab/error.h"
#include "doalab/wav.h"
#include "doctest.h"
#include "test_util.h"

namespace doalab {
namespace {

using testing::TempDir;
using testing::ThrownKind;

// Small grid that keeps unit tests fast: 5 classes (45 degree steps), one
// room, short signals.
TrainGrid TinyGrid() {
  TrainGrid grid;
  grid.rooms = {{"T1", {4.0, 5.0, 2.7}, 0.25}};
  grid.positions_per_room = 1;
  grid.distances = {1.0};
  grid.doa_step_deg = 45;
  grid.signal_seconds = 0.5;
  grid.pair_stride = 1;
  return grid;
}

StftFrameSet TaggedFrames(int frames, int bins, int channels) {
  StftFrameSet set;
  set.frames = frames;
  set.bins = bins;
  set.channels = channels;
  set.dft_len = 2 * (bins - 1);
  set.hop = set.dft_len / 2;
  set.fs = 16000;
  set.data.resize(static_cast<size_t>(frames) * bins * channels);
  // Encode (frame, band, channel) into the value so any misplaced element is
  // detectable: real part identifies the band, imag the source frame/channel.
  for (int n = 0; n < frames; ++n) {
    for (int k = 0; k < bins; ++k) {
      for (int m = 0; m < channels; ++m) {
        set.At(n, k, m) = {static_cast<double>(k), n * 100.0 + m};
      }
    }
  }
  return set;
}

using BinVec = std::vector<std::complex<double>>;

// All M-vectors of one band, as sortable value lists.
std::vector<std::vector<std::pair<double, double>>> BandMultiset(const StftFrameSet& set,
                                                                 int k) {
  std::vector<std::vector<std::pair<double, double>>> out;
  for (int n = 0; n < set.frames; ++n) {
    std::vector<std::pair<double, double>> vec;
    for (int m = 0; m < set.channels; ++m) {
      vec.emplace_back(set.At(n, k, m).real(), set.At(n, k, m).imag());
    }
    out.push_back(std::move(vec));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST_CASE("class grid helpers") {
  CHECK(ClassCountForStep(5) == 37);
  CHECK(ClassCountForStep(45) == 5);
  CHECK(ClassCountForStep(180) == 2);
  CHECK(ThrownKind([] { ClassCountForStep(7); }) == ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([] { ClassCountForStep(0); }) == ErrorKind::kInvalidArgument);

  CHECK(ClassToDeg(0, 5) == 0.0);
  CHECK(ClassToDeg(18, 5) == 90.0);
  CHECK(ClassToDeg(36, 5) == 180.0);
  CHECK(ThrownKind([] { ClassToDeg(37, 5); }) == ErrorKind::kInvalidArgument);

  CHECK(DegToClass(0.0, 5) == 0);
  CHECK(DegToClass(90.0, 5) == 18);
  CHECK(DegToClass(180.0, 5) == 36);
  CHECK(ThrownKind([] { DegToClass(91.0, 5); }) == ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([] { DegToClass(-5.0, 5); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("pair enumeration is lexicographic and strided") {
  const auto all = EnumeratePairs(37);
  CHECK(all.size() == 666);  // 37 choose 2
  CHECK(all.front() == std::pair<int, int>{0, 1});
  CHECK(all[1] == std::pair<int, int>{0, 2});
  CHECK(all[36] == std::pair<int, int>{1, 2});
  CHECK(all.back() == std::pair<int, int>{35, 36});
  for (const auto& [c1, c2] : all) CHECK(c1 < c2);

  const auto sparse = EnumeratePairs(37, 6);
  CHECK(sparse.size() == 111);
  CHECK(sparse.front() == all[0]);
  CHECK(sparse[1] == all[6]);
  CHECK(sparse.back() == all[660]);

  CHECK(EnumeratePairs(5).size() == 10);
  CHECK(ThrownKind([] { EnumeratePairs(1); }) == ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([] { EnumeratePairs(5, 0); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("projected frame count matches the published grid scale") {
  // 5 rooms x 7 positions x 2 distances x 666 pairs x 249 frames.
  TrainGrid grid;
  grid.rooms = {{"R1", {6.0, 6.0, 2.7}, 0.3},
                {"R2", {5.0, 4.0, 2.7}, 0.2},
                {"R3", {10.0, 6.0, 2.7}, 0.8},
                {"R4", {8.0, 3.0, 2.7}, 0.4},
                {"R5", {8.0, 5.0, 2.7}, 0.6}};
  CHECK(ProjectedFrameCount(grid) == 11608380);

  TrainGrid tiny = TinyGrid();
  // 1 cell, 10 pairs, concat length 16000 -> 61 frames per pair.
  CHECK(ProjectedFrameCount(tiny) == 610);
  tiny.include_singles = true;
  // plus 5 classes x 30 frames of 8000-sample singles
  CHECK(ProjectedFrameCount(tiny) == 610 + 150);
  tiny.pair_stride = 3;
  CHECK(ProjectedFrameCount(tiny) == 4 * 61 + 150);
}

TEST_CASE("train grid validation") {
  TrainGrid grid = TinyGrid();
  grid.rooms.push_back(grid.rooms[0]);  // duplicate name
  CHECK(ThrownKind([&] { grid.Validate(); }) == ErrorKind::kInvalidArgument);

  grid = TinyGrid();
  grid.rooms[0].name = "bad name";  // spaces break shard paths
  CHECK(ThrownKind([&] { grid.Validate(); }) == ErrorKind::kInvalidArgument);

  grid = TinyGrid();
  grid.distances.clear();
  CHECK(ThrownKind([&] { grid.Validate(); }) == ErrorKind::kInvalidArgument);

  grid = TinyGrid();
  grid.snr_lo_db = 10.0;
  grid.snr_hi_db = 0.0;
  CHECK(ThrownKind([&] { grid.Validate(); }) == ErrorKind::kInvalidArgument);

  grid = TinyGrid();
  grid.signal_seconds = 0.01;  // under one DFT frame
  CHECK(ThrownKind([&] { grid.Validate(); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("band randomization permutes within bands only") {
  StftFrameSet original = TaggedFrames(24, 9, 4);
  StftFrameSet shuffled = original;
  Rng rng(7);
  RandomizeBands(shuffled, rng);

  bool any_moved = false;
  for (int k = 0; k < original.bins; ++k) {
    // Per-band multiset of M-vectors is preserved bitwise.
    CHECK(BandMultiset(original, k) == BandMultiset(shuffled, k));
    for (int n = 0; n < original.frames; ++n) {
      // No value from another band leaked in (real part encodes the band).
      for (int m = 0; m < original.channels; ++m) {
        CHECK(shuffled.At(n, k, m).real() == static_cast<double>(k));
      }
      if (shuffled.At(n, k, 0) != original.At(n, k, 0)) any_moved = true;
    }
  }
  CHECK(any_moved);

  // Microphone vectors move as blocks: the M channel values of a bin keep
  // their common frame tag.
  for (int k = 0; k < shuffled.bins; ++k) {
    for (int n = 0; n < shuffled.frames; ++n) {
      const double frame_tag = std::floor(shuffled.At(n, k, 0).imag() / 100.0);
      for (int m = 0; m < shuffled.channels; ++m) {
        CHECK(shuffled.At(n, k, m).imag() == doctest::Approx(frame_tag * 100.0 + m));
      }
    }
  }

  // Bands are shuffled independently: with 24 frames and 9 bands, at least
  // two bands must end up with different permutations.
  auto permutation_of = [&](int k) {
    std::vector<int> perm;
    for (int n = 0; n < shuffled.frames; ++n) {
      perm.push_back(static_cast<int>(std::floor(shuffled.At(n, k, 0).imag() / 100.0)));
    }
    return perm;
  };
  bool bands_differ = false;
  for (int k = 1; k < shuffled.bins; ++k) {
    if (permutation_of(k) != permutation_of(0)) bands_differ = true;
  }
  CHECK(bands_differ);
}

TEST_CASE("band randomization is seed reproducible") {
  StftFrameSet a = TaggedFrames(16, 5, 2);
  StftFrameSet b = a;
  StftFrameSet c = a;
  Rng r1(42), r2(42), r3(43);
  RandomizeBands(a, r1);
  RandomizeBands(b, r2);
  RandomizeBands(c, r3);
  CHECK(a.data == b.data);
  CHECK(a.data != c.data);
}

TEST_CASE("pair randomization concatenates then shuffles") {
  StftFrameSet a = TaggedFrames(7, 5, 3);
  StftFrameSet b = TaggedFrames(9, 5, 3);
  for (auto& v : b.data) v += std::complex<double>(0.0, 10000.0);  // distinguish B's frames

  Rng rng(11);
  const StftFrameSet mixed = RandomizePair(a, b, rng);
  CHECK(mixed.frames == 16);
  CHECK(mixed.bins == 5);
  CHECK(mixed.channels == 3);

  for (int k = 0; k < 5; ++k) {
    auto expected = BandMultiset(a, k);
    auto from_b = BandMultiset(b, k);
    expected.insert(expected.end(), from_b.begin(), from_b.end());
    std::sort(expected.begin(), expected.end());
    CHECK(BandMultiset(mixed, k) == expected);
  }

  StftFrameSet wrong = TaggedFrames(7, 6, 3);
  CHECK(ThrownKind([&] {
          Rng r(1);
          RandomizePair(a, wrong, r);
        }) == ErrorKind::kShapeMismatch);
}

TEST_CASE("cell records carry the right labels and shapes") {
  const TrainGrid grid = TinyGrid();
  const Room& room = grid.rooms[0];
  ArraySetup array;
  array.center = {2.0, 2.5, 1.35};
  array.axis = ArrayAxisForRoom(room);

  const uint64_t seed = CellSeed(123, room.name, 0, 1.0, 1, 3);
  const auto records = MakeTrainingRecords(grid, room, array, 1.0, 1, 3, seed);
  CHECK(records.size() == 61);  // two 0.5 s signals -> 16000 samples -> 61 frames
  for (const auto& rec : records) {
    CHECK(rec.label == 0b1010);
    CHECK(rec.phases.size() == static_cast<size_t>(kMicCount) * kBandCount);
    for (float v : rec.phases) {
      CHECK(std::isfinite(v));
      CHECK(std::abs(v) <= 3.1415928f);
    }
  }

  // Deterministic in the cell seed, sensitive to it.
  const auto again = MakeTrainingRecords(grid, room, array, 1.0, 1, 3, seed);
  CHECK(again == records);
  const auto other = MakeTrainingRecords(grid, room, array, 1.0, 1, 3, seed + 1);
  CHECK(other != records);

  CHECK(ThrownKind([&] { MakeTrainingRecords(grid, room, array, 1.0, 2, 2, seed); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("cell seeds separate all coordinates") {
  std::set<uint64_t> seeds;
  seeds.insert(CellSeed(1, "R1", 0, 1.0, 0, 1));
  seeds.insert(CellSeed(2, "R1", 0, 1.0, 0, 1));
  seeds.insert(CellSeed(1, "R2", 0, 1.0, 0, 1));
  seeds.insert(CellSeed(1, "R1", 1, 1.0, 0, 1));
  seeds.insert(CellSeed(1, "R1", 0, 2.0, 0, 1));
  seeds.insert(CellSeed(1, "R1", 0, 1.0, 0, 2));
  seeds.insert(CellSeed(1, "R1", 0, 1.0, 1, 2));
  CHECK(seeds.size() == 7);
}

TEST_CASE("dataset generation is reproducible and thread invariant") {
  TempDir tmp;
  TrainGrid grid = TinyGrid();
  grid.positions_per_room = 2;

  const auto m1 = GenerateDataset(grid, 555, tmp.File("run1"));
  REQUIRE(m1.shards.size() == 2);
  CHECK(m1.total_records == ProjectedFrameCount(grid));
  CHECK(m1.shards[0].records == 610);
  CHECK(m1.shards[0].path == "shards/T1_p0.doap");
  CHECK(m1.shards[1].path == "shards/T1_p1.doap");

  // Shard headers and digests line up with the files on disk.
  for (const auto& info : m1.shards) {
    const std::string path = tmp.File("run1/" + info.path);
    ShardHeader header;
    const auto records = ReadShard(path, &header);
    CHECK(header.mic_count == kMicCount);
    CHECK(header.band_count == static_cast<uint32_t>(kBandCount));
    CHECK(header.class_count == 5);
    CHECK(records.size() == info.records);
    CHECK(FileDigest(path) == info.digest);
  }

  // Same seed, fresh directory, two worker threads: identical bytes.
  const auto m2 = GenerateDataset(grid, 555, tmp.File("run2"), 2);
  for (size_t s = 0; s < m1.shards.size(); ++s) {
    CHECK(m2.shards[s].digest == m1.shards[s].digest);
  }
  CHECK(FileDigest(tmp.File("run2/manifest.json")) ==
        FileDigest(tmp.File("run1/manifest.json")));

  // Different seed changes the data.
  const auto m3 = GenerateDataset(grid, 556, tmp.File("run3"));
  CHECK(m3.shards[0].digest != m1.shards[0].digest);

  // Manifest round trip preserves the grid and shard listing.
  const auto back = ReadManifest(tmp.File("run1/manifest.json"));
  CHECK(back.master_seed == 555);
  CHECK(back.total_records == m1.total_records);
  CHECK(back.grid.rooms.size() == 1);
  CHECK(back.grid.rooms[0].name == "T1");
  CHECK(back.grid.rooms[0].rt60 == doctest::Approx(0.25));
  CHECK(back.grid.doa_step_deg == 45);
  REQUIRE(back.shards.size() == 2);
  CHECK(back.shards[1].path == m1.shards[1].path);
  CHECK(back.shards[1].digest == m1.shards[1].digest);
  CHECK(back.shards[1].array_center.isApprox(m1.shards[1].array_center));

  CHECK(ThrownKind([&] { ReadManifest(tmp.File("run1/absent.json")); }) == ErrorKind::kIo);
}

TEST_CASE("full small grid covers every class") {
  TempDir tmp;
  const TrainGrid grid = TinyGrid();
  const auto manifest = GenerateDataset(grid, 99, tmp.File("ds"));
  uint64_t label_union = 0;
  for (const auto& info : manifest.shards) {
    for (const auto& rec : ReadShard(tmp.File("ds/" + info.path))) {
      label_union |= rec.label;
      CHECK(std::popcount(rec.label) == 2);
    }
  }
  CHECK(label_union == 0b11111);  // all 5 classes appear
}

TEST_CASE("single-source records are one hot") {
  TempDir tmp;
  TrainGrid grid = TinyGrid();
  grid.include_singles = true;
  const auto manifest = GenerateDataset(grid, 7, tmp.File("ds"));
  CHECK(manifest.total_records == 610 + 150);
  int singles = 0;
  for (const auto& rec : ReadShard(tmp.File("ds/" + manifest.shards[0].path))) {
    if (std::popcount(rec.label) == 1) ++singles;
  }
  CHECK(singles == 150);
}

TEST_CASE("synthetic speech provider emits plausible signals") {
  SyntheticSpeechProvider provider;
  Rng rng(5);
  auto [a, b] = provider.DrawPair(2.0, 16000, rng);
  REQUIRE(a.size() == 32000);
  REQUIRE(b.size() == 32000);
  CHECK(a != b);

  auto rms = [](const std::vector<double>& x) {
    double p = 0.0;
    for (double v : x) p += v * v;
    return std::sqrt(p / static_cast<double>(x.size()));
  };
  CHECK(rms(a) == doctest::Approx(0.15).epsilon(1e-9));
  CHECK(rms(b) == doctest::Approx(0.15).epsilon(1e-9));

  // Speech-like: some stretches are near-silent (pauses), some are loud.
  int quiet = 0;
  const size_t win = 800;  // 50 ms
  for (size_t start = 0; start + win <= a.size(); start += win) {
    double p = 0.0;
    for (size_t i = start; i < start + win; ++i) p += a[i] * a[i];
    if (std::sqrt(p / win) < 0.02) ++quiet;
  }
  CHECK(quiet >= 1);

  Rng rng2(5);
  auto [a2, b2] = provider.DrawPair(2.0, 16000, rng2);
  CHECK(a2 == a);
  CHECK(b2 == b);
}

TEST_CASE("wav directory provider crops valid material") {
  TempDir tmp;
  Rng noise(3);
  auto write_wav = [&](const std::string& name, int rate, int channels, size_t frames) {
    WavData wav;
    wav.sample_rate_hz = rate;
    wav.channels.resize(channels);
    for (auto& ch : wav.channels) {
      ch.resize(frames);
      for (double& v : ch) v = 0.25 * noise.Gaussian();
    }
    WriteWav(tmp.File(name), wav);
  };

  SUBCASE("happy path draws distinct files deterministically") {
    write_wav("a.wav", 16000, 1, 20000);
    write_wav("b.wav", 16000, 1, 20000);
    WavDirProvider provider(tmp.path().string());
    Rng rng(9);
    auto [a, b] = provider.DrawPair(1.0, 16000, rng);
    CHECK(a.size() == 16000);
    CHECK(b.size() == 16000);
    CHECK(a != b);
    Rng rng2(9);
    auto [a2, b2] = provider.DrawPair(1.0, 16000, rng2);
    CHECK(a2 == a);
  }
  SUBCASE("fewer than two files is an error") {
    write_wav("a.wav", 16000, 1, 20000);
    CHECK(ThrownKind([&] { WavDirProvider p(tmp.path().string()); }) ==
          ErrorKind::kInvalidArgument);
  }
  SUBCASE("wrong sample rate is rejected") {
    write_wav("a.wav", 8000, 1, 20000);
    write_wav("b.wav", 8000, 1, 20000);
    WavDirProvider provider(tmp.path().string());
    Rng rng(1);
    CHECK(ThrownKind([&] { provider.DrawPair(1.0, 16000, rng); }) ==
          ErrorKind::kInvalidArgument);
  }
  SUBCASE("stereo input is rejected") {
    write_wav("a.wav", 16000, 2, 20000);
    write_wav("b.wav", 16000, 2, 20000);
    WavDirProvider provider(tmp.path().string());
    Rng rng(1);
    CHECK(ThrownKind([&] { provider.DrawPair(1.0, 16000, rng); }) ==
          ErrorKind::kInvalidArgument);
  }
  SUBCASE("too-short material is rejected") {
    write_wav("a.wav", 16000, 1, 8000);
    write_wav("b.wav", 16000, 1, 8000);
    WavDirProvider provider(tmp.path().string());
    Rng rng(1);
    CHECK(ThrownKind([&] { provider.DrawPair(1.0, 16000, rng); }) ==
          ErrorKind::kInvalidArgument);
  }
  SUBCASE("missing directory is an io error") {
    CHECK(ThrownKind([&] { WavDirProvider p(tmp.File("absent")); }) == ErrorKind::kIo);
  }
}

TEST_CASE("test mixtures hit the requested snr exactly") {
  TestSetConfig config;
  config.room = {"E1", {6.0, 5.0, 2.7}, 0.3};
  config.distance = 1.5;
  config.snr_db = 30.0;
  config.duration_s = 1.0;
  const ArraySetup array = TestArray(config.room);
  const auto rirs1 = RirsFor(config.room, array, 40.0, config.distance, config.fs);
  const auto rirs2 = RirsFor(config.room, array, 120.0, config.distance, config.fs);

  SyntheticSpeechProvider provider;
  const Mixture mix = BuildTestMixture(config, array, provider, 8, 24, 777, rirs1, rirs2);
  REQUIRE(mix.clean.size() == static_cast<size_t>(kMicCount));
  REQUIRE(mix.noisy.size() == mix.clean.size());
  // The noise gain is global, so the exact SNR contract holds for the summed
  // energy across channels.
  double sig = 0.0, noise = 0.0;
  for (size_t m = 0; m < mix.clean.size(); ++m) {
    for (size_t i = 0; i < mix.clean[m].size(); ++i) {
      const double n = mix.noisy[m][i] - mix.clean[m][i];
      sig += mix.clean[m][i] * mix.clean[m][i];
      noise += n * n;
    }
  }
  CHECK(10.0 * std::log10(sig / noise) == doctest::Approx(30.0).epsilon(1e-9));

  const Mixture again = BuildTestMixture(config, array, provider, 8, 24, 777, rirs1, rirs2);
  CHECK(again.noisy == mix.noisy);
}

TEST_CASE("test set generation writes mixtures with truth") {
  TempDir tmp;
  TestSetConfig config;
  config.room = {"E1", {6.0, 5.0, 2.7}, 0.3};
  config.duration_s = 0.6;
  config.doa_step_deg = 45;  // classes {0, 45, 90, 135, 180}
  config.pair_stride = 3;    // every third of the 10 pairs -> 4 mixtures

  SyntheticSpeechProvider provider;
  const TestSetInfo info = GenTestMixtures(config, provider, 2024, tmp.File("ts"));
  CHECK(info.mixture_count == 4);
  REQUIRE(info.mixture_dirs.size() == 4);
  CHECK(info.mixture_dirs[0] == "mix_000_045");

  const auto dirs = ListMixtureDirs(tmp.File("ts"));
  REQUIRE(dirs.size() == 4);
  for (const auto& dir : dirs) {
    const WavData wav = ReadWav((std::filesystem::path(dir) / "mixture.wav").string());
    CHECK(wav.sample_rate_hz == config.fs);
    CHECK(wav.channels.size() == static_cast<size_t>(kMicCount));
    CHECK(wav.frames() == static_cast<size_t>(std::llround(config.duration_s * config.fs)));
    const MixtureTruth truth = ReadTruth(dir);
    CHECK(truth.theta1_deg < truth.theta2_deg);
    CHECK(truth.theta1_deg % 45 == 0);
    CHECK(truth.snr_db == doctest::Approx(30.0));
    CHECK(truth.scale <= 1.0);
    CHECK(truth.scale > 0.0);
  }

  // Thread-count invariance: regenerating with 2 workers gives identical bytes.
  GenTestMixtures(config, provider, 2024, tmp.File("ts2"), 2);
  for (const auto& rel : info.mixture_dirs) {
    CHECK(FileDigest(tmp.File("ts/" + rel + "/mixture.wav")) ==
          FileDigest(tmp.File("ts2/" + rel + "/mixture.wav")));
  }
  CHECK(FileDigest(tmp.File("ts/test_set.json")) == FileDigest(tmp.File("ts2/test_set.json")));

  CHECK(ThrownKind([&] { ListMixtureDirs(tmp.File("nope")); }) == ErrorKind::kIo);
  std::filesystem::create_directories(tmp.File("hollow"));
  CHECK(ThrownKind([&] { ListMixtureDirs(tmp.File("hollow")); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("clipping guard rescales hot mixtures") {
  TempDir tmp;
  TestSetConfig config;
  config.room = {"E1", {6.0, 5.0, 2.7}, 0.3};
  config.duration_s = 0.6;
  config.doa_step_deg = 90;  // 3 classes -> 3 pairs
  config.snr_db = -40.0;     // noise power 1e4 x the mixture forces the guard

  SyntheticSpeechProvider provider;
  const TestSetInfo info = GenTestMixtures(config, provider, 5, tmp.File("ts"));
  bool guarded = false;
  for (const auto& rel : info.mixture_dirs) {
    const MixtureTruth truth = ReadTruth(tmp.File("ts/" + rel));
    if (truth.scale < 1.0) guarded = true;
    const WavData wav = ReadWav(tmp.File("ts/" + rel + "/mixture.wav"));
    for (const auto& ch : wav.channels) {
      for (double v : ch) CHECK(std::abs(v) <= 0.9905);
    }
  }
  CHECK(guarded);
}

}  // namespace
}  // namespace doalab
