// core/src/datagen.cc

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
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doalab/error.h"
#include "doalab/threading.h"
#include "doalab/wav.h"
#include "json.hpp"
#include "json_util.h"

namespace doalab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using internal::LoadJsonFile;
using internal::RoomFromJson;
using internal::RoomToJson;
using internal::WriteTextFile;

constexpr char kManifestFormat[] = "doap-manifest-v1";
constexpr char kTestSetFormat[] = "doap-testset-v1";

size_t SamplesFor(double seconds, int fs) {
  return static_cast<size_t>(std::llround(seconds * fs));
}

// Shard file names are derived from room names, so keep those path-safe.
void RequirePathSafeName(const std::string& name) {
  Require(!name.empty(), ErrorKind::kInvalidArgument, "room name must not be empty");
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    Require(ok, ErrorKind::kInvalidArgument,
            "room name '" + name + "' may only use [A-Za-z0-9_-]");
  }
}

std::vector<LabeledFrame> FramesToRecords(const StftFrameSet& frames, uint64_t label) {
  std::vector<LabeledFrame> records(static_cast<size_t>(frames.frames));
  for (int n = 0; n < frames.frames; ++n) {
    const PhaseMap map = ExtractPhaseMap(frames, n);
    LabeledFrame& rec = records[static_cast<size_t>(n)];
    rec.label = label;
    rec.phases.resize(map.values.size());
    for (size_t i = 0; i < map.values.size(); ++i) {
      rec.phases[i] = static_cast<float>(map.values[i]);
    }
  }
  return records;
}

// Single-source variant of the cell pipeline (optional 1-hot records).
std::vector<LabeledFrame> MakeSingleRecords(const TrainGrid& grid, int cls,
                                            uint64_t cell_seed,
                                            const std::vector<Rir>& rirs) {
  Rng rng(cell_seed);
  std::vector<double> sig(SamplesFor(grid.signal_seconds, grid.fs));
  rng.FillGaussian(sig);
  ChannelData x = RenderChannels(sig, rirs);
  const double snr = rng.Uniform(grid.snr_lo_db, grid.snr_hi_db);
  AddNoiseSnr(x, snr, rng);
  StftFrameSet frames = Stft(x, kDftLen, grid.fs);
  RandomizeBands(frames, rng);
  return FramesToRecords(frames, uint64_t{1} << cls);
}

}  // namespace

int ClassCountForStep(int step_deg) {
  Require(step_deg > 0 && 180 % step_deg == 0, ErrorKind::kInvalidArgument,
          "DOA step must be a positive divisor of 180");
  return 180 / step_deg + 1;
}

double ClassToDeg(int cls, int step_deg) {
  const int count = ClassCountForStep(step_deg);
  Require(cls >= 0 && cls < count, ErrorKind::kInvalidArgument, "class index out of range");
  return static_cast<double>(cls) * step_deg;
}

int DegToClass(double deg, int step_deg) {
  const int count = ClassCountForStep(step_deg);
  const int cls = static_cast<int>(std::llround(deg / step_deg));
  Require(cls >= 0 && cls < count && std::abs(deg - cls * static_cast<double>(step_deg)) < 1e-9,
          ErrorKind::kInvalidArgument, "angle is not on the class grid");
  return cls;
}

std::vector<std::pair<int, int>> EnumeratePairs(int class_count, int stride) {
  Require(class_count >= 2, ErrorKind::kInvalidArgument, "need at least 2 classes");
  Require(stride >= 1, ErrorKind::kInvalidArgument, "pair stride must be >= 1");
  std::vector<std::pair<int, int>> out;
  int index = 0;
  for (int c1 = 0; c1 < class_count; ++c1) {
    for (int c2 = c1 + 1; c2 < class_count; ++c2) {
      if (index % stride == 0) out.emplace_back(c1, c2);
      ++index;
    }
  }
  return out;
}

void TrainGrid::Validate() const {
  Require(!rooms.empty(), ErrorKind::kInvalidArgument, "grid needs at least one room");
  for (const Room& room : rooms) {
    room.Validate();
    RequirePathSafeName(room.name);
  }
  for (size_t i = 0; i < rooms.size(); ++i) {
    for (size_t j = i + 1; j < rooms.size(); ++j) {
      Require(rooms[i].name != rooms[j].name, ErrorKind::kInvalidArgument,
              "duplicate room name '" + rooms[i].name + "'");
    }
  }
  Require(positions_per_room >= 1, ErrorKind::kInvalidArgument,
          "positions_per_room must be >= 1");
  Require(!distances.empty(), ErrorKind::kInvalidArgument, "grid needs at least one distance");
  for (double d : distances) {
    Require(d > 0.0, ErrorKind::kInvalidArgument, "source distances must be positive");
  }
  Require(snr_hi_db >= snr_lo_db, ErrorKind::kInvalidArgument, "SNR range is inverted");
  ClassCountForStep(doa_step_deg);
  Require(fs > 0, ErrorKind::kInvalidArgument, "sample rate must be positive");
  Require(SamplesFor(signal_seconds, fs) >= static_cast<size_t>(kDftLen),
          ErrorKind::kInvalidArgument, "signal too short for one STFT frame");
  Require(pair_stride >= 1, ErrorKind::kInvalidArgument, "pair stride must be >= 1");
}

uint64_t ProjectedFrameCount(const TrainGrid& grid) {
  grid.Validate();
  const uint64_t cells = grid.rooms.size() * static_cast<uint64_t>(grid.positions_per_room) *
                         grid.distances.size();
  const int count = grid.class_count();
  const uint64_t all_pairs = static_cast<uint64_t>(count) * (count - 1) / 2;
  const uint64_t pairs = (all_pairs + grid.pair_stride - 1) / grid.pair_stride;
  const size_t n = SamplesFor(grid.signal_seconds, grid.fs);
  uint64_t total = cells * pairs *
                   static_cast<uint64_t>(StftFrameCount(2 * n, kDftLen, kHop));
  if (grid.include_singles) {
    total += cells * static_cast<uint64_t>(count) *
             static_cast<uint64_t>(StftFrameCount(n, kDftLen, kHop));
  }
  return total;
}

std::vector<Rir> RirsFor(const Room& room, const ArraySetup& array, double doa_deg,
                         double distance, int fs) {
  const double beta = SabineReflection(room);
  const SourcePlacement placement = PlaceSource(array, doa_deg, distance, room);
  std::vector<Rir> rirs;
  rirs.reserve(static_cast<size_t>(array.mic_count));
  for (int m = 0; m < array.mic_count; ++m) {
    rirs.push_back(SimulateRir(room, beta, placement.position, array.MicPosition(m), fs));
  }
  return rirs;
}

ChannelData SynthSingleDoa(const std::vector<Rir>& rirs, double duration_s, int fs,
                           Rng& rng) {
  Require(!rirs.empty(), ErrorKind::kInvalidArgument, "need at least one RIR");
  std::vector<double> sig(SamplesFor(duration_s, fs));
  Require(!sig.empty(), ErrorKind::kInvalidArgument, "duration must be positive");
  rng.FillGaussian(sig);
  return RenderChannels(sig, rirs);
}

ChannelData SynthSingleDoa(const Room& room, const ArraySetup& array, double doa_deg,
                           double distance, double duration_s, int fs, Rng& rng) {
  return SynthSingleDoa(RirsFor(room, array, doa_deg, distance, fs), duration_s, fs, rng);
}

void RandomizeBands(StftFrameSet& frames, Rng& rng) {
  const int m = frames.channels;
  for (int k = 0; k < frames.bins; ++k) {
    for (int i = frames.frames - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(i) + 1));
      if (j != i) {
        std::swap_ranges(frames.Bin(i, k), frames.Bin(i, k) + m, frames.Bin(j, k));
      }
    }
  }
}

StftFrameSet RandomizePair(const StftFrameSet& a, const StftFrameSet& b, Rng& rng) {
  Require(a.bins == b.bins && a.channels == b.channels && a.dft_len == b.dft_len &&
              a.hop == b.hop && a.fs == b.fs,
          ErrorKind::kShapeMismatch, "frame sets disagree on layout");
  StftFrameSet out = a;
  out.frames = a.frames + b.frames;
  out.data.insert(out.data.end(), b.data.begin(), b.data.end());
  RandomizeBands(out, rng);
  return out;
}

uint64_t CellSeed(uint64_t master_seed, const std::string& room_name, int position,
                  double distance, int class1, int class2) {
  return MixSeed(master_seed, std::string_view(room_name), static_cast<uint64_t>(position),
                 static_cast<uint64_t>(std::llround(distance * 1000.0)),
                 static_cast<uint64_t>(class1), static_cast<uint64_t>(class2));
}

std::vector<LabeledFrame> MakeTrainingRecords(const TrainGrid& grid, int class1, int class2,
                                              uint64_t cell_seed,
                                              const std::vector<Rir>& rirs1,
                                              const std::vector<Rir>& rirs2) {
  const int count = grid.class_count();
  Require(class1 >= 0 && class1 < count && class2 >= 0 && class2 < count,
          ErrorKind::kInvalidArgument, "class index out of range");
  Require(class1 != class2, ErrorKind::kInvalidArgument, "pair classes must differ");
  Rng rng(cell_seed);

  std::vector<double> sig(SamplesFor(grid.signal_seconds, grid.fs));
  rng.FillGaussian(sig);
  ChannelData a = RenderChannels(sig, rirs1);
  rng.FillGaussian(sig);
  ChannelData b = RenderChannels(sig, rirs2);

  const double snr_a = rng.Uniform(grid.snr_lo_db, grid.snr_hi_db);
  const double snr_b = rng.Uniform(grid.snr_lo_db, grid.snr_hi_db);
  AddNoiseSnr(a, snr_a, rng);
  AddNoiseSnr(b, snr_b, rng);

  ChannelData cat(a.size());
  for (size_t m = 0; m < a.size(); ++m) {
    cat[m] = std::move(a[m]);
    cat[m].insert(cat[m].end(), b[m].begin(), b[m].end());
  }
  StftFrameSet frames = Stft(cat, kDftLen, grid.fs);
  RandomizeBands(frames, rng);

  const uint64_t label = (uint64_t{1} << class1) | (uint64_t{1} << class2);
  return FramesToRecords(frames, label);
}

std::vector<LabeledFrame> MakeTrainingRecords(const TrainGrid& grid, const Room& room,
                                              const ArraySetup& array, double distance,
                                              int class1, int class2, uint64_t cell_seed) {
  const auto rirs1 = RirsFor(room, array, ClassToDeg(class1, grid.doa_step_deg), distance,
                             grid.fs);
  const auto rirs2 = RirsFor(room, array, ClassToDeg(class2, grid.doa_step_deg), distance,
                             grid.fs);
  return MakeTrainingRecords(grid, class1, class2, cell_seed, rirs1, rirs2);
}

DatasetManifest GenerateDataset(const TrainGrid& grid, uint64_t master_seed,
                                const std::string& out_dir, int threads) {
  grid.Validate();
  Require(threads >= 1, ErrorKind::kInvalidArgument, "thread count must be >= 1");
  fs::create_directories(fs::path(out_dir) / "shards");

  struct Task {
    const Room* room = nullptr;
    int position = 0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
  };
  std::vector<Task> tasks;
  for (const Room& room : grid.rooms) {
    const auto centers =
        DrawArrayCenters(room, grid.positions_per_room, MixSeed(master_seed, room.name));
    for (int p = 0; p < grid.positions_per_room; ++p) {
      tasks.push_back({&room, p, centers[static_cast<size_t>(p)]});
    }
  }

  const auto pairs = EnumeratePairs(grid.class_count(), grid.pair_stride);
  const int class_count = grid.class_count();
  std::vector<ShardInfo> shards(tasks.size());

  ParallelFor(tasks.size(), threads, [&](size_t t) {
    const Task& task = tasks[t];
    const Room& room = *task.room;
    ArraySetup array;
    array.center = task.center;
    array.axis = ArrayAxisForRoom(room);
    array.Validate(room);

    // All RIRs this shard needs, indexed by distance slot then class.
    std::vector<std::vector<Rir>> rirs(grid.distances.size() *
                                       static_cast<size_t>(class_count));
    for (size_t di = 0; di < grid.distances.size(); ++di) {
      for (int cls = 0; cls < class_count; ++cls) {
        try {
          rirs[di * class_count + cls] = RirsFor(
              room, array, ClassToDeg(cls, grid.doa_step_deg), grid.distances[di], grid.fs);
        } catch (const Error& e) {
          std::ostringstream msg;
          msg << "room " << room.name << " position " << task.position << " distance "
              << grid.distances[di] << " doa " << ClassToDeg(cls, grid.doa_step_deg) << ": "
              << e.what();
          Fail(e.kind(), msg.str());
        }
      }
    }

    char file_name[128];
    std::snprintf(file_name, sizeof(file_name), "%s_p%d.doap", room.name.c_str(),
                  task.position);
    const std::string rel_path = std::string("shards/") + file_name;
    const std::string abs_path = (fs::path(out_dir) / rel_path).string();

    ShardWriter writer(abs_path, kMicCount, kBandCount, class_count);
    for (size_t di = 0; di < grid.distances.size(); ++di) {
      const double distance = grid.distances[di];
      for (const auto& [c1, c2] : pairs) {
        const uint64_t seed = CellSeed(master_seed, room.name, task.position, distance, c1, c2);
        const auto records = MakeTrainingRecords(grid, c1, c2, seed, rirs[di * class_count + c1],
                                                 rirs[di * class_count + c2]);
        for (const LabeledFrame& rec : records) writer.Append(rec);
      }
    }
    if (grid.include_singles) {
      for (size_t di = 0; di < grid.distances.size(); ++di) {
        for (int cls = 0; cls < class_count; ++cls) {
          const uint64_t seed =
              MixSeed(master_seed, "single", std::string_view(room.name),
                      static_cast<uint64_t>(task.position),
                      static_cast<uint64_t>(std::llround(grid.distances[di] * 1000.0)),
                      static_cast<uint64_t>(cls));
          const auto records =
              MakeSingleRecords(grid, cls, seed, rirs[di * class_count + cls]);
          for (const LabeledFrame& rec : records) writer.Append(rec);
        }
      }
    }

    ShardInfo& info = shards[t];
    info.path = rel_path;
    info.room = room.name;
    info.position = task.position;
    info.array_center = task.center;
    info.array_axis = array.axis;
    info.records = writer.Finalize();
    info.digest = FileDigest(abs_path);
  });

  DatasetManifest manifest;
  manifest.master_seed = master_seed;
  manifest.grid = grid;
  manifest.class_count = class_count;
  manifest.shards = std::move(shards);
  for (const ShardInfo& info : manifest.shards) manifest.total_records += info.records;
  WriteManifest(manifest, (fs::path(out_dir) / "manifest.json").string());
  return manifest;
}

void WriteManifest(const DatasetManifest& manifest, const std::string& path) {
  json grid;
  grid["rooms"] = json::array();
  for (const Room& room : manifest.grid.rooms) grid["rooms"].push_back(RoomToJson(room));
  grid["positions_per_room"] = manifest.grid.positions_per_room;
  grid["distances"] = manifest.grid.distances;
  grid["snr_lo_db"] = manifest.grid.snr_lo_db;
  grid["snr_hi_db"] = manifest.grid.snr_hi_db;
  grid["doa_step_deg"] = manifest.grid.doa_step_deg;
  grid["signal_seconds"] = manifest.grid.signal_seconds;
  grid["fs"] = manifest.grid.fs;
  grid["pair_stride"] = manifest.grid.pair_stride;
  grid["include_singles"] = manifest.grid.include_singles;

  json shards = json::array();
  for (const ShardInfo& info : manifest.shards) {
    shards.push_back(
        {{"path", info.path},
         {"room", info.room},
         {"position", info.position},
         {"array_center", {info.array_center.x(), info.array_center.y(), info.array_center.z()}},
         {"array_axis", {info.array_axis.x(), info.array_axis.y(), info.array_axis.z()}},
         {"records", info.records},
         {"digest", info.digest}});
  }

  const json root = {{"format", kManifestFormat},
                     {"master_seed", manifest.master_seed},
                     {"mic_count", manifest.mic_count},
                     {"band_count", manifest.band_count},
                     {"class_count", manifest.class_count},
                     {"total_records", manifest.total_records},
                     {"grid", grid},
                     {"shards", shards}};
  WriteTextFile(path, root.dump(2) + "\n");
}

DatasetManifest ReadManifest(const std::string& path) {
  const json root = LoadJsonFile(path, "manifest");
  try {
    Require(root.at("format").get<std::string>() == kManifestFormat, ErrorKind::kBadVersion,
            "unsupported manifest format in " + path);
    DatasetManifest manifest;
    manifest.master_seed = root.at("master_seed").get<uint64_t>();
    manifest.mic_count = root.at("mic_count").get<int>();
    manifest.band_count = root.at("band_count").get<int>();
    manifest.class_count = root.at("class_count").get<int>();
    manifest.total_records = root.at("total_records").get<uint64_t>();

    const json& grid = root.at("grid");
    for (const json& r : grid.at("rooms")) manifest.grid.rooms.push_back(RoomFromJson(r));
    manifest.grid.positions_per_room = grid.at("positions_per_room").get<int>();
    manifest.grid.distances = grid.at("distances").get<std::vector<double>>();
    manifest.grid.snr_lo_db = grid.at("snr_lo_db").get<double>();
    manifest.grid.snr_hi_db = grid.at("snr_hi_db").get<double>();
    manifest.grid.doa_step_deg = grid.at("doa_step_deg").get<int>();
    manifest.grid.signal_seconds = grid.at("signal_seconds").get<double>();
    manifest.grid.fs = grid.at("fs").get<int>();
    manifest.grid.pair_stride = grid.at("pair_stride").get<int>();
    manifest.grid.include_singles = grid.at("include_singles").get<bool>();

    for (const json& s : root.at("shards")) {
      ShardInfo info;
      info.path = s.at("path").get<std::string>();
      info.room = s.at("room").get<std::string>();
      info.position = s.at("position").get<int>();
      const auto& c = s.at("array_center");
      const auto& a = s.at("array_axis");
      info.array_center = Eigen::Vector3d(c.at(0).get<double>(), c.at(1).get<double>(),
                                          c.at(2).get<double>());
      info.array_axis = Eigen::Vector3d(a.at(0).get<double>(), a.at(1).get<double>(),
                                        a.at(2).get<double>());
      info.records = s.at("records").get<uint64_t>();
      info.digest = s.at("digest").get<std::string>();
      manifest.shards.push_back(std::move(info));
    }
    manifest.grid.Validate();
    return manifest;
  } catch (const json::exception& e) {
    Fail(ErrorKind::kInvalidArgument,
         "malformed manifest " + path + ": " + e.what());
  }
}

// --- test mixtures ---

void TestSetConfig::Validate() const {
  room.Validate();
  Require(distance > 0.0, ErrorKind::kInvalidArgument, "source distance must be positive");
  Require(pair_stride >= 1, ErrorKind::kInvalidArgument, "pair stride must be >= 1");
  Require(fs > 0, ErrorKind::kInvalidArgument, "sample rate must be positive");
  Require(SamplesFor(duration_s, fs) >= static_cast<size_t>(kDftLen),
          ErrorKind::kInvalidArgument, "mixture too short for one STFT frame");
  ClassCountForStep(doa_step_deg);
}

ArraySetup TestArray(const Room& room) {
  ArraySetup array;
  array.center =
      Eigen::Vector3d(room.dims.x() / 2.0, room.dims.y() / 2.0, room.dims.z() / 2.0);
  array.axis = ArrayAxisForRoom(room);
  array.Validate(room);
  return array;
}

Mixture BuildTestMixture(const TestSetConfig& config, const ArraySetup& array,
                         SourceProvider& provider, int class1, int class2,
                         uint64_t mixture_seed, const std::vector<Rir>& rirs1,
                         const std::vector<Rir>& rirs2) {
  Rng rng(mixture_seed);
  auto [sig1, sig2] = provider.DrawPair(config.duration_s, config.fs, rng);
  const size_t n = SamplesFor(config.duration_s, config.fs);
  Require(sig1.size() == n && sig2.size() == n, ErrorKind::kShapeMismatch,
          "source provider returned wrong length");

  const ChannelData a = RenderChannels(sig1, rirs1);
  const ChannelData b = RenderChannels(sig2, rirs2);
  Mixture mix;
  mix.class1 = class1;
  mix.class2 = class2;
  mix.snr_db = config.snr_db;
  mix.clean.resize(a.size());
  for (size_t m = 0; m < a.size(); ++m) {
    mix.clean[m].resize(n);
    for (size_t i = 0; i < n; ++i) mix.clean[m][i] = a[m][i] + b[m][i];
  }
  mix.noisy = mix.clean;
  AddNoiseSnr(mix.noisy, config.snr_db, rng);
  return mix;
}

TestSetInfo GenTestMixtures(const TestSetConfig& config, SourceProvider& provider,
                            uint64_t seed, const std::string& out_dir, int threads) {
  config.Validate();
  Require(threads >= 1, ErrorKind::kInvalidArgument, "thread count must be >= 1");
  fs::create_directories(out_dir);

  const ArraySetup array = TestArray(config.room);
  const int class_count = ClassCountForStep(config.doa_step_deg);
  const auto pairs = EnumeratePairs(class_count, config.pair_stride);

  // One RIR set per class in use; shared across mixtures.
  std::vector<std::vector<Rir>> rirs(static_cast<size_t>(class_count));
  std::vector<char> needed(static_cast<size_t>(class_count), 0);
  for (const auto& [c1, c2] : pairs) needed[c1] = needed[c2] = 1;
  for (int cls = 0; cls < class_count; ++cls) {
    if (needed[cls]) {
      rirs[cls] = RirsFor(config.room, array, ClassToDeg(cls, config.doa_step_deg),
                          config.distance, config.fs);
    }
  }

  std::vector<std::string> dirs(pairs.size());
  ParallelFor(pairs.size(), threads, [&](size_t i) {
    const auto [c1, c2] = pairs[i];
    const int t1 = static_cast<int>(std::lround(ClassToDeg(c1, config.doa_step_deg)));
    const int t2 = static_cast<int>(std::lround(ClassToDeg(c2, config.doa_step_deg)));
    const uint64_t mixture_seed =
        MixSeed(seed, "test", static_cast<uint64_t>(c1), static_cast<uint64_t>(c2));
    const Mixture mix =
        BuildTestMixture(config, array, provider, c1, c2, mixture_seed, rirs[c1], rirs[c2]);

    char name[32];
    std::snprintf(name, sizeof(name), "mix_%03d_%03d", t1, t2);
    const fs::path dir = fs::path(out_dir) / name;
    fs::create_directories(dir);

    double peak = 0.0;
    for (const auto& ch : mix.noisy) {
      for (double v : ch) peak = std::max(peak, std::abs(v));
    }
    const double scale = peak > 0.99 ? 0.99 / peak : 1.0;
    WavData wav;
    wav.sample_rate_hz = config.fs;
    wav.channels.resize(mix.noisy.size());
    for (size_t m = 0; m < mix.noisy.size(); ++m) {
      wav.channels[m].resize(mix.noisy[m].size());
      for (size_t s = 0; s < mix.noisy[m].size(); ++s) {
        wav.channels[m][s] = mix.noisy[m][s] * scale;
      }
    }
    WriteWav((dir / "mixture.wav").string(), wav);

    const json truth = {{"theta1_deg", t1},
                        {"theta2_deg", t2},
                        {"snr_db", config.snr_db},
                        {"scale", scale}};
    WriteTextFile((dir / "truth.json").string(), truth.dump(2) + "\n");
    dirs[i] = name;
  });

  json root = {{"format", kTestSetFormat},
               {"seed", seed},
               {"room", RoomToJson(config.room)},
               {"distance", config.distance},
               {"snr_db", config.snr_db},
               {"pair_stride", config.pair_stride},
               {"duration_s", config.duration_s},
               {"fs", config.fs},
               {"doa_step_deg", config.doa_step_deg},
               {"mixture_count", dirs.size()},
               {"mixtures", dirs}};
  WriteTextFile((fs::path(out_dir) / "test_set.json").string(), root.dump(2) + "\n");

  TestSetInfo info;
  info.seed = seed;
  info.mixture_count = static_cast<int>(dirs.size());
  info.mixture_dirs = std::move(dirs);
  return info;
}

MixtureTruth ReadTruth(const std::string& mixture_dir) {
  const json j = LoadJsonFile((fs::path(mixture_dir) / "truth.json").string(), "truth file");
  try {
    MixtureTruth truth;
    truth.theta1_deg = j.at("theta1_deg").get<int>();
    truth.theta2_deg = j.at("theta2_deg").get<int>();
    truth.snr_db = j.at("snr_db").get<double>();
    truth.scale = j.at("scale").get<double>();
    return truth;
  } catch (const json::exception& e) {
    Fail(ErrorKind::kInvalidArgument,
         "malformed truth file in " + mixture_dir + ": " + e.what());
  }
}

std::vector<std::string> ListMixtureDirs(const std::string& test_dir) {
  Require(fs::is_directory(test_dir), ErrorKind::kIo,
          "not a directory: " + test_dir);
  std::vector<std::string> dirs;
  for (const auto& entry : fs::directory_iterator(test_dir)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("mix_", 0) == 0) {
      dirs.push_back(entry.path().string());
    }
  }
  Require(!dirs.empty(), ErrorKind::kInvalidArgument,
          "no mixture directories under " + test_dir);
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

// --- source providers ---

namespace {

// Paul Kellet's economy pink-noise filter over white Gaussian input.
struct PinkNoise {
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;

  double Next(double white) {
    b0 = 0.99886 * b0 + white * 0.0555179;
    b1 = 0.99332 * b1 + white * 0.0750759;
    b2 = 0.96900 * b2 + white * 0.1538520;
    b3 = 0.86650 * b3 + white * 0.3104856;
    b4 = 0.55000 * b4 + white * 0.5329522;
    b5 = -0.7616 * b5 - white * 0.0168980;
    const double out = b0 + b1 + b2 + b3 + b4 + b5 + b6 + white * 0.5362;
    b6 = white * 0.115926;
    return 0.11 * out;
  }
};

std::vector<double> SynthVoice(double duration_s, int fs, Rng& rng) {
  const size_t n = SamplesFor(duration_s, fs);
  std::vector<double> x(n, 0.0);
  PinkNoise pink;
  const size_t ramp = static_cast<size_t>(fs) / 100;  // 10 ms edges
  size_t pos = 0;
  bool voiced = true;  // start voiced so every draw carries energy
  while (pos < n) {
    const double seg_s = voiced ? rng.Uniform(0.3, 0.8) : rng.Uniform(0.1, 0.3);
    const size_t len = std::min(SamplesFor(seg_s, fs), n - pos);
    if (voiced && len > 0) {
      const double f_am = rng.Uniform(2.5, 6.0);
      const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      const size_t edge = std::min(ramp, len / 2);
      for (size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / fs;
        double env = 0.55 + 0.45 * std::sin(2.0 * std::numbers::pi * f_am * t + phase);
        if (edge > 0 && i < edge) {
          env *= 0.5 - 0.5 * std::cos(std::numbers::pi * i / static_cast<double>(edge));
        }
        if (edge > 0 && i >= len - edge) {
          env *= 0.5 - 0.5 * std::cos(std::numbers::pi * (len - 1 - i) / static_cast<double>(edge));
        }
        x[pos + i] = pink.Next(rng.Gaussian()) * env;
      }
    }
    pos += std::max<size_t>(len, 1);
    voiced = !voiced;
  }
  double power = 0.0;
  for (double v : x) power += v * v;
  const double rms = std::sqrt(power / static_cast<double>(n));
  if (rms > 0.0) {
    const double gain = 0.15 / rms;
    for (double& v : x) v *= gain;
  }
  return x;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> SyntheticSpeechProvider::DrawPair(
    double duration_s, int fs, Rng& rng) {
  auto first = SynthVoice(duration_s, fs, rng);
  auto second = SynthVoice(duration_s, fs, rng);
  return {std::move(first), std::move(second)};
}

WavDirProvider::WavDirProvider(const std::string& dir) {
  Require(fs::is_directory(dir), ErrorKind::kIo, "not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files_.push_back(entry.path().string());
  }
  std::sort(files_.begin(), files_.end());
  Require(files_.size() >= 2, ErrorKind::kInvalidArgument,
          "need at least 2 WAV files in " + dir);
}

std::vector<double> WavDirProvider::Crop(const std::string& path, double duration_s, int fs,
                                         Rng& rng) {
  const WavData wav = ReadWav(path);
  Require(wav.sample_rate_hz == fs, ErrorKind::kInvalidArgument,
          path + ": expected " + std::to_string(fs) + " Hz (resampling not supported)");
  Require(wav.channels.size() == 1, ErrorKind::kInvalidArgument, path + ": expected mono");
  const size_t n = SamplesFor(duration_s, fs);
  Require(wav.frames() >= n, ErrorKind::kInvalidArgument,
          path + ": shorter than the requested crop");
  const size_t offset = rng.UniformInt(wav.frames() - n + 1);
  return {wav.channels[0].begin() + static_cast<long>(offset),
          wav.channels[0].begin() + static_cast<long>(offset + n)};
}

std::pair<std::vector<double>, std::vector<double>> WavDirProvider::DrawPair(
    double duration_s, int fs, Rng& rng) {
  const size_t i = rng.UniformInt(files_.size());
  size_t j = rng.UniformInt(files_.size() - 1);
  if (j >= i) ++j;  // distinct files
  auto first = Crop(files_[i], duration_s, fs, rng);
  auto second = Crop(files_[j], duration_s, fs, rng);
  return {std::move(first), std::move(second)};
}

}  // namespace doalab
