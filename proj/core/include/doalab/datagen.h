// core/include/doalab/datagen.h

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

#ifndef DOALAB_DATAGEN_H_
#define DOALAB_DATAGEN_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "doalab/acoustics.h"
#include "doalab/constants.h"
#include "doalab/rng.h"
#include "doalab/shard.h"
#include "doalab/stft.h"
#include "doalab/types.h"

namespace doalab {

// DOA class grid: classes 0..I-1 at step_deg spacing, I = 180/step + 1.
int ClassCountForStep(int step_deg);
double ClassToDeg(int cls, int step_deg);
int DegToClass(double deg, int step_deg);  // rejects off-grid angles

// Unordered class pairs (c1 < c2) in lexicographic order, thinned to every
// stride-th pair for desk-scale runs.
std::vector<std::pair<int, int>> EnumeratePairs(int class_count, int stride = 1);

// The full training-data grid. Rendering geometry (array placement per room)
// is derived deterministically from the master seed at generation time.
struct TrainGrid {
  std::vector<Room> rooms;
  int positions_per_room = 7;
  std::vector<double> distances = {1.0, 2.0};
  double snr_lo_db = 0.0;
  double snr_hi_db = 20.0;
  int doa_step_deg = kDoaStepDeg;
  double signal_seconds = 2.0;
  int fs = kSampleRateHz;
  int pair_stride = 1;
  bool include_singles = false;  // optional 1-hot single-source frames

  int class_count() const { return ClassCountForStep(doa_step_deg); }
  void Validate() const;
};

// Frames a full-grid run would emit, without generating anything.
uint64_t ProjectedFrameCount(const TrainGrid& grid);

// One RIR per microphone for a source placed at (doa, distance); beta comes
// from the room's rt60 via Sabine.
std::vector<Rir> RirsFor(const Room& room, const ArraySetup& array, double doa_deg,
                         double distance, int fs);

// White Gaussian noise rendered through per-mic RIRs.
ChannelData SynthSingleDoa(const std::vector<Rir>& rirs, double duration_s, int fs,
                           Rng& rng);
ChannelData SynthSingleDoa(const Room& room, const ArraySetup& array, double doa_deg,
                           double distance, double duration_s, int fs, Rng& rng);

// For each band independently, uniformly permutes the time slots; each moved
// element is the full M-channel complex vector of one TF bin.
void RandomizeBands(StftFrameSet& frames, Rng& rng);

// Frame-axis concatenation of A and B followed by RandomizeBands.
StftFrameSet RandomizePair(const StftFrameSet& a, const StftFrameSet& b, Rng& rng);

// The per-cell pipeline: render both DOAs, add per-signal noise at an SNR
// drawn from the grid's range, concatenate in time, STFT once, randomize per
// band, and emit one 2-hot record per frame.
std::vector<LabeledFrame> MakeTrainingRecords(const TrainGrid& grid, int class1, int class2,
                                              uint64_t cell_seed,
                                              const std::vector<Rir>& rirs1,
                                              const std::vector<Rir>& rirs2);
std::vector<LabeledFrame> MakeTrainingRecords(const TrainGrid& grid, const Room& room,
                                              const ArraySetup& array, double distance,
                                              int class1, int class2, uint64_t cell_seed);

// Seed for one grid cell; pure function of the identifiers, so generation
// order (and thread count) cannot change the output.
uint64_t CellSeed(uint64_t master_seed, const std::string& room_name, int position,
                  double distance, int class1, int class2);

struct ShardInfo {
  std::string path;  // relative to the dataset directory
  std::string room;
  int position = 0;
  Eigen::Vector3d array_center = Eigen::Vector3d::Zero();
  Eigen::Vector3d array_axis = Eigen::Vector3d::UnitX();
  uint64_t records = 0;
  std::string digest;
};

struct DatasetManifest {
  uint64_t master_seed = 0;
  TrainGrid grid;
  int mic_count = kMicCount;
  int band_count = kBandCount;
  int class_count = kClassCount;
  uint64_t total_records = 0;
  std::vector<ShardInfo> shards;
};

// Writes one shard per (room, position) under out_dir/shards/ plus
// out_dir/manifest.json. Byte-identical for identical (grid, master_seed),
// independent of thread count.
DatasetManifest GenerateDataset(const TrainGrid& grid, uint64_t master_seed,
                                const std::string& out_dir, int threads = 1);

void WriteManifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest ReadManifest(const std::string& path);

// --- test mixtures ---

class SourceProvider {
 public:
  virtual ~SourceProvider() = default;
  // Two distinct single-channel sources of duration_s seconds at fs.
  virtual std::pair<std::vector<double>, std::vector<double>> DrawPair(double duration_s,
                                                                       int fs,
                                                                       Rng& rng) = 0;
};

// Speech-like stand-in: amplitude-modulated pink noise with random
// 100-300 ms pauses between voiced stretches.
class SyntheticSpeechProvider : public SourceProvider {
 public:
  std::pair<std::vector<double>, std::vector<double>> DrawPair(double duration_s, int fs,
                                                               Rng& rng) override;
};

// Draws random crops from user WAVs: mono 16-bit PCM at the pipeline rate
// (other rates rejected; resampling is out of scope). Needs >= 2 files.
class WavDirProvider : public SourceProvider {
 public:
  explicit WavDirProvider(const std::string& dir);
  std::pair<std::vector<double>, std::vector<double>> DrawPair(double duration_s, int fs,
                                                               Rng& rng) override;

 private:
  std::vector<double> Crop(const std::string& path, double duration_s, int fs, Rng& rng);
  std::vector<std::string> files_;
};

struct TestSetConfig {
  Room room;
  double distance = 1.8;
  double snr_db = 30.0;
  int pair_stride = 1;
  double duration_s = 2.0;
  int fs = kSampleRateHz;
  int doa_step_deg = kDoaStepDeg;

  void Validate() const;
};

// The array used for a test room: centered in the room at half height, axis
// along the long side.
ArraySetup TestArray(const Room& room);

struct Mixture {
  int class1 = 0;
  int class2 = 0;
  double snr_db = 0.0;
  ChannelData clean;  // reverberant two-source sum before noise
  ChannelData noisy;
};

Mixture BuildTestMixture(const TestSetConfig& config, const ArraySetup& array,
                         SourceProvider& provider, int class1, int class2,
                         uint64_t mixture_seed, const std::vector<Rir>& rirs1,
                         const std::vector<Rir>& rirs2);

struct MixtureTruth {
  int theta1_deg = 0;
  int theta2_deg = 0;
  double snr_db = 0.0;
  double scale = 1.0;  // gain applied before PCM16 quantization
};

struct TestSetInfo {
  uint64_t seed = 0;
  int mixture_count = 0;
  std::vector<std::string> mixture_dirs;  // relative, sorted
};

// One directory per mixture (mix_<t1>_<t2>) holding mixture.wav (M channels)
// and truth.json. Also writes out_dir/test_set.json.
TestSetInfo GenTestMixtures(const TestSetConfig& config, SourceProvider& provider,
                            uint64_t seed, const std::string& out_dir, int threads = 1);

MixtureTruth ReadTruth(const std::string& mixture_dir);
std::vector<std::string> ListMixtureDirs(const std::string& test_dir);  // absolute, sorted

}  // namespace doalab

#endif  // DOALAB_DATAGEN_H_
