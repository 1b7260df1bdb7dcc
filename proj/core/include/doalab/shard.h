// core/include/doalab/shard.h

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

#ifndef DOALAB_SHARD_H_
#define DOALAB_SHARD_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace doalab {

// One training example: multi-hot class label plus the float32 phase features
// of a single STFT frame, mic-major (mic m, band k at index m*K + k). This is
// exactly the on-disk record of the shard format.
struct LabeledFrame {
  uint64_t label = 0;  // bitmask over class indices; valid while I <= 64
  std::vector<float> phases;

  bool operator==(const LabeledFrame&) const = default;
};

// Shard file layout (little-endian):
//   magic "DOAP" | version u16 | mic_count u16 | band_count u32 |
//   class_count u16 | record_count u64 | records...
// record: label u64 | mic_count*band_count float32 phases.
struct ShardHeader {
  uint16_t version = 1;
  uint16_t mic_count = 0;
  uint32_t band_count = 0;
  uint16_t class_count = 0;
  uint64_t record_count = 0;
};

inline constexpr uint16_t kShardVersion = 1;

// Streams records to disk; the header's record count is patched on Finalize
// (also invoked by the destructor).
class ShardWriter {
 public:
  ShardWriter(const std::string& path, int mic_count, int band_count, int class_count);
  ~ShardWriter();
  ShardWriter(const ShardWriter&) = delete;
  ShardWriter& operator=(const ShardWriter&) = delete;

  void Append(const LabeledFrame& record);
  // Patches the record count and closes the file; returns the count.
  uint64_t Finalize();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Validates the header and streams records back. Distinct failures:
// kBadMagic, kBadVersion, kTruncatedFile (short record), kCountMismatch
// (trailing bytes after the declared records), kInvalidArgument (label bits
// beyond class_count).
class ShardReader {
 public:
  explicit ShardReader(const std::string& path);
  ~ShardReader();
  ShardReader(const ShardReader&) = delete;
  ShardReader& operator=(const ShardReader&) = delete;

  const ShardHeader& header() const;
  // False once all declared records were returned (after verifying no
  // trailing bytes follow them).
  bool Next(LabeledFrame* out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<LabeledFrame> ReadShard(const std::string& path, ShardHeader* header = nullptr);
void WriteShard(const std::string& path, const std::vector<LabeledFrame>& records,
                int mic_count, int band_count, int class_count);

// FNV-1a 64 over the file's bytes, as "fnv1a64:<16 hex digits>".
std::string FileDigest(const std::string& path);

}  // namespace doalab

#endif  // DOALAB_SHARD_H_
