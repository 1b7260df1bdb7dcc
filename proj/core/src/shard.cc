// core/src/shard.cc

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

#include "doalab/shard.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "doalab/error.h"
#include "doalab/rng.h"

namespace doalab {

namespace {

constexpr char kMagic[4] = {'D', 'O', 'A', 'P'};
// magic(4) + version(2) + mic(2) + bands(4) + classes(2); count u64 follows.
constexpr std::streamoff kCountOffset = 14;

}  // namespace

struct ShardWriter::Impl {
  std::ofstream file;
  std::string path;
  uint64_t count = 0;
  size_t phase_count = 0;
  uint16_t class_count = 0;
  bool finalized = false;
};

ShardWriter::ShardWriter(const std::string& path, int mic_count, int band_count,
                         int class_count)
    : impl_(std::make_unique<Impl>()) {
  Require(mic_count >= 2 && mic_count <= 0xffff, ErrorKind::kInvalidArgument,
          "shard: bad mic count");
  Require(band_count >= 1, ErrorKind::kInvalidArgument, "shard: bad band count");
  Require(class_count >= 2 && class_count <= 64, ErrorKind::kInvalidArgument,
          "shard: class count must be in [2, 64] for the u64 label mask");

  impl_->path = path;
  impl_->phase_count = static_cast<size_t>(mic_count) * static_cast<size_t>(band_count);
  impl_->class_count = static_cast<uint16_t>(class_count);
  impl_->file.open(path, std::ios::binary | std::ios::trunc);
  Require(impl_->file.good(), ErrorKind::kIo, "cannot create shard " + path);

  auto& f = impl_->file;
  f.write(kMagic, 4);
  const uint16_t version = kShardVersion;
  const uint16_t mics = static_cast<uint16_t>(mic_count);
  const uint32_t bands = static_cast<uint32_t>(band_count);
  const uint16_t classes = impl_->class_count;
  const uint64_t count = 0;
  f.write(reinterpret_cast<const char*>(&version), 2);
  f.write(reinterpret_cast<const char*>(&mics), 2);
  f.write(reinterpret_cast<const char*>(&bands), 4);
  f.write(reinterpret_cast<const char*>(&classes), 2);
  f.write(reinterpret_cast<const char*>(&count), 8);
}

ShardWriter::~ShardWriter() {
  if (impl_ && !impl_->finalized) {
    try {
      Finalize();
    } catch (...) {
      // destructor must not throw; an explicit Finalize() reports failures
    }
  }
}

void ShardWriter::Append(const LabeledFrame& record) {
  Require(!impl_->finalized, ErrorKind::kInvalidArgument,
          "shard: append after finalize");
  Require(record.phases.size() == impl_->phase_count, ErrorKind::kShapeMismatch,
          "shard: record has " + std::to_string(record.phases.size()) +
              " phases, shard expects " + std::to_string(impl_->phase_count));
  Require(record.label != 0, ErrorKind::kInvalidArgument, "shard: empty label");
  Require(impl_->class_count >= 64 || (record.label >> impl_->class_count) == 0,
          ErrorKind::kInvalidArgument, "shard: label bits beyond class count");

  impl_->file.write(reinterpret_cast<const char*>(&record.label), 8);
  impl_->file.write(reinterpret_cast<const char*>(record.phases.data()),
                    static_cast<std::streamsize>(record.phases.size() * sizeof(float)));
  ++impl_->count;
}

uint64_t ShardWriter::Finalize() {
  Require(!impl_->finalized, ErrorKind::kInvalidArgument, "shard: double finalize");
  impl_->finalized = true;
  auto& f = impl_->file;
  f.seekp(kCountOffset);
  f.write(reinterpret_cast<const char*>(&impl_->count), 8);
  f.close();
  Require(f.good(), ErrorKind::kIo, "shard write failed for " + impl_->path);
  return impl_->count;
}

struct ShardReader::Impl {
  std::ifstream file;
  std::string path;
  ShardHeader header;
  uint64_t returned = 0;
  size_t phase_count = 0;
};

ShardReader::ShardReader(const std::string& path) : impl_(std::make_unique<Impl>()) {
  impl_->path = path;
  auto& f = impl_->file;
  f.open(path, std::ios::binary);
  Require(f.good(), ErrorKind::kIo, "cannot open shard " + path);

  char magic[4];
  f.read(magic, 4);
  Require(f.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0, ErrorKind::kBadMagic,
          path + ": bad shard magic");

  auto& h = impl_->header;
  char fields[18];
  f.read(fields, sizeof(fields));
  Require(f.gcount() == sizeof(fields), ErrorKind::kTruncatedFile,
          path + ": truncated shard header");
  std::memcpy(&h.version, fields + 0, 2);
  std::memcpy(&h.mic_count, fields + 2, 2);
  std::memcpy(&h.band_count, fields + 4, 4);
  std::memcpy(&h.class_count, fields + 8, 2);
  std::memcpy(&h.record_count, fields + 10, 8);

  Require(h.version == kShardVersion, ErrorKind::kBadVersion,
          path + ": shard version " + std::to_string(h.version) + ", expected " +
              std::to_string(kShardVersion));
  Require(h.mic_count >= 2 && h.band_count >= 1 && h.class_count >= 2 &&
              h.class_count <= 64,
          ErrorKind::kInvalidArgument, path + ": nonsense shard header");
  impl_->phase_count =
      static_cast<size_t>(h.mic_count) * static_cast<size_t>(h.band_count);
}

ShardReader::~ShardReader() = default;

const ShardHeader& ShardReader::header() const { return impl_->header; }

bool ShardReader::Next(LabeledFrame* out) {
  auto& f = impl_->file;
  if (impl_->returned == impl_->header.record_count) {
    // All declared records consumed: the stream must be exactly exhausted.
    if (f.peek() != EOF)
      Fail(ErrorKind::kCountMismatch,
           impl_->path + ": data beyond the declared record count");
    return false;
  }

  out->phases.resize(impl_->phase_count);
  f.read(reinterpret_cast<char*>(&out->label), 8);
  f.read(reinterpret_cast<char*>(out->phases.data()),
         static_cast<std::streamsize>(impl_->phase_count * sizeof(float)));
  if (!f.good()) {
    std::ostringstream os;
    os << impl_->path << ": shard truncated at record " << impl_->returned << " of "
       << impl_->header.record_count;
    Fail(ErrorKind::kTruncatedFile, os.str());
  }
  Require(out->label != 0, ErrorKind::kInvalidArgument,
          impl_->path + ": record with empty label");
  Require(impl_->header.class_count >= 64 ||
              (out->label >> impl_->header.class_count) == 0,
          ErrorKind::kInvalidArgument, impl_->path + ": label bits beyond class count");
  ++impl_->returned;
  return true;
}

std::vector<LabeledFrame> ReadShard(const std::string& path, ShardHeader* header) {
  ShardReader reader(path);
  if (header) *header = reader.header();
  std::vector<LabeledFrame> records;
  records.reserve(reader.header().record_count);
  LabeledFrame record;
  while (reader.Next(&record)) records.push_back(record);
  return records;
}

void WriteShard(const std::string& path, const std::vector<LabeledFrame>& records,
                int mic_count, int band_count, int class_count) {
  ShardWriter writer(path, mic_count, band_count, class_count);
  for (const auto& record : records) writer.Append(record);
  writer.Finalize();
}

std::string FileDigest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  Require(f.good(), ErrorKind::kIo, "cannot open " + path);
  uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (f.read(buf, sizeof(buf)) || f.gcount() > 0)
    h = Fnv1a64(buf, static_cast<size_t>(f.gcount()), h);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace doalab
