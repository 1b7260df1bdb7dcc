// core/src/wav.cc

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

#include "doalab/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "doalab/error.h"

namespace doalab {

namespace {

struct LeReader {
  std::ifstream f;
  std::string path;

  void Read(void* dst, size_t n) {
    f.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (f.gcount() != static_cast<std::streamsize>(n))
      Fail(ErrorKind::kTruncatedFile, "short read in " + path);
  }
  uint16_t U16() { uint16_t v; Read(&v, 2); return v; }
  uint32_t U32() { uint32_t v; Read(&v, 4); return v; }
  void Tag(char out[4]) { Read(out, 4); }
  void Skip(uint32_t n) { f.seekg(n, std::ios::cur); }
};

void PutU16(std::ofstream& f, uint16_t v) { f.write(reinterpret_cast<const char*>(&v), 2); }
void PutU32(std::ofstream& f, uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); }

}  // namespace

WavData ReadWav(const std::string& path) {
  LeReader r{std::ifstream(path, std::ios::binary), path};
  Require(r.f.good(), ErrorKind::kIo, "cannot open " + path);

  char tag[4];
  r.Tag(tag);
  Require(std::memcmp(tag, "RIFF", 4) == 0, ErrorKind::kBadMagic, path + ": not RIFF");
  r.U32();  // riff size
  r.Tag(tag);
  Require(std::memcmp(tag, "WAVE", 4) == 0, ErrorKind::kBadMagic, path + ": not WAVE");

  int channels = 0, rate = 0, bits = 0;
  bool have_fmt = false;
  WavData wav;

  while (r.f.peek() != EOF) {
    r.Tag(tag);
    uint32_t chunk = r.U32();
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      uint16_t fmt = r.U16();
      channels = r.U16();
      rate = static_cast<int>(r.U32());
      r.U32();  // byte rate
      r.U16();  // block align
      bits = r.U16();
      if (chunk > 16) r.Skip(chunk - 16);
      Require(fmt == 1, ErrorKind::kInvalidArgument, path + ": only PCM supported");
      Require(bits == 16, ErrorKind::kInvalidArgument, path + ": only 16-bit supported");
      Require(channels >= 1, ErrorKind::kInvalidArgument, path + ": no channels");
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      Require(have_fmt, ErrorKind::kInvalidArgument, path + ": data before fmt");
      const size_t samples = chunk / 2;
      const size_t frames = samples / static_cast<size_t>(channels);
      std::vector<int16_t> raw(samples);
      r.Read(raw.data(), samples * 2);
      if (chunk % 2) r.Skip(1);  // pad byte
      wav.sample_rate_hz = rate;
      wav.channels.assign(static_cast<size_t>(channels), std::vector<double>(frames));
      for (size_t n = 0; n < frames; ++n)
        for (int c = 0; c < channels; ++c)
          wav.channels[static_cast<size_t>(c)][n] =
              raw[n * static_cast<size_t>(channels) + static_cast<size_t>(c)] / 32768.0;
      return wav;
    } else {
      r.Skip(chunk + (chunk % 2));
    }
  }
  Fail(ErrorKind::kTruncatedFile, path + ": no data chunk");
}

void WriteWav(const std::string& path, const WavData& wav) {
  Require(!wav.channels.empty() && wav.frames() > 0, ErrorKind::kInvalidArgument,
          "WriteWav: empty signal");
  const auto channels = static_cast<uint16_t>(wav.channels.size());
  const size_t frames = wav.frames();
  for (const auto& ch : wav.channels)
    Require(ch.size() == frames, ErrorKind::kShapeMismatch,
            "WriteWav: ragged channel lengths");

  std::ofstream f(path, std::ios::binary);
  Require(f.good(), ErrorKind::kIo, "cannot create " + path);

  const uint32_t data_bytes = static_cast<uint32_t>(frames * channels * 2);
  f.write("RIFF", 4);
  PutU32(f, 36 + data_bytes);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  PutU32(f, 16);
  PutU16(f, 1);  // PCM
  PutU16(f, channels);
  PutU32(f, static_cast<uint32_t>(wav.sample_rate_hz));
  PutU32(f, static_cast<uint32_t>(wav.sample_rate_hz) * channels * 2);
  PutU16(f, static_cast<uint16_t>(channels * 2));
  PutU16(f, 16);
  f.write("data", 4);
  PutU32(f, data_bytes);

  std::vector<int16_t> raw(frames * channels);
  for (size_t n = 0; n < frames; ++n)
    for (uint16_t c = 0; c < channels; ++c) {
      double v = std::lround(wav.channels[c][n] * 32767.0);
      raw[n * channels + c] = static_cast<int16_t>(std::clamp(v, -32768.0, 32767.0));
    }
  f.write(reinterpret_cast<const char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * 2));
  Require(f.good(), ErrorKind::kIo, "write failed for " + path);
}

}  // namespace doalab
