// core/include/doalab/wav.h

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

#ifndef DOALAB_WAV_H_
#define DOALAB_WAV_H_

#include <string>
#include <vector>

namespace doalab {

// Samples are per-channel doubles in [-1, 1); on disk: 16-bit PCM,
// little-endian, interleaved.
struct WavData {
  int sample_rate_hz = 0;
  std::vector<std::vector<double>> channels;

  size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
};

WavData ReadWav(const std::string& path);
void WriteWav(const std::string& path, const WavData& wav);

}  // namespace doalab

#endif  // DOALAB_WAV_H_
