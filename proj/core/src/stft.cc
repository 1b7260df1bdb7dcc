// core/src/stft.cc

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

#include "doalab/stft.h"

#include <cmath>
#include <numbers>

#include "doalab/error.h"
#include "doalab/fft.h"

namespace doalab {

namespace {

// Periodic Hann: at 50% overlap adjacent windows sum to exactly 1, so
// overlap-add needs no synthesis normalization on interior samples.
std::vector<double> PeriodicHann(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[static_cast<size_t>(i)] =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
  return w;
}

}  // namespace

int StftFrameCount(size_t len, int dft_len, int hop) {
  Require(len >= static_cast<size_t>(dft_len), ErrorKind::kInvalidArgument,
          "signal shorter than one analysis frame");
  return static_cast<int>((len - static_cast<size_t>(dft_len)) / static_cast<size_t>(hop)) + 1;
}

StftFrameSet Stft(const ChannelData& x, int dft_len, int fs) {
  Require(!x.empty(), ErrorKind::kInvalidArgument, "stft: no channels");
  Require(dft_len >= 2 && dft_len % 2 == 0, ErrorKind::kInvalidArgument,
          "stft: dft_len must be even");
  const size_t len = x[0].size();
  for (const auto& ch : x)
    Require(ch.size() == len, ErrorKind::kShapeMismatch, "stft: ragged channels");

  const int hop = dft_len / 2;
  StftFrameSet set;
  set.frames = StftFrameCount(len, dft_len, hop);
  set.bins = dft_len / 2 + 1;
  set.channels = static_cast<int>(x.size());
  set.dft_len = dft_len;
  set.hop = hop;
  set.fs = fs;
  set.data.resize(static_cast<size_t>(set.frames) * set.bins * set.channels);

  const auto window = PeriodicHann(dft_len);
  RealFft fft(static_cast<size_t>(dft_len));
  std::vector<double> frame(static_cast<size_t>(dft_len));
  std::vector<std::complex<double>> spec(static_cast<size_t>(set.bins));

  for (int m = 0; m < set.channels; ++m) {
    const auto& ch = x[static_cast<size_t>(m)];
    for (int n = 0; n < set.frames; ++n) {
      const size_t start = static_cast<size_t>(n) * static_cast<size_t>(hop);
      for (int i = 0; i < dft_len; ++i)
        frame[static_cast<size_t>(i)] = ch[start + static_cast<size_t>(i)] * window[static_cast<size_t>(i)];
      fft.Forward(frame, spec);
      for (int k = 0; k < set.bins; ++k) set.At(n, k, m) = spec[static_cast<size_t>(k)];
    }
  }
  return set;
}

ChannelData Istft(const StftFrameSet& frames) {
  Require(frames.frames >= 1 && frames.channels >= 1, ErrorKind::kInvalidArgument,
          "istft: empty frame set");
  Require(frames.bins == frames.dft_len / 2 + 1, ErrorKind::kShapeMismatch,
          "istft: inconsistent bin count");

  const int hop = frames.hop;
  const size_t out_len =
      static_cast<size_t>(frames.frames - 1) * static_cast<size_t>(hop) +
      static_cast<size_t>(frames.dft_len);
  ChannelData out(static_cast<size_t>(frames.channels),
                  std::vector<double>(out_len, 0.0));

  RealFft fft(static_cast<size_t>(frames.dft_len));
  std::vector<std::complex<double>> spec(static_cast<size_t>(frames.bins));
  std::vector<double> frame(static_cast<size_t>(frames.dft_len));

  for (int m = 0; m < frames.channels; ++m) {
    auto& ch = out[static_cast<size_t>(m)];
    for (int n = 0; n < frames.frames; ++n) {
      for (int k = 0; k < frames.bins; ++k) spec[static_cast<size_t>(k)] = frames.At(n, k, m);
      fft.Inverse(spec, frame);
      const size_t start = static_cast<size_t>(n) * static_cast<size_t>(hop);
      for (int i = 0; i < frames.dft_len; ++i) ch[start + static_cast<size_t>(i)] += frame[static_cast<size_t>(i)];
    }
  }
  return out;
}

PhaseMap ExtractPhaseMap(const StftFrameSet& frames, int frame, int band_lo, int band_hi) {
  Require(frame >= 0 && frame < frames.frames, ErrorKind::kInvalidArgument,
          "phase map: frame index out of range");
  Require(band_lo >= 0 && band_hi < frames.bins && band_lo <= band_hi,
          ErrorKind::kInvalidArgument, "phase map: band range outside spectrum");

  PhaseMap map;
  map.channels = frames.channels;
  map.bands = band_hi - band_lo + 1;
  map.band_lo = band_lo;
  map.values.resize(static_cast<size_t>(map.channels) * map.bands);

  for (int m = 0; m < map.channels; ++m)
    for (int k = band_lo; k <= band_hi; ++k) {
      const std::complex<double>& c = frames.At(frame, k, m);
      double phase = 0.0;
      if (c.real() != 0.0 || c.imag() != 0.0) {
        phase = std::arg(c);
        if (phase == -std::numbers::pi) phase = std::numbers::pi;  // fold to (-pi, pi]
      }
      map.At(m, k - band_lo) = phase;
    }
  return map;
}

}  // namespace doalab
