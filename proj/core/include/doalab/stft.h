// core/include/doalab/stft.h

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

#ifndef DOALAB_STFT_H_
#define DOALAB_STFT_H_

#include <complex>
#include <vector>

#include "doalab/constants.h"
#include "doalab/types.h"

namespace doalab {

// Multichannel STFT frames. Storage is frame-major, then bin, then channel:
// the M-channel vector of one time-frequency bin is contiguous, which is what
// the per-band randomization shuffles around.
struct StftFrameSet {
  int frames = 0;    // N
  int bins = 0;      // dft_len/2 + 1
  int channels = 0;  // M
  int dft_len = 0;
  int hop = 0;
  int fs = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& At(int n, int k, int m) {
    return data[(static_cast<size_t>(n) * bins + k) * channels + m];
  }
  const std::complex<double>& At(int n, int k, int m) const {
    return data[(static_cast<size_t>(n) * bins + k) * channels + m];
  }
  // Pointer to the contiguous M-vector of bin (n, k).
  std::complex<double>* Bin(int n, int k) { return &At(n, k, 0); }
  const std::complex<double>* Bin(int n, int k) const { return &At(n, k, 0); }
};

// Phase map of one frame: channels x bands, radians in (-pi, pi], mic-major.
struct PhaseMap {
  int channels = 0;
  int bands = 0;
  int band_lo = 0;
  std::vector<double> values;

  double& At(int m, int b) { return values[static_cast<size_t>(m) * bands + b]; }
  double At(int m, int b) const { return values[static_cast<size_t>(m) * bands + b]; }
};

// Number of analysis frames for a signal of `len` samples:
// floor((len - dft_len)/hop) + 1. `len` must cover at least one frame.
int StftFrameCount(size_t len, int dft_len, int hop);

// Hann-windowed STFT at 50% overlap (periodic window, exact COLA), one-sided
// spectra per channel.
StftFrameSet Stft(const ChannelData& x, int dft_len = kDftLen, int fs = kSampleRateHz);

// Overlap-add inverse. Samples in [hop, (N-1)*hop + hop) see the full window
// sum and reconstruct exactly; the first and last half frame taper.
ChannelData Istft(const StftFrameSet& frames);

// Phase of every coefficient of frame n over bands [band_lo, band_hi].
// Zero-magnitude bins map to phase 0 so the features are deterministic.
PhaseMap ExtractPhaseMap(const StftFrameSet& frames, int frame, int band_lo = kBandLo,
                         int band_hi = kBandHi);

}  // namespace doalab

#endif  // DOALAB_STFT_H_
