// core/include/doalab/srp_phat.h

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

#ifndef DOALAB_SRP_PHAT_H_
#define DOALAB_SRP_PHAT_H_

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "doalab/constants.h"
#include "doalab/stft.h"

namespace doalab {

// Far-field steering phase factors e^{+j w_k tau_m(theta_i)} for every
// (class i, band k, mic m), with tau_m = m * spacing * cos(theta) / c and
// w_k = 2 pi k fs / dft_len. Immutable after construction and shareable
// across threads. Class i maps to theta = i * doa_step_deg.
struct SteeringTable {
  int class_count = 0;
  int doa_step_deg = 0;
  int band_lo = 0;    // first DFT bin covered
  int band_count = 0;
  int mic_count = 0;
  std::vector<std::complex<double>> factors;  // class-major, then band, then mic

  const std::complex<double>& At(int cls, int band, int mic) const {
    return factors[(static_cast<size_t>(cls) * band_count + band) * mic_count + mic];
  }
};

SteeringTable BuildSteeringTable(int doa_step_deg = kDoaStepDeg, int mic_count = kMicCount,
                                 int band_lo = kBandLo, int band_count = kBandCount,
                                 int dft_len = kDftLen, int fs = kSampleRateHz,
                                 double spacing = kMicSpacing, double c = kSoundSpeed);

// SRP-PHAT steered response of one frame over all classes:
//   score(i) = sum_k sum_{m1<m2} Re{ Psi_{m1m2}(k) st_{m2} conj(st_{m1}) }
// where Psi is the PHAT-normalized cross-spectrum X_{m1} X*_{m2} /
// |X_{m1} X*_{m2}| (bins whose product magnitude is below 1e-12 contribute
// 0). `bins` is band-major: bins[b * M + m] is mic m of table band b.
Eigen::VectorXd SrpResponseBins(std::span<const std::complex<double>> bins,
                                const SteeringTable& table);

// Same, reading frame `frame` of an STFT directly.
Eigen::VectorXd SrpResponse(const StftFrameSet& stft, int frame, const SteeringTable& table);

// Scores -> pseudo-probabilities: shift by the minimum and normalize to unit
// sum, which preserves the argmax. All-equal scores map to the uniform
// vector.
Eigen::VectorXd SrpProbabilities(const Eigen::VectorXd& scores);

}  // namespace doalab

#endif  // DOALAB_SRP_PHAT_H_
