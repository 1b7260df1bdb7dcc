// core/src/srp_phat.cc

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

#include "doalab/srp_phat.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "doalab/acoustics.h"
#include "doalab/error.h"

namespace doalab {

namespace {
constexpr double kPhatGuard = 1e-12;
}  // namespace

SteeringTable BuildSteeringTable(int doa_step_deg, int mic_count, int band_lo, int band_count,
                                 int dft_len, int fs, double spacing, double c) {
  Require(doa_step_deg >= 1 && 180 % doa_step_deg == 0, ErrorKind::kInvalidArgument,
          "doa step must divide 180");
  Require(mic_count >= 2, ErrorKind::kInvalidArgument, "need >= 2 mics");
  Require(dft_len >= 2 && dft_len % 2 == 0, ErrorKind::kInvalidArgument,
          "dft length must be even and >= 2");
  Require(band_lo >= 0 && band_count >= 1 && band_lo + band_count <= dft_len / 2 + 1,
          ErrorKind::kInvalidArgument, "band range outside the one-sided spectrum");
  Require(fs >= 1 && spacing > 0.0 && c > 0.0, ErrorKind::kInvalidArgument,
          "fs, spacing and c must be positive");

  SteeringTable table;
  table.class_count = 180 / doa_step_deg + 1;
  table.doa_step_deg = doa_step_deg;
  table.band_lo = band_lo;
  table.band_count = band_count;
  table.mic_count = mic_count;
  table.factors.resize(static_cast<size_t>(table.class_count) * band_count * mic_count);

  size_t at = 0;
  for (int cls = 0; cls < table.class_count; ++cls) {
    const std::vector<double> tau =
        SteeringDelays(static_cast<double>(cls * doa_step_deg), mic_count, spacing, c);
    for (int b = 0; b < band_count; ++b) {
      const double w = 2.0 * std::numbers::pi * (band_lo + b) * fs / dft_len;
      for (int m = 0; m < mic_count; ++m) {
        table.factors[at++] = std::polar(1.0, w * tau[static_cast<size_t>(m)]);
      }
    }
  }
  return table;
}

Eigen::VectorXd SrpResponseBins(std::span<const std::complex<double>> bins,
                                const SteeringTable& table) {
  const int m_count = table.mic_count;
  const int k_count = table.band_count;
  Require(bins.size() == static_cast<size_t>(k_count) * m_count, ErrorKind::kShapeMismatch,
          "frame bins must match table bands x mics");

  Eigen::VectorXd scores = Eigen::VectorXd::Zero(table.class_count);
  const int pair_count = m_count * (m_count - 1) / 2;
  std::vector<std::complex<double>> psi(static_cast<size_t>(pair_count));
  for (int b = 0; b < k_count; ++b) {
    const std::complex<double>* x = &bins[static_cast<size_t>(b) * m_count];
    int pair = 0;
    for (int m1 = 0; m1 < m_count; ++m1) {
      for (int m2 = m1 + 1; m2 < m_count; ++m2) {
        const std::complex<double> prod = x[m1] * std::conj(x[m2]);
        const double mag = std::abs(prod);
        psi[static_cast<size_t>(pair++)] = mag < kPhatGuard ? 0.0 : prod / mag;
      }
    }
    for (int cls = 0; cls < table.class_count; ++cls) {
      const std::complex<double>* st = &table.At(cls, b, 0);
      double acc = 0.0;
      pair = 0;
      for (int m1 = 0; m1 < m_count; ++m1) {
        for (int m2 = m1 + 1; m2 < m_count; ++m2) {
          acc += (psi[static_cast<size_t>(pair++)] * st[m2] * std::conj(st[m1])).real();
        }
      }
      scores[cls] += acc;
    }
  }
  return scores;
}

Eigen::VectorXd SrpResponse(const StftFrameSet& stft, int frame, const SteeringTable& table) {
  Require(stft.channels == table.mic_count, ErrorKind::kShapeMismatch,
          "stft channel count must match the table");
  Require(table.band_lo + table.band_count <= stft.bins, ErrorKind::kShapeMismatch,
          "table bands exceed the stft bins");
  Require(frame >= 0 && frame < stft.frames, ErrorKind::kInvalidArgument,
          "frame index out of range");
  // Bands of one frame are contiguous: bin-major, mic within bin.
  const std::complex<double>* start = stft.Bin(frame, table.band_lo);
  return SrpResponseBins(
      {start, static_cast<size_t>(table.band_count) * table.mic_count}, table);
}

Eigen::VectorXd SrpProbabilities(const Eigen::VectorXd& scores) {
  Require(scores.size() >= 1, ErrorKind::kInvalidArgument, "empty score vector");
  const double lo = scores.minCoeff();
  Eigen::VectorXd shifted = scores.array() - lo;
  const double total = shifted.sum();
  if (total <= 0.0) {
    return Eigen::VectorXd::Constant(scores.size(),
                                     1.0 / static_cast<double>(scores.size()));
  }
  return shifted / total;
}

}  // namespace doalab
