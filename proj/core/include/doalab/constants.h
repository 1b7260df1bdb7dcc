// core/include/doalab/constants.h

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

#ifndef DOALAB_CONSTANTS_H_
#define DOALAB_CONSTANTS_H_

namespace doalab {

// Defaults for the whole pipeline. Functions take these as parameters so
// tests can shrink them; the CLI always runs with the values below unless a
// config overrides the ones that are configurable.
inline constexpr int kSampleRateHz = 16000;
inline constexpr double kSoundSpeed = 343.0;  // m/s

inline constexpr int kDftLen = 512;
inline constexpr int kHop = kDftLen / 2;  // 50% overlap
// Feature bands: DC and Nyquist are dropped (their phase is 0 or pi and
// carries no inter-mic information), leaving bins 1..255.
inline constexpr int kBandLo = 1;
inline constexpr int kBandHi = kDftLen / 2 - 1;
inline constexpr int kBandCount = kBandHi - kBandLo + 1;  // 255

inline constexpr int kMicCount = 4;
inline constexpr double kMicSpacing = 0.08;  // m

inline constexpr int kDoaStepDeg = 5;
inline constexpr int kClassCount = 180 / kDoaStepDeg + 1;  // 37

// Geometry rules for placing sources inside a room.
inline constexpr double kWallMargin = 0.3;         // m
inline constexpr double kMinSourceDistance = 0.5;  // m
inline constexpr double kMinSourceMicDist = 0.01;  // m, degenerate clamp

// Fractional delays use a Hann-windowed sinc of 2*kRirKernelHalf+1 taps.
inline constexpr int kRirKernelHalf = 8;

}  // namespace doalab

#endif  // DOALAB_CONSTANTS_H_
