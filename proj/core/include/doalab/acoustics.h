// core/include/doalab/acoustics.h

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

#ifndef DOALAB_ACOUSTICS_H_
#define DOALAB_ACOUSTICS_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "doalab/constants.h"
#include "doalab/rng.h"
#include "doalab/types.h"

namespace doalab {

// Shoebox room with one corner at the origin; walls at x=0..Lx, y=0..Ly,
// z=0..Lz. rt60 == 0 means anechoic.
struct Room {
  std::string name;
  Eigen::Vector3d dims = Eigen::Vector3d::Zero();
  double rt60 = 0.0;

  double Volume() const { return dims.x() * dims.y() * dims.z(); }
  double SurfaceArea() const {
    return 2.0 * (dims.x() * dims.y() + dims.x() * dims.z() + dims.y() * dims.z());
  }
  void Validate() const;
};

// Uniform linear array. Mic m sits at center + (m - (M-1)/2) * spacing * axis,
// so the array is centered on `center` and `axis` points from mic 0 towards
// mic M-1. The axis must be horizontal.
struct ArraySetup {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  int mic_count = kMicCount;
  double spacing = kMicSpacing;

  Eigen::Vector3d MicPosition(int m) const {
    return center + (m - 0.5 * (mic_count - 1)) * spacing * axis;
  }
  // In-plane direction of a DOA: cos(theta)*axis + sin(theta)*perp with perp
  // the horizontal normal (z x axis). theta is measured from the array axis,
  // so 0/180 degrees are endfire and 90 degrees broadside.
  Eigen::Vector3d DoaDirection(double doa_deg) const;
  void Validate(const Room& room) const;
};

struct SourcePlacement {
  double doa_deg = 0.0;
  double distance = 0.0;  // after any clamping
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  bool clamped = false;
};

struct Rir {
  std::vector<double> taps;
  int fs = 0;
};

// Sabine absorption inverted to a uniform wall reflection coefficient.
// Returns 0 for an anechoic room (rt60 == 0); rejects RT60 values small
// enough that the implied absorption would reach 1.
double SabineReflection(const Room& room);
double MinFeasibleRt60(const Room& room);

// Places a source in the array's horizontal plane at the requested angle.
// If the nominal position would come within kWallMargin of a wall, the
// distance is reduced to the largest feasible value and the result flagged;
// if even kMinSourceDistance is infeasible, this is a geometry error.
SourcePlacement PlaceSource(const ArraySetup& array, double doa_deg, double distance,
                            const Room& room);

// Image-source simulation with uniform wall reflectivity `beta`.
// max_order < 0 selects the order automatically from the rt60 window (every
// image whose path fits in the tap window contributes). Fractional delays use
// a 17-tap Hann-windowed sinc.
Rir SimulateRir(const Room& room, double beta, const Eigen::Vector3d& source,
                const Eigen::Vector3d& mic, int fs, int max_order = -1);

// Convolves a mono signal with one RIR per channel; output is truncated to
// the input length so frame counts stay length-determined.
ChannelData RenderChannels(const std::vector<double>& signal, const std::vector<Rir>& rirs);

// Adds independent Gaussian noise per channel, scaled against the measured
// noise power so the realized SNR equals the request exactly. An infinite
// snr_db leaves the signal untouched.
void AddNoiseSnr(ChannelData& x, double snr_db, Rng& rng);

// Far-field relative delays tau_m = m * spacing * cos(theta) / c. These are
// the compensating delays used to steer towards theta under the geometry
// above (tau_0 = 0).
std::vector<double> SteeringDelays(double doa_deg, int mic_count, double spacing,
                                   double c = kSoundSpeed);

// Array placement rule: centers drawn uniformly in the room at height Lz/2
// with a wall clearance of 2.5 m, or 0.45*min(Lx, Ly) in rooms too small for
// that; the axis runs parallel to the room's long horizontal side.
Eigen::Vector3d ArrayAxisForRoom(const Room& room);
std::vector<Eigen::Vector3d> DrawArrayCenters(const Room& room, int count, uint64_t seed);

}  // namespace doalab

#endif  // DOALAB_ACOUSTICS_H_
