// core/src/acoustics.cc

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

#include "doalab/acoustics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "doalab/error.h"
#include "doalab/fft.h"

namespace doalab {

namespace {

constexpr double kPi = std::numbers::pi;

double Sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

std::string Vec3Str(const Eigen::Vector3d& v) {
  std::ostringstream os;
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

}  // namespace

void Room::Validate() const {
  Require(dims.minCoeff() > 0.0, ErrorKind::kInvalidArgument,
          "room dimensions must be positive, got " + Vec3Str(dims));
  Require(rt60 >= 0.0, ErrorKind::kInvalidArgument, "rt60 must be >= 0");
}

Eigen::Vector3d ArraySetup::DoaDirection(double doa_deg) const {
  const double theta = doa_deg * kPi / 180.0;
  const Eigen::Vector3d perp = Eigen::Vector3d::UnitZ().cross(axis).normalized();
  return std::cos(theta) * axis + std::sin(theta) * perp;
}

void ArraySetup::Validate(const Room& room) const {
  Require(mic_count >= 2, ErrorKind::kInvalidArgument, "need at least 2 mics");
  Require(spacing > 0.0, ErrorKind::kInvalidArgument, "mic spacing must be > 0");
  Require(std::abs(axis.norm() - 1.0) < 1e-9, ErrorKind::kInvalidArgument,
          "array axis must be a unit vector");
  Require(std::abs(axis.z()) < 1e-12, ErrorKind::kInvalidArgument,
          "array axis must be horizontal");
  for (int m = 0; m < mic_count; ++m) {
    const Eigen::Vector3d p = MicPosition(m);
    const bool inside = (p.array() > 0.0).all() && (p.array() < room.dims.array()).all();
    Require(inside, ErrorKind::kGeometry,
            "mic " + std::to_string(m) + " at " + Vec3Str(p) + " outside room");
  }
}

double MinFeasibleRt60(const Room& room) {
  return 0.161 * room.Volume() / room.SurfaceArea();
}

double SabineReflection(const Room& room) {
  room.Validate();
  if (room.rt60 == 0.0) return 0.0;  // anechoic
  const double alpha = 0.161 * room.Volume() / (room.SurfaceArea() * room.rt60);
  if (alpha >= 1.0) {
    std::ostringstream os;
    os << "rt60 " << room.rt60 << " s is infeasible for a " << Vec3Str(room.dims)
       << " room (absorption would reach " << alpha << "); minimum feasible rt60 is "
       << MinFeasibleRt60(room) << " s";
    Fail(ErrorKind::kInvalidArgument, os.str());
  }
  return std::sqrt(1.0 - alpha);
}

SourcePlacement PlaceSource(const ArraySetup& array, double doa_deg, double distance,
                            const Room& room) {
  Require(doa_deg >= 0.0 && doa_deg <= 180.0, ErrorKind::kInvalidArgument,
          "doa must be in [0, 180] degrees");
  Require(distance > 0.0, ErrorKind::kInvalidArgument, "source distance must be > 0");
  Require(array.center.z() >= kWallMargin &&
              array.center.z() <= room.dims.z() - kWallMargin,
          ErrorKind::kGeometry, "array plane too close to floor or ceiling");

  const Eigen::Vector3d dir = array.DoaDirection(doa_deg);

  // Largest distance along the ray keeping kWallMargin from every wall.
  double r_max = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {  // dir is horizontal, z needs no ray check
    if (std::abs(dir[i]) < 1e-12) continue;
    const double bound = dir[i] > 0.0 ? (room.dims[i] - kWallMargin - array.center[i]) / dir[i]
                                      : (kWallMargin - array.center[i]) / dir[i];
    r_max = std::min(r_max, bound);
  }
  if (r_max < kMinSourceDistance) {
    std::ostringstream os;
    os << "no feasible source distance >= " << kMinSourceDistance << " m for doa "
       << doa_deg << " deg from array at " << Vec3Str(array.center) << " in "
       << Vec3Str(room.dims) << " room";
    Fail(ErrorKind::kGeometry, os.str());
  }

  SourcePlacement placement;
  placement.doa_deg = doa_deg;
  placement.distance = std::min(distance, r_max);
  placement.clamped = placement.distance < distance - 1e-12;
  placement.position = array.center + placement.distance * dir;
  return placement;
}

Rir SimulateRir(const Room& room, double beta, const Eigen::Vector3d& source,
                const Eigen::Vector3d& mic, int fs, int max_order) {
  room.Validate();
  Require(fs > 0, ErrorKind::kInvalidArgument, "fs must be > 0");
  Require(beta >= 0.0 && beta < 1.0, ErrorKind::kInvalidArgument,
          "reflection coefficient must be in [0, 1)");
  const bool src_inside =
      (source.array() >= 0.0).all() && (source.array() <= room.dims.array()).all();
  const bool mic_inside =
      (mic.array() >= 0.0).all() && (mic.array() <= room.dims.array()).all();
  Require(src_inside && mic_inside, ErrorKind::kGeometry,
          "source and mic must lie inside the room");

  const double samples_per_meter = fs / kSoundSpeed;
  const bool anechoic = beta == 0.0;

  // Window of image paths to include, in samples.
  double window = 0.0;
  if (anechoic || room.rt60 == 0.0) {
    window = (source - mic).norm() * samples_per_meter;
  } else {
    window = room.rt60 * fs;
  }

  // Lattice bounds per axis: wide enough that every path inside the window is
  // enumerated, and additionally capped when an explicit order is requested.
  int bounds[3];
  for (int i = 0; i < 3; ++i) {
    int n = static_cast<int>(
        std::ceil(window / (2.0 * room.dims[i] * samples_per_meter)));
    if (max_order >= 0) n = std::min(n, (max_order + 1) / 2 + 1);
    if (anechoic) n = 0;
    bounds[i] = n;
  }

  // beta^n lookup; the largest possible reflection count is bounded by the
  // lattice extent.
  const int max_count = 2 * (bounds[0] + bounds[1] + bounds[2]) + 3;
  std::vector<double> beta_pow(static_cast<size_t>(max_count) + 1, 1.0);
  for (int n = 1; n <= max_count; ++n) beta_pow[static_cast<size_t>(n)] = beta_pow[n - 1] * beta;

  struct Image {
    double delay;  // samples
    double gain;
  };
  std::vector<Image> images;
  double max_delay = 0.0;

  for (int mx = -bounds[0]; mx <= bounds[0]; ++mx)
    for (int my = -bounds[1]; my <= bounds[1]; ++my)
      for (int mz = -bounds[2]; mz <= bounds[2]; ++mz)
        for (int q = 0; q <= 1; ++q)
          for (int j = 0; j <= 1; ++j)
            for (int k = 0; k <= 1; ++k) {
              const int count = std::abs(2 * mx - q) + std::abs(2 * my - j) +
                                std::abs(2 * mz - k);
              if (max_order >= 0 && count > max_order) continue;
              if (anechoic && count > 0) continue;
              const double ix = (1 - 2 * q) * source.x() + 2 * mx * room.dims.x();
              const double iy = (1 - 2 * j) * source.y() + 2 * my * room.dims.y();
              const double iz = (1 - 2 * k) * source.z() + 2 * mz * room.dims.z();
              double dist = std::sqrt((ix - mic.x()) * (ix - mic.x()) +
                                      (iy - mic.y()) * (iy - mic.y()) +
                                      (iz - mic.z()) * (iz - mic.z()));
              dist = std::max(dist, kMinSourceMicDist);
              const double delay = dist * samples_per_meter;
              if (delay > window + 1.0) continue;
              images.push_back({delay, beta_pow[static_cast<size_t>(count)] / (4.0 * kPi * dist)});
              max_delay = std::max(max_delay, delay);
            }

  Rir rir;
  rir.fs = fs;
  const double extent = std::min(window, max_delay);
  rir.taps.assign(static_cast<size_t>(std::floor(extent)) + kRirKernelHalf + 2, 0.0);

  for (const Image& img : images) {
    const int center = static_cast<int>(std::lround(img.delay));
    for (int t = center - kRirKernelHalf; t <= center + kRirKernelHalf; ++t) {
      if (t < 0 || t >= static_cast<int>(rir.taps.size())) continue;
      const double x = t - img.delay;
      if (std::abs(x) > kRirKernelHalf) continue;
      const double w = 0.5 * (1.0 + std::cos(kPi * x / kRirKernelHalf));
      rir.taps[static_cast<size_t>(t)] += img.gain * w * Sinc(kPi * x);
    }
  }
  return rir;
}

ChannelData RenderChannels(const std::vector<double>& signal, const std::vector<Rir>& rirs) {
  Require(!signal.empty(), ErrorKind::kInvalidArgument, "render: empty signal");
  Require(!rirs.empty(), ErrorKind::kInvalidArgument, "render: no RIRs");
  for (const Rir& r : rirs) {
    Require(!r.taps.empty(), ErrorKind::kInvalidArgument, "render: empty RIR");
    Require(r.fs == rirs[0].fs, ErrorKind::kInvalidArgument,
            "render: RIR sampling rates differ");
  }

  size_t max_taps = 0;
  for (const Rir& r : rirs) max_taps = std::max(max_taps, r.taps.size());
  const size_t nfft = NextPow2(signal.size() + max_taps - 1);

  RealFft fft(nfft);
  std::vector<double> padded(nfft, 0.0);
  std::copy(signal.begin(), signal.end(), padded.begin());
  const auto sig_spec = fft.Forward(padded);

  ChannelData out(rirs.size());
  std::vector<std::complex<double>> spec(fft.bins());
  for (size_t ch = 0; ch < rirs.size(); ++ch) {
    std::fill(padded.begin(), padded.end(), 0.0);
    std::copy(rirs[ch].taps.begin(), rirs[ch].taps.end(), padded.begin());
    fft.Forward(padded, spec);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] *= sig_spec[i];
    auto full = fft.Inverse(spec);
    full.resize(signal.size());  // keep frame counts length-determined
    out[ch] = std::move(full);
  }
  return out;
}

void AddNoiseSnr(ChannelData& x, double snr_db, Rng& rng) {
  Require(!x.empty() && !x[0].empty(), ErrorKind::kInvalidArgument,
          "add_noise: empty signal");
  if (std::isinf(snr_db) && snr_db > 0) return;

  double sig_energy = 0.0;
  for (const auto& ch : x)
    for (double v : ch) sig_energy += v * v;
  Require(sig_energy > 0.0, ErrorKind::kInvalidArgument,
          "add_noise: silent input has no defined SNR");

  ChannelData noise(x.size());
  double noise_energy = 0.0;
  for (size_t ch = 0; ch < x.size(); ++ch) {
    noise[ch].resize(x[ch].size());
    rng.FillGaussian(noise[ch]);
    for (double v : noise[ch]) noise_energy += v * v;
  }

  // Powers share the same sample count, so the energy ratio is the power
  // ratio. Scaling against measured noise energy realizes the SNR exactly.
  const double target = sig_energy * std::pow(10.0, -snr_db / 10.0);
  const double g = std::sqrt(target / noise_energy);
  for (size_t ch = 0; ch < x.size(); ++ch)
    for (size_t n = 0; n < x[ch].size(); ++n) x[ch][n] += g * noise[ch][n];
}

std::vector<double> SteeringDelays(double doa_deg, int mic_count, double spacing, double c) {
  Require(doa_deg >= 0.0 && doa_deg <= 180.0, ErrorKind::kInvalidArgument,
          "doa must be in [0, 180] degrees");
  const double cos_theta = std::cos(doa_deg * kPi / 180.0);
  std::vector<double> delays(static_cast<size_t>(mic_count));
  for (int m = 0; m < mic_count; ++m)
    delays[static_cast<size_t>(m)] = m * spacing * cos_theta / c;
  return delays;
}

Eigen::Vector3d ArrayAxisForRoom(const Room& room) {
  return room.dims.x() >= room.dims.y() ? Eigen::Vector3d::UnitX()
                                        : Eigen::Vector3d::UnitY();
}

std::vector<Eigen::Vector3d> DrawArrayCenters(const Room& room, int count, uint64_t seed) {
  room.Validate();
  Require(count >= 1, ErrorKind::kInvalidArgument, "need at least one position");
  const double min_side = std::min(room.dims.x(), room.dims.y());
  const double clearance = std::min(2.5, 0.45 * min_side);
  Rng rng(MixSeed(seed, "array-centers"));
  std::vector<Eigen::Vector3d> centers;
  centers.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double x = rng.Uniform(clearance, room.dims.x() - clearance);
    const double y = rng.Uniform(clearance, room.dims.y() - clearance);
    centers.emplace_back(x, y, room.dims.z() / 2.0);
  }
  return centers;
}

}  // namespace doalab
