// tests/test_acoustics.cc

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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doalab/constants.h"
#include "doalab/error.h"
#include "doalab/rng.h"
#include "doctest.h"
#include "test_util.h"

namespace doalab {
namespace {

using testing::EstimateT60;
using testing::MeasurePulse;
using testing::NaiveConvolve;
using testing::SchroederDb;
using testing::ThrownKind;

Room MakeRoom(double lx, double ly, double lz, double rt60, const std::string& name = "r") {
  Room room;
  room.name = name;
  room.dims = Eigen::Vector3d(lx, ly, lz);
  room.rt60 = rt60;
  return room;
}

TEST_CASE("sabine inversion on a known room") {
  // Hand-evaluated: V = 97.2, S = 136.8, alpha = 0.161*97.2/(136.8*0.3).
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  CHECK(SabineReflection(room) == doctest::Approx(0.7865648164813347).epsilon(1e-12));
  CHECK(MinFeasibleRt60(room) == doctest::Approx(0.11439473684210526).epsilon(1e-12));
}

TEST_CASE("sabine anechoic and infeasible cases") {
  CHECK(SabineReflection(MakeRoom(6, 6, 2.7, 0.0)) == 0.0);

  const Room tight = MakeRoom(6, 6, 2.7, 0.05);
  try {
    SabineReflection(tight);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidArgument);
    CHECK(std::string(e.what()).find("minimum feasible") != std::string::npos);
    CHECK(std::string(e.what()).find("0.114") != std::string::npos);
  }
}

TEST_CASE("room validation") {
  CHECK(ThrownKind([] { MakeRoom(0, 6, 2.7, 0.3).Validate(); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([] { MakeRoom(6, 6, 2.7, -0.1).Validate(); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("mic positions are centered on the array") {
  ArraySetup array;
  array.center = Eigen::Vector3d(3, 2, 1.35);
  array.axis = Eigen::Vector3d::UnitX();
  CHECK(array.MicPosition(0).x() == doctest::Approx(2.88));
  CHECK(array.MicPosition(1).x() == doctest::Approx(2.96));
  CHECK(array.MicPosition(2).x() == doctest::Approx(3.04));
  CHECK(array.MicPosition(3).x() == doctest::Approx(3.12));
  for (int m = 0; m < 4; ++m) {
    CHECK(array.MicPosition(m).y() == 2.0);
    CHECK(array.MicPosition(m).z() == 1.35);
  }
}

TEST_CASE("doa direction spans the horizontal plane") {
  ArraySetup array;
  array.axis = Eigen::Vector3d::UnitX();
  CHECK((array.DoaDirection(0) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
  CHECK((array.DoaDirection(90) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  CHECK((array.DoaDirection(180) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-12);
  CHECK((array.DoaDirection(45) - Eigen::Vector3d(std::sqrt(0.5), std::sqrt(0.5), 0)).norm() <
        1e-12);
}

TEST_CASE("array validation catches bad axes and escaping mics") {
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  ArraySetup array;
  array.center = Eigen::Vector3d(3, 3, 1.35);

  array.axis = Eigen::Vector3d(0, 0, 1);
  CHECK(ThrownKind([&] { array.Validate(room); }) == ErrorKind::kInvalidArgument);

  array.axis = Eigen::Vector3d(2, 0, 0);
  CHECK(ThrownKind([&] { array.Validate(room); }) == ErrorKind::kInvalidArgument);

  array.axis = Eigen::Vector3d::UnitX();
  array.center = Eigen::Vector3d(0.05, 3, 1.35);
  CHECK(ThrownKind([&] { array.Validate(room); }) == ErrorKind::kGeometry);

  array.center = Eigen::Vector3d(3, 3, 1.35);
  array.Validate(room);  // must not throw
}

TEST_CASE("source placement hits the requested geometry") {
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  ArraySetup array;
  array.center = Eigen::Vector3d(3, 3, 1.35);
  array.axis = Eigen::Vector3d::UnitX();

  const auto broadside = PlaceSource(array, 90, 1, room);
  CHECK((broadside.position - Eigen::Vector3d(3, 4, 1.35)).norm() < 1e-12);
  CHECK_FALSE(broadside.clamped);

  const auto endfire = PlaceSource(array, 0, 1, room);
  CHECK((endfire.position - Eigen::Vector3d(4, 3, 1.35)).norm() < 1e-12);
  CHECK(endfire.distance == 1.0);
}

TEST_CASE("source placement clamps against the wall margin") {
  // Distance from y = 1.5 to the y = 3 wall minus the 0.3 m margin.
  const Room room = MakeRoom(8, 3, 2.7, 0.3);
  ArraySetup array;
  array.center = Eigen::Vector3d(4, 1.5, 1.35);
  array.axis = Eigen::Vector3d::UnitX();

  const auto placed = PlaceSource(array, 90, 2, room);
  CHECK(placed.clamped);
  CHECK(placed.distance == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(placed.position.y() == doctest::Approx(2.7).epsilon(1e-12));
}

TEST_CASE("source placement rejects infeasible geometry") {
  const Room room = MakeRoom(8, 1.5, 2.7, 0.3);
  ArraySetup array;
  array.center = Eigen::Vector3d(4, 0.75, 1.35);
  array.axis = Eigen::Vector3d::UnitX();
  CHECK(ThrownKind([&] { PlaceSource(array, 90, 1, room); }) == ErrorKind::kGeometry);
  CHECK(ThrownKind([&] { PlaceSource(array, 190, 1, room); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("placement properties over random setups") {
  Rng rng(404);
  int checked = 0;
  while (checked < 200) {
    const Room room = MakeRoom(rng.Uniform(4, 10), rng.Uniform(3, 8),
                               rng.Uniform(2.4, 3.5), 0.3);
    ArraySetup array;
    array.axis = ArrayAxisForRoom(room);
    const auto centers = DrawArrayCenters(room, 1, rng.NextU64());
    array.center = centers[0];
    const double doa = 5.0 * static_cast<double>(rng.UniformInt(37));
    const double r = rng.UniformInt(2) == 0 ? 1.0 : 2.0;

    SourcePlacement placed;
    try {
      placed = PlaceSource(array, doa, r, room);
    } catch (const Error&) {
      continue;  // infeasible draw; rejection is the documented behavior
    }
    ++checked;

    for (int i = 0; i < 3; ++i) {
      CHECK(placed.position[i] >= kWallMargin - 1e-9);
      CHECK(placed.position[i] <= room.dims[i] - kWallMargin + 1e-9);
    }
    CHECK(placed.position.z() == doctest::Approx(array.center.z()));
    const Eigen::Vector3d dir = (placed.position - array.center).normalized();
    const double angle =
        std::acos(std::clamp(dir.dot(array.axis), -1.0, 1.0)) * 180.0 / std::numbers::pi;
    CHECK(std::abs(angle - doa) < 0.1);
  }
}

TEST_CASE("anechoic direct path matches the free-field law") {
  const Room room = MakeRoom(6, 6, 2.7, 0.0);
  const Eigen::Vector3d mic(2.5, 3, 1.35), src(3.5, 3, 1.35);  // exactly 1 m
  const Rir rir = SimulateRir(room, 0.0, src, mic, 16000);

  const auto peak = MeasurePulse(rir.taps);
  CHECK(std::abs(peak.location - 16000.0 / 343.0) <= 1.0);  // 46.65 +- 1
  CHECK(peak.amplitude == doctest::Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(0.05));
}

TEST_CASE("amplitude follows 1/(4 pi d) across distances") {
  const Room room = MakeRoom(9, 6, 3, 0.0);
  const Eigen::Vector3d mic(2, 3, 1.5);
  for (double d : {0.5, 1.0, 2.0, 4.0}) {
    const Rir rir = SimulateRir(room, 0.0, Eigen::Vector3d(2 + d, 3, 1.5), mic, 16000);
    const auto peak = MeasurePulse(rir.taps);
    CHECK(peak.amplitude ==
          doctest::Approx(1.0 / (4.0 * std::numbers::pi * d)).epsilon(0.05));
    CHECK(std::abs(peak.location - d * 16000.0 / 343.0) <= 1.0);
  }
}

TEST_CASE("first reflection order contributes exactly seven images") {
  // DC gain of the RIR vs the hand-mirrored image sum: direct + 6 walls.
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  const double beta = 0.5;
  const Eigen::Vector3d src(2, 3, 1.2), mic(4, 3.5, 1.4);
  const Rir rir = SimulateRir(room, beta, src, mic, 16000, 1);

  const std::vector<Eigen::Vector3d> images = {
      src,
      {-src.x(), src.y(), src.z()},
      {2 * room.dims.x() - src.x(), src.y(), src.z()},
      {src.x(), -src.y(), src.z()},
      {src.x(), 2 * room.dims.y() - src.y(), src.z()},
      {src.x(), src.y(), -src.z()},
      {src.x(), src.y(), 2 * room.dims.z() - src.z()},
  };
  double expected_dc = 0.0;
  for (size_t i = 0; i < images.size(); ++i) {
    const double dist = (images[i] - mic).norm();
    expected_dc += (i == 0 ? 1.0 : beta) / (4.0 * std::numbers::pi * dist);
  }
  double dc = 0.0;
  for (double t : rir.taps) dc += t;
  CHECK(dc == doctest::Approx(expected_dc).epsilon(0.005));
}

TEST_CASE("order zero equals the anechoic response") {
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  const Eigen::Vector3d src(2, 3, 1.2), mic(4, 3.5, 1.4);
  const Rir direct = SimulateRir(room, 0.5, src, mic, 16000, 0);
  const Rir anechoic = SimulateRir(room, 0.0, src, mic, 16000);
  REQUIRE(direct.taps.size() == anechoic.taps.size());
  for (size_t i = 0; i < direct.taps.size(); ++i)
    CHECK(direct.taps[i] == anechoic.taps[i]);
}

TEST_CASE("coincident source and mic are clamped, not fatal") {
  const Room room = MakeRoom(6, 6, 2.7, 0.0);
  const Eigen::Vector3d p(3, 3, 1.35);
  const Rir rir = SimulateRir(room, 0.0, p, p, 16000);
  REQUIRE(!rir.taps.empty());
  double peak = 0.0;
  for (double t : rir.taps) {
    REQUIRE(std::isfinite(t));
    peak = std::max(peak, std::abs(t));
  }
  CHECK(peak > 1.0);  // 1/(4 pi * 0.01) territory
}

TEST_CASE("reverberant decay is schroeder-monotone and near the nominal rt60") {
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  const double beta = SabineReflection(room);
  const Rir rir =
      SimulateRir(room, beta, Eigen::Vector3d(1.8, 4.2, 1.1), Eigen::Vector3d(4.1, 2.2, 1.5), 16000);

  const auto db = SchroederDb(rir.taps);
  for (size_t i = 1; i < db.size(); ++i) CHECK(db[i] <= db[i - 1] + 1e-12);

  const double t60 = EstimateT60(rir);
  CHECK(t60 > 0.15);  // rt60 +- 50%
  CHECK(t60 < 0.45);
}

TEST_CASE("rir simulation validates its inputs") {
  const Room room = MakeRoom(6, 6, 2.7, 0.3);
  const Eigen::Vector3d in(3, 3, 1.35), out(7, 3, 1.35);
  CHECK(ThrownKind([&] { SimulateRir(room, 0.5, out, in, 16000); }) ==
        ErrorKind::kGeometry);
  CHECK(ThrownKind([&] { SimulateRir(room, 1.0, in, in, 16000); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([&] { SimulateRir(room, 0.5, in, in, 0); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("render with identity and shift kernels") {
  std::vector<double> signal(64);
  Rng rng(31);
  for (double& v : signal) v = rng.Uniform(-1, 1);

  Rir identity;
  identity.fs = 16000;
  identity.taps = {1.0};
  Rir shift;
  shift.fs = 16000;
  shift.taps = {0, 0, 0, 0, 0, 1.0};

  const auto out = RenderChannels(signal, {identity, shift});
  REQUIRE(out.size() == 2);
  REQUIRE(out[0].size() == signal.size());
  for (size_t i = 0; i < signal.size(); ++i)
    CHECK(out[0][i] == doctest::Approx(signal[i]).epsilon(1e-12));
  for (size_t i = 5; i < signal.size(); ++i)
    CHECK(out[1][i] == doctest::Approx(signal[i - 5]).epsilon(1e-12));
  for (size_t i = 0; i < 5; ++i) CHECK(std::abs(out[1][i]) < 1e-12);
}

TEST_CASE("render matches the brute-force convolution oracle") {
  std::vector<double> signal(100), taps(20);
  Rng rng(37);
  for (double& v : signal) v = rng.Uniform(-1, 1);
  for (double& v : taps) v = rng.Uniform(-1, 1);

  Rir rir;
  rir.fs = 16000;
  rir.taps = taps;
  const auto out = RenderChannels(signal, {rir});
  const auto oracle = NaiveConvolve(signal, taps);

  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < signal.size(); ++i) {
    num += (out[0][i] - oracle[i]) * (out[0][i] - oracle[i]);
    den += oracle[i] * oracle[i];
  }
  CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("render validates inputs") {
  Rir a, b;
  a.fs = 16000;
  a.taps = {1.0};
  b.fs = 8000;
  b.taps = {1.0};
  std::vector<double> signal{1.0, 2.0};
  CHECK(ThrownKind([&] { RenderChannels({}, {a}); }) == ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([&] { RenderChannels(signal, {}); }) == ErrorKind::kInvalidArgument);
  CHECK(ThrownKind([&] { RenderChannels(signal, {a, b}); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("noise injection realizes the requested snr exactly") {
  for (double snr_db : {0.0, 10.0, 20.0}) {
    ChannelData x(4, std::vector<double>(32000));
    Rng rng(91);
    for (auto& ch : x)
      for (double& v : ch) v = rng.Uniform(-1, 1);
    const ChannelData clean = x;

    Rng noise_rng(92);
    AddNoiseSnr(x, snr_db, noise_rng);

    double sig = 0.0, noise = 0.0;
    for (size_t c = 0; c < x.size(); ++c)
      for (size_t n = 0; n < x[c].size(); ++n) {
        sig += clean[c][n] * clean[c][n];
        const double d = x[c][n] - clean[c][n];
        noise += d * d;
      }
    CHECK(10.0 * std::log10(sig / noise) == doctest::Approx(snr_db).epsilon(1e-9));
  }
}

TEST_CASE("infinite snr is a no-op and silence is rejected") {
  ChannelData x(1, std::vector<double>{0.5, -0.25, 0.125});
  const ChannelData before = x;
  Rng rng(5);
  AddNoiseSnr(x, std::numeric_limits<double>::infinity(), rng);
  CHECK(x == before);

  ChannelData silent(2, std::vector<double>(100, 0.0));
  CHECK(ThrownKind([&] { AddNoiseSnr(silent, 10.0, rng); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("noise injection is seed-deterministic") {
  ChannelData a(2, std::vector<double>(1000, 0.1)), b = a;
  Rng ra(1234), rb(1234);
  AddNoiseSnr(a, 15.0, ra);
  AddNoiseSnr(b, 15.0, rb);
  CHECK(a == b);
}

TEST_CASE("steering delays at the cardinal angles") {
  const auto broadside = SteeringDelays(90, 4, 0.08);
  for (double t : broadside) CHECK(std::abs(t) < 1e-15);

  // Hand-evaluated: 0.08/343 = 233.236 us per mic step at endfire.
  const auto endfire = SteeringDelays(0, 4, 0.08);
  CHECK(endfire[0] == 0.0);
  CHECK(endfire[1] == doctest::Approx(2.3323615160349855e-4).epsilon(1e-12));
  CHECK(endfire[3] == doctest::Approx(3 * 2.3323615160349855e-4).epsilon(1e-12));

  const auto reverse = SteeringDelays(180, 4, 0.08);
  CHECK(reverse[1] == doctest::Approx(-2.3323615160349855e-4).epsilon(1e-12));
}

TEST_CASE("steering delays mirror around broadside") {
  for (int deg = 0; deg <= 180; deg += 5) {
    const auto fwd = SteeringDelays(deg, 4, 0.08);
    const auto mirror = SteeringDelays(180 - deg, 4, 0.08);
    for (int m = 0; m < 4; ++m) CHECK(std::abs(fwd[m] + mirror[m]) < 1e-12);
  }
}

TEST_CASE("array axis follows the long side") {
  CHECK(ArrayAxisForRoom(MakeRoom(9, 4, 3, 0.3)) == Eigen::Vector3d::UnitX());
  CHECK(ArrayAxisForRoom(MakeRoom(4, 9, 3, 0.3)) == Eigen::Vector3d::UnitY());
}

TEST_CASE("array centers are deterministic and respect clearance") {
  const Room room = MakeRoom(9, 4, 3, 0.5);
  const auto a = DrawArrayCenters(room, 7, 99);
  const auto b = DrawArrayCenters(room, 7, 99);
  const auto c = DrawArrayCenters(room, 7, 100);
  REQUIRE(a.size() == 7);
  CHECK(a == b);
  CHECK(a != c);

  const double clearance = std::min(2.5, 0.45 * 4.0);
  for (const auto& center : a) {
    CHECK(center.x() >= clearance);
    CHECK(center.x() <= 9.0 - clearance);
    CHECK(center.y() >= clearance);
    CHECK(center.y() <= 4.0 - clearance);
    CHECK(center.z() == 1.5);
  }
}

}  // namespace
}  // namespace doalab
