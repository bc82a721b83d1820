// Copyright 2026 The bevaug Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BEVAUG_CHECKS_ORACLES_HPP_
#define BEVAUG_CHECKS_ORACLES_HPP_

// Brute-force and closed-form reference computations. None of these call
// the routine they are meant to check.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bevaug/box.hpp"
#include "bevaug/camera.hpp"
#include "bevaug/metrics.hpp"
#include "bevaug/perspective.hpp"

namespace bevaug::oracle {

// One published (mAP, mATE, mASE, mAOE) -> NDS* row.
struct NdsRow {
  const char* label;
  double map, mate, mase, maoe;
  double printed;
};

// Every row of the cross-domain results table that prints all four inputs
// next to an NDS* value (22 rows).
std::span<const NdsRow> PublishedNdsRows();

// Projection through the explicit 3x4 matrix K [R | T] in homogeneous form.
struct HomogeneousProjection {
  double u, v, w;
};
HomogeneousProjection ProjectHomogeneous(const Intrinsics& intr, const Mat3& camera_from_ego,
                                         const Vec3& translation, const Vec3& ego_point);

// Visible pair list recomputed by rescanning all anchor points.
std::vector<PixelPair> BruteForcePairs(const CameraModel& cam, const Pose& perturbed,
                                       std::span<const Box3D> boxes);

// Central finite differences of f at x with step h.
std::vector<double> CentralDifferences(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double h);

// ||a - b|| / max(||a||, ||b||), or ||a - b|| when both are zero.
double RelativeError(std::span<const double> a, std::span<const double> b);

// AP by enumerating every score cutoff, re-matching from scratch each time,
// and taking the best precision at recall >= r on the 101-point grid.
double EnumeratedAveragePrecision(std::span<const DetectionRecord> gts,
                                  std::span<const DetectionRecord> dets, double threshold,
                                  double recall_floor, double precision_floor);

// Closed form of (projected pixel height of a vertical segment) x
// (scale-invariant depth of its endpoints) for fx = fy: sqrt(2) H / c.
double SizeDepthInvariant(double segment_height, double reference_c);

// Camera at the ego origin looking in a random direction, plus boxes placed
// in its view with bottoms on the plane z = -mount_height.
struct RotationCase {
  CameraModel camera;
  Pose perturbed;
  std::vector<Box3D> boxes;
};
RotationCase RandomRotationCase(std::uint64_t seed, double max_yaw, double max_pitch,
                                double max_roll);

// Three ground truths: one detected with a 0.5 m offset, one detected with
// half the length and a 0.5 rad heading error, one missed. The expected
// values are written out by hand in the implementation.
struct MetricsFixture {
  std::vector<DetectionRecord> gts;
  std::vector<DetectionRecord> dets;
  double map, mate, mase, maoe, nds_star;
  std::array<double, 4> ap;  // at 0.5, 1, 2, 4 m
};
MetricsFixture ThreeBoxFixture();

}  // namespace bevaug::oracle

#endif  // BEVAUG_CHECKS_ORACLES_HPP_
