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

#ifndef BEVAUG_PERSPECTIVE_HPP_
#define BEVAUG_PERSPECTIVE_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bevaug/box.hpp"
#include "bevaug/camera.hpp"
#include "bevaug/raster.hpp"
#include "bevaug/rng.hpp"

namespace bevaug {

// Half-widths of the uniform angle perturbation, in radians.
struct PerturbationRange {
  double d_yaw = 0.0;
  double d_pitch = 0.0;
  double d_roll = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const PerturbationRange&, const PerturbationRange&) = default;
};

void Validate(const PerturbationRange& range);

enum class HomographyProvenance { kFitted, kAnalytic, kIdentityFallback };

const char* ToString(HomographyProvenance p);

// Projective map q_hat ~ H q between original and perturbed image planes,
// stored in the unit-Frobenius gauge with H(2,2) >= 0.
class Homography {
 public:
  Homography() = default;
  // Normalizes `h`; throws DegenerateError when h is singular.
  Homography(const Mat3& h, HomographyProvenance provenance);

  static Homography Identity(HomographyProvenance provenance);

  const Mat3& matrix() const { return h_; }
  HomographyProvenance provenance() const { return provenance_; }

  // Dehomogenized image of a pixel. Throws DegenerateError at infinity.
  Vec2 Apply(const Vec2& q) const;

 private:
  Mat3 h_ = Mat3::Identity() / std::sqrt(3.0);
  HomographyProvenance provenance_ = HomographyProvenance::kIdentityFallback;
};

// Unit Frobenius norm; sign chosen so H(2,2) > 0, or, if that entry is zero,
// so the first nonzero entry in row-major order is positive.
Mat3 GaugeNormalize(const Mat3& h);

struct PixelPair {
  Vec2 original;
  Vec2 perturbed;
};

struct MatchedPairSet {
  std::vector<PixelPair> pairs;
  std::string camera_id;
};

// Bottom center plus four bottom corners (see BottomPoints).
inline std::array<Vec3, 5> AnchorPoints(const Box3D& box) { return BottomPoints(box); }

// Adds independent uniform offsets to yaw, pitch and roll (drawn in that
// order) and renormalizes the angles. Translation is unchanged.
Pose PerturbPose(const Pose& pose, const PerturbationRange& range, Rng& rng);

// Projects every anchor point with the original and the perturbed pose and
// keeps pairs whose two projections have positive depth and land inside the
// image. A zero-depth projection counts as not visible.
MatchedPairSet CollectPairs(const CameraModel& cam, const Pose& perturbed,
                            std::span<const Box3D> boxes);

inline constexpr std::size_t kMinHomographyPairs = 4;

// Direct linear transform with Hartley normalization. Fewer than four pairs
// returns the identity fallback. Throws DegenerateError when the design
// matrix has rank < 8 (e.g. all points collinear).
Homography FitHomography(const MatchedPairSet& pairs);

// Plane n^T X = distance in the original camera frame.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double distance = 1.0;
};

// Ground plane z = height of the ego frame, expressed in the camera frame of
// `pose`. Throws DegenerateError when the camera center lies on the plane.
Plane GroundPlaneInCamera(const Pose& pose, double height = 0.0);

// Rigid motion taking original camera coordinates to perturbed camera
// coordinates: X2 = rotation * X1 + translation.
struct RelativeMotion {
  Mat3 rotation;
  Vec3 translation;
};
RelativeMotion RelativeCameraMotion(const Pose& original, const Pose& perturbed);

// H = K (R + t n^T / d) K^-1 for the plane (n, d) in the original camera
// frame. Throws InvalidArgument for d <= 0.
Homography AnalyticHomography(const CameraModel& cam, const Pose& perturbed,
                              const Vec3& plane_normal, double plane_distance);

// Inverse-mapping warp with bilinear sampling. Output pixel (u, v) samples the
// source at H^-1 (u, v, 1); samples outside [0, w-1] x [0, h-1] are 0.
Raster WarpImage(const Raster& image, const Homography& h, int out_width, int out_height);

struct CameraAugmentation {
  Raster image;
  Pose pose;
  Homography homography;
  std::size_t num_pairs = 0;
};

// Per camera: perturb with the stream ForkRng(range.seed, camera index),
// collect pairs, fit or fall back, warp. A degenerate anchor layout falls
// back to the identity like a camera with fewer than four pairs. `threads` > 1 processes cameras
// concurrently; the result does not depend on it.
std::vector<CameraAugmentation> AugmentScene(std::span<const CameraModel> rig,
                                             std::span<const Raster> images,
                                             std::span<const Box3D> boxes,
                                             const PerturbationRange& range,
                                             unsigned threads = 1);

}  // namespace bevaug

#endif  // BEVAUG_PERSPECTIVE_HPP_
