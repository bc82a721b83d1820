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

#ifndef BEVAUG_CAMERA_HPP_
#define BEVAUG_CAMERA_HPP_

#include <string>

#include <Eigen/Core>

namespace bevaug {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Frames:
//   ego     x forward, y left, z up
//   camera  z forward (optical axis), x right, y down
//   pixels  origin top-left, u rightward, v downward
//
// A Pose holds the mounting orientation of the camera expressed in the ego
// frame (yaw about z, pitch about y, roll about x, composed Rz * Ry * Rx) and
// the additive camera-frame translation T, so that a point Q in the ego frame
// lands at  X = CameraFromEgo(pose) * Q + T  in the camera frame.

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double px = 0.0;
  double py = 0.0;
  int width = 1;
  int height = 1;

  Mat3 Matrix() const;
  Mat3 Inverse() const;

  friend bool operator==(const Intrinsics&, const Intrinsics&) = default;
};

struct Pose {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  Vec3 translation = Vec3::Zero();

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.yaw == b.yaw && a.pitch == b.pitch && a.roll == b.roll &&
           a.translation == b.translation;
  }
};

struct CameraModel {
  Intrinsics intrinsics;
  Pose pose;
  std::string camera_id;

  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

// Throws InvalidArgument unless fx, fy > 0, width, height > 0 and the
// principal point lies inside the half-open image rectangle.
void Validate(const Intrinsics& intr);
// Throws InvalidArgument unless the angles are finite and normalized.
void Validate(const Pose& pose);
void Validate(const CameraModel& cam);

// Maps an angle onto (-pi, pi].
double NormalizeAngle(double angle);

// R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 EulerToRotation(const Pose& pose);
Mat3 EulerToRotation(double yaw, double pitch, double roll);

struct EulerAngles {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  // Set when |pitch| = pi/2; roll is then pinned to 0 and yaw absorbs it.
  bool gimbal_lock = false;
};

// Inverse of EulerToRotation on the branch pitch in [-pi/2, pi/2].
// Throws InvalidArgument when R is not a proper rotation within 1e-9.
EulerAngles RotationToEuler(const Mat3& rotation);

// Fixed permutation taking ego axes to camera axes for a camera whose
// mounting angles are all zero (looking along ego +x).
const Mat3& EgoToCameraAxes();

// Rotation part of the ego -> camera transform.
Mat3 CameraFromEgo(const Pose& pose);
// Recovers mounting angles from an ego -> camera rotation.
EulerAngles PoseAnglesFromCameraRotation(const Mat3& camera_from_ego);

struct Projection {
  Vec2 pixel;
  double depth = 0.0;
};

inline constexpr double kDegenerateDepth = 1e-12;

// d * [u, v, 1]^T = K * (CameraFromEgo(pose) * Q + T).
// Throws DegenerateError when |d| <= 1e-12. Negative depth is returned as is.
Projection ProjectPoint(const CameraModel& cam, const Vec3& ego_point);
// Same projection for a point already expressed in the camera frame.
Projection ProjectCameraPoint(const Intrinsics& intr, const Vec3& camera_point);

// Half-open box test 0 <= u < width, 0 <= v < height.
bool InImage(const Intrinsics& intr, const Vec2& pixel);

}  // namespace bevaug

#endif  // BEVAUG_CAMERA_HPP_
