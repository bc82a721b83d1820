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

#include "bevaug/camera.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "bevaug/error.hpp"

namespace bevaug {

namespace {

constexpr double kOrthogonalityTol = 1e-9;
constexpr double kGimbalTol = 1e-9;

bool Finite(double v) { return std::isfinite(v); }

}  // namespace

Mat3 Intrinsics::Matrix() const {
  Mat3 k;
  k << fx, 0.0, px,
       0.0, fy, py,
       0.0, 0.0, 1.0;
  return k;
}

Mat3 Intrinsics::Inverse() const {
  Mat3 k;
  k << 1.0 / fx, 0.0, -px / fx,
       0.0, 1.0 / fy, -py / fy,
       0.0, 0.0, 1.0;
  return k;
}

void Validate(const Intrinsics& intr) {
  if (!(Finite(intr.fx) && intr.fx > 0.0) || !(Finite(intr.fy) && intr.fy > 0.0)) {
    throw InvalidArgument("intrinsics: focal lengths must be finite and > 0");
  }
  if (intr.width <= 0 || intr.height <= 0) {
    throw InvalidArgument("intrinsics: image size must be positive");
  }
  if (!(intr.px >= 0.0 && intr.px < intr.width) ||
      !(intr.py >= 0.0 && intr.py < intr.height)) {
    throw InvalidArgument("intrinsics: principal point outside image");
  }
}

void Validate(const Pose& pose) {
  for (double a : {pose.yaw, pose.pitch, pose.roll}) {
    if (!Finite(a)) throw InvalidArgument("pose: non-finite angle");
    if (!(a > -std::numbers::pi && a <= std::numbers::pi)) {
      throw InvalidArgument("pose: angle not normalized to (-pi, pi]");
    }
  }
  if (!pose.translation.allFinite()) {
    throw InvalidArgument("pose: non-finite translation");
  }
}

void Validate(const CameraModel& cam) {
  Validate(cam.intrinsics);
  Validate(cam.pose);
}

double NormalizeAngle(double angle) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (angle > -kPi && angle <= kPi) return angle;
  double r = std::fmod(angle, kTwoPi);  // (-2pi, 2pi)
  if (r > kPi) r -= kTwoPi;
  if (r <= -kPi) r += kTwoPi;
  return r;
}

Mat3 EulerToRotation(double yaw, double pitch, double roll) {
  if (!Finite(yaw) || !Finite(pitch) || !Finite(roll)) {
    throw InvalidArgument("euler_to_rotation: non-finite angle");
  }
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  Mat3 r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp,     cp * sr,                cp * cr;
  return r;
}

Mat3 EulerToRotation(const Pose& pose) {
  return EulerToRotation(pose.yaw, pose.pitch, pose.roll);
}

EulerAngles RotationToEuler(const Mat3& rotation) {
  if (!rotation.allFinite()) {
    throw InvalidArgument("rotation_to_euler: non-finite matrix");
  }
  const double err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (err > kOrthogonalityTol || rotation.determinant() < 0.0) {
    throw InvalidArgument("rotation_to_euler: matrix is not a proper rotation (|R^T R - I| = " +
                          std::to_string(err) + ")");
  }
  EulerAngles out;
  const double cos_pitch = std::hypot(rotation(0, 0), rotation(1, 0));
  out.pitch = std::atan2(-rotation(2, 0), cos_pitch);
  if (cos_pitch < kGimbalTol) {
    // Only yaw - roll (or yaw + roll) is observable.
    out.gimbal_lock = true;
    out.roll = 0.0;
    out.yaw = std::atan2(-rotation(0, 1), rotation(1, 1));
  } else {
    out.yaw = std::atan2(rotation(1, 0), rotation(0, 0));
    out.roll = std::atan2(rotation(2, 1), rotation(2, 2));
  }
  out.yaw = NormalizeAngle(out.yaw);
  out.roll = NormalizeAngle(out.roll);
  return out;
}

const Mat3& EgoToCameraAxes() {
  static const Mat3 axes = [] {
    Mat3 a;
    a << 0.0, -1.0, 0.0,   // camera x = -ego y (right)
         0.0, 0.0, -1.0,   // camera y = -ego z (down)
         1.0, 0.0, 0.0;    // camera z =  ego x (forward)
    return a;
  }();
  return axes;
}

Mat3 CameraFromEgo(const Pose& pose) {
  return EgoToCameraAxes() * EulerToRotation(pose).transpose();
}

EulerAngles PoseAnglesFromCameraRotation(const Mat3& camera_from_ego) {
  return RotationToEuler((EgoToCameraAxes().transpose() * camera_from_ego).transpose());
}

Projection ProjectCameraPoint(const Intrinsics& intr, const Vec3& camera_point) {
  const double depth = camera_point.z();
  if (std::abs(depth) <= kDegenerateDepth) {
    throw DegenerateError("project_point: depth is zero");
  }
  const Vec3 h = intr.Matrix() * camera_point;
  return {Vec2(h.x() / depth, h.y() / depth), depth};
}

Projection ProjectPoint(const CameraModel& cam, const Vec3& ego_point) {
  const Vec3 x = CameraFromEgo(cam.pose) * ego_point + cam.pose.translation;
  return ProjectCameraPoint(cam.intrinsics, x);
}

bool InImage(const Intrinsics& intr, const Vec2& pixel) {
  return pixel.x() >= 0.0 && pixel.x() < intr.width && pixel.y() >= 0.0 &&
         pixel.y() < intr.height;
}

}  // namespace bevaug
