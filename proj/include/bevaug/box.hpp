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

#ifndef BEVAUG_BOX_HPP_
#define BEVAUG_BOX_HPP_

#include <array>
#include <optional>
#include <string>

#include "bevaug/camera.hpp"

namespace bevaug {

// Oriented 3D box in the ego frame; `center.z()` is the geometric center.
// dims = (dx, dy, dz) along the box's own x/y/z axes before yaw.
struct Box3D {
  Vec3 center = Vec3::Zero();
  Vec3 dims = Vec3::Ones();
  double yaw = 0.0;
  std::string class_id = "car";
  std::optional<double> score;

  friend bool operator==(const Box3D& a, const Box3D& b) {
    return a.center == b.center && a.dims == b.dims && a.yaw == b.yaw &&
           a.class_id == b.class_id && a.score == b.score;
  }
};

void Validate(const Box3D& box);

// Bottom center followed by the four bottom corners, counter-clockwise
// starting at (+dx/2, +dy/2) in box coordinates.
std::array<Vec3, 5> BottomPoints(const Box3D& box);

}  // namespace bevaug

#endif  // BEVAUG_BOX_HPP_
