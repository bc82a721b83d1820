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

#include "bevaug/box.hpp"

#include <cmath>
#include <numbers>

#include "bevaug/error.hpp"

namespace bevaug {

void Validate(const Box3D& box) {
  if (!box.center.allFinite() || !box.dims.allFinite() || !std::isfinite(box.yaw)) {
    throw InvalidArgument("box: non-finite field");
  }
  if (!(box.dims.x() > 0.0 && box.dims.y() > 0.0 && box.dims.z() > 0.0)) {
    throw InvalidArgument("box: dimensions must be positive");
  }
  if (!(box.yaw > -std::numbers::pi && box.yaw <= std::numbers::pi)) {
    throw InvalidArgument("box: yaw not normalized to (-pi, pi]");
  }
  if (box.score && !(*box.score >= 0.0 && *box.score <= 1.0)) {
    throw InvalidArgument("box: score outside [0, 1]");
  }
}

std::array<Vec3, 5> BottomPoints(const Box3D& box) {
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const double hx = 0.5 * box.dims.x(), hy = 0.5 * box.dims.y();
  const double z = box.center.z() - 0.5 * box.dims.z();
  auto corner = [&](double lx, double ly) {
    return Vec3(box.center.x() + c * lx - s * ly, box.center.y() + s * lx + c * ly, z);
  };
  return {Vec3(box.center.x(), box.center.y(), z), corner(hx, hy), corner(-hx, hy),
          corner(-hx, -hy), corner(hx, -hy)};
}

}  // namespace bevaug
