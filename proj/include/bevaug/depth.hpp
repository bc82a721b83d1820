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

#ifndef BEVAUG_DEPTH_HPP_
#define BEVAUG_DEPTH_HPP_

#include <string_view>

#include "bevaug/camera.hpp"

namespace bevaug {

inline constexpr double kDefaultReferenceFocal = 707.0;

// Scale-invariant depth configuration. `reference_pixel_size` is the pixel
// size of a camera at the reference focal length; metric depths passed to the
// forward conversion must lie in [min_depth, max_depth].
struct DepthDecouplingConfig {
  double reference_pixel_size = 0.0;
  double min_depth = 2.0;
  double max_depth = 90.0;

  // c = sqrt(2) / f_ref with the nuScenes depth range.
  static DepthDecouplingConfig FromReferenceFocal(double reference_focal = kDefaultReferenceFocal,
                                                  double min_depth = 2.0, double max_depth = 90.0);
  // Depth range used for a dataset tag: "nuscenes", "waymo" or "lyft".
  static DepthDecouplingConfig ForDataset(std::string_view dataset,
                                          double reference_focal = kDefaultReferenceFocal);

  friend bool operator==(const DepthDecouplingConfig&, const DepthDecouplingConfig&) = default;
};

void Validate(const DepthDecouplingConfig& cfg);

// s = sqrt(1/fx^2 + 1/fy^2).
double PixelSize(const Intrinsics& intr);

// d = (s / c) * d_m. Throws RangeError when d_m is outside the configured range.
double MetricToScaleInvariant(double metric_depth, const Intrinsics& intr,
                              const DepthDecouplingConfig& cfg);

// d_m = (c / s) * d. Throws InvalidArgument for d <= 0.
double ScaleInvariantToMetric(double depth, const Intrinsics& intr,
                              const DepthDecouplingConfig& cfg);

// Scales focal length and principal point row-wise; image size rounds half up.
Intrinsics ResizeIntrinsics(const Intrinsics& intr, double rate_x, double rate_y);

}  // namespace bevaug

#endif  // BEVAUG_DEPTH_HPP_
