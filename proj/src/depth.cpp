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

#include "bevaug/depth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bevaug/error.hpp"

namespace bevaug {

DepthDecouplingConfig DepthDecouplingConfig::FromReferenceFocal(double reference_focal,
                                                                double min_depth,
                                                                double max_depth) {
  if (!(std::isfinite(reference_focal) && reference_focal > 0.0)) {
    throw InvalidArgument("depth: reference focal length must be > 0");
  }
  DepthDecouplingConfig cfg{std::numbers::sqrt2 / reference_focal, min_depth, max_depth};
  Validate(cfg);
  return cfg;
}

DepthDecouplingConfig DepthDecouplingConfig::ForDataset(std::string_view dataset,
                                                        double reference_focal) {
  if (dataset == "nuscenes") return FromReferenceFocal(reference_focal, 2.0, 90.0);
  if (dataset == "waymo") return FromReferenceFocal(reference_focal, 1.0, 60.0);
  if (dataset == "lyft") return FromReferenceFocal(reference_focal, 1.0, 90.0);
  throw InvalidArgument("depth: unknown dataset '" + std::string(dataset) +
                        "' (supported: nuscenes, waymo, lyft)");
}

void Validate(const DepthDecouplingConfig& cfg) {
  if (!(std::isfinite(cfg.reference_pixel_size) && cfg.reference_pixel_size > 0.0)) {
    throw InvalidArgument("depth: reference pixel size must be > 0");
  }
  if (!(cfg.min_depth > 0.0 && cfg.min_depth < cfg.max_depth && std::isfinite(cfg.max_depth))) {
    throw InvalidArgument("depth: range must satisfy 0 < min < max");
  }
}

double PixelSize(const Intrinsics& intr) {
  if (!(intr.fx > 0.0) || !(intr.fy > 0.0)) {
    throw InvalidArgument("pixel_size: focal lengths must be > 0");
  }
  return std::hypot(1.0 / intr.fx, 1.0 / intr.fy);
}

double MetricToScaleInvariant(double metric_depth, const Intrinsics& intr,
                              const DepthDecouplingConfig& cfg) {
  Validate(cfg);
  if (!(metric_depth >= cfg.min_depth && metric_depth <= cfg.max_depth)) {
    throw RangeError("metric depth " + std::to_string(metric_depth) + " outside [" +
                     std::to_string(cfg.min_depth) + ", " + std::to_string(cfg.max_depth) + "]");
  }
  return PixelSize(intr) / cfg.reference_pixel_size * metric_depth;
}

double ScaleInvariantToMetric(double depth, const Intrinsics& intr,
                              const DepthDecouplingConfig& cfg) {
  Validate(cfg);
  if (!(std::isfinite(depth) && depth > 0.0)) {
    throw InvalidArgument("scale-invariant depth must be > 0");
  }
  return cfg.reference_pixel_size / PixelSize(intr) * depth;
}

Intrinsics ResizeIntrinsics(const Intrinsics& intr, double rate_x, double rate_y) {
  if (!(std::isfinite(rate_x) && rate_x > 0.0) || !(std::isfinite(rate_y) && rate_y > 0.0)) {
    throw InvalidArgument("resize_intrinsics: rates must be > 0");
  }
  Intrinsics out = intr;
  out.fx = rate_x * intr.fx;
  out.px = rate_x * intr.px;
  out.fy = rate_y * intr.fy;
  out.py = rate_y * intr.py;
  out.width = static_cast<int>(std::floor(rate_x * intr.width + 0.5));
  out.height = static_cast<int>(std::floor(rate_y * intr.height + 0.5));
  return out;
}

}  // namespace bevaug
