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

#ifndef BEVAUG_SCENE_HPP_
#define BEVAUG_SCENE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bevaug/box.hpp"
#include "bevaug/camera.hpp"
#include "bevaug/depth.hpp"
#include "bevaug/metrics.hpp"
#include "bevaug/ordinal.hpp"
#include "bevaug/perspective.hpp"
#include "bevaug/raster.hpp"

namespace bevaug {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Scene {
  std::string scene_id;
  std::vector<CameraModel> cameras;
  std::vector<Box3D> boxes;
  // Empty, or one path per camera (relative paths resolve against the scene
  // file's directory).
  std::vector<std::string> image_paths;

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Unique camera ids, valid cameras and boxes, image_paths empty or aligned.
void Validate(const Scene& scene);

struct RunConfig {
  std::uint64_t seed = 0;
  PerturbationRange perturbation;
  DepthDecouplingConfig depth = DepthDecouplingConfig::FromReferenceFocal();
  OrdinalDomainScheme scheme = MakeScheme(500.0, 750.0, 5);
  MetricConfig metrics;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// JSON mapping. Readers throw FormatError on missing or mistyped fields and
// InvalidArgument when a value breaks a type invariant.
Json ToJson(const Intrinsics& intr);
Json ToJson(const Pose& pose);
Json ToJson(const CameraModel& cam);
Json ToJson(const Box3D& box);
Json ToJson(const Scene& scene);
Json ToJson(const RunConfig& cfg);
Json ToJson(const MetricReport& report);
Json ToJson(const Homography& h);
Json RecordsToJson(std::span<const DetectionRecord> records);

CameraModel CameraFromJson(const Json& j);
Box3D BoxFromJson(const Json& j);
Scene SceneFromJson(const Json& j);
RunConfig RunConfigFromJson(const Json& j);
MetricReport MetricReportFromJson(const Json& j);
std::vector<DetectionRecord> RecordsFromJson(const Json& j);

// Reads and parses a JSON file; FormatError on I/O or syntax errors.
Json ReadJsonFile(const std::filesystem::path& path);
// Serialized with two-space indentation and a trailing newline.
std::string DumpJson(const Json& j);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Supported rig styles:
//   "ring"     cameras 1.5 m from the ego origin at 1.6 m height
//   "centered" all cameras at the ego origin (pure-rotation perturbations)
const std::vector<std::string>& SupportedRigStyles();

// Deterministic in (seed, n_cameras, n_boxes, rig_style). Cameras sit on a
// ring at yaw spacing 2 pi / n with focal lengths drawn from
// `focal_range`; boxes lie within +-50 m on the ground.
Scene GenerateSyntheticScene(std::uint64_t seed, int n_cameras, int n_boxes,
                             std::string_view rig_style, double focal_min = 500.0,
                             double focal_max = 750.0);

// Smooth textured grayscale test image for one camera.
Raster SyntheticImage(const Intrinsics& intr, std::uint64_t seed);

}  // namespace bevaug

#endif  // BEVAUG_SCENE_HPP_
