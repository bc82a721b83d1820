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

#include "bevaug/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "bevaug/error.hpp"
#include "bevaug/rng.hpp"

namespace bevaug {

namespace {

constexpr int kSyntheticWidth = 704;
constexpr int kSyntheticHeight = 256;

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

double Number(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number()) throw FormatError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

Vec3 Vector3(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_array() || v.size() != 3) {
    throw FormatError(std::string("field '") + key + "' must be a 3-element array");
  }
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw FormatError(std::string("field '") + key + "' must be numeric");
    out[i] = v[i].get<double>();
  }
  return out;
}

// Documents without a version are read as the current one.
void CheckVersion(const Json& j, const char* what) {
  if (!j.is_object()) return;
  auto it = j.find("schema_version");
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
    throw FormatError(std::string(what) + ": unsupported schema_version " + it->dump() +
                      " (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

Json Array3(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

// Converts library exceptions from nlohmann into FormatError.
template <typename F>
auto Guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

Intrinsics IntrinsicsFromJson(const Json& j) {
  Intrinsics intr;
  intr.fx = Number(j, "fx");
  intr.fy = Number(j, "fy");
  intr.px = Number(j, "px");
  intr.py = Number(j, "py");
  const Json& w = Field(j, "width");
  const Json& h = Field(j, "height");
  if (!w.is_number_integer() || !h.is_number_integer()) {
    throw FormatError("intrinsics: width and height must be integers");
  }
  intr.width = w.get<int>();
  intr.height = h.get<int>();
  return intr;
}

Pose PoseFromJson(const Json& j) {
  Pose pose;
  pose.yaw = Number(j, "yaw");
  pose.pitch = Number(j, "pitch");
  pose.roll = Number(j, "roll");
  pose.translation = Vector3(j, "t");
  return pose;
}

}  // namespace

void Validate(const Scene& scene) {
  std::set<std::string> ids;
  for (const CameraModel& cam : scene.cameras) {
    Validate(cam);
    if (!ids.insert(cam.camera_id).second) {
      throw InvalidArgument("scene: duplicate camera_id '" + cam.camera_id + "'");
    }
  }
  for (const Box3D& box : scene.boxes) Validate(box);
  if (!scene.image_paths.empty() && scene.image_paths.size() != scene.cameras.size()) {
    throw InvalidArgument("scene: image_paths must align with cameras");
  }
}

Json ToJson(const Intrinsics& intr) {
  return {{"fx", intr.fx}, {"fy", intr.fy}, {"px", intr.px},
          {"py", intr.py}, {"width", intr.width}, {"height", intr.height}};
}

Json ToJson(const Pose& pose) {
  return {{"yaw", pose.yaw}, {"pitch", pose.pitch}, {"roll", pose.roll},
          {"t", Array3(pose.translation)}};
}

Json ToJson(const CameraModel& cam) {
  return {{"camera_id", cam.camera_id},
          {"intrinsics", ToJson(cam.intrinsics)},
          {"pose", ToJson(cam.pose)}};
}

Json ToJson(const Box3D& box) {
  Json j = {{"center", Array3(box.center)},
            {"dims", Array3(box.dims)},
            {"yaw", box.yaw},
            {"class_id", box.class_id}};
  if (box.score) j["score"] = *box.score;
  return j;
}

Json ToJson(const Scene& scene) {
  Json cams = Json::array();
  for (const CameraModel& c : scene.cameras) cams.push_back(ToJson(c));
  Json boxes = Json::array();
  for (const Box3D& b : scene.boxes) boxes.push_back(ToJson(b));
  Json j = {{"schema_version", kSchemaVersion},
            {"scene_id", scene.scene_id},
            {"cameras", cams},
            {"boxes", boxes}};
  if (!scene.image_paths.empty()) j["image_paths"] = scene.image_paths;
  return j;
}

Json ToJson(const RunConfig& cfg) {
  const MetricConfig& m = cfg.metrics;
  return {{"schema_version", kSchemaVersion},
          {"seed", cfg.seed},
          {"perturbation",
           {{"d_yaw", cfg.perturbation.d_yaw},
            {"d_pitch", cfg.perturbation.d_pitch},
            {"d_roll", cfg.perturbation.d_roll},
            {"seed", cfg.perturbation.seed}}},
          {"depth",
           {{"reference_pixel_size", cfg.depth.reference_pixel_size},
            {"min_depth", cfg.depth.min_depth},
            {"max_depth", cfg.depth.max_depth}}},
          {"scheme",
           {{"alpha", cfg.scheme.alpha},
            {"beta", cfg.scheme.beta},
            {"num_subintervals", cfg.scheme.num_subintervals},
            {"thresholds", cfg.scheme.thresholds}}},
          {"metrics",
           {{"distance_thresholds", m.distance_thresholds},
            {"tp_threshold", m.tp_threshold},
            {"range_limit", m.range_limit},
            {"recall_floor", m.recall_floor},
            {"precision_floor", m.precision_floor}}}};
}

Json ToJson(const MetricReport& report) {
  Json per = Json::array();
  for (const ThresholdResult& t : report.per_threshold) {
    per.push_back({{"threshold", t.threshold}, {"ap", t.ap}, {"tp", t.tp}, {"fp", t.fp}});
  }
  return {{"schema_version", kSchemaVersion},
          {"mAP", report.mAP},
          {"mATE", report.mATE},
          {"mASE", report.mASE},
          {"mAOE", report.mAOE},
          {"nds_star", report.nds_star},
          {"per_threshold", per},
          {"match_counts",
           {{"num_gt", report.num_gt}, {"num_pred", report.num_pred}, {"num_tp", report.num_tp}}}};
}

Json ToJson(const Homography& h) {
  Json m = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.push_back(h.matrix()(r, c));
  }
  return {{"h", m}, {"provenance", ToString(h.provenance())}};
}

Json RecordsToJson(std::span<const DetectionRecord> records) {
  Json arr = Json::array();
  for (const DetectionRecord& r : records) {
    arr.push_back({{"sample_id", r.sample_id}, {"box", ToJson(r.box)}});
  }
  return {{"schema_version", kSchemaVersion}, {"records", arr}};
}

CameraModel CameraFromJson(const Json& j) {
  return Guard("camera", [&] {
    CameraModel cam;
    cam.camera_id = Field(j, "camera_id").get<std::string>();
    cam.intrinsics = IntrinsicsFromJson(Field(j, "intrinsics"));
    cam.pose = PoseFromJson(Field(j, "pose"));
    Validate(cam);
    return cam;
  });
}

Box3D BoxFromJson(const Json& j) {
  return Guard("box", [&] {
    Box3D box;
    box.center = Vector3(j, "center");
    box.dims = Vector3(j, "dims");
    box.yaw = Number(j, "yaw");
    if (auto it = j.find("class_id"); it != j.end()) box.class_id = it->get<std::string>();
    if (auto it = j.find("score"); it != j.end() && !it->is_null()) {
      if (!it->is_number()) throw FormatError("box: score must be a number");
      box.score = it->get<double>();
    }
    Validate(box);
    return box;
  });
}

Scene SceneFromJson(const Json& j) {
  return Guard("scene", [&] {
    CheckVersion(j, "scene");
    Scene scene;
    scene.scene_id = Field(j, "scene_id").get<std::string>();
    const Json& cams = Field(j, "cameras");
    if (!cams.is_array()) throw FormatError("scene: cameras must be an array");
    for (const Json& c : cams) scene.cameras.push_back(CameraFromJson(c));
    if (auto it = j.find("boxes"); it != j.end()) {
      if (!it->is_array()) throw FormatError("scene: boxes must be an array");
      for (const Json& b : *it) scene.boxes.push_back(BoxFromJson(b));
    }
    if (auto it = j.find("image_paths"); it != j.end()) {
      scene.image_paths = it->get<std::vector<std::string>>();
    }
    Validate(scene);
    return scene;
  });
}

RunConfig RunConfigFromJson(const Json& j) {
  return Guard("config", [&] {
    CheckVersion(j, "config");
    if (!j.is_object()) throw FormatError("config: expected an object");
    RunConfig cfg;
    if (auto it = j.find("seed"); it != j.end()) cfg.seed = it->get<std::uint64_t>();
    cfg.perturbation.seed = cfg.seed;
    if (auto it = j.find("perturbation"); it != j.end()) {
      const Json& p = *it;
      cfg.perturbation.d_yaw = p.value("d_yaw", 0.0);
      cfg.perturbation.d_pitch = p.value("d_pitch", 0.0);
      cfg.perturbation.d_roll = p.value("d_roll", 0.0);
      cfg.perturbation.seed = p.value("seed", cfg.seed);
      Validate(cfg.perturbation);
    }
    if (auto it = j.find("depth"); it != j.end()) {
      const Json& d = *it;
      const double lo = d.value("min_depth", 2.0);
      const double hi = d.value("max_depth", 90.0);
      if (d.contains("reference_pixel_size")) {
        cfg.depth = {Number(d, "reference_pixel_size"), lo, hi};
        Validate(cfg.depth);
      } else if (d.contains("dataset")) {
        cfg.depth = DepthDecouplingConfig::ForDataset(d["dataset"].get<std::string>(),
                                                      d.value("reference_focal", kDefaultReferenceFocal));
      } else {
        cfg.depth = DepthDecouplingConfig::FromReferenceFocal(
            d.value("reference_focal", kDefaultReferenceFocal), lo, hi);
      }
    }
    if (auto it = j.find("scheme"); it != j.end()) {
      cfg.scheme = MakeScheme(Number(*it, "alpha"), Number(*it, "beta"),
                              Field(*it, "num_subintervals").get<int>());
    }
    if (auto it = j.find("metrics"); it != j.end()) {
      const Json& m = *it;
      MetricConfig mc;
      mc.distance_thresholds = m.value("distance_thresholds", mc.distance_thresholds);
      mc.tp_threshold = m.value("tp_threshold", mc.tp_threshold);
      mc.range_limit = m.value("range_limit", mc.range_limit);
      mc.recall_floor = m.value("recall_floor", mc.recall_floor);
      mc.precision_floor = m.value("precision_floor", mc.precision_floor);
      Validate(mc);
      cfg.metrics = mc;
    }
    return cfg;
  });
}

MetricReport MetricReportFromJson(const Json& j) {
  return Guard("metric report", [&] {
    CheckVersion(j, "metric report");
    MetricReport r;
    r.mAP = Number(j, "mAP");
    r.mATE = Number(j, "mATE");
    r.mASE = Number(j, "mASE");
    r.mAOE = Number(j, "mAOE");
    r.nds_star = Number(j, "nds_star");
    for (const Json& t : Field(j, "per_threshold")) {
      r.per_threshold.push_back({Number(t, "threshold"), Number(t, "ap"),
                                 Field(t, "tp").get<std::size_t>(),
                                 Field(t, "fp").get<std::size_t>()});
    }
    const Json& counts = Field(j, "match_counts");
    r.num_gt = Field(counts, "num_gt").get<std::size_t>();
    r.num_pred = Field(counts, "num_pred").get<std::size_t>();
    r.num_tp = Field(counts, "num_tp").get<std::size_t>();
    return r;
  });
}

std::vector<DetectionRecord> RecordsFromJson(const Json& j) {
  return Guard("records", [&] {
    CheckVersion(j, "records");
    const Json& arr = j.is_array() ? j : Field(j, "records");
    if (!arr.is_array()) throw FormatError("records: expected an array");
    std::vector<DetectionRecord> out;
    for (const Json& r : arr) {
      out.push_back({BoxFromJson(Field(r, "box")), Field(r, "sample_id").get<std::string>()});
    }
    return out;
  });
}

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

const std::vector<std::string>& SupportedRigStyles() {
  static const std::vector<std::string> styles{"ring", "centered"};
  return styles;
}

Scene GenerateSyntheticScene(std::uint64_t seed, int n_cameras, int n_boxes,
                             std::string_view rig_style, double focal_min, double focal_max) {
  if (rig_style != "ring" && rig_style != "centered") {
    std::string msg = "gen-scene: unsupported rig style '" + std::string(rig_style) +
                      "' (supported:";
    for (const std::string& s : SupportedRigStyles()) msg += " " + s;
    throw InvalidArgument(msg + ")");
  }
  if (n_cameras != 5 && n_cameras != 6) {
    throw InvalidArgument("gen-scene: camera count must be 5 or 6");
  }
  if (n_boxes < 0) throw InvalidArgument("gen-scene: box count must be >= 0");
  if (!(focal_min > 0.0 && focal_min <= focal_max)) {
    throw InvalidArgument("gen-scene: need 0 < focal_min <= focal_max");
  }

  constexpr double kRingRadius = 1.5;
  constexpr double kMountHeight = 1.6;
  Scene scene;
  scene.scene_id = "synthetic-" + std::to_string(seed);

  Rng rig_rng = ForkRng(seed, 0);
  for (int i = 0; i < n_cameras; ++i) {
    CameraModel cam;
    cam.camera_id = "cam" + std::to_string(i);
    const double f = UniformRange(rig_rng, focal_min, focal_max);
    cam.intrinsics = {f, f, kSyntheticWidth / 2.0, kSyntheticHeight / 2.0, kSyntheticWidth,
                      kSyntheticHeight};
    cam.pose.yaw = NormalizeAngle(2.0 * std::numbers::pi * i / n_cameras);
    cam.pose.pitch = UniformSymmetric(rig_rng, 0.02);
    cam.pose.roll = UniformSymmetric(rig_rng, 0.01);
    if (rig_style == "ring") {
      const Vec3 center(kRingRadius * std::cos(cam.pose.yaw), kRingRadius * std::sin(cam.pose.yaw),
                        kMountHeight);
      cam.pose.translation = -(CameraFromEgo(cam.pose) * center);
    }
    scene.cameras.push_back(cam);
  }

  // The centered rig puts the ego origin at mount height, so the ground sits below it.
  const double ground_z = rig_style == "centered" ? -kMountHeight : 0.0;
  Rng box_rng = ForkRng(seed, 1);
  for (int i = 0; i < n_boxes; ++i) {
    Box3D box;
    const double r = UniformRange(box_rng, 4.0, 50.0);
    const double theta = UniformSymmetric(box_rng, std::numbers::pi);
    box.dims = Vec3(UniformRange(box_rng, 3.8, 4.8), UniformRange(box_rng, 1.7, 2.1),
                    UniformRange(box_rng, 1.4, 1.8));
    box.center = Vec3(r * std::cos(theta), r * std::sin(theta), ground_z + 0.5 * box.dims.z());
    box.yaw = NormalizeAngle(UniformSymmetric(box_rng, std::numbers::pi));
    box.class_id = "car";
    scene.boxes.push_back(box);
  }
  Validate(scene);
  return scene;
}

Raster SyntheticImage(const Intrinsics& intr, std::uint64_t seed) {
  Rng rng = ForkRng(seed, 2);
  const double phase_u = UniformSymmetric(rng, std::numbers::pi);
  const double phase_v = UniformSymmetric(rng, std::numbers::pi);
  Raster image(intr.width, intr.height, 1);
  for (int v = 0; v < intr.height; ++v) {
    for (int u = 0; u < intr.width; ++u) {
      const double value = 128.0 + 55.0 * std::sin(u / 23.0 + phase_u) +
                           45.0 * std::cos(v / 17.0 + phase_v) + 0.05 * (u - v);
      image.at(u, v) = static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
    }
  }
  return image;
}

}  // namespace bevaug
