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

// Command-line front end: depth-convert, augment, homography, bin-focal,
// ordinal-loss, evaluate, gen-scene, selftest.
//
// Exit codes: 0 success, 1 self-test failure, 2 input or format error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bevaug/checks/selftest.hpp"
#include "bevaug/depth.hpp"
#include "bevaug/error.hpp"
#include "bevaug/metrics.hpp"
#include "bevaug/ordinal.hpp"
#include "bevaug/perspective.hpp"
#include "bevaug/raster.hpp"
#include "bevaug/scene.hpp"

namespace fs = std::filesystem;
using namespace bevaug;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

RunConfig LoadConfig(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return RunConfigFromJson(ReadJsonFile(path));
}

void Emit(const Json& j, const std::string& output_dir, const std::string& name) {
  if (output_dir.empty()) {
    std::cout << DumpJson(j);
  } else {
    fs::create_directories(output_dir);
    WriteTextFile(fs::path(output_dir) / name, DumpJson(j));
  }
}

std::string FormatMatrixLine(const std::string& id, const Mat3& h) {
  std::string line = id;
  char buf[40];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof buf, " %.17g", h(r, c));
      line += buf;
    }
  }
  return line + "\n";
}

struct DepthArgs {
  std::string to = "scale-invariant";
  double value = 0.0;
  double fx = 0.0, fy = 0.0;
  std::optional<double> c, f_ref, min_depth, max_depth;
  std::string dataset = "nuscenes";
};

int RunDepthConvert(const DepthArgs& a) {
  DepthDecouplingConfig cfg = DepthDecouplingConfig::ForDataset(a.dataset, a.f_ref.value_or(kDefaultReferenceFocal));
  if (a.c) cfg.reference_pixel_size = *a.c;
  if (a.min_depth) cfg.min_depth = *a.min_depth;
  if (a.max_depth) cfg.max_depth = *a.max_depth;
  Validate(cfg);
  const Intrinsics intr{a.fx, a.fy, 0.0, 0.0, 1, 1};
  double out = 0.0;
  if (a.to == "scale-invariant") {
    out = MetricToScaleInvariant(a.value, intr, cfg);
  } else if (a.to == "metric") {
    out = ScaleInvariantToMetric(a.value, intr, cfg);
  } else {
    throw InvalidArgument("depth-convert: --to must be scale-invariant or metric");
  }
  std::cout << DumpJson({{"to", a.to},
                         {"input", a.value},
                         {"output", out},
                         {"pixel_size", PixelSize(intr)},
                         {"reference_pixel_size", cfg.reference_pixel_size}});
  return 0;
}

struct SceneArgs {
  std::uint64_t seed = 0;
  int cameras = 6;
  int boxes = 10;
  std::string rig = "ring";
  std::string output_dir;
  bool images = false;
};

int RunGenScene(const SceneArgs& a) {
  Scene scene = GenerateSyntheticScene(a.seed, a.cameras, a.boxes, a.rig);
  if (a.images) {
    if (a.output_dir.empty()) throw InvalidArgument("gen-scene: --images needs --output-dir");
    fs::create_directories(a.output_dir);
    for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
      const std::string name = scene.cameras[i].camera_id + ".pgm";
      WritePnm(fs::path(a.output_dir) / name, SyntheticImage(scene.cameras[i].intrinsics, a.seed + i));
      scene.image_paths.push_back(name);
    }
  }
  Emit(ToJson(scene), a.output_dir, "scene.json");
  return 0;
}

struct AugmentArgs {
  std::string scene;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> d_yaw, d_pitch, d_roll;
  std::string output_dir;
  unsigned threads = 1;
  bool synthetic_images = false;
};

int RunAugment(const AugmentArgs& a) {
  const Scene scene = SceneFromJson(ReadJsonFile(a.scene));
  RunConfig cfg = LoadConfig(a.config);
  if (a.seed) cfg.perturbation.seed = *a.seed;
  if (a.d_yaw) cfg.perturbation.d_yaw = *a.d_yaw;
  if (a.d_pitch) cfg.perturbation.d_pitch = *a.d_pitch;
  if (a.d_roll) cfg.perturbation.d_roll = *a.d_roll;

  std::vector<Raster> images;
  if (!scene.image_paths.empty()) {
    const fs::path base = fs::path(a.scene).parent_path();
    for (const std::string& p : scene.image_paths) {
      const fs::path path = fs::path(p).is_absolute() ? fs::path(p) : base / p;
      images.push_back(ReadPnm(path));
    }
  } else if (a.synthetic_images) {
    for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
      images.push_back(SyntheticImage(scene.cameras[i].intrinsics, cfg.seed + i));
    }
  } else {
    throw InvalidArgument("augment: scene has no image_paths (use --synthetic-images)");
  }

  const auto results = AugmentScene(scene.cameras, images, scene.boxes, cfg.perturbation, a.threads);
  fs::create_directories(a.output_dir);
  Json cams = Json::array();
  std::string matrices;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CameraModel& cam = scene.cameras[i];
    const std::string name = cam.camera_id + (results[i].image.channels == 1 ? ".pgm" : ".ppm");
    WritePnm(fs::path(a.output_dir) / name, results[i].image);
    cams.push_back({{"camera_id", cam.camera_id},
                    {"pose", ToJson(results[i].pose)},
                    {"homography", ToJson(results[i].homography)},
                    {"num_pairs", results[i].num_pairs},
                    {"image", name}});
    matrices += FormatMatrixLine(cam.camera_id, results[i].homography.matrix());
  }
  WriteTextFile(fs::path(a.output_dir) / "poses.json",
                DumpJson({{"schema_version", kSchemaVersion},
                          {"scene_id", scene.scene_id},
                          {"perturbation", ToJson(cfg)["perturbation"]},
                          {"cameras", cams}}));
  WriteTextFile(fs::path(a.output_dir) / "homographies.txt", matrices);
  return 0;
}

struct HomographyArgs {
  std::string scene;
  std::string camera;
  std::string pairs;
  std::string config;
  std::optional<std::uint64_t> seed;
};

int RunHomography(const HomographyArgs& a) {
  if (!a.pairs.empty()) {
    const Json j = ReadJsonFile(a.pairs);
    MatchedPairSet set;
    try {
      for (const Json& p : j.at("pairs")) {
        set.pairs.push_back({Vec2(p.at(0).at(0).get<double>(), p.at(0).at(1).get<double>()),
                             Vec2(p.at(1).at(0).get<double>(), p.at(1).at(1).get<double>())});
      }
    } catch (const Json::exception& e) {
      throw FormatError(std::string("pairs: expected {\"pairs\": [[[u,v],[u',v']], ...]}: ") + e.what());
    }
    std::cout << DumpJson({{"num_pairs", set.pairs.size()}, {"fitted", ToJson(FitHomography(set))}});
    return 0;
  }
  if (a.scene.empty()) throw InvalidArgument("homography: need --scene or --pairs");
  const Scene scene = SceneFromJson(ReadJsonFile(a.scene));
  RunConfig cfg = LoadConfig(a.config);
  if (a.seed) cfg.perturbation.seed = *a.seed;
  std::size_t index = scene.cameras.size();
  for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
    if (scene.cameras[i].camera_id == a.camera) index = i;
  }
  if (index == scene.cameras.size()) {
    throw InvalidArgument("homography: no camera '" + a.camera + "' in scene");
  }
  const CameraModel& cam = scene.cameras[index];
  Rng rng = ForkRng(cfg.perturbation.seed, index);
  const Pose perturbed = PerturbPose(cam.pose, cfg.perturbation, rng);
  const MatchedPairSet pairs = CollectPairs(cam, perturbed, scene.boxes);
  const Homography fitted = FitHomography(pairs);
  Json out = {{"camera_id", cam.camera_id},
              {"perturbed_pose", ToJson(perturbed)},
              {"num_pairs", pairs.pairs.size()},
              {"fitted", ToJson(fitted)}};
  double residual = 0.0;
  for (const PixelPair& p : pairs.pairs) {
    residual = std::max(residual, (fitted.Apply(p.original) - p.perturbed).norm());
  }
  out["max_residual_px"] = residual;
  // Ground plane in the original camera frame; the anchors lie on it.
  const double ground_z = scene.boxes.empty()
                              ? 0.0
                              : scene.boxes.front().center.z() - 0.5 * scene.boxes.front().dims.z();
  try {
    const Plane ground = GroundPlaneInCamera(cam.pose, ground_z);
    out["analytic"] = ToJson(AnalyticHomography(cam, perturbed, ground.normal, ground.distance));
  } catch (const DegenerateError&) {
    out["analytic"] = nullptr;
  }
  std::cout << DumpJson(out);
  return 0;
}

struct BinArgs {
  std::vector<double> focals;
  std::optional<double> alpha, beta;
  std::optional<int> k;
  std::string config;
};

int RunBinFocal(const BinArgs& a) {
  OrdinalDomainScheme scheme = LoadConfig(a.config).scheme;
  if (a.alpha || a.beta || a.k) {
    scheme = MakeScheme(a.alpha.value_or(scheme.alpha), a.beta.value_or(scheme.beta),
                        a.k.value_or(scheme.num_subintervals));
  }
  Json labels = Json::array();
  for (double f : a.focals) labels.push_back({{"focal", f}, {"label", AssignLabel(scheme, f)}});
  std::cout << DumpJson({{"thresholds", scheme.thresholds},
                         {"num_categories", scheme.num_categories()},
                         {"labels", labels}});
  return 0;
}

int RunOrdinalLoss(const std::string& input, double lambda) {
  const Json j = ReadJsonFile(input);
  std::vector<double> logits;
  int label = 0;
  try {
    logits = j.at("logits").get<std::vector<double>>();
    label = j.at("label").get<int>();
    if (j.contains("lambda")) lambda = j["lambda"].get<double>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("ordinal-loss: expected {\"logits\": [...], \"label\": l}: ") + e.what());
  }
  const std::vector<double> grad = OrdinalLossGrad(logits, label);
  std::cout << DumpJson({{"loss", OrdinalLoss(logits, label)},
                         {"grad", grad},
                         {"reversed_grad", ReverseGradient(grad, lambda)},
                         {"probabilities", OrdinalProbabilities(logits)},
                         {"decoded_label", DecodeLabel(logits)}});
  return 0;
}

struct EvalArgs {
  std::string gt, pred, config, output_dir;
  unsigned threads = 1;
};

int RunEvaluate(const EvalArgs& a) {
  const RunConfig cfg = LoadConfig(a.config);
  const auto gts = RecordsFromJson(ReadJsonFile(a.gt));
  const auto dets = RecordsFromJson(ReadJsonFile(a.pred));
  const MetricReport report = Evaluate(gts, dets, cfg.metrics, a.threads);
  const std::string table = FormatReportTable(report);
  if (a.output_dir.empty()) {
    std::cout << DumpJson(ToJson(report)) << table;
  } else {
    fs::create_directories(a.output_dir);
    WriteTextFile(fs::path(a.output_dir) / "report.json", DumpJson(ToJson(report)));
    WriteTextFile(fs::path(a.output_dir) / "report.txt", table);
    std::cout << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera geometry, perspective augmentation, pseudo-domain labels and metrics"};
  app.require_subcommand(1);

  DepthArgs depth;
  auto* depth_cmd = app.add_subcommand("depth-convert", "Metric <-> scale-invariant depth");
  depth_cmd->add_option("--to", depth.to, "scale-invariant | metric")->required();
  depth_cmd->add_option("--value", depth.value, "Depth to convert")->required();
  depth_cmd->add_option("--fx", depth.fx)->required();
  depth_cmd->add_option("--fy", depth.fy)->required();
  auto* c_opt = depth_cmd->add_option("--c", depth.c, "Reference pixel size");
  depth_cmd->add_option("--f-ref", depth.f_ref, "Reference focal length (c = sqrt(2)/f_ref)")
      ->excludes(c_opt);
  depth_cmd->add_option("--dataset", depth.dataset, "nuscenes | waymo | lyft (depth range)");
  depth_cmd->add_option("--min", depth.min_depth);
  depth_cmd->add_option("--max", depth.max_depth);

  SceneArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-scene", "Write a synthetic multi-camera scene");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--cameras", gen.cameras, "5 or 6");
  gen_cmd->add_option("--boxes", gen.boxes);
  gen_cmd->add_option("--rig", gen.rig, "ring | centered");
  gen_cmd->add_option("--output-dir", gen.output_dir, "Write scene.json here instead of stdout");
  gen_cmd->add_flag("--images", gen.images, "Also write one synthetic PGM per camera");

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand("augment", "Perturb camera poses and warp images");
  aug_cmd->add_option("--scene", aug.scene)->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("--config", aug.config)->check(CLI::ExistingFile);
  aug_cmd->add_option("--seed", aug.seed, "Overrides the perturbation seed");
  aug_cmd->add_option("--d-yaw", aug.d_yaw);
  aug_cmd->add_option("--d-pitch", aug.d_pitch);
  aug_cmd->add_option("--d-roll", aug.d_roll);
  aug_cmd->add_option("--output-dir", aug.output_dir)->required();
  aug_cmd->add_option("--threads", aug.threads);
  aug_cmd->add_flag("--synthetic-images", aug.synthetic_images,
                    "Render test images when the scene lists none");

  HomographyArgs hom;
  auto* hom_cmd = app.add_subcommand("homography", "Fit a homography from pairs or a scene camera");
  hom_cmd->add_option("--scene", hom.scene)->check(CLI::ExistingFile);
  hom_cmd->add_option("--camera", hom.camera);
  hom_cmd->add_option("--pairs", hom.pairs)->check(CLI::ExistingFile);
  hom_cmd->add_option("--config", hom.config)->check(CLI::ExistingFile);
  hom_cmd->add_option("--seed", hom.seed);

  BinArgs bin;
  auto* bin_cmd = app.add_subcommand("bin-focal", "Map focal lengths to pseudo-domain labels");
  bin_cmd->add_option("focals", bin.focals)->required();
  bin_cmd->add_option("--alpha", bin.alpha);
  bin_cmd->add_option("--beta", bin.beta);
  bin_cmd->add_option("--k", bin.k, "Number of sub-intervals");
  bin_cmd->add_option("--config", bin.config)->check(CLI::ExistingFile);

  std::string loss_input;
  double lambda = 1.0;
  auto* loss_cmd = app.add_subcommand("ordinal-loss", "Ordinal loss and gradient");
  loss_cmd->add_option("--input", loss_input)->required()->check(CLI::ExistingFile);
  loss_cmd->add_option("--lambda", lambda, "Gradient reversal scale");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "mAP / mATE / mASE / mAOE / NDS*");
  eval_cmd->add_option("--gt", eval.gt)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", eval.pred)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--config", eval.config)->check(CLI::ExistingFile);
  eval_cmd->add_option("--output-dir", eval.output_dir);
  eval_cmd->add_option("--threads", eval.threads);

  auto* self_cmd = app.add_subcommand("selftest", "Run every oracle check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*depth_cmd) return RunDepthConvert(depth);
    if (*gen_cmd) return RunGenScene(gen);
    if (*aug_cmd) return RunAugment(aug);
    if (*hom_cmd) return RunHomography(hom);
    if (*bin_cmd) return RunBinFocal(bin);
    if (*loss_cmd) return RunOrdinalLoss(loss_input, lambda);
    if (*eval_cmd) return RunEvaluate(eval);
    if (*self_cmd) {
      const SelftestReport report = RunSelftest();
      std::cout << FormatSelftest(report);
      return report.AllPassed() ? 0 : kExitCheckFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
