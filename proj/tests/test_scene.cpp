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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"

#include "bevaug/checks/oracles.hpp"
#include "bevaug/error.hpp"
#include "bevaug/scene.hpp"

using namespace bevaug;
namespace fs = std::filesystem;

namespace {

fs::path TempDir() {
  const fs::path dir = fs::temp_directory_path() / "bevaug_test_scene";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scene json round trip") {
  Scene scene = GenerateSyntheticScene(3, 6, 12, "ring");
  scene.image_paths = {"a.pgm", "b.pgm", "c.pgm", "d.pgm", "e.pgm", "f.pgm"};
  scene.boxes[0].score = 0.25;
  const Json j = ToJson(scene);
  CHECK(j.at("schema_version") == kSchemaVersion);
  const Scene back = SceneFromJson(Json::parse(DumpJson(j)));
  CHECK(back == scene);
  CHECK(DumpJson(ToJson(back)) == DumpJson(j));
}

TEST_CASE("scene validation and format errors") {
  Scene scene = GenerateSyntheticScene(3, 5, 2, "ring");
  scene.cameras[1].camera_id = scene.cameras[0].camera_id;
  CHECK_THROWS_AS(Validate(scene), InvalidArgument);

  Json j = ToJson(GenerateSyntheticScene(3, 5, 2, "ring"));
  j["cameras"][0].erase("intrinsics");
  CHECK_THROWS_AS(SceneFromJson(j), FormatError);

  j = ToJson(GenerateSyntheticScene(3, 5, 2, "ring"));
  j["boxes"][0]["dims"] = Json::array({1.0, -2.0, 1.0});
  CHECK_THROWS_AS(SceneFromJson(j), InvalidArgument);

  j = ToJson(GenerateSyntheticScene(3, 5, 2, "ring"));
  j["schema_version"] = 99;
  CHECK_THROWS_AS(SceneFromJson(j), FormatError);

  CHECK_THROWS_AS(RunConfigFromJson(Json::parse(R"({"schema_version": 2})")), FormatError);
  CHECK_THROWS_AS(ReadJsonFile(TempDir() / "missing.json"), FormatError);
  WriteTextFile(TempDir() / "broken.json", "{\"a\": ");
  CHECK_THROWS_AS(ReadJsonFile(TempDir() / "broken.json"), FormatError);
}

TEST_CASE("run config round trip") {
  RunConfig cfg;
  cfg.seed = 17;
  cfg.perturbation = {0.1, 0.02, 0.03, 17};
  cfg.depth = DepthDecouplingConfig::ForDataset("waymo");
  cfg.scheme = MakeScheme(600, 900, 6);
  cfg.metrics.range_limit = 40.0;
  CHECK(RunConfigFromJson(Json::parse(DumpJson(ToJson(cfg)))) == cfg);

  const RunConfig defaults = RunConfigFromJson(Json::object());
  CHECK(defaults == RunConfig{});

  const RunConfig seeded = RunConfigFromJson(Json::parse(R"({"seed": 9, "perturbation": {"d_yaw": 0.1}})"));
  CHECK(seeded.perturbation.seed == 9);
  CHECK(seeded.perturbation.d_yaw == 0.1);

  const RunConfig by_focal = RunConfigFromJson(Json::parse(R"({"depth": {"reference_focal": 500}})"));
  CHECK(by_focal.depth.reference_pixel_size == doctest::Approx(std::sqrt(2.0) / 500.0));

  CHECK_THROWS_AS(RunConfigFromJson(Json::parse(R"({"perturbation": {"d_yaw": -1}})")),
                  InvalidArgument);
  CHECK_THROWS_AS(RunConfigFromJson(Json::parse(R"({"scheme": {"alpha": "x"}})")), FormatError);
}

TEST_CASE("metric report round trip") {
  const auto fx = oracle::ThreeBoxFixture();
  const MetricReport r = Evaluate(fx.gts, fx.dets);
  const Json j = ToJson(r);
  CHECK(MetricReportFromJson(Json::parse(DumpJson(j))) == r);
  CHECK(j.at("match_counts").at("num_tp").get<std::size_t>() == r.num_tp);

  const Json records = RecordsToJson(fx.dets);
  CHECK(RecordsFromJson(Json::parse(DumpJson(records))) == fx.dets);
  CHECK(RecordsFromJson(records.at("records")) == fx.dets);
}

TEST_CASE("homography json") {
  const Json j = ToJson(Homography::Identity(HomographyProvenance::kIdentityFallback));
  CHECK(j.at("provenance") == "identity-fallback");
  CHECK(j.at("h").size() == 9);
}

TEST_CASE("generate_synthetic_scene") {
  CHECK(DumpJson(ToJson(GenerateSyntheticScene(7, 6, 30, "ring"))) ==
        DumpJson(ToJson(GenerateSyntheticScene(7, 6, 30, "ring"))));
  CHECK(DumpJson(ToJson(GenerateSyntheticScene(7, 6, 30, "ring"))) !=
        DumpJson(ToJson(GenerateSyntheticScene(8, 6, 30, "ring"))));

  const Scene empty = GenerateSyntheticScene(1, 5, 0, "ring");
  CHECK_NOTHROW(Validate(empty));
  CHECK(empty.boxes.empty());
  CHECK(empty.cameras.size() == 5);
  std::vector<Raster> images;
  for (const auto& cam : empty.cameras) images.push_back(SyntheticImage(cam.intrinsics, 0));
  for (const auto& a : AugmentScene(empty.cameras, images, empty.boxes, {0.1, 0.02, 0.02, 1})) {
    CHECK(a.homography.provenance() == HomographyProvenance::kIdentityFallback);
  }

  for (const char* style : {"ring", "centered"}) {
    const Scene s = GenerateSyntheticScene(7, 6, 50, style);
    CHECK_NOTHROW(Validate(s));
    for (std::size_t i = 0; i < 6; ++i) {
      const double a = s.cameras[i].pose.yaw;
      const double b = s.cameras[(i + 1) % 6].pose.yaw;
      CHECK(std::abs(NormalizeAngle(b - a) - std::numbers::pi / 3) < 1e-9);
      CHECK(s.cameras[i].intrinsics.fx >= 500.0);
      CHECK(s.cameras[i].intrinsics.fx <= 750.0);
    }
    for (const Box3D& box : s.boxes) CHECK(box.center.head<2>().norm() <= 50.0);
  }

  try {
    GenerateSyntheticScene(7, 6, 5, "grid");
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ring") != std::string::npos);
    CHECK(msg.find("centered") != std::string::npos);
  }
  CHECK_THROWS_AS(GenerateSyntheticScene(7, 4, 5, "ring"), InvalidArgument);
  CHECK_THROWS_AS(GenerateSyntheticScene(7, 6, -1, "ring"), InvalidArgument);
}

TEST_CASE("pnm round trip and errors") {
  const fs::path dir = TempDir();
  Raster gray(5, 3, 1);
  Raster rgb(4, 2, 3);
  for (std::size_t i = 0; i < gray.data.size(); ++i) gray.data[i] = static_cast<std::uint8_t>(i * 17);
  for (std::size_t i = 0; i < rgb.data.size(); ++i) rgb.data[i] = static_cast<std::uint8_t>(255 - i);
  WritePnm(dir / "g.pgm", gray);
  WritePnm(dir / "c.ppm", rgb);
  CHECK(ReadPnm(dir / "g.pgm") == gray);
  CHECK(ReadPnm(dir / "c.ppm") == rgb);

  {
    std::ofstream out(dir / "ascii.pgm");
    out << "P2\n2 2\n255\n0 1 2 3\n";
  }
  CHECK_THROWS_AS(ReadPnm(dir / "ascii.pgm"), FormatError);
  {
    std::ofstream out(dir / "short.pgm", std::ios::binary);
    out << "P5\n4 4\n255\n" << "abc";
  }
  CHECK_THROWS_AS(ReadPnm(dir / "short.pgm"), FormatError);
  {
    std::ofstream out(dir / "deep.pgm", std::ios::binary);
    out << "P5\n1 1\n65535\n" << "ab";
  }
  CHECK_THROWS_AS(ReadPnm(dir / "deep.pgm"), FormatError);
  CHECK_THROWS_AS(ReadPnm(dir / "none.pgm"), FormatError);
}
