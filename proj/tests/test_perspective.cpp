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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "bevaug/checks/oracles.hpp"
#include "bevaug/error.hpp"
#include "bevaug/perspective.hpp"
#include "bevaug/scene.hpp"

using namespace bevaug;

namespace {

bool Near(const Vec3& a, const Vec3& b, double tol = 1e-12) { return (a - b).norm() <= tol; }

bool ContainsPoint(const std::array<Vec3, 5>& pts, const Vec3& p) {
  return std::any_of(pts.begin(), pts.end(), [&](const Vec3& q) { return Near(q, p); });
}

CameraModel FrontCamera() {
  CameraModel cam;
  cam.camera_id = "front";
  cam.intrinsics = {600.0, 600.0, 352.0, 128.0, 704, 256};
  cam.pose.translation = -(CameraFromEgo(cam.pose) * Vec3(1.5, 0.0, 1.6));
  return cam;
}

Box3D CarAt(double x, double y, double yaw = 0.0) {
  Box3D box;
  box.center = Vec3(x, y, 0.8);
  box.dims = Vec3(4.2, 1.9, 1.6);
  box.yaw = yaw;
  return box;
}

Mat3 Translation(double tx, double ty) {
  Mat3 h = Mat3::Identity();
  h(0, 2) = tx;
  h(1, 2) = ty;
  return h;
}

}  // namespace

TEST_CASE("bottom_points") {
  Box3D box;
  box.center = Vec3(0.0, 0.0, 1.0);
  box.dims = Vec3(4.0, 2.0, 2.0);
  const auto pts = BottomPoints(box);
  CHECK(Near(pts[0], Vec3(0.0, 0.0, 0.0)));
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) CHECK(ContainsPoint(pts, Vec3(2.0 * sx, 1.0 * sy, 0.0)));
  }

  box.yaw = std::numbers::pi / 2;
  const auto turned = BottomPoints(box);
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) CHECK(ContainsPoint(turned, Vec3(1.0 * sx, 2.0 * sy, 0.0)));
  }

  Box3D flat = box;
  flat.dims.z() = 0.0;
  CHECK(Near(BottomPoints(flat)[0], flat.center));
}

TEST_CASE("perturb_pose") {
  const Pose pose{0.4, -0.02, 0.01, Vec3(0.1, 1.5, -0.3)};
  Rng rng = ForkRng(1, 0);
  CHECK(PerturbPose(pose, PerturbationRange{}, rng) == pose);

  const PerturbationRange range{0.1, 0.02, 0.03, 99};
  Rng a = ForkRng(range.seed, 3), b = ForkRng(range.seed, 3);
  const Pose pa = PerturbPose(pose, range, a);
  const Pose pb = PerturbPose(pose, range, b);
  CHECK(pa == pb);
  CHECK(pa.translation == pose.translation);
  CHECK(std::abs(pa.yaw - pose.yaw) <= 0.1);
  CHECK(std::abs(pa.pitch - pose.pitch) <= 0.02);
  CHECK(std::abs(pa.roll - pose.roll) <= 0.03);

  CHECK_THROWS_AS(PerturbPose(pose, PerturbationRange{-0.1, 0, 0, 0}, rng), InvalidArgument);
}

TEST_CASE("perturb_pose draws are uniform on the symmetric interval") {
  const PerturbationRange range{0.0, 0.02, 0.0, 5};
  Rng rng = ForkRng(range.seed, 0);
  const int n = 10000;
  double lo = 1.0, hi = -1.0, sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = PerturbPose(Pose{}, range, rng).pitch;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    sum += d;
  }
  const double sigma_mean = 0.02 / std::sqrt(3.0) / std::sqrt(static_cast<double>(n));
  CHECK(lo >= -0.02);
  CHECK(hi <= 0.02);
  CHECK(std::abs(sum / n) <= 3.0 * sigma_mean);
  // Spread reaches both ends.
  CHECK(lo < -0.0199);
  CHECK(hi > 0.0199);
}

TEST_CASE("perturbed angles wrap into (-pi, pi]") {
  const Pose pose{std::numbers::pi - 0.01, 0.0, 0.0, Vec3::Zero()};
  Rng rng = ForkRng(8, 0);
  for (int i = 0; i < 100; ++i) {
    const Pose p = PerturbPose(pose, {0.5, 0.0, 0.0, 0}, rng);
    REQUIRE(p.yaw > -std::numbers::pi);
    REQUIRE(p.yaw <= std::numbers::pi);
  }
}

TEST_CASE("collect_pairs") {
  const CameraModel cam = FrontCamera();
  const std::vector<Box3D> boxes{CarAt(15.0, 0.0), CarAt(25.0, 3.0, 0.4), CarAt(30.0, -4.0, -1.0)};

  const MatchedPairSet same = CollectPairs(cam, cam.pose, boxes);
  CHECK(same.camera_id == "front");
  CHECK(same.pairs.size() == 15);
  for (const PixelPair& p : same.pairs) CHECK(p.original == p.perturbed);

  const std::vector<Box3D> behind{CarAt(-20.0, 0.0)};
  CHECK(CollectPairs(cam, cam.pose, behind).pairs.empty());

  Pose turned = cam.pose;
  turned.yaw += 0.05;
  const MatchedPairSet pairs = CollectPairs(cam, turned, boxes);
  const auto brute = oracle::BruteForcePairs(cam, turned, boxes);
  CHECK(pairs.pairs.size() <= 15);
  REQUIRE(pairs.pairs.size() == brute.size());
  for (std::size_t i = 0; i < brute.size(); ++i) {
    CHECK((pairs.pairs[i].original - brute[i].original).norm() < 1e-9);
    CHECK((pairs.pairs[i].perturbed - brute[i].perturbed).norm() < 1e-9);
    CHECK(InImage(cam.intrinsics, pairs.pairs[i].original));
    CHECK(InImage(cam.intrinsics, pairs.pairs[i].perturbed));
  }

  // A large yaw swing pushes some anchors out of the perturbed view.
  Pose swung = cam.pose;
  swung.yaw += 0.45;
  const auto partial = CollectPairs(cam, swung, boxes);
  CHECK(partial.pairs.size() < 15);
  CHECK(partial.pairs.size() == oracle::BruteForcePairs(cam, swung, boxes).size());
}

TEST_CASE("collect_pairs matches brute force on random cases") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    oracle::RotationCase c = oracle::RandomRotationCase(500 + s, 0.3, 0.1, 0.1);
    c.camera.pose.translation = Vec3(0.2, -1.0, 0.4);
    c.perturbed.translation = c.camera.pose.translation;
    const auto got = CollectPairs(c.camera, c.perturbed, c.boxes);
    const auto want = oracle::BruteForcePairs(c.camera, c.perturbed, c.boxes);
    REQUIRE(got.pairs.size() == want.size());
  }
}

TEST_CASE("gauge normalization") {
  Mat3 h;
  h << 2.0, 0.1, 3.0, -0.2, 1.5, 4.0, 0.001, 0.002, -1.0;
  const Mat3 g = GaugeNormalize(h);
  CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(2, 2) > 0.0);
  for (double s : {-3.0, 0.25, 1e6}) CHECK((GaugeNormalize(s * h) - g).norm() < 1e-15);

  Mat3 zero_corner = Mat3::Identity();
  zero_corner(2, 2) = 0.0;
  zero_corner(2, 0) = 1.0;
  zero_corner(0, 0) = -1.0;
  CHECK(GaugeNormalize(zero_corner)(0, 0) > 0.0);
  CHECK_THROWS_AS(GaugeNormalize(Mat3::Zero()), DegenerateError);

  Mat3 singular = Mat3::Ones();
  CHECK_THROWS_AS(Homography(singular, HomographyProvenance::kFitted), DegenerateError);
}

TEST_CASE("fit_homography recovers a pure-rotation homography from four pairs") {
  CameraModel cam = FrontCamera();
  cam.pose.translation = Vec3::Zero();
  Pose perturbed = cam.pose;
  perturbed.yaw += 0.03;
  perturbed.pitch -= 0.02;
  perturbed.roll += 0.01;
  const Homography analytic = AnalyticHomography(cam, perturbed, Vec3(0, 1, 0), 2.0);

  MatchedPairSet set;
  for (const Vec2& q : {Vec2(100, 50), Vec2(600, 40), Vec2(620, 220), Vec2(90, 200)}) {
    set.pairs.push_back({q, analytic.Apply(q)});
  }
  const Homography fitted = FitHomography(set);
  CHECK(fitted.provenance() == HomographyProvenance::kFitted);
  CHECK((fitted.matrix() - analytic.matrix()).norm() < 1e-6);

  // Pair order does not matter.
  std::reverse(set.pairs.begin(), set.pairs.end());
  CHECK((FitHomography(set).matrix() - fitted.matrix()).norm() < 1e-9);
}

TEST_CASE("fit_homography fallback and degeneracy") {
  MatchedPairSet three;
  three.pairs = {{Vec2(0, 0), Vec2(1, 1)}, {Vec2(10, 0), Vec2(11, 1)}, {Vec2(0, 10), Vec2(1, 11)}};
  const Homography h = FitHomography(three);
  CHECK(h.provenance() == HomographyProvenance::kIdentityFallback);
  CHECK(h.matrix() == GaugeNormalize(Mat3::Identity()));
  CHECK(FitHomography(MatchedPairSet{}).provenance() == HomographyProvenance::kIdentityFallback);

  MatchedPairSet collinear;
  for (double t : {0.0, 1.0, 2.0, 5.0}) {
    collinear.pairs.push_back({Vec2(10 + 3 * t, 20 + t), Vec2(12 + 3 * t, 21 + t)});
  }
  CHECK_THROWS_AS(FitHomography(collinear), DegenerateError);
  try {
    FitHomography(collinear);
  } catch (const DegenerateError& e) {
    CHECK(std::string(e.what()).find("rank") != std::string::npos);
  }

  MatchedPairSet coincident;
  for (int i = 0; i < 5; ++i) coincident.pairs.push_back({Vec2(3, 3), Vec2(4, 4)});
  CHECK_THROWS_AS(FitHomography(coincident), DegenerateError);
}

TEST_CASE("fit_homography on a translation") {
  MatchedPairSet set;
  for (const Vec2& q : {Vec2(0, 0), Vec2(100, 0), Vec2(100, 80), Vec2(0, 80), Vec2(40, 30)}) {
    set.pairs.push_back({q, q + Vec2(10, -4)});
  }
  const Homography h = FitHomography(set);
  CHECK((h.matrix() - GaugeNormalize(Translation(10, -4))).norm() < 1e-9);
}

TEST_CASE("analytic_homography") {
  const CameraModel cam = FrontCamera();
  const Homography same = AnalyticHomography(cam, cam.pose, Vec3(0, 1, 0), 1.6);
  CHECK((same.matrix() - GaugeNormalize(Mat3::Identity())).norm() < 1e-14);
  CHECK(same.provenance() == HomographyProvenance::kAnalytic);

  CameraModel centered = cam;
  centered.pose.translation = Vec3::Zero();
  Pose perturbed = centered.pose;
  perturbed.yaw += 0.04;
  perturbed.roll -= 0.02;
  const Mat3 k = centered.intrinsics.Matrix();
  const Mat3 rel = CameraFromEgo(perturbed) * CameraFromEgo(centered.pose).transpose();
  const Mat3 expected = GaugeNormalize(k * rel * k.inverse());
  for (const auto& [n, d] : {std::pair{Vec3(0, 1, 0), 1.6}, {Vec3(0, 0, 1), 30.0},
                             {Vec3(0.6, 0.0, 0.8), 7.0}}) {
    CHECK((AnalyticHomography(centered, perturbed, n, d).matrix() - expected).norm() < 1e-12);
  }

  CHECK_THROWS_AS(AnalyticHomography(cam, cam.pose, Vec3(0, 1, 0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(AnalyticHomography(cam, cam.pose, Vec3(0, 1, 0), -1.0), InvalidArgument);
}

TEST_CASE("analytic_homography maps ground points with a translated camera") {
  const CameraModel cam = FrontCamera();
  Pose perturbed = cam.pose;
  perturbed.yaw += 0.06;
  perturbed.pitch += 0.03;
  const Plane ground = GroundPlaneInCamera(cam.pose);
  CHECK(ground.distance == doctest::Approx(1.6));
  const Homography h = AnalyticHomography(cam, perturbed, ground.normal, ground.distance);
  const RelativeMotion motion = RelativeCameraMotion(cam.pose, perturbed);
  CHECK(motion.translation.norm() > 1e-3);

  for (const Box3D& box : {CarAt(12, 1), CarAt(20, -3, 0.5), CarAt(35, 4, 2.0)}) {
    for (const Vec3& q : BottomPoints(box)) {
      const Vec2 a = ProjectPoint(cam, q).pixel;
      CameraModel moved = cam;
      moved.pose = perturbed;
      const Vec2 b = ProjectPoint(moved, q).pixel;
      CHECK((h.Apply(a) - b).norm() < 1e-9);
    }
  }

  CameraModel on_ground = cam;
  on_ground.pose.translation = Vec3::Zero();
  CHECK_THROWS_AS(GroundPlaneInCamera(on_ground.pose), DegenerateError);
}

TEST_CASE("pure rotation fit reprojects every pair") {
  int checked = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto c = oracle::RandomRotationCase(9000 + s, 0.1, 0.05, 0.05);
    const auto pairs = CollectPairs(c.camera, c.perturbed, c.boxes);
    if (pairs.pairs.size() < 8) continue;
    const Homography h = FitHomography(pairs);
    for (const PixelPair& p : pairs.pairs) {
      REQUIRE((h.Apply(p.original) - p.perturbed).norm() <= 1e-6);
    }
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("warp_image") {
  const Intrinsics intr{600.0, 600.0, 352.0, 128.0, 704, 256};
  const Raster image = SyntheticImage(intr, 3);

  const Raster same = WarpImage(image, Homography::Identity(HomographyProvenance::kAnalytic),
                                image.width, image.height);
  CHECK(same == image);

  const Homography shift(Translation(10.0, 0.0), HomographyProvenance::kAnalytic);
  const Raster shifted = WarpImage(image, shift, image.width, image.height);
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < 10; ++u) REQUIRE(shifted.at(u, v) == 0);
    for (int u = 10; u < image.width; ++u) REQUIRE(shifted.at(u, v) == image.at(u - 10, v));
  }

  Raster rgb(8, 6, 3);
  for (std::size_t i = 0; i < rgb.data.size(); ++i) rgb.data[i] = static_cast<std::uint8_t>(i * 7);
  CHECK(WarpImage(rgb, Homography::Identity(HomographyProvenance::kFitted), 8, 6) == rgb);
  CHECK_THROWS_AS(WarpImage(rgb, shift, 0, 6), InvalidArgument);
}

TEST_CASE("warp round trip stays within two intensity levels") {
  const Intrinsics intr{600.0, 600.0, 352.0, 128.0, 704, 256};
  const Raster image = SyntheticImage(intr, 4);
  Mat3 rot = EulerToRotation(0.02, -0.015, 0.01);
  const Mat3 k = intr.Matrix();
  const Homography h(k * rot * k.inverse(), HomographyProvenance::kAnalytic);
  const Homography back(k * rot.transpose() * k.inverse(), HomographyProvenance::kAnalytic);

  const Raster there = WarpImage(image, h, image.width, image.height);
  const Raster again = WarpImage(there, back, image.width, image.height);
  const double margin = 2.0;
  auto inside = [&](const Vec2& p) {
    return p.x() >= margin && p.y() >= margin && p.x() <= image.width - 1 - margin &&
           p.y() <= image.height - 1 - margin;
  };
  int worst = 0, counted = 0;
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const Vec2 p(u, v);
      if (!inside(p) || !inside(h.Apply(p))) continue;
      worst = std::max(worst, std::abs(int(again.at(u, v)) - int(image.at(u, v))));
      ++counted;
    }
  }
  CHECK(counted > image.width * image.height / 2);
  CHECK(worst <= 2);
}

TEST_CASE("augment_scene") {
  const Scene scene = GenerateSyntheticScene(7, 6, 40, "ring");
  std::vector<Raster> images;
  for (std::size_t i = 0; i < scene.cameras.size(); ++i) {
    images.push_back(SyntheticImage(scene.cameras[i].intrinsics, i));
  }

  const auto unchanged = AugmentScene(scene.cameras, images, scene.boxes, PerturbationRange{});
  REQUIRE(unchanged.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(unchanged[i].image == images[i]);
    CHECK(unchanged[i].pose == scene.cameras[i].pose);
  }

  const PerturbationRange range{0.05, 0.02, 0.02, 123};
  const auto first = AugmentScene(scene.cameras, images, scene.boxes, range, 1);
  const auto second = AugmentScene(scene.cameras, images, scene.boxes, range, 1);
  const auto parallel = AugmentScene(scene.cameras, images, scene.boxes, range, 4);
  int fitted = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(first[i].image == second[i].image);
    CHECK(first[i].image == parallel[i].image);
    CHECK(first[i].pose == parallel[i].pose);
    CHECK(first[i].homography.matrix() == parallel[i].homography.matrix());
    if (first[i].homography.provenance() == HomographyProvenance::kFitted) ++fitted;
  }
  CHECK(fitted > 0);

  // Boxes visible only in front: side and rear cameras fall back.
  std::vector<Box3D> front_only{CarAt(15, 0), CarAt(22, 2, 0.3)};
  const auto sparse = AugmentScene(scene.cameras, images, front_only, range);
  CHECK(sparse[0].homography.provenance() == HomographyProvenance::kFitted);
  for (std::size_t i = 2; i < 5; ++i) {
    CHECK(sparse[i].homography.provenance() == HomographyProvenance::kIdentityFallback);
    CHECK(sparse[i].num_pairs < kMinHomographyPairs);
    CHECK(sparse[i].image == images[i]);
    CHECK(sparse[i].pose != scene.cameras[i].pose);
  }

  CHECK_THROWS_AS(AugmentScene(scene.cameras, std::span(images).first(3), scene.boxes, range),
                  InvalidArgument);
}
