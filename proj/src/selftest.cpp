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

#include "bevaug/checks/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "bevaug/camera.hpp"
#include "bevaug/checks/oracles.hpp"
#include "bevaug/depth.hpp"
#include "bevaug/error.hpp"
#include "bevaug/metrics.hpp"
#include "bevaug/ordinal.hpp"
#include "bevaug/perspective.hpp"
#include "bevaug/rng.hpp"

namespace bevaug {

namespace {

constexpr std::uint64_t kSeed = 20240611;

std::string Fmt(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

// Each check returns its detail string and sets `ok`.
using Check = std::function<std::string(bool& ok)>;

std::string EulerRoundTrip(bool& ok) {
  Rng rng = ForkRng(kSeed, 1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double yaw = UniformSymmetric(rng, std::numbers::pi * 0.999);
    const double pitch = UniformSymmetric(rng, std::numbers::pi / 2 - 1e-3);
    const double roll = UniformSymmetric(rng, std::numbers::pi * 0.999);
    const Mat3 r = EulerToRotation(yaw, pitch, roll);
    const EulerAngles e = RotationToEuler(r);
    worst = std::max({worst, std::abs(e.yaw - yaw), std::abs(e.pitch - pitch),
                      std::abs(e.roll - roll),
                      (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff()});
  }
  ok = worst <= 1e-9;
  return Fmt("1000 samples, max error %.3g", worst);
}

std::string ProjectionExamples(bool& ok) {
  CameraModel cam;
  cam.intrinsics = {1000.0, 1000.0, 352.0, 128.0, 704, 256};
  // Identity pose: ego +x is the optical axis, ego -y is camera +x.
  const Projection a = ProjectPoint(cam, Vec3(10.0, 0.0, 0.0));
  const Projection b = ProjectPoint(cam, Vec3(10.0, -1.0, 0.0));
  const double err = std::max({(a.pixel - Vec2(352.0, 128.0)).norm(), std::abs(a.depth - 10.0),
                               (b.pixel - Vec2(452.0, 128.0)).norm(), std::abs(b.depth - 10.0)});
  ok = err <= 1e-12 && ProjectPoint(cam, Vec3(-5.0, 0.0, 0.0)).depth < 0.0;
  return Fmt("max error %.3g px", err);
}

std::string PixelSizeCheck(bool& ok) {
  const double a = PixelSize({1000.0, 1000.0, 0.0, 0.0, 1, 1});
  const double b = PixelSize({3.0, 4.0, 0.0, 0.0, 1, 1});
  ok = std::abs(a - 1.41421356e-3) < 1e-11 && std::abs(b - 5.0 / 12.0) < 1e-15;
  return Fmt("s(1000,1000)=%.10g s(3,4)=%.10g", a, b);
}

std::string DepthRoundTrip(bool& ok) {
  Rng rng = ForkRng(kSeed, 2);
  const DepthDecouplingConfig cfg = DepthDecouplingConfig::FromReferenceFocal();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Intrinsics intr{UniformRange(rng, 200.0, 3000.0), UniformRange(rng, 200.0, 3000.0),
                          0.0, 0.0, 1, 1};
    const double dm = UniformRange(rng, cfg.min_depth, cfg.max_depth);
    const double back = ScaleInvariantToMetric(MetricToScaleInvariant(dm, intr, cfg), intr, cfg);
    worst = std::max(worst, std::abs(back - dm) / dm);
  }
  ok = worst <= 1e-12;
  return Fmt("1000 samples, max relative error %.3g", worst);
}

std::string SizeDepthInvariance(bool& ok) {
  const DepthDecouplingConfig cfg = DepthDecouplingConfig::FromReferenceFocal();
  const double height = 1.5, depth = 30.0;
  const double expected = oracle::SizeDepthInvariant(height, cfg.reference_pixel_size);
  double worst = 0.0;
  for (double f : {400.0, 800.0, 1600.0}) {
    const Intrinsics intr{f, f, 352.0, 128.0, 704, 256};
    const double top = ProjectCameraPoint(intr, Vec3(0.0, -height, depth)).pixel.y();
    const double bottom = ProjectCameraPoint(intr, Vec3(0.0, 0.0, depth)).pixel.y();
    const double product = (bottom - top) * MetricToScaleInvariant(depth, intr, cfg);
    worst = std::max(worst, std::abs(product - expected));
  }
  ok = worst <= 1e-9;
  return Fmt("focal 400/800/1600, max deviation %.3g", worst);
}

std::string ResizeConsistency(bool& ok) {
  const Intrinsics intr{800.0, 780.0, 352.0, 128.0, 704, 256};
  const Intrinsics half = ResizeIntrinsics(intr, 0.5, 0.75);
  const Vec3 x(1.3, -0.4, 12.0);
  const Vec2 p = ProjectCameraPoint(intr, x).pixel;
  const Vec2 q = ProjectCameraPoint(half, x).pixel;
  const double err = (q - Vec2(0.5 * p.x(), 0.75 * p.y())).norm();
  ok = err <= 1e-9 && half.width == 352 && half.height == 192;
  return Fmt("pixel error %.3g", err);
}

std::string SchemeThresholds(bool& ok) {
  const OrdinalDomainScheme nus = MakeScheme(500.0, 750.0, 5);
  const OrdinalDomainScheme waymo = MakeScheme(600.0, 900.0, 6);
  const OrdinalDomainScheme lyft = MakeScheme(500.0, 650.0, 3);
  const OrdinalDomainScheme fig = MakeScheme(500.0, 700.0, 4);
  ok = nus.thresholds == std::vector<double>{500, 550, 600, 650, 700, 750} &&
       waymo.thresholds == std::vector<double>{600, 650, 700, 750, 800, 850, 900} &&
       lyft.thresholds == std::vector<double>{500, 550, 600, 650} &&
       fig.num_thresholds() == 5 && fig.num_categories() == 6 &&
       static_cast<int>(fig.thresholds.size()) == 5;
  return "nuScenes/Waymo/Lyft threshold lists and the 4-sub-interval scheme";
}

std::string UniformLoss(bool& ok) {
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const std::vector<double> logits(2 * (k + 1), 0.37);
    for (int label = 0; label <= k + 1; ++label) {
      worst = std::max(worst, std::abs(OrdinalLoss(logits, label) - (k + 1) * std::log(2.0)));
    }
  }
  ok = worst <= 1e-12;
  return Fmt("max |loss - (K+1) ln 2| = %.3g", worst);
}

std::string GradientCheck(bool& ok) {
  Rng rng = ForkRng(kSeed, 3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int k = 1 + static_cast<int>(rng() % 7);
    std::vector<double> logits(2 * (k + 1));
    for (double& y : logits) y = UniformSymmetric(rng, 4.0);
    const int label = static_cast<int>(rng() % (k + 2));
    const auto fd = oracle::CentralDifferences(
        [&](std::span<const double> y) { return OrdinalLoss(y, label); }, logits, 1e-5);
    worst = std::max(worst, oracle::RelativeError(OrdinalLossGrad(logits, label), fd));
  }
  ok = worst < 1e-5;
  return Fmt("100 cases, max relative error %.3g", worst);
}

std::string PairsBruteForce(bool& ok) {
  Rng rng = ForkRng(kSeed, 4);
  std::size_t total = 0;
  ok = true;
  for (std::uint64_t s = 0; s < 50; ++s) {
    oracle::RotationCase c = oracle::RandomRotationCase(kSeed + s, 0.1, 0.05, 0.05);
    c.camera.pose.translation = Vec3(UniformSymmetric(rng, 1.0), UniformSymmetric(rng, 1.0),
                                     UniformSymmetric(rng, 1.0));
    c.perturbed.translation = c.camera.pose.translation;
    const MatchedPairSet got = CollectPairs(c.camera, c.perturbed, c.boxes);
    const std::vector<PixelPair> want = oracle::BruteForcePairs(c.camera, c.perturbed, c.boxes);
    if (got.pairs.size() != want.size()) {
      ok = false;
      continue;
    }
    for (std::size_t i = 0; i < want.size(); ++i) {
      if ((got.pairs[i].original - want[i].original).norm() > 1e-9 ||
          (got.pairs[i].perturbed - want[i].perturbed).norm() > 1e-9) {
        ok = false;
      }
    }
    total += want.size();
  }
  return Fmt("50 scenes, %.0f pairs", static_cast<double>(total));
}

std::string DltVsAnalytic(bool& ok) {
  double worst = 0.0;
  int cases = 0, degenerate = 0;
  for (std::uint64_t s = 0; cases < 200 && s < 10000; ++s) {
    const oracle::RotationCase c = oracle::RandomRotationCase(kSeed + 1000 + s, 0.1, 0.05, 0.05);
    const MatchedPairSet pairs = CollectPairs(c.camera, c.perturbed, c.boxes);
    if (pairs.pairs.size() < kMinHomographyPairs) continue;
    Homography fitted;
    try {
      fitted = FitHomography(pairs);
    } catch (const DegenerateError&) {
      ++degenerate;  // e.g. bottom center collinear with two opposite corners
      continue;
    }
    const Homography analytic = AnalyticHomography(c.camera, c.perturbed, Vec3(0.0, 1.0, 0.0), 1.6);
    worst = std::max(worst, (fitted.matrix() - analytic.matrix()).norm());
    ++cases;
  }
  ok = cases == 200 && worst <= 1e-6;
  return Fmt("%.0f cases, max Frobenius gap %.3g", cases, worst) +
         Fmt(", %.0f degenerate layouts skipped", degenerate);
}

std::string IdentityFallback(bool& ok) {
  MatchedPairSet three;
  three.pairs = {{Vec2(1, 2), Vec2(3, 4)}, {Vec2(10, 2), Vec2(13, 4)}, {Vec2(1, 20), Vec2(3, 40)}};
  const Homography h = FitHomography(three);
  ok = h.provenance() == HomographyProvenance::kIdentityFallback &&
       h.matrix() == GaugeNormalize(Mat3::Identity());
  return "3 pairs -> identity fallback";
}

std::string PlaneHomography(bool& ok) {
  Rng rng = ForkRng(kSeed, 5);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    CameraModel cam;
    cam.intrinsics = {UniformRange(rng, 500, 1000), UniformRange(rng, 500, 1000), 352, 128, 704, 256};
    cam.pose.yaw = UniformSymmetric(rng, 3.0);
    cam.pose.pitch = UniformSymmetric(rng, 0.05);
    const Vec3 center(UniformSymmetric(rng, 2.0), UniformSymmetric(rng, 1.0), 1.6);
    cam.pose.translation = -(CameraFromEgo(cam.pose) * center);
    Pose perturbed = cam.pose;
    perturbed.yaw += UniformSymmetric(rng, 0.08);
    perturbed.pitch += UniformSymmetric(rng, 0.04);
    perturbed.roll += UniformSymmetric(rng, 0.04);
    const Plane ground = GroundPlaneInCamera(cam.pose);
    const Homography h = AnalyticHomography(cam, perturbed, ground.normal, ground.distance);
    const Mat3 rot = CameraFromEgo(cam.pose), rot_hat = CameraFromEgo(perturbed);
    for (int j = 0; j < 20; ++j) {
      const double dist = UniformRange(rng, 5.0, 40.0);
      const double bearing = cam.pose.yaw + UniformSymmetric(rng, 0.4);
      const Vec3 q(center.x() + dist * std::cos(bearing), center.y() + dist * std::sin(bearing), 0.0);
      const Vec3 x1 = rot * q + cam.pose.translation;
      const Vec3 x2 = rot_hat * q + perturbed.translation;
      const Vec2 a = ProjectCameraPoint(cam.intrinsics, x1).pixel;
      const Vec2 b = ProjectCameraPoint(cam.intrinsics, x2).pixel;
      worst = std::max(worst, (h.Apply(a) - b).norm());
    }
  }
  ok = worst <= 1e-9;
  return Fmt("1000 ground points, max residual %.3g px", worst);
}

std::string NdsGolden(bool& ok) {
  double worst = 0.0;
  for (const oracle::NdsRow& r : oracle::PublishedNdsRows()) {
    worst = std::max(worst, std::abs(NdsStar(r.map, r.mate, r.mase, r.maoe) - r.printed));
  }
  ok = worst <= 0.005 && oracle::PublishedNdsRows().size() >= 12;
  return Fmt("%.0f rows, max deviation %.4f", static_cast<double>(oracle::PublishedNdsRows().size()),
             worst);
}

std::string ApEnumeration(bool& ok) {
  Rng rng = ForkRng(kSeed, 6);
  const MetricConfig cfg;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<DetectionRecord> gts, dets;
    const int ng = 1 + static_cast<int>(rng() % 8);
    const int nd = static_cast<int>(rng() % 12);
    for (int g = 0; g < ng; ++g) {
      Box3D b;
      b.center = Vec3(UniformSymmetric(rng, 20.0), UniformSymmetric(rng, 20.0), 0.8);
      gts.push_back({b, "s" + std::to_string(rng() % 2)});
    }
    for (int d = 0; d < nd; ++d) {
      Box3D b = gts[rng() % gts.size()].box;
      b.center += Vec3(UniformSymmetric(rng, 3.0), UniformSymmetric(rng, 3.0), 0.0);
      b.score = std::floor(UniformRange(rng, 0.0, 1.0) * 10.0) / 10.0;  // ties on purpose
      dets.push_back({b, "s" + std::to_string(rng() % 2)});
    }
    for (double th : cfg.distance_thresholds) {
      const double got = AveragePrecision(gts, dets, th, cfg);
      const double want =
          oracle::EnumeratedAveragePrecision(gts, dets, th, cfg.recall_floor, cfg.precision_floor);
      worst = std::max(worst, std::abs(got - want));
    }
  }
  ok = worst <= 1e-12;
  return Fmt("100 random instances x 4 thresholds, max gap %.3g", worst);
}

std::string MetricsFixtureCheck(bool& ok) {
  const oracle::MetricsFixture f = oracle::ThreeBoxFixture();
  const MetricReport r = Evaluate(f.gts, f.dets);
  const double err = std::max({std::abs(r.mAP - f.map), std::abs(r.mATE - f.mate),
                               std::abs(r.mASE - f.mase), std::abs(r.mAOE - f.maoe),
                               std::abs(r.nds_star - f.nds_star)});
  ok = err <= 1e-12;
  return Fmt("max deviation %.3g", err);
}

}  // namespace

bool SelftestReport::AllPassed() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

SelftestReport RunSelftest() {
  const std::vector<std::pair<const char*, Check>> checks = {
      {"camera.euler_round_trip", EulerRoundTrip},
      {"camera.projection", ProjectionExamples},
      {"depth.pixel_size", PixelSizeCheck},
      {"depth.round_trip", DepthRoundTrip},
      {"depth.size_depth_invariance", SizeDepthInvariance},
      {"depth.resize_projection", ResizeConsistency},
      {"ordinal.scheme_thresholds", SchemeThresholds},
      {"ordinal.uniform_loss", UniformLoss},
      {"ordinal.gradient_finite_difference", GradientCheck},
      {"perspective.pairs_brute_force", PairsBruteForce},
      {"perspective.dlt_vs_analytic", DltVsAnalytic},
      {"perspective.identity_fallback", IdentityFallback},
      {"perspective.plane_homography", PlaneHomography},
      {"metrics.nds_star_golden", NdsGolden},
      {"metrics.ap_enumeration", ApEnumeration},
      {"metrics.three_box_fixture", MetricsFixtureCheck},
  };
  SelftestReport report;
  for (const auto& [name, check] : checks) {
    CheckResult result{name, false, {}};
    try {
      result.detail = check(result.passed);
    } catch (const std::exception& e) {
      result.passed = false;
      result.detail = std::string("exception: ") + e.what();
    }
    report.checks.push_back(std::move(result));
  }
  return report;
}

std::string FormatSelftest(const SelftestReport& report) {
  std::ostringstream out;
  int failed = 0;
  for (const CheckResult& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    if (!c.passed) ++failed;
  }
  out << report.checks.size() - failed << "/" << report.checks.size() << " checks passed\n";
  return out.str();
}

}  // namespace bevaug
