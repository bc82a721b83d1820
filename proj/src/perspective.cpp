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

#include "bevaug/perspective.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bevaug/error.hpp"

namespace bevaug {

void Validate(const PerturbationRange& range) {
  for (double w : {range.d_yaw, range.d_pitch, range.d_roll}) {
    if (!(std::isfinite(w) && w >= 0.0)) {
      throw InvalidArgument("perturbation: half-widths must be finite and >= 0");
    }
  }
}

const char* ToString(HomographyProvenance p) {
  switch (p) {
    case HomographyProvenance::kFitted:
      return "fitted";
    case HomographyProvenance::kAnalytic:
      return "analytic";
    case HomographyProvenance::kIdentityFallback:
      return "identity-fallback";
  }
  return "unknown";
}

Mat3 GaugeNormalize(const Mat3& h) {
  const double norm = h.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateError("homography: zero or non-finite matrix");
  }
  Mat3 out = h / norm;
  double pivot = out(2, 2);
  if (pivot == 0.0) {
    for (int i = 0; i < 9 && pivot == 0.0; ++i) pivot = out(i / 3, i % 3);
  }
  if (pivot < 0.0) out = -out;
  return out;
}

Homography::Homography(const Mat3& h, HomographyProvenance provenance)
    : h_(GaugeNormalize(h)), provenance_(provenance) {
  if (std::abs(h_.determinant()) <= 1e-12) {
    throw DegenerateError("homography: singular matrix");
  }
}

Homography Homography::Identity(HomographyProvenance provenance) {
  return Homography(Mat3::Identity(), provenance);
}

Vec2 Homography::Apply(const Vec2& q) const {
  const Vec3 p = h_ * q.homogeneous();
  if (std::abs(p.z()) <= 1e-15) throw DegenerateError("homography: point maps to infinity");
  return p.hnormalized();
}

Pose PerturbPose(const Pose& pose, const PerturbationRange& range, Rng& rng) {
  Validate(range);
  Pose out = pose;
  const double dy = UniformSymmetric(rng, range.d_yaw);
  const double dp = UniformSymmetric(rng, range.d_pitch);
  const double dr = UniformSymmetric(rng, range.d_roll);
  out.yaw = NormalizeAngle(pose.yaw + dy);
  out.pitch = NormalizeAngle(pose.pitch + dp);
  out.roll = NormalizeAngle(pose.roll + dr);
  return out;
}

MatchedPairSet CollectPairs(const CameraModel& cam, const Pose& perturbed,
                            std::span<const Box3D> boxes) {
  MatchedPairSet out;
  out.camera_id = cam.camera_id;
  const Mat3 rot = CameraFromEgo(cam.pose);
  const Mat3 rot_hat = CameraFromEgo(perturbed);
  const Intrinsics& intr = cam.intrinsics;
  auto visible = [&](const Vec3& x, Vec2& pixel) {
    if (!(x.z() > kDegenerateDepth)) return false;
    pixel = ProjectCameraPoint(intr, x).pixel;
    return InImage(intr, pixel);
  };
  for (const Box3D& box : boxes) {
    for (const Vec3& q : AnchorPoints(box)) {
      PixelPair pair;
      if (!visible(rot * q + cam.pose.translation, pair.original)) continue;
      if (!visible(rot_hat * q + perturbed.translation, pair.perturbed)) continue;
      out.pairs.push_back(pair);
    }
  }
  return out;
}

namespace {

// Similarity moving the centroid to the origin with mean distance sqrt(2).
Mat3 HartleyTransform(std::span<const Vec2> pts) {
  Vec2 centroid = Vec2::Zero();
  for (const Vec2& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const Vec2& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (!(mean_dist > 0.0)) {
    throw DegenerateError("fit_homography: all points coincide (rank 0)");
  }
  const double s = std::sqrt(2.0) / mean_dist;
  Mat3 t;
  t << s, 0.0, -s * centroid.x(),
       0.0, s, -s * centroid.y(),
       0.0, 0.0, 1.0;
  return t;
}

constexpr double kRankTol = 1e-8;

}  // namespace

Homography FitHomography(const MatchedPairSet& pairs) {
  const std::size_t n = pairs.pairs.size();
  if (n < kMinHomographyPairs) {
    return Homography::Identity(HomographyProvenance::kIdentityFallback);
  }
  std::vector<Vec2> src, dst;
  src.reserve(n);
  dst.reserve(n);
  for (const PixelPair& p : pairs.pairs) {
    src.push_back(p.original);
    dst.push_back(p.perturbed);
  }
  const Mat3 t_src = HartleyTransform(src);
  const Mat3 t_dst = HartleyTransform(dst);

  // Each pair contributes two rows of  q_hat x (H q) = 0.
  Eigen::MatrixXd a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 q = t_src * src[i].homogeneous();
    const Vec3 r = t_dst * dst[i].homogeneous();
    const double x = q.x() / q.z(), y = q.y() / q.z();
    const double u = r.x() / r.z(), v = r.y() / r.z();
    a.row(2 * i) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
    a.row(2 * i + 1) << x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, -u;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * sv(0)) ++rank;
  }
  if (rank < 8) {
    throw DegenerateError("fit_homography: degenerate point configuration (rank " +
                          std::to_string(rank) + " < 8)");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Mat3 hn;
  hn << h(0), h(1), h(2),
        h(3), h(4), h(5),
        h(6), h(7), h(8);
  return Homography(t_dst.inverse() * hn * t_src, HomographyProvenance::kFitted);
}

Plane GroundPlaneInCamera(const Pose& pose, double height) {
  const Mat3 rot = CameraFromEgo(pose);
  Vec3 normal = rot * Vec3::UnitZ();
  double distance = height + normal.dot(pose.translation);
  if (std::abs(distance) <= 1e-12) {
    throw DegenerateError("ground plane passes through the camera center");
  }
  if (distance < 0.0) {
    normal = -normal;
    distance = -distance;
  }
  return {normal, distance};
}

RelativeMotion RelativeCameraMotion(const Pose& original, const Pose& perturbed) {
  const Mat3 rot = CameraFromEgo(perturbed) * CameraFromEgo(original).transpose();
  return {rot, perturbed.translation - rot * original.translation};
}

Homography AnalyticHomography(const CameraModel& cam, const Pose& perturbed,
                              const Vec3& plane_normal, double plane_distance) {
  if (!(std::isfinite(plane_distance) && plane_distance > 0.0)) {
    throw InvalidArgument("analytic_homography: plane distance must be > 0");
  }
  const RelativeMotion motion = RelativeCameraMotion(cam.pose, perturbed);
  const Mat3 euclidean =
      motion.rotation + motion.translation * plane_normal.transpose() / plane_distance;
  return Homography(cam.intrinsics.Matrix() * euclidean * cam.intrinsics.Inverse(),
                    HomographyProvenance::kAnalytic);
}

Raster WarpImage(const Raster& image, const Homography& h, int out_width, int out_height) {
  if (out_width <= 0 || out_height <= 0) {
    throw InvalidArgument("warp_image: output size must be positive");
  }
  if (std::abs(h.matrix().determinant()) <= 1e-12) {
    throw DegenerateError("warp_image: singular homography");
  }
  Mat3 inv = h.matrix().inverse();
  if (inv(2, 2) != 0.0) inv /= inv(2, 2);

  constexpr double kEdge = 1e-9;
  const double max_x = image.width - 1, max_y = image.height - 1;
  Raster out(out_width, out_height, image.channels, 0);
  for (int v = 0; v < out_height; ++v) {
    for (int u = 0; u < out_width; ++u) {
      const Vec3 p = inv * Vec3(u, v, 1.0);
      if (!(p.z() > 0.0 || p.z() < 0.0)) continue;
      double x = p.x() / p.z(), y = p.y() / p.z();
      if (!(x >= -kEdge && y >= -kEdge && x <= max_x + kEdge && y <= max_y + kEdge)) continue;
      x = std::clamp(x, 0.0, max_x);
      y = std::clamp(y, 0.0, max_y);
      const int x0 = static_cast<int>(std::floor(x));
      const int y0 = static_cast<int>(std::floor(y));
      const int x1 = std::min(x0 + 1, image.width - 1);
      const int y1 = std::min(y0 + 1, image.height - 1);
      const double ax = x - x0, ay = y - y0;
      for (int c = 0; c < image.channels; ++c) {
        const double top = (1.0 - ax) * image.at(x0, y0, c) + ax * image.at(x1, y0, c);
        const double bottom = (1.0 - ax) * image.at(x0, y1, c) + ax * image.at(x1, y1, c);
        const double value = (1.0 - ay) * top + ay * bottom;
        out.at(u, v, c) = static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

namespace {

CameraAugmentation AugmentCamera(const CameraModel& cam, const Raster& image,
                                 std::span<const Box3D> boxes, const PerturbationRange& range,
                                 std::uint64_t index) {
  Rng rng = ForkRng(range.seed, index);
  CameraAugmentation out;
  out.pose = PerturbPose(cam.pose, range, rng);
  const MatchedPairSet pairs = CollectPairs(cam, out.pose, boxes);
  out.num_pairs = pairs.pairs.size();
  try {
    out.homography = FitHomography(pairs);
  } catch (const DegenerateError&) {
    // Collinear anchors cannot pin down a homography; keep the image as is.
    out.homography = Homography::Identity(HomographyProvenance::kIdentityFallback);
  }
  if (out.homography.provenance() == HomographyProvenance::kIdentityFallback) {
    out.image = image;
  } else {
    out.image = WarpImage(image, out.homography, image.width, image.height);
  }
  return out;
}

}  // namespace

std::vector<CameraAugmentation> AugmentScene(std::span<const CameraModel> rig,
                                             std::span<const Raster> images,
                                             std::span<const Box3D> boxes,
                                             const PerturbationRange& range,
                                             unsigned threads) {
  if (rig.size() != images.size()) {
    throw InvalidArgument("augment_scene: need exactly one image per camera");
  }
  Validate(range);
  const std::size_t n = rig.size();
  std::vector<CameraAugmentation> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      results[i] = AugmentCamera(rig[i], images[i], boxes, range, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned workers = std::min<std::size_t>(std::max(threads, 1u), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace bevaug
