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

#include "bevaug/checks/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "bevaug/rng.hpp"

namespace bevaug::oracle {

namespace {

// Target-domain and non-nuScenes source-domain rows of the cross-domain
// table, plus the BEVDet nuScenes -> Waymo table.
constexpr NdsRow kRows[] = {
    {"nus->waymo oracle", 0.552, 0.528, 0.148, 0.085, 0.649},
    {"nus->waymo source-only", 0.040, 1.303, 0.265, 0.790, 0.178},
    {"nus->waymo cam-convs", 0.045, 1.301, 0.253, 0.773, 0.185},
    {"nus->waymo ours", 0.297, 0.822, 0.216, 0.372, 0.415},
    {"waymo->nus oracle", 0.475, 0.577, 0.177, 0.147, 0.587},
    {"waymo->nus source-only (src)", 0.552, 0.528, 0.148, 0.085, 0.649},
    {"waymo->nus source-only", 0.032, 1.305, 0.768, 0.532, 0.133},
    {"waymo->nus cam-convs (src)", 0.549, 0.532, 0.148, 0.080, 0.648},
    {"waymo->nus cam-convs", 0.038, 1.308, 0.316, 0.506, 0.215},
    {"waymo->nus ours (src)", 0.568, 0.519, 0.149, 0.078, 0.660},
    {"waymo->nus ours", 0.303, 0.689, 0.218, 0.171, 0.472},
    {"nus->lyft oracle", 0.602, 0.471, 0.152, 0.078, 0.684},
    {"nus->lyft source-only", 0.112, 0.997, 0.176, 0.389, 0.296},
    {"nus->lyft cam-convs", 0.145, 0.999, 0.173, 0.368, 0.316},
    {"nus->lyft ours", 0.287, 0.771, 0.170, 0.302, 0.437},
    {"lyft->nus oracle", 0.401, 0.651, 0.179, 0.484, 0.482},
    {"lyft->nus source-only (src)", 0.602, 0.471, 0.152, 0.078, 0.684},
    {"lyft->nus source-only", 0.102, 1.143, 0.239, 0.789, 0.213},
    {"lyft->nus cam-convs (src)", 0.611, 0.465, 0.149, 0.075, 0.691},
    {"lyft->nus cam-convs", 0.098, 1.198, 0.209, 1.064, 0.181},
    {"lyft->nus ours (src)", 0.590, 0.488, 0.153, 0.079, 0.675},
    {"lyft->nus ours", 0.268, 0.764, 0.205, 0.591, 0.374},
};

}  // namespace

std::span<const NdsRow> PublishedNdsRows() { return kRows; }

HomogeneousProjection ProjectHomogeneous(const Intrinsics& intr, const Mat3& camera_from_ego,
                                         const Vec3& translation, const Vec3& ego_point) {
  Eigen::Matrix<double, 3, 4> extrinsic;
  extrinsic.leftCols<3>() = camera_from_ego;
  extrinsic.col(3) = translation;
  const Eigen::Matrix<double, 3, 4> p = intr.Matrix() * extrinsic;
  const Eigen::Vector4d x(ego_point.x(), ego_point.y(), ego_point.z(), 1.0);
  const Vec3 h = p * x;
  return {h.x(), h.y(), h.z()};
}

std::vector<PixelPair> BruteForcePairs(const CameraModel& cam, const Pose& perturbed,
                                       std::span<const Box3D> boxes) {
  const Intrinsics& k = cam.intrinsics;
  auto inside = [&](const HomogeneousProjection& p, Vec2& pixel) {
    if (p.w <= 1e-12) return false;
    const double u = p.u / p.w, v = p.v / p.w;
    pixel = Vec2(u, v);
    return u >= 0.0 && v >= 0.0 && u < static_cast<double>(k.width) &&
           v < static_cast<double>(k.height);
  };
  std::vector<PixelPair> out;
  for (const Box3D& box : boxes) {
    const double c = std::cos(box.yaw), s = std::sin(box.yaw);
    const double z = box.center.z() - box.dims.z() / 2.0;
    std::vector<Vec3> points{Vec3(box.center.x(), box.center.y(), z)};
    for (auto [sx, sy] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}) {
      const double lx = sx * box.dims.x() / 2.0, ly = sy * box.dims.y() / 2.0;
      points.emplace_back(box.center.x() + lx * c - ly * s, box.center.y() + lx * s + ly * c, z);
    }
    for (const Vec3& q : points) {
      PixelPair pair;
      const bool a = inside(ProjectHomogeneous(k, CameraFromEgo(cam.pose), cam.pose.translation, q),
                            pair.original);
      const bool b = inside(ProjectHomogeneous(k, CameraFromEgo(perturbed), perturbed.translation, q),
                            pair.perturbed);
      if (a && b) out.push_back(pair);
    }
  }
  return out;
}

std::vector<double> CentralDifferences(const std::function<double(std::span<const double>)>& f,
                                       std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double plus = f(probe);
    probe[i] = x[i] - h;
    const double minus = f(probe);
    probe[i] = x[i];
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

double RelativeError(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  return scale > 0.0 ? std::sqrt(diff) / scale : std::sqrt(diff);
}

double EnumeratedAveragePrecision(std::span<const DetectionRecord> gts,
                                  std::span<const DetectionRecord> dets, double threshold,
                                  double recall_floor, double precision_floor) {
  // Processing order by selection: repeatedly take the best remaining detection.
  std::vector<std::size_t> order;
  std::vector<bool> used(dets.size(), false);
  for (std::size_t step = 0; step < dets.size(); ++step) {
    std::size_t best = dets.size();
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (used[i]) continue;
      if (best == dets.size()) {
        best = i;
        continue;
      }
      const double si = *dets[i].box.score, sb = *dets[best].box.score;
      if (si > sb || (si == sb && dets[i].sample_id < dets[best].sample_id)) best = i;
    }
    used[best] = true;
    order.push_back(best);
  }

  std::vector<double> recalls, precisions;
  for (std::size_t cutoff = 1; cutoff <= order.size(); ++cutoff) {
    std::vector<bool> taken(gts.size(), false);
    std::size_t tp = 0;
    for (std::size_t r = 0; r < cutoff; ++r) {
      const DetectionRecord& d = dets[order[r]];
      std::size_t hit = gts.size();
      double hit_dist = 0.0;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (taken[g] || gts[g].sample_id != d.sample_id) continue;
        const double dx = gts[g].box.center.x() - d.box.center.x();
        const double dy = gts[g].box.center.y() - d.box.center.y();
        const double dist = std::sqrt(dx * dx + dy * dy);
        if (dist < threshold && (hit == gts.size() || dist < hit_dist)) {
          hit = g;
          hit_dist = dist;
        }
      }
      if (hit < gts.size()) {
        taken[hit] = true;
        ++tp;
      }
    }
    recalls.push_back(static_cast<double>(tp) / static_cast<double>(gts.size()));
    precisions.push_back(static_cast<double>(tp) / static_cast<double>(cutoff));
  }

  double sum = 0.0;
  int count = 0;
  for (int j = 0; j <= 100; ++j) {
    const double r = j / 100.0;
    if (j <= static_cast<int>(std::lround(100.0 * recall_floor))) continue;
    double best = 0.0;
    for (std::size_t i = 0; i < recalls.size(); ++i) {
      if (recalls[i] >= r) best = std::max(best, precisions[i]);
    }
    sum += std::max(0.0, best - precision_floor);
    ++count;
  }
  return sum / count / (1.0 - precision_floor);
}

double SizeDepthInvariant(double segment_height, double reference_c) {
  // (f H / d) * (sqrt(2) / f / c * d): focal length and depth cancel.
  return std::sqrt(2.0) * segment_height / reference_c;
}

RotationCase RandomRotationCase(std::uint64_t seed, double max_yaw, double max_pitch,
                                double max_roll) {
  constexpr double kMountHeight = 1.6;
  Rng rng = ForkRng(seed, 0);
  RotationCase c;
  const double f = UniformRange(rng, 450.0, 1300.0);
  c.camera.camera_id = "case" + std::to_string(seed);
  c.camera.intrinsics = {f, f * UniformRange(rng, 0.95, 1.05), 352.0 + UniformSymmetric(rng, 20.0),
                         128.0 + UniformSymmetric(rng, 10.0), 704, 256};
  c.camera.pose.yaw = UniformSymmetric(rng, std::numbers::pi);
  c.camera.pose.pitch = UniformSymmetric(rng, 0.05);
  c.camera.pose.roll = UniformSymmetric(rng, 0.05);
  c.camera.pose.translation = Vec3::Zero();

  c.perturbed = c.camera.pose;
  c.perturbed.yaw = NormalizeAngle(c.perturbed.yaw + UniformSymmetric(rng, max_yaw));
  c.perturbed.pitch = NormalizeAngle(c.perturbed.pitch + UniformSymmetric(rng, max_pitch));
  c.perturbed.roll = NormalizeAngle(c.perturbed.roll + UniformSymmetric(rng, max_roll));

  const int n_boxes = 2 + static_cast<int>(rng() % 5);
  for (int i = 0; i < n_boxes; ++i) {
    const double dist = UniformRange(rng, 6.0, 35.0);
    const double bearing = c.camera.pose.yaw + UniformSymmetric(rng, 0.35);
    Box3D box;
    box.dims = Vec3(UniformRange(rng, 3.5, 5.0), UniformRange(rng, 1.6, 2.2),
                    UniformRange(rng, 1.3, 2.0));
    box.center = Vec3(dist * std::cos(bearing), dist * std::sin(bearing),
                      -kMountHeight + box.dims.z() / 2.0);
    box.yaw = NormalizeAngle(UniformSymmetric(rng, std::numbers::pi));
    c.boxes.push_back(box);
  }
  return c;
}

MetricsFixture ThreeBoxFixture() {
  auto box = [](double x, double y, Vec3 dims, double yaw, std::optional<double> score) {
    Box3D b;
    b.center = Vec3(x, y, dims.z() / 2.0);
    b.dims = dims;
    b.yaw = yaw;
    b.score = score;
    return b;
  };
  const Vec3 car(4.0, 2.0, 1.5);
  MetricsFixture f;
  f.gts = {{box(10.0, 0.0, car, 0.0, std::nullopt), "s0"},
           {box(20.0, 5.0, car, 0.25, std::nullopt), "s0"},
           {box(-15.0, 10.0, car, 1.0, std::nullopt), "s0"}};
  f.dets = {{box(10.5, 0.0, car, 0.0, 0.9), "s0"},
            {box(20.0, 5.0, Vec3(2.0, 2.0, 1.5), 0.75, 0.8), "s0"}};

  // 0.5 m: the 0.9 detection sits exactly 0.5 m away and is a false
  // positive under the strict test, the 0.8 detection is a hit. Precision
  // envelope 1/2 up to recall 1/3: grid points 0.11 .. 0.33 (23 of 90)
  // contribute (0.5 - 0.1) / 0.9 each.
  f.ap[0] = 23.0 * 0.4 / 0.9 / 90.0;
  // 1, 2, 4 m: both hits, precision 1 up to recall 2/3: grid points
  // 0.11 .. 0.66 (56 of 90) contribute (1 - 0.1) / 0.9 = 1 each.
  f.ap[1] = f.ap[2] = f.ap[3] = 56.0 / 90.0;
  f.map = (f.ap[0] + f.ap[1] + f.ap[2] + f.ap[3]) / 4.0;
  // TP errors at 2 m over the two hits.
  f.mate = (0.5 + 0.0) / 2.0;
  f.mase = (0.0 + (1.0 - 6.0 / 12.0)) / 2.0;  // overlap 2*2*1.5 = 6, union 12 + 6 - 6
  f.maoe = (0.0 + 0.5) / 2.0;
  f.nds_star = (3.0 * f.map + (1.0 - f.mate) + (1.0 - f.mase) + (1.0 - f.maoe)) / 6.0;
  return f;
}

}  // namespace bevaug::oracle
