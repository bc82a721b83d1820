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

#ifndef BEVAUG_METRICS_HPP_
#define BEVAUG_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bevaug/box.hpp"

namespace bevaug {

// Single-class detection evaluation with center-distance matching on the
// ground plane. Constants follow the nuScenes detection protocol.

struct DetectionRecord {
  Box3D box;
  std::string sample_id;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

struct MetricConfig {
  std::vector<double> distance_thresholds{0.5, 1.0, 2.0, 4.0};
  double tp_threshold = 2.0;
  double range_limit = 50.0;
  double recall_floor = 0.1;
  double precision_floor = 0.1;

  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

void Validate(const MetricConfig& cfg);

struct ThresholdResult {
  double threshold = 0.0;
  double ap = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;

  friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

struct MetricReport {
  double mAP = 0.0;
  double mATE = 1.0;
  double mASE = 1.0;
  double mAOE = 1.0;
  double nds_star = 0.0;
  std::vector<ThresholdResult> per_threshold;
  std::size_t num_gt = 0;
  std::size_t num_pred = 0;
  // Matches at the true-positive threshold.
  std::size_t num_tp = 0;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

struct Match {
  std::size_t gt_index = 0;
  std::size_t det_index = 0;
  double distance = 0.0;
};

struct MatchResult {
  // Detection indices in processing order (score descending, then
  // sample_id, then input position).
  std::vector<std::size_t> order;
  // is_tp[i] refers to order[i].
  std::vector<bool> is_tp;
  std::vector<Match> matches;
};

// Euclidean (x, y) distance between box centers.
double CenterDistance(const Box3D& a, const Box3D& b);

// Keeps records whose ground-plane center distance from the ego origin is
// at most `range_limit`.
std::vector<DetectionRecord> FilterByRange(std::span<const DetectionRecord> records,
                                           double range_limit);

// Greedy assignment in processing order: each detection takes the nearest
// unmatched ground truth of the same sample with distance < threshold
// (ties go to the lower ground-truth index). Every detection needs a score.
MatchResult MatchDetections(std::span<const DetectionRecord> gts,
                            std::span<const DetectionRecord> dets, double threshold);

// 101-point AP: precision is replaced by its maximum over recalls at or above
// each grid point, recall grid points at or below `recall_floor` are dropped,
// and the mean of max(0, p - precision_floor) / (1 - precision_floor) is
// returned. Throws InvalidArgument when there is no ground truth.
double AveragePrecision(std::span<const DetectionRecord> gts,
                        std::span<const DetectionRecord> dets, double threshold,
                        const MetricConfig& cfg = {});
// Same, from an existing match result.
double AveragePrecision(const MatchResult& matches, std::size_t num_gt,
                        const MetricConfig& cfg = {});

struct TpErrors {
  double ate = 1.0;
  double ase = 1.0;
  double aoe = 1.0;
  std::size_t count = 0;
};

// 1 - IoU of two boxes after aligning their centers and headings.
double ScaleError(const Box3D& gt, const Box3D& pred);
// Smallest absolute heading difference, in [0, pi].
double OrientationError(const Box3D& gt, const Box3D& pred);

// Means over matches; each error defaults to 1 when there is no match.
TpErrors ComputeTpErrors(std::span<const DetectionRecord> gts,
                         std::span<const DetectionRecord> dets, std::span<const Match> matches);

// (3 mAP + sum over {mATE, mASE, mAOE} of (1 - min(1, e))) / 6.
double NdsStar(double map, double mate, double mase, double maoe);

// Range-filters both sets, then computes AP at every distance threshold,
// TP errors at the TP threshold, and NDS*. `threads` > 1 evaluates the
// thresholds concurrently with identical results.
MetricReport Evaluate(std::span<const DetectionRecord> gts,
                      std::span<const DetectionRecord> dets, const MetricConfig& cfg = {},
                      unsigned threads = 1);

// Fixed-width text rendering of a report.
std::string FormatReportTable(const MetricReport& report);

}  // namespace bevaug

#endif  // BEVAUG_METRICS_HPP_
