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

#include "bevaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "bevaug/error.hpp"

namespace bevaug {

namespace {

constexpr int kRecallGridSteps = 100;  // 101 points, 0 .. 1

}  // namespace

void Validate(const MetricConfig& cfg) {
  if (cfg.distance_thresholds.empty()) {
    throw InvalidArgument("metrics: need at least one distance threshold");
  }
  for (std::size_t i = 0; i < cfg.distance_thresholds.size(); ++i) {
    const double t = cfg.distance_thresholds[i];
    if (!(t > 0.0) || (i > 0 && !(t > cfg.distance_thresholds[i - 1]))) {
      throw InvalidArgument("metrics: thresholds must be positive and strictly ascending");
    }
  }
  if (std::find(cfg.distance_thresholds.begin(), cfg.distance_thresholds.end(),
                cfg.tp_threshold) == cfg.distance_thresholds.end()) {
    throw InvalidArgument("metrics: tp_threshold must be one of the distance thresholds");
  }
  if (!(cfg.range_limit > 0.0)) throw InvalidArgument("metrics: range_limit must be > 0");
  if (!(cfg.recall_floor >= 0.0 && cfg.recall_floor < 1.0) ||
      !(cfg.precision_floor >= 0.0 && cfg.precision_floor < 1.0)) {
    throw InvalidArgument("metrics: floors must lie in [0, 1)");
  }
}

double CenterDistance(const Box3D& a, const Box3D& b) {
  return std::hypot(a.center.x() - b.center.x(), a.center.y() - b.center.y());
}

std::vector<DetectionRecord> FilterByRange(std::span<const DetectionRecord> records,
                                           double range_limit) {
  std::vector<DetectionRecord> out;
  for (const DetectionRecord& r : records) {
    if (std::hypot(r.box.center.x(), r.box.center.y()) <= range_limit) out.push_back(r);
  }
  return out;
}

MatchResult MatchDetections(std::span<const DetectionRecord> gts,
                            std::span<const DetectionRecord> dets, double threshold) {
  for (const DetectionRecord& d : dets) {
    if (!d.box.score) throw InvalidArgument("match_detections: detection without score");
  }
  MatchResult result;
  result.order.resize(dets.size());
  std::iota(result.order.begin(), result.order.end(), std::size_t{0});
  std::stable_sort(result.order.begin(), result.order.end(), [&](std::size_t a, std::size_t b) {
    if (*dets[a].box.score != *dets[b].box.score) return *dets[a].box.score > *dets[b].box.score;
    return dets[a].sample_id < dets[b].sample_id;
  });

  std::vector<bool> taken(gts.size(), false);
  result.is_tp.reserve(dets.size());
  for (std::size_t di : result.order) {
    const DetectionRecord& det = dets[di];
    std::size_t best = gts.size();
    double best_dist = threshold;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (taken[gi] || gts[gi].sample_id != det.sample_id) continue;
      const double d = CenterDistance(gts[gi].box, det.box);
      if (d < best_dist) {
        best_dist = d;
        best = gi;
      }
    }
    const bool tp = best < gts.size();
    result.is_tp.push_back(tp);
    if (tp) {
      taken[best] = true;
      result.matches.push_back({best, di, best_dist});
    }
  }
  return result;
}

double AveragePrecision(const MatchResult& matches, std::size_t num_gt, const MetricConfig& cfg) {
  if (num_gt == 0) throw InvalidArgument("average_precision: undefined without ground truth");
  const std::size_t n = matches.is_tp.size();
  std::vector<double> recall(n), precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (matches.is_tp[i]) ++tp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gt);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  // Envelope: best precision at recall >= r.
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);

  const int first = static_cast<int>(std::lround(kRecallGridSteps * cfg.recall_floor)) + 1;
  double sum = 0.0;
  int count = 0;
  std::size_t cursor = 0;
  for (int j = first; j <= kRecallGridSteps; ++j, ++count) {
    const double r = static_cast<double>(j) / kRecallGridSteps;
    while (cursor < n && recall[cursor] < r) ++cursor;
    const double p = cursor < n ? precision[cursor] : 0.0;
    sum += std::max(0.0, p - cfg.precision_floor);
  }
  if (count == 0) return 0.0;
  return sum / count / (1.0 - cfg.precision_floor);
}

double AveragePrecision(std::span<const DetectionRecord> gts,
                        std::span<const DetectionRecord> dets, double threshold,
                        const MetricConfig& cfg) {
  if (gts.empty()) throw InvalidArgument("average_precision: undefined without ground truth");
  return AveragePrecision(MatchDetections(gts, dets, threshold), gts.size(), cfg);
}

double ScaleError(const Box3D& gt, const Box3D& pred) {
  const double overlap = std::min(gt.dims.x(), pred.dims.x()) *
                         std::min(gt.dims.y(), pred.dims.y()) *
                         std::min(gt.dims.z(), pred.dims.z());
  const double uni = gt.dims.prod() + pred.dims.prod() - overlap;
  return 1.0 - overlap / uni;
}

double OrientationError(const Box3D& gt, const Box3D& pred) {
  const double d = std::fmod(std::abs(pred.yaw - gt.yaw), 2.0 * std::numbers::pi);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

TpErrors ComputeTpErrors(std::span<const DetectionRecord> gts,
                         std::span<const DetectionRecord> dets, std::span<const Match> matches) {
  TpErrors out;
  if (matches.empty()) return out;
  double ate = 0.0, ase = 0.0, aoe = 0.0;
  for (const Match& m : matches) {
    const Box3D& g = gts[m.gt_index].box;
    const Box3D& p = dets[m.det_index].box;
    ate += CenterDistance(g, p);
    ase += ScaleError(g, p);
    aoe += OrientationError(g, p);
  }
  const double n = static_cast<double>(matches.size());
  out.ate = ate / n;
  out.ase = ase / n;
  out.aoe = aoe / n;
  out.count = matches.size();
  return out;
}

double NdsStar(double map, double mate, double mase, double maoe) {
  double tp_score = 0.0;
  for (double e : {mate, mase, maoe}) tp_score += 1.0 - std::min(1.0, e);
  return (3.0 * map + tp_score) / 6.0;
}

MetricReport Evaluate(std::span<const DetectionRecord> gts,
                      std::span<const DetectionRecord> dets, const MetricConfig& cfg,
                      unsigned threads) {
  Validate(cfg);
  const std::vector<DetectionRecord> g = FilterByRange(gts, cfg.range_limit);
  const std::vector<DetectionRecord> d = FilterByRange(dets, cfg.range_limit);
  if (g.empty()) throw InvalidArgument("evaluate: no ground truth inside the range limit");

  const std::size_t n = cfg.distance_thresholds.size();
  std::vector<MatchResult> per_threshold(n);
  auto run = [&](std::size_t i) {
    per_threshold[i] = MatchDetections(g, d, cfg.distance_thresholds[i]);
  };
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(run, i);
  }

  MetricReport report;
  report.num_gt = g.size();
  report.num_pred = d.size();
  double ap_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ThresholdResult t;
    t.threshold = cfg.distance_thresholds[i];
    t.ap = AveragePrecision(per_threshold[i], g.size(), cfg);
    t.tp = per_threshold[i].matches.size();
    t.fp = per_threshold[i].is_tp.size() - t.tp;
    ap_sum += t.ap;
    report.per_threshold.push_back(t);
    if (cfg.distance_thresholds[i] == cfg.tp_threshold) {
      const TpErrors e = ComputeTpErrors(g, d, per_threshold[i].matches);
      report.mATE = e.ate;
      report.mASE = e.ase;
      report.mAOE = e.aoe;
      report.num_tp = e.count;
    }
  }
  report.mAP = ap_sum / static_cast<double>(n);
  report.nds_star = NdsStar(report.mAP, report.mATE, report.mASE, report.mAOE);
  return report;
}

std::string FormatReportTable(const MetricReport& report) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %10s\n", "metric", "value");
  out << line;
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "%-10s %10.4f\n", name, v);
    out << line;
  };
  row("mAP", report.mAP);
  row("mATE", report.mATE);
  row("mASE", report.mASE);
  row("mAOE", report.mAOE);
  row("NDS*", report.nds_star);
  std::snprintf(line, sizeof line, "%-10s %10s %6s %6s\n", "dist_th", "AP", "TP", "FP");
  out << line;
  for (const ThresholdResult& t : report.per_threshold) {
    std::snprintf(line, sizeof line, "%-10.2f %10.4f %6zu %6zu\n", t.threshold, t.ap, t.tp, t.fp);
    out << line;
  }
  std::snprintf(line, sizeof line, "gt=%zu pred=%zu tp@tp_th=%zu\n", report.num_gt,
                report.num_pred, report.num_tp);
  out << line;
  return out.str();
}

}  // namespace bevaug
