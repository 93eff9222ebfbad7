// Copyright 2026 The GlassSeg Authors.
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

#ifndef GLASSSEG_METRICS_H_
#define GLASSSEG_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/annotations.h"
#include "glassseg/merge_policy.h"
#include "glassseg/raster.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// Per-class pixel counts.
struct Tally {
  std::vector<std::uint64_t> tp;
  std::vector<std::uint64_t> fp;
  std::vector<std::uint64_t> fn;

  Tally() = default;
  explicit Tally(std::size_t classes)
      : tp(classes, 0), fp(classes, 0), fn(classes, 0) {}

  std::size_t classes() const { return tp.size(); }
  absl::Status Add(const Tally& other);

  friend bool operator==(const Tally&, const Tally&) = default;
};

// Merge-aware pixel scoring. For a pixel with ground-truth class g: if the
// prediction is among the labels the policy accepts for that pixel, TP[g]
// is incremented; otherwise FN[g] and FP[prediction] are. A merged hit
// therefore credits the ground-truth class and is not a false positive for
// the predicted one.
absl::StatusOr<Tally> TallyImage(const GroundTruth& gt, const LabelMap& pred,
                                 const MergePolicy& policy,
                                 const Taxonomy& taxonomy);

// Componentwise sum. Errors when class counts differ.
absl::StatusOr<Tally> MergeTallies(std::span<const Tally> tallies);

struct ClassMetrics {
  ClassId id = 0;
  std::uint64_t tp = 0, fp = 0, fn = 0;
  std::optional<double> iou;  // TP / (TP + FP + FN); absent when 0 / 0
  std::optional<double> acc;  // TP / (TP + FN); absent when 0 / 0
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  // Means over the classes whose value is defined, background included.
  std::optional<double> mean_iou;
  std::optional<double> mean_acc;
  std::optional<ClassId> highlight;
  std::optional<double> highlight_iou;
};

MetricsReport ComputeMetrics(const Tally& tally,
                             std::optional<ClassId> highlight = std::nullopt);

// Report JSON carries "schema_version", per-class rows, the means, the
// highlighted class and the IoU of every unseen class.
std::string SerializeReportJson(const MetricsReport& report,
                                const Taxonomy& taxonomy);
// CSV columns: class,TP,FP,FN,IoU,Acc. Undefined values are empty; the last
// row is "mean" with the means in the IoU and Acc columns.
std::string SerializeReportCsv(const MetricsReport& report,
                               const Taxonomy& taxonomy);

}  // namespace glassseg

#endif  // GLASSSEG_METRICS_H_
