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

#ifndef GLASSSEG_FUSION_H_
#define GLASSSEG_FUSION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/annotations.h"
#include "glassseg/raster.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// What happens to the pixels of a masklet that fails the glass test.
enum class RejectMode {
  kBackground,  // overwrite with the background class
  kKeep,        // leave the semantic labels untouched
};

struct FusionConfig {
  // A masklet is a glass object when the largest single glass-category
  // share of its pixels is strictly greater than this.
  double glass_fraction_min = 0.10;
  // Masklets scoring below this are dropped before classification.
  double quality_min = 0.0;
  RejectMode reject_mode = RejectMode::kBackground;
};

absl::Status ValidateFusionConfig(const FusionConfig& config);

enum class Verdict { kRejected, kAssigned };

struct MaskletDecision {
  std::int64_t masklet_id = 0;
  double score = 0.0;
  Verdict verdict = Verdict::kRejected;
  ClassId assigned_class = 0;  // meaningful only when assigned
  std::size_t area = 0;
  // Semantic-map pixel count per class inside the masklet, indexed by
  // ClassId (background included); sums to `area`.
  std::vector<std::uint64_t> class_counts;
  // max over glass classes of class_counts[c] / area.
  double max_glass_fraction = 0.0;

  friend bool operator==(const MaskletDecision&,
                         const MaskletDecision&) = default;
};

// Tallies the semantic labels under `masklet` and applies the glass test.
// The majority is taken over glass classes only; ties go to the lowest id.
absl::StatusOr<MaskletDecision> ClassifyMasklet(const Masklet& masklet,
                                                const LabelMap& semantic,
                                                const Taxonomy& taxonomy,
                                                const FusionConfig& config);

struct FusionResult {
  LabelMap labels;
  // One decision per masklet that passed the quality filter, in input order.
  std::vector<MaskletDecision> decisions;
};

// Refines `semantic` with the masklets:
//  1. masklets with score < quality_min are dropped;
//  2. every remaining masklet is classified against the input map;
//  3. decisions are painted onto a copy of the input in ascending
//     (score, id) order, so the higher-scoring masklet wins an overlap.
//     Assigned masklets paint their class; rejected masklets paint
//     background under RejectMode::kBackground and nothing under kKeep.
// Pixels outside every masklet keep their input label.
absl::StatusOr<FusionResult> Fuse(const LabelMap& semantic,
                                  std::span<const Masklet> masklets,
                                  const Taxonomy& taxonomy,
                                  const FusionConfig& config = {});

}  // namespace glassseg

#endif  // GLASSSEG_FUSION_H_
