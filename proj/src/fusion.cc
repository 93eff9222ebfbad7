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

#include "glassseg/fusion.h"

#include <algorithm>
#include <array>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace glassseg {

namespace {

absl::Status CheckShape(const Masklet& masklet, const LabelMap& semantic) {
  if (!semantic.SameShape(masklet.region.width(), masklet.region.height())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "masklet ", masklet.id, " is ", masklet.region.width(), "x",
        masklet.region.height(), " but the label map is ", semantic.width(),
        "x", semantic.height()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status ValidateFusionConfig(const FusionConfig& config) {
  if (!(config.glass_fraction_min >= 0.0 && config.glass_fraction_min <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "glass fraction threshold ", config.glass_fraction_min,
        " outside [0, 1]"));
  }
  if (!(config.quality_min >= 0.0 && config.quality_min <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "quality threshold ", config.quality_min, " outside [0, 1]"));
  }
  return absl::OkStatus();
}

absl::StatusOr<MaskletDecision> ClassifyMasklet(const Masklet& masklet,
                                                const LabelMap& semantic,
                                                const Taxonomy& taxonomy,
                                                const FusionConfig& config) {
  if (absl::Status s = CheckShape(masklet, semantic); !s.ok()) return s;

  MaskletDecision d;
  d.masklet_id = masklet.id;
  d.score = masklet.score;
  d.area = masklet.region.Area();

  // Count into a full 256-wide table so label values never need a bounds
  // check in the inner loop; validated maps only populate [0, K).
  std::array<std::uint64_t, kMaxClasses> counts{};
  const ClassId* pixels = semantic.data().data();
  for (const Span& span : masklet.region.spans()) {
    const ClassId* p = pixels + span.offset;
    for (std::uint32_t i = 0; i < span.length; ++i) ++counts[p[i]];
  }
  d.class_counts.assign(counts.begin(), counts.begin() + taxonomy.size());

  std::uint64_t best = 0;
  ClassId best_class = 0;
  bool any = false;
  for (std::size_t c = 0; c < taxonomy.size(); ++c) {
    if (!taxonomy.is_glass(static_cast<ClassId>(c))) continue;
    if (!any || counts[c] > best) {
      best = counts[c];
      best_class = static_cast<ClassId>(c);
      any = true;
    }
  }
  if (d.area > 0 && any) {
    d.max_glass_fraction =
        static_cast<double>(best) / static_cast<double>(d.area);
  }
  if (d.max_glass_fraction > config.glass_fraction_min) {
    d.verdict = Verdict::kAssigned;
    d.assigned_class = best_class;
  }
  return d;
}

absl::StatusOr<FusionResult> Fuse(const LabelMap& semantic,
                                  std::span<const Masklet> masklets,
                                  const Taxonomy& taxonomy,
                                  const FusionConfig& config) {
  if (absl::Status s = ValidateFusionConfig(config); !s.ok()) return s;
  if (absl::Status s = ValidateLabels(semantic, taxonomy); !s.ok()) return s;

  FusionResult result;
  std::vector<const Masklet*> kept;
  for (const Masklet& m : masklets) {
    if (absl::Status s = CheckShape(m, semantic); !s.ok()) return s;
    if (m.score < config.quality_min) continue;
    absl::StatusOr<MaskletDecision> d =
        ClassifyMasklet(m, semantic, taxonomy, config);
    if (!d.ok()) return d.status();
    kept.push_back(&m);
    result.decisions.push_back(*std::move(d));
  }

  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (kept[a]->score != kept[b]->score) {
                       return kept[a]->score < kept[b]->score;
                     }
                     return kept[a]->id < kept[b]->id;
                   });

  result.labels = semantic;
  ClassId* out = result.labels.data().data();
  for (std::size_t idx : order) {
    const MaskletDecision& d = result.decisions[idx];
    ClassId value;
    if (d.verdict == Verdict::kAssigned) {
      value = d.assigned_class;
    } else if (config.reject_mode == RejectMode::kBackground) {
      value = taxonomy.background();
    } else {
      continue;
    }
    for (const Span& span : kept[idx]->region.spans()) {
      std::fill_n(out + span.offset, span.length, value);
    }
  }
  return result;
}

}  // namespace glassseg
