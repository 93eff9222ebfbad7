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

#ifndef GLASSSEG_MERGE_POLICY_H_
#define GLASSSEG_MERGE_POLICY_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/confusion.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// Water-glass instances whose model is in `models` may be labeled `partner`.
struct WaterGlassOverride {
  ClassId partner = 0;
  std::set<std::string> models;

  friend bool operator==(const WaterGlassOverride&,
                         const WaterGlassOverride&) = default;
};

// Which predicted labels count as correct for a ground-truth pixel.
//
// allowed(c) is reflexive and allowed(background) = {background}. Water
// glass is special-cased: a class merged with water glass may be predicted
// as water glass (class level), but a water-glass pixel may only be
// predicted as the partner when its instance's model is allowlisted in an
// override.
class MergePolicy {
 public:
  MergePolicy() = default;

  // allowed(c) = {c} for every class.
  static MergePolicy Identity(const Taxonomy& taxonomy);

  // Validates reflexivity, the background rule, and that overrides name
  // glass partners and registered water-glass models.
  static absl::StatusOr<MergePolicy> Create(
      const Taxonomy& taxonomy, std::vector<LabelSet> allowed,
      std::optional<ClassId> water_glass,
      std::vector<WaterGlassOverride> overrides);

  std::size_t classes() const { return allowed_.size(); }
  const LabelSet& allowed(ClassId c) const { return allowed_[c]; }
  std::optional<ClassId> water_glass() const { return water_glass_; }
  const std::vector<WaterGlassOverride>& overrides() const {
    return overrides_;
  }

  // Labels accepted for a ground-truth pixel of class `gt_class` belonging
  // to an instance of `model` (ignored for background).
  LabelSet AllowedLabels(ClassId gt_class, std::string_view model) const;

  friend bool operator==(const MergePolicy&, const MergePolicy&) = default;

 private:
  std::vector<LabelSet> allowed_;
  std::optional<ClassId> water_glass_;
  std::vector<WaterGlassOverride> overrides_;  // sorted by partner
};

// Builds allowed sets from similar pairs without transitive closure:
// allowed(c) = {c} plus every d paired with c. A pair involving the water
// glass class only grants the partner -> water glass direction; the reverse
// comes from `overrides`, each of which must name a partner paired with
// water glass. Overrides for the same partner are merged.
absl::StatusOr<MergePolicy> BuildMergePolicy(
    const PairSet& pairs, std::optional<ClassId> water_glass,
    std::vector<WaterGlassOverride> overrides, const Taxonomy& taxonomy);

// Override file: {"water_glass":"water_glass",
//   "overrides":[{"class":"pint_glass","models":["POKAL"]}]}
// "water_glass" is optional and defaults to the class named water_glass.
struct OverrideSpec {
  std::optional<ClassId> water_glass;
  std::vector<WaterGlassOverride> overrides;
};
absl::StatusOr<OverrideSpec> ParseOverrideSpec(std::string_view json_text,
                                               const Taxonomy& taxonomy);

// Policy file:
//   {"schema_version":1,"water_glass":"water_glass",
//    "allowed":{"white_wine_glass":["white_wine_glass","red_wine_glass"],...},
//    "water_glass_overrides":[{"class":"pint_glass","models":["POKAL"]}]}
// Classes missing from "allowed" map to themselves only.
std::string SerializeMergePolicy(const MergePolicy& policy,
                                 const Taxonomy& taxonomy);
absl::StatusOr<MergePolicy> ParseMergePolicy(std::string_view json_text,
                                             const Taxonomy& taxonomy);

}  // namespace glassseg

#endif  // GLASSSEG_MERGE_POLICY_H_
