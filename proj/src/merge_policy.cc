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

#include "glassseg/merge_policy.h"

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace glassseg {

using nlohmann::json;

namespace {

constexpr std::string_view kDefaultWaterGlass = "water_glass";

std::optional<ClassId> DefaultWaterGlass(const Taxonomy& taxonomy) {
  absl::StatusOr<ClassId> id = taxonomy.ClassByName(kDefaultWaterGlass);
  if (id.ok() && taxonomy.is_glass(*id)) return *id;
  return std::nullopt;
}

absl::StatusOr<std::optional<ClassId>> ReadWaterGlass(
    const json& doc, const Taxonomy& taxonomy) {
  if (!doc.contains("water_glass")) return DefaultWaterGlass(taxonomy);
  if (doc["water_glass"].is_null()) return std::optional<ClassId>();
  if (!doc["water_glass"].is_string()) {
    return absl::InvalidArgumentError("\"water_glass\" must be a class name");
  }
  absl::StatusOr<ClassId> id =
      taxonomy.ClassByName(doc["water_glass"].get<std::string>());
  if (!id.ok()) return id.status();
  return std::optional<ClassId>(*id);
}

absl::StatusOr<std::vector<WaterGlassOverride>> ReadOverrides(
    const json& list, const Taxonomy& taxonomy) {
  if (!list.is_array()) {
    return absl::InvalidArgumentError("overrides must be an array");
  }
  std::vector<WaterGlassOverride> out;
  for (const auto& entry : list) {
    if (!entry.is_object() || !entry.contains("class") ||
        !entry["class"].is_string() || !entry.contains("models") ||
        !entry["models"].is_array()) {
      return absl::InvalidArgumentError(
          "each override needs a \"class\" and a \"models\" array");
    }
    absl::StatusOr<ClassId> partner =
        taxonomy.ClassByName(entry["class"].get<std::string>());
    if (!partner.ok()) return partner.status();
    WaterGlassOverride o{*partner, {}};
    for (const auto& m : entry["models"]) {
      if (!m.is_string()) {
        return absl::InvalidArgumentError("override models must be strings");
      }
      o.models.insert(m.get<std::string>());
    }
    out.push_back(std::move(o));
  }
  return out;
}

// Merges overrides that share a partner and sorts by partner id.
std::vector<WaterGlassOverride> Canonicalize(
    std::vector<WaterGlassOverride> overrides) {
  std::map<ClassId, std::set<std::string>> merged;
  for (auto& o : overrides) merged[o.partner].merge(o.models);
  std::vector<WaterGlassOverride> out;
  for (auto& [partner, models] : merged) {
    out.push_back({partner, std::move(models)});
  }
  return out;
}

}  // namespace

MergePolicy MergePolicy::Identity(const Taxonomy& taxonomy) {
  MergePolicy p;
  p.allowed_.resize(taxonomy.size());
  for (std::size_t c = 0; c < taxonomy.size(); ++c) p.allowed_[c].set(c);
  p.water_glass_ = DefaultWaterGlass(taxonomy);
  return p;
}

absl::StatusOr<MergePolicy> MergePolicy::Create(
    const Taxonomy& taxonomy, std::vector<LabelSet> allowed,
    std::optional<ClassId> water_glass,
    std::vector<WaterGlassOverride> overrides) {
  const std::size_t k = taxonomy.size();
  if (allowed.size() != k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy covers ", allowed.size(), " classes, taxonomy has ", k));
  }
  const ClassId bg = taxonomy.background();
  for (std::size_t c = 0; c < k; ++c) {
    const std::string& name = taxonomy.at(static_cast<ClassId>(c)).name;
    if (!allowed[c].test(c)) {
      return absl::InvalidArgumentError(
          absl::StrCat("allowed set of \"", name, "\" must contain itself"));
    }
    if ((allowed[c] >> k).any()) {
      return absl::InvalidArgumentError(
          absl::StrCat("allowed set of \"", name, "\" has unknown classes"));
    }
    if (c != bg && allowed[c].test(bg)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "allowed set of \"", name, "\" must not contain the background"));
    }
  }
  if (allowed[bg].count() != 1) {
    return absl::InvalidArgumentError(
        "the background may only be labeled as background");
  }
  if (water_glass && !taxonomy.is_glass(*water_glass)) {
    return absl::InvalidArgumentError("water glass must be a glass class");
  }
  if (!overrides.empty() && !water_glass) {
    return absl::InvalidArgumentError(
        "water-glass overrides need a water glass class");
  }
  for (const auto& o : overrides) {
    if (!taxonomy.is_glass(o.partner) || o.partner == *water_glass) {
      return absl::InvalidArgumentError(absl::StrCat(
          "override partner \"", taxonomy.at(o.partner).name,
          "\" must be a glass class other than water glass"));
    }
    for (const auto& model : o.models) {
      auto it = taxonomy.models().find(model);
      if (it == taxonomy.models().end()) {
        return absl::InvalidArgumentError(
            absl::StrCat("override references unknown model id \"", model,
                         "\""));
      }
      if (it->second != *water_glass) {
        return absl::InvalidArgumentError(absl::StrCat(
            "override model \"", model, "\" is not a water-glass model"));
      }
    }
  }
  MergePolicy p;
  p.allowed_ = std::move(allowed);
  p.water_glass_ = water_glass;
  p.overrides_ = Canonicalize(std::move(overrides));
  return p;
}

LabelSet MergePolicy::AllowedLabels(ClassId gt_class,
                                    std::string_view model) const {
  LabelSet out = allowed_[gt_class];
  if (water_glass_ && gt_class == *water_glass_) {
    for (const auto& o : overrides_) {
      if (o.models.contains(std::string(model))) out.set(o.partner);
    }
  }
  return out;
}

absl::StatusOr<MergePolicy> BuildMergePolicy(
    const PairSet& pairs, std::optional<ClassId> water_glass,
    std::vector<WaterGlassOverride> overrides, const Taxonomy& taxonomy) {
  std::vector<LabelSet> allowed(taxonomy.size());
  for (std::size_t c = 0; c < taxonomy.size(); ++c) allowed[c].set(c);
  for (const auto& [a, b] : pairs) {
    if (!taxonomy.is_glass(a) || !taxonomy.is_glass(b) || a == b) {
      return absl::InvalidArgumentError(absl::StrCat(
          "pair (", static_cast<int>(a), ", ", static_cast<int>(b),
          ") must join two distinct glass classes"));
    }
    if (water_glass && b == *water_glass) {
      allowed[a].set(b);
    } else if (water_glass && a == *water_glass) {
      allowed[b].set(a);
    } else {
      allowed[a].set(b);
      allowed[b].set(a);
    }
  }
  for (const auto& o : overrides) {
    if (!water_glass || !pairs.contains(MakePair(o.partner, *water_glass))) {
      return absl::InvalidArgumentError(absl::StrCat(
          "override for \"", taxonomy.at(o.partner).name,
          "\" references a pair with water glass that is not among the "
          "similar pairs"));
    }
  }
  return MergePolicy::Create(taxonomy, std::move(allowed), water_glass,
                             std::move(overrides));
}

absl::StatusOr<OverrideSpec> ParseOverrideSpec(std::string_view json_text,
                                               const Taxonomy& taxonomy) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("override file: not a JSON object");
  }
  OverrideSpec spec;
  absl::StatusOr<std::optional<ClassId>> wg = ReadWaterGlass(doc, taxonomy);
  if (!wg.ok()) return wg.status();
  spec.water_glass = *wg;
  if (doc.contains("overrides")) {
    absl::StatusOr<std::vector<WaterGlassOverride>> list =
        ReadOverrides(doc["overrides"], taxonomy);
    if (!list.ok()) return list.status();
    spec.overrides = *std::move(list);
  }
  return spec;
}

std::string SerializeMergePolicy(const MergePolicy& policy,
                                 const Taxonomy& taxonomy) {
  json doc;
  doc["schema_version"] = 1;
  doc["water_glass"] = policy.water_glass()
                           ? json(taxonomy.at(*policy.water_glass()).name)
                           : json(nullptr);
  // Arrays keep class-id order; the object itself is keyed by name.
  json allowed = json::object();
  for (std::size_t c = 0; c < policy.classes(); ++c) {
    json names = json::array();
    const LabelSet& set = policy.allowed(static_cast<ClassId>(c));
    for (std::size_t d = 0; d < policy.classes(); ++d) {
      if (set.test(d)) names.push_back(taxonomy.at(static_cast<ClassId>(d)).name);
    }
    allowed[taxonomy.at(static_cast<ClassId>(c)).name] = std::move(names);
  }
  doc["allowed"] = std::move(allowed);
  json overrides = json::array();
  for (const auto& o : policy.overrides()) {
    overrides.push_back({{"class", taxonomy.at(o.partner).name},
                         {"models", json(o.models)}});
  }
  doc["water_glass_overrides"] = std::move(overrides);
  return doc.dump(2) + "\n";
}

absl::StatusOr<MergePolicy> ParseMergePolicy(std::string_view json_text,
                                             const Taxonomy& taxonomy) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("policy file: not a JSON object");
  }
  absl::StatusOr<std::optional<ClassId>> wg = ReadWaterGlass(doc, taxonomy);
  if (!wg.ok()) return wg.status();
  std::vector<LabelSet> allowed(taxonomy.size());
  for (std::size_t c = 0; c < taxonomy.size(); ++c) allowed[c].set(c);
  if (doc.contains("allowed")) {
    const json& map = doc["allowed"];
    if (!map.is_object()) {
      return absl::InvalidArgumentError("\"allowed\" must be an object");
    }
    for (const auto& [name, labels] : map.items()) {
      absl::StatusOr<ClassId> c = taxonomy.ClassByName(name);
      if (!c.ok()) return c.status();
      if (!labels.is_array()) {
        return absl::InvalidArgumentError(
            absl::StrCat("allowed set of \"", name, "\" must be an array"));
      }
      for (const auto& label : labels) {
        if (!label.is_string()) {
          return absl::InvalidArgumentError("allowed labels must be strings");
        }
        absl::StatusOr<ClassId> d =
            taxonomy.ClassByName(label.get<std::string>());
        if (!d.ok()) return d.status();
        allowed[*c].set(*d);
      }
    }
  }
  std::vector<WaterGlassOverride> overrides;
  if (doc.contains("water_glass_overrides")) {
    absl::StatusOr<std::vector<WaterGlassOverride>> list =
        ReadOverrides(doc["water_glass_overrides"], taxonomy);
    if (!list.ok()) return list.status();
    overrides = *std::move(list);
  }
  return MergePolicy::Create(taxonomy, std::move(allowed), *wg,
                             std::move(overrides));
}

}  // namespace glassseg
