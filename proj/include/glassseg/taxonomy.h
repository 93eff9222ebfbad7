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

#ifndef GLASSSEG_TAXONOMY_H_
#define GLASSSEG_TAXONOMY_H_

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace glassseg {

// Label maps are stored one byte per pixel, so a taxonomy holds at most 256
// classes.
inline constexpr std::size_t kMaxClasses = 256;

using ClassId = std::uint8_t;
using LabelSet = std::bitset<kMaxClasses>;

enum class ClassKind { kBackground, kGlass };

struct ClassInfo {
  ClassId id = 0;
  std::string name;
  ClassKind kind = ClassKind::kGlass;

  friend bool operator==(const ClassInfo&, const ClassInfo&) = default;
};

// The class universe and the 3D-model registry. Immutable after loading.
//
// Class ids are positional: the i-th declared class has id i. Exactly one
// class is the background; every registered model maps to a glass class and
// the unseen set only contains glass classes.
class Taxonomy {
 public:
  // Validates and builds a taxonomy from already-parsed parts. Class ids in
  // `classes` are ignored and reassigned by position.
  static absl::StatusOr<Taxonomy> Create(
      std::vector<ClassInfo> classes,
      std::map<std::string, std::string> models,
      std::set<std::string> unseen);

  std::size_t size() const { return classes_.size(); }
  const std::vector<ClassInfo>& classes() const { return classes_; }
  const ClassInfo& at(ClassId id) const { return classes_.at(id); }
  ClassId background() const { return background_; }
  bool is_glass(ClassId id) const {
    return id < classes_.size() && id != background_;
  }
  bool contains(ClassId id) const { return id < classes_.size(); }

  // Exact, case-sensitive lookup.
  absl::StatusOr<ClassId> ClassByName(std::string_view name) const;

  const std::map<std::string, ClassId>& models() const { return models_; }
  bool has_model(const std::string& model) const {
    return models_.contains(model);
  }
  const std::set<ClassId>& unseen() const { return unseen_; }

  std::vector<ClassId> glass_classes() const;

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;

 private:
  std::vector<ClassInfo> classes_;
  std::map<std::string, ClassId> models_;
  std::set<ClassId> unseen_;
  ClassId background_ = 0;
};

// Parses the JSON taxonomy document:
//   {"classes":[{"name":"background","kind":"background"},
//               {"name":"goblet","kind":"glass"}, ...],
//    "models":{"POKAL":"water_glass", ...},
//    "unseen":["goblet"]}
// "models" and "unseen" are optional.
absl::StatusOr<Taxonomy> ParseTaxonomy(std::string_view json_text);
absl::StatusOr<Taxonomy> LoadTaxonomy(const std::string& path);

// Canonical JSON form; ParseTaxonomy(SerializeTaxonomy(t)) == t.
std::string SerializeTaxonomy(const Taxonomy& taxonomy);

// Background plus the eleven default glass categories,
// without a model registry.
Taxonomy DefaultTaxonomy();

}  // namespace glassseg

#endif  // GLASSSEG_TAXONOMY_H_
