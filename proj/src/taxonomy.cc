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

#include "glassseg/taxonomy.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "glassseg/io.h"
#include "json.hpp"

namespace glassseg {

using nlohmann::json;

absl::StatusOr<Taxonomy> Taxonomy::Create(
    std::vector<ClassInfo> classes, std::map<std::string, std::string> models,
    std::set<std::string> unseen) {
  if (classes.empty()) {
    return absl::InvalidArgumentError("taxonomy declares no classes");
  }
  if (classes.size() > kMaxClasses) {
    return absl::InvalidArgumentError(
        absl::StrCat("taxonomy declares ", classes.size(),
                     " classes; at most ", kMaxClasses, " are supported"));
  }
  Taxonomy t;
  std::map<std::string, ClassId, std::less<>> by_name;
  int background_count = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    ClassInfo info = std::move(classes[i]);
    info.id = static_cast<ClassId>(i);
    if (info.name.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("class ", i, " has an empty name"));
    }
    if (!by_name.emplace(info.name, info.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate class name \"", info.name, "\""));
    }
    if (info.kind == ClassKind::kBackground) {
      ++background_count;
      t.background_ = info.id;
    }
    t.classes_.push_back(std::move(info));
  }
  if (background_count == 0) {
    return absl::InvalidArgumentError("no background class");
  }
  if (background_count > 1) {
    return absl::InvalidArgumentError("multiple background classes");
  }
  for (auto& [model, class_name] : models) {
    auto it = by_name.find(class_name);
    if (it == by_name.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "model \"", model, "\" references unknown class \"", class_name,
          "\""));
    }
    if (it->second == t.background_) {
      return absl::InvalidArgumentError(
          absl::StrCat("model \"", model, "\" maps to the background class"));
    }
    t.models_.emplace(model, it->second);
  }
  for (const auto& name : unseen) {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unseen references unknown class \"", name, "\""));
    }
    if (it->second == t.background_) {
      return absl::InvalidArgumentError(
          "unseen references the background class");
    }
    t.unseen_.insert(it->second);
  }
  return t;
}

absl::StatusOr<ClassId> Taxonomy::ClassByName(std::string_view name) const {
  for (const auto& c : classes_) {
    if (c.name == name) return c.id;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown class name \"", std::string(name), "\""));
}

std::vector<ClassId> Taxonomy::glass_classes() const {
  std::vector<ClassId> out;
  for (const auto& c : classes_) {
    if (c.kind == ClassKind::kGlass) out.push_back(c.id);
  }
  return out;
}

absl::StatusOr<Taxonomy> ParseTaxonomy(std::string_view json_text) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("taxonomy: not a JSON object");
  }
  auto classes_it = doc.find("classes");
  if (classes_it == doc.end() || !classes_it->is_array()) {
    return absl::InvalidArgumentError("taxonomy: missing \"classes\" array");
  }
  std::vector<ClassInfo> classes;
  for (const auto& entry : *classes_it) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry["name"].is_string()) {
      return absl::InvalidArgumentError(
          "taxonomy: each class needs a string \"name\"");
    }
    ClassInfo info;
    info.name = entry["name"].get<std::string>();
    std::string kind = "glass";
    if (entry.contains("kind")) {
      if (!entry["kind"].is_string()) {
        return absl::InvalidArgumentError("taxonomy: \"kind\" must be a string");
      }
      kind = entry["kind"].get<std::string>();
    }
    if (kind == "background") {
      info.kind = ClassKind::kBackground;
    } else if (kind == "glass") {
      info.kind = ClassKind::kGlass;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("taxonomy: unknown class kind \"", kind, "\""));
    }
    classes.push_back(std::move(info));
  }

  std::map<std::string, std::string> models;
  if (auto it = doc.find("models"); it != doc.end()) {
    if (!it->is_object()) {
      return absl::InvalidArgumentError("taxonomy: \"models\" must be an object");
    }
    for (auto& [model, cls] : it->items()) {
      if (!cls.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("taxonomy: model \"", model, "\" needs a class name"));
      }
      models.emplace(model, cls.get<std::string>());
    }
  }
  std::set<std::string> unseen;
  if (auto it = doc.find("unseen"); it != doc.end()) {
    if (!it->is_array()) {
      return absl::InvalidArgumentError("taxonomy: \"unseen\" must be an array");
    }
    for (const auto& name : *it) {
      if (!name.is_string()) {
        return absl::InvalidArgumentError(
            "taxonomy: \"unseen\" entries must be strings");
      }
      unseen.insert(name.get<std::string>());
    }
  }
  return Taxonomy::Create(std::move(classes), std::move(models),
                          std::move(unseen));
}

absl::StatusOr<Taxonomy> LoadTaxonomy(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<Taxonomy> t = ParseTaxonomy(*text);
  if (!t.ok()) {
    return absl::Status(t.status().code(),
                        absl::StrCat(path, ": ", t.status().message()));
  }
  return t;
}

std::string SerializeTaxonomy(const Taxonomy& taxonomy) {
  json doc;
  json classes = json::array();
  for (const auto& c : taxonomy.classes()) {
    classes.push_back(
        {{"name", c.name},
         {"kind", c.kind == ClassKind::kBackground ? "background" : "glass"}});
  }
  doc["classes"] = std::move(classes);
  json models = json::object();
  for (const auto& [model, id] : taxonomy.models()) {
    models[model] = taxonomy.at(id).name;
  }
  doc["models"] = std::move(models);
  json unseen = json::array();
  for (ClassId id : taxonomy.unseen()) unseen.push_back(taxonomy.at(id).name);
  doc["unseen"] = std::move(unseen);
  return doc.dump(2) + "\n";
}

Taxonomy DefaultTaxonomy() {
  static const char* const kNames[] = {
      "goblet",          "water_glass",      "beer_mug",
      "brandy_snifter",  "carafe",           "red_wine_glass",
      "white_wine_glass", "tulip_beer_glass", "champagne_flute",
      "whiskey_tumbler", "pint_glass"};
  std::vector<ClassInfo> classes = {{0, "background", ClassKind::kBackground}};
  for (const char* name : kNames) {
    classes.push_back({0, name, ClassKind::kGlass});
  }
  return *Taxonomy::Create(std::move(classes), {}, {});
}

}  // namespace glassseg
