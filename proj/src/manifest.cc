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

#include "glassseg/manifest.h"

#include <algorithm>
#include <filesystem>
#include <set>

#include "absl/strings/str_cat.h"
#include "glassseg/io.h"
#include "json.hpp"

namespace glassseg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string Resolve(const std::string& base_dir, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

std::string Relativize(const std::string& base_dir, const std::string& path) {
  if (base_dir.empty()) return path;
  const fs::path rel = fs::path(path).lexically_relative(base_dir);
  if (rel.empty()) return path;
  return rel.generic_string();
}

absl::StatusOr<std::string> RequiredString(const json& entry,
                                           const char* key,
                                           const std::string& id) {
  if (!entry.contains(key) || !entry[key].is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("manifest record \"", id, "\": missing \"", key, "\""));
  }
  return entry[key].get<std::string>();
}

}  // namespace

absl::StatusOr<Manifest> ParseManifest(std::string_view json_text,
                                       const std::string& base_dir) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("manifest: not a JSON object");
  }
  Manifest m;
  if (doc.contains("taxonomy")) {
    if (!doc["taxonomy"].is_string()) {
      return absl::InvalidArgumentError("manifest: \"taxonomy\" must be a path");
    }
    m.taxonomy = Resolve(base_dir, doc["taxonomy"].get<std::string>());
  }
  if (!doc.contains("records") || !doc["records"].is_array()) {
    return absl::InvalidArgumentError("manifest: missing \"records\" array");
  }
  std::set<std::string> ids;
  for (const auto& entry : doc["records"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      return absl::InvalidArgumentError("manifest: each record needs a string \"id\"");
    }
    ManifestRecord r;
    r.id = entry["id"].get<std::string>();
    if (!ids.insert(r.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("manifest: duplicate record id \"", r.id, "\""));
    }
    absl::StatusOr<std::string> gt = RequiredString(entry, "groundtruth", r.id);
    if (!gt.ok()) return gt.status();
    absl::StatusOr<std::string> pred = RequiredString(entry, "prediction", r.id);
    if (!pred.ok()) return pred.status();
    r.groundtruth = Resolve(base_dir, *gt);
    r.prediction = Resolve(base_dir, *pred);
    if (entry.contains("masklets") && !entry["masklets"].is_null()) {
      if (!entry["masklets"].is_string()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "manifest record \"", r.id, "\": \"masklets\" must be a path"));
      }
      r.masklets = Resolve(base_dir, entry["masklets"].get<std::string>());
    }
    m.records.push_back(std::move(r));
  }
  std::sort(m.records.begin(), m.records.end(),
            [](const ManifestRecord& a, const ManifestRecord& b) {
              return a.id < b.id;
            });
  return m;
}

absl::StatusOr<Manifest> LoadManifest(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  const std::string base = fs::path(path).parent_path().string();
  absl::StatusOr<Manifest> m = ParseManifest(*text, base);
  if (!m.ok()) {
    return absl::Status(m.status().code(),
                        absl::StrCat(path, ": ", m.status().message()));
  }
  std::vector<std::string> referenced;
  if (m->taxonomy) referenced.push_back(*m->taxonomy);
  for (const auto& r : m->records) {
    referenced.push_back(r.groundtruth);
    referenced.push_back(r.prediction);
    if (r.masklets) referenced.push_back(*r.masklets);
  }
  for (const auto& file : referenced) {
    std::error_code ec;
    if (!fs::exists(file, ec)) {
      return absl::NotFoundError(
          absl::StrCat(path, ": referenced file does not exist: ", file));
    }
  }
  return m;
}

std::string SerializeManifest(const Manifest& manifest,
                              const std::string& base_dir) {
  json doc;
  doc["schema_version"] = 1;
  if (manifest.taxonomy) {
    doc["taxonomy"] = Relativize(base_dir, *manifest.taxonomy);
  }
  json records = json::array();
  for (const auto& r : manifest.records) {
    json entry = {{"id", r.id},
                  {"groundtruth", Relativize(base_dir, r.groundtruth)},
                  {"prediction", Relativize(base_dir, r.prediction)}};
    if (r.masklets) entry["masklets"] = Relativize(base_dir, *r.masklets);
    records.push_back(std::move(entry));
  }
  doc["records"] = std::move(records);
  return doc.dump(2) + "\n";
}

}  // namespace glassseg
