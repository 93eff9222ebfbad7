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

#include "glassseg/annotations.h"

#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "glassseg/io.h"
#include "glassseg/rle.h"
#include "json.hpp"

namespace glassseg {

using nlohmann::json;

namespace {

absl::StatusOr<json> ParseObject(std::string_view text, const char* what) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, ": not a JSON object"));
  }
  return doc;
}

absl::Status ReadSize(const json& doc, int& width, int& height) {
  auto it = doc.find("size");
  if (it == doc.end() || !it->is_array() || it->size() != 2 ||
      !(*it)[0].is_number_integer() || !(*it)[1].is_number_integer()) {
    return absl::InvalidArgumentError("\"size\" must be [height, width]");
  }
  const auto h = (*it)[0].get<std::int64_t>();
  const auto w = (*it)[1].get<std::int64_t>();
  if (h < 1 || w < 1 || h > (1 << 16) || w > (1 << 16)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid size [", h, ",", w, "]"));
  }
  height = static_cast<int>(h);
  width = static_cast<int>(w);
  return absl::OkStatus();
}

absl::StatusOr<RleCounts> ReadCounts(const json& entry) {
  auto it = entry.find("counts");
  if (it == entry.end() || !it->is_array()) {
    return absl::InvalidArgumentError("missing \"counts\" array");
  }
  RleCounts counts;
  counts.reserve(it->size());
  for (const auto& c : *it) {
    if (!c.is_number_integer()) {
      return absl::InvalidArgumentError("RLE counts must be integers");
    }
    counts.push_back(c.get<std::int64_t>());
  }
  return counts;
}

absl::Status WithContext(const absl::Status& s, const std::string& context) {
  return absl::Status(s.code(), absl::StrCat(context, ": ", s.message()));
}

}  // namespace

absl::StatusOr<MaskletFile> ParseMasklets(std::string_view json_text) {
  absl::StatusOr<json> doc = ParseObject(json_text, "masklets");
  if (!doc.ok()) return doc.status();
  MaskletFile file;
  if (absl::Status s = ReadSize(*doc, file.width, file.height); !s.ok()) {
    return s;
  }
  auto list = doc->find("masklets");
  if (list == doc->end() || !list->is_array()) {
    return absl::InvalidArgumentError("missing \"masklets\" array");
  }
  std::set<std::int64_t> seen;
  for (const auto& entry : *list) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_number_integer()) {
      return absl::InvalidArgumentError("each masklet needs an integer \"id\"");
    }
    Masklet m;
    m.id = entry["id"].get<std::int64_t>();
    const std::string context = absl::StrCat("masklet ", m.id);
    if (!seen.insert(m.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate masklet id ", m.id));
    }
    if (!entry.contains("score") || !entry["score"].is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat(context, ": missing numeric \"score\""));
    }
    m.score = entry["score"].get<double>();
    if (!(m.score >= 0.0 && m.score <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat(context, ": score ", m.score, " outside [0, 1]"));
    }
    absl::StatusOr<RleCounts> counts = ReadCounts(entry);
    if (!counts.ok()) return WithContext(counts.status(), context);
    absl::StatusOr<Region> region =
        DecodeRleRegion(*counts, file.width, file.height);
    if (!region.ok()) return WithContext(region.status(), context);
    if (region->empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(context, ": zero-area mask"));
    }
    m.region = *std::move(region);
    file.masklets.push_back(std::move(m));
  }
  return file;
}

absl::StatusOr<MaskletFile> ReadMasklets(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<MaskletFile> file = ParseMasklets(*text);
  if (!file.ok()) return WithContext(file.status(), path);
  return file;
}

std::string SerializeMasklets(const MaskletFile& file) {
  json doc;
  doc["size"] = {file.height, file.width};
  json list = json::array();
  for (const Masklet& m : file.masklets) {
    list.push_back(
        {{"id", m.id}, {"score", m.score}, {"counts", EncodeRle(m.region)}});
  }
  doc["masklets"] = std::move(list);
  return doc.dump() + "\n";
}

LabelMap ProjectLabels(const GroundTruth& gt, const Taxonomy& taxonomy) {
  LabelMap out(gt.width, gt.height, taxonomy.background());
  // Instance ids are typically few and small; a linear cache of the last id
  // avoids a map lookup per pixel inside an object.
  std::uint32_t last_id = 0;
  ClassId last_class = taxonomy.background();
  for (std::size_t i = 0; i < gt.instance_map.size(); ++i) {
    const std::uint32_t id = gt.instance_map[i];
    if (id == 0) continue;
    if (id != last_id) {
      last_id = id;
      last_class = gt.instances.at(id).class_id;
    }
    out[i] = last_class;
  }
  return out;
}

std::map<std::uint32_t, std::size_t> InstanceAreas(const GroundTruth& gt) {
  std::map<std::uint32_t, std::size_t> areas;
  for (const auto& [id, inst] : gt.instances) areas[id] = 0;
  for (std::uint32_t id : gt.instance_map) {
    if (id != 0) ++areas[id];
  }
  return areas;
}

absl::StatusOr<GroundTruth> ParseGroundTruth(std::string_view json_text,
                                             const Taxonomy& taxonomy,
                                             const GroundTruthOptions& options,
                                             std::vector<std::string>* warnings) {
  absl::StatusOr<json> doc = ParseObject(json_text, "ground truth");
  if (!doc.ok()) return doc.status();
  GroundTruth gt;
  if (absl::Status s = ReadSize(*doc, gt.width, gt.height); !s.ok()) return s;
  gt.instance_map.assign(static_cast<std::size_t>(gt.width) * gt.height, 0);
  auto list = doc->find("instances");
  if (list == doc->end() || !list->is_array()) {
    return absl::InvalidArgumentError("missing \"instances\" array");
  }
  for (const auto& entry : *list) {
    if (!entry.is_object() || !entry.contains("id") ||
        !entry["id"].is_number_integer()) {
      return absl::InvalidArgumentError(
          "each instance needs an integer \"id\"");
    }
    const auto raw_id = entry["id"].get<std::int64_t>();
    if (raw_id < 1 || raw_id > 0xFFFFFFFFLL) {
      return absl::InvalidArgumentError(
          absl::StrCat("instance id ", raw_id, " out of range (must be >= 1)"));
    }
    const auto id = static_cast<std::uint32_t>(raw_id);
    const std::string context = absl::StrCat("instance ", id);
    if (gt.instances.contains(id)) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate instance id ", id));
    }
    if (!entry.contains("class") || !entry["class"].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(context, ": missing \"class\""));
    }
    const std::string class_name = entry["class"].get<std::string>();
    absl::StatusOr<ClassId> cls = taxonomy.ClassByName(class_name);
    if (!cls.ok()) return WithContext(cls.status(), context);
    if (!taxonomy.is_glass(*cls)) {
      return absl::InvalidArgumentError(
          absl::StrCat(context, ": instances must be of a glass class, got \"",
                       class_name, "\""));
    }
    Instance inst{*cls, ""};
    if (entry.contains("model")) {
      if (!entry["model"].is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat(context, ": \"model\" must be a string"));
      }
      inst.model = entry["model"].get<std::string>();
    }
    if (auto reg = taxonomy.models().find(inst.model);
        reg == taxonomy.models().end()) {
      const std::string msg = absl::StrCat(
          context, ": model \"", inst.model, "\" is not in the taxonomy registry");
      if (options.strict_models) return absl::InvalidArgumentError(msg);
      if (warnings != nullptr) warnings->push_back(msg);
    } else if (reg->second != *cls) {
      return absl::InvalidArgumentError(absl::StrCat(
          context, ": model \"", inst.model, "\" is registered as \"",
          taxonomy.at(reg->second).name, "\", not \"", class_name, "\""));
    }
    absl::StatusOr<RleCounts> counts = ReadCounts(entry);
    if (!counts.ok()) return WithContext(counts.status(), context);
    absl::StatusOr<Region> region = DecodeRleRegion(*counts, gt.width, gt.height);
    if (!region.ok()) return WithContext(region.status(), context);
    for (const Span& span : region->spans()) {
      for (std::uint32_t i = span.offset; i < span.offset + span.length; ++i) {
        if (gt.instance_map[i] != 0) {
          return absl::InvalidArgumentError(absl::StrCat(
              "instances overlap at pixel (", i % gt.width, ",", i / gt.width,
              "): ", gt.instance_map[i], " and ", id));
        }
        gt.instance_map[i] = id;
      }
    }
    gt.instances.emplace(id, std::move(inst));
  }
  return gt;
}

absl::StatusOr<GroundTruth> ReadGroundTruth(const std::string& path,
                                            const Taxonomy& taxonomy,
                                            const GroundTruthOptions& options,
                                            std::vector<std::string>* warnings) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  absl::StatusOr<GroundTruth> gt =
      ParseGroundTruth(*text, taxonomy, options, warnings);
  if (!gt.ok()) return WithContext(gt.status(), path);
  return gt;
}

std::string SerializeGroundTruth(const GroundTruth& gt,
                                 const Taxonomy& taxonomy) {
  std::map<std::uint32_t, BitMask> masks;
  for (const auto& [id, inst] : gt.instances) {
    masks.emplace(id, BitMask(gt.width, gt.height));
  }
  for (std::size_t i = 0; i < gt.instance_map.size(); ++i) {
    if (gt.instance_map[i] != 0) masks.at(gt.instance_map[i]).Set(i);
  }
  json doc;
  doc["size"] = {gt.height, gt.width};
  json list = json::array();
  for (const auto& [id, inst] : gt.instances) {
    list.push_back({{"id", id},
                    {"class", taxonomy.at(inst.class_id).name},
                    {"model", inst.model},
                    {"counts", EncodeRle(masks.at(id))}});
  }
  doc["instances"] = std::move(list);
  return doc.dump() + "\n";
}

}  // namespace glassseg
