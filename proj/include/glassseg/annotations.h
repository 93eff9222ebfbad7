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

#ifndef GLASSSEG_ANNOTATIONS_H_
#define GLASSSEG_ANNOTATIONS_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/raster.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// One class-agnostic region proposed by an automatic mask generator.
struct Masklet {
  std::int64_t id = 0;
  double score = 0.0;  // predicted quality in [0, 1]
  Region region;       // non-empty

  friend bool operator==(const Masklet&, const Masklet&) = default;
};

// Masklet file:
//   {"size":[H,W],"masklets":[{"id":1,"score":0.87,"counts":[...]}, ...]}
// Masklets are returned in file order. Rejects duplicate ids, scores outside
// [0, 1], empty masks and malformed RLE.
struct MaskletFile {
  int width = 0;
  int height = 0;
  std::vector<Masklet> masklets;
};
absl::StatusOr<MaskletFile> ParseMasklets(std::string_view json_text);
absl::StatusOr<MaskletFile> ReadMasklets(const std::string& path);
std::string SerializeMasklets(const MaskletFile& file);

struct Instance {
  ClassId class_id = 0;
  std::string model;

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Instance-labeled ground truth. instance_map holds 0 for background and an
// instance id elsewhere; every nonzero id has an entry in `instances`, and
// every instance is of a glass class.
struct GroundTruth {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> instance_map;
  std::map<std::uint32_t, Instance> instances;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

// Class label per pixel: background outside instances, the instance class
// inside.
LabelMap ProjectLabels(const GroundTruth& gt, const Taxonomy& taxonomy);

// Pixel count per instance id.
std::map<std::uint32_t, std::size_t> InstanceAreas(const GroundTruth& gt);

struct GroundTruthOptions {
  // Model ids missing from the taxonomy registry are errors instead of
  // warnings.
  bool strict_models = false;
};

// Ground-truth file:
//   {"size":[H,W],"instances":[{"id":1,"class":"goblet",
//     "model":"SVALKA-goblet","counts":[...]}]}
// Instances must be pairwise disjoint. A model registered to a different
// class than the instance's is an error; an unregistered model is a warning
// appended to `warnings` (or an error under strict_models).
absl::StatusOr<GroundTruth> ParseGroundTruth(
    std::string_view json_text, const Taxonomy& taxonomy,
    const GroundTruthOptions& options = {},
    std::vector<std::string>* warnings = nullptr);
absl::StatusOr<GroundTruth> ReadGroundTruth(
    const std::string& path, const Taxonomy& taxonomy,
    const GroundTruthOptions& options = {},
    std::vector<std::string>* warnings = nullptr);
std::string SerializeGroundTruth(const GroundTruth& gt,
                                 const Taxonomy& taxonomy);

}  // namespace glassseg

#endif  // GLASSSEG_ANNOTATIONS_H_
