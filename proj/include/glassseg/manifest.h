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

#ifndef GLASSSEG_MANIFEST_H_
#define GLASSSEG_MANIFEST_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace glassseg {

struct ManifestRecord {
  std::string id;
  std::string groundtruth;
  std::string prediction;
  std::optional<std::string> masklets;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

// Dataset manifest:
//   {"schema_version":1,"taxonomy":"taxonomy.json",
//    "records":[{"id":"scene_0000","groundtruth":"scene_0000/gt.json",
//                "prediction":"scene_0000/pred.pgm",
//                "masklets":"scene_0000/masklets.json"}, ...]}
// Relative paths are resolved against the manifest's directory when loaded
// from a file. Record ids are unique; records are kept sorted by id.
struct Manifest {
  std::optional<std::string> taxonomy;
  std::vector<ManifestRecord> records;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

absl::StatusOr<Manifest> ParseManifest(std::string_view json_text,
                                       const std::string& base_dir);
// Also checks that every referenced file exists (kNotFound otherwise).
absl::StatusOr<Manifest> LoadManifest(const std::string& path);

// Paths are written relative to `base_dir` when they lie beneath it.
std::string SerializeManifest(const Manifest& manifest,
                              const std::string& base_dir);

}  // namespace glassseg

#endif  // GLASSSEG_MANIFEST_H_
