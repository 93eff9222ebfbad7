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

#ifndef GLASSSEG_PGM_H_
#define GLASSSEG_PGM_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "glassseg/raster.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// Label maps on disk are binary PGM: "P5", ASCII width and height, maxval
// 255, a single whitespace byte, then width*height bytes row-major. The
// pixel value is the class id. The writer always emits
// "P5\n<width> <height>\n255\n"; the reader accepts any netpbm-conformant
// header whitespace and '#' comments.
absl::StatusOr<LabelMap> ParsePgm(std::string_view bytes);
std::string SerializePgm(const LabelMap& map);

// When `taxonomy` is given, pixel values >= its class count are rejected.
absl::StatusOr<LabelMap> ReadLabelMap(const std::string& path,
                                      const Taxonomy* taxonomy = nullptr);
absl::Status WriteLabelMap(const LabelMap& map, const std::string& path);

}  // namespace glassseg

#endif  // GLASSSEG_PGM_H_
