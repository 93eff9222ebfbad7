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

#ifndef GLASSSEG_RLE_H_
#define GLASSSEG_RLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/raster.h"

namespace glassseg {

// Uncompressed COCO run-length encoding: alternating run lengths over the
// pixels in column-major order (column 0 top to bottom, then column 1, ...),
// starting with a run of zeros which may be empty.
using RleCounts = std::vector<std::int64_t>;

// Errors if a count is negative or the counts do not sum to width * height.
absl::StatusOr<BitMask> DecodeRle(std::span<const std::int64_t> counts,
                                  int width, int height);

// Same as DecodeRle but produces the sparse row-major form directly.
absl::StatusOr<Region> DecodeRleRegion(std::span<const std::int64_t> counts,
                                       int width, int height);

// Canonical encoding: only the leading zero run may be empty.
RleCounts EncodeRle(const BitMask& mask);
RleCounts EncodeRle(const Region& region);

}  // namespace glassseg

#endif  // GLASSSEG_RLE_H_
