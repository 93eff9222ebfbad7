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

#include "glassseg/rle.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace glassseg {

namespace {

absl::Status CheckCounts(std::span<const std::int64_t> counts, int width,
                         int height) {
  if (width < 0 || height < 0) {
    return absl::InvalidArgumentError("negative mask dimensions");
  }
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative RLE count ", counts[i], " at index ", i));
    }
    sum += counts[i];
  }
  const std::int64_t expected = static_cast<std::int64_t>(width) * height;
  if (sum != expected) {
    return absl::InvalidArgumentError(absl::StrCat(
        "RLE counts sum to ", sum, ", expected ", expected, " (", width, "x",
        height, ")"));
  }
  return absl::OkStatus();
}

// Calls fn(x, y) for every set pixel, visiting runs in column-major order.
template <typename Fn>
void ForEachSetPixel(std::span<const std::int64_t> counts, int height,
                     Fn&& fn) {
  std::int64_t pos = 0;
  bool value = false;
  for (std::int64_t run : counts) {
    if (value) {
      for (std::int64_t p = pos; p < pos + run; ++p) {
        fn(static_cast<int>(p / height), static_cast<int>(p % height));
      }
    }
    pos += run;
    value = !value;
  }
}

template <typename Mask>
RleCounts EncodeColumnMajor(const Mask& is_set, int width, int height) {
  RleCounts counts;
  bool current = false;
  std::int64_t run = 0;
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      const bool v = is_set(x, y);
      if (v != current) {
        counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  counts.push_back(run);
  return counts;
}

}  // namespace

absl::StatusOr<BitMask> DecodeRle(std::span<const std::int64_t> counts,
                                  int width, int height) {
  if (absl::Status s = CheckCounts(counts, width, height); !s.ok()) return s;
  BitMask mask(width, height);
  ForEachSetPixel(counts, height, [&](int x, int y) { mask.Set(x, y); });
  return mask;
}

absl::StatusOr<Region> DecodeRleRegion(std::span<const std::int64_t> counts,
                                       int width, int height) {
  if (absl::Status s = CheckCounts(counts, width, height); !s.ok()) return s;
  BitMask mask(width, height);
  int min_y = height, max_y = -1, min_x = width, max_x = -1;
  ForEachSetPixel(counts, height, [&](int x, int y) {
    mask.Set(x, y);
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  });
  std::vector<Span> spans;
  for (int y = min_y; y <= max_y; ++y) {
    const auto row = static_cast<std::uint32_t>(y) * width;
    int x = min_x;
    while (x <= max_x) {
      while (x <= max_x && !mask(x, y)) ++x;
      const int start = x;
      while (x <= max_x && mask(x, y)) ++x;
      if (x > start) {
        spans.push_back({row + static_cast<std::uint32_t>(start),
                         static_cast<std::uint32_t>(x - start)});
      }
    }
  }
  return Region::FromSpans(width, height, std::move(spans));
}

RleCounts EncodeRle(const BitMask& mask) {
  return EncodeColumnMajor([&](int x, int y) { return mask(x, y); },
                           mask.width(), mask.height());
}

RleCounts EncodeRle(const Region& region) {
  return EncodeRle(region.ToMask());
}

}  // namespace glassseg
