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

#include "glassseg/raster.h"

#include <algorithm>

#include "absl/strings/str_cat.h"

namespace glassseg {

absl::Status ValidateLabels(const LabelMap& map, const Taxonomy& taxonomy) {
  const std::size_t k = taxonomy.size();
  if (k >= kMaxClasses) return absl::OkStatus();
  const auto data = map.data();
  const auto it = std::find_if(data.begin(), data.end(),
                               [k](ClassId v) { return v >= k; });
  if (it == data.end()) return absl::OkStatus();
  const auto index = static_cast<std::size_t>(it - data.begin());
  return absl::InvalidArgumentError(absl::StrCat(
      "class id out of range: ", static_cast<int>(*it), " at pixel (",
      index % map.width(), ",", index / map.width(), "), taxonomy has ", k,
      " classes"));
}

std::size_t BitMask::Area() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

Region Region::FromMask(const BitMask& mask) {
  Region r;
  r.width_ = mask.width();
  r.height_ = mask.height();
  const auto w = static_cast<std::uint32_t>(mask.width());
  for (int y = 0; y < mask.height(); ++y) {
    const std::uint32_t row = static_cast<std::uint32_t>(y) * w;
    std::uint32_t x = 0;
    while (x < w) {
      while (x < w && !mask[row + x]) ++x;
      const std::uint32_t start = x;
      while (x < w && mask[row + x]) ++x;
      if (x > start) {
        r.spans_.push_back({row + start, x - start});
        r.area_ += x - start;
      }
    }
  }
  return r;
}

Region Region::FromSpans(int width, int height, std::vector<Span> spans) {
  Region r;
  r.width_ = width;
  r.height_ = height;
  for (const Span& s : spans) r.area_ += s.length;
  r.spans_ = std::move(spans);
  return r;
}

BitMask Region::ToMask() const {
  BitMask mask(width_, height_);
  for (const Span& s : spans_) {
    for (std::uint32_t i = 0; i < s.length; ++i) mask.Set(s.offset + i);
  }
  return mask;
}

}  // namespace glassseg
