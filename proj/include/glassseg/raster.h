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

#ifndef GLASSSEG_RASTER_H_
#define GLASSSEG_RASTER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// Per-pixel class ids, row-major.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height, ClassId fill = 0)
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {}
  LabelMap(int width, int height, std::vector<ClassId> data)
      : width_(width), height_(height), data_(std::move(data)) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  ClassId operator()(int x, int y) const { return data_[Index(x, y)]; }
  ClassId& operator()(int x, int y) { return data_[Index(x, y)]; }
  ClassId operator[](std::size_t i) const { return data_[i]; }
  ClassId& operator[](std::size_t i) { return data_[i]; }

  std::span<const ClassId> data() const { return data_; }
  std::span<ClassId> data() { return data_; }

  bool SameShape(int width, int height) const {
    return width_ == width && height_ == height;
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<ClassId> data_;
};

// Fails if any pixel is not a class of `taxonomy`.
absl::Status ValidateLabels(const LabelMap& map, const Taxonomy& taxonomy);

// One boolean per pixel, row-major.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int width, int height)
      : width_(width),
        height_(height),
        bits_(static_cast<std::size_t>(width) * height, 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool operator()(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void Set(int x, int y, bool value = true) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
  }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void Set(std::size_t i, bool value = true) { bits_[i] = value ? 1 : 0; }

  std::size_t Area() const;

  friend bool operator==(const BitMask&, const BitMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Horizontal run of pixels: `length` pixels starting at row-major index
// `offset`. Never crosses a row boundary.
struct Span {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

// Sparse row-major form of a BitMask: maximal spans in ascending offset
// order. Masklets on large frames are held this way so per-masklet work is
// proportional to the masklet area instead of the frame size.
class Region {
 public:
  Region() = default;

  static Region FromMask(const BitMask& mask);
  // `spans` must be sorted, non-overlapping and row-contained.
  static Region FromSpans(int width, int height, std::vector<Span> spans);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Span>& spans() const { return spans_; }
  std::size_t Area() const { return area_; }
  bool empty() const { return area_ == 0; }

  BitMask ToMask() const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::size_t area_ = 0;
  std::vector<Span> spans_;
};

}  // namespace glassseg

#endif  // GLASSSEG_RASTER_H_
