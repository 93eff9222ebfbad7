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

#include "glassseg/pgm.h"

#include <cctype>
#include <cstdint>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "glassseg/io.h"

namespace glassseg {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void SkipWhitespaceAndComments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads a positive decimal integer preceded by whitespace/comments.
  absl::StatusOr<int> ReadInt(const char* what) {
    SkipWhitespaceAndComments();
    std::int64_t value = 0;
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1 << 24)) {
        return absl::InvalidArgumentError(
            absl::StrCat("malformed PGM header: ", what, " too large"));
      }
      ++pos_;
    }
    if (pos_ == start) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed PGM header: expected ", what));
    }
    return static_cast<int>(value);
  }

  std::size_t pos() const { return pos_; }
  void Advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<LabelMap> ParsePgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    return absl::InvalidArgumentError("malformed PGM header: missing P5 magic");
  }
  HeaderReader reader(bytes);
  reader.Advance(2);
  absl::StatusOr<int> width = reader.ReadInt("width");
  if (!width.ok()) return width.status();
  absl::StatusOr<int> height = reader.ReadInt("height");
  if (!height.ok()) return height.status();
  absl::StatusOr<int> maxval = reader.ReadInt("maxval");
  if (!maxval.ok()) return maxval.status();
  if (*width < 1 || *height < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed PGM header: empty image ", *width, "x",
                     *height));
  }
  if (*maxval != 255) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported PGM maxval ", *maxval, " (expected 255)"));
  }
  if (reader.pos() >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[reader.pos()]))) {
    return absl::InvalidArgumentError(
        "malformed PGM header: missing whitespace after maxval");
  }
  reader.Advance(1);
  const std::size_t pixels = static_cast<std::size_t>(*width) * *height;
  const std::size_t remaining = bytes.size() - reader.pos();
  if (remaining < pixels) {
    return absl::InvalidArgumentError(absl::StrCat(
        "truncated PGM: ", remaining, " pixel bytes, expected ", pixels));
  }
  if (remaining > pixels) {
    return absl::InvalidArgumentError(absl::StrCat(
        "PGM has ", remaining - pixels, " trailing bytes"));
  }
  std::vector<ClassId> data(pixels);
  std::memcpy(data.data(), bytes.data() + reader.pos(), pixels);
  return LabelMap(*width, *height, std::move(data));
}

std::string SerializePgm(const LabelMap& map) {
  std::string out = absl::StrCat("P5\n", map.width(), " ", map.height(),
                                 "\n255\n");
  const auto data = map.data();
  out.append(reinterpret_cast<const char*>(data.data()), data.size());
  return out;
}

absl::StatusOr<LabelMap> ReadLabelMap(const std::string& path,
                                      const Taxonomy* taxonomy) {
  absl::StatusOr<std::string> bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  absl::StatusOr<LabelMap> map = ParsePgm(*bytes);
  if (map.ok() && taxonomy != nullptr) {
    if (absl::Status s = ValidateLabels(*map, *taxonomy); !s.ok()) {
      map = s;
    }
  }
  if (!map.ok()) {
    return absl::Status(map.status().code(),
                        absl::StrCat(path, ": ", map.status().message()));
  }
  return map;
}

absl::Status WriteLabelMap(const LabelMap& map, const std::string& path) {
  return WriteFile(path, SerializePgm(map));
}

}  // namespace glassseg
