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

#ifndef GLASSSEG_CONFUSION_H_
#define GLASSSEG_CONFUSION_H_

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/annotations.h"
#include "glassseg/raster.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// K x K pixel counts; rows are ground-truth classes, columns predictions.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t classes)
      : k_(classes), counts_(classes * classes, 0) {}

  std::size_t classes() const { return k_; }
  std::uint64_t at(ClassId gt, ClassId pred) const {
    return counts_[gt * k_ + pred];
  }
  std::uint64_t& at(ClassId gt, ClassId pred) { return counts_[gt * k_ + pred]; }
  std::uint64_t RowSum(ClassId gt) const;

  // Componentwise sum; fails on a class-count mismatch.
  absl::Status Add(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::uint64_t> counts_;
};

// K x K fractions, row-major.
class FractionMatrix {
 public:
  FractionMatrix() = default;
  explicit FractionMatrix(std::size_t classes)
      : k_(classes), values_(classes * classes, 0.0) {}

  std::size_t classes() const { return k_; }
  double at(ClassId row, ClassId col) const { return values_[row * k_ + col]; }
  double& at(ClassId row, ClassId col) { return values_[row * k_ + col]; }

  friend bool operator==(const FractionMatrix&,
                         const FractionMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<double> values_;
};

// Adds one image's pixels to `acc`: cell (gt class, predicted class) per
// pixel, background row and column included.
absl::Status AccumulateConfusion(const GroundTruth& gt, const LabelMap& pred,
                                 const Taxonomy& taxonomy,
                                 ConfusionMatrix& acc);

// Divides every row by its sum (fraction of ground-truth class r predicted
// as c). All-zero rows stay zero.
FractionMatrix RowNormalize(const ConfusionMatrix& matrix);

struct MergeDerivationConfig {
  double similarity_min = 0.05;
  std::set<ClassId> excluded;
};

using ClassPair = std::pair<ClassId, ClassId>;  // first < second
using PairSet = std::set<ClassPair>;

inline ClassPair MakePair(ClassId a, ClassId b) {
  return a < b ? ClassPair{a, b} : ClassPair{b, a};
}

// {c, d} is similar when c != d, both are glass classes, neither is
// excluded, and fractions(c, d) or fractions(d, c) is strictly greater than
// similarity_min.
absl::StatusOr<PairSet> DeriveSimilarPairs(const FractionMatrix& fractions,
                                           const MergeDerivationConfig& config,
                                           const Taxonomy& taxonomy);

// Confusion file, JSON:
//   {"schema_version":1,"classes":[names in taxonomy order],
//    "counts":[[...], ...]}
// A file may carry "fractions" instead of "counts" (already row-normalized
// values, used verbatim by derive-merges).
std::string SerializeConfusionJson(const ConfusionMatrix& matrix,
                                   const Taxonomy& taxonomy);
std::string SerializeFractionsJson(const FractionMatrix& fractions,
                                   const Taxonomy& taxonomy);
std::string SerializeConfusionCsv(const ConfusionMatrix& matrix,
                                  const Taxonomy& taxonomy);

// Reads either form and returns row fractions: "counts" are row-normalized,
// "fractions" are returned as written (each must lie in [0, 1]).
absl::StatusOr<FractionMatrix> ParseConfusionFractions(
    std::string_view json_text, const Taxonomy& taxonomy);
absl::StatusOr<ConfusionMatrix> ParseConfusionCounts(
    std::string_view json_text, const Taxonomy& taxonomy);

}  // namespace glassseg

#endif  // GLASSSEG_CONFUSION_H_
