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

#include "glassseg/confusion.h"

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace glassseg {

using nlohmann::json;

std::uint64_t ConfusionMatrix::RowSum(ClassId gt) const {
  std::uint64_t sum = 0;
  for (std::size_t c = 0; c < k_; ++c) sum += counts_[gt * k_ + c];
  return sum;
}

absl::Status ConfusionMatrix::Add(const ConfusionMatrix& other) {
  if (other.k_ != k_) {
    return absl::InvalidArgumentError(absl::StrCat(
        "confusion matrices differ in class count: ", k_, " vs ", other.k_));
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return absl::OkStatus();
}

absl::Status AccumulateConfusion(const GroundTruth& gt, const LabelMap& pred,
                                 const Taxonomy& taxonomy,
                                 ConfusionMatrix& acc) {
  if (!pred.SameShape(gt.width, gt.height)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prediction is ", pred.width(), "x", pred.height(),
        " but ground truth is ", gt.width, "x", gt.height));
  }
  if (acc.classes() != taxonomy.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "confusion matrix has ", acc.classes(), " classes, taxonomy has ",
        taxonomy.size()));
  }
  if (absl::Status s = ValidateLabels(pred, taxonomy); !s.ok()) return s;
  const LabelMap truth = ProjectLabels(gt, taxonomy);
  for (std::size_t i = 0; i < truth.size(); ++i) ++acc.at(truth[i], pred[i]);
  return absl::OkStatus();
}

FractionMatrix RowNormalize(const ConfusionMatrix& matrix) {
  const std::size_t k = matrix.classes();
  FractionMatrix out(k);
  for (std::size_t r = 0; r < k; ++r) {
    const auto row = static_cast<ClassId>(r);
    const std::uint64_t sum = matrix.RowSum(row);
    if (sum == 0) continue;
    for (std::size_t c = 0; c < k; ++c) {
      const auto col = static_cast<ClassId>(c);
      out.at(row, col) = static_cast<double>(matrix.at(row, col)) /
                         static_cast<double>(sum);
    }
  }
  return out;
}

absl::StatusOr<PairSet> DeriveSimilarPairs(const FractionMatrix& fractions,
                                           const MergeDerivationConfig& config,
                                           const Taxonomy& taxonomy) {
  if (fractions.classes() != taxonomy.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fraction matrix has ", fractions.classes(),
        " classes, taxonomy has ", taxonomy.size()));
  }
  if (!(config.similarity_min >= 0.0 && config.similarity_min <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "similarity threshold ", config.similarity_min, " outside [0, 1]"));
  }
  for (ClassId c : config.excluded) {
    if (!taxonomy.is_glass(c)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "excluded class ", static_cast<int>(c), " is not a glass class"));
    }
  }
  PairSet pairs;
  const std::vector<ClassId> glass = taxonomy.glass_classes();
  for (std::size_t i = 0; i < glass.size(); ++i) {
    const ClassId c = glass[i];
    if (config.excluded.contains(c)) continue;
    for (std::size_t j = i + 1; j < glass.size(); ++j) {
      const ClassId d = glass[j];
      if (config.excluded.contains(d)) continue;
      if (fractions.at(c, d) > config.similarity_min ||
          fractions.at(d, c) > config.similarity_min) {
        pairs.insert(MakePair(c, d));
      }
    }
  }
  return pairs;
}

namespace {

json ClassNames(const Taxonomy& taxonomy) {
  json names = json::array();
  for (const auto& c : taxonomy.classes()) names.push_back(c.name);
  return names;
}

absl::StatusOr<json> ParseMatrixDoc(std::string_view json_text,
                                    const Taxonomy& taxonomy) {
  json doc = json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("confusion file: not a JSON object");
  }
  if (!doc.contains("classes") || doc["classes"] != ClassNames(taxonomy)) {
    return absl::InvalidArgumentError(
        "confusion file: \"classes\" must list the taxonomy classes in order");
  }
  return doc;
}

absl::Status CheckSquare(const json& rows, std::size_t k,
                         const char* key) {
  if (!rows.is_array() || rows.size() != k) {
    return absl::InvalidArgumentError(
        absl::StrCat("confusion file: \"", key, "\" must have ", k, " rows"));
  }
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != k) {
      return absl::InvalidArgumentError(absl::StrCat(
          "confusion file: every \"", key, "\" row must have ", k, " entries"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::string SerializeConfusionJson(const ConfusionMatrix& matrix,
                                   const Taxonomy& taxonomy) {
  json doc;
  doc["schema_version"] = 1;
  doc["classes"] = ClassNames(taxonomy);
  json rows = json::array();
  for (std::size_t r = 0; r < matrix.classes(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < matrix.classes(); ++c) {
      row.push_back(matrix.at(static_cast<ClassId>(r), static_cast<ClassId>(c)));
    }
    rows.push_back(std::move(row));
  }
  doc["counts"] = std::move(rows);
  return doc.dump(1) + "\n";
}

std::string SerializeFractionsJson(const FractionMatrix& fractions,
                                   const Taxonomy& taxonomy) {
  json doc;
  doc["schema_version"] = 1;
  doc["classes"] = ClassNames(taxonomy);
  json rows = json::array();
  for (std::size_t r = 0; r < fractions.classes(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < fractions.classes(); ++c) {
      row.push_back(
          fractions.at(static_cast<ClassId>(r), static_cast<ClassId>(c)));
    }
    rows.push_back(std::move(row));
  }
  doc["fractions"] = std::move(rows);
  return doc.dump(1) + "\n";
}

std::string SerializeConfusionCsv(const ConfusionMatrix& matrix,
                                  const Taxonomy& taxonomy) {
  std::string out = "gt\\pred";
  for (const auto& c : taxonomy.classes()) absl::StrAppend(&out, ",", c.name);
  out += "\n";
  for (std::size_t r = 0; r < matrix.classes(); ++r) {
    out += taxonomy.at(static_cast<ClassId>(r)).name;
    for (std::size_t c = 0; c < matrix.classes(); ++c) {
      absl::StrAppend(
          &out, ",", matrix.at(static_cast<ClassId>(r), static_cast<ClassId>(c)));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<ConfusionMatrix> ParseConfusionCounts(
    std::string_view json_text, const Taxonomy& taxonomy) {
  absl::StatusOr<json> doc = ParseMatrixDoc(json_text, taxonomy);
  if (!doc.ok()) return doc.status();
  const std::size_t k = taxonomy.size();
  if (!doc->contains("counts")) {
    return absl::InvalidArgumentError("confusion file: missing \"counts\"");
  }
  const json& rows = (*doc)["counts"];
  if (absl::Status s = CheckSquare(rows, k, "counts"); !s.ok()) return s;
  ConfusionMatrix m(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const json& v = rows[r][c];
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v >= 0)) {
        return absl::InvalidArgumentError(
            "confusion file: counts must be non-negative integers");
      }
      m.at(static_cast<ClassId>(r), static_cast<ClassId>(c)) =
          v.get<std::uint64_t>();
    }
  }
  return m;
}

absl::StatusOr<FractionMatrix> ParseConfusionFractions(
    std::string_view json_text, const Taxonomy& taxonomy) {
  absl::StatusOr<json> doc = ParseMatrixDoc(json_text, taxonomy);
  if (!doc.ok()) return doc.status();
  if (doc->contains("counts")) {
    absl::StatusOr<ConfusionMatrix> counts =
        ParseConfusionCounts(json_text, taxonomy);
    if (!counts.ok()) return counts.status();
    return RowNormalize(*counts);
  }
  if (!doc->contains("fractions")) {
    return absl::InvalidArgumentError(
        "confusion file: needs \"counts\" or \"fractions\"");
  }
  const std::size_t k = taxonomy.size();
  const json& rows = (*doc)["fractions"];
  if (absl::Status s = CheckSquare(rows, k, "fractions"); !s.ok()) return s;
  FractionMatrix f(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const json& v = rows[r][c];
      if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0) {
        return absl::InvalidArgumentError(
            "confusion file: fractions must be numbers in [0, 1]");
      }
      f.at(static_cast<ClassId>(r), static_cast<ClassId>(c)) = v.get<double>();
    }
  }
  return f;
}

}  // namespace glassseg
