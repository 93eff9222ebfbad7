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

#include "glassseg/metrics.h"

#include <charconv>
#include <map>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace glassseg {

using nlohmann::json;

namespace {

// Shortest decimal that round-trips, so reports are stable byte for byte.
std::string FormatDouble(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

json OptionalNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

absl::Status Tally::Add(const Tally& other) {
  if (other.classes() != classes()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tallies differ in class count: ", classes(), " vs ", other.classes()));
  }
  for (std::size_t c = 0; c < classes(); ++c) {
    tp[c] += other.tp[c];
    fp[c] += other.fp[c];
    fn[c] += other.fn[c];
  }
  return absl::OkStatus();
}

absl::StatusOr<Tally> TallyImage(const GroundTruth& gt, const LabelMap& pred,
                                 const MergePolicy& policy,
                                 const Taxonomy& taxonomy) {
  if (!pred.SameShape(gt.width, gt.height)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prediction is ", pred.width(), "x", pred.height(),
        " but ground truth is ", gt.width, "x", gt.height));
  }
  if (policy.classes() != taxonomy.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy covers ", policy.classes(), " classes, taxonomy has ",
        taxonomy.size()));
  }
  if (absl::Status s = ValidateLabels(pred, taxonomy); !s.ok()) return s;

  struct Resolved {
    ClassId gt_class;
    LabelSet allowed;
  };
  std::map<std::uint32_t, Resolved> resolved;
  for (const auto& [id, inst] : gt.instances) {
    resolved.emplace(id, Resolved{inst.class_id,
                                  policy.AllowedLabels(inst.class_id, inst.model)});
  }
  const ClassId bg = taxonomy.background();
  const Resolved background{bg, policy.AllowedLabels(bg, "")};

  Tally t(taxonomy.size());
  const Resolved* current = &background;
  std::uint32_t current_id = 0;
  for (std::size_t i = 0; i < gt.instance_map.size(); ++i) {
    const std::uint32_t id = gt.instance_map[i];
    if (id != current_id) {
      current_id = id;
      current = id == 0 ? &background : &resolved.at(id);
    }
    const ClassId p = pred[i];
    if (current->allowed.test(p)) {
      ++t.tp[current->gt_class];
    } else {
      ++t.fn[current->gt_class];
      ++t.fp[p];
    }
  }
  return t;
}

absl::StatusOr<Tally> MergeTallies(std::span<const Tally> tallies) {
  if (tallies.empty()) return Tally();
  Tally sum = tallies.front();
  for (const Tally& t : tallies.subspan(1)) {
    if (absl::Status s = sum.Add(t); !s.ok()) return s;
  }
  return sum;
}

MetricsReport ComputeMetrics(const Tally& tally,
                             std::optional<ClassId> highlight) {
  MetricsReport r;
  double iou_sum = 0.0, acc_sum = 0.0;
  std::size_t iou_n = 0, acc_n = 0;
  for (std::size_t c = 0; c < tally.classes(); ++c) {
    ClassMetrics m;
    m.id = static_cast<ClassId>(c);
    m.tp = tally.tp[c];
    m.fp = tally.fp[c];
    m.fn = tally.fn[c];
    const std::uint64_t union_size = m.tp + m.fp + m.fn;
    if (union_size > 0) {
      m.iou = static_cast<double>(m.tp) / static_cast<double>(union_size);
      iou_sum += *m.iou;
      ++iou_n;
    }
    if (m.tp + m.fn > 0) {
      m.acc = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
      acc_sum += *m.acc;
      ++acc_n;
    }
    r.per_class.push_back(m);
  }
  if (iou_n > 0) r.mean_iou = iou_sum / static_cast<double>(iou_n);
  if (acc_n > 0) r.mean_acc = acc_sum / static_cast<double>(acc_n);
  if (highlight && *highlight < r.per_class.size()) {
    r.highlight = highlight;
    r.highlight_iou = r.per_class[*highlight].iou;
  }
  return r;
}

std::string SerializeReportJson(const MetricsReport& report,
                                const Taxonomy& taxonomy) {
  json doc;
  doc["schema_version"] = 1;
  json classes = json::array();
  for (const ClassMetrics& m : report.per_class) {
    classes.push_back({{"class", taxonomy.at(m.id).name},
                       {"TP", m.tp},
                       {"FP", m.fp},
                       {"FN", m.fn},
                       {"IoU", OptionalNumber(m.iou)},
                       {"Acc", OptionalNumber(m.acc)}});
  }
  doc["classes"] = std::move(classes);
  doc["mIoU"] = OptionalNumber(report.mean_iou);
  doc["mAcc"] = OptionalNumber(report.mean_acc);
  if (report.highlight) {
    doc["highlight"] = {{"class", taxonomy.at(*report.highlight).name},
                        {"IoU", OptionalNumber(report.highlight_iou)}};
  } else {
    doc["highlight"] = nullptr;
  }
  json unseen = json::object();
  for (ClassId c : taxonomy.unseen()) {
    unseen[taxonomy.at(c).name] =
        c < report.per_class.size() ? OptionalNumber(report.per_class[c].iou)
                                    : json(nullptr);
  }
  doc["unseen_IoU"] = std::move(unseen);
  return doc.dump(2) + "\n";
}

std::string SerializeReportCsv(const MetricsReport& report,
                               const Taxonomy& taxonomy) {
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string();
  };
  std::string out = "class,TP,FP,FN,IoU,Acc\n";
  for (const ClassMetrics& m : report.per_class) {
    absl::StrAppend(&out, taxonomy.at(m.id).name, ",", m.tp, ",", m.fp, ",",
                    m.fn, ",", opt(m.iou), ",", opt(m.acc), "\n");
  }
  absl::StrAppend(&out, "mean,,,,", opt(report.mean_iou), ",",
                  opt(report.mean_acc), "\n");
  return out;
}

}  // namespace glassseg
