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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "glassseg/annotations.h"
#include "glassseg/confusion.h"
#include "glassseg/fixtures.h"
#include "glassseg/fusion.h"
#include "glassseg/io.h"
#include "glassseg/manifest.h"
#include "glassseg/merge_policy.h"
#include "glassseg/metrics.h"
#include "glassseg/pgm.h"
#include "glassseg/rle.h"
#include "glassseg/rng.h"
#include "glassseg/taxonomy.h"
#include "json.hpp"

namespace glassseg::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kJobsEnv[] = "GLASSSEG_JOBS";

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;
  int jobs = 1;
};

std::string Absolute(const std::string& path) {
  return fs::absolute(path).lexically_normal().string();
}

absl::Status MakeDirectories(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create directory ", dir, ": ", ec.message()));
  }
  return absl::OkStatus();
}

int ResolveJobs(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv(kJobsEnv); env != nullptr) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Evaluates fn(i) for i in [0, n) on up to `jobs` threads. Results are
// returned by index, so callers reduce in a schedule-independent order.
template <typename T, typename Fn>
std::vector<absl::StatusOr<T>> ParallelMap(std::size_t n, int jobs, Fn fn) {
  std::vector<absl::StatusOr<T>> results(n);
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) results[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

absl::StatusOr<Taxonomy> ResolveTaxonomy(const std::string& flag,
                                         const Manifest* manifest) {
  if (!flag.empty()) return LoadTaxonomy(flag);
  if (manifest != nullptr && manifest->taxonomy) {
    return LoadTaxonomy(*manifest->taxonomy);
  }
  return absl::InvalidArgumentError(
      "no taxonomy: pass --taxonomy or name one in the manifest");
}

absl::StatusOr<RejectMode> ParseRejectMode(const std::string& text) {
  if (text == "background") return RejectMode::kBackground;
  if (text == "keep") return RejectMode::kKeep;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown reject mode \"", text, "\""));
}

std::string RecordFileName(const std::string& id) {
  std::string name = id;
  std::replace(name.begin(), name.end(), '/', '_');
  return name;
}

// ---------------------------------------------------------------- gen-fixtures

struct GenFixturesArgs {
  std::uint64_t seed = 0;
  int count = 0;
  std::string out_dir;
  int width = 64;
  int height = 64;
  std::string family = "default";
};

absl::Status GenFixtures(const GenFixturesArgs& a, Context& ctx) {
  const Taxonomy taxonomy = FixtureTaxonomy();
  FixtureParams params;
  if (a.family == "default") {
    params = DefaultFixtureParams(taxonomy);
  } else if (a.family == "interior") {
    params = InteriorPatchinessParams(taxonomy);
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown fixture family \"", a.family, "\""));
  }
  params.scene.width = a.width;
  params.scene.height = a.height;

  const std::string root = Absolute(a.out_dir);
  if (absl::Status s = MakeDirectories(root); !s.ok()) return s;
  const std::string taxonomy_path = (fs::path(root) / "taxonomy.json").string();
  if (absl::Status s = WriteFile(taxonomy_path, SerializeTaxonomy(taxonomy));
      !s.ok()) {
    return s;
  }

  std::vector<std::string> ids(a.count);
  for (int i = 0; i < a.count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%04d", i);
    ids[i] = buf;
  }
  auto results = ParallelMap<ManifestRecord>(
      ids.size(), ctx.jobs,
      [&](std::size_t i) -> absl::StatusOr<ManifestRecord> {
        absl::StatusOr<Fixture> fx =
            GenerateFixture(DeriveSeed(a.seed, i), params, taxonomy);
        if (!fx.ok()) {
          return absl::Status(fx.status().code(),
                              absl::StrCat(ids[i], ": ", fx.status().message()));
        }
        const fs::path dir = fs::path(root) / ids[i];
        if (absl::Status s = MakeDirectories(dir.string()); !s.ok()) return s;
        ManifestRecord r;
        r.id = ids[i];
        r.groundtruth = (dir / "gt.json").string();
        r.prediction = (dir / "pred.pgm").string();
        r.masklets = (dir / "masklets.json").string();
        MaskletFile masklets{fx->scene.gt.width, fx->scene.gt.height,
                             fx->masklets};
        const std::pair<std::string, std::string> files[] = {
            {r.groundtruth, SerializeGroundTruth(fx->scene.gt, taxonomy)},
            {(dir / "gt.pgm").string(), SerializePgm(fx->scene.labels)},
            {r.prediction, SerializePgm(fx->prediction)},
            {*r.masklets, SerializeMasklets(masklets)},
        };
        for (const auto& [path, bytes] : files) {
          if (absl::Status s = WriteFile(path, bytes); !s.ok()) return s;
        }
        return r;
      });

  Manifest manifest;
  manifest.taxonomy = taxonomy_path;
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    manifest.records.push_back(*std::move(r));
  }
  if (absl::Status s = WriteFile((fs::path(root) / "manifest.json").string(),
                                 SerializeManifest(manifest, root));
      !s.ok()) {
    return s;
  }
  if (!ctx.quiet) {
    ctx.out << "wrote " << a.count << " scenes to " << a.out_dir << "\n";
  }
  return absl::OkStatus();
}

// ------------------------------------------------------------------------ fuse

struct FuseArgs {
  std::string labelmap;
  std::string masklets;
  std::string taxonomy;
  std::string manifest;
  std::string out;
  std::string out_dir;
  std::string decisions;
  double glass_fraction = 0.10;
  double quality_min = 0.0;
  std::string reject_mode = "background";
};

std::string SerializeDecisions(const FusionResult& result,
                               const FusionConfig& config,
                               const Taxonomy& taxonomy) {
  json list = json::array();
  for (const MaskletDecision& d : result.decisions) {
    json counts = json::object();
    for (std::size_t c = 0; c < d.class_counts.size(); ++c) {
      if (d.class_counts[c] != 0) {
        counts[taxonomy.at(static_cast<ClassId>(c)).name] = d.class_counts[c];
      }
    }
    const bool assigned = d.verdict == Verdict::kAssigned;
    list.push_back(
        {{"id", d.masklet_id},
         {"score", d.score},
         {"verdict", assigned ? "assigned" : "rejected"},
         {"class", assigned ? json(taxonomy.at(d.assigned_class).name)
                            : json(nullptr)},
         {"area", d.area},
         {"max_glass_fraction", d.max_glass_fraction},
         {"counts", std::move(counts)}});
  }
  json doc = {
      {"schema_version", 1},
      {"glass_fraction_min", config.glass_fraction_min},
      {"quality_min", config.quality_min},
      {"reject_mode",
       config.reject_mode == RejectMode::kKeep ? "keep" : "background"},
      {"masklets", std::move(list)}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<FusionResult> FuseFiles(const std::string& labelmap_path,
                                       const std::string& masklets_path,
                                       const Taxonomy& taxonomy,
                                       const FusionConfig& config) {
  absl::StatusOr<LabelMap> semantic = ReadLabelMap(labelmap_path, &taxonomy);
  if (!semantic.ok()) return semantic.status();
  absl::StatusOr<MaskletFile> masklets = ReadMasklets(masklets_path);
  if (!masklets.ok()) return masklets.status();
  if (!semantic->SameShape(masklets->width, masklets->height)) {
    return absl::InvalidArgumentError(absl::StrCat(
        masklets_path, ": masklets are ", masklets->width, "x",
        masklets->height, " but ", labelmap_path, " is ", semantic->width(),
        "x", semantic->height()));
  }
  return Fuse(*semantic, masklets->masklets, taxonomy, config);
}

absl::Status FuseCommand(const FuseArgs& a, Context& ctx) {
  FusionConfig config;
  config.glass_fraction_min = a.glass_fraction;
  config.quality_min = a.quality_min;
  absl::StatusOr<RejectMode> mode = ParseRejectMode(a.reject_mode);
  if (!mode.ok()) return mode.status();
  config.reject_mode = *mode;
  if (absl::Status s = ValidateFusionConfig(config); !s.ok()) return s;

  const bool single = !a.labelmap.empty() || !a.masklets.empty();
  if (single == !a.manifest.empty()) {
    return absl::InvalidArgumentError(
        "fuse needs either --labelmap/--masklets or --manifest");
  }

  if (single) {
    if (a.labelmap.empty() || a.masklets.empty() || a.out.empty()) {
      return absl::InvalidArgumentError(
          "single-file fuse needs --labelmap, --masklets and --out");
    }
    absl::StatusOr<Taxonomy> taxonomy = ResolveTaxonomy(a.taxonomy, nullptr);
    if (!taxonomy.ok()) return taxonomy.status();
    absl::StatusOr<FusionResult> result =
        FuseFiles(a.labelmap, a.masklets, *taxonomy, config);
    if (!result.ok()) return result.status();
    if (absl::Status s = WriteLabelMap(result->labels, a.out); !s.ok()) {
      return s;
    }
    if (!a.decisions.empty()) {
      if (absl::Status s = WriteFile(
              a.decisions, SerializeDecisions(*result, config, *taxonomy));
          !s.ok()) {
        return s;
      }
    }
    if (!ctx.quiet) {
      const auto assigned = std::count_if(
          result->decisions.begin(), result->decisions.end(),
          [](const MaskletDecision& d) {
            return d.verdict == Verdict::kAssigned;
          });
      ctx.out << "fused " << result->decisions.size() << " masklets ("
              << assigned << " assigned) into " << a.out << "\n";
    }
    return absl::OkStatus();
  }

  if (a.out_dir.empty()) {
    return absl::InvalidArgumentError("manifest fuse needs --out-dir");
  }
  absl::StatusOr<Manifest> manifest = LoadManifest(a.manifest);
  if (!manifest.ok()) return manifest.status();
  absl::StatusOr<Taxonomy> taxonomy = ResolveTaxonomy(a.taxonomy, &*manifest);
  if (!taxonomy.ok()) return taxonomy.status();
  const std::string root = Absolute(a.out_dir);
  if (absl::Status s = MakeDirectories(root); !s.ok()) return s;

  const auto& records = manifest->records;
  auto results = ParallelMap<ManifestRecord>(
      records.size(), ctx.jobs,
      [&](std::size_t i) -> absl::StatusOr<ManifestRecord> {
        const ManifestRecord& in = records[i];
        ManifestRecord r;
        r.id = in.id;
        r.groundtruth = Absolute(in.groundtruth);
        if (in.masklets) r.masklets = Absolute(*in.masklets);
        r.prediction =
            (fs::path(root) / (RecordFileName(in.id) + ".pgm")).string();
        LabelMap fused;
        if (in.masklets) {
          absl::StatusOr<FusionResult> result =
              FuseFiles(in.prediction, *in.masklets, *taxonomy, config);
          if (!result.ok()) return result.status();
          fused = std::move(result->labels);
        } else {
          absl::StatusOr<LabelMap> pred = ReadLabelMap(in.prediction, &*taxonomy);
          if (!pred.ok()) return pred.status();
          fused = *std::move(pred);
        }
        if (absl::Status s = WriteLabelMap(fused, r.prediction); !s.ok()) {
          return s;
        }
        return r;
      });
  Manifest fused;
  if (manifest->taxonomy) fused.taxonomy = Absolute(*manifest->taxonomy);
  if (!a.taxonomy.empty()) fused.taxonomy = Absolute(a.taxonomy);
  for (auto& r : results) {
    if (!r.ok()) return r.status();
    fused.records.push_back(*std::move(r));
  }
  if (absl::Status s = WriteFile((fs::path(root) / "manifest.json").string(),
                                 SerializeManifest(fused, root));
      !s.ok()) {
    return s;
  }
  if (!ctx.quiet) {
    ctx.out << "fused " << fused.records.size() << " records into "
            << a.out_dir << "\n";
  }
  return absl::OkStatus();
}

// --------------------------------------------------------------------- confmat

struct ConfmatArgs {
  std::string manifest;
  std::string taxonomy;
  std::string out;
};

absl::Status ConfmatCommand(const ConfmatArgs& a, Context& ctx) {
  absl::StatusOr<Manifest> manifest = LoadManifest(a.manifest);
  if (!manifest.ok()) return manifest.status();
  absl::StatusOr<Taxonomy> taxonomy = ResolveTaxonomy(a.taxonomy, &*manifest);
  if (!taxonomy.ok()) return taxonomy.status();
  const auto& records = manifest->records;
  auto results = ParallelMap<ConfusionMatrix>(
      records.size(), ctx.jobs,
      [&](std::size_t i) -> absl::StatusOr<ConfusionMatrix> {
        absl::StatusOr<GroundTruth> gt =
            ReadGroundTruth(records[i].groundtruth, *taxonomy, {}, nullptr);
        if (!gt.ok()) return gt.status();
        absl::StatusOr<LabelMap> pred =
            ReadLabelMap(records[i].prediction, &*taxonomy);
        if (!pred.ok()) return pred.status();
        ConfusionMatrix m(taxonomy->size());
        if (absl::Status s = AccumulateConfusion(*gt, *pred, *taxonomy, m);
            !s.ok()) {
          return absl::Status(s.code(),
                              absl::StrCat(records[i].id, ": ", s.message()));
        }
        return m;
      });
  ConfusionMatrix total(taxonomy->size());
  for (const auto& m : results) {
    if (!m.ok()) return m.status();
    if (absl::Status s = total.Add(*m); !s.ok()) return s;
  }
  const bool csv = fs::path(a.out).extension() == ".csv";
  const std::string bytes = csv ? SerializeConfusionCsv(total, *taxonomy)
                                : SerializeConfusionJson(total, *taxonomy);
  if (absl::Status s = WriteFile(a.out, bytes); !s.ok()) return s;
  if (!ctx.quiet) {
    ctx.out << "accumulated " << records.size() << " records into " << a.out
            << "\n";
  }
  return absl::OkStatus();
}

// --------------------------------------------------------------- derive-merges

struct DeriveArgs {
  std::string confmat;
  std::string taxonomy;
  double threshold = 0.05;
  std::vector<std::string> exclude;
  std::string overrides;
  std::string water_glass;
  std::string out;
};

absl::Status DeriveCommand(const DeriveArgs& a, Context& ctx) {
  absl::StatusOr<Taxonomy> taxonomy = LoadTaxonomy(a.taxonomy);
  if (!taxonomy.ok()) return taxonomy.status();
  if (!(a.threshold >= 0.0 && a.threshold <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("threshold ", a.threshold, " outside [0, 1]"));
  }
  absl::StatusOr<std::string> text = ReadFile(a.confmat);
  if (!text.ok()) return text.status();
  absl::StatusOr<FractionMatrix> fractions =
      ParseConfusionFractions(*text, *taxonomy);
  if (!fractions.ok()) {
    return absl::Status(fractions.status().code(),
                        absl::StrCat(a.confmat, ": ",
                                     fractions.status().message()));
  }
  MergeDerivationConfig config;
  config.similarity_min = a.threshold;
  for (const std::string& name : a.exclude) {
    absl::StatusOr<ClassId> c = taxonomy->ClassByName(name);
    if (!c.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("--exclude: unknown class name \"", name, "\""));
    }
    config.excluded.insert(*c);
  }

  std::optional<ClassId> water_glass;
  if (!a.water_glass.empty()) {
    absl::StatusOr<ClassId> c = taxonomy->ClassByName(a.water_glass);
    if (!c.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "--water-glass: unknown class name \"", a.water_glass, "\""));
    }
    water_glass = *c;
  } else if (absl::StatusOr<ClassId> c = taxonomy->ClassByName("water_glass");
             c.ok()) {
    water_glass = *c;
  }
  std::vector<WaterGlassOverride> overrides;
  if (!a.overrides.empty()) {
    absl::StatusOr<std::string> spec_text = ReadFile(a.overrides);
    if (!spec_text.ok()) return spec_text.status();
    absl::StatusOr<OverrideSpec> spec = ParseOverrideSpec(*spec_text, *taxonomy);
    if (!spec.ok()) {
      return absl::Status(spec.status().code(),
                          absl::StrCat(a.overrides, ": ",
                                       spec.status().message()));
    }
    if (spec->water_glass) {
      if (!a.water_glass.empty() && water_glass != spec->water_glass) {
        return absl::InvalidArgumentError(
            "--water-glass disagrees with the overrides file");
      }
      water_glass = spec->water_glass;
    }
    overrides = std::move(spec->overrides);
  }

  absl::StatusOr<PairSet> pairs =
      DeriveSimilarPairs(*fractions, config, *taxonomy);
  if (!pairs.ok()) return pairs.status();
  absl::StatusOr<MergePolicy> policy =
      BuildMergePolicy(*pairs, water_glass, std::move(overrides), *taxonomy);
  if (!policy.ok()) return policy.status();
  if (absl::Status s = WriteFile(a.out, SerializeMergePolicy(*policy, *taxonomy));
      !s.ok()) {
    return s;
  }
  if (!ctx.quiet) {
    ctx.out << "derived " << pairs->size() << " similar pairs into " << a.out
            << "\n";
  }
  return absl::OkStatus();
}

// -------------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string manifest;
  std::string taxonomy;
  std::string policy;
  std::string highlight;
  std::string out;
  std::string csv;
  bool strict_models = false;
};

struct RecordTally {
  Tally tally;
  std::vector<std::string> warnings;
};

absl::Status EvaluateCommand(const EvaluateArgs& a, Context& ctx) {
  absl::StatusOr<Manifest> manifest = LoadManifest(a.manifest);
  if (!manifest.ok()) return manifest.status();
  absl::StatusOr<Taxonomy> taxonomy = ResolveTaxonomy(a.taxonomy, &*manifest);
  if (!taxonomy.ok()) return taxonomy.status();
  MergePolicy policy = MergePolicy::Identity(*taxonomy);
  if (!a.policy.empty()) {
    absl::StatusOr<std::string> text = ReadFile(a.policy);
    if (!text.ok()) return text.status();
    absl::StatusOr<MergePolicy> parsed = ParseMergePolicy(*text, *taxonomy);
    if (!parsed.ok()) {
      return absl::Status(parsed.status().code(),
                          absl::StrCat(a.policy, ": ", parsed.status().message()));
    }
    policy = *std::move(parsed);
  }
  std::optional<ClassId> highlight;
  if (!a.highlight.empty()) {
    absl::StatusOr<ClassId> c = taxonomy->ClassByName(a.highlight);
    if (!c.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("--highlight: unknown class name \"", a.highlight, "\""));
    }
    highlight = *c;
  }

  GroundTruthOptions options;
  options.strict_models = a.strict_models;
  const auto& records = manifest->records;
  auto results = ParallelMap<RecordTally>(
      records.size(), ctx.jobs,
      [&](std::size_t i) -> absl::StatusOr<RecordTally> {
        RecordTally rt;
        absl::StatusOr<GroundTruth> gt = ReadGroundTruth(
            records[i].groundtruth, *taxonomy, options, &rt.warnings);
        if (!gt.ok()) return gt.status();
        absl::StatusOr<LabelMap> pred =
            ReadLabelMap(records[i].prediction, &*taxonomy);
        if (!pred.ok()) return pred.status();
        absl::StatusOr<Tally> tally = TallyImage(*gt, *pred, policy, *taxonomy);
        if (!tally.ok()) {
          return absl::Status(
              tally.status().code(),
              absl::StrCat(records[i].id, ": ", tally.status().message()));
        }
        rt.tally = *std::move(tally);
        return rt;
      });
  Tally total(taxonomy->size());
  for (const auto& r : results) {
    if (!r.ok()) return r.status();
    if (absl::Status s = total.Add(r->tally); !s.ok()) return s;
    if (!ctx.quiet) {
      for (const auto& w : r->warnings) ctx.err << "warning: " << w << "\n";
    }
  }
  const MetricsReport report = ComputeMetrics(total, highlight);
  if (absl::Status s = WriteFile(a.out, SerializeReportJson(report, *taxonomy));
      !s.ok()) {
    return s;
  }
  if (!a.csv.empty()) {
    if (absl::Status s = WriteFile(a.csv, SerializeReportCsv(report, *taxonomy));
        !s.ok()) {
      return s;
    }
  }
  if (!ctx.quiet) {
    auto fmt = [](const std::optional<double>& v) {
      return v ? absl::StrCat(*v) : std::string("n/a");
    };
    ctx.out << "records: " << records.size() << "  mIoU: " << fmt(report.mean_iou)
            << "  mAcc: " << fmt(report.mean_acc) << "\n";
  }
  return absl::OkStatus();
}

// ------------------------------------------------------------------------- rle

struct RleArgs {
  std::string mask;
  std::string rle;
  std::string out;
};

absl::Status RleEncode(const RleArgs& a, Context& ctx) {
  absl::StatusOr<LabelMap> map = ReadLabelMap(a.mask);
  if (!map.ok()) return map.status();
  BitMask mask(map->width(), map->height());
  for (std::size_t i = 0; i < map->size(); ++i) mask.Set(i, (*map)[i] != 0);
  json doc = {{"size", {map->height(), map->width()}},
              {"counts", EncodeRle(mask)}};
  if (absl::Status s = WriteFile(a.out, doc.dump() + "\n"); !s.ok()) return s;
  if (!ctx.quiet) ctx.out << "encoded " << mask.Area() << " pixels\n";
  return absl::OkStatus();
}

absl::Status RleDecode(const RleArgs& a, Context& ctx) {
  absl::StatusOr<std::string> text = ReadFile(a.rle);
  if (!text.ok()) return text.status();
  json doc = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("size") ||
      !doc["size"].is_array() || doc["size"].size() != 2 ||
      !doc["size"][0].is_number_integer() ||
      !doc["size"][1].is_number_integer() || !doc.contains("counts") ||
      !doc["counts"].is_array()) {
    return absl::InvalidArgumentError(absl::StrCat(
        a.rle, ": expected {\"size\":[H,W],\"counts\":[...]}"));
  }
  const auto h = doc["size"][0].get<std::int64_t>();
  const auto w = doc["size"][1].get<std::int64_t>();
  if (h < 1 || w < 1 || h > (1 << 16) || w > (1 << 16)) {
    return absl::InvalidArgumentError(
        absl::StrCat(a.rle, ": invalid size [", h, ",", w, "]"));
  }
  RleCounts counts;
  for (const auto& c : doc["counts"]) {
    if (!c.is_number_integer()) {
      return absl::InvalidArgumentError(
          absl::StrCat(a.rle, ": RLE counts must be integers"));
    }
    counts.push_back(c.get<std::int64_t>());
  }
  absl::StatusOr<BitMask> mask =
      DecodeRle(counts, static_cast<int>(w), static_cast<int>(h));
  if (!mask.ok()) {
    return absl::Status(mask.status().code(),
                        absl::StrCat(a.rle, ": ", mask.status().message()));
  }
  LabelMap map(mask->width(), mask->height());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = (*mask)[i] ? 1 : 0;
  if (absl::Status s = WriteLabelMap(map, a.out); !s.ok()) return s;
  if (!ctx.quiet) ctx.out << "decoded " << mask->Area() << " pixels\n";
  return absl::OkStatus();
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Glass segmentation post-processing and evaluation toolkit",
               "glassseg"};
  app.set_version_flag("--version", absl::StrCat("glassseg ", kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  int jobs_flag = 0;
  bool quiet = false;
  app.add_option("--jobs", jobs_flag,
                 absl::StrCat("Worker threads for manifest records (env ",
                              kJobsEnv, ")"))
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress progress output and warnings");

  GenFixturesArgs gen;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-fixtures", "Generate deterministic synthetic scenes and a manifest");
  gen_cmd->add_option("--seed", gen.seed, "Base seed")->required();
  gen_cmd->add_option("--count", gen.count, "Number of scenes")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--width", gen.width, "Scene width")
      ->check(CLI::Range(16, 4096));
  gen_cmd->add_option("--height", gen.height, "Scene height")
      ->check(CLI::Range(16, 4096));
  gen_cmd->add_option("--family", gen.family, "default or interior")
      ->check(CLI::IsMember({"default", "interior"}));

  FuseArgs fuse;
  CLI::App* fuse_cmd = app.add_subcommand(
      "fuse", "Refine semantic label maps with instance masklets");
  fuse_cmd->add_option("--labelmap", fuse.labelmap, "Semantic label map (PGM)");
  fuse_cmd->add_option("--masklets", fuse.masklets, "Masklets (JSON)");
  fuse_cmd->add_option("--manifest", fuse.manifest, "Dataset manifest");
  fuse_cmd->add_option("--taxonomy", fuse.taxonomy, "Taxonomy (JSON)");
  fuse_cmd->add_option("--out", fuse.out, "Fused label map (PGM)");
  fuse_cmd->add_option("--out-dir", fuse.out_dir,
                       "Directory for fused maps and manifest");
  fuse_cmd->add_option("--decisions", fuse.decisions,
                       "Per-masklet decisions (JSON)");
  fuse_cmd->add_option("--glass-fraction", fuse.glass_fraction,
                       "Glass share a masklet must exceed");
  fuse_cmd->add_option("--quality-min", fuse.quality_min,
                       "Minimum masklet score");
  fuse_cmd->add_option("--reject-mode", fuse.reject_mode,
                       "background or keep")
      ->check(CLI::IsMember({"background", "keep"}));

  ConfmatArgs confmat;
  CLI::App* confmat_cmd = app.add_subcommand(
      "confmat", "Accumulate a pixel confusion matrix over a manifest");
  confmat_cmd->add_option("--manifest", confmat.manifest, "Dataset manifest")
      ->required();
  confmat_cmd->add_option("--taxonomy", confmat.taxonomy, "Taxonomy (JSON)");
  confmat_cmd->add_option("--out", confmat.out, "Output (.csv or .json)")
      ->required();

  DeriveArgs derive;
  CLI::App* derive_cmd = app.add_subcommand(
      "derive-merges", "Derive a merge policy from a confusion matrix");
  derive_cmd->add_option("--confmat", derive.confmat, "Confusion JSON")
      ->required();
  derive_cmd->add_option("--taxonomy", derive.taxonomy, "Taxonomy (JSON)")
      ->required();
  derive_cmd->add_option("--threshold", derive.threshold,
                         "Similarity fraction a pair must exceed");
  derive_cmd->add_option("--exclude", derive.exclude,
                         "Class left out of merging (repeatable)");
  derive_cmd->add_option("--overrides", derive.overrides,
                         "Water-glass overrides (JSON)");
  derive_cmd->add_option("--water-glass", derive.water_glass,
                         "Class treated as water glass");
  derive_cmd->add_option("--out", derive.out, "Policy (JSON)")->required();

  EvaluateArgs eval;
  CLI::App* eval_cmd = app.add_subcommand(
      "evaluate", "Compute merge-aware IoU and accuracy over a manifest");
  eval_cmd->add_option("--manifest", eval.manifest, "Dataset manifest")
      ->required();
  eval_cmd->add_option("--taxonomy", eval.taxonomy, "Taxonomy (JSON)");
  eval_cmd->add_option("--policy", eval.policy, "Merge policy (JSON)");
  eval_cmd->add_option("--highlight", eval.highlight,
                       "Class whose IoU is reported separately");
  eval_cmd->add_option("--out", eval.out, "Report (JSON)")->required();
  eval_cmd->add_option("--csv", eval.csv, "Report (CSV)");
  eval_cmd->add_flag("--strict-models", eval.strict_models,
                     "Reject instances with unregistered models");

  RleArgs rle;
  CLI::App* rle_cmd =
      app.add_subcommand("rle", "Convert between binary PGM masks and RLE");
  rle_cmd->require_subcommand(1);
  CLI::App* encode_cmd =
      rle_cmd->add_subcommand("encode", "Nonzero PGM pixels to RLE JSON");
  encode_cmd->add_option("--mask", rle.mask, "Mask (PGM)")->required();
  encode_cmd->add_option("--out", rle.out, "RLE (JSON)")->required();
  CLI::App* decode_cmd =
      rle_cmd->add_subcommand("decode", "RLE JSON to a 0/1 PGM");
  decode_cmd->add_option("--rle", rle.rle, "RLE (JSON)")->required();
  decode_cmd->add_option("--out", rle.out, "Mask (PGM)")->required();

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  Context ctx{out, err, quiet, ResolveJobs(jobs_flag)};
  absl::Status status;
  if (gen_cmd->parsed()) {
    status = GenFixtures(gen, ctx);
  } else if (fuse_cmd->parsed()) {
    status = FuseCommand(fuse, ctx);
  } else if (confmat_cmd->parsed()) {
    status = ConfmatCommand(confmat, ctx);
  } else if (derive_cmd->parsed()) {
    status = DeriveCommand(derive, ctx);
  } else if (eval_cmd->parsed()) {
    status = EvaluateCommand(eval, ctx);
  } else if (encode_cmd->parsed()) {
    status = RleEncode(rle, ctx);
  } else if (decode_cmd->parsed()) {
    status = RleDecode(rle, ctx);
  }
  if (status.ok()) return 0;
  err << "error: " << status.message() << "\n";
  return IsIoError(status) ? 2 : 1;
}

}  // namespace glassseg::cli
