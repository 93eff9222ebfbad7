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

#ifndef GLASSSEG_TESTS_TEST_SUPPORT_H_
#define GLASSSEG_TESTS_TEST_SUPPORT_H_

// Test-only generators and straight-line reference implementations. The
// references deliberately share no code path with the library: they work on
// dense masks, scan every pixel, and resolve overlaps per pixel instead of
// painting in order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glassseg/annotations.h"
#include "glassseg/fusion.h"
#include "glassseg/merge_policy.h"
#include "glassseg/metrics.h"
#include "glassseg/raster.h"
#include "glassseg/rng.h"
#include "glassseg/taxonomy.h"

namespace glassseg::testing {

// Background plus `glass` glass classes named g1..gN (background first).
inline Taxonomy SmallTaxonomy(int glass,
                              std::map<std::string, std::string> models = {}) {
  std::vector<ClassInfo> classes = {{0, "background", ClassKind::kBackground}};
  for (int i = 1; i <= glass; ++i) {
    classes.push_back({0, "g" + std::to_string(i), ClassKind::kGlass});
  }
  return *Taxonomy::Create(std::move(classes), std::move(models), {});
}

// The default categories plus four placeholder glass classes: K = 16.
inline Taxonomy SixteenClassTaxonomy() {
  std::vector<ClassInfo> classes = DefaultTaxonomy().classes();
  for (int i = 1; i <= 4; ++i) {
    classes.push_back({0, "extra_glass_" + std::to_string(i), ClassKind::kGlass});
  }
  return *Taxonomy::Create(std::move(classes), {}, {});
}

inline BitMask RandomMask(Rng& rng, int w, int h) {
  BitMask m(w, h);
  const double density = rng.Uniform01();
  for (std::size_t i = 0; i < m.size(); ++i) m.Set(i, rng.Bernoulli(density));
  return m;
}

inline LabelMap RandomLabelMap(Rng& rng, int w, int h, std::size_t k) {
  LabelMap m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = static_cast<ClassId>(rng.Below(k));
  }
  return m;
}

// Background with a few rectangles of random classes: closer to what a
// segmenter produces than per-pixel noise.
inline LabelMap BlobbyLabelMap(Rng& rng, int w, int h, const Taxonomy& t) {
  LabelMap m(w, h, t.background());
  const int blobs = static_cast<int>(rng.Range(0, 6));
  for (int b = 0; b < blobs; ++b) {
    const int x0 = static_cast<int>(rng.Below(w));
    const int y0 = static_cast<int>(rng.Below(h));
    const int x1 = std::min(w, x0 + 1 + static_cast<int>(rng.Below(w)));
    const int y1 = std::min(h, y0 + 1 + static_cast<int>(rng.Below(h)));
    const auto c = static_cast<ClassId>(rng.Below(t.size()));
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) m(x, y) = c;
    }
  }
  // Speckle noise.
  const double noise = 0.2 * rng.Uniform01();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (rng.Bernoulli(noise)) m[i] = static_cast<ClassId>(rng.Below(t.size()));
  }
  return m;
}

inline BitMask RandomRectMask(Rng& rng, int w, int h) {
  BitMask m(w, h);
  const int x0 = static_cast<int>(rng.Below(w));
  const int y0 = static_cast<int>(rng.Below(h));
  const int x1 = std::min(w, x0 + 1 + static_cast<int>(rng.Below(w)));
  const int y1 = std::min(h, y0 + 1 + static_cast<int>(rng.Below(h)));
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) m.Set(x, y);
  }
  return m;
}

struct DenseMasklet {
  std::int64_t id;
  double score;
  BitMask mask;
};

inline Masklet ToMasklet(const DenseMasklet& d) {
  return {d.id, d.score, Region::FromMask(d.mask)};
}

inline std::vector<Masklet> ToMasklets(const std::vector<DenseMasklet>& d) {
  std::vector<Masklet> out;
  for (const auto& m : d) out.push_back(ToMasklet(m));
  return out;
}

struct FusionCase {
  LabelMap semantic;
  std::vector<DenseMasklet> masklets;
  FusionConfig config;
};

// Up to 8 masklets: rectangles or random pixel sets, some overlapping, some
// confined to background pixels; scores drawn from a small set so ties on
// score exercise the id tie-break.
inline FusionCase RandomFusionCase(Rng& rng, const Taxonomy& t,
                                   int max_side = 64) {
  FusionCase c;
  const int w = static_cast<int>(rng.Range(1, max_side));
  const int h = static_cast<int>(rng.Range(1, max_side));
  c.semantic = BlobbyLabelMap(rng, w, h, t);
  static constexpr double kScores[] = {0.0, 0.1, 0.4, 0.4, 0.75, 0.9, 1.0};
  static constexpr double kThresholds[] = {0.0, 0.05, 0.10, 0.3, 0.5, 1.0};
  const int n = static_cast<int>(rng.Range(0, 8));
  std::vector<std::int64_t> ids;
  for (int i = 0; i < n; ++i) ids.push_back(static_cast<std::int64_t>(i) * 3 + 1);
  // Shuffle ids so input order differs from id order.
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.Below(i)]);
  }
  for (int i = 0; i < n; ++i) {
    BitMask mask(w, h);
    switch (rng.Below(3)) {
      case 0:
        mask = RandomRectMask(rng, w, h);
        break;
      case 1:
        mask = RandomMask(rng, w, h);
        break;
      default:
        // Background-only ("spurious") masklet.
        mask = RandomRectMask(rng, w, h);
        for (std::size_t p = 0; p < mask.size(); ++p) {
          if (c.semantic[p] != t.background()) mask.Set(p, false);
        }
        break;
    }
    if (mask.Area() == 0) mask.Set(rng.Below(mask.size()));
    c.masklets.push_back(
        {ids[i], kScores[rng.Below(std::size(kScores))], std::move(mask)});
  }
  c.config.glass_fraction_min = kThresholds[rng.Below(std::size(kThresholds))];
  c.config.quality_min = rng.Bernoulli(0.3) ? 0.4 : 0.0;
  c.config.reject_mode =
      rng.Bernoulli(0.5) ? RejectMode::kBackground : RejectMode::kKeep;
  return c;
}

// Per-pixel brute-force fusion.
inline LabelMap ReferenceFuse(const LabelMap& s,
                              const std::vector<DenseMasklet>& masklets,
                              const Taxonomy& t, const FusionConfig& cfg) {
  struct Verdict {
    const DenseMasklet* m;
    bool assigned;
    ClassId cls;
  };
  std::vector<Verdict> verdicts;
  for (const auto& m : masklets) {
    if (m.score < cfg.quality_min) continue;
    std::vector<std::uint64_t> counts(t.size(), 0);
    std::uint64_t area = 0;
    for (int y = 0; y < s.height(); ++y) {
      for (int x = 0; x < s.width(); ++x) {
        if (m.mask(x, y)) {
          ++counts[s(x, y)];
          ++area;
        }
      }
    }
    std::optional<ClassId> best;
    for (std::size_t c = 0; c < t.size(); ++c) {
      if (c == t.background()) continue;
      if (!best || counts[c] > counts[*best]) best = static_cast<ClassId>(c);
    }
    const bool assigned =
        best && static_cast<double>(counts[*best]) / static_cast<double>(area) >
                    cfg.glass_fraction_min;
    verdicts.push_back({&m, assigned, best.value_or(0)});
  }
  LabelMap out = s;
  for (int y = 0; y < s.height(); ++y) {
    for (int x = 0; x < s.width(); ++x) {
      const Verdict* winner = nullptr;
      for (const auto& v : verdicts) {
        if (!v.m->mask(x, y)) continue;
        if (!v.assigned && cfg.reject_mode == RejectMode::kKeep) continue;
        if (winner == nullptr || v.m->score > winner->m->score ||
            (v.m->score == winner->m->score && v.m->id > winner->m->id)) {
          winner = &v;
        }
      }
      if (winner != nullptr) {
        out(x, y) = winner->assigned ? winner->cls : t.background();
      }
    }
  }
  return out;
}

// Reference tally: enumerate the merge rule per pixel straight from the
// policy's sets.
inline Tally ReferenceTally(const GroundTruth& gt, const LabelMap& pred,
                            const MergePolicy& policy, const Taxonomy& t) {
  Tally tally(t.size());
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * gt.width + x;
      const std::uint32_t inst = gt.instance_map[i];
      ClassId g = t.background();
      std::string model;
      if (inst != 0) {
        g = gt.instances.at(inst).class_id;
        model = gt.instances.at(inst).model;
      }
      bool ok = policy.allowed(g).test(pred[i]);
      if (policy.water_glass() && g == *policy.water_glass()) {
        for (const auto& o : policy.overrides()) {
          if (o.partner == pred[i] && o.models.count(model) > 0) ok = true;
        }
      }
      if (ok) {
        ++tally.tp[g];
      } else {
        ++tally.fn[g];
        ++tally.fp[pred[i]];
      }
    }
  }
  return tally;
}

// Random instance ground truth: disjoint rectangles, classes and models from
// the taxonomy registry (or "m<class>" when the class has no model).
inline GroundTruth RandomGroundTruth(Rng& rng, int w, int h,
                                     const Taxonomy& t) {
  GroundTruth gt;
  gt.width = w;
  gt.height = h;
  gt.instance_map.assign(static_cast<std::size_t>(w) * h, 0);
  std::map<ClassId, std::vector<std::string>> models;
  for (const auto& [m, c] : t.models()) models[c].push_back(m);
  const std::vector<ClassId> glass = t.glass_classes();
  const int n = static_cast<int>(rng.Range(0, 6));
  std::uint32_t next = 1;
  for (int i = 0; i < n; ++i) {
    const BitMask rect = RandomRectMask(rng, w, h);
    const ClassId cls = glass[rng.Below(glass.size())];
    std::string model = "m" + std::to_string(cls);
    if (auto it = models.find(cls); it != models.end()) {
      model = it->second[rng.Below(it->second.size())];
    }
    bool any = false;
    for (std::size_t p = 0; p < rect.size(); ++p) {
      if (rect[p] && gt.instance_map[p] == 0) {
        gt.instance_map[p] = next;
        any = true;
      }
    }
    if (any) gt.instances.emplace(next++, Instance{cls, model});
  }
  return gt;
}

}  // namespace glassseg::testing

#endif  // GLASSSEG_TESTS_TEST_SUPPORT_H_
