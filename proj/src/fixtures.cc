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

#include "glassseg/fixtures.h"

#include <algorithm>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "glassseg/rng.h"

namespace glassseg {

namespace {

constexpr int kPlacementAttempts = 500;
constexpr int kDistractorSlots = 2;

bool Separated(const Box& a, const Box& b) {
  // At least one pixel of space between the boxes.
  return a.x + a.width < b.x || b.x + b.width < a.x ||
         a.y + a.height < b.y || b.y + b.height < a.y;
}

bool Fits(const Box& box, const std::vector<Box>& placed) {
  return std::all_of(placed.begin(), placed.end(),
                     [&](const Box& other) { return Separated(box, other); });
}

std::int64_t Sq(std::int64_t v) { return v * v; }

// Inside test for an ellipse inscribed in a w x h box, pixel-centre sampled,
// in exact integer arithmetic.
bool InEllipse(int lx, int ly, int w, int h) {
  return Sq(2 * lx + 1 - w) * Sq(h) + Sq(2 * ly + 1 - h) * Sq(w) <=
         Sq(static_cast<std::int64_t>(w) * h);
}

enum class Shape { kRect = 0, kEllipse = 1, kStemAndBowl = 2 };

bool ShapeCovers(Shape shape, int lx, int ly, int w, int h) {
  switch (shape) {
    case Shape::kRect:
      return true;
    case Shape::kEllipse:
      return InEllipse(lx, ly, w, h);
    case Shape::kStemAndBowl: {
      const int bowl = std::max(3, h / 2);
      if (ly < bowl) return InEllipse(lx, ly, w, bowl);
      if (ly == h - 1) return lx >= w / 6 && lx < w - w / 6;
      const int stem = std::max(1, w / 5);
      const int left = (w - stem) / 2;
      return lx >= left && lx < left + stem;
    }
  }
  return false;
}

absl::Status ValidateSceneParams(const SceneParams& p,
                                 const Taxonomy& taxonomy) {
  if (p.width < 16 || p.height < 16) {
    return absl::InvalidArgumentError("scene must be at least 16x16");
  }
  if (p.min_objects < 1 || p.max_objects < p.min_objects) {
    return absl::InvalidArgumentError("object count range must satisfy 1 <= min <= max");
  }
  if (p.class_pool.empty()) {
    return absl::InvalidArgumentError("class pool is empty");
  }
  for (ClassId c : p.class_pool) {
    if (!taxonomy.is_glass(c)) {
      return absl::InvalidArgumentError("class pool must hold glass classes");
    }
    auto it = p.model_pool.find(c);
    if (it == p.model_pool.end() || it->second.empty()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "no models for class \"", taxonomy.at(c).name, "\""));
    }
  }
  if (!(p.distractor_probability >= 0.0 && p.distractor_probability <= 1.0)) {
    return absl::InvalidArgumentError("distractor probability outside [0, 1]");
  }
  return absl::OkStatus();
}

bool RateOk(double r) { return r >= 0.0 && r <= 1.0; }

}  // namespace

SceneParams DefaultSceneParams(const Taxonomy& taxonomy) {
  SceneParams p;
  p.class_pool = taxonomy.glass_classes();
  for (const auto& [model, cls] : taxonomy.models()) {
    p.model_pool[cls].push_back(model);
  }
  for (ClassId c : p.class_pool) {
    auto& models = p.model_pool[c];
    if (models.empty()) models.push_back(taxonomy.at(c).name);
  }
  return p;
}

Taxonomy FixtureTaxonomy() {
  const Taxonomy base = DefaultTaxonomy();
  std::vector<ClassInfo> classes = base.classes();
  std::map<std::string, std::string> models = {
      {"goblet-A", "goblet"},
      {"goblet-B", "goblet"},
      {"POKAL", "water_glass"},
      {"SVALKA", "water_glass"},
      {"water_glass-C", "water_glass"},
      {"water_glass-D", "water_glass"},
  };
  for (const auto& c : classes) {
    if (c.kind == ClassKind::kGlass && c.name != "goblet" &&
        c.name != "water_glass") {
      models.emplace(c.name + "-A", c.name);
    }
  }
  return *Taxonomy::Create(std::move(classes), std::move(models), {"goblet"});
}

absl::StatusOr<Scene> GenerateScene(std::uint64_t seed,
                                    const SceneParams& params,
                                    const Taxonomy& taxonomy) {
  if (absl::Status s = ValidateSceneParams(params, taxonomy); !s.ok()) {
    return s;
  }
  Rng rng(seed);
  const int w = params.width;
  const int h = params.height;
  const int max_w = std::max(6, w / 3);
  const int max_h = std::max(8, h / 3);

  Scene scene;
  scene.gt.width = w;
  scene.gt.height = h;
  scene.gt.instance_map.assign(static_cast<std::size_t>(w) * h, 0);

  std::vector<Box> placed;
  const auto count = rng.Range(params.min_objects, params.max_objects);
  for (std::int64_t n = 0; n < count; ++n) {
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      const auto shape = static_cast<Shape>(rng.Below(3));
      Box box;
      box.width = static_cast<int>(rng.Range(6, max_w));
      box.height = static_cast<int>(rng.Range(8, max_h));
      box.x = static_cast<int>(rng.Range(0, w - box.width));
      box.y = static_cast<int>(rng.Range(0, h - box.height));
      if (!Fits(box, placed)) continue;
      ok = true;
      placed.push_back(box);
      const auto id = static_cast<std::uint32_t>(n + 1);
      const ClassId cls =
          params.class_pool[rng.Below(params.class_pool.size())];
      const auto& models = params.model_pool.at(cls);
      scene.gt.instances.emplace(
          id, Instance{cls, models[rng.Below(models.size())]});
      for (int ly = 0; ly < box.height; ++ly) {
        for (int lx = 0; lx < box.width; ++lx) {
          if (ShapeCovers(shape, lx, ly, box.width, box.height)) {
            scene.gt.instance_map[static_cast<std::size_t>(box.y + ly) * w +
                                  box.x + lx] = id;
          }
        }
      }
    }
    if (!ok) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "could not place object ", n + 1, " of ", count, " in a ", w, "x", h,
          " scene"));
    }
  }
  for (int slot = 0; slot < kDistractorSlots; ++slot) {
    if (!rng.Bernoulli(params.distractor_probability)) continue;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      Box box;
      box.width = static_cast<int>(rng.Range(4, max_w));
      box.height = static_cast<int>(rng.Range(4, max_h));
      box.x = static_cast<int>(rng.Range(0, w - box.width));
      box.y = static_cast<int>(rng.Range(0, h - box.height));
      if (!Fits(box, placed)) continue;
      placed.push_back(box);
      scene.distractors.push_back(box);
      break;
    }
  }
  scene.labels = ProjectLabels(scene.gt, taxonomy);
  return scene;
}

absl::Status ValidatePerturbParams(const PerturbParams& params,
                                   const Taxonomy& taxonomy) {
  if (!RateOk(params.flip_rate) || !RateOk(params.speckle_rate) ||
      !RateOk(params.erosion_rate)) {
    return absl::InvalidArgumentError("perturbation rates must lie in [0, 1]");
  }
  for (const auto& b : params.biased_flips) {
    if (!RateOk(b.probability)) {
      return absl::InvalidArgumentError("biased flip probability outside [0, 1]");
    }
    if (!taxonomy.contains(b.from) || !taxonomy.contains(b.to)) {
      return absl::InvalidArgumentError("biased flip references unknown class");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<LabelMap> PerturbLabels(const LabelMap& truth,
                                       const Taxonomy& taxonomy,
                                       const PerturbParams& params,
                                       std::uint64_t seed) {
  if (absl::Status s = ValidatePerturbParams(params, taxonomy); !s.ok()) {
    return s;
  }
  if (absl::Status s = ValidateLabels(truth, taxonomy); !s.ok()) return s;
  Rng rng(seed);
  const ClassId bg = taxonomy.background();
  const std::vector<ClassId> glass = taxonomy.glass_classes();
  const std::size_t k = taxonomy.size();
  const int w = truth.width();
  const int h = truth.height();
  const double speckle = params.interior_only ? 0.0 : params.speckle_rate;
  const double erosion = params.interior_only ? 0.0 : params.erosion_rate;

  auto is_border = [&](int x, int y) {
    const ClassId v = truth(x, y);
    return (x > 0 && truth(x - 1, y) != v) ||
           (x + 1 < w && truth(x + 1, y) != v) ||
           (y > 0 && truth(x, y - 1) != v) ||
           (y + 1 < h && truth(x, y + 1) != v);
  };

  LabelMap out = truth;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const ClassId v = truth(x, y);
      if (v == bg) {
        if (speckle > 0.0 && !glass.empty() && rng.Bernoulli(speckle)) {
          out(x, y) = glass[rng.Below(glass.size())];
        }
        continue;
      }
      const bool border = is_border(x, y);
      if (params.interior_only && border) continue;
      if (border && erosion > 0.0 && rng.Bernoulli(erosion)) {
        out(x, y) = bg;
        continue;
      }
      bool flipped = false;
      for (const auto& b : params.biased_flips) {
        if (b.from != v || b.probability <= 0.0) continue;
        if (rng.Bernoulli(b.probability)) {
          out(x, y) = b.to;
          flipped = true;
          break;
        }
      }
      if (flipped || params.flip_rate <= 0.0 || k < 2) continue;
      if (rng.Bernoulli(params.flip_rate)) {
        // Uniform over the k - 1 classes other than v.
        auto other = static_cast<ClassId>(rng.Below(k - 1));
        if (other >= v) ++other;
        out(x, y) = other;
      }
    }
  }
  return out;
}

BitMask Morph(const BitMask& mask, int radius) {
  BitMask current = mask;
  const bool grow = radius > 0;
  const int w = mask.width();
  const int h = mask.height();
  for (int step = 0; step < std::abs(radius); ++step) {
    BitMask next(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool any = false;
        bool all = true;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            const bool v =
                nx >= 0 && ny >= 0 && nx < w && ny < h && current(nx, ny);
            any = any || v;
            all = all && v;
          }
        }
        next.Set(x, y, grow ? any : all);
      }
    }
    current = std::move(next);
  }
  return current;
}

absl::StatusOr<std::vector<Masklet>> GenerateMasklets(const GroundTruth& gt,
                                                      int jitter,
                                                      int spurious_count,
                                                      std::uint64_t seed) {
  if (jitter < 0 || spurious_count < 0) {
    return absl::InvalidArgumentError(
        "jitter and spurious count must be non-negative");
  }
  Rng rng(seed);
  const int w = gt.width;
  const int h = gt.height;
  std::vector<Masklet> out;
  std::int64_t next_id = 1;

  std::map<std::uint32_t, BitMask> masks;
  for (const auto& [id, inst] : gt.instances) masks.emplace(id, BitMask(w, h));
  for (std::size_t i = 0; i < gt.instance_map.size(); ++i) {
    if (gt.instance_map[i] != 0) masks.at(gt.instance_map[i]).Set(i);
  }
  for (auto& [id, mask] : masks) {
    const int radius =
        jitter > 0 ? static_cast<int>(rng.Range(-jitter, jitter)) : 0;
    const double score = 0.5 + 0.5 * rng.Uniform01();
    if (mask.Area() == 0) continue;
    BitMask shaped = radius == 0 ? mask : Morph(mask, radius);
    if (shaped.Area() == 0) shaped = mask;
    out.push_back({next_id++, score, Region::FromMask(shaped)});
  }

  std::vector<std::size_t> background_pixels;
  for (std::size_t i = 0; i < gt.instance_map.size(); ++i) {
    if (gt.instance_map[i] == 0) background_pixels.push_back(i);
  }
  if (spurious_count > 0 && background_pixels.empty()) {
    return absl::InvalidArgumentError(
        "cannot place spurious masklets: no background pixels");
  }
  const int max_w = std::max(2, w / 4);
  const int max_h = std::max(2, h / 4);
  for (int n = 0; n < spurious_count; ++n) {
    const double score = 0.6 * rng.Uniform01();
    // Anchor the rectangle on a background pixel so it is never empty.
    const std::size_t anchor =
        background_pixels[rng.Below(background_pixels.size())];
    const int ax = static_cast<int>(anchor % w);
    const int ay = static_cast<int>(anchor / w);
    const int rw = static_cast<int>(rng.Range(2, max_w));
    const int rh = static_cast<int>(rng.Range(2, max_h));
    BitMask mask(w, h);
    for (int y = ay; y < std::min(h, ay + rh); ++y) {
      for (int x = ax; x < std::min(w, ax + rw); ++x) {
        if (gt.instance_map[static_cast<std::size_t>(y) * w + x] == 0) {
          mask.Set(x, y);
        }
      }
    }
    out.push_back({next_id++, score, Region::FromMask(mask)});
  }
  return out;
}

FixtureParams DefaultFixtureParams(const Taxonomy& taxonomy) {
  FixtureParams p;
  p.scene = DefaultSceneParams(taxonomy);
  p.perturb.flip_rate = 0.05;
  p.perturb.speckle_rate = 0.01;
  p.perturb.erosion_rate = 0.3;
  auto red = taxonomy.ClassByName("red_wine_glass");
  auto white = taxonomy.ClassByName("white_wine_glass");
  if (red.ok() && white.ok()) {
    p.perturb.biased_flips.push_back({*red, *white, 0.3});
    p.perturb.biased_flips.push_back({*white, *red, 0.2});
  }
  return p;
}

FixtureParams InteriorPatchinessParams(const Taxonomy& taxonomy) {
  FixtureParams p;
  p.scene = DefaultSceneParams(taxonomy);
  p.perturb.flip_rate = 0.25;
  p.perturb.interior_only = true;
  p.jitter = 0;
  p.spurious = 0;
  return p;
}

absl::StatusOr<Fixture> GenerateFixture(std::uint64_t seed,
                                        const FixtureParams& params,
                                        const Taxonomy& taxonomy) {
  Fixture f;
  absl::StatusOr<Scene> scene =
      GenerateScene(DeriveSeed(seed, 0), params.scene, taxonomy);
  if (!scene.ok()) return scene.status();
  f.scene = *std::move(scene);
  absl::StatusOr<LabelMap> pred = PerturbLabels(
      f.scene.labels, taxonomy, params.perturb, DeriveSeed(seed, 1));
  if (!pred.ok()) return pred.status();
  f.prediction = *std::move(pred);
  absl::StatusOr<std::vector<Masklet>> masklets = GenerateMasklets(
      f.scene.gt, params.jitter, params.spurious, DeriveSeed(seed, 2));
  if (!masklets.ok()) return masklets.status();
  f.masklets = *std::move(masklets);
  return f;
}

}  // namespace glassseg
