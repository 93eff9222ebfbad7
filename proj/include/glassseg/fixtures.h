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

#ifndef GLASSSEG_FIXTURES_H_
#define GLASSSEG_FIXTURES_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "glassseg/annotations.h"
#include "glassseg/raster.h"
#include "glassseg/taxonomy.h"

namespace glassseg {

// Deterministic desk-scale scenes: geometric stand-ins for glasses with
// instance and model labels, perturbed predictions and masklets. Every
// generator is a pure function of (seed, params) built on Rng, so fixtures
// are reproducible across platforms.

struct SceneParams {
  int width = 64;
  int height = 64;
  int min_objects = 3;
  int max_objects = 4;
  std::vector<ClassId> class_pool;
  std::map<ClassId, std::vector<std::string>> model_pool;
  // Chance for each of two opaque distractor slots to be filled. Distractors
  // are background in the ground truth; they only occupy space.
  double distractor_probability = 0.3;
};

// Class pool = all glass classes; model pool = the taxonomy registry. Classes
// without a registered model get a single model named after the class.
SceneParams DefaultSceneParams(const Taxonomy& taxonomy);

// Background plus the default glass categories, with a small model
// registry (several water-glass models, one or two for the rest).
Taxonomy FixtureTaxonomy();

struct Box {
  int x = 0, y = 0, width = 0, height = 0;
};

struct Scene {
  GroundTruth gt;
  LabelMap labels;  // projection of gt
  std::vector<Box> distractors;
};

// Places min..max non-touching objects (rectangle, ellipse or
// stem-and-bowl) with class and model drawn from the pools. Fails when the
// objects cannot be placed within a bounded number of attempts.
absl::StatusOr<Scene> GenerateScene(std::uint64_t seed,
                                    const SceneParams& params,
                                    const Taxonomy& taxonomy);

struct BiasedFlip {
  ClassId from = 0;
  ClassId to = 0;
  double probability = 0.0;
};

struct PerturbParams {
  // Glass pixel replaced by a uniformly drawn other class (background
  // included).
  double flip_rate = 0.0;
  // Checked before flip_rate, in order; the first hit wins.
  std::vector<BiasedFlip> biased_flips;
  // Background pixel replaced by a uniformly drawn glass class.
  double speckle_rate = 0.0;
  // Glass pixel on an object border (4-neighbour with another label)
  // replaced by background.
  double erosion_rate = 0.0;
  // Only pixels whose four in-bounds neighbours share their label may
  // change; speckle and erosion are disabled.
  bool interior_only = false;
};

absl::Status ValidatePerturbParams(const PerturbParams& params,
                                   const Taxonomy& taxonomy);

// Pixels are visited in row-major order against the unmodified input. For a
// background pixel: speckle. For a glass pixel: erosion (border only), then
// biased flips, then the uniform flip. A Bernoulli draw is consumed only when
// its rate is positive.
absl::StatusOr<LabelMap> PerturbLabels(const LabelMap& truth,
                                       const Taxonomy& taxonomy,
                                       const PerturbParams& params,
                                       std::uint64_t seed);

// One masklet per instance (ascending instance id), grown or shrunk by a
// uniformly drawn radius in [-jitter, jitter] with a 3x3 square element,
// score in [0.5, 1). Then `spurious_count` masklets over background pixels
// only, score in [0, 0.6). Ids are 1..N in that order.
absl::StatusOr<std::vector<Masklet>> GenerateMasklets(const GroundTruth& gt,
                                                      int jitter,
                                                      int spurious_count,
                                                      std::uint64_t seed);

// Grows (radius > 0) or shrinks (radius < 0) a mask with a 3x3 square
// element applied |radius| times. Out-of-bounds pixels count as unset.
BitMask Morph(const BitMask& mask, int radius);

struct FixtureParams {
  SceneParams scene;
  PerturbParams perturb;
  int jitter = 1;
  int spurious = 2;
};

// The default family: moderate flips, red/white wine confusion, background
// speckle and border erosion.
FixtureParams DefaultFixtureParams(const Taxonomy& taxonomy);

// Perturbation confined to object interiors; masklets match the instances
// exactly and there are no spurious masklets.
FixtureParams InteriorPatchinessParams(const Taxonomy& taxonomy);

struct Fixture {
  Scene scene;
  LabelMap prediction;
  std::vector<Masklet> masklets;
};

// Scene, perturbation and masklets use DeriveSeed(seed, 0), (seed, 1) and
// (seed, 2) respectively.
absl::StatusOr<Fixture> GenerateFixture(std::uint64_t seed,
                                        const FixtureParams& params,
                                        const Taxonomy& taxonomy);

}  // namespace glassseg

#endif  // GLASSSEG_FIXTURES_H_
