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

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "glassseg/confusion.h"
#include "glassseg/fixtures.h"
#include "glassseg/merge_policy.h"
#include "glassseg/rng.h"
#include "test_support.h"

namespace glassseg {
namespace {

using ::glassseg::testing::RandomGroundTruth;
using ::glassseg::testing::RandomLabelMap;
using ::glassseg::testing::SmallTaxonomy;

LabelSet Set(std::initializer_list<ClassId> ids) {
  LabelSet s;
  for (ClassId c : ids) s.set(c);
  return s;
}

// 1 x n ground truth with one instance per maximal run of a glass class.
GroundTruth RowGroundTruth(const std::vector<ClassId>& classes,
                           const std::string& model = "") {
  GroundTruth gt;
  gt.width = static_cast<int>(classes.size());
  gt.height = 1;
  gt.instance_map.assign(classes.size(), 0);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == 0) continue;
    if (i == 0 || classes[i - 1] != classes[i]) {
      gt.instances.emplace(++next, Instance{classes[i], model});
    }
    gt.instance_map[i] = next;
  }
  return gt;
}

// ------------------------------------------------------------ Confusion

TEST(ConfusionTest, HandCountedRows) {
  const Taxonomy t = SmallTaxonomy(2);  // background, A=1, B=2
  const GroundTruth gt = RowGroundTruth({1, 1, 2});
  const LabelMap pred(3, 1, std::vector<ClassId>{1, 2, 2});
  ConfusionMatrix m(t.size());
  ASSERT_TRUE(AccumulateConfusion(gt, pred, t, m).ok());
  EXPECT_EQ(m.at(1, 1), 1u);
  EXPECT_EQ(m.at(1, 2), 1u);
  EXPECT_EQ(m.at(2, 2), 1u);
  EXPECT_EQ(m.RowSum(1), 2u);
  EXPECT_EQ(m.RowSum(0), 0u);

  const FractionMatrix f = RowNormalize(m);
  EXPECT_EQ(f.at(1, 1), 0.5);
  EXPECT_EQ(f.at(1, 2), 0.5);
  EXPECT_EQ(f.at(2, 2), 1.0);
  // Zero row stays zero.
  for (ClassId c = 0; c < 3; ++c) EXPECT_EQ(f.at(0, c), 0.0);

  // Accumulating the same pair again doubles every cell.
  ConfusionMatrix twice = m;
  ASSERT_TRUE(AccumulateConfusion(gt, pred, t, twice).ok());
  for (ClassId r = 0; r < 3; ++r) {
    for (ClassId c = 0; c < 3; ++c) EXPECT_EQ(twice.at(r, c), 2 * m.at(r, c));
  }
}

TEST(ConfusionTest, PerfectPredictionIsDiagonal) {
  const Taxonomy t = FixtureTaxonomy();
  Rng rng(8);
  const GroundTruth gt = RandomGroundTruth(rng, 20, 15, t);
  ConfusionMatrix m(t.size());
  ASSERT_TRUE(AccumulateConfusion(gt, ProjectLabels(gt, t), t, m).ok());
  for (std::size_t r = 0; r < t.size(); ++r) {
    for (std::size_t c = 0; c < t.size(); ++c) {
      if (r != c) EXPECT_EQ(m.at(r, c), 0u);
    }
  }
  const FractionMatrix f = RowNormalize(m);
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (m.RowSum(r) > 0) EXPECT_EQ(f.at(r, r), 1.0);
  }
}

TEST(ConfusionTest, ShapeAndClassErrors) {
  const Taxonomy t = SmallTaxonomy(2);
  const GroundTruth gt = RowGroundTruth({1, 1, 2});
  ConfusionMatrix m(t.size());
  EXPECT_FALSE(AccumulateConfusion(gt, LabelMap(2, 1, 0), t, m).ok());
  EXPECT_FALSE(
      AccumulateConfusion(gt, LabelMap(3, 1, std::vector<ClassId>{0, 0, 9}), t, m)
          .ok());
  ConfusionMatrix wrong(4);
  EXPECT_FALSE(AccumulateConfusion(gt, LabelMap(3, 1, 0), t, wrong).ok());
  EXPECT_FALSE(m.Add(wrong).ok());
}

TEST(ConfusionTest, AccumulationIsOrderIndependentAndRowsSumToOne) {
  const Taxonomy t = FixtureTaxonomy();
  Rng rng(9);
  std::vector<std::pair<GroundTruth, LabelMap>> images;
  for (int i = 0; i < 12; ++i) {
    const int w = static_cast<int>(rng.Range(1, 20));
    const int h = static_cast<int>(rng.Range(1, 20));
    images.emplace_back(RandomGroundTruth(rng, w, h, t),
                        RandomLabelMap(rng, w, h, t.size()));
  }
  ConfusionMatrix forward(t.size()), backward(t.size()), summed(t.size());
  for (const auto& [gt, pred] : images) {
    ASSERT_TRUE(AccumulateConfusion(gt, pred, t, forward).ok());
    ConfusionMatrix single(t.size());
    ASSERT_TRUE(AccumulateConfusion(gt, pred, t, single).ok());
    ASSERT_TRUE(summed.Add(single).ok());
  }
  for (auto it = images.rbegin(); it != images.rend(); ++it) {
    ASSERT_TRUE(AccumulateConfusion(it->first, it->second, t, backward).ok());
  }
  EXPECT_EQ(forward, backward);
  EXPECT_EQ(forward, summed);
  const FractionMatrix f = RowNormalize(forward);
  for (std::size_t r = 0; r < t.size(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < t.size(); ++c) sum += f.at(r, c);
    if (forward.RowSum(r) > 0) {
      EXPECT_NEAR(sum, 1.0, 1e-12);
    } else {
      EXPECT_EQ(sum, 0.0);
    }
  }
}

TEST(ConfusionTest, FileFormatsRoundTrip) {
  const Taxonomy t = SmallTaxonomy(2);
  ConfusionMatrix m(3);
  m.at(1, 1) = 7;
  m.at(1, 2) = 3;
  m.at(0, 0) = 11;
  absl::StatusOr<ConfusionMatrix> counts =
      ParseConfusionCounts(SerializeConfusionJson(m, t), t);
  ASSERT_TRUE(counts.ok()) << counts.status();
  EXPECT_EQ(*counts, m);
  absl::StatusOr<FractionMatrix> from_counts =
      ParseConfusionFractions(SerializeConfusionJson(m, t), t);
  ASSERT_TRUE(from_counts.ok());
  EXPECT_EQ(*from_counts, RowNormalize(m));

  FractionMatrix f(3);
  f.at(1, 2) = 0.05;
  f.at(1, 1) = 0.95;
  absl::StatusOr<FractionMatrix> verbatim =
      ParseConfusionFractions(SerializeFractionsJson(f, t), t);
  ASSERT_TRUE(verbatim.ok());
  EXPECT_EQ(*verbatim, f);

  EXPECT_EQ(SerializeConfusionCsv(m, t),
            "gt\\pred,background,g1,g2\n"
            "background,11,0,0\n"
            "g1,0,7,3\n"
            "g2,0,0,0\n");
}

TEST(ConfusionTest, FileErrors) {
  const Taxonomy t = SmallTaxonomy(2);
  const char* bad[] = {
      "[]",
      R"({"classes":["background","g2","g1"],"counts":[[0,0,0],[0,0,0],[0,0,0]]})",
      R"({"classes":["background","g1","g2"],"counts":[[0,0,0],[0,0,0]]})",
      R"({"classes":["background","g1","g2"],"counts":[[0,0,0],[0,-1,0],[0,0,0]]})",
      R"({"classes":["background","g1","g2"],"fractions":[[0,0,0],[0,1.5,0],[0,0,0]]})",
      R"({"classes":["background","g1","g2"]})",
  };
  for (const char* doc : bad) {
    EXPECT_FALSE(ParseConfusionFractions(doc, t).ok()) << doc;
  }
}

// ------------------------------------------------------ Pair derivation

class DerivationTest : public ::testing::Test {
 protected:
  ClassId Id(const char* name) const { return *t_.ClassByName(name); }
  FractionMatrix Identity() const {
    FractionMatrix f(t_.size());
    for (std::size_t c = 0; c < t_.size(); ++c) f.at(c, c) = 1.0;
    return f;
  }
  Taxonomy t_ = FixtureTaxonomy();
};

TEST_F(DerivationTest, IdentityGivesNoPairs) {
  absl::StatusOr<PairSet> pairs = DeriveSimilarPairs(Identity(), {}, t_);
  ASSERT_TRUE(pairs.ok());
  EXPECT_TRUE(pairs->empty());
}

TEST_F(DerivationTest, EitherDirectionSuffices) {
  FractionMatrix f = Identity();
  f.at(Id("red_wine_glass"), Id("white_wine_glass")) = 0.06;
  f.at(Id("white_wine_glass"), Id("red_wine_glass")) = 0.01;
  absl::StatusOr<PairSet> pairs = DeriveSimilarPairs(f, {}, t_);
  ASSERT_TRUE(pairs.ok());
  EXPECT_EQ(*pairs, (PairSet{MakePair(Id("red_wine_glass"),
                                      Id("white_wine_glass"))}));
}

TEST_F(DerivationTest, ThresholdIsStrict) {
  FractionMatrix f = Identity();
  f.at(Id("carafe"), Id("pint_glass")) = 0.05;
  EXPECT_TRUE(DeriveSimilarPairs(f, {}, t_)->empty());
  f.at(Id("carafe"), Id("pint_glass")) = 0.0500001;
  EXPECT_EQ(DeriveSimilarPairs(f, {}, t_)->size(), 1u);
}

TEST_F(DerivationTest, ExcludedAndBackgroundNeverPair) {
  FractionMatrix f = Identity();
  f.at(Id("goblet"), Id("water_glass")) = 0.20;
  f.at(Id("carafe"), 0) = 0.5;
  f.at(0, Id("pint_glass")) = 0.5;
  MergeDerivationConfig cfg;
  cfg.excluded = {Id("goblet")};
  EXPECT_TRUE(DeriveSimilarPairs(f, cfg, t_)->empty());
  // Without the exclusion the goblet pair appears; background still not.
  EXPECT_EQ(*DeriveSimilarPairs(f, {}, t_),
            (PairSet{MakePair(Id("goblet"), Id("water_glass"))}));
}

TEST_F(DerivationTest, ShapeMismatchIsAnError) {
  EXPECT_FALSE(DeriveSimilarPairs(FractionMatrix(3), {}, t_).ok());
}

TEST_F(DerivationTest, MonotoneInThreshold) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    FractionMatrix f(t_.size());
    for (std::size_t r = 0; r < t_.size(); ++r) {
      for (std::size_t c = 0; c < t_.size(); ++c) {
        f.at(r, c) = 0.2 * rng.Uniform01();
      }
    }
    const double lo = 0.2 * rng.Uniform01();
    const double hi = lo + 0.1 * rng.Uniform01();
    MergeDerivationConfig a, b;
    a.similarity_min = lo;
    b.similarity_min = hi;
    const PairSet loose = *DeriveSimilarPairs(f, a, t_);
    const PairSet tight = *DeriveSimilarPairs(f, b, t_);
    EXPECT_TRUE(std::includes(loose.begin(), loose.end(), tight.begin(),
                              tight.end()));
    for (const auto& [c, d] : loose) {
      EXPECT_LT(c, d);
      EXPECT_TRUE(t_.is_glass(c) && t_.is_glass(d));
    }
  }
}

// ------------------------------------------------------- Policy building

TEST_F(DerivationTest, WineGroupIsNotTransitive) {
  const ClassId white = Id("white_wine_glass"), red = Id("red_wine_glass"),
                tulip = Id("tulip_beer_glass"), champ = Id("champagne_flute");
  const PairSet pairs = {MakePair(white, red), MakePair(white, tulip),
                         MakePair(red, tulip), MakePair(champ, white)};
  absl::StatusOr<MergePolicy> p =
      BuildMergePolicy(pairs, Id("water_glass"), {}, t_);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->allowed(white), Set({white, red, tulip, champ}));
  EXPECT_EQ(p->allowed(champ), Set({champ, white}));
  EXPECT_EQ(p->allowed(red), Set({red, white, tulip}));
  EXPECT_EQ(p->allowed(tulip), Set({tulip, white, red}));
  EXPECT_EQ(p->allowed(0), Set({0}));
  // A red wine pixel accepts exactly the three wine-group labels.
  EXPECT_EQ(p->AllowedLabels(red, "red_wine_glass-A"), Set({red, white, tulip}));
  EXPECT_EQ(p->AllowedLabels(0, "anything"), Set({0}));
}

TEST_F(DerivationTest, EmptyPairsGiveIdentity) {
  absl::StatusOr<MergePolicy> p = BuildMergePolicy({}, std::nullopt, {}, t_);
  ASSERT_TRUE(p.ok());
  for (std::size_t c = 0; c < t_.size(); ++c) {
    EXPECT_EQ(p->allowed(c), Set({static_cast<ClassId>(c)}));
  }
  EXPECT_TRUE(p->overrides().empty());
}

TEST_F(DerivationTest, WaterGlassOverrideIsPerModel) {
  const ClassId pint = Id("pint_glass"), water = Id("water_glass");
  absl::StatusOr<MergePolicy> p = BuildMergePolicy(
      {MakePair(pint, water)}, water, {{pint, {"POKAL"}}}, t_);
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->allowed(pint), Set({pint, water}));
  // Class level: water glass itself gains nothing.
  EXPECT_EQ(p->allowed(water), Set({water}));
  EXPECT_EQ(p->AllowedLabels(water, "POKAL"), Set({water, pint}));
  EXPECT_EQ(p->AllowedLabels(water, "SVALKA"), Set({water}));

  // Without an override the reverse direction is not granted at all.
  absl::StatusOr<MergePolicy> plain =
      BuildMergePolicy({MakePair(pint, water)}, water, {}, t_);
  ASSERT_TRUE(plain.ok());
  EXPECT_EQ(plain->AllowedLabels(water, "POKAL"), Set({water}));
  EXPECT_EQ(plain->allowed(pint), Set({pint, water}));
}

TEST_F(DerivationTest, OverrideErrors) {
  const ClassId pint = Id("pint_glass"), water = Id("water_glass");
  // Override without the pair.
  EXPECT_FALSE(BuildMergePolicy({}, water, {{pint, {"POKAL"}}}, t_).ok());
  // Unknown model id.
  EXPECT_FALSE(BuildMergePolicy({MakePair(pint, water)}, water,
                                {{pint, {"NO_SUCH_MODEL"}}}, t_)
                   .ok());
  // A model registered to another class.
  EXPECT_FALSE(BuildMergePolicy({MakePair(pint, water)}, water,
                                {{pint, {"goblet-A"}}}, t_)
                   .ok());
  // Overrides need a water-glass class.
  EXPECT_FALSE(BuildMergePolicy({MakePair(pint, water)}, std::nullopt,
                                {{pint, {"POKAL"}}}, t_)
                   .ok());
}

TEST_F(DerivationTest, CreateValidatesSets) {
  std::vector<LabelSet> allowed(t_.size());
  for (std::size_t c = 0; c < allowed.size(); ++c) allowed[c].set(c);
  EXPECT_TRUE(MergePolicy::Create(t_, allowed, std::nullopt, {}).ok());

  auto not_reflexive = allowed;
  not_reflexive[3].reset(3);
  EXPECT_FALSE(MergePolicy::Create(t_, not_reflexive, std::nullopt, {}).ok());

  auto bg_merged = allowed;
  bg_merged[0].set(2);
  EXPECT_FALSE(MergePolicy::Create(t_, bg_merged, std::nullopt, {}).ok());

  auto glass_to_bg = allowed;
  glass_to_bg[2].set(0);
  EXPECT_FALSE(MergePolicy::Create(t_, glass_to_bg, std::nullopt, {}).ok());

  auto out_of_range = allowed;
  out_of_range[2].set(t_.size());
  EXPECT_FALSE(MergePolicy::Create(t_, out_of_range, std::nullopt, {}).ok());

  auto wrong_count = allowed;
  wrong_count.pop_back();
  EXPECT_FALSE(MergePolicy::Create(t_, wrong_count, std::nullopt, {}).ok());

  EXPECT_FALSE(MergePolicy::Create(t_, allowed, ClassId{0}, {}).ok());
}

TEST_F(DerivationTest, PolicySerializationRoundTrips) {
  const ClassId pint = Id("pint_glass"), water = Id("water_glass"),
                mug = Id("beer_mug");
  absl::StatusOr<MergePolicy> p = BuildMergePolicy(
      {MakePair(pint, water), MakePair(mug, water),
       MakePair(Id("red_wine_glass"), Id("white_wine_glass"))},
      water, {{pint, {"POKAL"}}, {mug, {"SVALKA", "POKAL"}}}, t_);
  ASSERT_TRUE(p.ok()) << p.status();
  const std::string text = SerializeMergePolicy(*p, t_);
  absl::StatusOr<MergePolicy> back = ParseMergePolicy(text, t_);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, *p);
  EXPECT_EQ(SerializeMergePolicy(*back, t_), text);

  const MergePolicy identity = MergePolicy::Identity(t_);
  absl::StatusOr<MergePolicy> id_back =
      ParseMergePolicy(SerializeMergePolicy(identity, t_), t_);
  ASSERT_TRUE(id_back.ok());
  EXPECT_EQ(*id_back, identity);
}

TEST_F(DerivationTest, PolicyFileErrors) {
  const char* bad[] = {
      R"({"allowed":{"nope":["nope"]}})",
      R"({"allowed":{"background":["background","goblet"]}})",
      R"({"allowed":{"goblet":"goblet"}})",
      R"({"water_glass":"background"})",
      R"({"water_glass_overrides":[{"class":"pint_glass","models":["POKAL"]}],
          "water_glass":null})",
      "nonsense",
  };
  for (const char* doc : bad) EXPECT_FALSE(ParseMergePolicy(doc, t_).ok()) << doc;
  // Omitted sets stay reflexive.
  absl::StatusOr<MergePolicy> sparse = ParseMergePolicy(
      R"({"allowed":{"pint_glass":["water_glass"]}})", t_);
  ASSERT_TRUE(sparse.ok()) << sparse.status();
  EXPECT_EQ(sparse->allowed(Id("pint_glass")),
            Set({Id("pint_glass"), Id("water_glass")}));
}

TEST_F(DerivationTest, OverrideSpecParsing) {
  absl::StatusOr<OverrideSpec> spec = ParseOverrideSpec(
      R"({"water_glass":"water_glass","overrides":[
           {"class":"pint_glass","models":["POKAL"]},
           {"class":"beer_mug","models":["SVALKA"]}]})",
      t_);
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->water_glass, Id("water_glass"));
  ASSERT_EQ(spec->overrides.size(), 2u);
  EXPECT_FALSE(ParseOverrideSpec(R"({"overrides":[{"class":"nope","models":[]}]})",
                                 t_)
                   .ok());
  EXPECT_FALSE(ParseOverrideSpec(R"({"overrides":[{"class":"pint_glass","models":[1]}]})",
                                 t_)
                   .ok());
}

}  // namespace
}  // namespace glassseg
