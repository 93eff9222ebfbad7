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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "glassseg/io.h"
#include "json.hpp"

namespace glassseg::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Call(std::vector<std::string> args) {
  args.insert(args.begin(), "glassseg");
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const std::string& path) {
  absl::StatusOr<std::string> s = ReadFile(path);
  return s.ok() ? *s : std::string("<missing>");
}

json ReadJson(const std::string& path) { return json::parse(Slurp(path)); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("cli_" + std::string(::testing::UnitTest::GetInstance()
                                     ->current_test_info()
                                     ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, VersionAndHelp) {
  Result v = Call({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(kVersion), std::string::npos);
  for (const char* sub : {"gen-fixtures", "fuse", "confmat", "derive-merges",
                          "evaluate", "rle"}) {
    Result h = Call({sub, "--help"});
    EXPECT_EQ(h.code, 0) << sub;
    EXPECT_NE(h.out.find("--"), std::string::npos) << sub;
  }
  EXPECT_EQ(Call({"rle", "encode", "--help"}).code, 0);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Call({}).code, 1);
  EXPECT_EQ(Call({"frobnicate"}).code, 1);
  EXPECT_EQ(Call({"evaluate", "--bogus-flag"}).code, 1);
  EXPECT_EQ(Call({"gen-fixtures", "--seed", "1"}).code, 1);
  EXPECT_EQ(Call({"fuse", "--reject-mode", "sideways"}).code, 1);
  EXPECT_EQ(Call({"--jobs", "0", "rle", "encode", "--mask", "a", "--out", "b"})
                .code,
            1);
}

TEST_F(CliTest, MissingFilesExitTwo) {
  Result r = Call({"evaluate", "--manifest", P("nope.json"), "--out", P("r.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos);

  ASSERT_TRUE(WriteFile(P("manifest.json"),
                        R"({"records":[{"id":"a","groundtruth":"gt.json",
                            "prediction":"p.pgm"}]})")
                  .ok());
  EXPECT_EQ(Call({"evaluate", "--manifest", P("manifest.json"), "--taxonomy",
                  P("t.json"), "--out", P("r.json")})
                .code,
            2);
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  ASSERT_EQ(Call({"--quiet", "gen-fixtures", "--seed", "3", "--count", "1",
                  "--out-dir", P("fx")})
                .code,
            0);
  const std::string scene = P("fx/scene_0000/");
  Result bad_fraction =
      Call({"fuse", "--labelmap", scene + "pred.pgm", "--masklets",
            scene + "masklets.json", "--taxonomy", P("fx/taxonomy.json"),
            "--glass-fraction", "1.5", "--out", P("o.pgm")});
  EXPECT_EQ(bad_fraction.code, 1);

  ASSERT_TRUE(WriteFile(P("bad_tax.json"), R"({"classes":[{"name":"x"}]})").ok());
  EXPECT_EQ(Call({"evaluate", "--manifest", P("fx/manifest.json"), "--taxonomy",
                  P("bad_tax.json"), "--out", P("r.json")})
                .code,
            1);
  EXPECT_EQ(Call({"evaluate", "--manifest", P("fx/manifest.json"), "--highlight",
                  "Goblet", "--out", P("r.json")})
                .code,
            1);
  // Strict model checking on a ground truth with an unregistered model.
  json gt = ReadJson(scene + "gt.json");
  gt["instances"][0]["model"] = "UNREGISTERED";
  ASSERT_TRUE(WriteFile(scene + "gt.json", gt.dump()).ok());
  Result warn = Call({"evaluate", "--manifest", P("fx/manifest.json"), "--out",
                      P("r.json")});
  EXPECT_EQ(warn.code, 0);
  EXPECT_NE(warn.err.find("UNREGISTERED"), std::string::npos);
  EXPECT_EQ(Call({"evaluate", "--manifest", P("fx/manifest.json"),
                  "--strict-models", "--out", P("r.json")})
                .code,
            1);
}

TEST_F(CliTest, GenFixturesLayoutAndDeterminism) {
  ASSERT_EQ(Call({"--quiet", "gen-fixtures", "--seed", "11", "--count", "3",
                  "--out-dir", P("a")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "--jobs", "3", "gen-fixtures", "--seed", "11",
                  "--count", "3", "--out-dir", P("b")})
                .code,
            0);
  const json manifest = ReadJson(P("a/manifest.json"));
  EXPECT_EQ(manifest["taxonomy"], "taxonomy.json");
  ASSERT_EQ(manifest["records"].size(), 3u);
  EXPECT_EQ(manifest["records"][0]["id"], "scene_0000");
  EXPECT_EQ(manifest["records"][0]["groundtruth"], "scene_0000/gt.json");
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(P("a"))) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path rel = fs::relative(entry.path(), P("a"));
    EXPECT_EQ(Slurp(entry.path().string()), Slurp((dir_ / "b" / rel).string()))
        << rel;
  }
  EXPECT_EQ(files, 2u + 3u * 4u);
  for (const char* f : {"gt.json", "gt.pgm", "pred.pgm", "masklets.json"}) {
    EXPECT_TRUE(fs::exists(P(std::string("a/scene_0002/") + f))) << f;
  }
}

TEST_F(CliTest, PerfectPredictionScoresOne) {
  ASSERT_EQ(Call({"--quiet", "gen-fixtures", "--seed", "5", "--count", "4",
                  "--out-dir", P("fx")})
                .code,
            0);
  json manifest = ReadJson(P("fx/manifest.json"));
  for (auto& r : manifest["records"]) {
    std::string gt = r["groundtruth"];
    r["prediction"] = gt.substr(0, gt.size() - 4) + "pgm";
  }
  ASSERT_TRUE(WriteFile(P("fx/perfect.json"), manifest.dump()).ok());
  Result r = Call({"evaluate", "--manifest", P("fx/perfect.json"), "--out",
                   P("r.json"), "--csv", P("r.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = ReadJson(P("r.json"));
  EXPECT_EQ(report["mIoU"], 1.0);
  EXPECT_EQ(report["mAcc"], 1.0);
  EXPECT_EQ(report["schema_version"], 1);
  const std::string csv = Slurp(P("r.csv"));
  EXPECT_EQ(csv.rfind("class,TP,FP,FN,IoU,Acc\n", 0), 0u);
  EXPECT_NE(csv.find("\nmean,,,,1,1\n"), std::string::npos);
}

TEST_F(CliTest, FuseThenEvaluateImprovesInteriorFamily) {
  ASSERT_EQ(Call({"--quiet", "gen-fixtures", "--seed", "21", "--count", "6",
                  "--family", "interior", "--out-dir", P("fx")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "evaluate", "--manifest", P("fx/manifest.json"),
                  "--out", P("raw.json")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "fuse", "--manifest", P("fx/manifest.json"),
                  "--out-dir", P("fused")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "evaluate", "--manifest", P("fused/manifest.json"),
                  "--out", P("fused.json")})
                .code,
            0);
  const double raw = ReadJson(P("raw.json"))["mIoU"];
  const double fused = ReadJson(P("fused.json"))["mIoU"];
  EXPECT_GT(fused, raw);

  // Rerunning rewrites byte-identical outputs.
  const std::string first = Slurp(P("fused/scene_0003.pgm"));
  const std::string first_manifest = Slurp(P("fused/manifest.json"));
  ASSERT_EQ(Call({"--quiet", "--jobs", "1", "fuse", "--manifest",
                  P("fx/manifest.json"), "--out-dir", P("fused")})
                .code,
            0);
  EXPECT_EQ(Slurp(P("fused/scene_0003.pgm")), first);
  EXPECT_EQ(Slurp(P("fused/manifest.json")), first_manifest);
}

TEST_F(CliTest, SingleFileFuseWritesDecisions) {
  ASSERT_EQ(Call({"--quiet", "gen-fixtures", "--seed", "8", "--count", "1",
                  "--out-dir", P("fx")})
                .code,
            0);
  const std::string scene = P("fx/scene_0000/");
  Result r = Call({"fuse", "--labelmap", scene + "pred.pgm", "--masklets",
                   scene + "masklets.json", "--taxonomy", P("fx/taxonomy.json"),
                   "--reject-mode", "keep", "--quality-min", "0.1", "--out",
                   P("fused.pgm"), "--decisions", P("decisions.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json d = ReadJson(P("decisions.json"));
  EXPECT_EQ(d["schema_version"], 1);
  EXPECT_EQ(d["reject_mode"], "keep");
  ASSERT_FALSE(d["masklets"].empty());
  for (const auto& m : d["masklets"]) {
    EXPECT_TRUE(m["verdict"] == "assigned" || m["verdict"] == "rejected");
    std::uint64_t sum = 0;
    for (const auto& [name, n] : m["counts"].items()) sum += n.get<std::uint64_t>();
    EXPECT_EQ(sum, m["area"].get<std::uint64_t>());
    EXPECT_GE(m["score"].get<double>(), 0.1);
  }
  EXPECT_EQ(Slurp(P("fused.pgm")).rfind("P5\n64 64\n255\n", 0), 0u);
}

TEST_F(CliTest, ConfmatAndDeriveMerges) {
  ASSERT_EQ(Call({"--quiet", "gen-fixtures", "--seed", "2", "--count", "8",
                  "--out-dir", P("fx")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "confmat", "--manifest", P("fx/manifest.json"),
                  "--out", P("cm.json")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "confmat", "--manifest", P("fx/manifest.json"),
                  "--out", P("cm.csv")})
                .code,
            0);
  const json cm = ReadJson(P("cm.json"));
  EXPECT_EQ(cm["classes"].size(), 12u);
  std::uint64_t total = 0;
  for (const auto& row : cm["counts"]) {
    for (const auto& v : row) total += v.get<std::uint64_t>();
  }
  EXPECT_EQ(total, 8u * 64u * 64u);
  EXPECT_EQ(Slurp(P("cm.csv")).rfind("gt\\pred,background,", 0), 0u);

  Result d = Call({"--quiet", "derive-merges", "--confmat", P("cm.json"),
                   "--taxonomy", P("fx/taxonomy.json"), "--exclude", "goblet",
                   "--out", P("policy.json")});
  ASSERT_EQ(d.code, 0) << d.err;
  const json policy = ReadJson(P("policy.json"));
  // The fixture perturbation biases red <-> white wine glasses.
  const auto& white = policy["allowed"]["white_wine_glass"];
  EXPECT_NE(std::find(white.begin(), white.end(), "red_wine_glass"), white.end());
  EXPECT_EQ(policy["allowed"]["goblet"], json::array({"goblet"}));

  ASSERT_EQ(Call({"--quiet", "evaluate", "--manifest", P("fx/manifest.json"),
                  "--out", P("plain.json")})
                .code,
            0);
  ASSERT_EQ(Call({"--quiet", "evaluate", "--manifest", P("fx/manifest.json"),
                  "--policy", P("policy.json"), "--highlight", "goblet",
                  "--out", P("merged.json")})
                .code,
            0);
  const json plain = ReadJson(P("plain.json"));
  const json merged = ReadJson(P("merged.json"));
  EXPECT_GE(merged["mIoU"].get<double>(), plain["mIoU"].get<double>());
  EXPECT_EQ(merged["highlight"]["class"], "goblet");
  EXPECT_TRUE(merged["unseen_IoU"].contains("goblet"));

  EXPECT_EQ(Call({"--quiet", "derive-merges", "--confmat", P("cm.json"),
                  "--taxonomy", P("fx/taxonomy.json"), "--exclude", "nope",
                  "--out", P("p2.json")})
                .code,
            1);
}

TEST_F(CliTest, RleRoundTrip) {
  std::string pgm = "P5\n3 2\n255\n";
  pgm += std::string("\x00\x05\x00\x01\x00\x00", 6);
  ASSERT_TRUE(WriteFile(P("m.pgm"), pgm).ok());
  ASSERT_EQ(Call({"--quiet", "rle", "encode", "--mask", P("m.pgm"), "--out",
                  P("m.json")})
                .code,
            0);
  const json rle = ReadJson(P("m.json"));
  EXPECT_EQ(rle["size"], json::array({2, 3}));
  // Column-major: (0,0)=0 (0,1)=1 (1,0)=5 (1,1)=0 (2,*)=0.
  EXPECT_EQ(rle["counts"], json::array({1, 2, 3}));
  ASSERT_EQ(Call({"--quiet", "rle", "decode", "--rle", P("m.json"), "--out",
                  P("back.pgm")})
                .code,
            0);
  EXPECT_EQ(Slurp(P("back.pgm")),
            std::string("P5\n3 2\n255\n") +
                std::string("\x00\x01\x00\x01\x00\x00", 6));
  ASSERT_TRUE(WriteFile(P("bad.json"), R"({"size":[2,3],"counts":[1,2]})").ok());
  EXPECT_EQ(Call({"rle", "decode", "--rle", P("bad.json"), "--out", P("x.pgm")})
                .code,
            1);
}

}  // namespace
}  // namespace glassseg::cli
