// Copyright 2026 The vgsynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "vgsynth/cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = vgsynth::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vgsynth_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

const std::string kFixtures = VGSYNTH_DATA_DIR "/fixtures/";

TEST_F(CliTest, GenerateIsDeterministic) {
  const std::vector<std::string> base = {"generate", "--relation", "closest", "--count", "10",
                                         "--seed", "7", "--out"};
  auto a = base, b = base;
  a.push_back(path("a.jsonl"));
  b.push_back(path("b.jsonl"));
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  const auto text = slurp(path("a.jsonl"));
  EXPECT_EQ(text, slurp(path("b.jsonl")));
  EXPECT_EQ(line_count(text), 10u);
  EXPECT_NE(text.find("\"scene_id\":\"closest_000007\""), std::string::npos);
  EXPECT_NE(text.find("\"scene_id\":\"closest_000016\""), std::string::npos);

  const auto manifest = nlohmann::json::parse(slurp(path("a.jsonl.manifest.json")));
  EXPECT_EQ(manifest["command"], "generate");
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["config"]["count"], 10);
  EXPECT_EQ(manifest["outputs"][0], path("a.jsonl"));
  EXPECT_TRUE(manifest.contains("version"));
  EXPECT_TRUE(manifest.contains("elapsed_seconds"));
}

TEST_F(CliTest, GenerateToStdoutMatchesFile) {
  ASSERT_EQ(run({"generate", "--relation", "left", "--count", "3", "--out", path("f.jsonl")}).code,
            0);
  const auto r = run({"generate", "--relation", "left", "--count", "3", "--out", "-"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(path("f.jsonl")));
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  std::ofstream(path("run.ini")) << "[generate]\ncount=4\nmin-objects=60\nrelation=largest\n";
  ASSERT_EQ(run({"--config", path("run.ini"), "generate", "--out", path("c.jsonl")}).code, 0);
  EXPECT_EQ(line_count(slurp(path("c.jsonl"))), 4u);
  const auto manifest = nlohmann::json::parse(slurp(path("c.jsonl.manifest.json")));
  EXPECT_EQ(manifest["config"]["min_objects"], 60);
  EXPECT_EQ(manifest["config"]["relation"], "largest");

  ASSERT_EQ(run({"--config", path("run.ini"), "generate", "--count", "2", "--out",
                 path("d.jsonl")})
                .code,
            0);
  EXPECT_EQ(line_count(slurp(path("d.jsonl"))), 2u);
}

TEST_F(CliTest, FullPipeline) {
  ASSERT_EQ(run({"generate", "--count", "20", "--seed", "100", "--out", path("s.jsonl")}).code, 0);
  const auto v = run({"validate", "--in", path("s.jsonl")});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("140/140 scenes valid"), std::string::npos);

  const auto p = run({"prompt", "--in", path("s.jsonl"), "--out", path("p.jsonl")});
  ASSERT_EQ(p.code, 0);
  EXPECT_EQ(line_count(slurp(path("p.jsonl"))), 140u);

  const auto c = run({"collect", "--in", path("s.jsonl"), "--out", path("v.jsonl"),
                      "--mock-wrong-rate", "0.1", "--seed", "3"});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto stats = nlohmann::json::parse(slurp(path("v.jsonl.stats.json")));
  EXPECT_EQ(stats["attempted"], 140);
  EXPECT_EQ(stats["kept"].get<int>() + stats["dropped_wrong"].get<int>() +
                stats["dropped_malformed"].get<int>(),
            140);

  ASSERT_EQ(run({"emit", "--in", path("v.jsonl"), "--out", path("t.jsonl")}).code, 0);
  EXPECT_EQ(line_count(slurp(path("t.jsonl"))), stats["kept"].get<std::size_t>());

  const auto st = run({"stats", "--in", path("t.jsonl"), "--out", path("counts.json")});
  ASSERT_EQ(st.code, 0) << st.err;
  EXPECT_EQ(st.out.substr(0, st.out.find('\n')),
            "| Relationship | Closest | Farthest | Next to | Left | Right | Largest | Smallest |");
  const auto counts = nlohmann::json::parse(slurp(path("counts.json")));
  for (const auto& [rel, n] : stats["per_relation_kept"].items()) {
    EXPECT_EQ(counts[rel], n) << rel;
  }
  EXPECT_EQ(run({"stats", "--in", path("v.jsonl")}).out, st.out);
}

TEST_F(CliTest, ScoreBoxFixture) {
  const auto r = run({"score", "--gt", kFixtures + "box_gt.jsonl", "--pred",
                      kFixtures + "box_pred.jsonl", "--out", path("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Acc@0.25 = 0.667"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Acc@0.5 = 0.333"), std::string::npos) << r.out;
  const auto again = run({"score", "--gt", kFixtures + "box_gt.jsonl", "--pred",
                          kFixtures + "box_pred.jsonl", "--out", path("report2.json")});
  EXPECT_EQ(slurp(path("report.json")), slurp(path("report2.json")));
  EXPECT_EQ(r.out, again.out);
}

TEST_F(CliTest, InferThenScoreIds) {
  const auto i = run({"infer", "--mock", "--proposals", kFixtures + "proposals.jsonl",
                      "--queries", kFixtures + "id_gt.jsonl", "--out", path("pred.jsonl")});
  ASSERT_EQ(i.code, 0) << i.err;
  EXPECT_EQ(line_count(slurp(path("pred.jsonl"))), 4u);
  const auto s = run({"score", "--protocol", "id", "--gt", kFixtures + "id_gt.jsonl", "--pred",
                      path("pred.jsonl")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(s.out.find("Overall: Accuracy = "), std::string::npos);
  const auto fixed = run({"score", "--protocol", "id", "--gt", kFixtures + "id_gt.jsonl",
                          "--pred", kFixtures + "id_pred.jsonl"});
  EXPECT_NE(fixed.out.find("Overall: Accuracy = 0.750"), std::string::npos) << fixed.out;
}

TEST_F(CliTest, UsageErrors) {
  const auto unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_NE(unknown.err.find("generate"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"generate"}).code, 2);
  EXPECT_EQ(run({"generate", "--relation", "above", "--out", path("x")}).code, 2);
  EXPECT_EQ(run({"score", "--gt", "a", "--pred", "b", "--protocol", "f1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, RuntimeErrorsAreSingleLine) {
  const auto r = run({"validate", "--in", path("missing.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("error: IoError: ", 0), 0u) << r.err;
  EXPECT_EQ(line_count(r.err), 1u);

  const auto tiny = run({"generate", "--count", "1", "--room-width", "0.5", "--room-length",
                         "0.5", "--out", path("t.jsonl")});
  EXPECT_EQ(tiny.code, 1);
  EXPECT_EQ(tiny.err.rfind("error: PlacementExhausted: ", 0), 0u) << tiny.err;

  ::unsetenv("VGSYNTH_CLI_UNSET_KEY");
  ASSERT_EQ(run({"generate", "--count", "1", "--out", path("g.jsonl")}).code, 0);
  const auto auth = run({"collect", "--in", path("g.jsonl"), "--out", path("o.jsonl"),
                         "--api-key-env", "VGSYNTH_CLI_UNSET_KEY"});
  EXPECT_EQ(auth.code, 1);
  EXPECT_EQ(auth.err.rfind("error: AuthError: ", 0), 0u) << auth.err;
}

TEST_F(CliTest, ValidateReportsViolations) {
  ASSERT_EQ(run({"generate", "--relation", "closest", "--count", "2", "--out", path("s.jsonl")})
                .code,
            0);
  auto lines = slurp(path("s.jsonl"));
  auto scene = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
  scene["objects"][1]["center"] = scene["objects"][0]["center"];
  scene["objects"][1]["dims"] = scene["objects"][0]["dims"];
  std::ofstream(path("bad.jsonl")) << scene.dump() << "\n" << lines.substr(lines.find('\n') + 1);
  const auto r = run({"validate", "--in", path("bad.jsonl"), "--out", path("violations.jsonl")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FootprintOverlap(0, 1)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1/2 scenes valid"), std::string::npos);
  EXPECT_EQ(line_count(slurp(path("violations.jsonl"))), 1u);
}

}  // namespace
