// Copyright 2026 The rirsde Authors
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

#include "cli/cli.h"

#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rirsde/io.h"
#include "rirsde/synth.h"
#include "support/fixtures.h"

namespace rirsde {
namespace {

using nlohmann::json;
using testing::TempDir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome RunCli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

json ReadJson(const std::filesystem::path& p) { return json::parse(io::ReadTextFile(p)); }

std::string S(const std::filesystem::path& p) { return p.string(); }

TEST(Cli, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, cli::kExitUsage);
  TempDir dir("cli_usage");
  const Outcome zero = RunCli({"generate", "--n", "0", "-o", S(dir.path() / "g")});
  EXPECT_EQ(zero.code, cli::kExitUsage);
  EXPECT_NE(zero.err.find("--n"), std::string::npos) << zero.err;
  EXPECT_EQ(RunCli({"generate", "--n", "2", "--rooms", "5-3", "-o", S(dir.path())}).code,
            cli::kExitUsage);
  EXPECT_EQ(RunCli({"generate", "--n", "2", "--rooms", "21", "-o", S(dir.path())}).code,
            cli::kExitMissingData);
}

TEST(Cli, UnwritableOutputDirectory) {
  TempDir dir("cli_unwritable");
  io::WriteTextFile(dir.path() / "file", "x");
  const Outcome o =
      RunCli({"generate", "--rooms", "1", "--n", "1", "-o", S(dir.path() / "file" / "sub")});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_FALSE(o.err.empty());
}

TEST(Cli, HelpShowsFilterDefaults) {
  const Outcome o = RunCli({"filter", "--help"});
  EXPECT_EQ(o.code, cli::kExitOk);
  for (const char* needle : {"0.8", "7.1", "1.8695", "20%"}) {
    EXPECT_NE(o.out.find(needle), std::string::npos) << needle << "\n" << o.out;
  }
}

TEST(Cli, GenerateIsCompleteAndDeterministic) {
  TempDir dir("cli_generate");
  const auto gen = [&](const std::string& name) {
    return RunCli({"generate", "--rooms", "1-2,7", "--n", "3", "--seed", "7", "-o",
                   S(dir.path() / name), "--threads", "2"});
  };
  ASSERT_EQ(gen("a").code, cli::kExitOk);
  ASSERT_EQ(gen("b").code, cli::kExitOk);
  const io::CorpusManifest m = io::ReadManifest(dir.path() / "a");
  EXPECT_EQ(m.count, 9u);
  EXPECT_EQ(m.rooms, (std::vector<RoomId>{1, 2, 7}));
  EXPECT_EQ(m.seed, 7u);
  std::size_t wavs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path() / "a" / io::kRirSubdir)) {
    wavs += e.path().extension() == ".wav";
  }
  EXPECT_EQ(wavs, 9u);
  EXPECT_EQ(io::ReadTextFile(dir.path() / "a" / io::kMetadataFile),
            io::ReadTextFile(dir.path() / "b" / io::kMetadataFile));
  const auto meta = io::ReadMetadata(dir.path() / "a");
  EXPECT_EQ(io::ReadTextFile(io::RecordingPath(dir.path() / "a", meta[4].rir_id)),
            io::ReadTextFile(io::RecordingPath(dir.path() / "b", meta[4].rir_id)));
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "a" / ".rirsde.lock"));
}

TEST(Cli, GenerateSeedChangesCorpus) {
  TempDir dir("cli_seed");
  ASSERT_EQ(RunCli({"generate", "--rooms", "3", "--n", "2", "--seed", "1", "-o",
                    S(dir.path() / "a")}).code, 0);
  ASSERT_EQ(RunCli({"generate", "--rooms", "3", "--n", "2", "--seed", "2", "-o",
                    S(dir.path() / "b")}).code, 0);
  EXPECT_NE(io::ReadTextFile(dir.path() / "a" / io::kMetadataFile),
            io::ReadTextFile(dir.path() / "b" / io::kMetadataFile));
}

TEST(Cli, GenerateFromRoomsFile) {
  TempDir dir("cli_roomfile");
  io::WriteTextFile(dir.path() / "rooms.json",
                    R"({"rooms":[{"room_id":42,"dims":[6,5,3],"absorption":0.25,"seed":3}]})");
  ASSERT_EQ(RunCli({"generate", "--rooms", S(dir.path() / "rooms.json"), "--n", "2", "-o",
                    S(dir.path() / "c")}).code, 0);
  EXPECT_EQ(io::ReadManifest(dir.path() / "c").rooms, std::vector<RoomId>{42});
}

TEST(Cli, AnalyzeRowsAndErrors) {
  TempDir dir("cli_analyze");
  const auto corpus = dir.path() / "c";
  ASSERT_EQ(RunCli({"generate", "--rooms", "4", "--n", "4", "-o", S(corpus)}).code, 0);
  ASSERT_EQ(RunCli({"analyze", "-i", S(corpus)}).code, cli::kExitOk);
  const auto rows = io::ReadLines(corpus / "metrics.jsonl");
  ASSERT_EQ(rows.size(), 4u);
  const json row = json::parse(rows[0]);
  for (const char* key : {"rir_id", "t60_s", "drr_db", "direct_distance_m", "echo_density"}) {
    EXPECT_TRUE(row.contains(key)) << key;
  }
  const std::string first = io::ReadTextFile(corpus / "metrics.jsonl");
  ASSERT_EQ(RunCli({"analyze", "-i", S(corpus)}).code, cli::kExitOk);
  EXPECT_EQ(io::ReadTextFile(corpus / "metrics.jsonl"), first);

  const auto meta = io::ReadMetadata(corpus);
  std::ofstream(io::RecordingPath(corpus, meta[1].rir_id), std::ios::trunc) << "bad";
  ASSERT_EQ(RunCli({"analyze", "-i", S(corpus), "-o", S(dir.path() / "m.jsonl")}).code, 0);
  const auto with_error = io::ReadLines(dir.path() / "m.jsonl");
  EXPECT_TRUE(json::parse(with_error[1]).contains("error"));
  EXPECT_FALSE(json::parse(with_error[0]).contains("error"));

  for (const auto& m : meta) {
    std::ofstream(io::RecordingPath(corpus, m.rir_id), std::ios::trunc) << "bad";
  }
  EXPECT_EQ(RunCli({"analyze", "-i", S(corpus), "-o", S(dir.path() / "m2.jsonl")}).code,
            cli::kExitMissingData);
}

TEST(Cli, AnalyzeFlagsFreeFieldDecay) {
  TempDir dir("cli_freefield");
  const ShoeboxRoom room{{30.0, 30.0, 30.0}, 0.5, 1, 1};
  SynthesisConfig direct_only;
  direct_only.max_image_order = 0;
  RIRecording rir = NormalizeRir(
      ImageSourceRir(room, {{5.0, 15.0, 15.0}, {8.43, 15.0, 15.0}}, direct_only));
  rir.rir_id = "free";
  testing::WriteFixtureCorpus(dir.path(), {rir});
  ASSERT_EQ(RunCli({"analyze", "-i", S(dir.path())}).code, 0);
  const json row = json::parse(io::ReadLines(dir.path() / "metrics.jsonl")[0]);
  EXPECT_TRUE(row["t60_s"].is_null());
  EXPECT_EQ(row["t60_error"], "insufficient_decay");
  EXPECT_EQ(row["drr_at_ceiling"], true);
}

class FixtureCli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto fx = testing::MakeFilterFixture();
    testing::WriteFixtureCorpus(dir_.path() / "enroll", fx.enrollment);
    testing::WriteFixtureCorpus(dir_.path() / "corpus", fx.corpus);
  }
  std::string P(const char* name) const { return S(dir_.path() / name); }
  TempDir dir_{"cli_fixture"};
};

TEST_F(FixtureCli, FilterYieldAndArtifacts) {
  const Outcome o = RunCli({"filter", "-i", P("corpus"), "-e", P("enroll"), "-o", P("f")});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json summary = ReadJson(dir_.path() / "f" / "summary.json");
  EXPECT_EQ(summary["schema_version"], 1);
  EXPECT_DOUBLE_EQ(summary["yield"].get<double>(), 0.25);
  EXPECT_EQ(summary["input_count"], 8);
  for (const char* reason : {"T60_OUT_OF_BAND", "T60_ABOVE_CUTOFF", "DISTANCE_TOO_CLOSE",
                             "DISTANCE_TOO_FAR", "EDC_SHAPE_MISMATCH",
                             "EARLY_REFLECTION_MISMATCH"}) {
    EXPECT_EQ(summary["reason_histogram"][reason], 1) << reason;
  }
  EXPECT_EQ(summary["accepted_distance_histogram"]["bin_m"], 0.5);
  EXPECT_EQ(io::ReadLines(dir_.path() / "f" / "decisions.jsonl").size(), 8u);
  EXPECT_EQ(io::ReadLines(dir_.path() / "f" / "accepted.jsonl").size(), 2u);
  EXPECT_EQ(io::ReadLines(dir_.path() / "f" / "rejected.jsonl").size(), 6u);
  EXPECT_EQ(io::ProfilesFromJson(io::ReadTextFile(dir_.path() / "f" / "profiles.json")).size(),
            3u);
}

TEST_F(FixtureCli, VacuousCriteriaAcceptEverything) {
  const Outcome o = RunCli({"filter", "-i", P("corpus"), "-e", P("enroll"), "-o", P("f"),
                            "--dist-min", "0", "--dist-max", "100", "--t60-cutoff", "1e9",
                            "--edc-dev", "1e9", "--echo-dev", "1e9", "--t60-tol", "1e9"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_DOUBLE_EQ(ReadJson(dir_.path() / "f" / "summary.json")["yield"].get<double>(), 1.0);
}

TEST_F(FixtureCli, InvalidCriteriaAreUsageErrors) {
  EXPECT_EQ(RunCli({"filter", "-i", P("corpus"), "-e", P("enroll"), "-o", P("f"),
                    "--dist-min", "9"}).code, cli::kExitUsage);
}

TEST_F(FixtureCli, MissingProfileRoomIsNamed) {
  auto fx = testing::MakeFilterFixture();
  std::vector<RIRecording> partial;
  for (const RIRecording& r : fx.enrollment) {
    if (r.room_id != 3) partial.push_back(r);
  }
  testing::WriteFixtureCorpus(dir_.path() / "partial", partial);
  const Outcome o = RunCli({"filter", "-i", P("corpus"), "-e", P("partial"), "-o", P("f")});
  EXPECT_EQ(o.code, cli::kExitMissingData);
  EXPECT_NE(o.err.find("3"), std::string::npos) << o.err;
}

TEST_F(FixtureCli, MissingInputsExitThree) {
  EXPECT_EQ(RunCli({"filter", "-i", P("nowhere"), "-e", P("enroll"), "-o", P("f")}).code,
            cli::kExitMissingData);
  EXPECT_EQ(RunCli({"analyze", "-i", P("nowhere")}).code, cli::kExitMissingData);
}

TEST_F(FixtureCli, LockedOutputDirectoryIsRefused) {
  std::filesystem::create_directories(dir_.path() / "f");
  io::WriteTextFile(dir_.path() / "f" / ".rirsde.lock", "1\n");
  const Outcome o = RunCli({"filter", "-i", P("corpus"), "-e", P("enroll"), "-o", P("f")});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_NE(o.err.find("lock"), std::string::npos) << o.err;
  EXPECT_FALSE(std::filesystem::exists(dir_.path() / "f" / "summary.json"));
}

// Recordings whose direct path sits on an exact sample, so distance is an
// exact linear function of direct_delay_ms.
class OracleModelCli : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<RIRecording> rirs;
    std::string accepted;
    int k = 0;
    for (int idx : {50, 150, 300, 500, 700, 900}) {
      const double d = idx * kSpeedOfSound / kSampleRate;
      RIRecording r = testing::MakeCraftedRir({.id = "o" + std::to_string(k++),
                                               .distance_m = d,
                                               .seed = static_cast<std::uint64_t>(idx)});
      rirs.push_back(r);
      io::DecisionRecord rec;
      rec.rir_id = r.rir_id;
      rec.accepted = true;
      rec.distance_m = d;
      accepted += io::DecisionToJsonLine(rec) + "\n";
    }
    testing::WriteFixtureCorpus(dir_.path() / "corpus", rirs);
    std::filesystem::create_directories(dir_.path() / "dec");
    io::WriteTextFile(dir_.path() / "dec" / "accepted.jsonl", accepted);

    EstimatorModel m = EstimatorModel::Zero();
    m.weights[kFeatDirectDelayMs] = kSpeedOfSound / 1000.0;
    io::WriteTextFile(dir_.path() / "model.json", io::ModelToJson(m));
  }
  std::string P(const char* name) const { return S(dir_.path() / name); }
  TempDir dir_{"cli_oracle"};
};

TEST_F(OracleModelCli, PerfectModelReportsZeroError) {
  const Outcome e = RunCli({"eval", "-m", P("model.json"), "-c", P("corpus"), "-d", P("dec"),
                            "-o", P("eval")});
  ASSERT_EQ(e.code, 0) << e.err;
  const json report = ReadJson(dir_.path() / "eval" / "eval.json");
  EXPECT_LT(report["mae_m"].get<double>(), 1e-9);
  EXPECT_EQ(report["n_samples"], 6);
  ASSERT_EQ(report["per_range"].size(), 4u);
  EXPECT_EQ(io::ReadLines(dir_.path() / "eval" / "eval_samples.csv").size(), 7u);

  const Outcome r = RunCli({"report", "-e", P("eval"), "-o", P("rep"), "--svg"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string md = io::ReadTextFile(dir_.path() / "rep" / "report.md");
  EXPECT_NE(md.find("| 6 | 0.000 |"), std::string::npos) << md;
  for (const char* bucket : {"[0, 1)", "[1, 3)", "[3, 5)", "[5, inf)"}) {
    EXPECT_NE(md.find(bucket), std::string::npos) << bucket;
  }
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "rep" / "scatter.svg"));
  const auto truth = io::ReadLines(dir_.path() / "rep" / "truth_histogram.csv");
  EXPECT_EQ(truth[0], "bin_lo_m,bin_hi_m,count");
}

TEST_F(OracleModelCli, SchemaMismatchExitsFour) {
  json m = ReadJson(dir_.path() / "model.json");
  m["feature_schema_version"] = kFeatureSchemaVersion + 1;
  io::WriteTextFile(dir_.path() / "future.json", m.dump());
  const Outcome o = RunCli({"eval", "-m", P("future.json"), "-c", P("corpus"), "-d", P("dec"),
                            "-o", P("eval")});
  EXPECT_EQ(o.code, cli::kExitSchemaMismatch) << o.err;

  m = ReadJson(dir_.path() / "model.json");
  m["schema_version"] = 99;
  io::WriteTextFile(dir_.path() / "v99.json", m.dump());
  EXPECT_EQ(RunCli({"eval", "-m", P("v99.json"), "-c", P("corpus"), "-d", P("dec"), "-o",
                    P("eval")}).code,
            cli::kExitSchemaMismatch);
}

TEST_F(OracleModelCli, EvalArgumentErrors) {
  EXPECT_EQ(RunCli({"eval", "-m", P("missing.json"), "-c", P("corpus"), "-d", P("dec"), "-o",
                    P("eval")}).code,
            cli::kExitMissingData);
  EXPECT_EQ(RunCli({"eval", "-c", P("corpus"), "-d", P("dec"), "-o", P("eval")}).code,
            cli::kExitUsage);
  EXPECT_EQ(RunCli({"report", "-e", P("nothing"), "-o", P("rep")}).code, cli::kExitMissingData);
}

TEST(CliPipeline, TrainEvalReport) {
  TempDir dir("cli_pipeline");
  const auto p = [&](const char* n) { return S(dir.path() / n); };
  ASSERT_EQ(RunCli({"generate", "--rooms", "1-2", "--n", "6", "--seed", "3", "-o", p("enroll")})
                .code, 0);
  ASSERT_EQ(RunCli({"generate", "--rooms", "1-2", "--n", "40", "--seed", "4", "-o", p("c")})
                .code, 0);
  ASSERT_EQ(RunCli({"filter", "-i", p("c"), "-e", p("enroll"), "-o", p("f")}).code, 0);
  const Outcome t = RunCli({"train", "-c", p("c"), "-d", p("f"), "-o", p("m"), "--seed", "5"});
  ASSERT_EQ(t.code, 0) << t.err;

  const json split = ReadJson(dir.path() / "m" / "split.json");
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const char* part : {"train_ids", "val_ids", "test_ids"}) {
    for (const auto& id : split[part]) seen.insert(id.get<std::string>());
    total += split[part].size();
  }
  EXPECT_EQ(seen.size(), total);
  EXPECT_EQ(total, io::ReadLines(dir.path() / "f" / "accepted.jsonl").size());
  EXPECT_EQ(ReadJson(dir.path() / "m" / "grid.json")["cells"].size(), 12u);
  EXPECT_NO_THROW(io::ModelFromJson(io::ReadTextFile(dir.path() / "m" / "model.json")));

  ASSERT_EQ(RunCli({"eval", "-m", p("m/model.json"), "-c", p("c"), "--split",
                    p("m/split.json"), "-o", p("e")}).code, 0);
  const json report = ReadJson(dir.path() / "e" / "eval.json");
  EXPECT_EQ(report["n_samples"].get<std::size_t>(), split["test_ids"].size());
  ASSERT_EQ(RunCli({"eval", "--zero-model", "-c", p("c"), "--split", p("m/split.json"), "-o",
                    p("e0")}).code, 0);
  EXPECT_LT(report["mae_m"].get<double>(),
            ReadJson(dir.path() / "e0" / "eval.json")["mae_m"].get<double>());
  ASSERT_EQ(RunCli({"report", "-e", p("e"), "-o", p("r")}).code, 0);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "r" / "scatter.svg"));

  const Outcome sub = RunCli({"train", "-c", p("c"), "-d", p("f"), "-o", p("m1"), "--rooms",
                              "1", "--seed", "5"});
  ASSERT_EQ(sub.code, 0) << sub.err;
  for (const auto& id : ReadJson(dir.path() / "m1" / "split.json")["train_ids"]) {
    EXPECT_EQ(id.get<std::string>().rfind("r01_", 0), 0u);
  }
  EXPECT_EQ(RunCli({"train", "-c", p("c"), "-d", p("f"), "-o", p("m2"), "--lr-grid", "0.1"})
                .code, cli::kExitUsage);
}

}  // namespace
}  // namespace rirsde
