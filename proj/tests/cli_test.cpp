// Copyright 2026 The curaudit Authors
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

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "curaudit/log_io.hpp"
#include "curaudit/sim.hpp"
#include "testutil.hpp"

namespace curaudit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
};

std::string cli_bin() {
  const char* env = std::getenv("CURAUDIT_BIN");
  if (env != nullptr) return env;
  return "./tools/curaudit";
}

CliResult run_cli(const std::string& args) {
  std::string cmd = cli_bin() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  CliResult result;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, n);
  int rc = pclose(pipe);
  result.code = WEXITSTATUS(rc);
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("cli_" + std::string(::testing::UnitTest::GetInstance()
                                     ->current_test_info()
                                     ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write_config(const std::string& name, const json& patch) {
    json j = patch;
    std::ofstream out(path(name));
    out << j.dump(2);
  }

  fs::path dir_;
};

TEST_F(CliTest, SimulateOneHourGivesThirtySnapshots) {
  CliResult r = run_cli("simulate --duration 1h --sections trending --out " + path("log.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  ObservationLog log = read_log_file(path("log.jsonl"));
  EXPECT_EQ(log.snapshots.size(), 30u);
  EXPECT_NE(log.metadata.count("manifest"), 0u);
}

TEST_F(CliTest, MissingConfigExitsTwo) {
  CliResult r = run_cli("simulate --duration 1h --config " + path("absent.json") +
                        " --out " + path("log.jsonl"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, ProbeFreqRecoversFixedTwentyMinutes) {
  write_config("cfg.json",
               json{{"trending_update_process", {{"kind", "fixed"}, {"minutes", 20.0}}}});
  CliResult r = run_cli("probe freq --config " + path("cfg.json") +
                        " --duration 24h --out " + path("freq.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(slurp(path("freq.json")));
  EXPECT_NEAR(doc["update_frequency"]["mean"].get<double>(), 20.0, 2.0);
  EXPECT_TRUE(doc.contains("manifest"));
}

TEST_F(CliTest, ProbeFreqReplaysRecordedLog) {
  write_config("cfg.json",
               json{{"trending_update_process", {{"kind", "fixed"}, {"minutes", 20.0}}}});
  ASSERT_EQ(run_cli("simulate --config " + path("cfg.json") +
                    " --duration 6h --sections trending --out " + path("rec.jsonl"))
                .code,
            0);
  CliResult r = run_cli("probe freq --log " + path("rec.jsonl") +
                        " --duration 6h --out " + path("freq.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(slurp(path("freq.json")));
  EXPECT_NEAR(doc["update_frequency"]["mean"].get<double>(), 20.0, 2.0);
}

TEST_F(CliTest, ProbeLocalizationDefaultSimIsNegative) {
  CliResult r = run_cli("probe localization --out " + path("loc.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(slurp(path("loc.json")));
  EXPECT_FALSE(doc["localization"]["localized"].get<bool>());
  EXPECT_EQ(doc["localization"]["per_location"].size(), 50u);
  EXPECT_NE(r.out.find("localized: no"), std::string::npos);
}

TEST_F(CliTest, ProbeLocalizationInjectionDetected) {
  write_config("cfg.json",
               json{{"localization_mode", {{"kind", "inject"}, {"fraction", 0.2}}}});
  CliResult r = run_cli("probe localization --config " + path("cfg.json") +
                        " --stop-at-first --out " + path("loc.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(slurp(path("loc.json")));
  EXPECT_TRUE(doc["localization"]["localized"].get<bool>());
}

TEST_F(CliTest, ProbeLocalizationWithCustomLocationsFile) {
  std::ofstream locs(path("locs.json"));
  locs << json::array({{{"latitude", 30.2672}, {"longitude", -97.7431}, {"label", "Austin TX"}},
                       {{"latitude", 42.3601}, {"longitude", -71.0589}, {"label", "Boston MA"}}})
              .dump();
  locs.close();
  CliResult r = run_cli("probe localization --locations " + path("locs.json") + " --out " +
                        path("loc.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(slurp(path("loc.json")));
  EXPECT_EQ(doc["localization"]["per_location"].size(), 2u);
}

TEST_F(CliTest, ProbePersonalizationOnFixtureFiles) {
  testutil::OverlapFixture fx = testutil::overlap_fixture();
  write_log_file(path("control.jsonl"), fx.control);
  ObservationLog users;
  for (const Snapshot& s : fx.users) append_snapshot(users, s);
  write_log_file(path("users.jsonl"), users);
  CliResult r = run_cli("probe personalization --control " + path("control.jsonl") +
                        " --user-log " + path("users.jsonl") + " --out " + path("pers.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  json doc = json::parse(slurp(path("pers.json")));
  EXPECT_NEAR(doc["personalization"]["mean_overlap"].get<double>(), 0.97, 0.005);
  EXPECT_DOUBLE_EQ(doc["personalization"]["mean_overlap_with_lag"].get<double>(), 1.0);
}

TEST_F(CliTest, AnalyzeTrendingFixtureReportsPublishedShares) {
  write_log_file(path("fig.jsonl"),
                 testutil::fixture_log(testutil::trending_fixture_counts()));
  CliResult r = run_cli("analyze --log " + path("fig.jsonl") + " --out-dir " + path("out"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("74.8%"), std::string::npos);
  json doc = json::parse(slurp(path("out") + "/report.json"));
  EXPECT_NEAR(doc["report"]["sections"][0]["top10_share"].get<double>(), 0.748, 0.001);
}

TEST_F(CliTest, AnalyzeUniformLogReportsFullEquitability) {
  std::vector<std::pair<std::string, std::int64_t>> counts;
  for (int i = 0; i < 12; ++i) counts.emplace_back("even" + std::to_string(i) + ".example", 10);
  write_log_file(path("uniform.jsonl"), testutil::fixture_log(counts));
  CliResult r = run_cli("analyze --log " + path("uniform.jsonl") +
                        " --analyses diversity,report --out-dir " + path("out"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("1.000"), std::string::npos);
  json doc = json::parse(slurp(path("out") + "/diversity.json"));
  EXPECT_NEAR(doc["diversity"][0]["diversity"]["equitability_j"].get<double>(), 1.0, 1e-9);
}

TEST_F(CliTest, AnalyzeTwoLogReportIncludesHutcheson) {
  write_log_file(path("a.jsonl"), testutil::fixture_log(testutil::trending_fixture_counts()));
  write_log_file(path("b.jsonl"),
                 testutil::fixture_log(testutil::top_fixture_counts(), Section::kTop));
  CliResult r = run_cli("analyze --log " + path("a.jsonl") + " --log " + path("b.jsonl") +
                        " --out-dir " + path("out"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("hutcheson t ="), std::string::npos);
  json doc = json::parse(slurp(path("out") + "/report.json"));
  EXPECT_TRUE(doc["report"].contains("hutcheson"));
  EXPECT_TRUE(doc["report"]["hutcheson"].contains("t"));
  EXPECT_TRUE(doc["report"]["hutcheson"].contains("df"));
}

TEST_F(CliTest, AnalyzeEmptyLogExitsThree) {
  ObservationLog empty;
  write_log_file(path("empty.jsonl"), empty);
  CliResult r = run_cli("analyze --log " + path("empty.jsonl"));
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, IngestResolveWithFixtures) {
  ObservationLog log;
  StoryRef st;
  st.share_id = "https://s.example/a";
  append_snapshot(log, testutil::snapshot(60, {st}));
  write_log_file(path("raw.jsonl"), log);
  std::ofstream fx(path("fx.json"));
  fx << json{{"https://s.example/a",
              json::array({{{"status", 301}, {"location", "https://edition.cnn.com/x"}}})},
             {"https://edition.cnn.com/x",
              json::array({{{"status", 200}, {"title", "Resolved story"}}})}}
            .dump();
  fx.close();
  CliResult r = run_cli("ingest resolve --log " + path("raw.jsonl") + " --out " +
                        path("resolved.jsonl") + " --fixtures " + path("fx.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  ObservationLog resolved = read_log_file(path("resolved.jsonl"));
  EXPECT_EQ(resolved.snapshots[0].stories[0].source_domain, "cnn.com");
  EXPECT_EQ(resolved.snapshots[0].stories[0].headline, "Resolved story");
}

TEST_F(CliTest, IngestResolveOfflineWithoutFixturesExitsFour) {
  ObservationLog log;
  StoryRef st;
  st.share_id = "https://s.example/a";
  append_snapshot(log, testutil::snapshot(60, {st}));
  write_log_file(path("raw.jsonl"), log);
  CliResult r = run_cli("ingest resolve --log " + path("raw.jsonl") + " --out " +
                        path("resolved.jsonl"));
  EXPECT_EQ(r.code, 4);
}

TEST_F(CliTest, IngestImportStrictAndLenient) {
  std::ofstream csv(path("rows.csv"));
  csv << testutil::mistimed_csv_fixture();
  csv.close();
  CliResult strict = run_cli("ingest import --csv " + path("rows.csv") + " --out " +
                             path("log.jsonl"));
  EXPECT_EQ(strict.code, 3);
  CliResult lenient = run_cli("ingest import --csv " + path("rows.csv") + " --out " +
                              path("log.jsonl") + " --lenient");
  ASSERT_EQ(lenient.code, 0) << lenient.out;
  EXPECT_NE(lenient.out.find("imported 83 snapshots (6 row errors)"), std::string::npos);
  EXPECT_EQ(read_log_file(path("log.jsonl")).snapshots.size(), 83u);
}

TEST_F(CliTest, ExportedStoriesCsvReimportsThroughIngest) {
  ASSERT_EQ(run_cli("simulate --duration 1h --sections trending --out " + path("log.jsonl")).code,
            0);
  CliResult r = run_cli("analyze --log " + path("log.jsonl") +
                        " --analyses diversity --export-stories --out-dir " + path("out"));
  ASSERT_EQ(r.code, 0) << r.out;
  CliResult imported = run_cli("ingest import --csv " + path("out") +
                               "/stories_trending.csv --out " + path("back.jsonl"));
  ASSERT_EQ(imported.code, 0) << imported.out;
  ObservationLog original = read_log_file(path("log.jsonl"));
  ObservationLog back = read_log_file(path("back.jsonl"));
  ASSERT_EQ(back.snapshots.size(), original.snapshots.size());
  for (std::size_t i = 0; i < back.snapshots.size(); ++i) {
    EXPECT_EQ(back.snapshots[i].timestamp, original.snapshots[i].timestamp);
    EXPECT_EQ(story_keys(back.snapshots[i]), story_keys(original.snapshots[i]));
  }
}

TEST_F(CliTest, SimulateIsByteDeterministic) {
  std::string cmd = "simulate --duration 4h --seed 11 --out ";
  ASSERT_EQ(run_cli(cmd + path("a.jsonl")).code, 0);
  ASSERT_EQ(run_cli(cmd + path("b.jsonl")).code, 0);
  std::string a = slurp(path("a.jsonl"));
  std::string b = slurp(path("b.jsonl"));
  // Only the output path differs, and it is quoted inside the manifest.
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(a.substr(a.find("\"schema\"")), b.substr(b.find("\"schema\"")));
}

// A 62-day default-config run lands at the audited collection scale
// (about 3k distinct trending stories).
TEST_F(CliTest, SixtyTwoDayRunAtAuditedScale) {
  CliResult r = run_cli("simulate --duration 62d --poll-interval 10m --sections trending --out " +
                        path("long.jsonl"));
  ASSERT_EQ(r.code, 0) << r.out;
  ObservationLog log = read_log_file(path("long.jsonl"));
  std::set<std::string> distinct;
  for (const Snapshot& s : log.snapshots) {
    for (const StoryRef& st : s.stories) distinct.insert(story_key(st));
  }
  EXPECT_GT(distinct.size(), 2600u);
  EXPECT_LT(distinct.size(), 3600u);
}

}  // namespace
}  // namespace curaudit
