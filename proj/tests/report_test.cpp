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

#include "curaudit/report.hpp"

#include <gtest/gtest.h>

#include "curaudit/curator.hpp"
#include "curaudit/probes.hpp"
#include "testutil.hpp"

namespace curaudit {
namespace {

TEST(ReportTest, FixtureLogsSideBySideWithHutcheson) {
  std::vector<ObservationLog> logs = {
      testutil::fixture_log(testutil::trending_fixture_counts()),
      testutil::fixture_log(testutil::top_fixture_counts(), Section::kTop),
  };
  AuditReport report = build_audit_report(logs);
  ASSERT_EQ(report.sections.size(), 2u);
  EXPECT_EQ(report.sections[0].total_collected, 3144);
  EXPECT_EQ(report.sections[0].total_analyzed, 3144);
  EXPECT_EQ(report.sections[0].unique_sources, 83);
  EXPECT_NEAR(report.sections[0].top10_share, 0.748, 0.001);
  EXPECT_EQ(report.sections[1].total_collected, 1268);
  EXPECT_NEAR(report.sections[1].top1_share, 0.098, 0.001);
  ASSERT_TRUE(report.hutcheson.has_value());
  EXPECT_NE(report.hutcheson->t, 0.0);

  std::string text = render_audit_report(report);
  EXPECT_NE(text.find("top 10 sources share"), std::string::npos);
  EXPECT_NE(text.find("74.8%"), std::string::npos);
  EXPECT_NE(text.find("hutcheson t ="), std::string::npos);
}

TEST(ReportTest, UnresolvedStoriesSplitCollectedFromAnalyzed) {
  ObservationLog log;
  StoryRef resolved = testutil::story("a", Section::kTrending, "cnn.com");
  StoryRef unresolved;  // collected but not analyzable
  unresolved.share_id = "b";
  unresolved.headline = "h";
  StoryRef resolved2 = testutil::story("c", Section::kTrending, "foxnews.com");
  append_snapshot(log, testutil::snapshot(0, {resolved, unresolved, resolved2}));
  append_snapshot(log, testutil::snapshot(2 * kDay, {resolved}));
  SectionSummary s = summarize_log(log, "x");
  EXPECT_EQ(s.total_collected, 3);
  EXPECT_EQ(s.total_analyzed, 2);
  EXPECT_EQ(s.unique_sources, 2);
}

TEST(ReportTest, ChurnOmittedForShortSpans) {
  ObservationLog log;
  append_snapshot(log, testutil::simple_snapshot(0, 3, "a"));
  append_snapshot(log, testutil::simple_snapshot(kHour, 3, "b"));
  SectionSummary s = summarize_log(log, "short");
  EXPECT_FALSE(s.churn_available);
  std::string text = render_audit_report(AuditReport{{s}, std::nullopt});
  EXPECT_NE(text.find("n/a"), std::string::npos);
}

TEST(ReportTest, JsonShapeStable) {
  ObservationLog log = testutil::fixture_log({{"cnn.com", 6}, {"foxnews.com", 6}});
  AuditReport report = build_audit_report(std::vector<ObservationLog>{log});
  nlohmann::json j = report;
  ASSERT_TRUE(j.contains("sections"));
  EXPECT_FALSE(j.contains("hutcheson"));  // single log
  for (const char* key :
       {"total_collected", "total_analyzed", "shannon_h", "equitability_j",
        "top1_share", "top3_share", "top10_share", "mean_share", "median_share"}) {
    EXPECT_TRUE(j["sections"][0].contains(key)) << key;
  }
}

TEST(ReportTest, RejectsEmptyAndOversizedInput) {
  EXPECT_THROW(build_audit_report(std::vector<ObservationLog>{}), std::invalid_argument);
  ObservationLog log = testutil::fixture_log({{"cnn.com", 2}});
  std::vector<ObservationLog> three = {log, log, log};
  EXPECT_THROW(build_audit_report(three), std::invalid_argument);
}

TEST(RenderTableTest, AlignsColumns) {
  std::string out = render_table({{"name", "value"}, {"alpha", "1"}, {"b", "22"}});
  EXPECT_NE(out.find("name   value"), std::string::npos);
  EXPECT_NE(out.find("alpha  1"), std::string::npos);
}

// End-to-end: a simulated two-day collection flows into a report at the
// audited scale.
TEST(ReportTest, SimulatedCollectionLandsAtConfiguredScale) {
  CuratorConfig cfg;  // defaults: exponential 20 min, 30% reorders
  SimCurator curator(cfg);
  CollectionOptions opt;
  opt.duration = 2 * kDay;
  opt.poll_interval = 4 * kMinute;
  opt.sections = {Section::kTrending, Section::kTop};
  ObservationLog log = run_extended_collection(curator, opt);
  AuditReport report = build_audit_report(std::vector<ObservationLog>{
      filter_section(log, Section::kTrending), filter_section(log, Section::kTop)});
  const SectionSummary& trending = report.sections[0];
  const SectionSummary& top = report.sections[1];
  EXPECT_EQ(trending.slots, 6);
  EXPECT_EQ(top.slots, 5);
  // Arrival rate ~ 0.7 * 72/day; wide sanity bounds for a two-day window.
  EXPECT_GT(trending.stories_per_day, 35.0);
  EXPECT_LT(trending.stories_per_day, 70.0);
  EXPECT_GT(top.stories_per_day, 15.0);
  EXPECT_LT(top.stories_per_day, 30.0);
  ASSERT_TRUE(report.hutcheson.has_value());
}

}  // namespace
}  // namespace curaudit
