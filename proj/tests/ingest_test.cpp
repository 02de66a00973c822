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

#include "curaudit/ingest.hpp"

#include <gtest/gtest.h>

#include "testutil.hpp"

namespace curaudit {
namespace {

using nlohmann::json;

FixtureFetcher chain_fixture() {
  return FixtureFetcher::from_json(json{
      {"https://s.example/a", {{{"status", 301}, {"location", "https://s.example/b"}}}},
      {"https://s.example/b", {{{"status", 302}, {"location", "https://edition.cnn.com/c"}}}},
      {"https://edition.cnn.com/c", {{{"status", 200}, {"title", "  Hello \n  World "}}}},
  });
}

TEST(ResolveUrlTest, FollowsChainAndExtractsTitle) {
  FixtureFetcher fetcher = chain_fixture();
  PublicSuffixList psl;
  ResolutionRecord rec = resolve_url("https://s.example/a", 10, fetcher, psl);
  EXPECT_EQ(rec.status, ResolutionStatus::kResolved);
  EXPECT_EQ(rec.final_url, "https://edition.cnn.com/c");
  EXPECT_EQ(rec.source_domain, "cnn.com");
  EXPECT_EQ(rec.title, "Hello World");
  EXPECT_EQ(rec.redirect_chain,
            (std::vector<std::string>{"https://s.example/a", "https://s.example/b",
                                      "https://edition.cnn.com/c"}));
}

TEST(ResolveUrlTest, DetectsLoop) {
  FixtureFetcher fetcher = FixtureFetcher::from_json(json{
      {"https://s.example/a", {{{"status", 301}, {"location", "https://s.example/b"}}}},
      {"https://s.example/b", {{{"status", 301}, {"location", "https://s.example/a"}}}},
  });
  PublicSuffixList psl;
  ResolutionRecord rec = resolve_url("https://s.example/a", 10, fetcher, psl);
  EXPECT_EQ(rec.status, ResolutionStatus::kLoop);
}

TEST(ResolveUrlTest, TwelveHopChainExceedsTenRedirectLimit) {
  json fixture = json::object();
  for (int i = 0; i < 12; ++i) {
    fixture["https://hop.example/" + std::to_string(i)] = json::array(
        {{{"status", 301}, {"location", "https://hop.example/" + std::to_string(i + 1)}}});
  }
  fixture["https://hop.example/12"] = json::array({{{"status", 200}, {"title", "End"}}});
  FixtureFetcher fetcher = FixtureFetcher::from_json(fixture);
  PublicSuffixList psl;
  ResolutionRecord rec = resolve_url("https://hop.example/0", 10, fetcher, psl);
  EXPECT_EQ(rec.status, ResolutionStatus::kTooManyRedirects);
  EXPECT_LE(rec.redirect_chain.size(), 11u);  // max_redirects + 1

  // Twelve redirects resolve fine with a higher cap.
  FixtureFetcher fetcher2 = FixtureFetcher::from_json(fixture);
  ResolutionRecord ok = resolve_url("https://hop.example/0", 12, fetcher2, psl);
  EXPECT_EQ(ok.status, ResolutionStatus::kResolved);
}

TEST(ResolveUrlTest, HttpErrorAndTimeout) {
  FixtureFetcher fetcher = FixtureFetcher::from_json(json{
      {"https://s.example/404", {{{"status", 404}}}},
  });
  PublicSuffixList psl;
  ResolutionRecord notfound = resolve_url("https://s.example/404", 10, fetcher, psl);
  EXPECT_EQ(notfound.status, ResolutionStatus::kHttpError);
  EXPECT_EQ(notfound.http_status, 404);
  ResolutionRecord dead = resolve_url("https://unknown.example/x", 10, fetcher, psl);
  EXPECT_EQ(dead.status, ResolutionStatus::kTimeout);
}

TEST(ResolveUrlTest, RelativeRedirectTargets) {
  FixtureFetcher fetcher = FixtureFetcher::from_json(json{
      {"https://s.example/a", {{{"status", 301}, {"location", "/landing"}}}},
      {"https://s.example/landing",
       {{{"status", 302}, {"location", "//cdn.example/final"}}}},
      {"https://cdn.example/final", {{{"status", 200}, {"title", "Landed"}}}},
  });
  PublicSuffixList psl;
  ResolutionRecord rec = resolve_url("https://s.example/a", 10, fetcher, psl);
  EXPECT_EQ(rec.status, ResolutionStatus::kResolved);
  EXPECT_EQ(rec.final_url, "https://cdn.example/final");
  EXPECT_EQ(rec.source_domain, "cdn.example");
}

TEST(ResolveUrlTest, OrderedResponsesConsumeSequentially) {
  FixtureFetcher fetcher = FixtureFetcher::from_json(json{
      {"https://s.example/flaky",
       {{{"status", 0}}, {{"status", 200}, {"title", "Second try"}}}},
  });
  PublicSuffixList psl;
  EXPECT_EQ(resolve_url("https://s.example/flaky", 10, fetcher, psl).status,
            ResolutionStatus::kTimeout);
  EXPECT_EQ(resolve_url("https://s.example/flaky", 10, fetcher, psl).status,
            ResolutionStatus::kResolved);
}

ObservationLog share_log(const std::vector<std::vector<std::string>>& snapshots_of_ids) {
  ObservationLog log;
  std::int64_t ts = 100;
  for (const auto& ids : snapshots_of_ids) {
    std::vector<StoryRef> stories;
    for (const std::string& id : ids) {
      StoryRef s;
      s.share_id = id;
      s.headline = "";
      stories.push_back(std::move(s));
    }
    append_snapshot(log, testutil::snapshot(ts, std::move(stories)));
    ts += 60;
  }
  return log;
}

TEST(ResolveLogTest, CacheResolvesRepeatedShareUrlOnce) {
  FixtureFetcher fetcher = FixtureFetcher::from_json(json{
      {"https://s.example/one", {{{"status", 200}, {"title", "One"}}}},
  });
  PublicSuffixList psl;
  ObservationLog log = share_log({{"https://s.example/one"},
                                  {"https://s.example/one"},
                                  {"https://s.example/one"}});
  ObservationLog resolved = resolve_log(log, fetcher, psl);
  EXPECT_EQ(fetcher.fetch_count(), 1);
  for (const Snapshot& s : resolved.snapshots) {
    EXPECT_EQ(s.stories[0].resolved_url, "https://s.example/one");
    EXPECT_EQ(s.stories[0].source_domain, "s.example");
    EXPECT_EQ(s.stories[0].headline, "One");
  }
  EXPECT_EQ(resolved.metadata.at("resolve_failures"), "0");
}

TEST(ResolveLogTest, AllFailingFixtureLeavesStoriesUntouched) {
  FixtureFetcher fetcher = FixtureFetcher::from_json(json::object());
  PublicSuffixList psl;
  ObservationLog log = share_log({{"https://s.example/x", "https://s.example/y"}});
  ObservationLog resolved = resolve_log(log, fetcher, psl);
  EXPECT_EQ(resolved.snapshots, log.snapshots);
  EXPECT_EQ(resolved.metadata.at("resolve_failures"), "2");
  EXPECT_NE(resolved.metadata.at("resolve_failed_urls").find("https://s.example/x"),
            std::string::npos);
}

TEST(ResolveLogTest, MixedBatchEightOfTenResolve) {
  json fixture = json::object();
  std::vector<std::vector<std::string>> ids;
  for (int i = 0; i < 10; ++i) {
    std::string url = "https://s.example/" + std::to_string(i);
    ids.push_back({url});
    if (i == 3 || i == 7) continue;  // two failures
    fixture[url] = json::array({{{"status", 200}, {"title", "T" + std::to_string(i)}}});
  }
  FixtureFetcher fetcher = FixtureFetcher::from_json(fixture);
  PublicSuffixList psl;
  ObservationLog resolved = resolve_log(share_log(ids), fetcher, psl);
  int ok = 0;
  for (const Snapshot& s : resolved.snapshots) {
    if (!s.stories[0].resolved_url.empty()) ++ok;
  }
  EXPECT_EQ(ok, 8);
  EXPECT_EQ(resolved.metadata.at("resolve_failures"), "2");
}

// Cache on/off and parallel fan-out produce identical resolutions.
TEST(ResolveLogTest, CacheAndParallelismDoNotChangeResults) {
  json fixture = json::object();
  std::vector<std::vector<std::string>> ids;
  for (int host = 0; host < 4; ++host) {
    for (int i = 0; i < 5; ++i) {
      std::string url =
          "https://h" + std::to_string(host) + ".example/" + std::to_string(i);
      ids.push_back({url});
      fixture[url] = json::array(
          {{{"status", 200}, {"title", "H" + std::to_string(host * 10 + i)}}});
    }
  }
  PublicSuffixList psl;
  FixtureFetcher f1 = FixtureFetcher::from_json(fixture);
  FixtureFetcher f2 = FixtureFetcher::from_json(fixture);
  FixtureFetcher f3 = FixtureFetcher::from_json(fixture);
  ObservationLog log = share_log(ids);
  ObservationLog cached = resolve_log(log, f1, psl, 10, true, 1);
  ObservationLog uncached = resolve_log(log, f2, psl, 10, false, 1);
  ObservationLog parallel = resolve_log(log, f3, psl, 10, true, 4);
  EXPECT_EQ(cached, uncached);
  EXPECT_EQ(cached, parallel);
}

TEST(ExtractTitleTest, WhitespaceCollapsedFirstElementWins) {
  EXPECT_EQ(extract_html_title("<html><TITLE>A\n  B\tC</TITLE><title>D</title>"), "A B C");
  EXPECT_EQ(extract_html_title("no title here"), "");
  EXPECT_EQ(extract_html_title("<title lang=\"en\">X</title>"), "X");
}

TEST(ImportCsvTest, RoundTripFromNativeExport) {
  ObservationLog log;
  append_snapshot(log, testutil::simple_snapshot(100, 3, "a"));
  append_snapshot(log, testutil::simple_snapshot(200, 2, "b"));
  ImportResult result = import_csv(log_to_csv(log));
  EXPECT_TRUE(result.row_errors.empty());
  ASSERT_EQ(result.log.snapshots.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(result.log.snapshots[i].timestamp, log.snapshots[i].timestamp);
    ASSERT_EQ(result.log.snapshots[i].stories.size(), log.snapshots[i].stories.size());
    for (std::size_t k = 0; k < log.snapshots[i].stories.size(); ++k) {
      EXPECT_EQ(result.log.snapshots[i].stories[k].share_id,
                log.snapshots[i].stories[k].share_id);
      EXPECT_EQ(result.log.snapshots[i].stories[k].headline,
                log.snapshots[i].stories[k].headline);
    }
  }
}

TEST(ImportCsvTest, MissingHeadlineColumnNamed) {
  std::string csv = "timestamp,rank,share_id,resolved_url,source_domain\n1,1,a,,\n";
  try {
    import_csv(csv);
    FAIL() << "expected error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("missing column: headline"), std::string::npos);
  }
}

TEST(ImportCsvTest, EightyNineRowsWithSixMistimed) {
  ImportResult result = import_csv(testutil::mistimed_csv_fixture());
  EXPECT_EQ(result.row_errors.size(), 6u);
  EXPECT_EQ(result.log.snapshots.size(), 83u);
  for (const RowError& e : result.row_errors) {
    EXPECT_NE(e.message.find("bad timestamp"), std::string::npos);
    EXPECT_GT(e.line, 1);  // header is line 1
  }
}

TEST(ImportCsvTest, NativeJsonlPassThrough) {
  ObservationLog log;
  append_snapshot(log, testutil::simple_snapshot(100, 2, "a"));
  std::string path = ::testing::TempDir() + "/import_native.jsonl";
  write_log_file(path, log);
  ImportResult result = import_external(path, ImportFormat::kNativeJsonl);
  EXPECT_EQ(result.log, log);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace curaudit
