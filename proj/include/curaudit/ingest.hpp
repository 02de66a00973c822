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

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/csv.hpp"
#include "curaudit/log_io.hpp"
#include "curaudit/public_suffix.hpp"

namespace curaudit {

// Minimal HTTP-shaped response. status 0 means the transport failed or
// timed out.
struct FetchResponse {
  int status = 0;
  std::string location;  // redirect target for 3xx
  std::string body;      // document body for 200
};

// Injectable fetch interface so the whole suite runs without network.
// Implementations must be safe to call from multiple threads.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual FetchResponse fetch(const std::string& url) = 0;
};

// Test-fixture fetcher: JSON map of url -> ordered response list. Each
// fetch of a url consumes the next response; the last one repeats.
// Response objects carry "status" plus "location", and either "body" or a
// "title" shorthand that is wrapped in a <title> element.
class FixtureFetcher final : public Fetcher {
 public:
  static FixtureFetcher from_json(const nlohmann::json& j) {
    FixtureFetcher f;
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::vector<FetchResponse> responses;
      for (const nlohmann::json& r : it.value()) {
        FetchResponse resp;
        resp.status = r.value("status", 0);
        resp.location = r.value("location", std::string());
        if (r.contains("body")) {
          resp.body = r.at("body").get<std::string>();
        } else if (r.contains("title")) {
          resp.body = "<html><head><title>" + r.at("title").get<std::string>() +
                      "</title></head><body></body></html>";
        }
        responses.push_back(std::move(resp));
      }
      f.responses_[it.key()] = std::move(responses);
    }
    return f;
  }

  static FixtureFetcher from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read fixture file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  FetchResponse fetch(const std::string& url) override {
    std::lock_guard<std::mutex> lock(*mu_);
    ++fetches_;
    auto it = responses_.find(url);
    if (it == responses_.end() || it->second.empty()) {
      return FetchResponse{};  // unknown url: transport failure
    }
    std::size_t& cur = cursor_[url];
    const FetchResponse& resp = it->second[std::min(cur, it->second.size() - 1)];
    ++cur;
    return resp;
  }

  std::int64_t fetch_count() const {
    std::lock_guard<std::mutex> lock(*mu_);
    return fetches_;
  }

 private:
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  std::map<std::string, std::vector<FetchResponse>> responses_;
  std::map<std::string, std::size_t> cursor_;
  std::int64_t fetches_ = 0;
};

enum class ResolutionStatus { kResolved, kLoop, kTooManyRedirects, kHttpError, kTimeout };

inline std::string_view to_string(ResolutionStatus s) {
  switch (s) {
    case ResolutionStatus::kResolved: return "resolved";
    case ResolutionStatus::kLoop: return "loop";
    case ResolutionStatus::kTooManyRedirects: return "too_many_redirects";
    case ResolutionStatus::kHttpError: return "http_error";
    case ResolutionStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

struct ResolutionRecord {
  std::string share_url;
  std::vector<std::string> redirect_chain;  // fetched URLs, in order
  std::string final_url;
  std::string source_domain;
  std::string title;
  ResolutionStatus status = ResolutionStatus::kTimeout;
  int http_status = 0;
};

// First <title> element, whitespace-collapsed.
inline std::string extract_html_title(std::string_view body) {
  auto lower_find = [&](std::string_view needle, std::size_t from) {
    for (std::size_t i = from; i + needle.size() <= body.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < needle.size(); ++k) {
        if (std::tolower(static_cast<unsigned char>(body[i + k])) != needle[k]) {
          match = false;
          break;
        }
      }
      if (match) return i;
    }
    return std::string_view::npos;
  };
  std::size_t open = lower_find("<title", 0);
  if (open == std::string_view::npos) return "";
  std::size_t gt = body.find('>', open);
  if (gt == std::string_view::npos) return "";
  std::size_t close = lower_find("</title", gt);
  if (close == std::string_view::npos) return "";
  std::string_view raw = body.substr(gt + 1, close - gt - 1);
  std::string out;
  bool in_space = true;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space && !out.empty()) out += ' ';
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

// Resolves relative redirect targets against the current URL. Handles
// absolute URLs, protocol-relative "//host/..." and path-absolute "/...".
inline std::string absolutize_url(const std::string& target, const std::string& base) {
  if (target.find("://") != std::string::npos) return target;
  std::size_t scheme_end = base.find("://");
  std::string scheme = scheme_end == std::string::npos ? "https" : base.substr(0, scheme_end);
  if (target.rfind("//", 0) == 0) return scheme + ":" + target;
  std::string host = url_host(base);
  if (!target.empty() && target[0] == '/') return scheme + "://" + host + target;
  return scheme + "://" + host + "/" + target;
}

// Follows 3xx redirects up to max_redirects. On a terminal 200, extracts the
// document title and the publisher's registrable domain. Errors are data:
// the record carries a status, the batch never aborts.
inline ResolutionRecord resolve_url(const std::string& share_url, int max_redirects,
                                    Fetcher& fetcher, const PublicSuffixList& psl) {
  ResolutionRecord rec;
  rec.share_url = share_url;
  std::string current = share_url;
  std::set<std::string> visited{current};
  rec.redirect_chain.push_back(current);
  for (int hops = 0;; ++hops) {
    FetchResponse resp = fetcher.fetch(current);
    rec.http_status = resp.status;
    if (resp.status == 0) {
      rec.status = ResolutionStatus::kTimeout;
      return rec;
    }
    if (resp.status >= 300 && resp.status < 400) {
      if (resp.location.empty()) {
        rec.status = ResolutionStatus::kHttpError;
        return rec;
      }
      if (hops == max_redirects) {
        rec.status = ResolutionStatus::kTooManyRedirects;
        return rec;
      }
      std::string next = absolutize_url(resp.location, current);
      if (!visited.insert(next).second) {
        rec.status = ResolutionStatus::kLoop;
        return rec;
      }
      rec.redirect_chain.push_back(next);
      current = next;
      continue;
    }
    if (resp.status == 200) {
      rec.status = ResolutionStatus::kResolved;
      rec.final_url = current;
      rec.title = extract_html_title(resp.body);
      rec.source_domain = registrable_domain_of_url(current, psl);
      return rec;
    }
    rec.status = ResolutionStatus::kHttpError;
    return rec;
  }
}

// Batch resolution over the distinct share ids of a log, optionally fanned
// out over `jobs` threads. URLs are grouped by host and each host's queue
// runs serially; results merge deterministically by input order. A cache
// keyed by share_url makes repeated appearances resolve once.
inline std::map<std::string, ResolutionRecord> resolve_batch(
    const std::vector<std::string>& share_urls, Fetcher& fetcher, const PublicSuffixList& psl,
    int max_redirects = 10, int jobs = 1) {
  std::vector<std::string> distinct;
  std::set<std::string> seen;
  for (const std::string& u : share_urls) {
    if (seen.insert(u).second) distinct.push_back(u);
  }
  std::map<std::string, ResolutionRecord> out;
  if (jobs <= 1 || distinct.size() <= 1) {
    for (const std::string& u : distinct) out[u] = resolve_url(u, max_redirects, fetcher, psl);
    return out;
  }
  std::map<std::string, std::vector<std::string>> by_host;
  for (const std::string& u : distinct) by_host[url_host(u)].push_back(u);
  std::vector<std::vector<std::string>> groups;
  for (auto& [host, urls] : by_host) groups.push_back(std::move(urls));
  std::mutex out_mu;
  std::vector<std::future<void>> futures;
  std::size_t next_group = 0;
  std::mutex idx_mu;
  int workers = std::min<int>(jobs, static_cast<int>(groups.size()));
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&]() {
      while (true) {
        std::size_t g;
        {
          std::lock_guard<std::mutex> lock(idx_mu);
          if (next_group >= groups.size()) return;
          g = next_group++;
        }
        for (const std::string& u : groups[g]) {
          ResolutionRecord rec = resolve_url(u, max_redirects, fetcher, psl);
          std::lock_guard<std::mutex> lock(out_mu);
          out[u] = std::move(rec);
        }
      }
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

// Applies batch resolution to every story of a log. Successful records fill
// resolved_url/source_domain (and the headline, when it was empty, from the
// page title). Failures are recorded in the log metadata.
inline ObservationLog resolve_log(const ObservationLog& log, Fetcher& fetcher,
                                  const PublicSuffixList& psl, int max_redirects = 10,
                                  bool use_cache = true, int jobs = 1) {
  ObservationLog out = log;
  std::vector<std::string> urls;
  for (const Snapshot& snap : out.snapshots) {
    for (const StoryRef& st : snap.stories) {
      if (st.resolved_url.empty()) urls.push_back(st.share_id);
    }
  }
  std::map<std::string, ResolutionRecord> records;
  if (use_cache) {
    records = resolve_batch(urls, fetcher, psl, max_redirects, jobs);
  }
  std::set<std::string> failed;
  auto apply = [&](StoryRef& st) {
    if (!st.resolved_url.empty()) return;
    ResolutionRecord rec;
    if (use_cache) {
      rec = records.at(st.share_id);
    } else {
      rec = resolve_url(st.share_id, max_redirects, fetcher, psl);
    }
    if (rec.status == ResolutionStatus::kResolved) {
      st.resolved_url = rec.final_url;
      st.source_domain = rec.source_domain;
      if (st.headline.empty()) st.headline = rec.title;
    } else {
      failed.insert(st.share_id);
    }
  };
  for (Snapshot& snap : out.snapshots) {
    for (StoryRef& st : snap.stories) apply(st);
  }
  out.metadata["resolve_failures"] = std::to_string(failed.size());
  if (!failed.empty()) {
    std::string joined;
    for (const std::string& u : failed) {
      if (!joined.empty()) joined += ";";
      joined += u;
    }
    out.metadata["resolve_failed_urls"] = joined;
  }
  return out;
}

// ---------------------------------------------------------------------------
// External imports.

struct RowError {
  int line = 0;
  std::string message;
};

struct ImportResult {
  ObservationLog log;
  std::vector<RowError> row_errors;
};

// Flat-CSV import (the export schema of log_to_csv). Rows sharing a
// timestamp form one snapshot ordered by rank; device/location/section are
// synthesized since the flat format does not carry them. Bad rows become
// row errors rather than aborting the import.
inline ImportResult import_csv(std::string_view csv_text, Section section = Section::kTrending,
                               DeviceProfile device = {}, GeoLocation location = {}) {
  std::vector<CsvRow> rows = parse_csv(csv_text);
  if (rows.empty()) throw std::invalid_argument("empty csv");
  const std::vector<std::string> required = {"timestamp", "rank", "share_id",
                                             "resolved_url", "source_domain", "headline"};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) col[rows[0].fields[i]] = i;
  for (const std::string& name : required) {
    if (!col.count(name)) throw std::invalid_argument("missing column: " + name);
  }

  ImportResult result;
  struct Pending {
    std::int64_t ts;
    std::vector<std::pair<int, StoryRef>> ranked;  // (rank, story)
    int first_line = 0;
  };
  std::optional<Pending> pending;

  auto flush = [&]() {
    if (!pending) return;
    std::stable_sort(pending->ranked.begin(), pending->ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Snapshot snap;
    snap.timestamp = pending->ts;
    snap.device = device;
    snap.location = location;
    snap.section = section;
    snap.run_id = "import";
    for (auto& [rank, st] : pending->ranked) snap.stories.push_back(std::move(st));
    try {
      append_snapshot(result.log, std::move(snap));
    } catch (const std::exception& e) {
      result.row_errors.push_back({pending->first_line, e.what()});
    }
    pending.reset();
  };

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const CsvRow& row = rows[i];
    if (row.fields.size() < rows[0].fields.size()) {
      result.row_errors.push_back({row.line, "too few fields"});
      continue;
    }
    auto field = [&](const std::string& name) -> const std::string& {
      return row.fields[col.at(name)];
    };
    std::int64_t ts = 0;
    try {
      std::size_t pos = 0;
      ts = std::stoll(field("timestamp"), &pos);
      if (pos != field("timestamp").size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      result.row_errors.push_back({row.line, "bad timestamp: " + field("timestamp")});
      continue;
    }
    int rank = 0;
    try {
      rank = std::stoi(field("rank"));
    } catch (const std::exception&) {
      result.row_errors.push_back({row.line, "bad rank: " + field("rank")});
      continue;
    }
    if (field("share_id").empty()) {
      result.row_errors.push_back({row.line, "empty share_id"});
      continue;
    }
    StoryRef st;
    st.share_id = field("share_id");
    st.resolved_url = field("resolved_url");
    st.source_domain = field("source_domain");
    st.headline = field("headline");
    st.section = section;
    if (pending && pending->ts != ts) flush();
    if (!pending) pending = Pending{ts, {}, row.line};
    pending->ranked.emplace_back(rank, std::move(st));
  }
  flush();
  result.log.metadata["import_row_errors"] = std::to_string(result.row_errors.size());
  return result;
}

enum class ImportFormat { kNativeJsonl, kCsv };

// Loads external observation data in either supported format.
inline ImportResult import_external(const std::string& path, ImportFormat format,
                                    Section section = Section::kTrending) {
  if (format == ImportFormat::kNativeJsonl) {
    ImportResult r;
    r.log = read_log_file(path);
    return r;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_csv(buf.str(), section);
}

}  // namespace curaudit
