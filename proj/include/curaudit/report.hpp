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

#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/metrics.hpp"

namespace curaudit {

// Summary statistics for one observation log, mirroring the audit's
// side-by-side section comparison. Collected counts all distinct stories;
// analyzed counts only those with a resolved source, and the diversity
// numbers are computed over the analyzed set.
struct SectionSummary {
  std::string label;
  std::string section;
  int slots = 0;
  std::int64_t total_collected = 0;
  std::int64_t total_analyzed = 0;
  double span_days = 0.0;
  double avg_story_duration_hours = 0.0;
  double stories_per_day = 0.0;
  double stories_per_day_per_slot = 0.0;
  std::int64_t unique_sources = 0;
  double shannon_h = 0.0;
  double equitability_j = 0.0;
  double mean_share = 0.0;
  double median_share = 0.0;
  double top1_share = 0.0;
  double top3_share = 0.0;
  double top10_share = 0.0;
  bool churn_available = false;
};

struct AuditReport {
  std::vector<SectionSummary> sections;
  std::optional<HutchesonResult> hutcheson;  // present with two logs
};

inline SectionSummary summarize_log(const ObservationLog& log, const std::string& label,
                                    int tz_offset_minutes = 0) {
  if (log.snapshots.empty()) throw std::invalid_argument("empty log");
  SectionSummary s;
  s.label = label;
  s.section = log.section_tag();

  int slots = 0;
  for (const Snapshot& snap : log.snapshots) {
    slots = std::max<int>(slots, static_cast<int>(snap.stories.size()));
  }
  s.slots = slots;

  SourceShares shares = source_shares(log);
  s.total_collected = shares.distinct_stories;
  SourceDistribution analyzed = shares.distribution;
  if (analyzed.counts.count("(unknown)")) {
    analyzed.total -= analyzed.counts.at("(unknown)");
    analyzed.counts.erase("(unknown)");
  }
  s.total_analyzed = analyzed.total;
  s.unique_sources = analyzed.richness();
  if (analyzed.total > 0) {
    s.shannon_h = shannon_index(analyzed);
    if (s.unique_sources > 1) s.equitability_j = equitability(analyzed);
  }
  s.mean_share = shares.mean_share;
  s.median_share = shares.median_share;
  s.top1_share = shares.top1_share;
  s.top3_share = shares.top3_share;
  s.top10_share = shares.top10_share;

  std::int64_t span = log.snapshots.back().timestamp - log.snapshots.front().timestamp;
  s.span_days = static_cast<double>(span) / static_cast<double>(kDay);
  if (span >= kDay && s.section != "mixed") {
    ChurnReport churn = churn_stats(log, slots, tz_offset_minutes);
    s.avg_story_duration_hours = churn.avg_story_duration_hours;
    s.stories_per_day = churn.stories_per_day;
    s.stories_per_day_per_slot = churn.stories_per_day_per_slot;
    s.churn_available = true;
  }
  return s;
}

// One- or two-log report; with two logs the Hutcheson comparison of the
// analyzed source distributions is included.
inline AuditReport build_audit_report(std::span<const ObservationLog> logs,
                                      int tz_offset_minutes = 0) {
  if (logs.empty() || logs.size() > 2) {
    throw std::invalid_argument("report takes one or two logs");
  }
  AuditReport report;
  std::vector<SourceDistribution> dists;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    SectionSummary s = summarize_log(logs[i], "log" + std::to_string(i + 1), tz_offset_minutes);
    SourceShares shares = source_shares(logs[i]);
    SourceDistribution analyzed = shares.distribution;
    if (analyzed.counts.count("(unknown)")) {
      analyzed.total -= analyzed.counts.at("(unknown)");
      analyzed.counts.erase("(unknown)");
    }
    dists.push_back(std::move(analyzed));
    report.sections.push_back(std::move(s));
  }
  if (logs.size() == 2 && dists[0].total > 1 && dists[1].total > 1) {
    report.hutcheson = hutcheson_t(dists[0], dists[1]);
  }
  return report;
}

inline void to_json(nlohmann::json& j, const SectionSummary& s) {
  j = nlohmann::json{{"label", s.label},
                     {"section", s.section},
                     {"slots", s.slots},
                     {"total_collected", s.total_collected},
                     {"total_analyzed", s.total_analyzed},
                     {"span_days", s.span_days},
                     {"avg_story_duration_hours", s.avg_story_duration_hours},
                     {"stories_per_day", s.stories_per_day},
                     {"stories_per_day_per_slot", s.stories_per_day_per_slot},
                     {"unique_sources", s.unique_sources},
                     {"shannon_h", s.shannon_h},
                     {"equitability_j", s.equitability_j},
                     {"mean_share", s.mean_share},
                     {"median_share", s.median_share},
                     {"top1_share", s.top1_share},
                     {"top3_share", s.top3_share},
                     {"top10_share", s.top10_share},
                     {"churn_available", s.churn_available}};
}

inline void to_json(nlohmann::json& j, const AuditReport& r) {
  j = nlohmann::json{{"sections", r.sections}};
  if (r.hutcheson) j["hutcheson"] = *r.hutcheson;
}

// Left-aligned text table; first row is the header.
inline std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return "";
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      std::string cell = rows[r][i];
      cell.resize(widths[i], ' ');
      out += cell;
      if (i + 1 < rows[r].size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (r == 0) {
      for (std::size_t i = 0; i < widths.size(); ++i) {
        out += std::string(widths[i], '-');
        if (i + 1 < widths.size()) out += "  ";
      }
      out += '\n';
    }
  }
  return out;
}

inline std::string fmt_double(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

inline std::string fmt_percent(double share, int precision = 1) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f%%", precision, share * 100.0);
  return buf;
}

inline std::string render_audit_report(const AuditReport& r) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"metric"};
  for (const SectionSummary& s : r.sections) header.push_back(s.label + " (" + s.section + ")");
  rows.push_back(header);
  auto row = [&](const std::string& name, auto getter) {
    std::vector<std::string> cells = {name};
    for (const SectionSummary& s : r.sections) cells.push_back(getter(s));
    rows.push_back(cells);
  };
  row("stories displayed", [](const SectionSummary& s) { return std::to_string(s.slots); });
  row("total stories collected",
      [](const SectionSummary& s) { return std::to_string(s.total_collected); });
  row("total stories analyzed",
      [](const SectionSummary& s) { return std::to_string(s.total_analyzed); });
  row("span (days)", [](const SectionSummary& s) { return fmt_double(s.span_days, 1); });
  row("avg story duration (hrs)", [](const SectionSummary& s) {
    return s.churn_available ? fmt_double(s.avg_story_duration_hours, 1) : std::string("n/a");
  });
  row("avg stories per day", [](const SectionSummary& s) {
    return s.churn_available ? fmt_double(s.stories_per_day, 1) : std::string("n/a");
  });
  row("avg stories per day per slot", [](const SectionSummary& s) {
    return s.churn_available ? fmt_double(s.stories_per_day_per_slot, 1) : std::string("n/a");
  });
  row("total unique sources",
      [](const SectionSummary& s) { return std::to_string(s.unique_sources); });
  row("shannon index (nats)", [](const SectionSummary& s) { return fmt_double(s.shannon_h); });
  row("shannon equitability index",
      [](const SectionSummary& s) { return fmt_double(s.equitability_j); });
  row("mean source share", [](const SectionSummary& s) { return fmt_percent(s.mean_share); });
  row("median source share", [](const SectionSummary& s) { return fmt_percent(s.median_share); });
  row("top source share", [](const SectionSummary& s) { return fmt_percent(s.top1_share); });
  row("top 3 sources share", [](const SectionSummary& s) { return fmt_percent(s.top3_share); });
  row("top 10 sources share", [](const SectionSummary& s) { return fmt_percent(s.top10_share); });
  std::string out = render_table(rows);
  if (r.hutcheson) {
    out += "hutcheson t = " + fmt_double(r.hutcheson->t) +
           ", df = " + fmt_double(r.hutcheson->df, 1) + "\n";
  }
  return out;
}

}  // namespace curaudit
