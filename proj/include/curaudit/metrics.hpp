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
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/csv.hpp"
#include "curaudit/timeutil.hpp"

namespace curaudit {

// Category counts of distinct stories per source domain.
struct SourceDistribution {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  void add(const std::string& source, std::int64_t n = 1) {
    counts[source] += n;
    total += n;
  }
  static SourceDistribution from_counts(std::map<std::string, std::int64_t> c) {
    SourceDistribution d;
    d.counts = std::move(c);
    for (const auto& [k, v] : d.counts) d.total += v;
    return d;
  }
  std::int64_t richness() const {
    std::int64_t s = 0;
    for (const auto& [k, v] : counts)
      if (v > 0) ++s;
    return s;
  }
};

// Shannon diversity index H = -sum p_i ln p_i, in nats. Zero-count
// categories are ignored.
inline double shannon_index(const SourceDistribution& d) {
  if (d.total <= 0) throw std::invalid_argument("empty distribution");
  double h = 0.0;
  for (const auto& [k, c] : d.counts) {
    if (c <= 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(d.total);
    h -= p * std::log(p);
  }
  return h;
}

// First-order variance approximation of H:
//   Var(H) = [sum f (ln f)^2 - (sum f ln f)^2 / N] / N^2
// with an optional small-sample correction term (S-1)/(2N^2).
inline double shannon_variance(const SourceDistribution& d,
                               bool small_sample_correction = false) {
  if (d.total <= 0) throw std::invalid_argument("empty distribution");
  double n = static_cast<double>(d.total);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& [k, c] : d.counts) {
    if (c <= 0) continue;
    double f = static_cast<double>(c);
    s1 += f * std::log(f) * std::log(f);
    s2 += f * std::log(f);
  }
  double var = (s1 - s2 * s2 / n) / (n * n);
  if (small_sample_correction) {
    var += static_cast<double>(d.richness() - 1) / (2.0 * n * n);
  }
  return var;
}

// Shannon equitability (evenness) J = H / ln S, in [0,1].
inline double equitability(const SourceDistribution& d) {
  std::int64_t s = d.richness();
  if (s < 2) throw std::invalid_argument("undefined for one category");
  return shannon_index(d) / std::log(static_cast<double>(s));
}

struct DiversityResult {
  double shannon_h = 0.0;
  double equitability_j = 0.0;
  double variance_h = 0.0;
  std::int64_t richness_s = 0;
};

inline DiversityResult diversity(const SourceDistribution& d,
                                 bool small_sample_correction = false) {
  DiversityResult r;
  r.shannon_h = shannon_index(d);
  r.richness_s = d.richness();
  r.variance_h = shannon_variance(d, small_sample_correction);
  r.equitability_j = r.richness_s > 1
                         ? r.shannon_h / std::log(static_cast<double>(r.richness_s))
                         : 1.0;
  return r;
}

inline void to_json(nlohmann::json& j, const DiversityResult& r) {
  j = nlohmann::json{{"shannon_h", r.shannon_h},
                     {"equitability_j", r.equitability_j},
                     {"variance_h", r.variance_h},
                     {"richness_s", r.richness_s}};
}

struct HutchesonResult {
  double t = 0.0;
  double df = 0.0;
};

// Two-sample comparison of Shannon indices:
//   t  = (H_a - H_b) / sqrt(Var_a + Var_b)
//   df = (Var_a + Var_b)^2 / (Var_a^2/N_a + Var_b^2/N_b)
inline HutchesonResult hutcheson_t(const SourceDistribution& a,
                                   const SourceDistribution& b,
                                   bool small_sample_correction = false) {
  if (a.total <= 1 || b.total <= 1) {
    throw std::invalid_argument("hutcheson_t requires totals > 1");
  }
  double ha = shannon_index(a);
  double hb = shannon_index(b);
  double va = shannon_variance(a, small_sample_correction);
  double vb = shannon_variance(b, small_sample_correction);
  double pooled = va + vb;
  if (pooled <= 0.0) {
    if (ha != hb) throw std::invalid_argument("degenerate variance");
    return {0.0, 0.0};
  }
  HutchesonResult r;
  r.t = (ha - hb) / std::sqrt(pooled);
  double denom = va * va / static_cast<double>(a.total) +
                 vb * vb / static_cast<double>(b.total);
  r.df = pooled * pooled / denom;
  return r;
}

inline void to_json(nlohmann::json& j, const HutchesonResult& r) {
  j = nlohmann::json{{"t", r.t}, {"df", r.df}};
}

// Szymkiewicz-Simpson overlap: |a n b| / min(|a|, |b|).
inline double overlap_coefficient(const std::set<std::string>& a,
                                  const std::set<std::string>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty set");
  const std::set<std::string>& small = a.size() <= b.size() ? a : b;
  const std::set<std::string>& big = a.size() <= b.size() ? b : a;
  std::size_t inter = 0;
  for (const std::string& k : small) inter += big.count(k);
  return static_cast<double>(inter) / static_cast<double>(small.size());
}

// Source bucket for an observed story. Unresolved stories without a source
// fall into "(unknown)" and are excluded from the analyzed count.
inline std::string source_of(const StoryRef& s) {
  return s.source_domain.empty() ? std::string("(unknown)") : s.source_domain;
}

struct SourceShares {
  SourceDistribution distribution;
  std::vector<std::pair<std::string, std::int64_t>> ranked;  // count desc
  std::int64_t distinct_stories = 0;
  std::int64_t richness = 0;
  double top1_share = 0.0;
  double top3_share = 0.0;
  double top10_share = 0.0;
  double mean_share = 0.0;
  double median_share = 0.0;

  double top_share(std::size_t n) const {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < n && i < ranked.size(); ++i) acc += ranked[i].second;
    return distribution.total > 0
               ? static_cast<double>(acc) / static_cast<double>(distribution.total)
               : 0.0;
  }
};

// Per-source share of distinct stories (stories deduplicated by identity
// before counting).
inline SourceShares source_shares(const ObservationLog& log) {
  if (log.snapshots.empty()) throw std::invalid_argument("empty log");
  std::map<std::string, std::string> source_by_key;
  for (const Snapshot& snap : log.snapshots) {
    for (const StoryRef& st : snap.stories) {
      source_by_key.emplace(story_key(st), source_of(st));
    }
  }
  SourceShares r;
  r.distinct_stories = static_cast<std::int64_t>(source_by_key.size());
  for (const auto& [key, src] : source_by_key) r.distribution.add(src);
  r.richness = r.distribution.richness();
  r.ranked.assign(r.distribution.counts.begin(), r.distribution.counts.end());
  std::sort(r.ranked.begin(), r.ranked.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  r.top1_share = r.top_share(1);
  r.top3_share = r.top_share(3);
  r.top10_share = r.top_share(10);
  if (r.richness > 0) {
    r.mean_share = 1.0 / static_cast<double>(r.richness);
    std::vector<double> shares;
    shares.reserve(r.ranked.size());
    for (const auto& [src, c] : r.ranked) {
      shares.push_back(static_cast<double>(c) / static_cast<double>(r.distribution.total));
    }
    std::sort(shares.begin(), shares.end());
    std::size_t m = shares.size();
    r.median_share = (m % 2 == 1) ? shares[m / 2]
                                  : 0.5 * (shares[m / 2 - 1] + shares[m / 2]);
  }
  return r;
}

inline void to_json(nlohmann::json& j, const SourceShares& r) {
  nlohmann::json ranked = nlohmann::json::array();
  for (const auto& [src, c] : r.ranked) {
    ranked.push_back(nlohmann::json{{"source", src}, {"count", c}});
  }
  j = nlohmann::json{{"distinct_stories", r.distinct_stories},
                     {"richness", r.richness},
                     {"top1_share", r.top1_share},
                     {"top3_share", r.top3_share},
                     {"top10_share", r.top10_share},
                     {"mean_share", r.mean_share},
                     {"median_share", r.median_share},
                     {"ranked", ranked}};
}

// Summary statistics of a list of intervals (minutes).
struct IntervalStats {
  double mean = 0.0, min = 0.0, max = 0.0, median = 0.0, sd = 0.0;

  static IntervalStats from(const std::vector<double>& xs) {
    IntervalStats s;
    if (xs.empty()) return s;
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double x : sorted) sum += x;
    s.mean = sum / static_cast<double>(sorted.size());
    s.min = sorted.front();
    s.max = sorted.back();
    std::size_t m = sorted.size();
    s.median = (m % 2 == 1) ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    if (m > 1) {
      double ss = 0.0;
      for (double x : sorted) ss += (x - s.mean) * (x - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(m - 1));  // sample sd
    }
    return s;
  }
};

inline void to_json(nlohmann::json& j, const IntervalStats& s) {
  j = nlohmann::json{{"mean", s.mean}, {"min", s.min}, {"max", s.max},
                     {"median", s.median}, {"sd", s.sd}};
}

struct ChurnReport {
  double avg_story_duration_hours = 0.0;
  double stories_per_day = 0.0;
  double stories_per_day_per_slot = 0.0;
  IntervalStats inter_update_minutes;
  std::array<double, 24> hourly_first_appearance{};
  std::int64_t distinct_stories = 0;
  double span_days = 0.0;
};

inline void to_json(nlohmann::json& j, const ChurnReport& r) {
  j = nlohmann::json{{"avg_story_duration_hours", r.avg_story_duration_hours},
                     {"stories_per_day", r.stories_per_day},
                     {"stories_per_day_per_slot", r.stories_per_day_per_slot},
                     {"inter_update_minutes", r.inter_update_minutes},
                     {"hourly_first_appearance", r.hourly_first_appearance},
                     {"distinct_stories", r.distinct_stories},
                     {"span_days", r.span_days}};
}

// Figure-ready CSV emitters.
inline std::string shares_to_csv(const SourceShares& shares) {
  std::string out = "source,count,share\n";
  char num[48];
  for (const auto& [src, count] : shares.ranked) {
    std::snprintf(num, sizeof(num), "%.6f",
                  static_cast<double>(count) / static_cast<double>(shares.distribution.total));
    out += csv_escape(src) + "," + std::to_string(count) + "," + num + "\n";
  }
  return out;
}

inline std::string hourly_to_csv(const std::array<double, 24>& hourly) {
  std::string out = "hour,frequency\n";
  char num[48];
  for (int h = 0; h < 24; ++h) {
    std::snprintf(num, sizeof(num), "%.6f", hourly[h]);
    out += std::to_string(h) + "," + num + "\n";
  }
  return out;
}

// Churn over a single-section log spanning at least one day. Story duration
// is last-seen minus first-seen; a story seen once gets one poll interval
// (inferred as the median inter-snapshot gap unless given).
inline ChurnReport churn_stats(const ObservationLog& log, int slots,
                               int tz_offset_minutes = 0,
                               std::int64_t poll_interval_s = 0) {
  if (log.snapshots.empty()) throw std::invalid_argument("empty log");
  if (log.section_tag() == "mixed") {
    throw std::invalid_argument("mixed-section log; filter a section first");
  }
  if (slots <= 0) throw std::invalid_argument("slots must be positive");
  std::int64_t span = log.snapshots.back().timestamp - log.snapshots.front().timestamp;
  if (span < kDay) throw std::invalid_argument("log spans less than 1 day");

  if (poll_interval_s <= 0) {
    std::vector<std::int64_t> gaps;
    for (std::size_t i = 1; i < log.snapshots.size(); ++i) {
      std::int64_t g = log.snapshots[i].timestamp - log.snapshots[i - 1].timestamp;
      if (g > 0) gaps.push_back(g);
    }
    if (gaps.empty()) throw std::invalid_argument("cannot infer poll interval");
    std::sort(gaps.begin(), gaps.end());
    poll_interval_s = gaps[gaps.size() / 2];
  }

  struct Seen { std::int64_t first, last; };
  std::map<std::string, Seen> seen;
  for (const Snapshot& snap : log.snapshots) {
    for (const StoryRef& st : snap.stories) {
      auto [it, fresh] = seen.try_emplace(story_key(st), Seen{snap.timestamp, snap.timestamp});
      if (!fresh) it->second.last = snap.timestamp;
    }
  }

  ChurnReport r;
  r.distinct_stories = static_cast<std::int64_t>(seen.size());
  r.span_days = static_cast<double>(span) / static_cast<double>(kDay);

  double total_dur = 0.0;
  std::array<std::int64_t, 24> hour_counts{};
  for (const auto& [key, s] : seen) {
    std::int64_t dur = s.last - s.first;
    if (dur == 0) dur = poll_interval_s;
    total_dur += static_cast<double>(dur);
    hour_counts[hour_of_day(s.first, tz_offset_minutes)] += 1;
  }
  r.avg_story_duration_hours = total_dur / static_cast<double>(seen.size()) /
                               static_cast<double>(kHour);
  r.stories_per_day = static_cast<double>(seen.size()) / r.span_days;
  r.stories_per_day_per_slot = r.stories_per_day / static_cast<double>(slots);
  for (int h = 0; h < 24; ++h) {
    r.hourly_first_appearance[h] =
        static_cast<double>(hour_counts[h]) / static_cast<double>(seen.size());
  }

  // Update detection: membership or order change between successive polls.
  std::vector<double> intervals;
  std::int64_t last_change = 0;
  bool have_change = false;
  for (std::size_t i = 1; i < log.snapshots.size(); ++i) {
    if (story_keys(log.snapshots[i]) != story_keys(log.snapshots[i - 1])) {
      if (have_change) {
        intervals.push_back(static_cast<double>(log.snapshots[i].timestamp - last_change) /
                            static_cast<double>(kMinute));
      }
      last_change = log.snapshots[i].timestamp;
      have_change = true;
    }
  }
  r.inter_update_minutes = IntervalStats::from(intervals);
  return r;
}

}  // namespace curaudit
