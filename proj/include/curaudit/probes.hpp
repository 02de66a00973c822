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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/curator.hpp"
#include "curaudit/metrics.hpp"
#include "curaudit/timeutil.hpp"

namespace curaudit {

// ---------------------------------------------------------------------------
// Update-frequency probe.
//
// Polls the curator at a fixed interval and flags an update whenever the
// served list differs from the previous poll in membership or order.
// reset_cache=true closes and reopens the session on every poll (the
// force-close behavior); false keeps one session open for the whole window.

struct UpdateFrequencyReport {
  std::vector<double> intervals_minutes;
  double mean = 0.0, min = 0.0, max = 0.0, median = 0.0, sd = 0.0;
  std::int64_t polls = 0;
  bool resets_cache = true;
  std::int64_t updates_detected = 0;
};

inline void to_json(nlohmann::json& j, const UpdateFrequencyReport& r) {
  j = nlohmann::json{{"intervals_minutes", r.intervals_minutes},
                     {"mean", r.mean},
                     {"min", r.min},
                     {"max", r.max},
                     {"median", r.median},
                     {"sd", r.sd},
                     {"polls", r.polls},
                     {"resets_cache", r.resets_cache},
                     {"updates_detected", r.updates_detected}};
}

struct FrequencyProbeOptions {
  std::int64_t start = 0;
  std::int64_t duration = 24 * kHour;
  std::int64_t poll_interval = 2 * kMinute;  // the collection floor
  bool reset_cache = true;
  Section section = Section::kTrending;
  DeviceProfile device;                       // clean large-screen profile
  std::optional<GeoLocation> location;        // default: control location
  std::optional<std::string> session;         // default: control session
};

inline UpdateFrequencyReport measure_update_frequency(Curator& curator,
                                                      const FrequencyProbeOptions& opt) {
  if (opt.poll_interval < curator.min_poll_granularity()) {
    throw std::invalid_argument("poll interval below curator granularity");
  }
  if (opt.duration < 2 * opt.poll_interval) {
    throw std::invalid_argument("insufficient window");
  }
  const GeoLocation loc = opt.location.value_or(curator.control_location());
  const std::string session = opt.session.value_or(curator.control_session());

  UpdateFrequencyReport report;
  report.resets_cache = opt.reset_cache;
  const std::int64_t n_polls = opt.duration / opt.poll_interval;

  if (!opt.reset_cache) curator.open_session(session, opt.start);
  std::vector<std::string> prev;
  std::int64_t last_change = 0;
  bool have_change = false;
  for (std::int64_t k = 0; k < n_polls; ++k) {
    std::int64_t t = opt.start + k * opt.poll_interval;
    if (opt.reset_cache) curator.open_session(session, t);
    Snapshot snap = curator.serve(opt.section, opt.device, loc, session, t);
    if (opt.reset_cache) curator.close_session(session, t);
    std::vector<std::string> keys = story_keys(snap);
    if (k > 0 && keys != prev) {
      ++report.updates_detected;
      if (have_change) {
        report.intervals_minutes.push_back(static_cast<double>(t - last_change) /
                                           static_cast<double>(kMinute));
      }
      last_change = t;
      have_change = true;
    }
    prev = std::move(keys);
    ++report.polls;
  }
  if (!opt.reset_cache) {
    curator.close_session(session, opt.start + (n_polls - 1) * opt.poll_interval);
  }
  IntervalStats stats = IntervalStats::from(report.intervals_minutes);
  report.mean = stats.mean;
  report.min = stats.min;
  report.max = stats.max;
  report.median = stats.median;
  report.sd = stats.sd;
  return report;
}

// ---------------------------------------------------------------------------
// Localization probe (sock-puppeting).
//
// For each candidate location, serves a control snapshot and an experimental
// snapshot at the same frozen virtual instant under the same clean session,
// and flags a difference in the story lists. Order changes count by default
// since rank carries visibility weight; set_mode compares membership only.

struct LocalizationEntry {
  GeoLocation location;
  bool differed = false;
  std::vector<std::string> local_only;
  std::vector<std::string> control_only;
};

struct LocalizationReport {
  std::vector<LocalizationEntry> per_location;
  bool localized = false;
};

inline void to_json(nlohmann::json& j, const LocalizationReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const LocalizationEntry& e : r.per_location) {
    nlohmann::json loc{{"latitude", e.location.latitude},
                       {"longitude", e.location.longitude},
                       {"label", e.location.label}};
    entries.push_back(nlohmann::json{{"location", loc},
                                     {"differed", e.differed},
                                     {"local_only", e.local_only},
                                     {"control_only", e.control_only}});
  }
  j = nlohmann::json{{"per_location", entries}, {"localized", r.localized}};
}

struct LocalizationOptions {
  std::optional<GeoLocation> control_location;  // default: curator's control
  std::int64_t now = 0;
  Section section = Section::kTrending;
  DeviceProfile device;
  bool set_mode = false;       // compare story sets instead of ordered lists
  bool stop_at_first = false;  // Algorithm-style short circuit
  std::optional<std::string> session;
};

inline LocalizationReport check_localization(Curator& curator,
                                             std::span<const GeoLocation> locations,
                                             const LocalizationOptions& opt) {
  if (locations.empty()) throw std::invalid_argument("no locations given");
  const GeoLocation control = opt.control_location.value_or(curator.control_location());
  const std::string session = opt.session.value_or(curator.control_session());

  LocalizationReport report;
  curator.open_session(session, opt.now);
  for (const GeoLocation& loc : locations) {
    Snapshot c = curator.serve(opt.section, opt.device, control, session, opt.now);
    Snapshot l = curator.serve(opt.section, opt.device, loc, session, opt.now);
    LocalizationEntry entry;
    entry.location = loc;
    if (opt.set_mode) {
      entry.differed = story_key_set(c) != story_key_set(l);
    } else {
      entry.differed = story_keys(c) != story_keys(l);
    }
    std::set<std::string> ckeys = story_key_set(c);
    std::set<std::string> lkeys = story_key_set(l);
    for (const std::string& k : lkeys) {
      if (!ckeys.count(k)) entry.local_only.push_back(k);
    }
    for (const std::string& k : ckeys) {
      if (!lkeys.count(k)) entry.control_only.push_back(k);
    }
    report.localized = report.localized || entry.differed;
    report.per_location.push_back(std::move(entry));
    if (opt.stop_at_first && report.localized) break;
  }
  curator.close_session(session, opt.now);
  return report;
}

// ---------------------------------------------------------------------------
// Personalization probe.
//
// Scores each user snapshot against the control snapshot taken at the same
// instant (exact-minute match by default; second precision for simulator
// runs). Mistimed snapshots are excluded and counted. The lag rescoring
// unions the control set with the preceding `lag_depth` control sets, which
// absorbs update races around poll boundaries.

struct PersonalizationEntry {
  std::string snapshot_id;
  double overlap = 0.0;
  bool lag_matched = false;  // overlap reaches 1.0 once lag sets are included
};

struct PersonalizationReport {
  std::vector<PersonalizationEntry> per_snapshot;
  double mean_overlap = 0.0;
  double mean_overlap_with_lag = 0.0;
  std::int64_t excluded_mistimed = 0;
};

inline void to_json(nlohmann::json& j, const PersonalizationReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const PersonalizationEntry& e : r.per_snapshot) {
    entries.push_back(nlohmann::json{{"snapshot_id", e.snapshot_id},
                                     {"overlap", e.overlap},
                                     {"lag_matched", e.lag_matched}});
  }
  j = nlohmann::json{{"per_snapshot", entries},
                     {"mean_overlap", r.mean_overlap},
                     {"mean_overlap_with_lag", r.mean_overlap_with_lag},
                     {"excluded_mistimed", r.excluded_mistimed}};
}

struct PersonalizationOptions {
  int lag_depth = 1;
  enum class MatchPrecision { kMinute, kSecond };
  MatchPrecision precision = MatchPrecision::kMinute;
};

inline PersonalizationReport check_personalization(const ObservationLog& control_stream,
                                                   std::span<const Snapshot> user_snapshots,
                                                   const PersonalizationOptions& opt = {}) {
  if (user_snapshots.empty()) throw std::invalid_argument("no user snapshots");
  if (control_stream.snapshots.empty()) throw std::invalid_argument("empty control stream");

  auto bucket = [&](std::int64_t ts) {
    return opt.precision == PersonalizationOptions::MatchPrecision::kMinute
               ? minute_index(ts)
               : ts;
  };
  std::map<std::int64_t, std::size_t> control_at;  // bucket -> control index
  for (std::size_t i = 0; i < control_stream.snapshots.size(); ++i) {
    control_at.emplace(bucket(control_stream.snapshots[i].timestamp), i);
  }

  PersonalizationReport report;
  double sum = 0.0, sum_lag = 0.0;
  for (const Snapshot& user : user_snapshots) {
    auto it = control_at.find(bucket(user.timestamp));
    if (it == control_at.end()) {
      ++report.excluded_mistimed;
      continue;
    }
    std::size_t ci = it->second;
    std::set<std::string> user_set = story_key_set(user);
    std::set<std::string> control_set = story_key_set(control_stream.snapshots[ci]);
    double overlap = overlap_coefficient(user_set, control_set);

    std::set<std::string> expanded = control_set;
    for (int lag = 1; lag <= opt.lag_depth && lag <= static_cast<int>(ci); ++lag) {
      for (const std::string& k : story_key_set(control_stream.snapshots[ci - lag])) {
        expanded.insert(k);
      }
    }
    double overlap_lag = overlap_coefficient(user_set, expanded);

    PersonalizationEntry entry;
    entry.snapshot_id = user.run_id + "@" + std::to_string(user.timestamp);
    entry.overlap = overlap;
    entry.lag_matched = overlap_lag == 1.0;
    report.per_snapshot.push_back(std::move(entry));
    sum += overlap;
    sum_lag += overlap_lag;
  }
  if (!report.per_snapshot.empty()) {
    report.mean_overlap = sum / static_cast<double>(report.per_snapshot.size());
    report.mean_overlap_with_lag = sum_lag / static_cast<double>(report.per_snapshot.size());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Extended collection: one snapshot per poll per section, appended to an
// observation log whose metadata records the backend digest and time range.

struct CollectionOptions {
  std::int64_t start = 0;
  std::int64_t duration = 0;
  std::int64_t poll_interval = 2 * kMinute;
  std::vector<Section> sections = {Section::kTrending};
  DeviceProfile device;
  std::optional<GeoLocation> location;
  std::optional<std::string> session;
  bool reset_cache = true;
};

inline ObservationLog run_extended_collection(Curator& curator, const CollectionOptions& opt) {
  if (opt.poll_interval < curator.min_poll_granularity()) {
    throw std::invalid_argument("poll interval below curator granularity");
  }
  if (opt.duration < 2 * opt.poll_interval) {
    throw std::invalid_argument("insufficient window");
  }
  if (opt.sections.empty()) throw std::invalid_argument("no sections requested");
  const GeoLocation loc = opt.location.value_or(curator.control_location());
  const std::string session = opt.session.value_or(curator.control_session());

  ObservationLog log;
  const std::int64_t n_polls = opt.duration / opt.poll_interval;
  if (!opt.reset_cache) curator.open_session(session, opt.start);
  for (std::int64_t k = 0; k < n_polls; ++k) {
    std::int64_t t = opt.start + k * opt.poll_interval;
    if (opt.reset_cache) curator.open_session(session, t);
    for (Section section : opt.sections) {
      append_snapshot(log, curator.serve(section, opt.device, loc, session, t));
    }
    if (opt.reset_cache) curator.close_session(session, t);
  }
  if (!opt.reset_cache) {
    curator.close_session(session, opt.start + (n_polls - 1) * opt.poll_interval);
  }
  log.metadata["config_digest"] = curator.config_digest();
  log.metadata["start"] = std::to_string(opt.start);
  log.metadata["end"] = std::to_string(opt.start + opt.duration);
  log.metadata["poll_interval_s"] = std::to_string(opt.poll_interval);
  return log;
}

// Collects a control stream and synchronized user snapshots in one pass:
// at each poll the control session and every user session ("user-0", ...)
// are served at the same frozen instant, the sock-puppet way. User devices
// default to small screens; the control device is a clean large screen.
struct UserCollectionOptions {
  std::int64_t start = 0;
  std::int64_t duration = 0;
  std::int64_t poll_interval = 2 * kMinute;
  int user_count = 1;
  Section section = Section::kTrending;
  DeviceProfile user_device{ScreenClass::kSmall, {}, false, 0};
  DeviceProfile control_device{ScreenClass::kLarge, {}, false, 0};
  std::optional<GeoLocation> location;
};

struct PersonalizationCollection {
  ObservationLog control;
  std::vector<Snapshot> users;
};

inline PersonalizationCollection collect_personalization_streams(
    Curator& curator, const UserCollectionOptions& opt) {
  if (opt.user_count < 1) throw std::invalid_argument("user_count must be >= 1");
  if (opt.duration < 2 * opt.poll_interval) {
    throw std::invalid_argument("insufficient window");
  }
  const GeoLocation loc = opt.location.value_or(curator.control_location());
  const std::string control_session = curator.control_session();
  PersonalizationCollection out;
  const std::int64_t n_polls = opt.duration / opt.poll_interval;
  for (std::int64_t k = 0; k < n_polls; ++k) {
    std::int64_t t = opt.start + k * opt.poll_interval;
    curator.open_session(control_session, t);
    append_snapshot(out.control,
                    curator.serve(opt.section, opt.control_device, loc, control_session, t));
    curator.close_session(control_session, t);
    for (int u = 0; u < opt.user_count; ++u) {
      std::string session = "user-" + std::to_string(u);
      curator.open_session(session, t);
      out.users.push_back(curator.serve(opt.section, opt.user_device, loc, session, t));
      curator.close_session(session, t);
    }
  }
  out.control.metadata["config_digest"] = curator.config_digest();
  return out;
}

}  // namespace curaudit
