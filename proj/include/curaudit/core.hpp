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
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curaudit/public_suffix.hpp"

namespace curaudit {

// The two audited feed sections. Trending is capped at 6 display slots,
// the editorial Top list at 5.
enum class Section { kTrending, kTop };

inline constexpr int section_capacity(Section s) {
  return s == Section::kTrending ? 6 : 5;
}

inline std::string_view to_string(Section s) {
  return s == Section::kTrending ? "trending" : "top";
}

inline Section section_from_string(std::string_view s) {
  if (s == "trending") return Section::kTrending;
  if (s == "top") return Section::kTop;
  throw std::invalid_argument("unknown section: " + std::string(s));
}

// Small screens expose 4 Trending slots, large screens all 6.
enum class ScreenClass { kSmall, kLarge };

inline constexpr int trending_slots(ScreenClass sc) {
  return sc == ScreenClass::kSmall ? 4 : 6;
}

inline std::string_view to_string(ScreenClass sc) {
  return sc == ScreenClass::kSmall ? "small" : "large";
}

inline ScreenClass screen_class_from_string(std::string_view s) {
  if (s == "small") return ScreenClass::kSmall;
  if (s == "large") return ScreenClass::kLarge;
  throw std::invalid_argument("unknown screen_class: " + std::string(s));
}

struct GeoLocation {
  double latitude = 0.0;
  double longitude = 0.0;
  std::string label;

  bool in_range() const {
    return latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 &&
           longitude <= 180.0;
  }
  bool same_point(const GeoLocation& o) const {
    return latitude == o.latitude && longitude == o.longitude;
  }
  bool operator==(const GeoLocation&) const = default;
};

struct DeviceProfile {
  ScreenClass screen_class = ScreenClass::kLarge;
  std::set<std::string> blocked_sources;
  bool session_persistent = false;
  int timezone_offset_minutes = 0;

  int trending_slots() const { return curaudit::trending_slots(screen_class); }
  bool operator==(const DeviceProfile&) const = default;
};

// One curated story as observed in a snapshot. share_id is the opaque share
// link; resolved_url/source_domain are filled by ingestion when known.
struct StoryRef {
  std::string share_id;
  std::string resolved_url;
  std::string source_domain;
  std::string headline;
  Section section = Section::kTrending;

  bool operator==(const StoryRef&) const = default;
};

// Canonical story identity: the resolved web address once ingestion has run,
// the share id before that. Every module dedupes with this key.
inline const std::string& story_key(const StoryRef& s) {
  return s.resolved_url.empty() ? s.share_id : s.resolved_url;
}

// A timestamped ordered story list observed on one device.
struct Snapshot {
  std::int64_t timestamp = 0;  // UTC seconds
  DeviceProfile device;
  GeoLocation location;
  Section section = Section::kTrending;
  std::vector<StoryRef> stories;
  std::string run_id;

  bool operator==(const Snapshot&) const = default;
};

inline std::vector<std::string> story_keys(const Snapshot& s) {
  std::vector<std::string> keys;
  keys.reserve(s.stories.size());
  for (const StoryRef& st : s.stories) keys.push_back(story_key(st));
  return keys;
}

inline std::set<std::string> story_key_set(const Snapshot& s) {
  std::set<std::string> keys;
  for (const StoryRef& st : s.stories) keys.insert(story_key(st));
  return keys;
}

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Structural snapshot invariants. Violations are data, not failures.
inline ValidationResult validate_snapshot(const Snapshot& s) {
  ValidationResult r;
  if (s.stories.empty()) r.violations.push_back("empty story list");
  if (!s.location.in_range()) r.violations.push_back("location out of range");

  int limit = section_capacity(s.section);
  if (s.section == Section::kTrending) {
    limit = std::min(limit, s.device.trending_slots());
  }
  if (static_cast<int>(s.stories.size()) > limit) {
    r.violations.push_back("exceeds " + std::to_string(limit) + " slots");
  }

  std::set<std::string> seen;
  for (const StoryRef& st : s.stories) {
    if (st.share_id.empty()) {
      r.violations.push_back("empty share_id");
    } else if (!seen.insert(st.share_id).second) {
      r.violations.push_back("duplicate story: " + st.share_id);
    }
    if (st.section != s.section) {
      r.violations.push_back("section mismatch for story: " + st.share_id);
    }
  }
  return r;
}

// Additionally checks that source_domain agrees with the registrable domain
// of resolved_url wherever resolution has happened.
inline ValidationResult validate_snapshot(const Snapshot& s, const PublicSuffixList& psl) {
  ValidationResult r = validate_snapshot(s);
  for (const StoryRef& st : s.stories) {
    if (st.resolved_url.empty()) continue;
    std::string expect = registrable_domain_of_url(st.resolved_url, psl);
    if (st.source_domain != expect) {
      r.violations.push_back("source_domain mismatch for story: " + st.share_id);
    }
  }
  return r;
}

// Append-only sequence of snapshots; the unit of analysis for all content
// metrics. Immutable value semantics; mutate only under exclusive access.
struct ObservationLog {
  std::vector<Snapshot> snapshots;
  std::map<std::string, std::string> metadata;

  bool operator==(const ObservationLog&) const = default;

  // "trending"/"top" when homogeneous, otherwise "mixed". An empty log
  // reports its metadata tag, defaulting to "mixed".
  std::string section_tag() const {
    if (snapshots.empty()) {
      auto it = metadata.find("section");
      return it == metadata.end() ? "mixed" : it->second;
    }
    Section first = snapshots.front().section;
    for (const Snapshot& s : snapshots) {
      if (s.section != first) return "mixed";
    }
    return std::string(to_string(first));
  }
};

// Appends one snapshot, enforcing validity and non-decreasing time.
inline ObservationLog& append_snapshot(ObservationLog& log, Snapshot s) {
  ValidationResult v = validate_snapshot(s);
  if (!v.ok()) {
    throw std::invalid_argument("invalid snapshot: " + v.violations.front());
  }
  if (!log.snapshots.empty() && s.timestamp < log.snapshots.back().timestamp) {
    throw std::invalid_argument("non-monotonic time: " + std::to_string(s.timestamp) +
                                " after " + std::to_string(log.snapshots.back().timestamp));
  }
  log.snapshots.push_back(std::move(s));
  return log;
}

inline ObservationLog filter_section(const ObservationLog& log, Section section) {
  ObservationLog out;
  out.metadata = log.metadata;
  out.metadata["section"] = std::string(to_string(section));
  for (const Snapshot& s : log.snapshots) {
    if (s.section == section) out.snapshots.push_back(s);
  }
  return out;
}

}  // namespace curaudit
