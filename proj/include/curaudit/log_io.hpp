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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/csv.hpp"

namespace curaudit {

inline constexpr std::string_view kLogSchema = "curation-audit/1";

struct ParseError : std::runtime_error {
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  int line;
};

inline void to_json(nlohmann::json& j, const GeoLocation& g) {
  j = nlohmann::json{{"latitude", g.latitude},
                     {"longitude", g.longitude},
                     {"label", g.label}};
}

inline void from_json(const nlohmann::json& j, GeoLocation& g) {
  j.at("latitude").get_to(g.latitude);
  j.at("longitude").get_to(g.longitude);
  g.label = j.value("label", std::string());
}

inline void to_json(nlohmann::json& j, const DeviceProfile& d) {
  j = nlohmann::json{{"screen_class", to_string(d.screen_class)},
                     {"blocked_sources", d.blocked_sources},
                     {"session_persistent", d.session_persistent},
                     {"timezone_offset_minutes", d.timezone_offset_minutes}};
}

inline void from_json(const nlohmann::json& j, DeviceProfile& d) {
  d.screen_class = screen_class_from_string(j.at("screen_class").get<std::string>());
  d.blocked_sources = j.at("blocked_sources").get<std::set<std::string>>();
  j.at("session_persistent").get_to(d.session_persistent);
  j.at("timezone_offset_minutes").get_to(d.timezone_offset_minutes);
}

inline void to_json(nlohmann::json& j, const StoryRef& s) {
  j = nlohmann::json{{"share_id", s.share_id},
                     {"resolved_url", s.resolved_url},
                     {"source_domain", s.source_domain},
                     {"headline", s.headline},
                     {"section", to_string(s.section)}};
}

inline void from_json(const nlohmann::json& j, StoryRef& s) {
  j.at("share_id").get_to(s.share_id);
  j.at("resolved_url").get_to(s.resolved_url);
  j.at("source_domain").get_to(s.source_domain);
  j.at("headline").get_to(s.headline);
  s.section = section_from_string(j.at("section").get<std::string>());
}

inline void to_json(nlohmann::json& j, const Snapshot& s) {
  j = nlohmann::json{{"timestamp", s.timestamp},
                     {"device", s.device},
                     {"location", s.location},
                     {"section", to_string(s.section)},
                     {"stories", s.stories},
                     {"run_id", s.run_id}};
}

inline void from_json(const nlohmann::json& j, Snapshot& s) {
  j.at("timestamp").get_to(s.timestamp);
  j.at("device").get_to(s.device);
  j.at("location").get_to(s.location);
  s.section = section_from_string(j.at("section").get<std::string>());
  j.at("stories").get_to(s.stories);
  j.at("run_id").get_to(s.run_id);
}

// Line-delimited encoding: one header object, then one JSON object per
// snapshot. Round-trips field-for-field.
inline std::string serialize_log(const ObservationLog& log) {
  nlohmann::json header{{"schema", kLogSchema},
                        {"section", log.section_tag()},
                        {"metadata", log.metadata}};
  std::string out = header.dump();
  out += '\n';
  for (const Snapshot& s : log.snapshots) {
    out += nlohmann::json(s).dump();
    out += '\n';
  }
  return out;
}

inline ObservationLog parse_log(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  std::string line;
  int line_no = 0;
  ObservationLog log;
  bool saw_header = false;
  std::int64_t prev_ts = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("malformed record: ") + e.what());
    }
    if (!saw_header) {
      std::string schema = j.value("schema", std::string());
      if (schema != kLogSchema) {
        throw ParseError(line_no, "unknown schema version: " + schema);
      }
      if (j.contains("metadata")) {
        log.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
      }
      saw_header = true;
      continue;
    }
    Snapshot s;
    try {
      s = j.get<Snapshot>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("bad snapshot: ") + e.what());
    }
    ValidationResult v = validate_snapshot(s);
    if (!v.ok()) throw ParseError(line_no, "invalid snapshot: " + v.violations.front());
    if (!log.snapshots.empty() && s.timestamp < prev_ts) {
      throw ParseError(line_no, "non-monotonic time");
    }
    prev_ts = s.timestamp;
    log.snapshots.push_back(std::move(s));
  }
  if (!saw_header) throw ParseError(1, "missing header");
  return log;
}

inline void write_log_file(const std::string& path, const ObservationLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_log(log);
}

inline ObservationLog read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_log(buf.str());
}

// Flat CSV of stories: timestamp, 1-based rank, then story fields.
inline std::string log_to_csv(const ObservationLog& log) {
  std::string out = "timestamp,rank,share_id,resolved_url,source_domain,headline\n";
  for (const Snapshot& s : log.snapshots) {
    for (std::size_t r = 0; r < s.stories.size(); ++r) {
      const StoryRef& st = s.stories[r];
      out += csv_join({std::to_string(s.timestamp), std::to_string(r + 1),
                       st.share_id, st.resolved_url, st.source_domain, st.headline});
    }
  }
  return out;
}

}  // namespace curaudit
