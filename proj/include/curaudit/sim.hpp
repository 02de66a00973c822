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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/rng.hpp"
#include "curaudit/timeutil.hpp"

namespace curaudit {

// Deterministic, seedable simulated curation platform. It reproduces the
// mechanisms the probes must recover: a stochastic master-list update
// process for the trending section, wholesale editorial refreshes at
// scheduled hours, stale open sessions, blocked-source filtering, screen
// truncation, and optional localization/personalization injection.
//
// All randomness derives from one master seed through fixed stream tags:
//   stream seed = splitmix64(config.seed ^ tag)
// feeding std::mt19937_64. Draws use Rng's fixed arithmetic, so the whole
// trajectory is reproducible from (config, seed) alone, independent of how
// advance() calls are spaced. Draw order per stream:
//   event stream     one draw per inter-arrival (exponential or empirical;
//                    fixed intervals consume none)
//   content stream   per trending event: u (reorder?); reorder -> two
//                    uniform_int draws; insert -> source weighted_index,
//                    then rank uniform_int
//   editorial stream per day: k weighted hour draws without replacement;
//                    per refresh: top_list_len source weighted_index draws
//   init stream      trending_list_len + top_list_len source draws
inline constexpr std::uint64_t kInitStreamTag = 0x696e6974ULL;         // "init"
inline constexpr std::uint64_t kTrendingEventTag = 0x6576656e74ULL;    // "event"
inline constexpr std::uint64_t kStoryStreamTag = 0x73746f7279ULL;      // "story"
inline constexpr std::uint64_t kEditorialStreamTag = 0x65646974ULL;    // "edit"
inline constexpr std::uint64_t kPersonalizationTag = 0x70657273ULL;    // "pers"

struct UpdateProcessSpec {
  enum class Kind { kFixed, kExponential, kEmpirical };
  Kind kind = Kind::kExponential;
  double minutes = 20.0;  // fixed interval, or exponential mean
  std::vector<double> samples_minutes;
};

struct LocalizationMode {
  bool inject = false;
  double fraction = 0.0;  // of slots replaced per non-control location
};

struct PersonalizationMode {
  bool inject = false;
  double probability = 0.0;  // per-serve replacement probability
};

// Default pool: ten named sources whose draw weights match the audited
// trending-section shares, remainder split evenly over 73 synthetic sources
// (83 sources total).
inline std::vector<std::pair<std::string, double>> default_source_pool() {
  std::vector<std::pair<std::string, double>> pool = {
      {"cnn.com", 16.1},          {"foxnews.com", 15.9},
      {"people.com", 13.3},       {"buzzfeed.com", 8.1},
      {"politico.com", 6.2},      {"huffpost.com", 3.9},
      {"washingtonpost.com", 3.6},{"vanityfair.com", 3.4},
      {"newsweek.com", 2.5},      {"eonline.com", 1.9},
  };
  const double rest = 25.1 / 73.0;
  char name[32];
  for (int i = 1; i <= 73; ++i) {
    std::snprintf(name, sizeof(name), "source%02d.example", i);
    pool.emplace_back(name, rest);
  }
  return pool;
}

struct CuratorConfig {
  std::uint64_t seed = 1;
  UpdateProcessSpec trending_update_process;
  int trending_list_len = 6;
  int top_list_len = 5;
  std::vector<std::pair<int, double>> editorial_update_hours = {
      {7, 1.0}, {14, 1.0}, {19, 1.0}, {23, 1.0}};
  int editorial_updates_per_day = 4;
  std::vector<std::pair<std::string, double>> source_pool = default_source_pool();
  LocalizationMode localization_mode;
  PersonalizationMode personalization_mode;
  bool session_staleness = true;
  double reorder_probability = 0.3;
  GeoLocation control_location{37.3349, -122.0090, "cupertino"};
  std::string control_session_id = "control";
  std::vector<std::string> headline_corpus;

  void validate() const {
    if (trending_list_len < 1 || top_list_len < 1) {
      throw std::invalid_argument("list lengths must be >= 1");
    }
    if (trending_list_len > section_capacity(Section::kTrending) ||
        top_list_len > section_capacity(Section::kTop)) {
      throw std::invalid_argument("list length exceeds section capacity");
    }
    switch (trending_update_process.kind) {
      case UpdateProcessSpec::Kind::kFixed:
      case UpdateProcessSpec::Kind::kExponential:
        if (trending_update_process.minutes <= 0.0) {
          throw std::invalid_argument("update process minutes must be > 0");
        }
        break;
      case UpdateProcessSpec::Kind::kEmpirical:
        if (trending_update_process.samples_minutes.empty()) {
          throw std::invalid_argument("empirical process needs samples");
        }
        for (double s : trending_update_process.samples_minutes) {
          if (s <= 0.0) throw std::invalid_argument("empirical samples must be > 0");
        }
        break;
    }
    if (source_pool.empty()) throw std::invalid_argument("source_pool is empty");
    bool positive = false;
    for (const auto& [src, w] : source_pool) {
      if (w < 0.0) throw std::invalid_argument("negative source weight: " + src);
      positive = positive || w > 0.0;
    }
    if (!positive) throw std::invalid_argument("source_pool has no positive weight");
    if (!editorial_update_hours.empty()) {
      bool pos = false;
      for (const auto& [h, w] : editorial_update_hours) {
        if (h < 0 || h > 23) throw std::invalid_argument("editorial hour out of range");
        if (w < 0.0) throw std::invalid_argument("negative editorial weight");
        pos = pos || w > 0.0;
      }
      if (!pos) throw std::invalid_argument("editorial hours have no positive weight");
    }
    if (editorial_updates_per_day < 0) {
      throw std::invalid_argument("editorial_updates_per_day must be >= 0");
    }
    if (localization_mode.fraction < 0.0 || localization_mode.fraction > 1.0) {
      throw std::invalid_argument("localization fraction must be in [0,1]");
    }
    if (personalization_mode.probability < 0.0 || personalization_mode.probability > 1.0) {
      throw std::invalid_argument("personalization probability must be in [0,1]");
    }
    if (reorder_probability < 0.0 || reorder_probability > 1.0) {
      throw std::invalid_argument("reorder_probability must be in [0,1]");
    }
    if (!control_location.in_range()) {
      throw std::invalid_argument("control_location out of range");
    }
  }
};

inline void to_json(nlohmann::json& j, const UpdateProcessSpec& p) {
  const char* kind = p.kind == UpdateProcessSpec::Kind::kFixed ? "fixed"
                     : p.kind == UpdateProcessSpec::Kind::kExponential ? "exponential"
                                                                       : "empirical";
  j = nlohmann::json{{"kind", kind},
                     {"minutes", p.minutes},
                     {"samples_minutes", p.samples_minutes}};
}

inline void from_json(const nlohmann::json& j, UpdateProcessSpec& p) {
  std::string kind = j.value("kind", std::string("exponential"));
  if (kind == "fixed") p.kind = UpdateProcessSpec::Kind::kFixed;
  else if (kind == "exponential") p.kind = UpdateProcessSpec::Kind::kExponential;
  else if (kind == "empirical") p.kind = UpdateProcessSpec::Kind::kEmpirical;
  else throw std::invalid_argument("unknown update process kind: " + kind);
  p.minutes = j.value("minutes", 20.0);
  p.samples_minutes = j.value("samples_minutes", std::vector<double>{});
}

inline void to_json(nlohmann::json& j, const LocalizationMode& m) {
  if (m.inject) j = nlohmann::json{{"kind", "inject"}, {"fraction", m.fraction}};
  else j = nlohmann::json{{"kind", "none"}};
}

inline void from_json(const nlohmann::json& j, LocalizationMode& m) {
  std::string kind = j.value("kind", std::string("none"));
  if (kind == "none") m = LocalizationMode{};
  else if (kind == "inject") m = LocalizationMode{true, j.value("fraction", 0.17)};
  else throw std::invalid_argument("unknown localization_mode: " + kind);
}

inline void to_json(nlohmann::json& j, const PersonalizationMode& m) {
  if (m.inject) j = nlohmann::json{{"kind", "inject"}, {"probability", m.probability}};
  else j = nlohmann::json{{"kind", "none"}};
}

inline void from_json(const nlohmann::json& j, PersonalizationMode& m) {
  std::string kind = j.value("kind", std::string("none"));
  if (kind == "none") m = PersonalizationMode{};
  else if (kind == "inject") m = PersonalizationMode{true, j.value("probability", 0.1)};
  else throw std::invalid_argument("unknown personalization_mode: " + kind);
}

inline void to_json(nlohmann::json& j, const CuratorConfig& c) {
  nlohmann::json loc;
  loc["latitude"] = c.control_location.latitude;
  loc["longitude"] = c.control_location.longitude;
  loc["label"] = c.control_location.label;
  j = nlohmann::json{{"seed", c.seed},
                     {"trending_update_process", c.trending_update_process},
                     {"trending_list_len", c.trending_list_len},
                     {"top_list_len", c.top_list_len},
                     {"editorial_update_hours", c.editorial_update_hours},
                     {"editorial_updates_per_day", c.editorial_updates_per_day},
                     {"source_pool", c.source_pool},
                     {"localization_mode", c.localization_mode},
                     {"personalization_mode", c.personalization_mode},
                     {"session_staleness", c.session_staleness},
                     {"reorder_probability", c.reorder_probability},
                     {"control_location", loc},
                     {"control_session_id", c.control_session_id},
                     {"headline_corpus", c.headline_corpus}};
}

inline void from_json(const nlohmann::json& j, CuratorConfig& c) {
  c = CuratorConfig{};
  c.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("trending_update_process")) {
    j.at("trending_update_process").get_to(c.trending_update_process);
  }
  c.trending_list_len = j.value("trending_list_len", 6);
  c.top_list_len = j.value("top_list_len", 5);
  if (j.contains("editorial_update_hours")) {
    c.editorial_update_hours =
        j.at("editorial_update_hours").get<std::vector<std::pair<int, double>>>();
  }
  c.editorial_updates_per_day = j.value("editorial_updates_per_day", 4);
  if (j.contains("source_pool")) {
    c.source_pool = j.at("source_pool").get<std::vector<std::pair<std::string, double>>>();
  }
  if (j.contains("localization_mode")) j.at("localization_mode").get_to(c.localization_mode);
  if (j.contains("personalization_mode")) j.at("personalization_mode").get_to(c.personalization_mode);
  c.session_staleness = j.value("session_staleness", true);
  c.reorder_probability = j.value("reorder_probability", 0.3);
  if (j.contains("control_location")) {
    const nlohmann::json& loc = j.at("control_location");
    c.control_location.latitude = loc.value("latitude", 37.3349);
    c.control_location.longitude = loc.value("longitude", -122.0090);
    c.control_location.label = loc.value("label", std::string("cupertino"));
  }
  c.control_session_id = j.value("control_session_id", std::string("control"));
  c.headline_corpus = j.value("headline_corpus", std::vector<std::string>{});
}

// Parses and validates a config document.
inline CuratorConfig parse_curator_config(const nlohmann::json& j) {
  CuratorConfig cfg = j.get<CuratorConfig>();
  cfg.validate();
  return cfg;
}

inline std::string config_digest(const CuratorConfig& cfg) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(nlohmann::json(cfg).dump())));
  return hex;
}

struct SessionCache {
  std::vector<StoryRef> trending;
  std::vector<StoryRef> top;
};

struct MasterState {
  std::vector<StoryRef> trending_master;
  std::vector<StoryRef> top_master;
  std::int64_t last_trending_update = 0;
  std::int64_t last_top_update = 0;
  std::int64_t last_advance = 0;
  std::map<std::string, SessionCache> session_cache;  // only under staleness
  std::set<std::string> open_sessions;
  std::int64_t trending_version = 0;
  std::int64_t trending_mutations = 0;
  std::int64_t trending_inserts = 0;
  std::int64_t story_seq = 0;
};

class Simulator {
 public:
  explicit Simulator(CuratorConfig cfg, std::int64_t start_time = 0)
      : cfg_(std::move(cfg)),
        start_(start_time),
        event_rng_(splitmix64(cfg_.seed ^ kTrendingEventTag)),
        story_rng_(splitmix64(cfg_.seed ^ kStoryStreamTag)),
        editorial_rng_(splitmix64(cfg_.seed ^ kEditorialStreamTag)) {
    cfg_.validate();
    for (const auto& [src, w] : cfg_.source_pool) pool_weights_.push_back(w);
    Rng init_rng(splitmix64(cfg_.seed ^ kInitStreamTag));
    for (int i = 0; i < cfg_.trending_list_len; ++i) {
      state_.trending_master.push_back(make_story(Section::kTrending, init_rng));
    }
    for (int i = 0; i < cfg_.top_list_len; ++i) {
      state_.top_master.push_back(make_story(Section::kTop, init_rng));
    }
    state_.last_trending_update = start_;
    state_.last_top_update = start_;
    state_.last_advance = start_;
    next_trending_time_ = static_cast<double>(start_) + 60.0 * draw_interval_minutes();
    editorial_day_ = floor_div(start_, kDay);
  }

  const CuratorConfig& config() const { return cfg_; }
  const MasterState& state() const { return state_; }
  std::int64_t start_time() const { return start_; }

  // Fires every update event in (last_advance, now]. Deterministic given
  // (config, seed, now).
  void advance(std::int64_t now) {
    if (now < state_.last_advance) throw std::invalid_argument("time went backwards");
    while (true) {
      while (editorial_queue_.empty() && editorial_day_ * kDay <= now) {
        schedule_editorial_day(editorial_day_++);
      }
      bool tr_due = next_trending_time_ <= static_cast<double>(now);
      bool ed_due = !editorial_queue_.empty() && editorial_queue_.front() <= now;
      if (!tr_due && !ed_due) break;
      if (tr_due &&
          (!ed_due || next_trending_time_ <= static_cast<double>(editorial_queue_.front()))) {
        fire_trending_event();
      } else {
        fire_editorial_event();
      }
    }
    state_.last_advance = now;
  }

  // Serves the list a device sees at `now`: session base list (frozen copy
  // under staleness), blocked sources removed, localization then
  // personalization injection, then screen truncation (Trending only; the
  // editorial section is never truncated or adapted).
  Snapshot serve(Section section, const DeviceProfile& device, const GeoLocation& location,
                 const std::string& session_id, std::int64_t now) const {
    if (now != state_.last_advance) {
      throw std::logic_error("state not advanced to serve time");
    }
    const std::vector<StoryRef>* trending = &state_.trending_master;
    const std::vector<StoryRef>* top = &state_.top_master;
    if (cfg_.session_staleness) {
      auto it = state_.session_cache.find(session_id);
      if (it == state_.session_cache.end()) {
        throw std::runtime_error("no open session: " + session_id);
      }
      trending = &it->second.trending;
      top = &it->second.top;
    }
    std::vector<StoryRef> list = (section == Section::kTrending) ? *trending : *top;
    std::erase_if(list, [&](const StoryRef& s) {
      return device.blocked_sources.count(s.source_domain) > 0;
    });
    if (section == Section::kTrending) {
      if (cfg_.localization_mode.inject &&
          !location.same_point(cfg_.control_location) && !list.empty()) {
        // Replace the lowest-ranked ceil(fraction * len) slots.
        int len = static_cast<int>(list.size());
        int k = std::min(len, static_cast<int>(std::ceil(cfg_.localization_mode.fraction * len)));
        for (int slot = len - k; slot < len; ++slot) {
          list[static_cast<std::size_t>(slot)] = local_story(location, slot);
        }
      }
      if (cfg_.personalization_mode.inject && session_id != cfg_.control_session_id &&
          !list.empty()) {
        Rng rng(splitmix64(cfg_.seed ^ kPersonalizationTag ^ fnv1a64(session_id) ^
                           static_cast<std::uint64_t>(now)));
        if (rng.next_double() < cfg_.personalization_mode.probability) {
          auto slot = rng.uniform_int(0, static_cast<std::int64_t>(list.size()) - 1);
          list[static_cast<std::size_t>(slot)] = personal_story(session_id, now);
        }
      }
      if (static_cast<int>(list.size()) > device.trending_slots()) {
        list.resize(static_cast<std::size_t>(device.trending_slots()));
      }
    }
    Snapshot snap;
    snap.timestamp = now;
    snap.device = device;
    snap.location = location;
    snap.section = section;
    snap.stories = std::move(list);
    snap.run_id = session_id;
    return snap;
  }

  // Freezes a copy of the current master lists for the session when
  // staleness is on; models keeping the app open.
  void open_session(const std::string& id, std::int64_t now) {
    if (now != state_.last_advance) {
      throw std::logic_error("advance state before opening session");
    }
    if (!state_.open_sessions.insert(id).second) {
      throw std::runtime_error("session already open: " + id);
    }
    if (cfg_.session_staleness) {
      state_.session_cache[id] = SessionCache{state_.trending_master, state_.top_master};
    }
  }

  // Discards the frozen copy; models force-closing the app.
  void close_session(const std::string& id) {
    if (state_.open_sessions.erase(id) == 0) {
      throw std::runtime_error("unknown session: " + id);
    }
    state_.session_cache.erase(id);
  }

 private:
  double draw_interval_minutes() {
    switch (cfg_.trending_update_process.kind) {
      case UpdateProcessSpec::Kind::kFixed:
        return cfg_.trending_update_process.minutes;
      case UpdateProcessSpec::Kind::kExponential:
        return event_rng_.exponential(cfg_.trending_update_process.minutes);
      case UpdateProcessSpec::Kind::kEmpirical: {
        const auto& samples = cfg_.trending_update_process.samples_minutes;
        auto idx = event_rng_.uniform_int(0, static_cast<std::int64_t>(samples.size()) - 1);
        return samples[static_cast<std::size_t>(idx)];
      }
    }
    return cfg_.trending_update_process.minutes;
  }

  StoryRef make_story(Section section, Rng& rng) {
    std::size_t idx = rng.weighted_index(pool_weights_);
    const std::string& src = cfg_.source_pool[idx].first;
    std::int64_t seq = ++state_.story_seq;
    StoryRef s;
    s.share_id = "sim-" + std::to_string(seq);
    s.resolved_url = "https://" + src + "/story/" + std::to_string(seq);
    s.source_domain = src;
    if (cfg_.headline_corpus.empty()) {
      s.headline = "Story " + std::to_string(seq) + " from " + src;
    } else {
      s.headline = cfg_.headline_corpus[static_cast<std::size_t>(
          seq % static_cast<std::int64_t>(cfg_.headline_corpus.size()))];
    }
    s.section = section;
    return s;
  }

  void fire_trending_event() {
    double t = next_trending_time_;
    auto& m = state_.trending_master;
    const int len = static_cast<int>(m.size());
    double u = story_rng_.next_double();
    if (u < cfg_.reorder_probability && len >= 2) {
      auto i = story_rng_.uniform_int(0, len - 1);
      auto j = story_rng_.uniform_int(0, len - 2);
      if (j >= i) ++j;
      std::swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)]);
    } else {
      StoryRef s = make_story(Section::kTrending, story_rng_);
      auto rank = story_rng_.uniform_int(0, len - 1);  // uniform over slots
      m.insert(m.begin() + rank, std::move(s));
      m.pop_back();
      ++state_.trending_inserts;
    }
    ++state_.trending_mutations;
    ++state_.trending_version;
    state_.last_trending_update = static_cast<std::int64_t>(std::llround(t));
    next_trending_time_ += 60.0 * draw_interval_minutes();
  }

  void schedule_editorial_day(std::int64_t day) {
    if (cfg_.editorial_update_hours.empty() || cfg_.editorial_updates_per_day == 0) return;
    auto remaining = cfg_.editorial_update_hours;
    int k = std::min<int>(cfg_.editorial_updates_per_day,
                          static_cast<int>(remaining.size()));
    std::vector<int> hours;
    for (int i = 0; i < k; ++i) {
      std::vector<double> w;
      w.reserve(remaining.size());
      double positive = 0.0;
      for (const auto& [h, weight] : remaining) {
        w.push_back(weight);
        positive += weight;
      }
      if (positive <= 0.0) break;  // zero-weight hours are never drawn
      std::size_t idx = editorial_rng_.weighted_index(w);
      hours.push_back(remaining[idx].first);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::sort(hours.begin(), hours.end());
    for (int h : hours) {
      std::int64_t t = day * kDay + static_cast<std::int64_t>(h) * kHour;
      if (t > start_) editorial_queue_.push_back(t);
    }
  }

  void fire_editorial_event() {
    std::int64_t t = editorial_queue_.front();
    editorial_queue_.pop_front();
    state_.top_master.clear();
    for (int i = 0; i < cfg_.top_list_len; ++i) {
      state_.top_master.push_back(make_story(Section::kTop, editorial_rng_));
    }
    state_.last_top_update = t;
  }

  static std::string location_slug(const GeoLocation& loc) {
    std::string key = loc.label;
    if (key.empty()) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.4f_%.4f", loc.latitude, loc.longitude);
      key = buf;
    }
    std::string slug;
    for (unsigned char c : key) {
      if (std::isalnum(c)) slug += static_cast<char>(std::tolower(c));
      else slug += '-';
    }
    return slug;
  }

  StoryRef local_story(const GeoLocation& loc, int slot) const {
    std::string slug = location_slug(loc);
    std::string tag = "v" + std::to_string(state_.trending_version) + "-s" + std::to_string(slot);
    StoryRef s;
    s.share_id = "loc-" + slug + "-" + tag;
    s.source_domain = "local-" + slug + ".example";
    s.resolved_url = "https://" + s.source_domain + "/story/" + tag;
    s.headline = "Local story " + tag + " near " + slug;
    s.section = Section::kTrending;
    return s;
  }

  StoryRef personal_story(const std::string& session_id, std::int64_t now) const {
    std::string tag = session_id + "-" + std::to_string(now);
    StoryRef s;
    s.share_id = "pers-" + tag;
    s.source_domain = "personal.example";
    s.resolved_url = "https://personal.example/story/" + tag;
    s.headline = "Personalized story " + tag;
    s.section = Section::kTrending;
    return s;
  }

  CuratorConfig cfg_;
  std::int64_t start_;
  MasterState state_;
  std::vector<double> pool_weights_;
  Rng event_rng_;
  Rng story_rng_;
  Rng editorial_rng_;
  double next_trending_time_ = 0.0;
  std::deque<std::int64_t> editorial_queue_;
  std::int64_t editorial_day_ = 0;
};

}  // namespace curaudit
