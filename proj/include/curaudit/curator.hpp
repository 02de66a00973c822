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
#include <memory>
#include <stdexcept>
#include <string>

#include "curaudit/core.hpp"
#include "curaudit/log_io.hpp"
#include "curaudit/sim.hpp"

namespace curaudit {

// Backend the probes run against: the simulator, a replayed observation
// log, or a user-supplied adapter. Probes drive a virtual clock and pass
// `now` explicitly; implementations must not sleep.
class Curator {
 public:
  virtual ~Curator() = default;
  virtual Snapshot serve(Section section, const DeviceProfile& device,
                         const GeoLocation& location, const std::string& session_id,
                         std::int64_t now) = 0;
  virtual void open_session(const std::string& session_id, std::int64_t now) = 0;
  virtual void close_session(const std::string& session_id, std::int64_t now) = 0;
  // Smallest poll spacing the backend supports, in seconds.
  virtual std::int64_t min_poll_granularity() const = 0;
  virtual std::string config_digest() const = 0;
  // Clean-profile baseline the probes compare against.
  virtual GeoLocation control_location() const = 0;
  virtual std::string control_session() const = 0;
};

// Simulator adapter. serve/open advance the virtual clock as needed, so
// probes can simply poll at increasing times.
class SimCurator final : public Curator {
 public:
  explicit SimCurator(CuratorConfig cfg, std::int64_t start_time = 0)
      : sim_(std::move(cfg), start_time) {}

  Snapshot serve(Section section, const DeviceProfile& device, const GeoLocation& location,
                 const std::string& session_id, std::int64_t now) override {
    sim_.advance(now);
    return sim_.serve(section, device, location, session_id, now);
  }
  void open_session(const std::string& session_id, std::int64_t now) override {
    sim_.advance(now);
    sim_.open_session(session_id, now);
  }
  void close_session(const std::string& session_id, std::int64_t /*now*/) override {
    sim_.close_session(session_id);
  }
  std::int64_t min_poll_granularity() const override { return 1; }
  std::string config_digest() const override { return curaudit::config_digest(sim_.config()); }
  GeoLocation control_location() const override { return sim_.config().control_location; }
  std::string control_session() const override { return sim_.config().control_session_id; }

  Simulator& sim() { return sim_; }
  const Simulator& sim() const { return sim_; }

 private:
  Simulator sim_;
};

// Replays a persisted log: serve() returns the latest recorded snapshot of
// the section at or before `now`, ignoring device and location. Lets every
// probe rerun against stored data.
class LogReplayCurator final : public Curator {
 public:
  explicit LogReplayCurator(ObservationLog log) : log_(std::move(log)) {
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(serialize_log(log_))));
    digest_ = hex;
  }

  Snapshot serve(Section section, const DeviceProfile&, const GeoLocation&,
                 const std::string& session_id, std::int64_t now) override {
    const Snapshot* best = nullptr;
    for (const Snapshot& s : log_.snapshots) {
      if (s.section != section) continue;
      if (s.timestamp > now) break;
      best = &s;
    }
    if (best == nullptr) {
      throw std::runtime_error("no recorded snapshot at or before time " + std::to_string(now));
    }
    Snapshot out = *best;
    out.run_id = session_id;
    return out;
  }
  void open_session(const std::string&, std::int64_t) override {}
  void close_session(const std::string&, std::int64_t) override {}
  std::int64_t min_poll_granularity() const override { return 1; }
  std::string config_digest() const override { return digest_; }
  GeoLocation control_location() const override {
    return log_.snapshots.empty() ? GeoLocation{} : log_.snapshots.front().location;
  }
  std::string control_session() const override { return "control"; }

 private:
  ObservationLog log_;
  std::string digest_;
};

}  // namespace curaudit
