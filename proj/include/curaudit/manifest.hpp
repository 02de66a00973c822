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
#include <string>
#include <vector>

#include <json.hpp>

#include "curaudit/version.hpp"

namespace curaudit {

// Provenance record embedded in every output artifact. Timestamps are
// virtual-clock bounds of the run, not wall-clock times, so identical
// manifests imply byte-identical outputs.
struct RunManifest {
  std::string command_line;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::int64_t virtual_start = 0;
  std::int64_t virtual_end = 0;
};

inline void to_json(nlohmann::json& j, const RunManifest& m) {
  j = nlohmann::json{{"command_line", m.command_line},
                     {"config_digest", m.config_digest},
                     {"seed", m.seed},
                     {"tool_version", m.tool_version},
                     {"inputs", m.inputs},
                     {"outputs", m.outputs},
                     {"timestamps", nlohmann::json{{"virtual_start", m.virtual_start},
                                                   {"virtual_end", m.virtual_end}}}};
}

inline std::string manifest_csv_comment(const RunManifest& m) {
  return "# manifest " + nlohmann::json(m).dump() + "\n";
}

}  // namespace curaudit
