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
#include <stdexcept>
#include <string>
#include <string_view>

namespace curaudit {

inline constexpr std::int64_t kMinute = 60;
inline constexpr std::int64_t kHour = 3600;
inline constexpr std::int64_t kDay = 86400;

// Hour-of-day bucket (0..23) of a UTC timestamp shifted into a display
// timezone. Negative timestamps are handled with floor semantics.
inline int hour_of_day(std::int64_t ts_utc, int tz_offset_minutes) {
  std::int64_t shifted = ts_utc + static_cast<std::int64_t>(tz_offset_minutes) * kMinute;
  std::int64_t sec = ((shifted % kDay) + kDay) % kDay;
  return static_cast<int>(sec / kHour);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t minute_index(std::int64_t ts) { return floor_div(ts, kMinute); }

// Parses "90s", "15m", "24h", "62d" or a bare integer (seconds) into seconds.
inline std::int64_t parse_duration(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty duration");
  std::int64_t factor = 1;
  switch (text.back()) {
    case 's': factor = 1; text.remove_suffix(1); break;
    case 'm': factor = kMinute; text.remove_suffix(1); break;
    case 'h': factor = kHour; text.remove_suffix(1); break;
    case 'd': factor = kDay; text.remove_suffix(1); break;
    default: break;
  }
  if (text.empty()) throw std::invalid_argument("empty duration value");
  std::size_t pos = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(std::string(text), &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad duration: " + std::string(text));
  }
  if (pos != text.size() || value < 0) {
    throw std::invalid_argument("bad duration: " + std::string(text));
  }
  return value * factor;
}

}  // namespace curaudit
