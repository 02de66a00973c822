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
#include <vector>

#include <json.hpp>

#include "curaudit/core.hpp"
#include "curaudit/log_io.hpp"

namespace curaudit {

// Default location set for the localization probe: the 50 US state capitals.
inline const std::vector<GeoLocation>& us_state_capitals() {
  static const std::vector<GeoLocation> capitals = {
      {32.3777, -86.3000, "Montgomery AL"},   {58.3019, -134.4197, "Juneau AK"},
      {33.4484, -112.0740, "Phoenix AZ"},     {34.7465, -92.2896, "Little Rock AR"},
      {38.5816, -121.4944, "Sacramento CA"},  {39.7392, -104.9903, "Denver CO"},
      {41.7658, -72.6734, "Hartford CT"},     {39.1582, -75.5244, "Dover DE"},
      {30.4383, -84.2807, "Tallahassee FL"},  {33.7490, -84.3880, "Atlanta GA"},
      {21.3099, -157.8581, "Honolulu HI"},    {43.6150, -116.2023, "Boise ID"},
      {39.7817, -89.6501, "Springfield IL"},  {39.7684, -86.1581, "Indianapolis IN"},
      {41.5868, -93.6250, "Des Moines IA"},   {39.0473, -95.6752, "Topeka KS"},
      {38.2009, -84.8733, "Frankfort KY"},    {30.4515, -91.1871, "Baton Rouge LA"},
      {44.3106, -69.7795, "Augusta ME"},      {38.9784, -76.4922, "Annapolis MD"},
      {42.3601, -71.0589, "Boston MA"},       {42.7325, -84.5555, "Lansing MI"},
      {44.9537, -93.0900, "Saint Paul MN"},   {32.2988, -90.1848, "Jackson MS"},
      {38.5767, -92.1735, "Jefferson City MO"}, {46.5891, -112.0391, "Helena MT"},
      {40.8136, -96.7026, "Lincoln NE"},      {39.1638, -119.7674, "Carson City NV"},
      {43.2081, -71.5376, "Concord NH"},      {40.2206, -74.7597, "Trenton NJ"},
      {35.6870, -105.9378, "Santa Fe NM"},    {42.6526, -73.7562, "Albany NY"},
      {35.7796, -78.6382, "Raleigh NC"},      {46.8083, -100.7837, "Bismarck ND"},
      {39.9612, -82.9988, "Columbus OH"},     {35.4676, -97.5164, "Oklahoma City OK"},
      {44.9429, -123.0351, "Salem OR"},       {40.2732, -76.8867, "Harrisburg PA"},
      {41.8240, -71.4128, "Providence RI"},   {34.0007, -81.0348, "Columbia SC"},
      {44.3683, -100.3510, "Pierre SD"},      {36.1627, -86.7816, "Nashville TN"},
      {30.2672, -97.7431, "Austin TX"},       {40.7608, -111.8910, "Salt Lake City UT"},
      {44.2601, -72.5754, "Montpelier VT"},   {37.5407, -77.4360, "Richmond VA"},
      {47.0379, -122.9007, "Olympia WA"},     {38.3498, -81.6326, "Charleston WV"},
      {43.0747, -89.3844, "Madison WI"},      {41.1400, -104.8202, "Cheyenne WY"},
  };
  return capitals;
}

inline std::vector<GeoLocation> locations_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("locations document must be an array");
  std::vector<GeoLocation> out;
  for (const nlohmann::json& item : j) {
    GeoLocation g = item.get<GeoLocation>();
    if (!g.in_range()) throw std::invalid_argument("location out of range: " + g.label);
    out.push_back(std::move(g));
  }
  return out;
}

inline std::vector<GeoLocation> locations_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read locations file: " + path);
  nlohmann::json j;
  in >> j;
  return locations_from_json(j);
}

}  // namespace curaudit
