/*
 * Copyright 2026 The htetro Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// JSON run configuration. Units are spelled out in key names (_m, _rad, _s).
// Every section is optional and falls back to the library defaults; unknown
// keys, wrong types and out-of-range values are rejected with a diagnostic
// that names the offending path.

#ifndef HTETRO_CONFIG_H_
#define HTETRO_CONFIG_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "htetro/simulator.h"

namespace htetro {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

struct RunConfig {
  std::vector<Shape> shapes{Shape::kO};
  GeometricParams geometry;
  SimConfig sim;
  std::vector<Waypoint> waypoints = ReferenceCourse();
};

// Parses the text of a config document. Throws ConfigError.
RunConfig ParseRunConfig(const std::string& text);
RunConfig LoadRunConfig(const std::string& path);

// A waypoint file is a JSON array of waypoint objects. Throws ConfigError.
std::vector<Waypoint> ParseWaypoints(const std::string& text);
std::vector<Waypoint> LoadWaypoints(const std::string& path);

// "all" or a single letter. Throws ConfigError.
std::vector<Shape> ParseShapeList(const std::string& text);

// Serializes `config` back to a document ParseRunConfig accepts.
std::string DumpRunConfig(const RunConfig& config);

}  // namespace htetro

#endif  // HTETRO_CONFIG_H_
