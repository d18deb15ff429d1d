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

#include "htetro/config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace htetro {
namespace {

using Json = nlohmann::json;

std::string Join(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& line : lines) {
    if (!out.empty()) out += "; ";
    out += line;
  }
  return out;
}

// Walks one object, collecting diagnostics instead of stopping at the first.
class Reader {
 public:
  Reader(const Json& node, std::string path,
         std::vector<std::string>* diagnostics)
      : node_(node), path_(std::move(path)), diagnostics_(diagnostics) {
    if (!node_.is_object()) Fail(path_, "expected an object");
  }

  // Reads a number into `out` if present; `positive` rejects values <= 0.
  void Number(const char* key, double* out, bool positive = false,
              bool required = false) {
    const Json* value = Find(key, required);
    if (value == nullptr) return;
    if (!value->is_number()) {
      Fail(Path(key), "expected a number");
      return;
    }
    const double v = value->get<double>();
    if (!std::isfinite(v) || (positive && v <= 0.0)) {
      Fail(Path(key), positive ? "must be a positive number" : "not finite");
      return;
    }
    *out = v;
  }

  void NonNegative(const char* key, double* out) {
    double v = *out;
    Number(key, &v);
    if (v < 0.0) {
      Fail(Path(key), "must be non-negative");
      return;
    }
    *out = v;
  }

  void Unsigned(const char* key, std::uint64_t* out) {
    const Json* value = Find(key, false);
    if (value == nullptr) return;
    if (!value->is_number_unsigned()) {
      Fail(Path(key), "expected a non-negative integer");
      return;
    }
    *out = value->get<std::uint64_t>();
  }

  const Json* Child(const char* key, bool required = false) {
    return Find(key, required);
  }

  std::string Path(const std::string& key) const { return path_ + "." + key; }

  // Reports keys that were never looked up.
  void Finish() {
    if (!node_.is_object()) return;
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) Fail(Path(item.key()), "unknown key");
    }
  }

  void Fail(const std::string& path, const std::string& message) {
    diagnostics_->push_back(path + ": " + message);
  }

 private:
  const Json* Find(const char* key, bool required) {
    seen_.insert(key);
    if (!node_.is_object() || !node_.contains(key)) {
      if (required) Fail(Path(key), "missing required key");
      return nullptr;
    }
    return &node_.at(key);
  }

  const Json& node_;
  std::string path_;
  std::vector<std::string>* diagnostics_;
  std::set<std::string> seen_;
};

void ReadPid(const Json& node, const std::string& path, PidGains* gains,
             std::vector<std::string>* diagnostics) {
  Reader r(node, path, diagnostics);
  r.Number("kp", &gains->kp, true);
  r.NonNegative("ki", &gains->ki);
  r.NonNegative("kd", &gains->kd);
  r.Finish();
}

Waypoint ReadWaypoint(const Json& node, const std::string& path,
                      std::vector<std::string>* diagnostics) {
  Waypoint w;
  Reader r(node, path, diagnostics);
  r.Number("x_m", &w.x, false, true);
  r.Number("y_m", &w.y, false, true);
  r.Number("theta_rad", &w.theta);
  r.Number("position_tolerance_m", &w.position_tolerance, true);
  r.Number("heading_tolerance_rad", &w.heading_tolerance, true);
  r.Finish();
  return w;
}

std::vector<Waypoint> ReadWaypoints(const Json& node, const std::string& path,
                                    std::vector<std::string>* diagnostics) {
  std::vector<Waypoint> out;
  if (!node.is_array()) {
    diagnostics->push_back(path + ": expected an array of waypoints");
    return out;
  }
  if (node.empty()) diagnostics->push_back(path + ": must not be empty");
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(
        ReadWaypoint(node[i], path + "[" + std::to_string(i) + "]", diagnostics));
  }
  return out;
}

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError({std::string("$: invalid JSON: ") + e.what()});
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Shape> ShapesOrDiagnose(const std::string& text,
                                    const std::string& path,
                                    std::vector<std::string>* diagnostics) {
  try {
    return ParseShapeList(text);
  } catch (const ConfigError& e) {
    diagnostics->push_back(path + ": " + e.diagnostics().front());
    return {};
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(Join(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

std::vector<Shape> ParseShapeList(const std::string& text) {
  if (text == "all" || text == "ALL") {
    return {kAllShapes.begin(), kAllShapes.end()};
  }
  const std::optional<Shape> shape = ParseShape(text);
  if (!shape) {
    throw ConfigError({"unknown shape '" + text +
                       "', expected one of I L Z O T S J or 'all'"});
  }
  return {*shape};
}

RunConfig ParseRunConfig(const std::string& text) {
  const Json doc = ParseJson(text);
  std::vector<std::string> diag;
  RunConfig config;
  Reader root(doc, "$", &diag);
  if (!doc.is_object()) throw ConfigError(diag);

  if (const Json* v = root.Child("schema_version", true)) {
    if (!v->is_number_integer() || v->get<int>() != kSchemaVersion) {
      root.Fail("$.schema_version",
                "unsupported version, expected " +
                    std::to_string(kSchemaVersion));
    }
  }
  if (const Json* v = root.Child("shape")) {
    if (!v->is_string()) {
      root.Fail("$.shape", "expected a string");
    } else {
      config.shapes = ShapesOrDiagnose(v->get<std::string>(), "$.shape", &diag);
    }
  }
  if (const Json* g = root.Child("geometry")) {
    Reader r(*g, "$.geometry", &diag);
    r.Number("wheel_radius_m", &config.geometry.wheel_radius, true);
    r.Number("wheel_offset_m", &config.geometry.wheel_offset, true);
    r.Number("module_length_m", &config.geometry.module_length, true);
    r.Finish();
  }
  ControllerConfig& ctl = config.sim.controller;
  if (const Json* c = root.Child("controller")) {
    Reader r(*c, "$.controller", &diag);
    r.Number("max_radius_m", &ctl.heading.max_radius, true);
    r.Number("max_wheel_rate_rad_s", &ctl.limits.max_wheel_rate, true);
    r.Number("max_steering_rate_rad_s", &ctl.steering.max_rate, true);
    r.Number("steering_arrival_tolerance_rad",
             &ctl.steering.arrival_tolerance, true);
    r.Number("cruise_speed_m_s", &ctl.cruise_speed, true);
    r.Number("approach_gain_per_s", &ctl.approach_gain, true);
    r.NonNegative("lookahead_m", &ctl.lookahead);
    if (const Json* p = r.Child("heading_pid")) {
      ReadPid(*p, "$.controller.heading_pid", &ctl.heading.pid, &diag);
    }
    if (const Json* p = r.Child("steering_pid")) {
      ReadPid(*p, "$.controller.steering_pid", &ctl.steering.pid, &diag);
    }
    if (const Json* v = r.Child("transient_law")) {
      const std::string law = v->is_string() ? v->get<std::string>() : "";
      if (law == "icr_path") {
        ctl.steering.law = TransientLaw::kIcrPath;
      } else if (law == "tangent_scaling") {
        ctl.steering.law = TransientLaw::kTangentScaling;
      } else {
        r.Fail("$.controller.transient_law",
               "expected \"icr_path\" or \"tangent_scaling\"");
      }
    }
    r.Finish();
  }
  SimConfig& sim = config.sim;
  if (const Json* s = root.Child("sim")) {
    Reader r(*s, "$.sim", &diag);
    r.Number("dt_s", &sim.dt, true);
    r.Number("max_time_s", &sim.max_time, true);
    r.Unsigned("seed", &sim.noise.seed);
    r.Number("initial_heading_rad", &sim.initial_heading);
    if (const Json* n = r.Child("noise")) {
      Reader nr(*n, "$.sim.noise", &diag);
      nr.NonNegative("position_sigma_m", &sim.noise.position_sigma);
      nr.NonNegative("heading_sigma_rad", &sim.noise.heading_sigma);
      nr.Finish();
    }
    if (const Json* p = r.Child("initial_pose")) {
      Reader pr(*p, "$.sim.initial_pose", &diag);
      pr.Number("x_m", &sim.initial_pose.x);
      pr.Number("y_m", &sim.initial_pose.y);
      pr.Number("theta_rad", &sim.initial_pose.theta);
      pr.Finish();
    }
    if (const Json* list = r.Child("disturbances")) {
      if (!list->is_array()) {
        r.Fail("$.sim.disturbances", "expected an array");
      } else {
        for (std::size_t i = 0; i < list->size(); ++i) {
          Disturbance d;
          Reader dr((*list)[i], "$.sim.disturbances[" + std::to_string(i) + "]",
                    &diag);
          dr.NonNegative("time_s", &d.time);
          dr.Number("dx_m", &d.dx);
          dr.Number("dy_m", &d.dy);
          dr.Number("dtheta_rad", &d.dtheta);
          dr.Finish();
          sim.disturbances.push_back(d);
        }
      }
    }
    r.Finish();
  }
  if (const Json* w = root.Child("waypoints")) {
    config.waypoints = ReadWaypoints(*w, "$.waypoints", &diag);
  }
  root.Finish();
  if (diag.empty() && !config.geometry.Valid()) {
    diag.push_back("$.geometry: wheel offset and radius must fit in a module");
  }
  if (!diag.empty()) throw ConfigError(diag);
  return config;
}

RunConfig LoadRunConfig(const std::string& path) {
  return ParseRunConfig(ReadFile(path));
}

std::vector<Waypoint> ParseWaypoints(const std::string& text) {
  std::vector<std::string> diag;
  std::vector<Waypoint> out = ReadWaypoints(ParseJson(text), "$", &diag);
  if (!diag.empty()) throw ConfigError(diag);
  return out;
}

std::vector<Waypoint> LoadWaypoints(const std::string& path) {
  return ParseWaypoints(ReadFile(path));
}

std::string DumpRunConfig(const RunConfig& config) {
  const ControllerConfig& ctl = config.sim.controller;
  auto pid = [](const PidGains& g) {
    return Json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}};
  };
  Json waypoints = Json::array();
  for (const Waypoint& w : config.waypoints) {
    waypoints.push_back({{"x_m", w.x},
                         {"y_m", w.y},
                         {"theta_rad", w.theta},
                         {"position_tolerance_m", w.position_tolerance},
                         {"heading_tolerance_rad", w.heading_tolerance}});
  }
  Json disturbances = Json::array();
  for (const Disturbance& d : config.sim.disturbances) {
    disturbances.push_back({{"time_s", d.time},
                            {"dx_m", d.dx},
                            {"dy_m", d.dy},
                            {"dtheta_rad", d.dtheta}});
  }
  std::string shape = "all";
  if (config.shapes.size() == 1) shape = std::string(1, ShapeLetter(config.shapes[0]));
  const Json doc = {
      {"schema_version", kSchemaVersion},
      {"shape", shape},
      {"geometry",
       {{"wheel_radius_m", config.geometry.wheel_radius},
        {"wheel_offset_m", config.geometry.wheel_offset},
        {"module_length_m", config.geometry.module_length}}},
      {"controller",
       {{"max_radius_m", ctl.heading.max_radius},
        {"max_wheel_rate_rad_s", ctl.limits.max_wheel_rate},
        {"max_steering_rate_rad_s", ctl.steering.max_rate},
        {"steering_arrival_tolerance_rad", ctl.steering.arrival_tolerance},
        {"cruise_speed_m_s", ctl.cruise_speed},
        {"approach_gain_per_s", ctl.approach_gain},
        {"lookahead_m", ctl.lookahead},
        {"heading_pid", pid(ctl.heading.pid)},
        {"steering_pid", pid(ctl.steering.pid)},
        {"transient_law", ctl.steering.law == TransientLaw::kIcrPath
                              ? "icr_path"
                              : "tangent_scaling"}}},
      {"sim",
       {{"dt_s", config.sim.dt},
        {"max_time_s", config.sim.max_time},
        {"seed", config.sim.noise.seed},
        {"initial_heading_rad", config.sim.initial_heading},
        {"noise",
         {{"position_sigma_m", config.sim.noise.position_sigma},
          {"heading_sigma_rad", config.sim.noise.heading_sigma}}},
        {"initial_pose",
         {{"x_m", config.sim.initial_pose.x},
          {"y_m", config.sim.initial_pose.y},
          {"theta_rad", config.sim.initial_pose.theta}}},
        {"disturbances", disturbances}}},
      {"waypoints", waypoints}};
  return doc.dump(2);
}

}  // namespace htetro
