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

// htetro command line: simulate, audit, compare-pinv.
//
// Exit codes: 0 success, 1 invariant failure, 2 configuration error,
// 3 a run timed out before reaching every waypoint.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "htetro/batch.h"
#include "htetro/config.h"
#include "htetro/report.h"
#include "json.hpp"

namespace {

using namespace htetro;  // NOLINT

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTimeout = 3;

constexpr double kResidualBound = 1e-6;

std::string DefaultOutDir() {
  const char* env = std::getenv("HTETRO_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "htetro_out";
}

struct CommonOptions {
  std::string shape;
  std::string config_path;
  std::string waypoints_path;
  std::string out_dir = DefaultOutDir();
};

RunConfig LoadCommon(const CommonOptions& opts) {
  RunConfig config;
  if (!opts.config_path.empty()) config = LoadRunConfig(opts.config_path);
  if (!opts.shape.empty()) config.shapes = ParseShapeList(opts.shape);
  if (!opts.waypoints_path.empty()) {
    config.waypoints = LoadWaypoints(opts.waypoints_path);
  }
  if (!config.geometry.Valid()) {
    throw ConfigError({"geometry: invalid parameters"});
  }
  return config;
}

std::filesystem::path PrepareOutDir(const std::string& dir) {
  std::filesystem::path out(dir);
  std::filesystem::create_directories(out);
  return out;
}

std::string Prefix(Shape shape) { return std::string(1, ShapeLetter(shape)); }

int Simulate(const CommonOptions& opts) {
  const RunConfig config = LoadCommon(opts);
  const std::filesystem::path out = PrepareOutDir(opts.out_dir);
  const std::vector<TrajectoryLog> logs =
      RunShapes(config.shapes, config.waypoints, config.sim, config.geometry,
                Execution::kParallel);
  const double wheel_limit =
      config.sim.controller.limits.max_wheel_rate + 1e-12;
  int code = kExitOk;
  for (const TrajectoryLog& log : logs) {
    const RunSummary s = Summarize(log);
    const std::string p = Prefix(log.shape);
    WriteFileAtomic(out / (p + "_trajectory.csv"), TrajectoryCsv(log));
    WriteFileAtomic(out / (p + "_summary.json"), SummaryJson(log, s));
    WriteFileAtomic(out / (p + "_xy.svg"), PathSvg(log, config.waypoints));
    WriteFileAtomic(out / (p + "_steering.svg"), SteeringSvg(log));
    WriteFileAtomic(out / (p + "_residual.svg"), ResidualSvg(log));
    std::printf(
        "shape %s: %s, %zu/%zu waypoints, rmse x %.4f y %.4f cross %.4f m, "
        "max residual %.3g, saturated steps %d\n",
        p.c_str(), s.arrived ? "all arrived" : "NOT arrived",
        s.arrival_times.size(), config.waypoints.size(), s.rmse_x, s.rmse_y,
        s.rmse_cross_track, s.max_residual, s.saturation_count);
    if (s.max_residual >= kResidualBound || s.max_wheel_rate > wheel_limit) {
      code = kExitInvariant;
    } else if (log.timed_out && code == kExitOk) {
      code = kExitTimeout;
    }
  }
  return code;
}

struct AuditOptions {
  std::string shape = "all";
  std::uint64_t seed = 1;
  int iterations = 500;
  double perturb_beta = 0.0;
  std::optional<int> sample;
  std::string out_dir = DefaultOutDir();
};

// Layout checks: centroid at the origin, four distinct cells one pitch
// apart, edge-connected.
std::string LayoutProblem(const Morphology& m) {
  Vector2d sum = Vector2d::Zero();
  for (const Vector2d& c : m.centers) sum += c;
  if (sum.norm() > 1e-12) return "centroid not at the origin";
  const double l = m.params.module_length;
  PerModule<bool> reached{true, false, false, false};
  for (int pass = 0; pass < kNumModules; ++pass) {
    for (int i = 0; i < kNumModules; ++i) {
      for (int j = 0; j < kNumModules; ++j) {
        const double gap = (m.centers[i] - m.centers[j]).norm();
        if (i != j && gap < 1e-12) return "overlapping modules";
        if (reached[i] && std::abs(gap - l) < 1e-12) reached[j] = true;
      }
    }
  }
  for (bool r : reached) {
    if (!r) return "modules are not edge-connected";
  }
  return "";
}

int Audit(const AuditOptions& opts) {
  const std::vector<Shape> shapes = ParseShapeList(opts.shape);
  if (opts.iterations <= 0) throw ConfigError({"--iterations must be > 0"});
  const ControllerConfig controller;
  const double dt = 0.01;
  const int max_steps = 3000;
  bool ok = true;
  nlohmann::json failures = nlohmann::json::array();

  for (Shape shape : shapes) {
    const Morphology morph = BuildMorphology(shape);
    const std::string p = Prefix(shape);

    const std::string layout = LayoutProblem(morph);
    std::printf("%s layout      : %s\n", p.c_str(),
                layout.empty() ? "ok" : layout.c_str());
    if (!layout.empty()) {
      ok = false;
      failures.push_back({{"shape", p}, {"check", "layout"}, {"detail", layout}});
    }

    const auto twists = RandomTwists(opts.iterations, opts.seed);
    const double trip = RoundTripError(morph, twists, Execution::kParallel);
    std::printf("%s round trip  : max error %.3g\n", p.c_str(), trip);
    if (!(trip < 1e-9)) {
      ok = false;
      failures.push_back({{"shape", p}, {"check", "round_trip"},
                          {"seed", opts.seed}, {"max_error", trip}});
    }

    auto samples = RandomTransients(opts.iterations, opts.seed + 1,
                                    controller.heading.max_radius);
    std::size_t first = 0;
    if (opts.sample) {
      if (*opts.sample < 0 || *opts.sample >= opts.iterations) {
        throw ConfigError({"--sample must index one of the iterations"});
      }
      first = static_cast<std::size_t>(*opts.sample);
      samples = {samples[first]};
    }
    const auto results =
        AuditTransients(morph, samples, controller, dt, max_steps,
                        Execution::kParallel, opts.perturb_beta);
    int bad = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < results.size(); ++k) {
      const TransientResult& r = results[k];
      worst = std::max(worst, r.max_residual);
      if (r.max_residual < kResidualBound && r.arrived && r.simultaneous) {
        continue;
      }
      ++bad;
      ok = false;
      const TransientSample& s = samples[k];
      failures.push_back(
          {{"shape", p},
           {"check", "transient"},
           {"seed", opts.seed},
           {"sample", first + k},
           {"perturb_beta", opts.perturb_beta},
           {"start", {{"gamma", s.start.direction.angle},
                      {"sign", s.start.direction.sign},
                      {"radius", s.start.radius},
                      {"translation", s.start.translation}}},
           {"target", {{"gamma", s.target.direction.angle},
                       {"sign", s.target.direction.sign},
                       {"radius", s.target.radius},
                       {"translation", s.target.translation}}},
           {"max_residual", r.max_residual},
           {"final_error", r.final_error},
           {"arrived", r.arrived},
           {"simultaneous", r.simultaneous}});
    }
    std::printf("%s transients  : %zu runs, %d failed, max residual %.3g\n",
                p.c_str(), results.size(), bad, worst);

    const ShapeRelation relation = DeriveShapeRelation(morph);
    if (relation.Exists()) {
      std::mt19937_64 rng(opts.seed + 2);
      std::vector<IcrTarget> targets(opts.iterations);
      for (IcrTarget& t : targets) {
        t = RandomIcrTarget(rng, controller.heading.max_radius);
      }
      const double res =
          RelationAudit(morph, relation, targets, Execution::kParallel);
      std::printf("%s relation    : %zu basis vector(s), max residual %.3g\n",
                  p.c_str(), relation.basis.size(), res);
      if (!(res < 1e-9)) {
        ok = false;
        failures.push_back({{"shape", p}, {"check", "relation"},
                            {"seed", opts.seed}, {"max_residual", res}});
      }
    } else {
      std::printf("%s relation    : none (no three axes share a coordinate)\n",
                  p.c_str());
    }
  }

  if (!ok) {
    const std::filesystem::path out = PrepareOutDir(opts.out_dir);
    const auto path = out / "audit_failures.json";
    WriteFileAtomic(path, failures.dump(2) + "\n");
    std::printf("FAIL: %zu failing check(s) written to %s\n", failures.size(),
                path.string().c_str());
    return kExitInvariant;
  }
  std::printf("PASS\n");
  return kExitOk;
}

int ComparePinv(const CommonOptions& opts) {
  RunConfig config = LoadCommon(opts);
  const std::filesystem::path out = PrepareOutDir(opts.out_dir);
  int code = kExitOk;
  nlohmann::json report = nlohmann::json::array();
  for (Shape shape : config.shapes) {
    const Morphology morph = BuildMorphology(shape, config.geometry);
    SimConfig coordinated = config.sim;
    coordinated.controller.mode = SteeringMode::kCoordinated;
    SimConfig raw = config.sim;
    raw.controller.mode = SteeringMode::kRawPseudoInverse;
    const TrajectoryLog a = RunWaypoints(morph, config.waypoints, coordinated);
    const TrajectoryLog b = RunWaypoints(morph, config.waypoints, raw);
    const RunSummary sa = Summarize(a);
    const RunSummary sb = Summarize(b);
    const ResidualHistogram ha = HistogramOf(a);
    const ResidualHistogram hb = HistogramOf(b);
    const std::string p = Prefix(shape);
    std::printf("shape %s: max residual coordinated %.3g, pseudo-inverse %.3g\n",
                p.c_str(), sa.max_residual, sb.max_residual);
    std::printf("  %-14s %12s %14s\n", "residual <", "coordinated",
                "pseudo-inverse");
    for (std::size_t k = 0; k < ha.counts.size(); ++k) {
      const std::string edge =
          k < ha.edges.size() ? ([&] {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.0e", ha.edges[k]);
            return std::string(buf);
          })()
                              : std::string("inf");
      std::printf("  %-14s %12d %14d\n", edge.c_str(), ha.counts[k],
                  hb.counts[k]);
    }
    report.push_back({{"shape", p},
                      {"coordinated_max_residual", sa.max_residual},
                      {"pinv_max_residual", sb.max_residual},
                      {"coordinated_arrived", sa.arrived},
                      {"pinv_arrived", sb.arrived},
                      {"histogram_edges", ha.edges},
                      {"coordinated_counts", ha.counts},
                      {"pinv_counts", hb.counts}});
    WriteFileAtomic(out / (p + "_pinv_trajectory.csv"), TrajectoryCsv(b));
    WriteFileAtomic(out / (p + "_pinv_residual.svg"), ResidualSvg(b));
    if (sa.max_residual >= kResidualBound) code = kExitInvariant;
  }
  WriteFileAtomic(out / "compare_pinv.json", report.dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ICR path-tracking simulator for four-module tetromino robots"};
  app.require_subcommand(1);

  CommonOptions sim_opts;
  CLI::App* simulate = app.add_subcommand("simulate", "run the waypoint course");
  simulate->add_option("--shape", sim_opts.shape,
                       "I L Z O T S J or all (overrides the config)");
  simulate->add_option("--config", sim_opts.config_path, "JSON run config");
  simulate->add_option("--waypoints", sim_opts.waypoints_path,
                       "JSON waypoint array (overrides the config)");
  simulate->add_option("--out-dir", sim_opts.out_dir,
                       "output directory (default $HTETRO_OUT_DIR)");

  AuditOptions audit_opts;
  CLI::App* audit = app.add_subcommand("audit", "randomized invariant audit");
  audit->add_option("--shape", audit_opts.shape, "shape letter or all");
  audit->add_option("--seed", audit_opts.seed, "random seed");
  audit->add_option("--iterations", audit_opts.iterations, "samples per check");
  audit->add_option("--perturb-beta", audit_opts.perturb_beta,
                    "hidden encoder offset (rad) on module 1 during every "
                    "transient");
  audit->add_option("--sample", audit_opts.sample,
                    "replay only this transient index");
  audit->add_option("--out-dir", audit_opts.out_dir, "output directory");

  CommonOptions pinv_opts;
  CLI::App* pinv = app.add_subcommand(
      "compare-pinv", "coordinated steering against raw pseudo-inverse");
  pinv->add_option("--shape", pinv_opts.shape, "shape letter or all");
  pinv->add_option("--config", pinv_opts.config_path, "JSON run config");
  pinv->add_option("--waypoints", pinv_opts.waypoints_path,
                   "JSON waypoint array");
  pinv->add_option("--out-dir", pinv_opts.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return Simulate(sim_opts);
    if (audit->parsed()) return Audit(audit_opts);
    if (pinv->parsed()) return ComparePinv(pinv_opts);
  } catch (const ConfigError& e) {
    for (const std::string& line : e.diagnostics()) {
      std::cerr << "config error: " << line << "\n";
    }
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitConfig;
}
