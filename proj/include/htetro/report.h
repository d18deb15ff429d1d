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

// Trajectory CSV, run summaries and static SVG plots.

#ifndef HTETRO_REPORT_H_
#define HTETRO_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "htetro/simulator.h"

namespace htetro {

// Column order of the trajectory CSV.
const std::vector<std::string>& TrajectoryColumns();

std::string TrajectoryCsv(const TrajectoryLog& log);

// JSON object with the per-run metrics.
std::string SummaryJson(const TrajectoryLog& log, const RunSummary& summary);

std::string PathSvg(const TrajectoryLog& log,
                    const std::vector<Waypoint>& waypoints);
std::string SteeringSvg(const TrajectoryLog& log);
std::string ResidualSvg(const TrajectoryLog& log);

// Log-scale histogram of per-step residuals for two labeled series.
struct ResidualHistogram {
  std::vector<double> edges;  // decade boundaries, ascending
  std::vector<int> counts;    // edges.size() + 1 buckets
};
ResidualHistogram HistogramOf(const TrajectoryLog& log);

// Writes `contents` to a temporary sibling and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents);

}  // namespace htetro

#endif  // HTETRO_REPORT_H_
