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

#include "htetro/report.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace htetro {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void Add(double x, double y) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  void Pad() {
    if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
    if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  }
};

std::string Number(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

class Plot {
 public:
  Plot(std::string title, std::string x_label, std::string y_label,
       Bounds bounds, bool equal_axes = false)
      : bounds_(bounds) {
    bounds_.Pad();
    if (equal_axes) {
      const double sx = (bounds_.x1 - bounds_.x0) / (kWidth - 2 * kMargin);
      const double sy = (bounds_.y1 - bounds_.y0) / (kHeight - 2 * kMargin);
      const double s = std::max(sx, sy);
      const double cx = 0.5 * (bounds_.x0 + bounds_.x1);
      const double cy = 0.5 * (bounds_.y0 + bounds_.y1);
      bounds_.x0 = cx - 0.5 * s * (kWidth - 2 * kMargin);
      bounds_.x1 = cx + 0.5 * s * (kWidth - 2 * kMargin);
      bounds_.y0 = cy - 0.5 * s * (kHeight - 2 * kMargin);
      bounds_.y1 = cy + 0.5 * s * (kHeight - 2 * kMargin);
    }
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
         << "font-size=\"12\">\n"
         << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">"
         << title << "</text>\n"
         << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
         << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
         << "<text x=\"14\" y=\"" << kHeight / 2
         << "\" transform=\"rotate(-90 14 " << kHeight / 2
         << ")\" text-anchor=\"middle\">" << y_label << "</text>\n"
         << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
         << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
         << "\" fill=\"none\" stroke=\"#888\"/>\n";
    Tick(bounds_.x0, true);
    Tick(bounds_.x1, true);
    Tick(bounds_.y0, false);
    Tick(bounds_.y1, false);
  }

  void Line(const Series& s) {
    if (s.x.empty()) return;
    out_ << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.2\" points=\"";
    // Thin long series; one vertex per pixel column is plenty.
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 2000);
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      out_ << X(s.x[i]) << "," << Y(s.y[i]) << " ";
    }
    out_ << X(s.x.back()) << "," << Y(s.y.back()) << "\"/>\n";
    Legend(s.label, s.color);
  }

  void Marker(double x, double y, const std::string& color) {
    out_ << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y)
         << "\" r=\"4\" fill=\"none\" stroke=\"" << color << "\"/>\n";
  }

  void Legend(const std::string& label, const std::string& color) {
    if (label.empty()) return;
    const double y = kMargin + 14.0 * (legend_rows_++ + 1);
    out_ << "<text x=\"" << kWidth - kMargin - 6 << "\" y=\"" << y
         << "\" text-anchor=\"end\" fill=\"" << color << "\">" << label
         << "</text>\n";
  }

  std::string Finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  double X(double x) const {
    return kMargin + (x - bounds_.x0) / (bounds_.x1 - bounds_.x0) *
                         (kWidth - 2 * kMargin);
  }
  double Y(double y) const {
    return kHeight - kMargin - (y - bounds_.y0) / (bounds_.y1 - bounds_.y0) *
                                   (kHeight - 2 * kMargin);
  }
  void Tick(double v, bool horizontal) {
    std::ostringstream label;
    label.precision(3);
    label << v;
    if (horizontal) {
      out_ << "<text x=\"" << X(v) << "\" y=\"" << kHeight - kMargin + 14
           << "\" text-anchor=\"middle\">" << label.str() << "</text>\n";
    } else {
      out_ << "<text x=\"" << kMargin - 4 << "\" y=\"" << Y(v) + 4
           << "\" text-anchor=\"end\">" << label.str() << "</text>\n";
    }
  }

  Bounds bounds_;
  std::ostringstream out_;
  int legend_rows_ = 0;
};

}  // namespace

const std::vector<std::string>& TrajectoryColumns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c{"t",     "x",     "y",       "theta",
                               "x_d",   "y_d",   "theta_d", "gamma_d",
                               "R_d"};
    for (const char* prefix : {"beta_", "beta_d_", "v_", "phiL_", "phiR_"}) {
      for (int i = 1; i <= kNumModules; ++i) {
        c.push_back(prefix + std::to_string(i));
      }
    }
    c.insert(c.end(), {"residual", "regime", "sat_flag"});
    return c;
  }();
  return columns;
}

std::string TrajectoryCsv(const TrajectoryLog& log) {
  std::ostringstream out;
  const auto& columns = TrajectoryColumns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << "\n";
  auto emit = [&out](const PerModule<double>& values) {
    for (double v : values) out << "," << Number(v);
  };
  for (const LogRow& r : log.rows) {
    out << Number(r.t) << "," << Number(r.pose.x) << "," << Number(r.pose.y)
        << "," << Number(r.pose.theta) << "," << Number(r.desired.x) << ","
        << Number(r.desired.y) << "," << Number(r.desired.theta) << ","
        << Number(r.gamma_d) << "," << Number(r.radius_d);
    emit(r.steering);
    emit(r.steering_d);
    emit(r.speed);
    emit(r.wheels.left);
    emit(r.wheels.right);
    out << "," << Number(r.residual) << "," << RegimeName(r.regime) << ","
        << (r.saturated ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string SummaryJson(const TrajectoryLog& log, const RunSummary& summary) {
  nlohmann::json doc = {
      {"shape", std::string(1, ShapeLetter(log.shape))},
      {"arrived", summary.arrived},
      {"timed_out", log.timed_out},
      {"waypoints_reached", summary.arrival_times.size()},
      {"arrival_times_s", summary.arrival_times},
      {"rmse_x_m", summary.rmse_x},
      {"rmse_y_m", summary.rmse_y},
      {"rmse_cross_track_m", summary.rmse_cross_track},
      {"rmse_theta_rad", summary.rmse_theta},
      {"max_residual", summary.max_residual},
      {"max_wheel_rate_rad_s", summary.max_wheel_rate},
      {"saturation_count", summary.saturation_count},
      {"steps", log.rows.size()}};
  return doc.dump(2) + "\n";
}

std::string PathSvg(const TrajectoryLog& log,
                    const std::vector<Waypoint>& waypoints) {
  Bounds b;
  Series path{"path", kColors[0], {}, {}};
  for (const LogRow& r : log.rows) {
    path.x.push_back(r.pose.x);
    path.y.push_back(r.pose.y);
    b.Add(r.pose.x, r.pose.y);
  }
  b.Add(log.final_pose.x, log.final_pose.y);
  for (const Waypoint& w : waypoints) b.Add(w.x, w.y);
  Plot plot(std::string("XY path, shape ") + ShapeLetter(log.shape), "x (m)",
            "y (m)", b, true);
  plot.Line(path);
  for (const Waypoint& w : waypoints) plot.Marker(w.x, w.y, kColors[1]);
  plot.Legend("waypoints", kColors[1]);
  return plot.Finish();
}

std::string SteeringSvg(const TrajectoryLog& log) {
  Bounds b;
  std::vector<Series> series;
  for (int i = 0; i < kNumModules; ++i) {
    Series s{"beta_" + std::to_string(i + 1), kColors[i], {}, {}};
    for (const LogRow& r : log.rows) {
      s.x.push_back(r.t);
      s.y.push_back(r.steering[i]);
      b.Add(r.t, r.steering[i]);
    }
    series.push_back(std::move(s));
  }
  Plot plot("Steering angles", "t (s)", "beta (rad)", b);
  for (const Series& s : series) plot.Line(s);
  return plot.Finish();
}

std::string ResidualSvg(const TrajectoryLog& log) {
  Bounds b;
  Series s{"log10 residual", kColors[0], {}, {}};
  for (const LogRow& r : log.rows) {
    const double v = std::log10(std::max(r.residual, 1e-18));
    s.x.push_back(r.t);
    s.y.push_back(v);
    b.Add(r.t, v);
  }
  b.Add(b.x0, -6.0);
  Plot plot("Concurrency residual", "t (s)", "log10 residual", b);
  plot.Line(s);
  if (!log.rows.empty()) {
    plot.Line({"1e-6 bound", kColors[1], {b.x0, b.x1}, {-6.0, -6.0}});
  }
  return plot.Finish();
}

ResidualHistogram HistogramOf(const TrajectoryLog& log) {
  ResidualHistogram h;
  for (int e = -16; e <= 0; e += 2) h.edges.push_back(std::pow(10.0, e));
  h.counts.assign(h.edges.size() + 1, 0);
  for (const LogRow& r : log.rows) {
    if (!r.moving) continue;
    std::size_t bucket = 0;
    while (bucket < h.edges.size() && r.residual >= h.edges[bucket]) ++bucket;
    ++h.counts[bucket];
  }
  return h;
}

void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace htetro
