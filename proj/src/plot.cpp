// Copyright 2026 The hilsim Authors
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

#include "hilsim/plot.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hilsim {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 260.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kGap = 60.0;

struct Series {
  const char* label;
  const char* color;
  std::function<double(const TraceRecord&)> value;
};

struct Panel {
  double top;
  double t0, t1;
  double v0, v1;

  double x(double t) const { return kLeft + (t - t0) / (t1 - t0) * (kWidth - kLeft - kRight); }
  double y(double v) const { return top + kPanelHeight - (v - v0) / (v1 - v0) * kPanelHeight; }
};

Panel make_panel(std::span<const TraceRecord> trace, const std::vector<Series>& series, double top) {
  Panel p{top, trace.front().t_sim_s, trace.back().t_sim_s, 0.0, 0.0};
  if (p.t1 <= p.t0) p.t1 = p.t0 + 1.0;
  double lo = series[0].value(trace.front());
  double hi = lo;
  for (const Series& s : series) {
    for (const TraceRecord& r : trace) {
      lo = std::min(lo, s.value(r));
      hi = std::max(hi, s.value(r));
    }
  }
  const double pad = std::max(0.05 * (hi - lo), 0.05);
  p.v0 = lo - pad;
  p.v1 = hi + pad;
  return p;
}

void draw_panel(std::ostream& os, std::span<const TraceRecord> trace, const std::vector<Series>& series,
                const Panel& p, const char* y_label) {
  const double bottom = p.top + kPanelHeight;
  os << "<rect x=\"" << kLeft << "\" y=\"" << p.top << "\" width=\"" << (kWidth - kLeft - kRight)
     << "\" height=\"" << kPanelHeight << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = p.v0 + (p.v1 - p.v0) * i / 4.0;
    const double t = p.t0 + (p.t1 - p.t0) * i / 4.0;
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << p.y(v) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << v << "</text>\n";
    os << "<text x=\"" << p.x(t) << "\" y=\"" << bottom + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << t << "</text>\n";
  }
  os << "<text x=\"16\" y=\"" << p.top + kPanelHeight / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
     << p.top + kPanelHeight / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << bottom + 34
     << "\" font-size=\"12\" text-anchor=\"middle\">time [s]</text>\n";

  double legend_x = kLeft + 10;
  for (const Series& s : series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < trace.size(); ++i) {
      os << (i ? " " : "") << p.x(trace[i].t_sim_s) << ',' << p.y(s.value(trace[i]));
    }
    os << "\"/>\n";
    os << "<text x=\"" << legend_x << "\" y=\"" << p.top - 8 << "\" font-size=\"12\" fill=\"" << s.color
       << "\">" << s.label << "</text>\n";
    legend_x += 90;
  }
}

}  // namespace

void plot_trace_svg(std::span<const TraceRecord> trace, std::ostream& os) {
  if (trace.empty()) throw std::invalid_argument("cannot plot an empty trace");

  const std::vector<Series> response{{"r [V]", "#1f77b4", [](const TraceRecord& r) { return r.r_V; }},
                                     {"y_read [V]", "#d62728", [](const TraceRecord& r) { return r.y_read_V; }}};
  const std::vector<Series> control{
      {"u_cmd [V]", "#2ca02c", [](const TraceRecord& r) { return r.u_cmd_V; }},
      {"u_actual [V]", "#9467bd", [](const TraceRecord& r) { return r.u_actual_V; }}};

  const Panel top = make_panel(trace, response, kTop);
  const Panel low = make_panel(trace, control, kTop + kPanelHeight + kGap);
  const double height = low.top + kPanelHeight + 50;

  os << std::setprecision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\" font-family=\"sans-serif\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  draw_panel(os, trace, response, top, "response [V]");
  draw_panel(os, trace, control, low, "control action [V]");
  for (const TraceRecord& r : trace) {
    if (!r.saturated) continue;
    os << "<circle class=\"saturation\" cx=\"" << low.x(r.t_sim_s) << "\" cy=\"" << low.y(r.u_cmd_V)
       << "\" r=\"2.5\" fill=\"orange\"/>\n";
  }
  os << "</svg>\n";
}

void plot(const std::string& trace_path, const std::string& out_svg) {
  const std::vector<TraceRecord> trace = read_trace_csv(trace_path);
  std::ostringstream svg;
  plot_trace_svg(trace, svg);
  std::ofstream os(out_svg);
  if (!os) throw std::runtime_error("cannot open " + out_svg + " for writing");
  os << svg.str();
}

}  // namespace hilsim
