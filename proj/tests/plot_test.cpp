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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "hilsim/plot.hpp"
#include "hilsim/trace.hpp"

namespace hilsim {
namespace {

std::vector<TraceRecord> three_rows() {
  std::vector<TraceRecord> t(3);
  for (int k = 0; k < 3; ++k) {
    t[k].step = k;
    t[k].t_sim_s = 0.045 * k;
    t[k].r_V = 1.0;
    t[k].y_read_V = 0.3 * k;
    t[k].u_cmd_V = 4.5;
    t[k].u_actual_V = 4.4;
    t[k].saturated = k == 0;
  }
  return t;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Trace, CsvRoundTripIsExact) {
  auto t = three_rows();
  t[1].u_code = 229;
  t[1].y_code = 17;
  t[1].wall_dt_ms = 45.0123456789;
  t[2].y_plant_V = 1.0 / 3.0;
  std::stringstream ss;
  write_trace_csv(ss, t);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, kTraceHeader);
  ss.seekg(0);
  EXPECT_EQ(read_trace_csv(ss), t);
}

TEST(Trace, MalformedCsvReportsLine) {
  std::stringstream ss;
  ss << kTraceHeader << "\n0,0,1,1,0,-1,0,0,-1,0,0,0,0,0\n1,0.045,1,1,0\n";
  try {
    read_trace_csv(ss);
    FAIL() << "expected TraceParseError";
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::stringstream bad_header("step,t\n");
  EXPECT_THROW(read_trace_csv(bad_header), TraceParseError);
}

TEST(Trace, SummaryCountsAndSettling) {
  std::vector<TraceRecord> t(100);
  for (int k = 0; k < 100; ++k) {
    t[k].step = k;
    t[k].r_V = 1.0;
    t[k].y_read_V = t[k].y_plant_V = k < 50 ? 0.5 : 1.01;
    t[k].retries = k % 7;
    t[k].saturated = k < 3;
    t[k].overrun = k == 10;
    t[k].wall_dt_ms = 45.0;
  }
  const RunReport r = summarize(t);
  EXPECT_EQ(r.steps_total, 100);
  EXPECT_EQ(r.overruns, 1);
  EXPECT_EQ(r.max_retries, 6);
  EXPECT_EQ(r.saturation_events, 3);  // saturated steps
  ASSERT_TRUE(r.settle_step);
  EXPECT_EQ(*r.settle_step, 50);
  EXPECT_NEAR(r.steady_state_error_V, -0.01, 1e-12);
  EXPECT_DOUBLE_EQ(r.mean_period_ms, 45.0);
}

TEST(Plot, ThreeRowTraceStructure) {
  std::ostringstream os;
  plot_trace_svg(three_rows(), os);
  const std::string svg = os.str();
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 4u);
  const std::regex points("points=\"([^\"]*)\"");
  int lines = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), points); it != std::sregex_iterator(); ++it) {
    std::istringstream pts((*it)[1]);
    std::string p;
    int n = 0;
    while (pts >> p) ++n;
    EXPECT_EQ(n, 3);
    ++lines;
  }
  EXPECT_EQ(lines, 4);
  EXPECT_EQ(count(svg, "class=\"saturation\""), 1u);
  EXPECT_NE(svg.find("time [s]"), std::string::npos);
}

TEST(Plot, EmptyTraceWritesNothing) {
  const auto dir = std::filesystem::temp_directory_path() / "hilsim_plot_test";
  std::filesystem::create_directories(dir);
  const auto csv = dir / "empty.csv";
  const auto svg = dir / "empty.svg";
  std::filesystem::remove(svg);
  std::ofstream(csv) << kTraceHeader << "\n";
  EXPECT_THROW(plot(csv.string(), svg.string()), std::invalid_argument);
  EXPECT_FALSE(std::filesystem::exists(svg));
}

}  // namespace
}  // namespace hilsim
