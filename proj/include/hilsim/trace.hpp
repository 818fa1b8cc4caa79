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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hilsim {

// One row per base step. Codes are -1 where no card is in the loop.
struct TraceRecord {
  std::int64_t step = 0;
  double t_sim_s = 0.0;
  double r_V = 0.0;
  double e_V = 0.0;
  double u_cmd_V = 0.0;
  int u_code = -1;
  double u_actual_V = 0.0;
  double y_plant_V = 0.0;
  int y_code = -1;
  double y_read_V = 0.0;
  int retries = 0;
  bool saturated = false;
  bool overrun = false;
  double wall_dt_ms = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

inline constexpr const char* kTraceHeader =
    "step,t_sim_s,r_V,e_V,u_cmd_V,u_code,u_actual_V,y_plant_V,y_code,y_read_V,retries,"
    "saturated,overrun,wall_dt_ms";

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace);
void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace);

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<TraceRecord> read_trace_csv(std::istream& is);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

struct RunReport {
  std::int64_t steps_total = 0;
  std::int64_t overruns = 0;
  double mean_period_ms = 0.0;
  double p99_period_ms = 0.0;
  int max_retries = 0;
  std::int64_t tolerance_failures = 0;  // compensated reads that gave up
  std::int64_t saturation_events = 0;
  std::int64_t controller_runs = 0;
  std::optional<std::int64_t> settle_step;
  double steady_state_error_V = 0.0;
};

// Settling band is 2% of the final reference (at least 0.02 V); steady-state
// error is the mean of r - y_plant over the last 10% of the run.
RunReport summarize(std::span<const TraceRecord> trace);

nlohmann::json to_json(const RunReport& r);

// RMS of y_plant_V differences over the common prefix of two traces.
double rms_deviation(std::span<const TraceRecord> a, std::span<const TraceRecord> b);

}  // namespace hilsim
