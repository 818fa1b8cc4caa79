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

#include "hilsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace hilsim {

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace) {
  os << kTraceHeader << '\n';
  os << std::setprecision(17);
  for (const TraceRecord& t : trace) {
    os << t.step << ',' << t.t_sim_s << ',' << t.r_V << ',' << t.e_V << ',' << t.u_cmd_V << ','
       << t.u_code << ',' << t.u_actual_V << ',' << t.y_plant_V << ',' << t.y_code << ','
       << t.y_read_V << ',' << t.retries << ',' << (t.saturated ? 1 : 0) << ','
       << (t.overrun ? 1 : 0) << ',' << t.wall_dt_ms << '\n';
  }
}

void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_trace_csv(os, trace);
}

namespace {

template <typename T>
T parse_field(const std::string& text, std::size_t line, const char* name) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  std::from_chars_result res;
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is incomplete on older toolchains.
    char* end = nullptr;
    value = std::strtod(text.c_str(), &end);
    res.ptr = end;
    res.ec = (end == first) ? std::errc::invalid_argument : std::errc{};
  } else {
    res = std::from_chars(first, last, value);
  }
  if (res.ec != std::errc{} || res.ptr != last) {
    throw TraceParseError(line, std::string("bad value '") + text + "' for " + name);
  }
  return value;
}

bool parse_flag(const std::string& text, std::size_t line, const char* name) {
  if (text == "0") return false;
  if (text == "1") return true;
  throw TraceParseError(line, std::string("bad flag '") + text + "' for " + name);
}

}  // namespace

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line)) throw TraceParseError(1, "empty trace");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw TraceParseError(1, "unexpected header");

  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 14) {
      throw TraceParseError(lineno, "expected 14 columns, got " + std::to_string(f.size()));
    }
    TraceRecord t;
    t.step = parse_field<std::int64_t>(f[0], lineno, "step");
    t.t_sim_s = parse_field<double>(f[1], lineno, "t_sim_s");
    t.r_V = parse_field<double>(f[2], lineno, "r_V");
    t.e_V = parse_field<double>(f[3], lineno, "e_V");
    t.u_cmd_V = parse_field<double>(f[4], lineno, "u_cmd_V");
    t.u_code = parse_field<int>(f[5], lineno, "u_code");
    t.u_actual_V = parse_field<double>(f[6], lineno, "u_actual_V");
    t.y_plant_V = parse_field<double>(f[7], lineno, "y_plant_V");
    t.y_code = parse_field<int>(f[8], lineno, "y_code");
    t.y_read_V = parse_field<double>(f[9], lineno, "y_read_V");
    t.retries = parse_field<int>(f[10], lineno, "retries");
    t.saturated = parse_flag(f[11], lineno, "saturated");
    t.overrun = parse_flag(f[12], lineno, "overrun");
    t.wall_dt_ms = parse_field<double>(f[13], lineno, "wall_dt_ms");
    out.push_back(t);
  }
  return out;
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_trace_csv(is);
}

RunReport summarize(std::span<const TraceRecord> trace) {
  RunReport rep;
  rep.steps_total = static_cast<std::int64_t>(trace.size());
  if (trace.empty()) return rep;

  std::vector<double> periods;
  periods.reserve(trace.size());
  for (const TraceRecord& t : trace) {
    rep.overruns += t.overrun ? 1 : 0;
    rep.saturation_events += t.saturated ? 1 : 0;
    rep.max_retries = std::max(rep.max_retries, t.retries);
    periods.push_back(t.wall_dt_ms);
  }
  rep.mean_period_ms = std::accumulate(periods.begin(), periods.end(), 0.0) / periods.size();
  const auto k = static_cast<std::size_t>(std::ceil(0.99 * periods.size())) - 1;
  std::nth_element(periods.begin(), periods.begin() + k, periods.end());
  rep.p99_period_ms = periods[k];

  const double r_final = trace.back().r_V;
  const double band = std::max(0.02 * std::abs(r_final), 0.02);
  std::optional<std::int64_t> settle;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (std::abs(it->r_V - it->y_plant_V) > band) break;
    settle = it->step;
  }
  rep.settle_step = settle;

  const std::size_t tail = std::max<std::size_t>(1, trace.size() / 10);
  double sum = 0.0;
  for (std::size_t i = trace.size() - tail; i < trace.size(); ++i) {
    sum += trace[i].r_V - trace[i].y_plant_V;
  }
  rep.steady_state_error_V = sum / tail;
  return rep;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["steps_total"] = r.steps_total;
  j["overruns"] = r.overruns;
  j["mean_period_ms"] = r.mean_period_ms;
  j["p99_period_ms"] = r.p99_period_ms;
  j["max_retries"] = r.max_retries;
  j["tolerance_failures"] = r.tolerance_failures;
  j["saturation_events"] = r.saturation_events;
  j["controller_runs"] = r.controller_runs;
  j["settle_step"] = r.settle_step ? nlohmann::json(*r.settle_step) : nlohmann::json(nullptr);
  j["steady_state_error_V"] = r.steady_state_error_V;
  return j;
}

double rms_deviation(std::span<const TraceRecord> a, std::span<const TraceRecord> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i].y_plant_V - b[i].y_plant_V;
    acc += d * d;
  }
  return std::sqrt(acc / n);
}

}  // namespace hilsim
