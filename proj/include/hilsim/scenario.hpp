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
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilsim/card.hpp"
#include "hilsim/controllers.hpp"
#include "hilsim/executor.hpp"
#include "hilsim/plant.hpp"
#include "hilsim/reference.hpp"
#include "hilsim/transport.hpp"

namespace hilsim {

// Problem in a scenario document, located by JSON pointer.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Plant preset plus overrides. Fields that do not apply to the preset are
// left at their defaults and are neither read nor echoed.
struct PlantConfig {
  std::string preset = "heat_exchanger";  // heat_exchanger | first_order | static_gain | custom
  double K = 1.0;
  double tau1_s = 10.0;
  double tau2_s = 2.0;
  double dead_time_s = 1.0;
  double init_output = 0.0;
  std::vector<double> num;  // custom only, ascending powers of s
  std::vector<double> den;

  bool operator==(const PlantConfig&) const = default;
};

PlantSpec plant_spec(const PlantConfig& cfg);

enum class ControllerKind { kPid, kRst, kExternal, kPassThrough, kEcho };

std::string to_string(ControllerKind k);

struct RstConfig {
  std::vector<double> a;  // filled from the plant when omitted
  std::vector<double> b;
  int d = 0;
  std::vector<double> p;
  TMode t_mode = TMode::kUnitDcGain;
  double out_min_V = 0.0;
  double out_max_V = 4.5;

  bool operator==(const RstConfig&) const = default;
};

struct ControllerConfig {
  ControllerKind kind = ControllerKind::kPid;
  PidGains pid;
  bool anti_windup = true;
  RstConfig rst;

  bool operator==(const ControllerConfig&) const = default;
};

struct Scenario {
  std::string name = "scenario";
  RunMode mode = RunMode::kSim;
  double base_step_s = 0.045;
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  Pacing pacing = Pacing::kAsFastAsPossible;
  PlantConfig plant;
  ControllerConfig controller;
  double controller_period_s = 0.045;
  CardConfig card;
  ReferenceSignal reference;
  double tolerance = 0.02;
  int max_retries = 20;
  double cycle_cost_s = 0.0;
  HilEndpointConfig transport;

  // floor(duration_s / base_step_s)
  std::int64_t n_steps() const;
  bool operator==(const Scenario&) const = default;
};

// Validates the document, fills every default and rejects unknown keys.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_file(const std::string& path);

// The effective scenario, every field explicit. parse_scenario of the result
// reproduces the same Scenario.
nlohmann::json to_json(const Scenario& s);

// Builds the local control law described by the scenario. Throws for
// external controllers.
std::unique_ptr<ControlLaw> make_control_law(const Scenario& s);

RstDesign rst_design(const Scenario& s);

// Wires plant, card, calibration and controller (or HiL endpoint) for the
// scenario's mode and runs the loop.
RunResult run_scenario(const Scenario& s);

}  // namespace hilsim
