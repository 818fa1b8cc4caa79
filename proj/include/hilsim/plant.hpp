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

#include <string>
#include <vector>

#include "hilsim/lti.hpp"

namespace hilsim {

// Process model as seen from the card: volts in, volts out.
struct PlantSpec {
  std::string name;
  ContinuousTf tf;
  std::string output_unit = "V";
  double init_output = 0.0;
};

// Heat-exchanger stand-in: K e^{-L s} / ((tau1 s + 1)(tau2 s + 1)).
// The defaults are configuration, not measured process data.
struct HeatExchangerParams {
  double K = 1.0;
  double tau1_s = 10.0;
  double tau2_s = 2.0;
  double dead_time_s = 1.0;
};

PlantSpec heat_exchanger_plant(const HeatExchangerParams& p = {});
PlantSpec first_order_plant(double K = 1.0, double tau_s = 10.0, double dead_time_s = 0.0);
PlantSpec static_gain_plant(double K = 1.0);

// Preset lookup by name: "heat_exchanger", "first_order", "static_gain".
// Throws std::invalid_argument for unknown names.
PlantSpec plant_preset(const std::string& name);
const std::vector<std::string>& plant_preset_names();

struct PlantInstance {
  PlantSpec spec;
  DiscreteLtiD sys;
  double last_output_V = 0.0;
};

PlantInstance make_plant(const PlantSpec& spec, double base_step_s);

// Advances the plant one base step with input u_V and returns the new output.
double plant_step(PlantInstance& p, double u_V);

}  // namespace hilsim
