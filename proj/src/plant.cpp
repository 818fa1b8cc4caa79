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

#include "hilsim/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace hilsim {

PlantSpec heat_exchanger_plant(const HeatExchangerParams& p) {
  PlantSpec spec;
  spec.name = "heat_exchanger";
  spec.tf.num = Poly::constant(p.K);
  spec.tf.den = Poly({1.0, p.tau1_s}) * Poly({1.0, p.tau2_s});
  spec.tf.dead_time_s = p.dead_time_s;
  return spec;
}

PlantSpec first_order_plant(double K, double tau_s, double dead_time_s) {
  PlantSpec spec;
  spec.name = "first_order";
  spec.tf.num = Poly::constant(K);
  spec.tf.den = Poly({1.0, tau_s});
  spec.tf.dead_time_s = dead_time_s;
  return spec;
}

PlantSpec static_gain_plant(double K) {
  PlantSpec spec;
  spec.name = "static_gain";
  spec.tf.num = Poly::constant(K);
  spec.tf.den = Poly::constant(1.0);
  return spec;
}

const std::vector<std::string>& plant_preset_names() {
  static const std::vector<std::string> names{"heat_exchanger", "first_order", "static_gain"};
  return names;
}

PlantSpec plant_preset(const std::string& name) {
  if (name == "heat_exchanger") return heat_exchanger_plant();
  if (name == "first_order") return first_order_plant();
  if (name == "static_gain") return static_gain_plant();
  throw std::invalid_argument("unknown plant preset '" + name + "'");
}

PlantInstance make_plant(const PlantSpec& spec, double base_step_s) {
  PlantInstance p{spec, c2d_zoh(spec.tf, base_step_s), spec.init_output};
  if (spec.init_output != 0.0) p.sys.reset_to_steady_state(spec.init_output);
  return p;
}

double plant_step(PlantInstance& p, double u_V) {
  if (!std::isfinite(u_V)) throw std::invalid_argument("plant input must be finite");
  p.last_output_V = p.sys.step(u_V);
  return p.last_output_V;
}

}  // namespace hilsim
