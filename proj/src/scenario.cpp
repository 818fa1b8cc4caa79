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

#include "hilsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hilsim/calibration.hpp"

namespace hilsim {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object, remembering which ones were consumed
// so that leftovers can be rejected as typos.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ScenarioError(path_.empty() ? "/" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return path_ + "/" + key; }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ScenarioError(path(key), "required key missing");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }
  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw ScenarioError(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path(key), "expected a finite number");
    return d;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_number_integer()) throw ScenarioError(path(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ScenarioError(path(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_boolean()) throw ScenarioError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : (seen_.insert(key), fallback);
  }
  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ScenarioError(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array() || v.empty()) throw ScenarioError(path(key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ScenarioError(path(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  // Wraps enum parsing so the error carries the path.
  template <typename F>
  auto parsed(const std::string& key, const std::string& fallback, F&& parse) {
    const std::string text = string(key, fallback);
    try {
      return parse(text);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(path(key), e.what());
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ScenarioError(path(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    throw ScenarioError(path, e.what());
  }
}

PlantConfig parse_plant(const json& j) {
  ObjectReader rd(j, "/plant");
  PlantConfig cfg;
  cfg.preset = rd.string("preset");
  if (cfg.preset == "heat_exchanger") {
    const HeatExchangerParams def;
    cfg.K = rd.number("K", def.K);
    cfg.tau1_s = rd.number("tau1_s", def.tau1_s);
    cfg.tau2_s = rd.number("tau2_s", def.tau2_s);
    cfg.dead_time_s = rd.number("dead_time_s", def.dead_time_s);
  } else if (cfg.preset == "first_order") {
    cfg.K = rd.number("K", 1.0);
    cfg.tau1_s = rd.number("tau1_s", 10.0);
    cfg.tau2_s = 0.0;
    cfg.dead_time_s = rd.number("dead_time_s", 0.0);
  } else if (cfg.preset == "static_gain") {
    cfg.K = rd.number("K", 1.0);
    cfg.tau1_s = cfg.tau2_s = cfg.dead_time_s = 0.0;
  } else if (cfg.preset == "custom") {
    cfg.K = cfg.tau1_s = cfg.tau2_s = 0.0;
    cfg.num = rd.numbers("num");
    cfg.den = rd.numbers("den");
    cfg.dead_time_s = rd.number("dead_time_s", 0.0);
  } else {
    throw ScenarioError("/plant/preset", "unknown preset '" + cfg.preset +
                                             "' (expected heat_exchanger, first_order, static_gain or custom)");
  }
  cfg.init_output = rd.number("init_output", 0.0);
  rd.finish();
  checked("/plant", [&] { plant_spec(cfg).tf.validate(); });
  return cfg;
}

json plant_json(const PlantConfig& c) {
  json j{{"preset", c.preset}};
  if (c.preset == "heat_exchanger") {
    j["K"] = c.K;
    j["tau1_s"] = c.tau1_s;
    j["tau2_s"] = c.tau2_s;
    j["dead_time_s"] = c.dead_time_s;
  } else if (c.preset == "first_order") {
    j["K"] = c.K;
    j["tau1_s"] = c.tau1_s;
    j["dead_time_s"] = c.dead_time_s;
  } else if (c.preset == "static_gain") {
    j["K"] = c.K;
  } else {
    j["num"] = c.num;
    j["den"] = c.den;
    j["dead_time_s"] = c.dead_time_s;
  }
  j["init_output"] = c.init_output;
  return j;
}

CardConfig parse_card(const json& j, std::uint64_t seed) {
  ObjectReader rd(j, "/card");
  CardConfig c;
  c.nominal_fullscale_V = rd.number("nominal_fullscale_V", c.nominal_fullscale_V);
  c.actual_max_V = rd.number("actual_max_V", c.actual_max_V);
  c.bits = static_cast<int>(rd.integer("bits", c.bits));
  if (rd.has("delay_model")) {
    ObjectReader dm(rd.at("delay_model"), "/card/delay_model");
    c.delay_model.kind = dm.parsed("kind", "uniform_int", [](const std::string& s) {
      if (s == "fixed") return DelayKind::kFixed;
      if (s == "uniform_int") return DelayKind::kUniformInt;
      throw std::invalid_argument("unknown delay kind '" + s + "' (expected fixed or uniform_int)");
    });
    c.delay_model.min_cycles = static_cast<int>(dm.integer("min_cycles", c.delay_model.min_cycles));
    c.delay_model.max_cycles = static_cast<int>(dm.integer("max_cycles", c.delay_model.max_cycles));
    dm.finish();
  }
  c.nonlin_alpha = rd.number("nonlin_alpha", c.nonlin_alpha);
  c.noise_std_V = rd.number("noise_std_V", c.noise_std_V);
  c.rng_seed = rd.unsigned_integer("rng_seed", seed);
  if (c.rng_seed != seed) {
    throw ScenarioError("/card/rng_seed", "conflicts with /seed; set the seed at the top level");
  }
  rd.finish();
  checked("/card", [&] { c.validate(); });
  return c;
}

json card_json(const CardConfig& c) {
  return json{{"nominal_fullscale_V", c.nominal_fullscale_V},
              {"actual_max_V", c.actual_max_V},
              {"bits", c.bits},
              {"delay_model",
               {{"kind", c.delay_model.kind == DelayKind::kFixed ? "fixed" : "uniform_int"},
                {"min_cycles", c.delay_model.min_cycles},
                {"max_cycles", c.delay_model.max_cycles}}},
              {"nonlin_alpha", c.nonlin_alpha},
              {"noise_std_V", c.noise_std_V},
              {"rng_seed", c.rng_seed}};
}

ControllerConfig parse_controller(const json& j, const PlantConfig& plant, double period_s) {
  if (!j.is_object() || j.size() != 1) {
    throw ScenarioError("/controller",
                        "expected exactly one of pid, rst, external, passthrough, echo");
  }
  ControllerConfig c;
  const std::string kind = j.begin().key();
  const std::string path = "/controller/" + kind;
  ObjectReader rd(j.begin().value(), path);
  if (kind == "pid") {
    c.kind = ControllerKind::kPid;
    c.pid.kp = rd.number("kp");
    c.pid.ki = rd.number("ki", 0.0);
    c.pid.kd = rd.number("kd", 0.0);
    c.pid.out_min_V = rd.number("out_min_V", 0.0);
    c.pid.out_max_V = rd.number("out_max_V", 4.5);
    c.anti_windup = rd.boolean("anti_windup", true);
    if (!(c.pid.out_min_V < c.pid.out_max_V)) throw ScenarioError(path, "out_min_V must be < out_max_V");
  } else if (kind == "rst") {
    c.kind = ControllerKind::kRst;
    RstConfig& r = c.rst;
    if (rd.has("a") != rd.has("b")) throw ScenarioError(path, "give both a and b, or neither");
    if (rd.has("a")) {
      r.a = rd.numbers("a");
      r.b = rd.numbers("b");
      const std::int64_t d = rd.integer("d", 0);
      if (d < 0) throw ScenarioError(rd.path("d"), "must be >= 0");
      r.d = static_cast<int>(d);
    } else {
      if (rd.has("d")) throw ScenarioError(rd.path("d"), "d is derived from the plant when a and b are omitted");
      checked(path, [&] {
        const DiscreteLtiD model = c2d_zoh(plant_spec(plant).tf, period_s);
        r.a = model.a().to_vector();
        r.b = model.b().to_vector();
        r.d = model.delay_d();
      });
    }
    r.p = rd.numbers("p");
    r.t_mode = rd.parsed("t_mode", "unit_dc_gain", tmode_from_string);
    r.out_min_V = rd.number("out_min_V", 0.0);
    r.out_max_V = rd.number("out_max_V", 4.5);
    if (!(r.out_min_V < r.out_max_V)) throw ScenarioError(path, "out_min_V must be < out_max_V");
    checked(path, [&] { design_rst(Poly(r.a), Poly(r.b), r.d, Poly(r.p), r.t_mode); });
  } else if (kind == "external") {
    c.kind = ControllerKind::kExternal;
  } else if (kind == "passthrough") {
    c.kind = ControllerKind::kPassThrough;
  } else if (kind == "echo") {
    c.kind = ControllerKind::kEcho;
  } else {
    throw ScenarioError(path, "unknown controller kind");
  }
  rd.finish();
  return c;
}

json controller_json(const ControllerConfig& c) {
  switch (c.kind) {
    case ControllerKind::kPid:
      return json{{"pid",
                   {{"kp", c.pid.kp},
                    {"ki", c.pid.ki},
                    {"kd", c.pid.kd},
                    {"out_min_V", c.pid.out_min_V},
                    {"out_max_V", c.pid.out_max_V},
                    {"anti_windup", c.anti_windup}}}};
    case ControllerKind::kRst:
      return json{{"rst",
                   {{"a", c.rst.a},
                    {"b", c.rst.b},
                    {"d", c.rst.d},
                    {"p", c.rst.p},
                    {"t_mode", to_string(c.rst.t_mode)},
                    {"out_min_V", c.rst.out_min_V},
                    {"out_max_V", c.rst.out_max_V}}}};
    case ControllerKind::kExternal: return json{{"external", json::object()}};
    case ControllerKind::kPassThrough: return json{{"passthrough", json::object()}};
    case ControllerKind::kEcho: return json{{"echo", json::object()}};
  }
  return json::object();
}

ReferenceSignal parse_reference(const json& j) {
  ObjectReader rd(j, "/reference");
  ReferenceSignal r;
  r.kind = rd.parsed("kind", "step", reference_kind_from_string);
  r.amplitude_V = rd.number("amplitude_V", 1.0);
  r.start_s = rd.number("start_s", 0.0);
  r.period_s = rd.number("period_s", 20.0);
  if (!(r.period_s > 0.0)) throw ScenarioError("/reference/period_s", "must be positive");
  rd.finish();
  return r;
}

HilEndpointConfig parse_transport(const json& j, double base_step_s) {
  ObjectReader rd(j, "/transport");
  HilEndpointConfig t;
  t.bind_address = rd.string("bind_address", t.bind_address);
  const auto port = [&](const std::string& key, std::int64_t fallback) {
    const std::int64_t v = rd.integer(key, fallback);
    if (v < 0 || v > 65535) throw ScenarioError(rd.path(key), "port out of range");
    return static_cast<std::uint16_t>(v);
  };
  t.bind_port = port("bind_port", 0);
  t.peer_address = rd.string("peer_address", t.peer_address);
  t.peer_port = port("peer_port", default_hil_port());
  const auto def_timeout = std::max<std::int64_t>(1, std::llround(base_step_s * 1000.0));
  t.step_timeout_ms = static_cast<int>(rd.integer("step_timeout_ms", def_timeout));
  rd.finish();
  checked("/transport", [&] { t.validate(); });
  return t;
}

}  // namespace

std::string to_string(ControllerKind k) {
  switch (k) {
    case ControllerKind::kPid: return "pid";
    case ControllerKind::kRst: return "rst";
    case ControllerKind::kExternal: return "external";
    case ControllerKind::kPassThrough: return "passthrough";
    case ControllerKind::kEcho: return "echo";
  }
  return "pid";
}

PlantSpec plant_spec(const PlantConfig& cfg) {
  PlantSpec spec;
  if (cfg.preset == "heat_exchanger") {
    spec = heat_exchanger_plant({cfg.K, cfg.tau1_s, cfg.tau2_s, cfg.dead_time_s});
  } else if (cfg.preset == "first_order") {
    spec = first_order_plant(cfg.K, cfg.tau1_s, cfg.dead_time_s);
  } else if (cfg.preset == "static_gain") {
    spec = static_gain_plant(cfg.K);
  } else if (cfg.preset == "custom") {
    spec.name = "custom";
    spec.tf = {Poly(cfg.num), Poly(cfg.den), cfg.dead_time_s};
  } else {
    throw std::invalid_argument("unknown plant preset '" + cfg.preset + "'");
  }
  spec.init_output = cfg.init_output;
  return spec;
}

std::int64_t Scenario::n_steps() const {
  return static_cast<std::int64_t>(std::floor(duration_s / base_step_s + 1e-9));
}

Scenario parse_scenario(const json& doc) {
  ObjectReader rd(doc, "");
  Scenario s;
  s.name = rd.string("name", s.name);
  s.mode = rd.parsed("mode", "sim", run_mode_from_string);
  s.base_step_s = rd.number("base_step_s", s.base_step_s);
  if (!(s.base_step_s > 0.0)) throw ScenarioError("/base_step_s", "must be positive");
  s.duration_s = rd.number("duration_s", s.duration_s);
  if (!(s.duration_s > 0.0)) throw ScenarioError("/duration_s", "must be positive");
  s.seed = rd.unsigned_integer("seed", 0);
  s.pacing = rd.parsed("pacing", s.mode == RunMode::kSim ? "as_fast_as_possible" : "wall_clock_paced",
                       pacing_from_string);

  s.controller_period_s = rd.number("controller_period_s", s.base_step_s);
  if (!(s.controller_period_s >= s.base_step_s * (1.0 - 1e-9))) {
    throw ScenarioError("/controller_period_s", "must be >= base_step_s");
  }
  s.plant = parse_plant(rd.at("plant"));
  s.controller = parse_controller(rd.at("controller"), s.plant, s.controller_period_s);
  s.reference = parse_reference(rd.at("reference"));

  if (s.mode != RunMode::kSim && !rd.has("card")) {
    throw ScenarioError("/card", "required section missing for mode " + to_string(s.mode));
  }
  s.card = rd.has("card") ? parse_card(rd.at("card"), s.seed) : CardConfig{};
  s.card.rng_seed = s.seed;

  s.tolerance = rd.number("tolerance", s.tolerance);
  if (!(s.tolerance > 0.0)) throw ScenarioError("/tolerance", "must be positive");
  s.max_retries = static_cast<int>(rd.integer("max_retries", s.max_retries));
  if (s.max_retries < 0) throw ScenarioError("/max_retries", "must be >= 0");
  s.cycle_cost_s = rd.number("cycle_cost_s", 0.0);
  if (s.cycle_cost_s < 0.0) throw ScenarioError("/cycle_cost_s", "must be >= 0");

  if (s.mode == RunMode::kHil && !rd.has("transport")) {
    throw ScenarioError("/transport", "required section missing for mode hil");
  }
  s.transport = parse_transport(rd.has("transport") ? rd.at("transport") : json::object(), s.base_step_s);
  if (s.controller.kind == ControllerKind::kExternal && s.mode != RunMode::kHil) {
    throw ScenarioError("/controller/external", "external controllers need mode hil");
  }
  rd.finish();
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario " + path);
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ScenarioError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& s) {
  return json{{"name", s.name},
              {"mode", to_string(s.mode)},
              {"base_step_s", s.base_step_s},
              {"duration_s", s.duration_s},
              {"seed", s.seed},
              {"pacing", to_string(s.pacing)},
              {"plant", plant_json(s.plant)},
              {"controller", controller_json(s.controller)},
              {"controller_period_s", s.controller_period_s},
              {"card", card_json(s.card)},
              {"reference",
               {{"kind", to_string(s.reference.kind)},
                {"amplitude_V", s.reference.amplitude_V},
                {"start_s", s.reference.start_s},
                {"period_s", s.reference.period_s}}},
              {"tolerance", s.tolerance},
              {"max_retries", s.max_retries},
              {"cycle_cost_s", s.cycle_cost_s},
              {"transport",
               {{"bind_address", s.transport.bind_address},
                {"bind_port", s.transport.bind_port},
                {"peer_address", s.transport.peer_address},
                {"peer_port", s.transport.peer_port},
                {"step_timeout_ms", s.transport.step_timeout_ms}}}};
}

RstDesign rst_design(const Scenario& s) {
  const RstConfig& r = s.controller.rst;
  return design_rst(Poly(r.a), Poly(r.b), r.d, Poly(r.p), r.t_mode);
}

std::unique_ptr<ControlLaw> make_control_law(const Scenario& s) {
  const ControllerConfig& c = s.controller;
  switch (c.kind) {
    case ControllerKind::kPid:
      return std::make_unique<PidController>(c.pid, s.controller_period_s, c.anti_windup);
    case ControllerKind::kRst:
      return std::make_unique<RstController>(rst_design(s),
                                             OutputLimits{c.rst.out_min_V, c.rst.out_max_V});
    case ControllerKind::kPassThrough: return std::make_unique<PassThroughLaw>();
    case ControllerKind::kEcho: return std::make_unique<EchoLaw>();
    case ControllerKind::kExternal: break;
  }
  throw std::invalid_argument("external controllers run in a separate process");
}

RunResult run_scenario(const Scenario& s) {
  PlantInstance plant = make_plant(plant_spec(s.plant), s.base_step_s);
  LoopOptions opts;
  opts.mode = s.mode;
  opts.timebase = {s.base_step_s, s.n_steps(), s.pacing};
  opts.controller_period_s = s.controller_period_s;
  opts.tol_frac = s.tolerance;
  opts.max_retries = s.max_retries;
  opts.cycle_cost_s = s.cycle_cost_s;

  if (s.mode == RunMode::kSim) {
    auto law = make_control_law(s);
    return run_loop(opts, s.reference, plant, law.get(), nullptr, nullptr);
  }

  VirtualAddaCard card(s.card);
  const CalibrationTable table = calibrate(s.card);
  if (s.mode == RunMode::kRt) {
    auto law = make_control_law(s);
    return run_loop(opts, s.reference, plant, law.get(), &card, &table);
  }

  HilEndpoint endpoint(s.transport);
  if (!endpoint.sync(s.base_step_s)) {
    throw std::runtime_error("no SYNC acknowledgement from HiL peer at " + s.transport.peer_address +
                             ":" + std::to_string(s.transport.peer_port));
  }
  RunResult res = run_loop(opts, s.reference, plant, &endpoint, &card, &table);
  endpoint.bye();
  return res;
}

}  // namespace hilsim
