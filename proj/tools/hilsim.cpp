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

// hilsim: command-line front end for the HiL / real-time control simulator.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>

#include "hilsim/calibration.hpp"
#include "hilsim/controllers.hpp"
#include "hilsim/plot.hpp"
#include "hilsim/scenario.hpp"
#include "hilsim/trace.hpp"
#include "hilsim/transport.hpp"

namespace {

using nlohmann::json;
using namespace hilsim;

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

json poly_json(const Poly& p) { return p.to_vector(); }

int cmd_run(const std::string& path, const std::optional<std::string>& mode,
            const std::optional<std::string>& out, const std::optional<std::uint64_t>& seed,
            const std::optional<double>& duration, const std::optional<std::string>& plot_path,
            const std::optional<std::string>& pacing) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario " + path);
  json doc = json::parse(is);
  if (mode) {
    doc["mode"] = *mode;
    if (!pacing && doc.contains("pacing") && *mode == "sim") doc.erase("pacing");
  }
  if (seed) {
    doc["seed"] = *seed;
    if (doc.contains("card")) doc["card"].erase("rng_seed");
  }
  if (duration) doc["duration_s"] = *duration;
  if (pacing) doc["pacing"] = *pacing == "fast" ? "as_fast_as_possible"
                              : *pacing == "paced" ? "wall_clock_paced"
                                                   : *pacing;
  const Scenario sc = parse_scenario(doc);

  const RunResult res = run_scenario(sc);
  const std::string trace_path = out.value_or(sc.name + ".trace.csv");
  write_trace_csv(trace_path, res.trace);
  if (plot_path) plot(trace_path, *plot_path);

  json j;
  j["report"] = to_json(res.report);
  j["trace_path"] = trace_path;
  if (plot_path) j["plot_path"] = *plot_path;
  j["scenario"] = to_json(sc);
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int cmd_design_rst(std::vector<double> a, std::vector<double> b, int d, std::vector<double> p,
                   const std::string& t_mode, const std::optional<std::string>& json_path) {
  TMode mode = tmode_from_string(t_mode);
  if (json_path) {
    std::ifstream is(*json_path);
    if (!is) throw std::runtime_error("cannot open " + *json_path);
    const json j = json::parse(is);
    a = j.at("a").get<std::vector<double>>();
    b = j.at("b").get<std::vector<double>>();
    d = j.value("d", 0);
    p = j.at("p").get<std::vector<double>>();
    if (j.contains("t_mode")) mode = tmode_from_string(j.at("t_mode").get<std::string>());
  }
  if (a.empty() || b.empty() || p.empty()) throw std::invalid_argument("A, B and P are required");
  const RstDesign design = design_rst(Poly(a), Poly(b), d, Poly(p), mode);
  const json out{{"r", poly_json(design.r)},
                 {"s", poly_json(design.s)},
                 {"t", poly_json(design.t)},
                 {"t_mode", to_string(design.t_mode)},
                 {"residual", design.residual()}};
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_calibrate(const std::optional<std::string>& scenario, std::optional<double> alpha,
                  std::optional<double> actual_max, std::optional<double> nominal,
                  std::optional<int> bits, const std::optional<std::string>& csv) {
  CardConfig cfg = scenario ? parse_scenario_file(*scenario).card : CardConfig{};
  if (alpha) cfg.nonlin_alpha = *alpha;
  if (actual_max) cfg.actual_max_V = *actual_max;
  if (nominal) cfg.nominal_fullscale_V = *nominal;
  if (bits) cfg.bits = *bits;
  const CalibrationTable table = calibrate(cfg);
  if (csv) {
    std::ofstream os(*csv);
    if (!os) throw std::runtime_error("cannot open " + *csv + " for writing");
    write_lut_csv(os, table, cfg);
  }
  const json out{{"gain", table.gain},
                 {"achieved_max_V", table.achieved_max_V},
                 {"effective_lsb_V", table.effective_lsb_V()},
                 {"residual_max_V", table.residual_max_V},
                 {"entries", table.inverse_lut.size()}};
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_hil_peer(const std::string& law_name, const std::optional<std::string>& scenario,
                 std::optional<int> port, const std::string& bind, bool once) {
  std::unique_ptr<ControlLaw> law;
  ReferenceSignal reference;
  CardConfig scaling;
  PeerOptions opts;
  opts.bind_address = bind;
  opts.port = port ? static_cast<std::uint16_t>(*port) : default_hil_port();
  opts.once = once;
  if (law_name == "rst") {
    if (!scenario) throw std::invalid_argument("--law rst needs --scenario for the design and reference");
    const Scenario sc = parse_scenario_file(*scenario);
    if (sc.controller.kind != ControllerKind::kRst) {
      throw std::invalid_argument("scenario " + *scenario + " does not describe an rst controller");
    }
    law = make_control_law(sc);
    reference = sc.reference;
    scaling = sc.card;
    opts.default_base_step_s = sc.base_step_s;
  } else if (law_name != "echo") {
    throw std::invalid_argument("unknown law '" + law_name + "' (expected rst or echo)");
  }
  HilPeer peer(opts, std::move(law), reference, scaling);
  std::cerr << "hil-peer (" << law_name << ") listening on " << bind << ":" << peer.port() << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  peer.serve(g_stop);
  std::cerr << "hil-peer served " << peer.sensor_frames() << " sensor frames" << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hilsim: hardware-in-the-loop and real-time control simulation"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
  std::string scenario_path;
  std::optional<std::string> mode, out, plot_path, pacing;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--mode", mode, "Override the mode")->check(CLI::IsMember({"sim", "rt", "hil"}));
  run->add_option("--out", out, "Trace CSV path (default <name>.trace.csv)");
  run->add_option("--seed", seed, "Override the random seed");
  run->add_option("--duration", duration, "Override duration_s");
  run->add_option("--plot", plot_path, "Also write an SVG plot");
  run->add_option("--pacing", pacing, "fast | paced")
      ->check(CLI::IsMember({"fast", "paced", "as_fast_as_possible", "wall_clock_paced"}));

  auto* design = app.add_subcommand("design-rst", "Solve the pole-placement design for R, S, T");
  std::vector<double> a, b, p;
  int d = 0;
  std::string t_mode = "unit_dc_gain";
  std::optional<std::string> design_json;
  design->add_option("--a", a, "A coefficients in q^-1, comma separated")->delimiter(',');
  design->add_option("--b", b, "B coefficients")->delimiter(',');
  design->add_option("--d", d, "Extra delay in samples");
  design->add_option("--p", p, "Desired closed-loop polynomial")->delimiter(',');
  design->add_option("--t-mode", t_mode, "unit_dc_gain | paper_literal");
  design->add_option("--json", design_json, "Read a, b, d, p, t_mode from a JSON file");

  auto* calib = app.add_subcommand("calibrate", "Build the DAC linearization table");
  std::optional<std::string> calib_scenario, csv;
  std::optional<double> alpha, actual_max, nominal;
  std::optional<int> bits;
  calib->add_option("--scenario", calib_scenario, "Take the card section from a scenario");
  calib->add_option("--alpha", alpha, "nonlin_alpha");
  calib->add_option("--actual-max", actual_max, "actual_max_V");
  calib->add_option("--nominal", nominal, "nominal_fullscale_V");
  calib->add_option("--bits", bits, "Converter bits");
  calib->add_option("--csv", csv, "Dump the lookup table as CSV");

  auto* peer = app.add_subcommand("hil-peer", "Reference external controller over UDP");
  std::string law = "echo";
  std::optional<std::string> peer_scenario;
  std::optional<int> port;
  std::string bind = "127.0.0.1";
  bool once = false;
  peer->add_option("--law", law, "rst | echo")->check(CLI::IsMember({"rst", "echo"}));
  peer->add_option("--scenario", peer_scenario, "Scenario providing the RST design");
  peer->add_option("--port", port, "UDP port (default HILSIM_PORT or 47055)");
  peer->add_option("--bind", bind, "Bind address");
  peer->add_flag("--once", once, "Exit after the first session ends");

  auto* plot_cmd = app.add_subcommand("plot", "Render a trace CSV as SVG");
  std::string trace_in, svg_out;
  plot_cmd->add_option("trace", trace_in, "Trace CSV")->required();
  plot_cmd->add_option("svg", svg_out, "Output SVG")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario_path, mode, out, seed, duration, plot_path, pacing);
    if (*design) return cmd_design_rst(a, b, d, p, t_mode, design_json);
    if (*calib) return cmd_calibrate(calib_scenario, alpha, actual_max, nominal, bits, csv);
    if (*peer) return cmd_hil_peer(law, peer_scenario, port, bind, once);
    if (*plot_cmd) {
      plot(trace_in, svg_out);
      return 0;
    }
  } catch (const SingularSylvester& e) {
    std::cerr << "SingularSylvester: " << e.what() << std::endl;
    return 2;
  } catch (const DegreeTooHigh& e) {
    std::cerr << "DegreeTooHigh: " << e.what() << std::endl;
    return 2;
  } catch (const ZeroStaticGain& e) {
    std::cerr << "ZeroStaticGain: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
