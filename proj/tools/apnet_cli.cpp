// apnet: command-line front end for the network solver.
//
// Exit codes: 0 success, 2 validation error, 3 numerical abort, 1 other errors.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apnet/io.hpp"
#include "apnet/oracle.hpp"
#include "apnet/plot.hpp"
#include "apnet/riemann.hpp"
#include "apnet/scenarios.hpp"
#include "apnet/simulator.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace apnet;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

RoadState triple(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) throw ValidationError(std::string(what) + ": expected rho,w,c");
  return {v[0], v[1], v[2]};
}

nlohmann::json state_json(const RoadState& u, double gamma) {
  return {{"rho", std::stod(format_number(u.rho))},
          {"w", std::stod(format_number(u.w))},
          {"c", std::stod(format_number(u.c))},
          {"v", std::stod(format_number(velocity(u, gamma)))}};
}

double num(double x) { return std::stod(format_number(x)); }

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  std::string scheme;
  std::string model;
  double dx = 0.0;
  double dt_ratio = 0.0;
  std::string out = "out";
  bool emit_plot = false;
  std::vector<int> chain;
};

Network load_network(const std::string& name, std::vector<std::string>& warnings) {
  if (!fs::exists(name)) {
    if (name == "merge21") return scenario_merge21({});
    if (name == "sequential") return scenario_sequential({});
    if (name == "sequential-congested") {
      SequentialParams p;
      p.congested = true;
      return scenario_sequential(p);
    }
  }
  auto parsed = parse_scenario(name);
  warnings = parsed.warnings;
  return parsed.network;
}

int cmd_simulate(const SimulateArgs& a) {
  std::vector<std::string> warnings;
  Network net = load_network(a.scenario, warnings);
  if (!a.scheme.empty()) {
    auto s = parse_scheme(a.scheme);
    if (!s) throw ValidationError("--scheme: expected te or godunov");
    net.scheme = *s;
  }
  if (!a.model.empty()) {
    auto m = parse_model(a.model);
    if (!m) throw ValidationError("--model: expected ap or lwr");
    net.model = *m;
  }
  if (a.dx > 0.0) net.set_cell_size(a.dx);
  if (a.dt_ratio > 0.0) net.time.dt_ratio = a.dt_ratio;

  const SimulationRecord rec = run(net);
  for (const auto& w : rec.warnings) std::cerr << "warning: " << w << "\n";

  const auto files = write_results(rec, net, a.out);
  if (a.emit_plot) {
    PlotOptions opts;
    opts.chain = a.chain;
    write_text_file(fs::path(a.out) / "plot_profile.py", emit_plot(rec, PlotKind::Profile, opts));
    write_text_file(fs::path(a.out) / "plot_marker.py", emit_plot(rec, PlotKind::Marker, opts));
  }
  std::printf("network %s: %zu steps, dt = %s, %zu events\n", rec.network_name.c_str(), rec.steps,
              format_number(rec.dt).c_str(), rec.events.size());
  for (const auto& e : rec.events) {
    std::printf("  junction %d adapts at t = %s (w_bar %s -> %s, c_bar/c0 = %s)\n", e.junction_id,
                format_number(e.t_star).c_str(), format_number(e.w_bar_old).c_str(),
                format_number(e.w_bar_new).c_str(), format_number(e.coeff_ratio).c_str());
  }
  std::printf("wrote %s, %s, %s\n", files.fields.string().c_str(), files.events.string().c_str(),
              files.summary.string().c_str());
  return 0;
}

// ---- riemann ---------------------------------------------------------------

struct RiemannArgs {
  std::vector<double> left, right;
  double gamma = 1.0;
  double time = -1.0;
  double xmin = -1.0, xmax = 1.0;
  int samples = 201;
};

int cmd_riemann(const RiemannArgs& a) {
  const RoadState l = triple(a.left, "--left");
  const RoadState r = triple(a.right, "--right");
  validate(l, a.gamma);
  validate(r, a.gamma);
  const RiemannSolution sol = solve_riemann(l, r, a.gamma);

  nlohmann::json doc = {
      {"gamma", num(a.gamma)},
      {"left", state_json(l, a.gamma)},
      {"right", state_json(r, a.gamma)},
      {"middle", state_json(sol.middle, a.gamma)},
      {"wave1", to_string(sol.wave1)},
      {"contact_speed", num(sol.contact_speed)},
  };
  if (sol.wave1 == WaveKind::Shock) doc["shock_speed"] = num(sol.shock_speed);
  if (sol.wave1 == WaveKind::Rarefaction) doc["fan"] = {num(sol.fan_begin), num(sol.fan_end)};

  if (a.time >= 0.0) {
    if (a.samples < 2 || !(a.xmax > a.xmin)) throw ValidationError("riemann: need --samples >= 2 and --xmax > --xmin");
    nlohmann::json profile = nlohmann::json::array();
    for (int k = 0; k < a.samples; ++k) {
      const double x = a.xmin + (a.xmax - a.xmin) * k / (a.samples - 1);
      RoadState u;
      if (a.time > 0.0) {
        u = evaluate(sol, x / a.time);
      } else {
        u = x < 0.0 ? l : r;
      }
      auto row = state_json(u, a.gamma);
      row["x"] = num(x);
      profile.push_back(row);
    }
    doc["time"] = num(a.time);
    doc["profile"] = profile;
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
  std::vector<double> beta, w;
  double c0 = 1.0;
  double gamma = 1.0;
  int grid = kDefaultOracleGrid;
  std::string out;
  bool emit_plot = false;
};

int cmd_oracle(const OracleArgs& a) {
  MixtureSpec mix{a.beta, a.w, a.c0, a.gamma};
  const HomogenizedPressureTable table = build_table(mix, a.grid);
  double max_err = 0.0;
  for (const auto& e : table.entries) max_err = std::max(max_err, std::abs(e.p_star - eval_pstarstar(table, e.rho)));

  const std::string csv = oracle_csv(table);
  if (a.out.empty()) {
    std::cout << csv;
    return 0;
  }
  fs::create_directories(a.out);
  write_text_file(fs::path(a.out) / "oracle.csv", csv);
  if (a.emit_plot) write_text_file(fs::path(a.out) / "plot_pressure.py", emit_pressure_plot());
  std::printf("w_bar = %s, c_bar = %s, rho in [%s, %s], max |p* - p**| = %s\n", format_number(table.w_bar).c_str(),
              format_number(table.c_bar).c_str(), format_number(table.rho_min()).c_str(),
              format_number(table.rho_max()).c_str(), format_number(max_err).c_str());
  return 0;
}

// ---- scenario --------------------------------------------------------------

struct ScenarioArgs {
  std::string name;
  bool emit = false;
  std::string out;
  Merge21Params merge;
  SequentialParams seq;
  std::vector<double> road1, road2, road3;
};

int cmd_scenario(ScenarioArgs a) {
  Network net;
  if (a.name == "merge21") {
    if (!a.road1.empty()) a.merge.road1 = triple(a.road1, "--road1");
    if (!a.road2.empty()) a.merge.road2 = triple(a.road2, "--road2");
    if (!a.road3.empty()) a.merge.road3 = triple(a.road3, "--road3");
    net = scenario_merge21(a.merge);
  } else if (a.name == "sequential") {
    net = scenario_sequential(a.seq);
  } else {
    throw ValidationError("scenario: expected merge21 or sequential");
  }
  const auto warnings = net.validate();
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  if (!a.emit) {
    std::printf("%s: %zu roads, %zu junctions, %zu boundaries\n", net.name.c_str(), net.roads.size(),
                net.junctions.size(), net.boundaries.size());
    return 0;
  }
  const std::string text = emit_scenario(net);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(a.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adapted-pressure traffic network solver"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write fields/events/summary");
  simulate->add_option("scenario", sim.scenario, "Scenario JSON file, or merge21 | sequential | sequential-congested")
      ->required();
  simulate->add_option("--scheme", sim.scheme, "te | godunov");
  simulate->add_option("--model", sim.model, "ap | lwr");
  simulate->add_option("--dx", sim.dx, "Cell size override");
  simulate->add_option("--dt-ratio", sim.dt_ratio, "dt/dx override");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_flag("--emit-plot", sim.emit_plot, "Also write plotting scripts");
  simulate->add_option("--chain", sim.chain, "Road ids laid end to end in the marker plot")->delimiter(',');

  RiemannArgs rie;
  auto* riemann = app.add_subcommand("riemann", "Solve a single-road Riemann problem");
  riemann->add_option("--left", rie.left, "rho,w,c")->delimiter(',')->required();
  riemann->add_option("--right", rie.right, "rho,w,c")->delimiter(',')->required();
  riemann->add_option("--gamma", rie.gamma, "Pressure exponent")->required();
  riemann->add_option("--time", rie.time, "Sample the solution at this time");
  riemann->add_option("--xmin", rie.xmin)->capture_default_str();
  riemann->add_option("--xmax", rie.xmax)->capture_default_str();
  riemann->add_option("--samples", rie.samples)->capture_default_str();

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Tabulate the homogenized pressure of a mixture");
  oracle->add_option("--beta", orc.beta, "Shares B1,B2,...")->delimiter(',')->required();
  oracle->add_option("--w", orc.w, "Markers W1,W2,...")->delimiter(',')->required();
  oracle->add_option("--c0", orc.c0, "Initial pressure coefficient")->required();
  oracle->add_option("--gamma", orc.gamma, "Pressure exponent")->required();
  oracle->add_option("--grid", orc.grid, "Number of table nodes")->capture_default_str();
  oracle->add_option("--out", orc.out, "Write oracle.csv into this directory instead of stdout");
  oracle->add_flag("--emit-plot", orc.emit_plot, "With --out, also write plot_pressure.py");

  ScenarioArgs scn;
  auto* scenario = app.add_subcommand("scenario", "Build a built-in network");
  scenario->add_option("name", scn.name, "merge21 | sequential")->required();
  scenario->add_flag("--emit", scn.emit, "Print the scenario JSON");
  scenario->add_option("--out", scn.out, "With --emit, write to this file");
  scenario->add_option("--beta", scn.merge.beta, "Priority of the first incoming road");
  scenario->add_option("--gamma", scn.merge.gamma);
  scenario->add_option("--length", scn.merge.length);
  scenario->add_option("--dx", scn.merge.dx);
  scenario->add_option("--dt-ratio", scn.merge.dt_ratio);
  scenario->add_option("--horizon", scn.merge.horizon);
  scenario->add_option("--output-every", scn.merge.output_every);
  scenario->add_option("--road1", scn.road1, "merge21: rho,w,c")->delimiter(',');
  scenario->add_option("--road2", scn.road2, "merge21: rho,w,c")->delimiter(',');
  scenario->add_option("--road3", scn.road3, "merge21: rho,w,c")->delimiter(',');
  scenario->add_option("--n", scn.seq.n, "sequential: number of merges");
  scenario->add_option("--a", scn.seq.a, "sequential: marker on side roads and main line");
  scenario->add_option("--b", scn.seq.b, "sequential: marker on road 0");
  scenario->add_option("--rho", scn.seq.rho, "sequential: initial density");
  scenario->add_option("--c0", scn.seq.c0, "sequential: initial pressure coefficient");
  scenario->add_flag("--congested", scn.seq.congested, "sequential: jammed, closed last road");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  // Shared scenario options default to the merge21 values; copy them over
  // for the sequential network only when given explicitly.
  if (scenario->parsed() && scn.name == "sequential") {
    SequentialParams& s = scn.seq;
    if (scenario->count("--beta")) s.beta = scn.merge.beta;
    if (scenario->count("--gamma")) s.gamma = scn.merge.gamma;
    if (scenario->count("--length")) s.length = scn.merge.length;
    if (scenario->count("--dx")) s.dx = scn.merge.dx;
    if (scenario->count("--dt-ratio")) s.dt_ratio = scn.merge.dt_ratio;
    if (scenario->count("--horizon")) s.horizon = scn.merge.horizon;
    if (scenario->count("--output-every")) s.output_every = scn.merge.output_every;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (riemann->parsed()) return cmd_riemann(rie);
    if (oracle->parsed()) return cmd_oracle(orc);
    if (scenario->parsed()) return cmd_scenario(scn);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
