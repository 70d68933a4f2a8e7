// Command-line front end: steady-state runs, (Pi, K) sweeps, the s1
// population maximization and transient evolution, with CSV/JSON/SVG output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavent/analysis.hpp"
#include "cavent/io.hpp"

namespace {

using nlohmann::json;

struct Settings {
  std::string scenario = "closed_n2";
  double gamma = 1.0;
  double gamma21 = 1.0;
  double gamma23 = 1.0;
  double pi = 1.0;
  double k = 1.0;
  double g = 1.0;
  int n_max = 0;  // 0: scenario default
  std::vector<std::string> leak_mult;
  bool strict_collective_decay = false;
  bool units_of_gamma = false;
  unsigned seed = 0;
  std::string config_path;
  std::string json_path;
  std::string csv_path;
  std::string svg_path;
  std::string svg_field = "script_c";
  double pi_min = 0.05, pi_max = 5.0, k_min = 0.05, k_max = 5.0;
  int resolution = 50;
  double t_max = 10.0;
  int steps = 200;
  int max_evals = 0;  // 0: library default

  std::map<std::string, CLI::Option*> options;
};

void add_common_options(CLI::App* cmd, Settings& s) {
  s.options["scenario"] = cmd->add_option("--scenario", s.scenario,
                                          "closed_n2|closed_n1|closed_asym_start|open_pi_pulse|nonlinear_leak");
  s.options["gamma"] = cmd->add_option("--gamma", s.gamma, "collective 2->1 decay rate");
  s.options["gamma21"] = cmd->add_option("--gamma21", s.gamma21, "open-atom 2->1 decay rate");
  s.options["gamma23"] = cmd->add_option("--gamma23", s.gamma23, "open-atom 2->3 decay rate");
  s.options["pi"] = cmd->add_option("--pi", s.pi, "single-photon pump rate");
  s.options["k"] = cmd->add_option("--k", s.k, "cavity leakage rate");
  s.options["g"] = cmd->add_option("--g", s.g, "atom-field coupling (diagnostics)");
  s.options["n_max"] = cmd->add_option("--n-max", s.n_max, "excitation truncation");
  s.options["leak_mult"] =
      cmd->add_option("--leak-mult", s.leak_mult, "per-manifold leak factor, e.g. 2:100")
          ->take_all();
  s.options["strict_collective_decay"] = cmd->add_flag(
      "--strict-collective-decay", s.strict_collective_decay,
      "derive open-atom 2->3 rates for the dark states too");
  s.options["units_of_gamma"] =
      cmd->add_flag("--units-of-gamma", s.units_of_gamma, "normalize all rates by gamma");
  s.options["seed"] = cmd->add_option("--seed", s.seed, "optimizer seed");
  s.options["config"] = cmd->add_option("--config", s.config_path, "JSON config file");
  s.options["json"] = cmd->add_option("--json", s.json_path, "write a JSON record");
}

bool was_set(const Settings& s, const std::string& key) {
  auto it = s.options.find(key);
  return it != s.options.end() && it->second != nullptr && it->second->count() > 0;
}

void apply_config(Settings& s) {
  if (s.config_path.empty()) return;
  std::ifstream in(s.config_path);
  if (!in) throw std::invalid_argument("cannot read config file: " + s.config_path);
  json cfg = json::parse(in);
  if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");

  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (was_set(s, key)) continue;  // flags override the file
    if (key == "scenario") s.scenario = v.get<std::string>();
    else if (key == "gamma") s.gamma = v.get<double>();
    else if (key == "gamma21") s.gamma21 = v.get<double>();
    else if (key == "gamma23") s.gamma23 = v.get<double>();
    else if (key == "pi") s.pi = v.get<double>();
    else if (key == "k") s.k = v.get<double>();
    else if (key == "g") s.g = v.get<double>();
    else if (key == "n_max") s.n_max = v.get<int>();
    else if (key == "strict_collective_decay") s.strict_collective_decay = v.get<bool>();
    else if (key == "units_of_gamma") s.units_of_gamma = v.get<bool>();
    else if (key == "seed") s.seed = v.get<unsigned>();
    else if (key == "pi_min") s.pi_min = v.get<double>();
    else if (key == "pi_max") s.pi_max = v.get<double>();
    else if (key == "k_min") s.k_min = v.get<double>();
    else if (key == "k_max") s.k_max = v.get<double>();
    else if (key == "resolution") s.resolution = v.get<int>();
    else if (key == "t_max") s.t_max = v.get<double>();
    else if (key == "steps") s.steps = v.get<int>();
    else if (key == "max_evals") s.max_evals = v.get<int>();
    else if (key == "leak_mult") {
      if (!v.is_object()) throw std::invalid_argument("leak_mult must map manifold to factor");
      for (auto lm = v.begin(); lm != v.end(); ++lm)
        s.leak_mult.push_back(lm.key() + ":" + std::to_string(lm.value().get<double>()));
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

std::map<int, double> parse_leak_multipliers(const std::vector<std::string>& entries) {
  std::map<int, double> out;
  for (const std::string& entry : entries) {
    const auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("leak multiplier must look like n:factor, got " + entry);
    out[std::stoi(entry.substr(0, colon))] = std::stod(entry.substr(colon + 1));
  }
  return out;
}

cavent::Scenario build_scenario(Settings& s) {
  apply_config(s);
  const auto name = cavent::parse_scenario(s.scenario);
  if (!name) throw std::invalid_argument("unknown scenario: " + s.scenario);

  cavent::ModelParams params = cavent::default_params(*name);
  if (*name == cavent::ScenarioName::OpenPiPulse)
    params.kind = cavent::AtomKind::open_atoms(s.gamma21, s.gamma23);
  params.gamma = s.gamma;
  params.pump = s.pi;
  params.leak = s.k;
  params.coupling = s.g;
  if (s.n_max > 0) params.n_max = s.n_max;
  for (const auto& [n, factor] : parse_leak_multipliers(s.leak_mult))
    params.leak_multiplier[n] = factor;
  params.strict_collective_decay = s.strict_collective_decay;

  if (s.units_of_gamma) {
    const double unit = params.gamma21();
    params.pump /= unit;
    params.leak /= unit;
    if (params.kind.open) {
      params.kind.gamma21 = 1.0;
      params.kind.gamma23 /= unit;
    } else {
      params.gamma = 1.0;
    }
  }
  return cavent::make_scenario(*name, std::move(params));
}

json params_record(const cavent::ModelParams& params) {
  json rec;
  if (params.kind.open) {
    rec["gamma21"] = params.kind.gamma21;
    rec["gamma23"] = params.kind.gamma23;
  } else {
    rec["gamma"] = params.gamma;
  }
  rec["pi"] = params.pump;
  rec["k"] = params.leak;
  rec["g"] = params.coupling;
  rec["n_max"] = params.n_max;
  if (!params.leak_multiplier.empty()) {
    json mults;
    for (const auto& [n, factor] : params.leak_multiplier)
      mults[std::to_string(n)] = factor;
    rec["leak_mult"] = mults;
  }
  if (params.kind.open) rec["strict_collective_decay"] = params.strict_collective_decay;
  return rec;
}

json split_record(const cavent::PopulationSplit& split) {
  json rec;
  rec["p_g"] = split.p_g;
  rec["p_s1"] = split.p_s1;
  rec["p_s2"] = split.p_s2;
  rec["p_oprime2"] = split.p_oprime2;
  if (split.p_dark) rec["p_dark"] = *split.p_dark;
  if (split.p_33) rec["p_33"] = *split.p_33;
  return rec;
}

void print_row(const std::string& key, const std::string& value) {
  std::printf("%-16s %s\n", key.c_str(), value.c_str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write to " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

int cmd_steady(Settings& s) {
  const cavent::Scenario scenario = build_scenario(s);
  const cavent::ScenarioRun run = cavent::run_scenario(scenario);

  print_row("scenario", cavent::to_string(scenario.name));
  const json params = params_record(scenario.params);
  for (auto it = params.begin(); it != params.end(); ++it) {
    if (it.value().is_number_float())
      print_row(it.key(), cavent::io::format_sig(it.value().get<double>()));
    else if (it.value().is_number_integer())
      print_row(it.key(), std::to_string(it.value().get<int64_t>()));
  }
  if (run.split) {
    const json split = split_record(*run.split);
    for (auto it = split.begin(); it != split.end(); ++it)
      print_row(it.key(), cavent::io::format_sig(it.value().get<double>()));
  }
  if (run.measures.script_c) print_row("script_c", cavent::io::format_sig(*run.measures.script_c));
  if (run.measures.concurrence)
    print_row("concurrence", cavent::io::format_sig(*run.measures.concurrence));
  if (run.measures.bell_fraction)
    print_row("bell_fraction", cavent::io::format_sig(*run.measures.bell_fraction));

  if (!s.json_path.empty()) {
    json rec;
    rec["scenario"] = cavent::to_string(scenario.name);
    rec["params"] = params;
    json pops;
    for (int i = 0; i < run.matrix.size(); ++i) pops[run.matrix.labels()[i]] = run.steady[i];
    rec["populations"] = pops;
    if (run.split) rec["split"] = split_record(*run.split);
    json measures;
    if (run.measures.script_c) measures["script_c"] = *run.measures.script_c;
    if (run.measures.concurrence) measures["concurrence"] = *run.measures.concurrence;
    if (run.measures.bell_fraction) measures["bell_fraction"] = *run.measures.bell_fraction;
    rec["measures"] = measures;
    write_text_file(s.json_path, cavent::io::dump_json(rec));
  }
  return 0;
}

cavent::io::SweepField parse_svg_field(const std::string& field) {
  if (field == "script_c") return cavent::io::SweepField::ScriptC;
  if (field == "p_s1") return cavent::io::SweepField::Ps1;
  if (field == "concurrence") return cavent::io::SweepField::Concurrence;
  throw std::invalid_argument("unknown svg field: " + field);
}

int cmd_sweep(Settings& s) {
  const cavent::Scenario scenario = build_scenario(s);
  const cavent::SweepResult result =
      cavent::sweep(scenario, s.pi_min, s.pi_max, s.k_min, s.k_max, s.resolution);

  if (s.csv_path.empty()) {
    cavent::io::write_sweep_csv(std::cout, result);
  } else {
    std::ostringstream csv;
    cavent::io::write_sweep_csv(csv, result);
    write_text_file(s.csv_path, csv.str());
  }
  if (!s.svg_path.empty()) {
    std::ostringstream svg;
    cavent::io::write_svg_heatmap(svg, result, parse_svg_field(s.svg_field),
                                  cavent::to_string(scenario.name) + " " + s.svg_field);
    write_text_file(s.svg_path, svg.str());
  }
  return 0;
}

int cmd_maximize(Settings& s) {
  apply_config(s);
  cavent::MaximizeOptions options;
  options.seed = s.seed;
  options.leak_multiplier = parse_leak_multipliers(s.leak_mult);
  if (s.max_evals > 0) options.max_evals = s.max_evals;

  auto report = [&](const cavent::MaximizeResult& result, bool budget_hit) {
    print_row("pi", cavent::io::format_sig(result.pump));
    print_row("k", cavent::io::format_sig(result.leak));
    const json split = split_record(result.split);
    for (auto it = split.begin(); it != split.end(); ++it)
      print_row(it.key(), cavent::io::format_sig(it.value().get<double>()));
    print_row("concurrence", cavent::io::format_sig(result.concurrence));
    print_row("evals", std::to_string(result.evals));
    print_row("converged", budget_hit ? "false" : "true");
    if (!s.json_path.empty()) {
      json rec;
      rec["pi"] = result.pump;
      rec["k"] = result.leak;
      rec["split"] = split;
      rec["concurrence"] = result.concurrence;
      rec["evals"] = result.evals;
      rec["converged"] = !budget_hit;
      rec["seed"] = s.seed;
      write_text_file(s.json_path, cavent::io::dump_json(rec));
    }
  };

  try {
    report(cavent::maximize_ps1(options), false);
  } catch (const cavent::BudgetExceeded& e) {
    report(e.best, true);
    return 3;
  }
  return 0;
}

int cmd_evolve(Settings& s) {
  const cavent::Scenario scenario = build_scenario(s);
  if (s.t_max < 0.0) throw std::invalid_argument("t_max must be non-negative");
  if (s.steps < 1) throw std::invalid_argument("steps must be at least 1");

  const cavent::DressedLadder ladder =
      cavent::build_ladder(scenario.params.n_max, scenario.params.kind);
  const cavent::RateMatrix m =
      scenario.params.kind.open ? cavent::build_open_rate_matrix(ladder, scenario.params)
                                : cavent::build_rate_matrix(ladder, scenario.params);
  const cavent::PopulationVector p0 = cavent::scenario_initial(scenario, m);

  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  for (int i = 0; i <= s.steps; ++i) {
    const double t = s.t_max * i / s.steps;
    times.push_back(t);
    states.push_back(cavent::evolve(m, p0, t).values());
  }

  if (s.csv_path.empty()) {
    cavent::io::write_evolve_csv(std::cout, m.labels(), times, states);
  } else {
    std::ostringstream csv;
    cavent::io::write_evolve_csv(csv, m.labels(), times, states);
    write_text_file(s.csv_path, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dressed-state rate equations for two atoms in a pumped, lossy cavity"};
  app.require_subcommand(1);

  Settings s_steady, s_sweep, s_max, s_evolve;

  CLI::App* steady = app.add_subcommand("steady", "steady-state populations and entanglement");
  add_common_options(steady, s_steady);

  CLI::App* sweep = app.add_subcommand("sweep", "grid over (pi, k) in units of gamma");
  add_common_options(sweep, s_sweep);
  s_sweep.options["pi_min"] = sweep->add_option("--pi-min", s_sweep.pi_min, "grid start");
  s_sweep.options["pi_max"] = sweep->add_option("--pi-max", s_sweep.pi_max, "grid end");
  s_sweep.options["k_min"] = sweep->add_option("--k-min", s_sweep.k_min, "grid start");
  s_sweep.options["k_max"] = sweep->add_option("--k-max", s_sweep.k_max, "grid end");
  s_sweep.options["resolution"] =
      sweep->add_option("--resolution", s_sweep.resolution, "points per axis");
  s_sweep.options["csv"] = sweep->add_option("--csv", s_sweep.csv_path, "CSV output path");
  sweep->add_option("--svg", s_sweep.svg_path, "SVG heatmap path");
  sweep->add_option("--svg-field", s_sweep.svg_field, "script_c|p_s1|concurrence");

  CLI::App* maximize = app.add_subcommand("maximize", "maximize the steady-state s1 population");
  add_common_options(maximize, s_max);
  s_max.options["max_evals"] =
      maximize->add_option("--max-evals", s_max.max_evals, "optimizer evaluation budget");

  CLI::App* evolve = app.add_subcommand("evolve", "transient populations to CSV");
  add_common_options(evolve, s_evolve);
  s_evolve.options["t_max"] = evolve->add_option("--t-max", s_evolve.t_max, "final time");
  s_evolve.options["steps"] = evolve->add_option("--steps", s_evolve.steps, "row count");
  s_evolve.options["csv"] = evolve->add_option("--csv", s_evolve.csv_path, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (steady->parsed()) return cmd_steady(s_steady);
    if (sweep->parsed()) return cmd_sweep(s_sweep);
    if (maximize->parsed()) return cmd_maximize(s_max);
    if (evolve->parsed()) return cmd_evolve(s_evolve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
