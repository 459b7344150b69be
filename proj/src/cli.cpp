#include "repump/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "repump/budget.hpp"
#include "repump/constants.hpp"
#include "repump/errors.hpp"
#include "repump/format.hpp"
#include "repump/manifest.hpp"
#include "repump/model_fit.hpp"
#include "repump/monte_carlo.hpp"
#include "repump/parallel.hpp"
#include "repump/pulse.hpp"
#include "repump/pump.hpp"
#include "repump/rb.hpp"
#include "repump/rng.hpp"
#include "repump/sublevels.hpp"
#include "repump/version.hpp"

namespace repump {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::string out_dir = "out";
  unsigned workers = 0;  // 0: use default_workers()
  std::string format = "csv";
};

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw config_error(where + ": " + message);
}

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = e.byte > 0 ? std::min(text.size(), e.byte - 1) : 0;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw config_error(path.string() + ":" + std::to_string(line) + ":" +
                       std::to_string(column) + ": " + e.what());
  }
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail(where + "." + item.key(), "unknown key");
  }
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(where + "." + key, "must be a number");
  return obj[key].get<double>();
}

std::uint64_t get_u64(const json& obj, const std::string& where, const char* key,
                      std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned()) fail(where + "." + key, "must be a non-negative integer");
  return obj[key].get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) fail(where + "." + key, "must be a boolean");
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) fail(where + "." + key, "must be a string");
  return obj[key].get<std::string>();
}

void require_kind(const json& config, const std::string& expected) {
  if (!config.contains("kind") || !config["kind"].is_string())
    fail("config", "missing string key 'kind'");
  const std::string kind = config["kind"].get<std::string>();
  if (kind != expected)
    fail("config.kind", "is '" + kind + "' but the subcommand is '" + expected + "'");
}

PumpState parse_state(const std::string& name, const std::string& where) {
  if (name == "Q0") return PumpState::Q0;
  if (name == "Lm") return PumpState::Lm;
  if (name == "Q1") return PumpState::Q1;
  if (name == "Lp") return PumpState::Lp;
  fail(where, "must be one of Q0, Lm, Q1, Lp");
}

AtomicConstants parse_constants(const json& config) {
  const AtomicConstants defaults;
  if (!config.contains("constants")) return defaults;
  const json& c = config["constants"];
  check_keys(c, "config.constants",
             {"delta_hf_rad_per_s", "gamma_d_per_s", "bracket_lifetime_s", "branch_to_s"});
  return AtomicConstants(
      get_number(c, "config.constants", "delta_hf_rad_per_s", defaults.delta_hf()),
      get_number(c, "config.constants", "gamma_d_per_s", defaults.gamma_d()),
      get_number(c, "config.constants", "bracket_lifetime_s", defaults.bracket_lifetime()),
      get_number(c, "config.constants", "branch_to_s", defaults.branch_to_s()));
}

unsigned effective_workers(const CommonArgs& args) {
  return args.workers == 0 ? default_workers() : args.workers;
}

fs::path prepare_out_dir(const CommonArgs& args) {
  fs::path dir(args.out_dir);
  fs::create_directories(dir);
  return dir;
}

fs::path resolve_relative(const fs::path& config_path, const std::string& target) {
  fs::path p(target);
  if (p.is_absolute()) return p;
  return config_path.parent_path() / p;
}

void print_summary(const json& summary) { std::cout << summary.dump() << std::endl; }

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

json trajectory_to_json(const Trajectory& traj) {
  json rows = json::array();
  for (const TrajectoryPoint& pt : traj.points) {
    rows.push_back({{"cycle", pt.cycle},
                    {"p", {pt.p[0], pt.p[1], pt.p[2], pt.p[3]}},
                    {"se", {pt.se[0], pt.se[1], pt.se[2], pt.se[3]}}});
  }
  return json{{"trials", traj.trials}, {"points", rows}};
}

json rb_to_json(const RBDataset& dataset) {
  json rows = json::array();
  for (const RBRow& row : dataset.rows)
    rows.push_back({{"length", row.length},
                    {"seq_index", row.seq_index},
                    {"survival", row.survival},
                    {"shots", row.shots}});
  return json{{"rows", rows}};
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonArgs& args) {
  const fs::path config_path(args.config_path);
  const json config = load_config(config_path);
  require_kind(config, "simulate");
  check_keys(config, "config", {"kind", "seed", "monte_carlo", "constants", "branching_table"});

  RepumpConfig mc;
  if (config.contains("monte_carlo")) {
    const json& m = config["monte_carlo"];
    check_keys(m, "config.monte_carlo",
               {"transfer_fidelity", "pol_impurity_935", "shelf_cleanup", "n_cycles", "trials",
                "initial_state", "prep_error", "readout_error", "simultaneous_transfer"});
    mc.transfer_fidelity =
        get_number(m, "config.monte_carlo", "transfer_fidelity", mc.transfer_fidelity);
    mc.pol_impurity_935 =
        get_number(m, "config.monte_carlo", "pol_impurity_935", mc.pol_impurity_935);
    mc.shelf_cleanup = get_bool(m, "config.monte_carlo", "shelf_cleanup", mc.shelf_cleanup);
    mc.n_cycles = static_cast<std::uint32_t>(get_u64(m, "config.monte_carlo", "n_cycles",
                                                     mc.n_cycles));
    mc.trials = get_u64(m, "config.monte_carlo", "trials", mc.trials);
    mc.initial_state = parse_state(
        get_string(m, "config.monte_carlo", "initial_state", "Lm"),
        "config.monte_carlo.initial_state");
    mc.prep_error = get_number(m, "config.monte_carlo", "prep_error", mc.prep_error);
    mc.readout_error = get_number(m, "config.monte_carlo", "readout_error", mc.readout_error);
    mc.simultaneous_transfer =
        get_bool(m, "config.monte_carlo", "simultaneous_transfer", mc.simultaneous_transfer);
  }
  mc.seed = args.seed_override.value_or(get_u64(config, "config", "seed", 0));

  const AtomicConstants constants = parse_constants(config);
  const BranchingTable table =
      config.contains("branching_table")
          ? load_branching_table(
                resolve_relative(config_path, get_string(config, "config", "branching_table", "")))
          : default_branching_table(constants);

  const Trajectory traj = run_monte_carlo(mc, constants, table, effective_workers(args));

  const fs::path dir = prepare_out_dir(args);
  fs::path artifact;
  if (args.format == "json") {
    artifact = dir / "trajectory.json";
    write_text(artifact, trajectory_to_json(traj).dump(2));
  } else {
    artifact = dir / "trajectory.csv";
    write_trajectory_csv(artifact, traj);
  }
  write_manifest(artifact, config.dump(), mc.seed);

  const TrajectoryPoint& last = traj.points.back();
  print_summary(json{{"command", "simulate"},
                     {"artifact", artifact.string()},
                     {"trials", traj.trials},
                     {"cycles", mc.n_cycles},
                     {"seed", mc.seed},
                     {"final_leakage", last.p[1] + last.p[3]}});
  return 0;
}

// --------------------------------------------------------------------- fit

int cmd_fit(const CommonArgs& args) {
  const fs::path config_path(args.config_path);
  const json config = load_config(config_path);
  require_kind(config, "fit");
  check_keys(config, "config", {"kind", "trajectory_csv", "p0", "initial_guess"});
  if (!config.contains("trajectory_csv")) fail("config", "missing key 'trajectory_csv'");

  const fs::path data_path =
      resolve_relative(config_path, get_string(config, "config", "trajectory_csv", ""));
  const Trajectory dataset = read_trajectory_csv(data_path);

  std::array<double, 4> p0_values{0.0, 1.0, 0.0, 0.0};
  if (config.contains("p0")) {
    const json& p0 = config["p0"];
    if (!p0.is_array() || p0.size() != 4) fail("config.p0", "must be an array of 4 numbers");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!p0[i].is_number()) fail("config.p0", "must be an array of 4 numbers");
      p0_values[i] = p0[i].get<double>();
    }
  }
  const PopulationVector p0 = PopulationVector::physical(p0_values);

  PumpModelParams guess;
  if (config.contains("initial_guess")) {
    const json& g = config["initial_guess"];
    check_keys(g, "config.initial_guess", {"r_to0", "r_stay", "r_to1", "scale_A", "offset_B"});
    guess.r_to0 = get_number(g, "config.initial_guess", "r_to0", guess.r_to0);
    guess.r_stay = get_number(g, "config.initial_guess", "r_stay", guess.r_stay);
    guess.r_to1 = get_number(g, "config.initial_guess", "r_to1", guess.r_to1);
    guess.scale_a = get_number(g, "config.initial_guess", "scale_A", guess.scale_a);
    guess.offset_b = get_number(g, "config.initial_guess", "offset_B", guess.offset_b);
  }

  const FitResult fit = fit_pump_model(dataset, p0, guess);

  const fs::path dir = prepare_out_dir(args);
  const fs::path artifact = dir / "fit_report.json";
  write_text(artifact, fit_report_json(fit));
  write_manifest(artifact, config.dump(), 0);

  print_summary(json{{"command", "fit"},
                     {"artifact", artifact.string()},
                     {"r_to0", fit.params.r_to0},
                     {"r_stay", fit.params.r_stay},
                     {"r_to1", fit.params.r_to1},
                     {"scale_A", fit.params.scale_a},
                     {"offset_B", fit.params.offset_b},
                     {"residual_norm", fit.residual_norm},
                     {"converged", fit.converged}});
  return fit.converged ? 0 : 2;
}

// ---------------------------------------------------------------------- rb

int cmd_rb(const CommonArgs& args) {
  const fs::path config_path(args.config_path);
  const json config = load_config(config_path);
  require_kind(config, "rb");
  check_keys(config, "config", {"kind", "seed", "irb", "bootstrap", "population_decay"});
  if (!config.contains("irb") && !config.contains("population_decay"))
    fail("config", "needs an 'irb' and/or a 'population_decay' section");

  const std::uint64_t master_seed =
      args.seed_override.value_or(get_u64(config, "config", "seed", 0));
  const unsigned workers = effective_workers(args);

  json report;
  bool all_converged = true;
  fs::path dir;

  if (config.contains("irb")) {
    const json& r = config["irb"];
    check_keys(r, "config.irb",
               {"sequence_lengths", "sequences_per_length", "shots", "error_per_clifford",
                "interleaved_extra_error", "interleaved_leak_rate"});
    RBConfig rb;
    if (r.contains("sequence_lengths")) {
      if (!r["sequence_lengths"].is_array())
        fail("config.irb.sequence_lengths", "must be an array");
      rb.sequence_lengths.clear();
      for (const auto& v : r["sequence_lengths"]) {
        if (!v.is_number_unsigned()) fail("config.irb.sequence_lengths", "must hold integers");
        rb.sequence_lengths.push_back(v.get<std::uint32_t>());
      }
    }
    rb.sequences_per_length = static_cast<std::uint32_t>(
        get_u64(r, "config.irb", "sequences_per_length", rb.sequences_per_length));
    rb.shots = get_u64(r, "config.irb", "shots", rb.shots);
    rb.error_per_clifford =
        get_number(r, "config.irb", "error_per_clifford", rb.error_per_clifford);
    rb.interleaved_extra_error =
        get_number(r, "config.irb", "interleaved_extra_error", rb.interleaved_extra_error);
    rb.interleaved_leak_rate =
        get_number(r, "config.irb", "interleaved_leak_rate", rb.interleaved_leak_rate);
    rb.seed = master_seed;

    std::uint32_t resamples = 400;
    double confidence = 0.68;
    if (config.contains("bootstrap")) {
      const json& b = config["bootstrap"];
      check_keys(b, "config.bootstrap", {"resamples", "confidence"});
      resamples = static_cast<std::uint32_t>(get_u64(b, "config.bootstrap", "resamples", 400));
      confidence = get_number(b, "config.bootstrap", "confidence", 0.68);
    }

    const RBDataset reference = simulate_rb(rb, false, workers);
    const RBDataset interleaved = simulate_rb(rb, true, workers);

    dir = prepare_out_dir(args);
    const bool as_json = args.format == "json";
    const fs::path ref_file = dir / (as_json ? "rb_reference.json" : "rb_reference.csv");
    const fs::path int_file = dir / (as_json ? "rb_interleaved.json" : "rb_interleaved.csv");
    if (as_json) {
      write_text(ref_file, rb_to_json(reference).dump(2));
      write_text(int_file, rb_to_json(interleaved).dump(2));
    } else {
      write_rb_csv(ref_file, reference);
      write_rb_csv(int_file, interleaved);
    }
    write_manifest(ref_file, config.dump(), master_seed);
    write_manifest(int_file, config.dump(), master_seed);

    const DecayFit ref_fit = fit_decay(reference);
    const DecayFit int_fit = fit_decay(interleaved);
    const double eps_g = interleaved_error(ref_fit.rate, int_fit.rate);
    const BootstrapInterval ci =
        bootstrap_ci(reference, interleaved, resamples, confidence, master_seed, workers);
    all_converged = all_converged && ref_fit.converged && int_fit.converged;

    const auto fit_json = [](const DecayFit& f) {
      return json{{"amplitude", f.amplitude},   {"rate", f.rate},
                  {"baseline", f.baseline},     {"rate_sigma", f.rate_sigma},
                  {"residual_norm", f.residual_norm}, {"converged", f.converged}};
    };
    report["reference"] = fit_json(ref_fit);
    report["interleaved"] = fit_json(int_fit);
    report["epsilon_g"] = eps_g;
    report["epsilon_g_negative"] = eps_g < 0.0;
    report["bootstrap"] = json{{"lo", ci.lo},
                               {"hi", ci.hi},
                               {"confidence", ci.confidence},
                               {"resamples", ci.resamples},
                               {"shot_only_fallback", ci.shot_only_fallback}};
  }

  if (config.contains("population_decay")) {
    const json& d = config["population_decay"];
    check_keys(d, "config.population_decay", {"lambda_per_cycle", "cycle_counts", "shots"});
    const double lambda_true = get_number(d, "config.population_decay", "lambda_per_cycle", 0.0);
    const std::uint64_t shots = get_u64(d, "config.population_decay", "shots", 1000);
    if (shots == 0) fail("config.population_decay.shots", "must be >= 1");
    std::vector<double> cycles;
    if (!d.contains("cycle_counts") || !d["cycle_counts"].is_array())
      fail("config.population_decay", "missing array 'cycle_counts'");
    for (const auto& v : d["cycle_counts"]) {
      if (!v.is_number()) fail("config.population_decay.cycle_counts", "must hold numbers");
      cycles.push_back(v.get<double>());
    }

    // Synthetic survival-of-|1> measurement at each cycle count.
    dir = prepare_out_dir(args);
    const std::uint64_t decay_seed = derive_stream_seed(master_seed, 0xD5C47ull);
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      Substream rng(decay_seed, i);
      const double truth = std::exp(-lambda_true * cycles[i]);
      points.emplace_back(cycles[i],
                          static_cast<double>(rng.binomial(shots, truth)) /
                              static_cast<double>(shots));
    }

    const fs::path data_file = dir / "decay_data.csv";
    {
      std::ofstream out(data_file);
      if (!out) throw std::runtime_error("cannot open " + data_file.string());
      out << "cycles,survival,shots\n";
      for (const auto& [n, y] : points)
        out << format_g9(n) << ',' << format_g9(y) << ',' << shots << '\n';
    }
    write_manifest(data_file, config.dump(), master_seed);

    const PopulationDecayFit fit = fit_population_decay(points);
    all_converged = all_converged && fit.converged;
    report["population_decay"] = json{{"lambda", fit.lambda},
                                      {"lambda_sigma", fit.lambda_sigma},
                                      {"lambda_true", lambda_true},
                                      {"converged", fit.converged}};
  }

  const fs::path report_file = dir / "rb_report.json";
  write_text(report_file, report.dump(2));
  write_manifest(report_file, config.dump(), master_seed);

  json summary = report;
  summary["command"] = "rb";
  summary["artifact"] = report_file.string();
  print_summary(summary);
  return all_converged ? 0 : 2;
}

// ------------------------------------------------------------------ budget

int cmd_budget(const CommonArgs& args) {
  const json config = load_config(args.config_path);
  require_kind(config, "budget");
  check_keys(config, "config", {"kind", "budget"});
  BudgetInput in;
  if (config.contains("budget")) {
    const json& b = config["budget"];
    check_keys(b, "config.budget",
               {"eps0", "eps_l", "eps_q", "suppression_target", "cycle_time_s"});
    in.eps0 = get_number(b, "config.budget", "eps0", in.eps0);
    in.eps_l = get_number(b, "config.budget", "eps_l", in.eps_l);
    in.eps_q = get_number(b, "config.budget", "eps_q", in.eps_q);
    in.suppression_target =
        get_number(b, "config.budget", "suppression_target", in.suppression_target);
    in.cycle_time = get_number(b, "config.budget", "cycle_time_s", in.cycle_time);
  }
  validate(in);

  const std::uint32_t n = min_cycles(in.eps0, in.eps_l, in.suppression_target);
  const json report{
      {"n_min", n},
      {"leakage_final", leakage_after_cycles(in.eps0, in.eps_l, n)},
      {"total_error", total_error(in.eps0, in.eps_q, in.eps_l, n)},
      {"total_added", static_cast<double>(n) * (in.eps_q + in.eps_l)},
      {"schedule_time_s", schedule_time(n, in.cycle_time)}};

  const fs::path dir = prepare_out_dir(args);
  const fs::path artifact = dir / "budget_report.json";
  write_text(artifact, report.dump(2));
  write_manifest(artifact, config.dump(), 0);

  json summary = report;
  summary["command"] = "budget";
  summary["artifact"] = artifact.string();
  print_summary(summary);
  return 0;
}

// ------------------------------------------------------------------- pulse

int cmd_pulse(const CommonArgs& args) {
  const json config = load_config(args.config_path);
  require_kind(config, "pulse");
  check_keys(config, "config", {"kind", "pulse"});

  double tau_pi = 1e-6;
  std::vector<double> edge_ns{0, 100, 200, 300, 400, 500, 600, 700};
  std::vector<double> detunings_hz{860e6};
  double tolerance = 1e-10;
  if (config.contains("pulse")) {
    const json& p = config["pulse"];
    check_keys(p, "config.pulse",
               {"tau_pi_s", "edge_times_ns", "detunings_hz", "step_tolerance"});
    tau_pi = get_number(p, "config.pulse", "tau_pi_s", tau_pi);
    tolerance = get_number(p, "config.pulse", "step_tolerance", tolerance);
    if (p.contains("edge_times_ns")) {
      if (!p["edge_times_ns"].is_array()) fail("config.pulse.edge_times_ns", "must be an array");
      edge_ns.clear();
      for (const auto& v : p["edge_times_ns"]) edge_ns.push_back(v.get<double>());
    }
    if (p.contains("detunings_hz")) {
      if (!p["detunings_hz"].is_array()) fail("config.pulse.detunings_hz", "must be an array");
      detunings_hz.clear();
      for (const auto& v : p["detunings_hz"]) detunings_hz.push_back(v.get<double>());
    }
  }

  struct Row {
    double edge_ns, detuning_hz, leakage;
  };
  std::vector<Row> rows(edge_ns.size() * detunings_hz.size());
  for (std::size_t d = 0; d < detunings_hz.size(); ++d)
    for (std::size_t e = 0; e < edge_ns.size(); ++e)
      rows[d * edge_ns.size() + e] = {edge_ns[e], detunings_hz[d], 0.0};

  parallel_chunks(rows.size(), effective_workers(args),
                  [&](std::size_t begin, std::size_t end, unsigned) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const PulseEnvelope env =
                          PulseEnvelope::edge_smoothed(tau_pi, rows[i].edge_ns * 1e-9);
                      const double detuning = 2.0 * std::numbers::pi * rows[i].detuning_hz;
                      rows[i].leakage = shaped_pulse_offres_error(env, detuning, tolerance);
                    }
                  });

  const fs::path dir = prepare_out_dir(args);
  fs::path artifact;
  if (args.format == "json") {
    json out = json::array();
    for (const Row& r : rows)
      out.push_back({{"edge_time_ns", r.edge_ns},
                     {"detuning_hz", r.detuning_hz},
                     {"leakage_probability", r.leakage}});
    artifact = dir / "pulse_scan.json";
    write_text(artifact, out.dump(2));
  } else {
    artifact = dir / "pulse_scan.csv";
    std::ofstream out(artifact);
    if (!out) throw std::runtime_error("cannot open " + artifact.string());
    out << "edge_time_ns,detuning_hz,leakage_probability\n";
    for (const Row& r : rows)
      out << format_g9(r.edge_ns) << ',' << format_g9(r.detuning_hz) << ','
          << format_g9(r.leakage) << '\n';
  }
  write_manifest(artifact, config.dump(), 0);

  print_summary(json{{"command", "pulse"},
                     {"artifact", artifact.string()},
                     {"rows", rows.size()},
                     {"tau_pi_s", tau_pi}});
  return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed_override, "Override the config master seed");
  cmd->add_option("--out", args.out_dir, "Output directory (created if missing)");
  cmd->add_option("--workers", args.workers, "Worker threads (default: available parallelism)");
  cmd->add_option("--format", args.format, "Dataset format")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Leakage-repump simulation and analysis toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo repump trajectories");
  CLI::App* fit = app.add_subcommand("fit", "Fit the pump model to a trajectory CSV");
  CLI::App* rb = app.add_subcommand("rb", "Randomized-benchmarking simulation and analysis");
  CLI::App* budget = app.add_subcommand("budget", "Error-budget arithmetic");
  CLI::App* pulse = app.add_subcommand("pulse", "Off-resonant pulse-error scans");
  for (CLI::App* cmd : {simulate, fit, rb, budget, pulse}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) return cmd_simulate(args);
    if (fit->parsed()) return cmd_fit(args);
    if (rb->parsed()) return cmd_rb(args);
    if (budget->parsed()) return cmd_budget(args);
    if (pulse->parsed()) return cmd_pulse(args);
    return 1;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace repump
