#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "repump/cli.hpp"

using namespace repump;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(std::vector<std::string> args) {
  std::vector<const char*> argv{"repump"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path make_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("repump_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name, const json& doc) {
  const fs::path file = dir / name;
  std::ofstream out(file);
  out << doc.dump(2);
  return file;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("budget subcommand reproduces the case-study numbers") {
  const fs::path dir = make_dir("budget");
  const fs::path config = write_config(dir, "budget.json",
                                       json{{"kind", "budget"},
                                            {"budget",
                                             {{"eps0", 1e-3},
                                              {"eps_l", 0.0},
                                              {"eps_q", 2e-5},
                                              {"suppression_target", 1000.0},
                                              {"cycle_time_s", 10e-6}}}});
  const fs::path out = dir / "out";
  CHECK(run({"budget", "--config", config.string(), "--out", out.string()}) == 0);

  const json report = json::parse(slurp(out / "budget_report.json"));
  CHECK(report["n_min"] == 7);
  CHECK(report["total_added"].get<double>() == doctest::Approx(1.4e-4).epsilon(1e-12));
  CHECK(report["total_error"].get<double>() == doctest::Approx(1.14e-3).epsilon(1e-12));
  CHECK(report["schedule_time_s"].get<double>() == doctest::Approx(70e-6).epsilon(1e-12));
  CHECK(report["leakage_final"].get<double>() ==
        doctest::Approx(4.5724737082761777e-07).epsilon(1e-9));

  const json manifest = json::parse(slurp(out / "budget_report.json.manifest.json"));
  CHECK(manifest["tool_version"] == "0.1.0");
  CHECK(manifest["artifact"] == "budget_report.json");
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.contains("seed"));
}

TEST_CASE("simulate artifacts are byte-identical across runs and worker counts") {
  const fs::path dir = make_dir("determinism");
  const fs::path config = write_config(
      dir, "sim.json",
      json{{"kind", "simulate"},
           {"seed", 31337},
           {"monte_carlo",
            {{"transfer_fidelity", 0.93}, {"pol_impurity_935", 0.12}, {"n_cycles", 6},
             {"trials", 4000}, {"initial_state", "Lm"}}}});
  const fs::path out1 = dir / "a", out2 = dir / "b", out3 = dir / "c";
  CHECK(run({"simulate", "--config", config.string(), "--out", out1.string(),
             "--workers", "1"}) == 0);
  CHECK(run({"simulate", "--config", config.string(), "--out", out2.string(),
             "--workers", "4"}) == 0);
  CHECK(run({"simulate", "--config", config.string(), "--out", out3.string(),
             "--workers", "4"}) == 0);
  const std::string a = slurp(out1 / "trajectory.csv");
  CHECK(a == slurp(out2 / "trajectory.csv"));
  CHECK(a == slurp(out3 / "trajectory.csv"));
  CHECK(slurp(out1 / "trajectory.csv.manifest.json") ==
        slurp(out2 / "trajectory.csv.manifest.json"));
  CHECK(a.substr(0, a.find('\n')) == "cycle,p0,pLm,p1,pLp,se0,seLm,se1,seLp");
}

TEST_CASE("seed flag overrides the config seed") {
  const fs::path dir = make_dir("seedflag");
  const fs::path config = write_config(
      dir, "sim.json",
      json{{"kind", "simulate"},
           {"seed", 1},
           {"monte_carlo", {{"n_cycles", 4}, {"trials", 2000}, {"transfer_fidelity", 0.9}}}});
  const fs::path out1 = dir / "a", out2 = dir / "b";
  CHECK(run({"simulate", "--config", config.string(), "--out", out1.string()}) == 0);
  CHECK(run({"simulate", "--config", config.string(), "--out", out2.string(), "--seed",
             "2"}) == 0);
  CHECK(slurp(out1 / "trajectory.csv") != slurp(out2 / "trajectory.csv"));
  const json manifest = json::parse(slurp(out2 / "trajectory.csv.manifest.json"));
  CHECK(manifest["seed"] == 2);
}

TEST_CASE("simulate-then-fit pipeline and json format") {
  const fs::path dir = make_dir("pipeline");
  const fs::path sim_config = write_config(
      dir, "sim.json",
      json{{"kind", "simulate"},
           {"seed", 7},
           {"monte_carlo", {{"n_cycles", 10}, {"trials", 20000}}},
           {"constants", {{"branch_to_s", 1.0}}}});
  const fs::path out = dir / "out";
  CHECK(run({"simulate", "--config", sim_config.string(), "--out", out.string()}) == 0);

  const fs::path fit_config = write_config(
      dir, "fit.json",
      json{{"kind", "fit"}, {"trajectory_csv", (out / "trajectory.csv").string()}});
  CHECK(run({"fit", "--config", fit_config.string(), "--out", out.string()}) == 0);
  const json report = json::parse(slurp(out / "fit_report.json"));
  CHECK(report["converged"] == true);
  // Ideal event chain: 1/3 to each qubit state, cross-leakage 1/3, no stay.
  CHECK(report["parameters"]["r_to0"].get<double>() == doctest::Approx(1.0 / 3).epsilon(0.15));
  CHECK(report["parameters"]["r_to1"].get<double>() == doctest::Approx(1.0 / 3).epsilon(0.15));
  CHECK(report["parameters"]["r_stay"].get<double>() < 0.05);
  CHECK(report["parameters"]["cross_leakage"].get<double>() ==
        doctest::Approx(1.0 / 3).epsilon(0.15));

  const fs::path out_json = dir / "outjson";
  CHECK(run({"simulate", "--config", sim_config.string(), "--out", out_json.string(),
             "--format", "json"}) == 0);
  const json traj = json::parse(slurp(out_json / "trajectory.json"));
  CHECK(traj["trials"] == 20000);
  CHECK(traj["points"].is_array());
}

TEST_CASE("rb subcommand produces datasets and a report") {
  const fs::path dir = make_dir("rb");
  const fs::path config = write_config(
      dir, "rb.json",
      json{{"kind", "rb"},
           {"seed", 5},
           {"irb",
            {{"sequence_lengths", {2, 10, 25}}, {"sequences_per_length", 4}, {"shots", 400},
             {"error_per_clifford", 0.01}, {"interleaved_extra_error", 0.002}}},
           {"bootstrap", {{"resamples", 120}, {"confidence", 0.68}}}});
  const fs::path out1 = dir / "a", out2 = dir / "b";
  CHECK(run({"rb", "--config", config.string(), "--out", out1.string()}) == 0);
  CHECK(run({"rb", "--config", config.string(), "--out", out2.string(), "--workers",
             "3"}) == 0);
  CHECK(slurp(out1 / "rb_reference.csv") == slurp(out2 / "rb_reference.csv"));
  CHECK(slurp(out1 / "rb_interleaved.csv") == slurp(out2 / "rb_interleaved.csv"));
  CHECK(slurp(out1 / "rb_report.json") == slurp(out2 / "rb_report.json"));
  const json report = json::parse(slurp(out1 / "rb_report.json"));
  CHECK(report.contains("epsilon_g"));
  CHECK(report["bootstrap"]["resamples"] == 120);
  CHECK(report["reference"]["converged"] == true);
}

TEST_CASE("rb population-decay section fits synthetic survival data") {
  const fs::path dir = make_dir("decay");
  const fs::path config = write_config(
      dir, "decay.json",
      json{{"kind", "rb"},
           {"seed", 12},
           {"population_decay",
            {{"lambda_per_cycle", 1.4e-7},
             {"cycle_counts", {0, 2.5e5, 5e5, 7.5e5, 1e6, 1.25e6, 1.5e6, 1.75e6, 2e6}},
             {"shots", 1000}}}});
  const fs::path out = dir / "out";
  CHECK(run({"rb", "--config", config.string(), "--out", out.string()}) == 0);
  const json report = json::parse(slurp(out / "rb_report.json"));
  const double lambda = report["population_decay"]["lambda"].get<double>();
  CHECK(std::fabs(lambda - 1.4e-7) < 0.3e-7);
  CHECK(fs::exists(out / "decay_data.csv"));
}

TEST_CASE("pulse subcommand writes the scan table") {
  const fs::path dir = make_dir("pulse");
  const fs::path config = write_config(
      dir, "pulse.json",
      json{{"kind", "pulse"},
           {"pulse",
            {{"tau_pi_s", 1e-6}, {"edge_times_ns", {0.0, 200.0}},
             {"detunings_hz", {5e7}}, {"step_tolerance", 1e-9}}}});
  const fs::path out = dir / "out";
  CHECK(run({"pulse", "--config", config.string(), "--out", out.string()}) == 0);
  const std::string csv = slurp(out / "pulse_scan.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "edge_time_ns,detuning_hz,leakage_probability");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}

TEST_CASE("simulate accepts a branching table file") {
  const fs::path dir = make_dir("table");
  // An override table with no shelf branch at all.
  const json table = {
      {"B12:F1:m-1",
       {{"S12:F0:m0", 1.0 / 3}, {"S12:F1:m0", 1.0 / 3}, {"S12:F1:m-1", 1.0 / 3}}},
      {"B12:F1:m0",
       {{"S12:F0:m0", 1.0 / 6}, {"S12:F1:m0", 1.0 / 6}, {"S12:F1:m-1", 1.0 / 3},
        {"S12:F1:m1", 1.0 / 3}}},
      {"B12:F1:m1",
       {{"S12:F0:m0", 1.0 / 3}, {"S12:F1:m0", 1.0 / 3}, {"S12:F1:m1", 1.0 / 3}}},
  };
  {
    std::ofstream out(dir / "table.json");
    out << table.dump(2);
  }
  const fs::path config = write_config(
      dir, "sim.json",
      json{{"kind", "simulate"},
           {"seed", 3},
           {"branching_table", "table.json"},  // resolved next to the config
           {"monte_carlo", {{"n_cycles", 5}, {"trials", 3000}}}});
  const fs::path out = dir / "out";
  CHECK(run({"simulate", "--config", config.string(), "--out", out.string()}) == 0);
  const std::string csv = slurp(out / "trajectory.csv");
  CHECK(!csv.empty());
}

TEST_CASE("schema violations exit with code 1") {
  const fs::path dir = make_dir("schema");
  const fs::path bad_key = write_config(
      dir, "bad_key.json",
      json{{"kind", "simulate"}, {"monte_carlo", {{"trils", 100}}}});
  CHECK(run({"simulate", "--config", bad_key.string(), "--out", (dir / "o").string()}) == 1);

  const fs::path wrong_kind = write_config(dir, "wrong_kind.json", json{{"kind", "budget"}});
  CHECK(run({"simulate", "--config", wrong_kind.string(), "--out", (dir / "o").string()}) == 1);

  const fs::path broken = dir / "broken.json";
  {
    std::ofstream out(broken);
    out << "{ \"kind\": \"budget\",\n  oops\n}";
  }
  CHECK(run({"budget", "--config", broken.string(), "--out", (dir / "o").string()}) == 1);

  // Infeasible suppression target is a domain error, also exit 1.
  const fs::path infeasible = write_config(
      dir, "infeasible.json",
      json{{"kind", "budget"},
           {"budget", {{"eps0", 1e-3}, {"eps_l", 1e-3}, {"suppression_target", 1000.0}}}});
  CHECK(run({"budget", "--config", infeasible.string(), "--out", (dir / "o").string()}) == 1);
}

TEST_CASE("missing config flag is a usage error") {
  CHECK(run({"simulate"}) != 0);
  CHECK(run({}) != 0);
}
