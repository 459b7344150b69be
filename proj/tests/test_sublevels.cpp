#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "repump/sublevels.hpp"

using namespace repump;

TEST_CASE("sublevel names round-trip") {
  for (const Sublevel& s : {kQubit0, kQubit1, kLeakMinus, kLeakPlus, bracket_f1(0),
                            bracket_f1(-1), d32(1, 1), d32(2, -2)}) {
    CHECK(parse_sublevel(to_string(s)) == s);
  }
  CHECK(to_string(kLeakMinus) == "S12:F1:m-1");
  CHECK(to_string(kQubit0) == "S12:F0:m0");
  CHECK_THROWS_AS(parse_sublevel("X12:F1:m0"), std::domain_error);
  CHECK_THROWS_AS(parse_sublevel("S12:F1"), std::domain_error);
  CHECK_THROWS_AS(parse_sublevel("S12:Fx:m0"), std::domain_error);
}

TEST_CASE("distribution constructor enforces normalization") {
  CHECK_THROWS_AS(SublevelDistribution({{kQubit0, 0.7}, {kQubit1, 0.2}}), std::domain_error);
  CHECK_THROWS_AS(SublevelDistribution({{kQubit0, 1.5}, {kQubit1, -0.5}}), std::domain_error);
  const SublevelDistribution ok({{kQubit0, 0.25}, {kQubit1, 0.75}});
  CHECK(ok.weight(kQubit0) == 0.25);
  CHECK(ok.weight(kLeakMinus) == 0.0);
}

TEST_CASE("default branching table matches the manifold split") {
  const AtomicConstants constants;
  const BranchingTable table = default_branching_table(constants);
  for (int m : {-1, 0, 1}) {
    const SublevelDistribution& row = table.decay_from(bracket_f1(m));
    double total = 0.0;
    for (const auto& [level, w] : row.weights()) total += w;
    CHECK(std::fabs(total - 1.0) < 1e-12);
    CHECK(row.manifold_mass(Manifold::S12) == doctest::Approx(0.982).epsilon(1e-14));
    CHECK(row.manifold_mass(Manifold::D32) == doctest::Approx(0.018).epsilon(1e-12));
    CHECK(row.mass(Manifold::D32, 2) == doctest::Approx(0.018).epsilon(1e-12));
    CHECK(row.mass(Manifold::D32, 1) == 0.0);
  }
}

TEST_CASE("m=0 source reaches the qubit subspace with conditional probability 1/3") {
  const AtomicConstants constants;
  const SublevelDistribution row = bracket_decay_distribution(bracket_f1(0), constants);
  const double qubit_mass = row.weight(kQubit0) + row.weight(kQubit1);
  CHECK(qubit_mass / constants.branch_to_s() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(row.weight(kLeakMinus) == doctest::Approx(constants.branch_to_s() / 3.0));
  CHECK(row.weight(kLeakPlus) == doctest::Approx(constants.branch_to_s() / 3.0));
}

TEST_CASE("m=+-1 sources keep their own leakage state") {
  const AtomicConstants constants;
  const SublevelDistribution minus = bracket_decay_distribution(bracket_f1(-1), constants);
  CHECK(minus.weight(kLeakMinus) > 0.0);
  CHECK(minus.weight(kLeakPlus) == 0.0);
  CHECK(minus.manifold_mass(Manifold::D32) == doctest::Approx(0.018).epsilon(1e-12));
  const SublevelDistribution plus = bracket_decay_distribution(bracket_f1(+1), constants);
  CHECK(plus.weight(kLeakPlus) > 0.0);
  CHECK(plus.weight(kLeakMinus) == 0.0);
}

TEST_CASE("unknown sources are rejected") {
  const AtomicConstants constants;
  CHECK_THROWS_AS(bracket_decay_distribution(bracket_f1(2), constants), std::domain_error);
  CHECK_THROWS_AS(bracket_decay_distribution(kQubit0, constants), std::domain_error);
}

TEST_CASE("without_shelving removes all 2D3/2 weight") {
  const AtomicConstants ideal = AtomicConstants().without_shelving();
  CHECK(ideal.branch_to_s() == 1.0);
  CHECK(ideal.branch_to_d() == 0.0);
  const BranchingTable table = default_branching_table(ideal);
  for (int m : {-1, 0, 1})
    CHECK(table.decay_from(bracket_f1(m)).manifold_mass(Manifold::D32) == 0.0);
}

TEST_CASE("branching table survives a save/load round trip") {
  namespace fs = std::filesystem;
  const fs::path file = fs::temp_directory_path() / "repump_branching_roundtrip.json";
  const BranchingTable table = default_branching_table(AtomicConstants());
  save_branching_table(table, file);
  const BranchingTable loaded = load_branching_table(file);
  for (const auto& [source, dist] : table.rows()) {
    const SublevelDistribution& other = loaded.decay_from(source);
    for (const auto& [dest, w] : dist.weights())
      CHECK(other.weight(dest) == doctest::Approx(w).epsilon(1e-15));
  }
  fs::remove(file);
}

TEST_CASE("constants constructor validates its inputs") {
  CHECK_THROWS_AS(AtomicConstants(-1.0, 19.0, 38e-9, 0.982), std::domain_error);
  CHECK_THROWS_AS(AtomicConstants(5e9, 0.0, 38e-9, 0.982), std::domain_error);
  CHECK_THROWS_AS(AtomicConstants(5e9, 19.0, 38e-9, 1.5), std::domain_error);
  const AtomicConstants c(5e9, 19.0, 38e-9, 0.7);
  CHECK(c.branch_to_s() + c.branch_to_d() == 1.0);
}
