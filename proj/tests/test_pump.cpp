#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "repump/pump.hpp"

using namespace repump;

namespace {

// Test-side 4x4 matrix power, independent of apply_cycles.
using Mat = std::array<std::array<double, 4>, 4>;

Mat matmul(const Mat& a, const Mat& b) {
  Mat out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a[i][k] * b[k][j];
      out[i][j] = s;
    }
  return out;
}

Mat as_mat(const PumpMatrix& m) {
  Mat out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m(i, j);
  return out;
}

Vec4 matvec(const Mat& m, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
  return out;
}

PumpMatrix leakage_matrix(double to0, double stay, double to1) {
  const double cross = 1.0 - to0 - stay - to1;
  return PumpMatrix::from_rows({{{1.0, to0, 0.0, to0},
                                 {0.0, stay, 0.0, cross},
                                 {0.0, to1, 1.0, to1},
                                 {0.0, cross, 0.0, stay}}});
}

}  // namespace

TEST_CASE("ideal cycle reads off its own columns") {
  const PumpMatrix r = ideal_pump_matrix();
  const PopulationVector from_lm = r.apply(PopulationVector::basis(PumpState::Lm));
  CHECK(from_lm[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(from_lm[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(from_lm[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(from_lm[3] == 0.0);
}

TEST_CASE("two ideal cycles give (4/9, 1/9, 4/9, 0)") {
  const auto traj = apply_cycles(ideal_pump_matrix(), PopulationVector::basis(PumpState::Lm),
                                 2, 1.0, 0.0);
  REQUIRE(traj.size() == 3);
  CHECK(traj[2][0] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(traj[2][1] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(traj[2][2] == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(traj[2][3] == 0.0);
  CHECK(traj[2][1] + traj[2][3] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("qubit population is a fixed point") {
  const PumpMatrix r = ideal_pump_matrix();
  const PopulationVector q0 = r.apply(PopulationVector::basis(PumpState::Q0));
  CHECK(q0[0] == 1.0);
  CHECK(q0[1] == 0.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    double a = u(rng), b = u(rng), c = u(rng);
    const double sum = a + b + c + u(rng);
    const PumpMatrix m = leakage_matrix(a / sum, b / sum, c / sum);
    for (PumpState qubit : {PumpState::Q0, PumpState::Q1}) {
      const PopulationVector out = m.apply(PopulationVector::basis(qubit));
      CHECK(out.at(qubit) == 1.0);
      CHECK(out.leakage() == 0.0);
    }
  }
}

TEST_CASE("ideal leakage is suppressed exactly as 3^-n") {
  const PumpMatrix r = ideal_pump_matrix();
  const auto traj = apply_cycles(r, PopulationVector::basis(PumpState::Lm), 20, 1.0, 0.0);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const double leak = traj[n][1] + traj[n][3];
    const double expected = std::pow(3.0, -static_cast<double>(n));
    CHECK(std::fabs(leak - expected) <= 1e-12 * expected);
  }
}

TEST_CASE("apply_cycles equals an independent matrix power") {
  const PumpMatrix r = leakage_matrix(0.323, 0.27, 0.225);
  const PopulationVector p0 = PopulationVector::basis(PumpState::Lm);
  const auto traj = apply_cycles(r, p0, 8, 1.0, 0.0);
  Mat power{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const Vec4 expected = matvec(power, p0.values());
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(traj[n][i] - expected[i]) < 1e-12);
    power = matmul(as_mat(r), power);
  }
}

TEST_CASE("SPAM scale and offset act per component") {
  const auto traj = apply_cycles(leakage_matrix(0.323, 0.27, 0.225),
                                 PopulationVector::basis(PumpState::Lm), 0, 0.952, 0.026);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0][0] == doctest::Approx(0.026).epsilon(1e-14));
  CHECK(traj[0][1] == doctest::Approx(0.978).epsilon(1e-14));
  CHECK(traj[0][2] == doctest::Approx(0.026).epsilon(1e-14));
  CHECK(traj[0][3] == doctest::Approx(0.026).epsilon(1e-14));
}

TEST_CASE("matrix construction enforces the model constraints") {
  // Column 1 not stochastic.
  CHECK_THROWS_AS(PumpMatrix::from_rows({{{1.0, 0.5, 0.0, 0.5},
                                          {0.0, 0.2, 0.0, 0.1},
                                          {0.0, 0.2, 1.0, 0.2},
                                          {0.0, 0.2, 0.0, 0.2}}}),
                  std::domain_error);
  // Qubit column not a basis vector.
  CHECK_THROWS_AS(PumpMatrix::from_rows({{{0.9, 1.0 / 3, 0.0, 1.0 / 3},
                                          {0.1, 1.0 / 3, 0.0, 0.0},
                                          {0.0, 1.0 / 3, 1.0, 1.0 / 3},
                                          {0.0, 0.0, 0.0, 1.0 / 3}}}),
                  std::domain_error);
  // Broken leakage symmetry.
  CHECK_THROWS_AS(PumpMatrix::from_rows({{{1.0, 0.4, 0.0, 0.3},
                                          {0.0, 0.3, 0.0, 0.1},
                                          {0.0, 0.2, 1.0, 0.3},
                                          {0.0, 0.1, 0.0, 0.3}}}),
                  std::domain_error);
}

TEST_CASE("population vectors are validated") {
  CHECK_THROWS_AS(PopulationVector::physical({0.5, 0.5, 0.5, -0.5}), std::domain_error);
  CHECK_THROWS_AS(PopulationVector::physical({0.3, 0.3, 0.3, 0.3}), std::domain_error);
  const PopulationVector ok = PopulationVector::physical({0.25, 0.25, 0.25, 0.25});
  CHECK(ok.leakage() == 0.5);
}
