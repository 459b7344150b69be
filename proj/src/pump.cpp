#include "repump/pump.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace repump {

PopulationVector PopulationVector::physical(const std::array<double, 4>& p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !(v <= 1.0))
      throw std::domain_error("PopulationVector: entry " + std::to_string(v) +
                              " outside [0, 1]");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::domain_error("PopulationVector: entries sum to " + std::to_string(sum));
  return PopulationVector(p);
}

PopulationVector PopulationVector::basis(PumpState s) {
  std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
  p[static_cast<int>(s)] = 1.0;
  return PopulationVector(p);
}

PumpMatrix PumpMatrix::from_rows(const std::array<std::array<double, 4>, 4>& entries) {
  for (std::size_t col = 0; col < 4; ++col) {
    double sum = 0.0;
    for (std::size_t row = 0; row < 4; ++row) {
      const double v = entries[row][col];
      if (!(v >= 0.0) || !(v <= 1.0))
        throw std::domain_error("PumpMatrix: entry outside [0, 1]");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw std::domain_error("PumpMatrix: column " + std::to_string(col) +
                              " sums to " + std::to_string(sum));
  }
  // Qubit sources are exact fixed points.
  for (std::size_t col : {0u, 2u})
    for (std::size_t row = 0; row < 4; ++row)
      if (entries[row][col] != (row == col ? 1.0 : 0.0))
        throw std::domain_error("PumpMatrix: qubit column " + std::to_string(col) +
                                " must be an exact basis vector");
  // Leakage-state symmetry.
  if (entries[1][1] != entries[3][3] || entries[0][1] != entries[0][3] ||
      entries[2][1] != entries[2][3] || entries[3][1] != entries[1][3])
    throw std::domain_error("PumpMatrix: leakage columns violate the symmetry constraints");
  return PumpMatrix(entries);
}

Vec4 PumpMatrix::apply(const Vec4& p) const {
  Vec4 out{0.0, 0.0, 0.0, 0.0};
  for (std::size_t row = 0; row < 4; ++row)
    for (std::size_t col = 0; col < 4; ++col) out[row] += m_[row][col] * p[col];
  return out;
}

PopulationVector PumpMatrix::apply(const PopulationVector& p) const {
  // A column-stochastic matrix maps the probability simplex to itself; the
  // result re-validates only the cheap invariants.
  return PopulationVector::physical(apply(p.values()));
}

PumpMatrix ideal_pump_matrix() {
  const double third = 1.0 / 3.0;
  return PumpMatrix::from_rows({{{1.0, third, 0.0, third},
                                 {0.0, third, 0.0, 0.0},
                                 {0.0, third, 1.0, third},
                                 {0.0, 0.0, 0.0, third}}});
}

std::vector<Vec4> apply_cycles(const PumpMatrix& matrix, const PopulationVector& p0,
                               std::size_t n, double scale_a, double offset_b) {
  std::vector<Vec4> out;
  out.reserve(n + 1);
  Vec4 state = p0.values();
  for (std::size_t k = 0; k <= n; ++k) {
    Vec4 scaled;
    for (std::size_t i = 0; i < 4; ++i) scaled[i] = scale_a * state[i] + offset_b;
    out.push_back(scaled);
    if (k < n) state = matrix.apply(state);
  }
  return out;
}

}  // namespace repump
