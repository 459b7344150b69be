#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace repump {

// State ordering used everywhere: (|0>, |L->, |1>, |L+>).
enum class PumpState : int { Q0 = 0, Lm = 1, Q1 = 2, Lp = 3 };

inline constexpr std::size_t kNumPumpStates = 4;

// A physical population vector over the four 2S1/2 states.
class PopulationVector {
 public:
  // Validates entries in [0, 1] and unit sum within 1e-12.
  static PopulationVector physical(const std::array<double, 4>& p);
  static PopulationVector basis(PumpState s);

  double operator[](std::size_t i) const { return p_[i]; }
  double at(PumpState s) const { return p_[static_cast<int>(s)]; }
  const std::array<double, 4>& values() const { return p_; }

  double leakage() const { return p_[1] + p_[3]; }

 private:
  explicit PopulationVector(const std::array<double, 4>& p) : p_(p) {}
  std::array<double, 4> p_;
};

// Model outputs may be SPAM-scaled (A*p + B), so they are plain 4-vectors
// rather than PopulationVectors.
using Vec4 = std::array<double, 4>;

// Single-cycle transfer operator R; column j is the destination distribution
// of source state j. Construction enforces:
//   - column-stochastic within 1e-12,
//   - qubit columns exactly the identity basis vectors,
//   - leakage symmetry: R(L-:L-)=R(L+:L+), R(L-:0)=R(L+:0),
//     R(L-:1)=R(L+:1), R(L-:L+)=R(L+:L-).
class PumpMatrix {
 public:
  // entries[row][col]
  static PumpMatrix from_rows(const std::array<std::array<double, 4>, 4>& entries);

  double operator()(std::size_t row, std::size_t col) const { return m_[row][col]; }

  PopulationVector apply(const PopulationVector& p) const;
  Vec4 apply(const Vec4& p) const;

 private:
  explicit PumpMatrix(const std::array<std::array<double, 4>, 4>& m) : m_(m) {}
  std::array<std::array<double, 4>, 4> m_;
};

// The ideal cycle: each leakage state loses 1/3 to |0>, keeps 1/3, loses 1/3
// to |1>, with no cross-leakage; qubit states are fixed points.
PumpMatrix ideal_pump_matrix();

// Trajectory of the linear model: entry k is A * R^k * p0 + B (B added to
// every component), for k = 0..n. Computed by repeated application.
std::vector<Vec4> apply_cycles(const PumpMatrix& matrix, const PopulationVector& p0,
                               std::size_t n, double scale_a, double offset_b);

}  // namespace repump
