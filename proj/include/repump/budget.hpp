#pragma once

#include <cstdint>

namespace repump {

// Surface-code case-study inputs: eps0 is the (leakage-dominated) initial
// error, eps_l / eps_q the leakage-inducing and qubit-only error added per
// repump cycle, suppression_target the required reduction factor, and
// cycle_time the wall-clock cost of one cycle.
struct BudgetInput {
  double eps0 = 1e-3;
  double eps_l = 0.0;
  double eps_q = 2e-5;
  double suppression_target = 1000.0;
  double cycle_time = 10e-6;  // seconds
};

void validate(const BudgetInput& in);

// eps0 * (1/3)^n + (3 eps_l / 2) * (1 - (1/3)^n)
double leakage_after_cycles(double eps0, double eps_l, std::uint32_t n);

// eps0 + n * (eps_q + eps_l)
double total_error(double eps0, double eps_q, double eps_l, std::uint32_t n);

// Smallest n with leakage_after_cycles(eps0, eps_l, n) <= eps0 / target.
// The induced-leakage floor 3*eps_l/2 can make the target unreachable; that
// raises std::domain_error naming the floor, never a silently clamped n.
std::uint32_t min_cycles(double eps0, double eps_l, double suppression_target);

double schedule_time(std::uint32_t n, double cycle_time);

}  // namespace repump
