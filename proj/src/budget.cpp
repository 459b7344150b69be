#include "repump/budget.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace repump {

void validate(const BudgetInput& in) {
  for (double p : {in.eps0, in.eps_l, in.eps_q})
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::domain_error("BudgetInput: error probabilities must be in [0, 1]");
  if (!(in.suppression_target >= 1.0))
    throw std::domain_error("BudgetInput: suppression_target must be >= 1");
  if (!(in.cycle_time > 0.0))
    throw std::domain_error("BudgetInput: cycle_time must be positive");
}

double leakage_after_cycles(double eps0, double eps_l, std::uint32_t n) {
  const double shrink = std::pow(3.0, -static_cast<double>(n));
  return eps0 * shrink + 1.5 * eps_l * (1.0 - shrink);
}

double total_error(double eps0, double eps_q, double eps_l, std::uint32_t n) {
  return eps0 + static_cast<double>(n) * (eps_q + eps_l);
}

std::uint32_t min_cycles(double eps0, double eps_l, double suppression_target) {
  if (!(suppression_target >= 1.0))
    throw std::domain_error("min_cycles: suppression_target must be >= 1");
  const double target = eps0 / suppression_target;
  const double floor = 1.5 * eps_l;
  if (leakage_after_cycles(eps0, eps_l, 0) <= target) return 0;
  // Leakage moves monotonically from eps0 toward the floor, so the target is
  // reachable only if the floor lies strictly below it.
  if (!(floor < target)) {
    std::ostringstream msg;
    msg << "min_cycles: unreachable suppression target " << suppression_target
        << ": induced-leakage floor 3*eps_l/2 = " << floor
        << " is not below the required leakage " << target;
    throw std::domain_error(msg.str());
  }
  for (std::uint32_t n = 1; n <= 100000; ++n)
    if (leakage_after_cycles(eps0, eps_l, n) <= target) return n;
  throw std::domain_error("min_cycles: no n <= 100000 meets the target");
}

double schedule_time(std::uint32_t n, double cycle_time) {
  return static_cast<double>(n) * cycle_time;
}

}  // namespace repump
