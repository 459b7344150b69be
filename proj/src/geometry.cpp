#include "repump/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace repump {

namespace {
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);
}

double geometric_factor(int delta_m, const TransitionGeometry& geom) {
  if (!std::isfinite(geom.theta) || !std::isfinite(geom.phi))
    throw std::domain_error("geometric_factor: angles must be finite");
  const double ct = std::cos(geom.theta);
  const double st = std::sin(geom.theta);
  switch (std::abs(delta_m)) {
    case 0:
      return 0.5 * std::fabs(ct * std::sin(2.0 * geom.phi));
    case 1:
      return kInvSqrt6 * std::hypot(ct * std::cos(2.0 * geom.phi), st * std::cos(geom.phi));
    case 2:
      return kInvSqrt6 *
             std::hypot(0.5 * ct * std::sin(2.0 * geom.phi), st * std::sin(geom.phi));
    default:
      throw std::domain_error("geometric_factor: delta_m must be in {0, +-1, +-2}");
  }
}

std::vector<SelectionEntry> selection_table(const TransitionGeometry& geom, double threshold) {
  if (!(threshold >= 0.0))
    throw std::domain_error("selection_table: threshold must be >= 0");
  std::vector<SelectionEntry> entries;
  for (int dm = -2; dm <= 2; ++dm) {
    const double g = geometric_factor(dm, geom);
    if (g >= threshold) entries.push_back({dm, g});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const SelectionEntry& a, const SelectionEntry& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    return a.delta_m < b.delta_m;
  });
  return entries;
}

}  // namespace repump
