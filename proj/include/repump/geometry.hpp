#pragma once

#include <vector>

namespace repump {

// Orientation of the 435 nm quadrupole beam relative to the quantization
// axis: theta is the polarization angle, phi the k-vector angle, both in
// radians. The coupling formulas are periodic, so any finite value is valid.
struct TransitionGeometry {
  double theta = 0.0;
  double phi = 0.0;
};

// Dimensionless quadrupole coupling g^(|delta_m|)(theta, phi):
//
//   g0 = (1/2)|cos(theta) sin(2 phi)|
//   g1 = (1/sqrt 6)|cos(theta) cos(2 phi) + i sin(theta) cos(phi)|
//   g2 = (1/sqrt 6)|(1/2) cos(theta) sin(2 phi) + i sin(theta) sin(phi)|
//
// The coupling depends on |delta_m| only. Throws std::domain_error for
// delta_m outside {0, +-1, +-2} or non-finite angles.
double geometric_factor(int delta_m, const TransitionGeometry& geom);

struct SelectionEntry {
  int delta_m;
  double strength;
};

// All delta_m in {-2..2} with geometric_factor >= threshold, sorted by
// descending strength (ties by ascending delta_m). threshold must be >= 0.
std::vector<SelectionEntry> selection_table(const TransitionGeometry& geom, double threshold);

}  // namespace repump
