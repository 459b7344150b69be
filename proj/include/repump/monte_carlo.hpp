#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "repump/constants.hpp"
#include "repump/pump.hpp"
#include "repump/sublevels.hpp"

namespace repump {

// Knobs of the event-level cycle simulation. transfer_fidelity is the
// probability that a quadrupole pi-pulse moves a leakage state to 2D3/2
// (it absorbs Debye-Waller and detuning effects); pol_impurity_935 is the
// probability that a 935 nm pumping event routes through the m_f = 0
// bracket sublevel instead of the polarization-selected one; shelf_cleanup
// runs the final sideband pulse that empties the 2D3/2 F=2 shelf before the
// last readout. prep_error / readout_error are optional SPAM flips: with the
// given probability the prepared (or recorded) state is replaced by one of
// the other visible states uniformly.
struct RepumpConfig {
  double transfer_fidelity = 1.0;
  double pol_impurity_935 = 0.0;
  bool shelf_cleanup = true;
  std::uint32_t n_cycles = 10;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  PumpState initial_state = PumpState::Lm;
  double prep_error = 0.0;
  double readout_error = 0.0;
  // The two transfer pulses act on disjoint source states, so sequential and
  // simultaneous application are the same event model; the flag is kept so
  // configs can state which hardware schedule they describe.
  bool simultaneous_transfer = false;
};

void validate(const RepumpConfig& config);

struct TrajectoryPoint {
  std::uint32_t cycle = 0;
  std::array<double, 4> p{};   // (|0>, |L->, |1>, |L+>)
  std::array<double, 4> se{};  // binomial standard errors
  double shelf = 0.0;          // hidden 2D3/2 F=2 population, not in CSV
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  std::uint64_t trials = 0;
};

// Trial-resolved simulation of n repump cycles. Each trial occupies exactly
// one sublevel at all times; per-cycle occupancies are averaged over trials
// with continuity-corrected binomial standard errors, so no emitted error
// bar is ever zero. Randomness is drawn from per-trial substreams of
// (seed, trial index): results are identical for any worker count.
Trajectory run_monte_carlo(const RepumpConfig& config, const AtomicConstants& constants,
                           const BranchingTable& branching, unsigned workers = 1);

// The measurement layout used for the population-pumping figure: 1000 shots
// per cycle index with the given seed.
Trajectory fig2_synthetic_dataset(const RepumpConfig& config, std::uint64_t seed,
                                  const AtomicConstants& constants,
                                  const BranchingTable& branching, unsigned workers = 1);

// CSV columns: cycle,p0,pLm,p1,pLp,se0,seLm,se1,seLp (9 significant digits).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& trajectory);
Trajectory read_trajectory_csv(const std::filesystem::path& file);

}  // namespace repump
