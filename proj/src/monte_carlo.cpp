#include "repump/monte_carlo.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "repump/errors.hpp"
#include "repump/format.hpp"
#include "repump/parallel.hpp"
#include "repump/rng.hpp"

namespace repump {

namespace {

// Trial state: the four visible 2S1/2 states, the 2D3/2 F=1 sublevels the
// 935 nm light can pump, and the F=2 shelf.
struct TrialState {
  enum class Kind { Visible, DPump, Shelf } kind = Kind::Visible;
  int payload = 0;  // Visible: PumpState index; DPump: m_f of 2D3/2 F=1
};

constexpr std::size_t kShelfSlot = 4;

struct FlatRow {
  Sublevel destination;
  double weight;
};

// Branching rows flattened for fast categorical sampling.
struct FlatTable {
  std::vector<FlatRow> rows[3];  // bracket m_f = -1, 0, +1
  const std::vector<FlatRow>& row(int bracket_m) const { return rows[bracket_m + 1]; }
};

FlatTable flatten(const BranchingTable& table) {
  FlatTable flat;
  for (int m : {-1, 0, +1}) {
    const SublevelDistribution& dist = table.decay_from(bracket_f1(m));
    for (const auto& [dest, w] : dist.weights())
      if (w > 0.0) flat.rows[m + 1].push_back({dest, w});
  }
  return flat;
}

int visible_slot(const Sublevel& s) {
  if (s == kQubit0) return 0;
  if (s == kLeakMinus) return 1;
  if (s == kQubit1) return 2;
  if (s == kLeakPlus) return 3;
  return -1;
}

TrialState land_on(const Sublevel& dest) {
  if (dest.manifold == Manifold::S12) {
    const int slot = visible_slot(dest);
    if (slot < 0)
      throw std::domain_error("run_monte_carlo: branching table decays to unmapped "
                              "2S1/2 sublevel " + to_string(dest));
    return {TrialState::Kind::Visible, slot};
  }
  if (dest.manifold == Manifold::D32) {
    if (dest.f == 2) return {TrialState::Kind::Shelf, 0};
    if (dest.f == 1 && dest.mf >= -1 && dest.mf <= 1)
      return {TrialState::Kind::DPump, dest.mf};
  }
  throw std::domain_error("run_monte_carlo: branching table decays to unsupported "
                          "sublevel " + to_string(dest));
}

Sublevel sample_decay(const std::vector<FlatRow>& row, Substream& rng) {
  double total = 0.0;
  for (const FlatRow& r : row) total += r.weight;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i + 1 < row.size(); ++i) {
    u -= row[i].weight;
    if (u < 0.0) return row[i].destination;
  }
  return row.back().destination;
}

// One 935 nm pumping pass: pumps 2D3/2 F=1 population through the bracket
// state until it decays somewhere else. with_sidebands additionally empties
// the F=2 shelf (the cleanup pulse); the shelf carries no
// polarization-selected m, so its bracket sublevel is drawn uniformly.
void pump_until_settled(TrialState& state, const FlatTable& table, double impurity,
                        bool with_sidebands, Substream& rng) {
  for (int guard = 0; guard < 4096; ++guard) {
    if (state.kind == TrialState::Kind::DPump) {
      const int bracket_m = (impurity > 0.0 && rng.bernoulli(impurity)) ? 0 : state.payload;
      state = land_on(sample_decay(table.row(bracket_m), rng));
      continue;
    }
    if (state.kind == TrialState::Kind::Shelf && with_sidebands) {
      const int bracket_m = static_cast<int>(rng.below(3)) - 1;
      state = land_on(sample_decay(table.row(bracket_m), rng));
      continue;
    }
    return;
  }
  throw convergence_error("run_monte_carlo: pumping loop failed to settle "
                          "(branching table keeps population in 2D3/2)");
}

}  // namespace

void validate(const RepumpConfig& config) {
  for (double p : {config.transfer_fidelity, config.pol_impurity_935, config.prep_error,
                   config.readout_error})
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::domain_error("RepumpConfig: probabilities must be in [0, 1]");
  if (config.trials == 0) throw std::domain_error("RepumpConfig: trials must be >= 1");
}

Trajectory run_monte_carlo(const RepumpConfig& config, const AtomicConstants& constants,
                           const BranchingTable& branching, unsigned workers) {
  validate(config);
  (void)constants;  // the table already encodes the branching fractions
  const FlatTable table = flatten(branching);
  const std::uint32_t n = config.n_cycles;
  const std::size_t n_rows = static_cast<std::size_t>(n) + 1;

  workers = std::max(1u, workers);
  std::vector<std::vector<std::array<std::uint64_t, 5>>> slot_counts(
      workers, std::vector<std::array<std::uint64_t, 5>>(n_rows, {0, 0, 0, 0, 0}));

  parallel_chunks(config.trials, workers, [&](std::size_t begin, std::size_t end, unsigned slot) {
    auto& counts = slot_counts[slot];
    for (std::size_t trial = begin; trial < end; ++trial) {
      Substream rng(config.seed, trial);

      TrialState state{TrialState::Kind::Visible, static_cast<int>(config.initial_state)};
      if (config.prep_error > 0.0 && rng.bernoulli(config.prep_error)) {
        const int offset = 1 + static_cast<int>(rng.below(3));
        state.payload = (state.payload + offset) % 4;
      }

      auto record = [&](std::uint32_t cycle) {
        if (state.kind == TrialState::Kind::Shelf) {
          counts[cycle][kShelfSlot]++;
          return;
        }
        int slot_index = state.payload;
        if (config.readout_error > 0.0 && rng.bernoulli(config.readout_error)) {
          const int offset = 1 + static_cast<int>(rng.below(3));
          slot_index = (slot_index + offset) % 4;
        }
        counts[cycle][slot_index]++;
      };

      record(0);
      for (std::uint32_t cycle = 1; cycle <= n; ++cycle) {
        // Quadrupole transfers: |L-> -> D(F1, m=+1), |L+> -> D(F1, m=-1).
        if (state.kind == TrialState::Kind::Visible) {
          if (state.payload == static_cast<int>(PumpState::Lm) &&
              rng.bernoulli(config.transfer_fidelity))
            state = {TrialState::Kind::DPump, +1};
          else if (state.payload == static_cast<int>(PumpState::Lp) &&
                   rng.bernoulli(config.transfer_fidelity))
            state = {TrialState::Kind::DPump, -1};
        }
        pump_until_settled(state, table, config.pol_impurity_935, false, rng);
        if (cycle == n && config.shelf_cleanup)
          pump_until_settled(state, table, config.pol_impurity_935, true, rng);
        record(cycle);
      }
    }
  });

  std::vector<std::array<std::uint64_t, 5>> counts(n_rows, {0, 0, 0, 0, 0});
  for (const auto& part : slot_counts)
    for (std::size_t row = 0; row < n_rows; ++row)
      for (std::size_t s = 0; s < 5; ++s) counts[row][s] += part[row][s];

  Trajectory traj;
  traj.trials = config.trials;
  traj.points.resize(n_rows);
  const double trials = static_cast<double>(config.trials);
  for (std::size_t row = 0; row < n_rows; ++row) {
    TrajectoryPoint& pt = traj.points[row];
    pt.cycle = static_cast<std::uint32_t>(row);
    for (std::size_t s = 0; s < 4; ++s) {
      pt.p[s] = static_cast<double>(counts[row][s]) / trials;
      // Continuity-corrected rate keeps the error bar positive at counts of
      // 0 or trials, which downstream inverse-variance fits depend on.
      const double corrected = (static_cast<double>(counts[row][s]) + 0.5) / (trials + 1.0);
      pt.se[s] = std::sqrt(corrected * (1.0 - corrected) / trials);
    }
    pt.shelf = static_cast<double>(counts[row][kShelfSlot]) / trials;
  }
  return traj;
}

Trajectory fig2_synthetic_dataset(const RepumpConfig& config, std::uint64_t seed,
                                  const AtomicConstants& constants,
                                  const BranchingTable& branching, unsigned workers) {
  // The measurement is destructive: each cycle count is its own 1000-shot
  // experiment (prepare, pump n times, clean up, read out), so points are
  // statistically independent and each one sees the end-of-sequence cleanup.
  Trajectory out;
  out.trials = 1000;
  for (std::uint32_t n = 0; n <= config.n_cycles; ++n) {
    RepumpConfig point = config;
    point.trials = 1000;
    point.n_cycles = n;
    point.seed = derive_stream_seed(seed, 0xF162000ull + n);
    const Trajectory single = run_monte_carlo(point, constants, branching, workers);
    out.points.push_back(single.points.back());
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "cycle,p0,pLm,p1,pLp,se0,seLm,se1,seLp\n";
  for (const TrajectoryPoint& pt : trajectory.points) {
    out << pt.cycle;
    for (double v : pt.p) out << ',' << format_g9(v);
    for (double v : pt.se) out << ',' << format_g9(v);
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& trajectory) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + file.string());
  write_trajectory_csv(out, trajectory);
}

Trajectory read_trajectory_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("read_trajectory_csv: cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != "cycle,p0,pLm,p1,pLp,se0,seLm,se1,seLp")
    throw std::runtime_error("read_trajectory_csv: " + file.string() +
                             ": unexpected header '" + line + "'");
  Trajectory traj;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    TrajectoryPoint pt;
    char comma;
    row >> pt.cycle;
    for (std::size_t i = 0; i < 4; ++i) row >> comma >> pt.p[i];
    for (std::size_t i = 0; i < 4; ++i) row >> comma >> pt.se[i];
    if (!row)
      throw std::runtime_error("read_trajectory_csv: " + file.string() + ": bad row at line " +
                               std::to_string(line_no));
    traj.points.push_back(pt);
  }
  return traj;
}

}  // namespace repump
