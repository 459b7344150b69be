#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "repump/constants.hpp"

namespace repump {

// Manifolds that appear in the repump chain: 2S1/2 (ground, holds the qubit
// and the leakage states), 2D3/2 (metastable), and the 3[3/2]1/2 bracket
// state the 935 nm light pumps through.
enum class Manifold { S12, D32, Bracket };

struct Sublevel {
  Manifold manifold;
  int f;
  int mf;
  auto operator<=>(const Sublevel&) const = default;
};

// Compact text form used in branching-table files, e.g. "S12:F1:m-1".
std::string to_string(const Sublevel& s);
Sublevel parse_sublevel(std::string_view text);

inline constexpr Sublevel kQubit0{Manifold::S12, 0, 0};
inline constexpr Sublevel kQubit1{Manifold::S12, 1, 0};
inline constexpr Sublevel kLeakMinus{Manifold::S12, 1, -1};
inline constexpr Sublevel kLeakPlus{Manifold::S12, 1, +1};

inline Sublevel bracket_f1(int mf) { return {Manifold::Bracket, 1, mf}; }
inline Sublevel d32(int f, int mf) { return {Manifold::D32, f, mf}; }

// A normalized probability distribution over named sublevels.
class SublevelDistribution {
 public:
  using WeightMap = std::map<Sublevel, double>;

  // Validates: every weight in [0, 1], total within 1e-12 of 1.
  explicit SublevelDistribution(WeightMap weights);

  const WeightMap& weights() const { return weights_; }
  double weight(const Sublevel& s) const;
  // Total mass on a manifold (optionally restricted to one F level).
  double manifold_mass(Manifold m) const;
  double mass(Manifold m, int f) const;

 private:
  WeightMap weights_;
};

// Spontaneous-decay branching for each 3[3/2]1/2 F=1 source sublevel.
class BranchingTable {
 public:
  using RowMap = std::map<Sublevel, SublevelDistribution>;

  explicit BranchingTable(RowMap rows);

  const SublevelDistribution& decay_from(const Sublevel& source) const;
  const RowMap& rows() const { return rows_; }

 private:
  RowMap rows_;
};

// Default table. The manifold split is branch_to_S / branch_to_D; within
// 2S1/2 the m = +-1 sources split (1/3, 1/3, 1/3) over {|0>, |1>, |L+->} and
// the m = 0 source splits (1/6, 1/6, 1/3, 1/3) over {|0>, |1>, |L->, |L+>}.
// The 2D3/2 share lands in F=2 (the shelf), spread over the dipole-reachable
// m levels. The whole table can be replaced by a file, so corrected physics
// needs no code change.
BranchingTable default_branching_table(const AtomicConstants& constants);

// JSON file: { "<source>": { "<destination>": weight, ... }, ... } with
// sublevels in the to_string() form above.
BranchingTable load_branching_table(const std::filesystem::path& file);
void save_branching_table(const BranchingTable& table, const std::filesystem::path& file);

// Decay distribution of one bracket F=1 sublevel (m_f in {-1, 0, +1}) under
// the default table. Throws std::domain_error for any other source.
SublevelDistribution bracket_decay_distribution(const Sublevel& source,
                                                const AtomicConstants& constants);

}  // namespace repump
