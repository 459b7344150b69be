#include "repump/sublevels.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace repump {

namespace {

const char* manifold_token(Manifold m) {
  switch (m) {
    case Manifold::S12: return "S12";
    case Manifold::D32: return "D32";
    case Manifold::Bracket: return "B12";
  }
  throw std::logic_error("manifold_token: bad manifold");
}

Manifold parse_manifold(std::string_view tok) {
  if (tok == "S12") return Manifold::S12;
  if (tok == "D32") return Manifold::D32;
  if (tok == "B12") return Manifold::Bracket;
  throw std::domain_error("parse_sublevel: unknown manifold '" + std::string(tok) + "'");
}

}  // namespace

std::string to_string(const Sublevel& s) {
  std::ostringstream out;
  out << manifold_token(s.manifold) << ":F" << s.f << ":m" << s.mf;
  return out.str();
}

Sublevel parse_sublevel(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string_view::npos ? c1 : c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos)
    throw std::domain_error("parse_sublevel: expected '<manifold>:F<f>:m<mf>', got '" +
                            std::string(text) + "'");
  const Manifold manifold = parse_manifold(text.substr(0, c1));
  const std::string_view ftok = text.substr(c1 + 1, c2 - c1 - 1);
  const std::string_view mtok = text.substr(c2 + 1);
  if (ftok.size() < 2 || ftok[0] != 'F' || mtok.size() < 2 || mtok[0] != 'm')
    throw std::domain_error("parse_sublevel: expected '<manifold>:F<f>:m<mf>', got '" +
                            std::string(text) + "'");
  try {
    const int f = std::stoi(std::string(ftok.substr(1)));
    const int mf = std::stoi(std::string(mtok.substr(1)));
    return Sublevel{manifold, f, mf};
  } catch (const std::exception&) {
    throw std::domain_error("parse_sublevel: bad quantum numbers in '" + std::string(text) + "'");
  }
}

SublevelDistribution::SublevelDistribution(WeightMap weights) : weights_(std::move(weights)) {
  double total = 0.0;
  for (const auto& [level, w] : weights_) {
    if (!(w >= 0.0) || !(w <= 1.0))
      throw std::domain_error("SublevelDistribution: weight for " + to_string(level) +
                              " outside [0, 1]");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::domain_error("SublevelDistribution: weights sum to " + std::to_string(total) +
                            ", expected 1");
}

double SublevelDistribution::weight(const Sublevel& s) const {
  const auto it = weights_.find(s);
  return it == weights_.end() ? 0.0 : it->second;
}

double SublevelDistribution::manifold_mass(Manifold m) const {
  double total = 0.0;
  for (const auto& [level, w] : weights_)
    if (level.manifold == m) total += w;
  return total;
}

double SublevelDistribution::mass(Manifold m, int f) const {
  double total = 0.0;
  for (const auto& [level, w] : weights_)
    if (level.manifold == m && level.f == f) total += w;
  return total;
}

BranchingTable::BranchingTable(RowMap rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::domain_error("BranchingTable: no rows");
}

const SublevelDistribution& BranchingTable::decay_from(const Sublevel& source) const {
  const auto it = rows_.find(source);
  if (it == rows_.end())
    throw std::domain_error("BranchingTable: no decay row for " + to_string(source));
  return it->second;
}

BranchingTable default_branching_table(const AtomicConstants& constants) {
  const double bs = constants.branch_to_s();
  const double bd = constants.branch_to_d();
  BranchingTable::RowMap rows;
  for (int m : {-1, 0, +1}) {
    SublevelDistribution::WeightMap w;
    if (m == 0) {
      w[kQubit0] = bs / 6.0;
      w[kQubit1] = bs / 6.0;
      w[kLeakMinus] = bs / 3.0;
      w[kLeakPlus] = bs / 3.0;
    } else {
      w[kQubit0] = bs / 3.0;
      w[kQubit1] = bs / 3.0;
      w[m < 0 ? kLeakMinus : kLeakPlus] = bs / 3.0;
    }
    if (bd > 0.0) {
      // Dipole-reachable F=2 shelf levels: m-1, m, m+1.
      for (int dm = -1; dm <= 1; ++dm) w[d32(2, m + dm)] = bd / 3.0;
    }
    rows.emplace(bracket_f1(m), SublevelDistribution(std::move(w)));
  }
  return BranchingTable(std::move(rows));
}

BranchingTable load_branching_table(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_branching_table: cannot open " + file.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("load_branching_table: " + file.string() + ": " + e.what());
  }
  if (!doc.is_object())
    throw std::domain_error("load_branching_table: top level must be an object");
  BranchingTable::RowMap rows;
  for (const auto& [source_key, dist] : doc.items()) {
    if (!dist.is_object())
      throw std::domain_error("load_branching_table: row " + source_key + " must be an object");
    SublevelDistribution::WeightMap w;
    for (const auto& [dest_key, weight] : dist.items()) {
      if (!weight.is_number())
        throw std::domain_error("load_branching_table: weight " + source_key + " -> " +
                                dest_key + " must be a number");
      w[parse_sublevel(dest_key)] = weight.get<double>();
    }
    rows.emplace(parse_sublevel(source_key), SublevelDistribution(std::move(w)));
  }
  return BranchingTable(std::move(rows));
}

void save_branching_table(const BranchingTable& table, const std::filesystem::path& file) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [source, dist] : table.rows()) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [dest, w] : dist.weights()) row[to_string(dest)] = w;
    doc[to_string(source)] = std::move(row);
  }
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_branching_table: cannot open " + file.string());
  out << doc.dump(2) << '\n';
}

SublevelDistribution bracket_decay_distribution(const Sublevel& source,
                                                const AtomicConstants& constants) {
  if (source.manifold != Manifold::Bracket || source.f != 1 || source.mf < -1 || source.mf > 1)
    throw std::domain_error("bracket_decay_distribution: source must be a 3[3/2]1/2 F=1 "
                            "sublevel, got " + to_string(source));
  return default_branching_table(constants).decay_from(source);
}

}  // namespace repump
