#include "repump/rb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "repump/errors.hpp"
#include "repump/format.hpp"
#include "repump/least_squares.hpp"
#include "repump/parallel.hpp"
#include "repump/rng.hpp"

namespace repump {

namespace {

// The 24 rotations of the single-qubit symmetry group, represented as
// permutations of the six cardinal states (+z, -z, +x, -x, +y, -y). The
// stochastic flip channel is the antipodal map, i.e. state index ^ 1.
using Perm = std::array<std::uint8_t, 6>;

Perm compose(const Perm& a, const Perm& b) {
  Perm out;
  for (int s = 0; s < 6; ++s) out[s] = a[b[s]];
  return out;
}

Perm invert(const Perm& a) {
  Perm out;
  for (int s = 0; s < 6; ++s) out[a[s]] = static_cast<std::uint8_t>(s);
  return out;
}

std::vector<Perm> build_rotation_group() {
  const Perm identity{0, 1, 2, 3, 4, 5};
  const Perm quarter_z{0, 1, 4, 5, 3, 2};  // x->y, y->-x
  const Perm quarter_x{5, 4, 2, 3, 0, 1};  // y->z, z->-y
  std::vector<Perm> group{identity};
  std::set<Perm> seen{identity};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const Perm* gen : {&quarter_z, &quarter_x}) {
      const Perm next = compose(*gen, group[i]);
      if (seen.insert(next).second) group.push_back(next);
    }
  }
  if (group.size() != 24)
    throw std::logic_error("build_rotation_group: closure has wrong size");
  return group;
}

const std::vector<Perm>& rotation_group() {
  static const std::vector<Perm> group = build_rotation_group();
  return group;
}

// Substream domains: simulation units and bootstrap resamples may share one
// master seed within a single analysis, so their stream indices must not
// collide.
constexpr std::uint64_t kSimStreamDomain = 1ull << 40;
constexpr std::uint64_t kBootstrapStreamDomain = 2ull << 40;

double binomial_sigma(double frequency, std::uint64_t shots) {
  const double corrected = (frequency * static_cast<double>(shots) + 0.5) /
                           (static_cast<double>(shots) + 1.0);
  return std::sqrt(corrected * (1.0 - corrected) / static_cast<double>(shots));
}

DecayFit fit_decay_rows(const std::vector<RBRow>& rows) {
  std::set<std::uint32_t> lengths;
  for (const RBRow& row : rows) {
    lengths.insert(row.length);
    if (!(row.survival >= 0.0) || !(row.survival <= 1.0) || row.shots == 0)
      throw std::domain_error("fit_decay: rows must have survival in [0,1] and shots > 0");
  }
  if (lengths.size() < 3)
    throw insufficient_data_error("fit_decay: need >= 3 distinct sequence lengths, got " +
                                  std::to_string(lengths.size()));

  LeastSquaresProblem problem;
  problem.residual_count = rows.size();
  problem.lower = {0.0, 1e-9, 0.0};
  problem.upper = {1.0, 1.0, 1.0};
  // SPAM overshoot tolerance on A + B; shot noise puts the optimum slightly
  // above 1, which must stay interior for the fit to terminate cleanly.
  problem.project = [](std::vector<double>& q) {
    const double excess = q[0] + q[2] - 1.05;
    if (excess > 0.0) {
      q[0] = std::max(0.0, q[0] - 0.5 * excess);
      q[2] = std::max(0.0, 1.05 - q[0]);
    }
  };
  problem.residuals = [&rows](std::span<const double> q, std::vector<double>& r) {
    r.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double model = q[0] * std::pow(q[1], static_cast<double>(rows[i].length)) + q[2];
      r[i] = (model - rows[i].survival) / binomial_sigma(rows[i].survival, rows[i].shots);
    }
  };

  // Data-driven start: depolarizing baseline 1/2, rate from the mean decay
  // between the shortest and longest length.
  const std::uint32_t m_lo = *lengths.begin();
  const std::uint32_t m_hi = *lengths.rbegin();
  double y_lo = 0.0, y_hi = 0.0;
  std::size_t c_lo = 0, c_hi = 0;
  for (const RBRow& row : rows) {
    if (row.length == m_lo) { y_lo += row.survival; ++c_lo; }
    if (row.length == m_hi) { y_hi += row.survival; ++c_hi; }
  }
  y_lo /= static_cast<double>(c_lo);
  y_hi /= static_cast<double>(c_hi);
  double p_start = 1.0;  // no measured decay: the degenerate split lands at p = 1
  if (y_lo > 0.5 && y_hi > 0.5 && y_hi < y_lo)
    p_start = std::pow((y_hi - 0.5) / (y_lo - 0.5), 1.0 / static_cast<double>(m_hi - m_lo));
  p_start = std::clamp(p_start, 0.5, 1.0);

  const std::vector<std::vector<double>> starts = {
      {std::clamp(y_lo - 0.5, 0.0, 0.5), p_start, 0.5},
      {0.5, 0.999, 0.5},
      {0.5, 0.99, 0.5},
      {0.5, 0.9, 0.5},
      {std::clamp(y_lo, 0.1, 1.0), p_start, 0.0},
  };
  const LeastSquaresResult best = fit_least_squares_multistart(problem, starts);

  DecayFit fit;
  fit.amplitude = best.params[0];
  fit.rate = best.params[1];
  fit.baseline = best.params[2];
  fit.amplitude_sigma = best.sigmas[0];
  fit.rate_sigma = best.sigmas[1];
  fit.baseline_sigma = best.sigmas[2];
  fit.residual_norm = std::sqrt(best.chi2);
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  return fit;
}

std::map<std::uint32_t, std::vector<RBRow>> group_by_length(const RBDataset& dataset) {
  std::map<std::uint32_t, std::vector<RBRow>> groups;
  for (const RBRow& row : dataset.rows) groups[row.length].push_back(row);
  return groups;
}

}  // namespace

void validate(const RBConfig& config) {
  if (config.sequence_lengths.empty())
    throw std::domain_error("RBConfig: sequence_lengths must not be empty");
  for (std::size_t i = 1; i < config.sequence_lengths.size(); ++i)
    if (config.sequence_lengths[i] <= config.sequence_lengths[i - 1])
      throw std::domain_error("RBConfig: sequence_lengths must be strictly increasing");
  if (config.sequences_per_length == 0 || config.shots == 0)
    throw std::domain_error("RBConfig: counts must be >= 1");
  for (double p : {config.error_per_clifford, config.interleaved_extra_error})
    if (!(p >= 0.0) || !(p <= 0.5))
      throw std::domain_error("RBConfig: error rates must be in [0, 1/2]");
  if (!(config.interleaved_leak_rate >= 0.0) || !(config.interleaved_leak_rate <= 1.0))
    throw std::domain_error("RBConfig: interleaved_leak_rate must be in [0, 1]");
}

RBDataset simulate_rb(const RBConfig& config, bool interleaved, unsigned workers) {
  validate(config);
  const std::vector<Perm>& group = rotation_group();
  const std::size_t per_len = config.sequences_per_length;
  const std::size_t n_units = config.sequence_lengths.size() * per_len;

  RBDataset dataset;
  dataset.rows.resize(n_units);
  parallel_chunks(n_units, workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t unit = begin; unit < end; ++unit) {
      const std::size_t len_idx = unit / per_len;
      const std::uint32_t m = config.sequence_lengths[len_idx];
      Substream rng(config.seed, kSimStreamDomain + unit * 2 + (interleaved ? 1 : 0));

      std::vector<std::uint8_t> gates(m);
      Perm product{0, 1, 2, 3, 4, 5};
      for (std::uint32_t g = 0; g < m; ++g) {
        gates[g] = static_cast<std::uint8_t>(rng.below(24));
        product = compose(group[gates[g]], product);
      }
      const Perm inversion = invert(product);

      std::uint64_t survived = 0;
      for (std::uint64_t shot = 0; shot < config.shots; ++shot) {
        int state = 0;  // prepared in +z
        bool dark = false;
        for (std::uint32_t g = 0; g < m && !dark; ++g) {
          state = group[gates[g]][state];
          if (config.error_per_clifford > 0.0 && rng.bernoulli(config.error_per_clifford))
            state ^= 1;
          if (interleaved) {
            if (config.interleaved_extra_error > 0.0 &&
                rng.bernoulli(config.interleaved_extra_error))
              state ^= 1;
            if (config.interleaved_leak_rate > 0.0 &&
                rng.bernoulli(config.interleaved_leak_rate))
              dark = true;
          }
        }
        if (!dark && inversion[state] == 0) ++survived;
      }
      dataset.rows[unit] = {m, static_cast<std::uint32_t>(unit % per_len),
                            static_cast<double>(survived) / static_cast<double>(config.shots),
                            config.shots};
    }
  });
  return dataset;
}

DecayFit fit_decay(const RBDataset& dataset) { return fit_decay_rows(dataset.rows); }

double interleaved_error(double p_ref, double p_int) {
  if (!(p_ref > 0.0) || !(p_ref <= 1.0) || !(p_int > 0.0) || !(p_int <= 1.0))
    throw std::domain_error("interleaved_error: decay rates must be in (0, 1]");
  return 0.5 * (1.0 - p_int / p_ref);
}

BootstrapInterval bootstrap_ci(const RBDataset& reference, const RBDataset& interleaved,
                               std::uint32_t resamples, double confidence, std::uint64_t seed,
                               unsigned workers) {
  if (resamples < 100)
    throw std::domain_error("bootstrap_ci: resamples must be >= 100");
  if (!(confidence > 0.0) || !(confidence < 1.0))
    throw std::domain_error("bootstrap_ci: confidence must be in (0, 1)");

  const auto ref_groups = group_by_length(reference);
  const auto int_groups = group_by_length(interleaved);

  bool fallback = false;
  for (const auto* groups : {&ref_groups, &int_groups})
    for (const auto& [length, rows] : *groups)
      if (rows.size() < 2) fallback = true;

  const DecayFit ref_fit = fit_decay(reference);
  const DecayFit int_fit = fit_decay(interleaved);

  BootstrapInterval interval;
  interval.point = interleaved_error(ref_fit.rate, int_fit.rate);
  interval.confidence = confidence;
  interval.resamples = resamples;
  interval.shot_only_fallback = fallback;

  std::vector<double> estimates(resamples, 0.0);
  parallel_chunks(resamples, workers, [&](std::size_t begin, std::size_t end, unsigned) {
    std::vector<RBRow> rows;
    for (std::size_t r = begin; r < end; ++r) {
      Substream rng(seed, kBootstrapStreamDomain + r);
      double rates[2];
      const std::map<std::uint32_t, std::vector<RBRow>>* groups[2] = {&ref_groups, &int_groups};
      for (int which = 0; which < 2; ++which) {
        rows.clear();
        for (const auto& [length, group_rows] : *groups[which]) {
          const std::size_t n_seq = group_rows.size();
          for (std::size_t s = 0; s < n_seq; ++s) {
            const RBRow& source =
                fallback ? group_rows[s] : group_rows[rng.below(n_seq)];
            RBRow row = source;
            row.seq_index = static_cast<std::uint32_t>(s);
            row.survival = static_cast<double>(rng.binomial(source.shots, source.survival)) /
                           static_cast<double>(source.shots);
            rows.push_back(row);
          }
        }
        rates[which] = fit_decay_rows(rows).rate;
      }
      estimates[r] = interleaved_error(rates[0], rates[1]);
    }
  });

  std::sort(estimates.begin(), estimates.end());
  const auto quantile = [&estimates](double q) {
    const double pos = q * static_cast<double>(estimates.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, estimates.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return estimates[lo] * (1.0 - frac) + estimates[hi] * frac;
  };
  interval.lo = quantile(0.5 * (1.0 - confidence));
  interval.hi = quantile(1.0 - 0.5 * (1.0 - confidence));
  return interval;
}

PopulationDecayFit fit_population_decay(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw insufficient_data_error("fit_population_decay: need >= 3 points");
  for (const auto& [n, y] : points)
    if (!(n >= 0.0) || !std::isfinite(y))
      throw std::domain_error("fit_population_decay: bad data point");

  LeastSquaresProblem problem;
  problem.residual_count = points.size();
  problem.project = [](std::vector<double>& q) { q[0] = std::max(q[0], 0.0); };
  problem.residuals = [&points](std::span<const double> q, std::vector<double>& r) {
    r.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      r[i] = std::exp(-q[0] * points[i].first) - points[i].second;
  };

  // Endpoint ratio seed, falling back to zero decay for flat data.
  double lambda0 = 0.0;
  const auto& first = points.front();
  const auto& last = points.back();
  if (last.first > first.first && last.second > 0.0 && first.second > 0.0 &&
      last.second < first.second)
    lambda0 = std::log(first.second / last.second) / (last.first - first.first);

  const LeastSquaresResult best =
      fit_least_squares_multistart(problem, {{lambda0}, {0.0}});

  PopulationDecayFit fit;
  fit.lambda = best.params[0];
  fit.converged = best.converged;
  // Unweighted fit: scale the curvature-based sigma by the residual noise.
  const double dof = static_cast<double>(points.size()) - 1.0;
  fit.lambda_sigma = best.sigmas[0] * std::sqrt(std::max(best.chi2, 0.0) / dof);
  return fit;
}

void write_rb_csv(std::ostream& out, const RBDataset& dataset) {
  out << "length,seq_index,survival,shots\n";
  for (const RBRow& row : dataset.rows)
    out << row.length << ',' << row.seq_index << ',' << format_g9(row.survival) << ','
        << row.shots << '\n';
}

void write_rb_csv(const std::filesystem::path& file, const RBDataset& dataset) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_rb_csv: cannot open " + file.string());
  write_rb_csv(out, dataset);
}

RBDataset read_rb_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("read_rb_csv: cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != "length,seq_index,survival,shots")
    throw std::runtime_error("read_rb_csv: " + file.string() + ": unexpected header");
  RBDataset dataset;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    RBRow r;
    char comma;
    row >> r.length >> comma >> r.seq_index >> comma >> r.survival >> comma >> r.shots;
    if (!row)
      throw std::runtime_error("read_rb_csv: " + file.string() + ": bad row at line " +
                               std::to_string(line_no));
    dataset.rows.push_back(r);
  }
  return dataset;
}

}  // namespace repump
