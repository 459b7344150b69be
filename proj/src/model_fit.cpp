#include "repump/model_fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "repump/errors.hpp"
#include "repump/least_squares.hpp"
#include "repump/rng.hpp"

namespace repump {

namespace {

// Unvalidated model evaluation used inside the fitter, where
// finite-difference probes may sit marginally outside the feasible box.
void predict_raw(std::span<const double> q, const Vec4& p0, std::uint32_t n_max,
                 std::vector<Vec4>& out) {
  const double r0 = q[0], rs = q[1], r1 = q[2], a = q[3], b = q[4];
  const double cross = 1.0 - r0 - rs - r1;
  out.resize(n_max + 1);
  Vec4 state = p0;
  for (std::uint32_t k = 0; k <= n_max; ++k) {
    for (std::size_t i = 0; i < 4; ++i) out[k][i] = a * state[i] + b;
    if (k < n_max) {
      const Vec4 s = state;
      state[0] = s[0] + r0 * (s[1] + s[3]);
      state[1] = rs * s[1] + cross * s[3];
      state[2] = s[2] + r1 * (s[1] + s[3]);
      state[3] = cross * s[1] + rs * s[3];
    }
  }
}

struct WeightedValue {
  std::uint32_t cycle;
  std::size_t component;
  double value;
  double sigma;
};

// During optimization the simplex face gets a little slack (a marginally
// negative cross-leakage is numerically harmless); the returned parameters
// are projected back onto the exact simplex afterwards.
void project_params_slack(std::vector<double>& q) {
  const double sum = q[0] + q[1] + q[2];
  if (sum > 1.02) {
    const double scale = 1.02 / sum;
    q[0] *= scale;
    q[1] *= scale;
    q[2] *= scale;
  }
}

void project_params_exact(std::vector<double>& q) {
  const double sum = q[0] + q[1] + q[2];
  if (sum > 1.0) {
    const double scale = (1.0 - 1e-15) / sum;
    q[0] *= scale;
    q[1] *= scale;
    q[2] *= scale;
  }
}

}  // namespace

void validate(const PumpModelParams& params) {
  for (double r : {params.r_to0, params.r_stay, params.r_to1})
    if (!(r >= 0.0))
      throw std::domain_error("PumpModelParams: rates must be non-negative");
  if (params.r_to0 + params.r_stay + params.r_to1 > 1.0 + 1e-12)
    throw std::domain_error("PumpModelParams: r_to0 + r_stay + r_to1 exceeds 1 "
                            "(negative cross-leakage)");
  if (!(params.scale_a > 0.0) || !(params.scale_a <= 1.2))
    throw std::domain_error("PumpModelParams: scale_A must be in (0, 1.2]");
  if (!(params.offset_b >= -0.1) || !(params.offset_b <= 0.1))
    throw std::domain_error("PumpModelParams: offset_B must be in [-0.1, 0.1]");
}

double cross_leakage(const PumpModelParams& params) {
  return std::max(0.0, 1.0 - params.r_to0 - params.r_stay - params.r_to1);
}

PumpMatrix build_pump_matrix(const PumpModelParams& params) {
  validate(params);
  const double cross = cross_leakage(params);
  return PumpMatrix::from_rows({{{1.0, params.r_to0, 0.0, params.r_to0},
                                 {0.0, params.r_stay, 0.0, cross},
                                 {0.0, params.r_to1, 1.0, params.r_to1},
                                 {0.0, cross, 0.0, params.r_stay}}});
}

std::vector<Vec4> predict(const PumpModelParams& params, const PopulationVector& p0,
                          std::span<const std::uint32_t> cycle_indices) {
  validate(params);
  std::uint32_t n_max = 0;
  for (std::uint32_t k : cycle_indices) n_max = std::max(n_max, k);
  const double q[5] = {params.r_to0, params.r_stay, params.r_to1, params.scale_a,
                       params.offset_b};
  std::vector<Vec4> table;
  predict_raw(std::span<const double>(q, 5), p0.values(), n_max, table);
  std::vector<Vec4> out;
  out.reserve(cycle_indices.size());
  for (std::uint32_t k : cycle_indices) out.push_back(table[k]);
  return out;
}

FitResult fit_pump_model(const Trajectory& dataset, const PopulationVector& p0,
                         const PumpModelParams& initial_guess) {
  validate(initial_guess);

  std::set<std::uint32_t> distinct;
  std::vector<WeightedValue> values;
  std::uint32_t n_max = 0;
  for (const TrajectoryPoint& pt : dataset.points) {
    distinct.insert(pt.cycle);
    n_max = std::max(n_max, pt.cycle);
    for (std::size_t c = 0; c < 4; ++c) {
      if (!(pt.se[c] > 0.0)) continue;  // zero claimed error: reject, don't blow up
      values.push_back({pt.cycle, c, pt.p[c], pt.se[c]});
    }
  }
  if (distinct.size() < 3)
    throw insufficient_data_error("fit_pump_model: need >= 3 distinct cycle indices, got " +
                                  std::to_string(distinct.size()));
  if (values.size() < 6)
    throw insufficient_data_error("fit_pump_model: only " + std::to_string(values.size()) +
                                  " usable data values for 5 parameters");

  const Vec4 start_pop = p0.values();
  LeastSquaresProblem problem;
  problem.residual_count = values.size();
  problem.lower = {0.0, 0.0, 0.0, 1e-6, -0.1};
  problem.upper = {1.0, 1.0, 1.0, 1.2, 0.1};
  problem.project = project_params_slack;
  problem.residuals = [&values, &start_pop, n_max](std::span<const double> q,
                                                   std::vector<double>& r) {
    thread_local std::vector<Vec4> table;
    predict_raw(q, start_pop, n_max, table);
    r.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const WeightedValue& v = values[i];
      r[i] = (table[v.cycle][v.component] - v.value) / v.sigma;
    }
  };

  // Coarse simplex grid plus the caller's guess: 9 feasible starts.
  std::vector<std::vector<double>> starts = {
      {initial_guess.r_to0, initial_guess.r_stay, initial_guess.r_to1, initial_guess.scale_a,
       initial_guess.offset_b},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0, 0.0},
      {0.15, 0.15, 0.15, 1.0, 0.0},
      {0.45, 0.15, 0.15, 1.0, 0.0},
      {0.15, 0.45, 0.15, 1.0, 0.0},
      {0.15, 0.15, 0.45, 1.0, 0.0},
      {0.45, 0.45, 0.05, 1.0, 0.0},
      {0.45, 0.05, 0.45, 1.0, 0.0},
      {0.05, 0.45, 0.45, 1.0, 0.0},
  };

  LeastSquaresResult best = fit_least_squares_multistart(problem, starts);
  project_params_exact(best.params);

  FitResult fit;
  fit.params = {best.params[0], best.params[1], best.params[2], best.params[3], best.params[4]};
  fit.uncertainties = {best.sigmas[0], best.sigmas[1], best.sigmas[2], best.sigmas[3],
                       best.sigmas[4]};
  fit.residual_norm = std::sqrt(best.chi2);
  fit.converged = best.converged;
  fit.iterations = best.iterations;
  return fit;
}

Trajectory synthesize_model_dataset(const PumpModelParams& params, const PopulationVector& p0,
                                    std::uint32_t n_max, std::uint64_t shots,
                                    std::uint64_t seed) {
  validate(params);
  if (shots == 0) throw std::domain_error("synthesize_model_dataset: shots must be >= 1");
  std::vector<std::uint32_t> cycles(n_max + 1);
  for (std::uint32_t k = 0; k <= n_max; ++k) cycles[k] = k;
  const std::vector<Vec4> model = predict(params, p0, cycles);

  Trajectory traj;
  traj.trials = shots;
  traj.points.resize(n_max + 1);
  for (std::uint32_t k = 0; k <= n_max; ++k) {
    TrajectoryPoint& pt = traj.points[k];
    pt.cycle = k;
    for (std::size_t c = 0; c < 4; ++c) {
      // Each population is read out in its own experiment, so components are
      // sampled independently.
      Substream rng(seed, static_cast<std::uint64_t>(k) * 4 + c);
      const double truth = std::clamp(model[k][c], 0.0, 1.0);
      const std::uint64_t hits = rng.binomial(shots, truth);
      pt.p[c] = static_cast<double>(hits) / static_cast<double>(shots);
      const double corrected =
          (static_cast<double>(hits) + 0.5) / (static_cast<double>(shots) + 1.0);
      pt.se[c] = std::sqrt(corrected * (1.0 - corrected) / static_cast<double>(shots));
    }
  }
  return traj;
}

std::string fit_report_json(const FitResult& fit) {
  nlohmann::json doc;
  doc["parameters"] = {{"r_to0", fit.params.r_to0},
                       {"r_stay", fit.params.r_stay},
                       {"r_to1", fit.params.r_to1},
                       {"scale_A", fit.params.scale_a},
                       {"offset_B", fit.params.offset_b},
                       {"cross_leakage", cross_leakage(fit.params)}};
  doc["uncertainties"] = {{"r_to0", fit.uncertainties.r_to0},
                          {"r_stay", fit.uncertainties.r_stay},
                          {"r_to1", fit.uncertainties.r_to1},
                          {"scale_A", fit.uncertainties.scale_a},
                          {"offset_B", fit.uncertainties.offset_b}};
  doc["residual_norm"] = fit.residual_norm;
  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  return doc.dump(2);
}

}  // namespace repump
