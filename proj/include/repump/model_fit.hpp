#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "repump/monte_carlo.hpp"
#include "repump/pump.hpp"

namespace repump {

// The three free matrix parameters (leakage-source column entries to |0>,
// to the same leakage state, and to |1>) plus the SPAM scale A and offset B.
// The residual 1 - r_to0 - r_stay - r_to1 is the cross-leakage probability.
struct PumpModelParams {
  double r_to0 = 1.0 / 3.0;
  double r_stay = 1.0 / 3.0;
  double r_to1 = 1.0 / 3.0;
  double scale_a = 1.0;
  double offset_b = 0.0;
};

// Throws std::domain_error outside the fit box: r >= 0 with sum <= 1,
// scale_a in (0, 1.2], offset_b in [-0.1, 0.1].
void validate(const PumpModelParams& params);

double cross_leakage(const PumpModelParams& params);

PumpMatrix build_pump_matrix(const PumpModelParams& params);

// Model populations A * R^k * p0 + B at each requested cycle index; offset_b
// is added to every component.
std::vector<Vec4> predict(const PumpModelParams& params, const PopulationVector& p0,
                          std::span<const std::uint32_t> cycle_indices);

struct FitResult {
  PumpModelParams params;
  PumpModelParams uncertainties;  // 1-sigma, from the local curvature
  double residual_norm = 0.0;     // sqrt of the weighted residual sum of squares
  bool converged = false;
  std::size_t iterations = 0;
};

// Error-weighted least squares of the five model parameters against a
// trajectory. Data values with a claimed standard error of zero are dropped
// rather than infinitely weighted. Requires >= 3 distinct cycle indices and
// at least 6 usable values; throws insufficient_data_error otherwise, and
// std::domain_error for an infeasible initial guess. Runs from 9 feasible
// starts (a coarse simplex grid plus the supplied guess); an exhausted
// iteration cap is reported via converged = false, not an exception.
FitResult fit_pump_model(const Trajectory& dataset, const PopulationVector& p0,
                         const PumpModelParams& initial_guess);

// Synthetic measurement of the model: binomial shot noise on every
// component at each cycle 0..n_max, with continuity-corrected error bars.
Trajectory synthesize_model_dataset(const PumpModelParams& params, const PopulationVector& p0,
                                    std::uint32_t n_max, std::uint64_t shots,
                                    std::uint64_t seed);

// Pretty-printed JSON fit report (parameters, uncertainties, residual,
// convergence flags).
std::string fit_report_json(const FitResult& fit);

}  // namespace repump
