#pragma once

#include <functional>
#include <span>
#include <vector>

namespace repump {

// Small dense Levenberg-Marquardt with finite-difference Jacobians. Sized
// for the five-parameter pump model and the three-parameter decay fits; not
// a general-purpose optimizer.

struct LeastSquaresOptions {
  std::size_t max_iterations = 400;
  double step_tolerance = 1e-11;      // on the infinity norm of an accepted step
  double gradient_tolerance = 1e-5;   // on the gradient/column-norm cosine
  double initial_damping = 1e-3;
};

struct LeastSquaresProblem {
  // Fills the (already weighted) residual vector for a parameter vector.
  // Must accept mildly infeasible parameters: finite-difference probes are
  // not projected.
  std::function<void(std::span<const double>, std::vector<double>&)> residuals;
  std::size_t residual_count = 0;
  // Box bounds (empty = unbounded). Components pinned at a bound with the
  // gradient pushing outward count as first-order optimal.
  std::vector<double> lower, upper;
  // Extra coupling constraints (applied after the box clamp). Keep slack in
  // these: an optimum sitting exactly on a projected coupling surface makes
  // damped steps zigzag and the convergence flag unreliable.
  std::function<void(std::vector<double>&)> project;
};

struct LeastSquaresResult {
  std::vector<double> params;
  std::vector<double> sigmas;  // sqrt(diag((J^T J)^{-1})), zeros when singular
  double chi2 = 0.0;
  bool converged = false;      // gradient AND step tolerance both met
  bool covariance_ok = false;
  std::size_t iterations = 0;
};

LeastSquaresResult fit_least_squares(const LeastSquaresProblem& problem,
                                     std::span<const double> start,
                                     const LeastSquaresOptions& options = {});

// Runs the fit from every start and keeps the best result (converged
// preferred, then lowest chi2).
LeastSquaresResult fit_least_squares_multistart(const LeastSquaresProblem& problem,
                                                const std::vector<std::vector<double>>& starts,
                                                const LeastSquaresOptions& options = {});

}  // namespace repump
