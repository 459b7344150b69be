#include "repump/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace repump {

namespace {

using Matrix = std::vector<std::vector<double>>;

double fd_step(double p) { return 1e-6 * std::max(std::fabs(p), 0.05); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double chi2_of(std::span<const double> r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return s;
}

// MINPACK-style first-order measure: the cosine of the angle between each
// Jacobian column and the residual vector. Scale-free, unlike the raw
// gradient, whose magnitude tracks the (arbitrary) parameter units.
// Components pinned at a box bound with the gradient pointing outward are
// first-order optimal and excluded.
bool gradient_converged(const LeastSquaresProblem& problem, std::span<const double> p,
                        const Matrix& jac, std::span<const double> grad,
                        std::span<const double> r, double gtol) {
  const double rnorm = std::sqrt(chi2_of(r));
  if (rnorm == 0.0) return true;
  for (std::size_t j = 0; j < grad.size(); ++j) {
    if (!problem.lower.empty() && p[j] <= problem.lower[j] + 1e-14 && grad[j] > 0.0) continue;
    if (!problem.upper.empty() && p[j] >= problem.upper[j] - 1e-14 && grad[j] < 0.0) continue;
    double colsq = 0.0;
    for (std::size_t i = 0; i < jac.size(); ++i) colsq += jac[i][j] * jac[i][j];
    const double scale = std::sqrt(colsq) * rnorm;
    if (std::fabs(grad[j]) > gtol * scale && scale > 0.0) return false;
  }
  return true;
}

// Central-difference Jacobian of the residual vector.
Matrix jacobian(const LeastSquaresProblem& problem, std::span<const double> p,
                std::vector<double>& scratch_hi, std::vector<double>& scratch_lo) {
  const std::size_t np = p.size();
  Matrix jac(problem.residual_count, std::vector<double>(np, 0.0));
  std::vector<double> probe(p.begin(), p.end());
  for (std::size_t j = 0; j < np; ++j) {
    const double h = fd_step(p[j]);
    const double saved = probe[j];
    probe[j] = saved + h;
    problem.residuals(probe, scratch_hi);
    probe[j] = saved - h;
    problem.residuals(probe, scratch_lo);
    probe[j] = saved;
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t i = 0; i < problem.residual_count; ++i)
      jac[i][j] = (scratch_hi[i] - scratch_lo[i]) * inv;
  }
  return jac;
}

// Solves A x = b in place by Gauss elimination with partial pivoting.
// Returns false when A is numerically singular.
bool solve(Matrix a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    if (std::fabs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t row = n; row-- > 0;) {
    double s = b[row];
    for (std::size_t k = row + 1; k < n; ++k) s -= a[row][k] * x[k];
    x[row] = s / a[row][row];
  }
  return true;
}

// Inverse via Gauss-Jordan; false when singular.
bool invert(Matrix a, Matrix& inv) {
  const std::size_t n = a.size();
  inv.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
    if (std::fabs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const double d = a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] /= d;
      inv[col][k] /= d;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double f = a[row][col];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        a[row][k] -= f * a[col][k];
        inv[row][k] -= f * inv[col][k];
      }
    }
  }
  return true;
}

}  // namespace

LeastSquaresResult fit_least_squares(const LeastSquaresProblem& problem,
                                     std::span<const double> start,
                                     const LeastSquaresOptions& options) {
  if (!problem.residuals || problem.residual_count == 0)
    throw std::invalid_argument("fit_least_squares: empty problem");
  const std::size_t np = start.size();
  if (np == 0) throw std::invalid_argument("fit_least_squares: no parameters");
  if ((!problem.lower.empty() && problem.lower.size() != np) ||
      (!problem.upper.empty() && problem.upper.size() != np))
    throw std::invalid_argument("fit_least_squares: bound size mismatch");

  const auto project_full = [&problem, np](std::vector<double>& q) {
    for (std::size_t j = 0; j < np; ++j) {
      if (!problem.lower.empty()) q[j] = std::max(q[j], problem.lower[j]);
      if (!problem.upper.empty()) q[j] = std::min(q[j], problem.upper[j]);
    }
    if (problem.project) problem.project(q);
  };

  std::vector<double> p(start.begin(), start.end());
  project_full(p);

  std::vector<double> r(problem.residual_count), r_try(problem.residual_count);
  std::vector<double> hi(problem.residual_count), lo(problem.residual_count);
  problem.residuals(p, r);
  double chi2 = chi2_of(r);

  double damping = options.initial_damping;
  bool grad_ok = false;
  bool step_ok = false;
  std::size_t iter = 0;

  for (; iter < options.max_iterations; ++iter) {
    const Matrix jac = jacobian(problem, p, hi, lo);

    std::vector<double> grad(np, 0.0);
    Matrix jtj(np, std::vector<double>(np, 0.0));
    for (std::size_t i = 0; i < problem.residual_count; ++i)
      for (std::size_t a = 0; a < np; ++a) {
        grad[a] += jac[i][a] * r[i];
        for (std::size_t b = a; b < np; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
      }
    for (std::size_t a = 0; a < np; ++a)
      for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];

    grad_ok = gradient_converged(problem, p, jac, grad, r, options.gradient_tolerance);

    bool accepted = false;
    while (damping < 1e14) {
      Matrix damped = jtj;
      for (std::size_t a = 0; a < np; ++a)
        damped[a][a] += damping * std::max(jtj[a][a], 1e-12);
      std::vector<double> neg_grad(np), step;
      for (std::size_t a = 0; a < np; ++a) neg_grad[a] = -grad[a];
      if (!solve(std::move(damped), std::move(neg_grad), step)) {
        damping *= 4.0;
        continue;
      }
      std::vector<double> candidate = p;
      for (std::size_t a = 0; a < np; ++a) candidate[a] += step[a];
      project_full(candidate);
      problem.residuals(candidate, r_try);
      const double chi2_try = chi2_of(r_try);
      if (chi2_try <= chi2) {
        std::vector<double> actual(np);
        for (std::size_t a = 0; a < np; ++a) actual[a] = candidate[a] - p[a];
        step_ok = norm_inf(actual) <= options.step_tolerance * (1.0 + norm_inf(p));
        p = std::move(candidate);
        r = r_try;
        chi2 = chi2_try;
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        break;
      }
      damping *= 4.0;
    }
    if (!accepted) break;          // stalled: no downhill step at any damping
    if (grad_ok && step_ok) break;
  }

  LeastSquaresResult result;
  result.params = p;
  result.chi2 = chi2;
  result.iterations = iter;

  // Recheck the gradient at the final point so "converged" reflects the
  // returned parameters.
  const Matrix jac = jacobian(problem, p, hi, lo);
  std::vector<double> grad(np, 0.0);
  Matrix jtj(np, std::vector<double>(np, 0.0));
  for (std::size_t i = 0; i < problem.residual_count; ++i)
    for (std::size_t a = 0; a < np; ++a) {
      grad[a] += jac[i][a] * r[i];
      for (std::size_t b = a; b < np; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
    }
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < a; ++b) jtj[a][b] = jtj[b][a];
  result.converged =
      step_ok && gradient_converged(problem, p, jac, grad, r, options.gradient_tolerance);

  // Parameter covariance from the Gauss-Newton curvature, without any
  // reduced-chi2 rescaling: uncertainties then track the supplied error
  // bars, and scaling every error bar by c scales every sigma by c.
  Matrix cov;
  if (invert(jtj, cov)) {
    result.covariance_ok = true;
    result.sigmas.resize(np);
    for (std::size_t a = 0; a < np; ++a)
      result.sigmas[a] = cov[a][a] > 0.0 ? std::sqrt(cov[a][a]) : 0.0;
  } else {
    result.sigmas.assign(np, 0.0);
  }
  return result;
}

LeastSquaresResult fit_least_squares_multistart(const LeastSquaresProblem& problem,
                                                const std::vector<std::vector<double>>& starts,
                                                const LeastSquaresOptions& options) {
  if (starts.empty()) throw std::invalid_argument("multistart: no starts");
  LeastSquaresResult best;
  bool have = false;
  for (const auto& s : starts) {
    LeastSquaresResult r = fit_least_squares(problem, s, options);
    const bool better = !have || (r.converged && !best.converged) ||
                        (r.converged == best.converged && r.chi2 < best.chi2);
    if (better) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

}  // namespace repump
