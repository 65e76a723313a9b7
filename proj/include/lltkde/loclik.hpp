#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lltkde/bandwidth.hpp"
#include "lltkde/kernels.hpp"
#include "lltkde/quadrature.hpp"

namespace lltkde {

//! Configuration for the local log-polynomial density fit on R.
struct LocalFitConfig
{
  int degree{ 2 }; // 0, 1 or 2
  Kernel kernel{ Kernel::gaussian() };
  SmoothingSpec smoothing{ SmoothingSpec::fixed(1.0) };
  double tolerance{ 1e-8 };  // gradient sup-norm per observation
  int max_iterations{ 50 };
  int max_halvings{ 30 };

  void validate() const
  {
    if (degree < 0 || degree > 2) throw std::invalid_argument("LocalFitConfig: degree must be 0, 1 or 2");
    if (!(tolerance > 0.0)) throw std::invalid_argument("LocalFitConfig: tolerance must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("LocalFitConfig: max_iterations must be >= 1");
  }
};

//! Outcome of one local maximum-likelihood fit.
//! density == exp(coefficients[0]); converged == false marks the deep-tail
//! shortcut (no kernel weight above threshold) where the density is set to 0.
struct LocalFitResult
{
  std::array<double, 3> coefficients{};
  int degree{ 0 };
  double density{ 0.0 };
  bool converged{ false };
  int iterations{ 0 };
  double bandwidth{ 0.0 };
};

//! Thrown when the damped Newton iteration fails; carries the last iterate.
class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string& what, LocalFitResult last)
    : std::runtime_error(what), last_iterate(last)
  {
  }
  LocalFitResult last_iterate;
};

//! Value, gradient and hessian of the local likelihood in the polynomial
//! coefficients.  feasible == false flags coefficient points where the
//! normalizing integral diverges (p = 2 with an unbounded-support kernel).
struct LocalObjective
{
  double value{ 0.0 };
  std::array<double, 3> gradient{};
  std::array<std::array<double, 3>, 3> hessian{};
  bool feasible{ true };
};

namespace detail {

// Everything below works in the rescaled coefficients b_j = a_j h^j, i.e. the
// polynomial is expressed in u = (t - y)/h; this keeps the Newton system well
// conditioned for any bandwidth.

struct BSpaceParts
{
  double value;
  std::array<double, 3> grad;   // d/d b_j
  std::array<double, 5> integ;  // n h A E[u^j], j = 0..2p (hessian blocks)
  bool feasible;
};

// weighted power sums S_j = sum_i K(u_i) u_i^j
struct KernelSums
{
  std::array<double, 3> s{};
  double weight_total{ 0.0 };
};

inline KernelSums kernel_sums(double y, double h, std::span<const double> sample,
                              const Kernel& kernel, int degree)
{
  KernelSums ks;
  for (double v : sample) {
    double u = (v - y) / h;
    double w = kernel(u);
    if (w <= 0.0) continue;
    ks.weight_total += w;
    ks.s[0] += w;
    if (degree >= 1) ks.s[1] += w * u;
    if (degree >= 2) ks.s[2] += w * u * u;
  }
  return ks;
}

// Integral moments n h A E[u^j] of the normalization term.  For the Gaussian
// kernel the integrand is Gaussian-times-exp(quadratic), which integrates in
// closed form whenever beta = 1/2 - b2 > 0; compact-support kernels use
// 40-point Gauss-Legendre on the support.
inline bool integral_moments(const std::array<double, 3>& b, int degree, double nh,
                             double beta_min, const Kernel& kernel,
                             std::array<double, 5>& out)
{
  int top = 2 * degree;
  if (!kernel.compact_support()) {
    double beta = 0.5 - b[2];
    if (beta < beta_min) return false;
    double earg = b[0] + b[1] * b[1] / (4.0 * beta);
    if (earg > 650.0) return false;
    double a = nh * std::exp(earg) / std::sqrt(2.0 * beta);
    double m = b[1] / (2.0 * beta);
    double s2 = 0.5 / beta;
    out[0] = a;
    if (top >= 1) out[1] = a * m;
    if (top >= 2) out[2] = a * (m * m + s2);
    if (top >= 3) out[3] = a * (m * m * m + 3.0 * m * s2);
    if (top >= 4) out[4] = a * (m * m * m * m + 6.0 * m * m * s2 + 3.0 * s2 * s2);
    return true;
  }

  static thread_local QuadRule rule = gauss_legendre(40);
  double L = kernel.support();
  std::array<double, 5> acc{};
  for (int k = 0; k < 40; ++k) {
    double u = L * rule.nodes[k];
    double earg = b[0] + u * (b[1] + u * b[2]);
    if (earg > 650.0) return false;
    double g = L * rule.weights[k] * kernel(u) * std::exp(earg);
    double up = 1.0;
    for (int j = 0; j <= top; ++j) {
      acc[j] += g * up;
      up *= u;
    }
  }
  for (int j = 0; j <= top; ++j) out[j] = nh * acc[j];
  return true;
}

inline std::optional<BSpaceParts> bspace_objective(const std::array<double, 3>& b,
                                                   const KernelSums& ks, int degree,
                                                   double nh, double beta_min,
                                                   const Kernel& kernel)
{
  BSpaceParts parts;
  parts.feasible = integral_moments(b, degree, nh, beta_min, kernel, parts.integ);
  if (!parts.feasible) return std::nullopt;
  parts.value = -parts.integ[0];
  for (int j = 0; j <= degree; ++j) {
    parts.value += b[j] * ks.s[j];
    parts.grad[j] = ks.s[j] - parts.integ[j];
  }
  return parts;
}

// solve M x = r for a (p+1)x(p+1) symmetric system, partial pivoting
inline bool solve_small(std::array<std::array<double, 3>, 3> m, std::array<double, 3> r,
                        int dim, std::array<double, 3>& x)
{
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    for (int row = col + 1; row < dim; ++row)
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    if (m[piv][col] == 0.0) return false;
    std::swap(m[piv], m[col]);
    std::swap(r[piv], r[col]);
    for (int row = col + 1; row < dim; ++row) {
      double f = m[row][col] / m[col][col];
      for (int c = col; c < dim; ++c) m[row][c] -= f * m[col][c];
      r[row] -= f * r[col];
    }
  }
  for (int row = dim - 1; row >= 0; --row) {
    double acc = r[row];
    for (int c = row + 1; c < dim; ++c) acc -= m[row][c] * x[c];
    x[row] = acc / m[row][row];
  }
  return true;
}

} // namespace detail

//! Resolve the effective bandwidth at y for the given smoothing spec.
inline double effective_bandwidth(double y, std::span<const double> sample,
                                  const SmoothingSpec& smoothing)
{
  if (smoothing.is_nn()) return nn_distance(y, sample, smoothing.value);
  return smoothing.value;
}

//! Local likelihood objective (value, gradient, hessian) at the given
//! coefficients, expressed in the original coefficients a_0..a_p of the
//! polynomial in (t - y).
inline LocalObjective local_objective(std::span<const double> coeffs, double y,
                                      std::span<const double> sample,
                                      const LocalFitConfig& config)
{
  config.validate();
  const int p = std::min(config.degree, 2);
  if (coeffs.size() != static_cast<std::size_t>(p) + 1)
    throw std::invalid_argument("local_objective: coefficient count must be degree+1");
  double h = effective_bandwidth(y, sample, config.smoothing);

  std::array<double, 3> b{};
  double hp = 1.0;
  for (int j = 0; j <= p; ++j) {
    b[j] = coeffs[j] * hp;
    hp *= h;
  }

  auto ks = detail::kernel_sums(y, h, sample, config.kernel, p);
  double nh = static_cast<double>(sample.size()) * h;
  double beta_min = 1e-8 * h * h;

  LocalObjective obj;
  auto parts = detail::bspace_objective(b, ks, p, nh, beta_min, config.kernel);
  if (!parts) {
    obj.feasible = false;
    obj.value = -std::numeric_limits<double>::infinity();
    return obj;
  }
  // chain rule back to a-space: d/da_j = h^j d/db_j
  obj.value = parts->value;
  double hj = 1.0;
  for (int j = 0; j <= p; ++j) {
    obj.gradient[j] = parts->grad[j] * hj;
    double hk = hj;
    for (int k = j; k <= p; ++k) {
      obj.hessian[j][k] = obj.hessian[k][j] = -parts->integ[j + k] * hj * hk;
      hk *= h;
    }
    hj *= h;
  }
  return obj;
}

//! Fit the local log-polynomial density model at y by damped Newton ascent of
//! the concave likelihood.  An optional warm start supplies initial
//! coefficients (in a-space, from a neighbouring fit).
inline LocalFitResult fit_at(double y, std::span<const double> sample,
                             const LocalFitConfig& config,
                             const std::array<double, 3>* warm_start = nullptr)
{
  config.validate();
  if (sample.empty()) throw std::invalid_argument("fit_at: empty sample");
  const int p = std::min(config.degree, 2);
  const double n = static_cast<double>(sample.size());
  double h = effective_bandwidth(y, sample, config.smoothing);

  LocalFitResult result;
  result.degree = p;
  result.bandwidth = h;

  auto ks = detail::kernel_sums(y, h, sample, config.kernel, p);

  // deep-tail shortcut: no observation carries usable kernel weight
  if (ks.weight_total < 1e-12 * n) {
    result.density = 0.0;
    result.converged = false;
    return result;
  }

  double nh = n * h;
  if (p == 0) {
    // closed form: exp(a0) = (1/(nh)) sum K(u_i), the raw KDE
    result.coefficients[0] = std::log(ks.s[0] / nh);
    result.density = ks.s[0] / nh;
    result.converged = true;
    return result;
  }

  const double beta_min = 1e-8 * h * h;
  std::array<double, 3> b{};
  if (warm_start) {
    double hp = 1.0;
    for (int j = 0; j <= p; ++j) {
      b[j] = (*warm_start)[j] * hp;
      hp *= h;
    }
    if (p == 2 && 0.5 - b[2] < beta_min) warm_start = nullptr; // out of region; cold start
  }
  if (!warm_start) {
    b = {};
    b[0] = std::log(std::max(ks.s[0] / nh, 1e-300));
  }

  auto current = detail::bspace_objective(b, ks, p, nh, beta_min, config.kernel);
  if (!current) {
    b = {};
    b[0] = std::log(std::max(ks.s[0] / nh, 1e-300));
    current = detail::bspace_objective(b, ks, p, nh, beta_min, config.kernel);
  }

  auto finish = [&](bool ok, int iters) {
    double hp = 1.0;
    for (int j = 0; j <= p; ++j) {
      result.coefficients[j] = b[j] / hp;
      hp *= h;
    }
    result.density = std::exp(b[0]);
    result.converged = ok;
    result.iterations = iters;
  };

  if (!current) {
    finish(false, 0);
    throw SolverError("fit_at: infeasible starting point", result);
  }

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    double gmax = 0.0;
    for (int j = 0; j <= p; ++j) gmax = std::max(gmax, std::abs(current->grad[j]));
    if (gmax <= config.tolerance * n) {
      finish(true, iter);
      return result;
    }

    // Newton direction: solve (-H) d = g with H_{jk} = -integ[j+k]
    std::array<std::array<double, 3>, 3> m{};
    for (int j = 0; j < 3 && j <= p; ++j)
      for (int k = 0; k < 3 && k <= p; ++k) m[j][k] = current->integ[j + k];
    std::array<double, 3> dir{};
    if (!detail::solve_small(m, current->grad, p + 1, dir)) {
      finish(false, iter);
      throw SolverError("fit_at: singular Newton system", result);
    }

    // backtracking: halve the step until the objective improves and the
    // iterate stays feasible
    double t = 1.0;
    bool stepped = false;
    for (int half = 0; half <= config.max_halvings; ++half) {
      std::array<double, 3> cand{};
      for (int j = 0; j <= p; ++j) cand[j] = b[j] + t * dir[j];
      auto trial = detail::bspace_objective(cand, ks, p, nh, beta_min, config.kernel);
      if (trial && trial->value >= current->value) {
        b = cand;
        current = trial;
        stepped = true;
        break;
      }
      t *= 0.5;
    }
    if (!stepped) {
      // ascent stalled short of tolerance
      finish(false, iter);
      throw SolverError("fit_at: line search failed", result);
    }
  }

  finish(false, config.max_iterations);
  throw SolverError("fit_at: no convergence after max iterations", result);
}

//! Grid of local fits; Newton at each point warm-starts from the previous
//! point's coefficients (retrying cold on failure, so results match
//! independent cold fits to solver tolerance).
inline std::vector<LocalFitResult> fit_grid(std::span<const double> grid,
                                            std::span<const double> sample,
                                            const LocalFitConfig& config)
{
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("fit_grid: grid must be strictly increasing");

  std::vector<LocalFitResult> out;
  out.reserve(grid.size());
  const std::array<double, 3>* warm = nullptr;
  std::array<double, 3> prev{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      LocalFitResult r;
      try {
        r = fit_at(grid[i], sample, config, warm);
      } catch (const SolverError&) {
        if (!warm) throw;
        r = fit_at(grid[i], sample, config); // cold retry
      }
      if (r.converged) {
        prev = r.coefficients;
        warm = &prev;
      } else {
        warm = nullptr;
      }
      out.push_back(r);
    } catch (const SolverError& err) {
      throw SolverError("grid point " + std::to_string(i) + " (y=" + std::to_string(grid[i]) +
                            "): " + err.what(),
                        err.last_iterate);
    }
  }
  return out;
}

} // namespace lltkde
