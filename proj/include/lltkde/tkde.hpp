#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lltkde/loclik.hpp"
#include "lltkde/quadrature.hpp"
#include "lltkde/transforms.hpp"

namespace lltkde {

//! Density estimate on a positive grid, in density units per unit of x.
struct DensityEstimate
{
  std::vector<double> grid;
  std::vector<double> values;
  std::string estimator;
  SmoothingSpec smoothing{ SmoothingSpec::fixed(1.0) };
  double normalization{ 1.0 }; // constant the values were divided by
};

//! Configuration of the transformation kernel density estimators.
struct TkdeConfig
{
  Transformation transform{ Transformation::probex() };
  int degree{ 2 }; // 1 or 2 (local log-linear / log-quadratic)
  Kernel kernel{ Kernel::gaussian() };
  SmoothingSpec smoothing{ SmoothingSpec::nn(0.5) };
  bool renormalize{ true };
  double tolerance{ 1e-8 };
  int max_iterations{ 50 };

  LocalFitConfig local_config() const
  {
    LocalFitConfig lc;
    lc.degree = degree;
    lc.kernel = kernel;
    lc.smoothing = smoothing;
    lc.tolerance = tolerance;
    lc.max_iterations = max_iterations;
    return lc;
  }
};

namespace detail {

inline void check_positive(std::span<const double> xs, const char* what)
{
  for (double x : xs)
    if (!(x > 0.0)) throw std::domain_error(std::string(what) + " must be strictly positive");
}

//! Trapezoid normalization constant on a 4000-point grid spanning
//! [grid start, 1.5 * grid end]; the tail beyond is treated as zero mass.
template <typename Eval>
double renormalization_constant(Eval&& eval, double x_lo, double x_hi)
{
  constexpr int n = 4000;
  std::vector<double> xs(n), ys(n);
  double hi = 1.5 * x_hi;
  for (int i = 0; i < n; ++i) {
    xs[i] = x_lo + (hi - x_lo) * i / (n - 1.0);
    ys[i] = 0.0;
  }
  eval(xs, ys);
  return trapezoid(xs, ys);
}

} // namespace detail

//! Naive transformation estimator at one point:
//! (1/(nh)) sum K((T(x) - T(X_k))/h) * T'(x).
//! With T = log and a Gaussian kernel this is the log-normal kernel estimator.
inline double naive_tkde(double x, std::span<const double> sample, const TkdeConfig& config)
{
  if (!(x > 0.0)) throw std::domain_error("naive_tkde: x must be > 0");
  if (config.smoothing.is_nn())
    throw std::invalid_argument("naive_tkde: requires a fixed bandwidth");
  double h = config.smoothing.value;
  double y = config.transform.forward(x);
  double acc = 0.0;
  for (double v : sample) acc += config.kernel((y - config.transform.forward(v)) / h);
  return acc / (sample.size() * h) * config.transform.derivative(1, x);
}

//! Naive transformation estimator over a grid.
inline DensityEstimate naive_tkde_grid(std::span<const double> grid,
                                       std::span<const double> sample, const TkdeConfig& config)
{
  detail::check_positive(grid, "naive_tkde: grid");
  detail::check_positive(sample, "naive_tkde: sample");
  if (config.smoothing.is_nn())
    throw std::invalid_argument("naive_tkde: requires a fixed bandwidth");
  double h = config.smoothing.value;

  std::vector<double> ty(sample.size());
  for (std::size_t k = 0; k < sample.size(); ++k) ty[k] = config.transform.forward(sample[k]);

  auto eval = [&](std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double y = config.transform.forward(xs[i]);
      double acc = 0.0;
      for (double v : ty) acc += config.kernel((y - v) / h);
      out[i] = acc / (sample.size() * h) * config.transform.derivative(1, xs[i]);
    }
  };

  DensityEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.values.resize(grid.size());
  est.estimator = "naive-" + config.transform.name();
  est.smoothing = config.smoothing;
  eval(est.grid, est.values);
  if (config.renormalize && !est.grid.empty()) {
    est.normalization = detail::renormalization_constant(eval, est.grid.front(), est.grid.back());
    for (double& v : est.values) v /= est.normalization;
  }
  return est;
}

//! Local-likelihood transformation kernel density estimator:
//! fit the log-polynomial density of T(X) at T(x), back-transform by T'(x).
inline DensityEstimate lltkde_grid(std::span<const double> grid, std::span<const double> sample,
                              const TkdeConfig& config)
{
  detail::check_positive(grid, "lltkde: grid");
  detail::check_positive(sample, "lltkde: sample");
  if (config.degree != 1 && config.degree != 2)
    throw std::invalid_argument("lltkde: degree must be 1 or 2");
  if (sample.empty()) throw std::invalid_argument("lltkde: empty sample");

  if (config.transform.id() == TransformId::probex) {
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= sample.size();
    if (mean < 0.1 || mean > 10.0)
      std::cerr << "lltkde: warning: probex transformation applied to a sample with mean "
                << mean << "; consider rescaling to mean 1\n";
  }

  std::vector<double> ty(sample.size());
  for (std::size_t k = 0; k < sample.size(); ++k) ty[k] = config.transform.forward(sample[k]);
  LocalFitConfig lc = config.local_config();

  auto eval = [&](std::span<const double> xs, std::span<double> out) {
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = config.transform.forward(xs[i]);
    auto fits = fit_grid(ys, ty, lc);
    for (std::size_t i = 0; i < xs.size(); ++i)
      out[i] = fits[i].density * config.transform.derivative(1, xs[i]);
  };

  DensityEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.values.resize(grid.size());
  est.estimator = "ll" + std::to_string(config.degree) + "-" + config.transform.name();
  est.smoothing = config.smoothing;
  eval(est.grid, est.values);
  if (config.renormalize && !est.grid.empty()) {
    est.normalization = detail::renormalization_constant(eval, est.grid.front(), est.grid.back());
    for (double& v : est.values) v /= est.normalization;
  }
  return est;
}

//! Practical stand-in for the x -> 0 limit: the value at the smallest grid point.
inline double estimate_boundary_value(const DensityEstimate& estimate)
{
  if (estimate.grid.empty()) throw std::invalid_argument("estimate_boundary_value: empty estimate");
  return estimate.values.front();
}

//! Default evaluation grid: 1000 equally spaced points from 0.001 to the
//! empirical 99.9% quantile.
inline std::vector<double> default_grid(std::span<const double> sample, int size = 1000,
                                        double start = 0.001)
{
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double q = detail::quantile_type7(sorted, 0.999);
  if (!(q > start)) q = start * 2.0;
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) grid[i] = start + (q - start) * i / (size - 1.0);
  return grid;
}

} // namespace lltkde
