#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "lltkde/loclik.hpp"

namespace lltkde {

namespace detail {

// largest effective bandwidth over the data range (coarse scan in NN mode)
inline double max_effective_bandwidth(std::span<const double> sample, const SmoothingSpec& s)
{
  if (!s.is_nn()) return s.value;
  auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  double hmax = 0.0;
  constexpr int scan = 64;
  for (int i = 0; i < scan; ++i) {
    double y = *lo + (*hi - *lo) * i / (scan - 1.0);
    hmax = std::max(hmax, nn_distance(y, sample, s.value));
  }
  return hmax;
}

} // namespace detail

//! Least-squares cross-validation score of one smoothing candidate for the
//! local log-polynomial density fit (transformed-domain sample):
//!
//!   int f^2 dy - (2/n) sum_k f_(-k)(Y_k)
//!
//! The integral is a 512-point trapezoid over the data range padded by four
//! bandwidths; leave-one-out estimates are exact refits.  Returns +inf when a
//! fit fails, marking the candidate infeasible.
inline double lscv(std::span<const double> sample, const SmoothingSpec& candidate, int degree,
                   const Kernel& kernel)
{
  const std::size_t n = sample.size();
  if (n < 3) throw std::invalid_argument("lscv: need n >= 3");

  LocalFitConfig lc;
  lc.degree = degree;
  lc.kernel = kernel;
  lc.smoothing = candidate;

  constexpr double inf = std::numeric_limits<double>::infinity();

  double hmax;
  try {
    hmax = detail::max_effective_bandwidth(sample, candidate);
  } catch (const std::invalid_argument&) {
    return inf; // alpha too small for this n
  }
  auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());

  constexpr int grid_size = 512;
  std::vector<double> grid(grid_size);
  double a = *lo - 4.0 * hmax, b = *hi + 4.0 * hmax;
  for (int i = 0; i < grid_size; ++i) grid[i] = a + (b - a) * i / (grid_size - 1.0);

  std::vector<LocalFitResult> fits;
  try {
    fits = fit_grid(grid, sample, lc);
  } catch (const SolverError&) {
    return inf;
  }
  std::vector<double> sq(grid_size);
  for (int i = 0; i < grid_size; ++i) sq[i] = fits[i].density * fits[i].density;
  double integral = trapezoid(grid, sq);

  // exact leave-one-out refits, warm-started from the nearest full-sample fit
  std::vector<double> loo(n - 1);
  double cv = 0.0;
  double step = (b - a) / (grid_size - 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0, j = 0; i < n; ++i)
      if (i != k) loo[j++] = sample[i];
    int g = static_cast<int>(std::clamp((sample[k] - a) / step, 0.0, grid_size - 1.0));
    const std::array<double, 3>* warm = fits[g].converged ? &fits[g].coefficients : nullptr;
    LocalFitResult r;
    try {
      try {
        r = fit_at(sample[k], loo, lc, warm);
      } catch (const SolverError&) {
        r = fit_at(sample[k], loo, lc);
      }
    } catch (const SolverError&) {
      return inf;
    } catch (const std::invalid_argument&) {
      return inf;
    }
    cv += r.density;
  }
  return integral - 2.0 * cv / n;
}

//! Score curve over a candidate list.
struct LscvScan
{
  std::vector<SmoothingSpec> candidates;
  std::vector<double> scores;
  std::size_t selected{ 0 };
};

//! Evaluate all candidates and pick the minimizer; ties break toward the
//! larger (smoother) candidate.  Throws if every candidate is infeasible.
inline LscvScan lscv_scan(std::span<const double> sample,
                          std::span<const SmoothingSpec> candidates, int degree,
                          const Kernel& kernel)
{
  if (candidates.empty()) throw std::invalid_argument("lscv_scan: empty candidate list");
  LscvScan scan;
  scan.candidates.assign(candidates.begin(), candidates.end());
  scan.scores.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scan.scores[i] = lscv(sample, candidates[i], degree, kernel);

  bool found = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (std::isinf(scan.scores[i])) continue;
    if (!found || scan.scores[i] < scan.scores[scan.selected] ||
        (scan.scores[i] == scan.scores[scan.selected] &&
         candidates[i].value > candidates[scan.selected].value)) {
      scan.selected = i;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("lscv_scan: all candidates infeasible");
  return scan;
}

inline SmoothingSpec select_smoothing(std::span<const double> sample,
                                      std::span<const SmoothingSpec> candidates, int degree,
                                      const Kernel& kernel)
{
  auto scan = lscv_scan(sample, candidates, degree, kernel);
  return scan.candidates[scan.selected];
}

//! Default candidate grids: alpha in {0.10, 0.15, ..., 1.00}; h log-spaced
//! over [0.1 sd n^{-1/5}, 3 sd] with 20 values.
inline std::vector<SmoothingSpec> alpha_candidates()
{
  std::vector<SmoothingSpec> out;
  for (int i = 0; i <= 18; ++i) out.push_back(SmoothingSpec::nn((10 + 5 * i) / 100.0));
  return out;
}

inline std::vector<SmoothingSpec> h_candidates(std::span<const double> sample)
{
  double sd = detail::sample_sd(sample);
  if (!(sd > 0.0)) throw std::invalid_argument("h_candidates: zero sample variance");
  double lo = 0.1 * sd * std::pow(static_cast<double>(sample.size()), -0.2);
  double hi = 3.0 * sd;
  std::vector<SmoothingSpec> out;
  constexpr int m = 20;
  for (int i = 0; i < m; ++i)
    out.push_back(SmoothingSpec::fixed(lo * std::pow(hi / lo, i / (m - 1.0))));
  return out;
}

} // namespace lltkde
