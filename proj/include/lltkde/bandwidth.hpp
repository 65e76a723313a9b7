#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lltkde/special.hpp"

namespace lltkde {

//! Smoothing parameter: either a fixed bandwidth h (transformed-domain units)
//! or a nearest-neighbour fraction alpha in (0,1].
struct SmoothingSpec
{
  enum class Kind
  {
    fixed_h,
    nn_fraction
  };

  Kind kind{ Kind::fixed_h };
  double value{ 1.0 };

  static SmoothingSpec fixed(double h)
  {
    if (!(h > 0.0)) throw std::invalid_argument("SmoothingSpec: h must be > 0");
    return { Kind::fixed_h, h };
  }

  static SmoothingSpec nn(double alpha)
  {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("SmoothingSpec: alpha must lie in (0,1]");
    return { Kind::nn_fraction, alpha };
  }

  bool is_nn() const { return kind == Kind::nn_fraction; }

  std::string str() const
  {
    return (is_nn() ? "alpha=" : "h=") + std::to_string(value);
  }
};

//! Distance from y to its floor(alpha*n)-th closest sample point.
//! Duplicate observations can make the distance zero; it is floored at 1e-12.
inline double nn_distance(double y, std::span<const double> sample, double alpha)
{
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("nn_distance: alpha out of range");
  const std::size_t n = sample.size();
  const std::size_t k = static_cast<std::size_t>(alpha * n);
  if (k < 1) throw std::invalid_argument("nn_distance: floor(alpha*n) must be >= 1");
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = std::abs(sample[i] - y);
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
  return std::max(dist[k - 1], 1e-12);
}

namespace detail {

inline double sample_sd(std::span<const double> x)
{
  double m = 0.0;
  for (double v : x) m += v;
  m /= x.size();
  double s2 = 0.0;
  for (double v : x) s2 += (v - m) * (v - m);
  return std::sqrt(s2 / (x.size() - 1));
}

// type-7 quantile (linear interpolation on the sorted sample)
inline double quantile_type7(std::vector<double> sorted, double p)
{
  double h = (sorted.size() - 1) * p;
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

inline double phi4(double u) { return ((u * u - 6.0) * u * u + 3.0) * normal_pdf(u); }
inline double phi6(double u)
{
  double u2 = u * u;
  return (((u2 - 15.0) * u2 + 45.0) * u2 - 15.0) * normal_pdf(u);
}

template <typename F>
double pair_sum(std::span<const double> x, double g, F&& f)
{
  double acc = x.size() * f(0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      acc += 2.0 * f((x[i] - x[j]) / g);
  return acc;
}

} // namespace detail

//! Two-stage direct plug-in bandwidth for the Gaussian-kernel KDE
//! (Sheather & Jones construction; normal reference seeds the first stage).
inline double plugin_bandwidth(std::span<const double> sample)
{
  const std::size_t n = sample.size();
  if (n < 10) throw std::invalid_argument("plugin_bandwidth: need n >= 10");
  double sd = detail::sample_sd(sample);
  if (!(sd > 0.0)) throw std::invalid_argument("plugin_bandwidth: zero sample variance");

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double iqr = detail::quantile_type7(sorted, 0.75) - detail::quantile_type7(sorted, 0.25);
  double sigma = (iqr > 0.0) ? std::min(sd, iqr / 1.34897950039216) : sd;

  double nd = static_cast<double>(n);
  double psi8 = 105.0 / (32.0 * std::sqrt(pi) * std::pow(sigma, 9));
  double g1 = std::pow(30.0 / (sqrt_two_pi * psi8 * nd), 1.0 / 9.0);
  double psi6 = detail::pair_sum(sample, g1, detail::phi6) / (nd * nd * std::pow(g1, 7));
  if (!(psi6 < 0.0)) return sigma * std::pow(4.0 / (3.0 * nd), 0.2); // normal-reference fallback
  double g2 = std::pow(6.0 / (sqrt_two_pi * (-psi6) * nd), 1.0 / 7.0);
  double psi4 = detail::pair_sum(sample, g2, detail::phi4) / (nd * nd * std::pow(g2, 5));
  if (!(psi4 > 0.0)) return sigma * std::pow(4.0 / (3.0 * nd), 0.2);
  return std::pow(1.0 / (2.0 * std::sqrt(pi) * psi4 * nd), 0.2);
}

//! Reference rule for Chen's Gamma kernel estimators: minimizes the Gamma-kernel
//! AMISE under a Gamma(shape, scale) reference fitted by method of moments.
//!
//! AMISE(b) = b^2 Ib + n^{-1} b^{-1/2} Iv with
//!   Ib = int (f' + x f''/2)^2 dx,  Iv = (2 sqrt(pi))^{-1} int x^{-1/2} f dx,
//! giving b = (Iv / (4 Ib n))^{2/5}.  Ib diverges for reference shapes <= 3/2,
//! so the fitted shape is floored at 2 (the scale is adjusted to preserve the
//! sample mean); both integrals then have closed Gamma-function forms.
inline double gamma_reference_bandwidth(std::span<const double> sample)
{
  const std::size_t n = sample.size();
  if (n < 10) throw std::invalid_argument("gamma_reference_bandwidth: need n >= 10");
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sample) var += (v - mean) * (v - mean);
  var /= (n - 1);
  if (!(var > 0.0)) throw std::invalid_argument("gamma_reference_bandwidth: zero sample variance");

  double shape = std::max(mean * mean / var, 2.0);
  double scale = mean / shape;

  double iv = 0.5 / std::sqrt(pi) * std::exp(std::lgamma(shape - 0.5) - std::lgamma(shape)) /
              std::sqrt(scale);

  // J(s) = int x^s f^2 dx for the Gamma(shape, scale) reference
  auto J = [&](double s) {
    return std::exp(std::lgamma(2.0 * shape - 1.0 + s) +
                    (2.0 * shape - 1.0 + s) * std::log(scale / 2.0) -
                    2.0 * std::lgamma(shape) - 2.0 * shape * std::log(scale));
  };
  double A = shape - 1.0;
  double c1 = 0.5 * A * (A + 1.0);
  double c2 = (A + 1.0) / scale;
  double c3 = 0.5 / (scale * scale);
  double ib = c1 * c1 * J(-2.0) + (c2 * c2 + 2.0 * c1 * c3) * J(0.0) + c3 * c3 * J(2.0) -
              2.0 * c1 * c2 * J(-1.0) - 2.0 * c2 * c3 * J(1.0);

  return std::pow(iv / (4.0 * ib * n), 0.4);
}

} // namespace lltkde
