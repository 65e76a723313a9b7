#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "lltkde/kernels.hpp"
#include "lltkde/quadrature.hpp"
#include "lltkde/tkde.hpp"

namespace lltkde {

enum class CompetitorId
{
  gamma,
  mod_gamma,
  reflect,
  cut_normalise,
  boundary_corrected
};

struct CompetitorConfig
{
  CompetitorId id{ CompetitorId::gamma };
  double bandwidth{ 0.1 };
  Kernel kernel{ Kernel::gaussian() };

  static CompetitorId id_from_name(const std::string& name)
  {
    if (name == "gamma") return CompetitorId::gamma;
    if (name == "mod-gamma") return CompetitorId::mod_gamma;
    if (name == "reflect") return CompetitorId::reflect;
    if (name == "can") return CompetitorId::cut_normalise;
    if (name == "bound") return CompetitorId::boundary_corrected;
    throw std::invalid_argument("unknown competitor estimator '" + name + "'");
  }

  static std::string name_of(CompetitorId id)
  {
    switch (id) {
      case CompetitorId::gamma: return "gamma";
      case CompetitorId::mod_gamma: return "mod-gamma";
      case CompetitorId::reflect: return "reflect";
      case CompetitorId::cut_normalise: return "can";
      default: return "bound";
    }
  }
};

namespace detail {

inline double gamma_pdf(double t, double shape, double scale)
{
  if (t <= 0.0) return (shape == 1.0 && t == 0.0) ? 1.0 / scale : 0.0;
  return std::exp((shape - 1.0) * std::log(t) - t / scale - std::lgamma(shape) -
                  shape * std::log(scale));
}

//! Partial kernel moments W_j(c) = int_{-c}^{inf} u^j K(u) du.
inline double partial_moment(const Kernel& k, int j, double c)
{
  if (k.id() == KernelId::gaussian) {
    switch (j) {
      case 0: return normal_cdf(c);
      case 1: return normal_pdf(c);
      case 2: return normal_cdf(c) - c * normal_pdf(c);
      default: break;
    }
  }
  double lo = std::max(-c, -k.support());
  double hi = k.compact_support() ? k.support() : 8.0;
  if (lo >= hi) return 0.0;
  return integrate([&](double u) { return std::pow(u, j) * k(u); }, lo, hi, 8, 20);
}

} // namespace detail

//! Chen's Gamma kernel density estimator.  The kernel placed on the data is a
//! Gamma density in the observation with scale b and shape x/b + 1 (standard)
//! or rho_b(x) (modified): rho_b(x) = x/b for x >= 2b, (x/(2b))^2 + 1 below.
inline double gamma_kde(double x, std::span<const double> sample, double b, bool modified)
{
  if (!(b > 0.0)) throw std::invalid_argument("gamma_kde: bandwidth must be > 0");
  if (x < 0.0) throw std::domain_error("gamma_kde: x must be >= 0");
  double shape;
  if (!modified) {
    shape = x / b + 1.0;
  } else if (x >= 2.0 * b) {
    shape = x / b;
  } else {
    double r = x / (2.0 * b);
    shape = r * r + 1.0;
  }
  double acc = 0.0;
  for (double v : sample) acc += detail::gamma_pdf(v, shape, b);
  return acc / sample.size();
}

//! Reflection estimator: (1/(nh)) sum [K((x-X_k)/h) + K((x+X_k)/h)].
inline double reflection_kde(double x, std::span<const double> sample, double h, const Kernel& k)
{
  if (!(h > 0.0)) throw std::invalid_argument("reflection_kde: bandwidth must be > 0");
  if (x < 0.0) throw std::domain_error("reflection_kde: x must be >= 0");
  double acc = 0.0;
  for (double v : sample) acc += k((x - v) / h) + k((x + v) / h);
  return acc / (sample.size() * h);
}

//! Cut-and-normalise estimator: raw KDE divided by the kernel mass W_0(x/h)
//! that stays inside the support.
inline double cut_and_normalise_kde(double x, std::span<const double> sample, double h,
                                    const Kernel& k)
{
  if (!(h > 0.0)) throw std::invalid_argument("cut_and_normalise_kde: bandwidth must be > 0");
  if (x < 0.0) throw std::domain_error("cut_and_normalise_kde: x must be >= 0");
  double acc = 0.0;
  for (double v : sample) acc += k((x - v) / h);
  return acc / (sample.size() * h * detail::partial_moment(k, 0, x / h));
}

//! Jones-Foster non-negative boundary-corrected estimator:
//! f_CN * exp(f_LL / f_CN - 1), where f_LL is the local-linear boundary-kernel
//! estimator built from the partial moments W_j(x/h).
inline double boundary_corrected_kde(double x, std::span<const double> sample, double h,
                                     const Kernel& k)
{
  if (!(h > 0.0)) throw std::invalid_argument("boundary_corrected_kde: bandwidth must be > 0");
  if (x < 0.0) throw std::domain_error("boundary_corrected_kde: x must be >= 0");
  double c = x / h;
  double w0 = detail::partial_moment(k, 0, c);
  double w1 = detail::partial_moment(k, 1, c);
  double w2 = detail::partial_moment(k, 2, c);
  double den = w0 * w2 - w1 * w1;

  double raw = 0.0, lin = 0.0;
  for (double v : sample) {
    double u = (v - x) / h; // in-support direction is positive
    double kw = k(u);
    raw += kw;
    lin += (w2 - w1 * u) * kw;
  }
  double n_h = sample.size() * h;
  double f_cn = raw / (n_h * w0);
  if (f_cn <= 0.0) return 0.0;
  double f_ll = lin / (n_h * den);
  return f_cn * std::exp(f_ll / f_cn - 1.0);
}

//! Evaluate a competitor on a grid, optionally renormalizing (mixture-form
//! estimators integrate to one already; cut-and-normalise and the
//! boundary-corrected estimator do not).
inline DensityEstimate competitor_grid(std::span<const double> grid,
                                       std::span<const double> sample,
                                       const CompetitorConfig& config, bool renormalize)
{
  auto eval_one = [&](double x) {
    switch (config.id) {
      case CompetitorId::gamma: return gamma_kde(x, sample, config.bandwidth, false);
      case CompetitorId::mod_gamma: return gamma_kde(x, sample, config.bandwidth, true);
      case CompetitorId::reflect: return reflection_kde(x, sample, config.bandwidth, config.kernel);
      case CompetitorId::cut_normalise:
        return cut_and_normalise_kde(x, sample, config.bandwidth, config.kernel);
      default: return boundary_corrected_kde(x, sample, config.bandwidth, config.kernel);
    }
  };
  auto eval = [&](std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_one(xs[i]);
  };

  DensityEstimate est;
  est.grid.assign(grid.begin(), grid.end());
  est.values.resize(grid.size());
  est.estimator = CompetitorConfig::name_of(config.id);
  est.smoothing = SmoothingSpec::fixed(config.bandwidth);
  eval(est.grid, est.values);
  if (renormalize && !est.grid.empty()) {
    est.normalization = detail::renormalization_constant(eval, est.grid.front(), est.grid.back());
    for (double& v : est.values) v /= est.normalization;
  }
  return est;
}

} // namespace lltkde
