#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

#include "lltkde/special.hpp"

namespace lltkde {

enum class KernelId
{
  gaussian,
  epanechnikov
};

//! Symmetric unit-variance kernel with its moment constants.
//!
//! mu[j]  = integral of u^j K(u) du,   j = 0..6
//! nu[j]  = integral of u^j K(u)^2 du, j = 0..4
//! Both kernels are normalized to mu2 = 1 so bandwidths are comparable.
class Kernel
{
public:
  static Kernel gaussian()
  {
    Kernel k;
    k.id_ = KernelId::gaussian;
    k.support_ = std::numeric_limits<double>::infinity();
    k.mu_ = { 1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0 };
    const double s = 1.0 / std::sqrt(pi);
    k.nu_ = { 0.5 * s, 0.0, 0.25 * s, 0.0, 0.375 * s };
    return k;
  }

  // Epanechnikov rescaled to unit variance: support [-sqrt(5), sqrt(5)]
  static Kernel epanechnikov()
  {
    Kernel k;
    k.id_ = KernelId::epanechnikov;
    k.support_ = std::sqrt(5.0);
    k.mu_ = { 1.0, 0.0, 1.0, 0.0, 15.0 / 7.0, 0.0, 125.0 / 21.0 };
    const double r5 = std::sqrt(5.0);
    k.nu_ = { 3.0 * r5 / 25.0, 0.0, 3.0 * r5 / 35.0, 0.0, r5 / 7.0 };
    return k;
  }

  static Kernel from_name(const std::string& name)
  {
    if (name == "gaussian") return gaussian();
    if (name == "epanechnikov") return epanechnikov();
    throw std::invalid_argument("unknown kernel '" + name + "'");
  }

  double operator()(double u) const
  {
    if (id_ == KernelId::gaussian) return normal_pdf(u);
    double a = u * u / 5.0;
    if (a >= 1.0) return 0.0;
    return 0.335410196624968454 * (1.0 - a); // 3/(4*sqrt(5))
  }

  KernelId id() const { return id_; }
  const std::string& name() const
  {
    static const std::string names[2] = { "gaussian", "epanechnikov" };
    return names[id_ == KernelId::gaussian ? 0 : 1];
  }

  //! half-width of the support (infinite for the Gaussian)
  double support() const { return support_; }
  bool compact_support() const { return std::isfinite(support_); }

  double mu(int j) const { return mu_.at(j); }
  double nu(int j) const { return nu_.at(j); }

  //! Asymptotic variance constant of the local log-quadratic fit,
  //! (mu4^2 nu0 - 2 mu2 mu4 nu2 + mu2^2 nu4) / (mu4 - mu2^2)^2.
  double quad_variance_constant() const
  {
    double num = mu_[4] * mu_[4] * nu_[0] - 2.0 * mu_[2] * mu_[4] * nu_[2] + mu_[2] * mu_[2] * nu_[4];
    double den = mu_[4] - mu_[2] * mu_[2];
    return num / (den * den);
  }

  //! Variance inflation of the log-quadratic fit relative to the raw/log-linear
  //! constant nu0; equals 27/16 for the Gaussian.
  double quad_variance_inflation() const { return quad_variance_constant() / nu_[0]; }

private:
  KernelId id_{ KernelId::gaussian };
  double support_{ std::numeric_limits<double>::infinity() };
  std::array<double, 7> mu_{};
  std::array<double, 5> nu_{};
};

//! Raw kernel density estimate (1/(nh)) sum K((y - Y_k)/h).
inline double raw_kde(double y, std::span<const double> sample, double h, const Kernel& k)
{
  if (!(h > 0.0)) throw std::invalid_argument("raw_kde: bandwidth must be positive");
  double acc = 0.0;
  for (double v : sample) acc += k((y - v) / h);
  return acc / (sample.size() * h);
}

} // namespace lltkde
