#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "lltkde/genf.hpp"
#include "lltkde/kernels.hpp"
#include "lltkde/transforms.hpp"

namespace lltkde {

//! Density value and first four derivatives at a point of the original domain.
struct DensityDerivatives
{
  double x{ 0.0 };
  double f{ 0.0 };
  double d1{ 0.0 };
  double d2{ 0.0 };
  double d3{ 0.0 };
  double d4{ 0.0 };

  //! Exp(1): every derivative is +-exp(-x).
  static DensityDerivatives exp1(double x)
  {
    double f = std::exp(-x);
    return { x, f, -f, f, -f, f };
  }

  //! Finite differences of a smooth density.  Orders 1 and 2 use a 5-point
  //! stencil; 3 and 4 reuse it on the analytic second derivative when one is
  //! supplied, otherwise on wider stencils of f itself.
  static DensityDerivatives from_function(const std::function<double(double)>& f, double x,
                                          const std::function<double(double)>* d2fn = nullptr)
  {
    DensityDerivatives d;
    d.x = x;
    d.f = f(x);
    double scale = std::max(std::abs(x), 1.0);
    {
      double h = 1e-4 * scale;
      double fm2 = f(x - 2 * h), fm1 = f(x - h), fp1 = f(x + h), fp2 = f(x + 2 * h);
      d.d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
      d.d2 = (-fm2 + 16.0 * fm1 - 30.0 * d.f + 16.0 * fp1 - fp2) / (12.0 * h * h);
    }
    if (d2fn) {
      // first and second differences of the analytic f''
      double h = 6e-6 * scale;
      d.d3 = ((*d2fn)(x + h) - (*d2fn)(x - h)) / (2.0 * h);
      double h2 = 1e-4 * scale;
      d.d4 = ((*d2fn)(x + h2) - 2.0 * (*d2fn)(x) + (*d2fn)(x - h2)) / (h2 * h2);
    } else {
      double h = 2e-3 * scale;
      double fm2 = f(x - 2 * h), fm1 = f(x - h), fp1 = f(x + h), fp2 = f(x + 2 * h);
      d.d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h * h * h);
      d.d4 = (fm2 - 4.0 * fm1 + 6.0 * d.f - 4.0 * fp1 + fp2) / (h * h * h * h);
    }
    return d;
  }

  //! Derivatives of a generalized-F density: orders 1-2 analytic via the
  //! log-density, 3-4 by differencing the analytic second derivative.
  static DensityDerivatives genf(const GenFParams& p, double x)
  {
    auto pdf = [&p](double t) { return genf_pdf(t, p); };
    auto d2 = [&p](double t) {
      double f = genf_pdf(t, p);
      double l1 = genf_dlogpdf(t, p);
      return f * (l1 * l1 + genf_d2logpdf(t, p));
    };
    std::function<double(double)> d2f = d2;
    DensityDerivatives d = from_function(pdf, x, &d2f);
    double l1 = genf_dlogpdf(x, p);
    d.d1 = d.f * l1;
    d.d2 = d.f * (l1 * l1 + genf_d2logpdf(x, p));
    return d;
  }
};

//! f_X coefficient in the naive bias: 3 T''^2/T'^4 - T'''/T'^3 (== 1 for log).
inline double naive_f_coefficient(const Transformation& t, double x)
{
  auto d = t.derivatives(x);
  double t1 = d[0], t2 = d[1], t3 = d[2];
  return 3.0 * t2 * t2 / std::pow(t1, 4) - t3 / std::pow(t1, 3);
}

//! f_X coefficient in the log-linear bias: 2 T''^2/T'^4 - T'''/T'^3 (== 0 for log).
inline double loclin_f_coefficient(const Transformation& t, double x)
{
  auto d = t.derivatives(x);
  double t1 = d[0], t2 = d[1], t3 = d[2];
  return 2.0 * t2 * t2 / std::pow(t1, 4) - t3 / std::pow(t1, 3);
}

//! f_X coefficient in the log-quadratic bias (== 0 for log):
//! 80 T''^4/T'^8 - 87 T''^2 T'''/T'^7 + 7 T'''^2/T'^6 + 15 T'' T''''/T'^6 - T'''''/T'^5.
inline double locquad_f_coefficient(const Transformation& t, double x)
{
  auto d = t.derivatives(x);
  double t1 = d[0], t2 = d[1], t3 = d[2], t4 = d[3], t5 = d[4];
  return 80.0 * std::pow(t2, 4) / std::pow(t1, 8) -
         87.0 * t2 * t2 * t3 / std::pow(t1, 7) + 7.0 * t3 * t3 / std::pow(t1, 6) +
         15.0 * t2 * t4 / std::pow(t1, 6) - t5 / std::pow(t1, 5);
}

//! Leading bias factor b_T of the naive transformation estimator
//! (the asymptotic bias is (mu2/2) h^2 b_T).
inline double bias_naive(double x, const Transformation& t, const DensityDerivatives& d)
{
  auto td = t.derivatives(x);
  double t1 = td[0], t2 = td[1];
  return d.d2 / (t1 * t1) - 3.0 * d.d1 * t2 / std::pow(t1, 3) + d.f * naive_f_coefficient(t, x);
}

//! Leading bias factor b_T^(1) of the local log-linear transformation estimator.
inline double bias_loclin(double x, const Transformation& t, const DensityDerivatives& d)
{
  if (!(d.f > 0.0)) throw std::domain_error("bias_loclin: requires f(x) > 0");
  auto td = t.derivatives(x);
  double t1 = td[0], t2 = td[1];
  return (d.d2 - d.d1 * d.d1 / d.f) / (t1 * t1) - d.d1 * t2 / std::pow(t1, 3) +
         d.f * loclin_f_coefficient(t, x);
}

//! The six derivative-combination groups of the local log-quadratic bias
//! b_T^(2), exposed individually so the cancellation identities can be
//! checked term by term.
inline std::array<double, 6> bias_locquad_terms(double x, const Transformation& t,
                                                const DensityDerivatives& d)
{
  if (!(d.f > 0.0)) throw std::domain_error("bias_locquad: requires f(x) > 0");
  auto td = t.derivatives(x);
  double t1 = td[0], t2 = td[1], t3 = td[2];
  double f = d.f, f1 = d.d1, f2 = d.d2, f3 = d.d3, f4 = d.d4;
  std::array<double, 6> g{};
  g[0] = (f4 - 3.0 * f2 * f2 / f + 2.0 * std::pow(f1, 4) / std::pow(f, 3)) / std::pow(t1, 4);
  g[1] = -2.0 * t2 / std::pow(t1, 5) *
         (5.0 * f3 - 9.0 * f1 * f2 / f + 4.0 * std::pow(f1, 3) / (f * f));
  g[2] = 3.0 * t2 * t2 / std::pow(t1, 6) * (9.0 * f2 - 5.0 * f1 * f1 / f);
  g[3] = -4.0 * t3 / std::pow(t1, 5) * f2;
  double t4 = td[3];
  g[4] = -(59.0 * std::pow(t2, 3) / std::pow(t1, 7) - 42.0 * t2 * t3 / std::pow(t1, 6) +
           5.0 * t4 / std::pow(t1, 5)) *
         f1;
  g[5] = locquad_f_coefficient(t, x) * f;
  return g;
}

//! Leading bias factor b_T^(2) of the local log-quadratic transformation
//! estimator (the asymptotic bias is h^4 (mu2 mu6 - mu4^2)/(24(mu4 - mu2^2)) b_T^(2)).
inline double bias_locquad(double x, const Transformation& t, const DensityDerivatives& d)
{
  auto g = bias_locquad_terms(x, t, d);
  return g[0] + g[1] + g[2] + g[3] + g[4] + g[5];
}

//! Asymptotic variance factor of the transformation estimators:
//! fixed-h mode returns V_p f(x) T'(x) (per 1/(nh)); NN mode returns
//! 2 V_p f(x)^2 (per 1/(n alpha)).  V_1 = nu_0, V_2 is the log-quadratic
//! kernel-moment constant.
inline double variance_factor(double x, const Transformation& t, const DensityDerivatives& d,
                              int degree, const Kernel& k, bool nn_mode = false)
{
  double vp = (degree >= 2) ? k.quad_variance_constant() : k.nu(0);
  if (nn_mode) return 2.0 * vp * d.f * d.f;
  return vp * d.f * t.derivative(1, x);
}

//! Transformed-domain density and its first two derivatives at y = T(x),
//! from the original-domain derivatives via the chain rule.
struct TransformedDerivatives
{
  double f{ 0.0 };
  double d1{ 0.0 };
  double d2{ 0.0 };
};

inline TransformedDerivatives transformed_derivatives(double y, const Transformation& t,
                                                      const DensityDerivatives& d)
{
  double x = t.inverse(y);
  auto td = t.derivatives(x);
  double t1 = td[0], t2 = td[1], t3 = td[2];
  if (!(t1 > 0.0)) throw std::domain_error("transformed_derivatives: T' must be positive");
  TransformedDerivatives out;
  out.f = d.f / t1;
  out.d1 = d.d1 / (t1 * t1) - d.f * t2 / std::pow(t1, 3);
  out.d2 = d.d2 / std::pow(t1, 3) - 3.0 * d.d1 * t2 / std::pow(t1, 4) -
           d.f * t3 / std::pow(t1, 4) + 3.0 * d.f * t2 * t2 / std::pow(t1, 5);
  return out;
}

} // namespace lltkde
