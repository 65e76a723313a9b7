#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lltkde/special.hpp"

namespace lltkde {

enum class TransformId
{
  log,
  probex
};

//! Smooth increasing map T: (0,inf) -> R with T(0+) = -inf and T(inf) = +inf,
//! exposing derivatives up to order 5 and the inverse.
//!
//! "probex" is T(x) = Phi^{-1}(1 - exp(-x)), which sends the standard
//! exponential law exactly onto the standard normal law.
class Transformation
{
public:
  static Transformation log() { return Transformation{ TransformId::log }; }
  static Transformation probex() { return Transformation{ TransformId::probex }; }

  static Transformation from_name(const std::string& name)
  {
    if (name == "log") return log();
    if (name == "probex") return probex();
    throw std::invalid_argument("unknown transformation '" + name + "'");
  }

  TransformId id() const { return id_; }
  const std::string& name() const
  {
    static const std::string names[2] = { "log", "probex" };
    return names[id_ == TransformId::log ? 0 : 1];
  }

  double forward(double x) const
  {
    check_domain(x);
    if (id_ == TransformId::log) return std::log(x);
    return probex_forward(x);
  }

  double inverse(double y) const
  {
    if (id_ == TransformId::log) return std::exp(y);
    // x = -log P(Z > y), split so both tails keep full precision
    if (y < 0.0) return -std::log1p(-normal_cdf(y));
    return -log_normal_sf(y);
  }

  //! j-th derivative of T at x, j in 1..5.
  double derivative(int order, double x) const
  {
    if (order < 1 || order > 5) throw std::invalid_argument("Transformation: order must be 1..5");
    return derivatives(x)[order - 1];
  }

  //! All five derivatives T', T'', ..., T''''' at x.
  std::array<double, 5> derivatives(double x) const
  {
    check_domain(x);
    if (id_ == TransformId::log) {
      // d^j/dx^j log x = (-1)^(j-1) (j-1)! / x^j
      double inv = 1.0 / x;
      double p = inv;
      std::array<double, 5> d{};
      double fact[5] = { 1.0, -1.0, 2.0, -6.0, 24.0 };
      for (int j = 0; j < 5; ++j) {
        d[j] = fact[j] * p;
        p *= inv;
      }
      return d;
    }
    return probex_derivatives(x);
  }

private:
  explicit Transformation(TransformId id) : id_(id) {}

  static void check_domain(double x)
  {
    if (!(x > 0.0)) throw std::domain_error("Transformation: x must be > 0");
  }

  static double probex_forward(double x)
  {
    constexpr double ln2 = 0.69314718055994530942;
    if (x < ln2) return normal_quantile(-std::expm1(-x));
    if (x < 36.0) return -normal_quantile(std::exp(-x));
    return normal_quantile_log_sf(-x);
  }

  //! Chain-rule derivatives of probex.  With y = T(x) and phi'(y) = -y phi(y),
  //! differentiating phi(y) y' = exp(-x) gives y'' = y' (y y' - 1); higher
  //! orders follow by Leibniz on that product.
  static std::array<double, 5> probex_derivatives(double x)
  {
    double y = probex_forward(x);
    double y1 = std::exp(-x - log_normal_pdf(y));
    double u = y * y1 - 1.0;
    double y2 = y1 * u;
    double u1 = y1 * y1 + y * y2;
    double y3 = y2 * u + y1 * u1;
    double u2 = 3.0 * y1 * y2 + y * y3;
    double y4 = y3 * u + 2.0 * y2 * u1 + y1 * u2;
    double u3 = 3.0 * y2 * y2 + 4.0 * y1 * y3 + y * y4;
    double y5 = y4 * u + 3.0 * y3 * u1 + 3.0 * y2 * u2 + y1 * u3;
    return { y1, y2, y3, y4, y5 };
  }

  TransformId id_;
};

//! probex'(x) / (log x)' = x exp(-x) / phi(Phi^{-1}(1 - exp(-x))).
//! Below 1 on (0,1) and tends to 0 with x: the probex transformation inflates
//! the back-transformed variance less than the log near the boundary.
inline double variance_ratio(double x)
{
  auto t = Transformation::probex();
  return x * t.derivative(1, x);
}

} // namespace lltkde
