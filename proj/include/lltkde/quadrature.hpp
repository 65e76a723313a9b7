#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lltkde {

struct QuadRule
{
  std::vector<double> nodes;   // on [-1, 1]
  std::vector<double> weights;
};

//! Gauss-Legendre nodes/weights on [-1,1], Newton iteration on P_n.
inline QuadRule gauss_legendre(int n)
{
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

//! Integrate f over [a,b] with a composite Gauss-Legendre rule.
template <typename F>
double integrate(F&& f, double a, double b, int panels = 16, int order = 20)
{
  static thread_local int cached_order = -1;
  static thread_local QuadRule cached;
  if (cached_order != order) {
    cached = gauss_legendre(order);
    cached_order = order;
  }
  double total = 0.0;
  double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * w;
    double mid = lo + 0.5 * w;
    double half = 0.5 * w;
    double acc = 0.0;
    for (int k = 0; k < order; ++k)
      acc += cached.weights[k] * f(mid + half * cached.nodes[k]);
    total += acc * half;
  }
  return total;
}

//! Trapezoid rule over tabulated (x, y) values; x need not be equally spaced.
inline double trapezoid(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return acc;
}

} // namespace lltkde
