#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lltkde/asymptotics.hpp"
#include "lltkde/loclik.hpp"

using namespace lltkde;

TEST_CASE("naive bias for the log transform and Exp(1)")
{
  auto t = Transformation::log();
  for (double x : { 0.2, 0.6, 1.0, 2.5, 5.0 }) {
    auto d = DensityDerivatives::exp1(x);
    // b_log(x) = x^2 f'' + 3x f' + f = exp(-x)(x^2 - 3x + 1)
    double expect = std::exp(-x) * (x * x - 3.0 * x + 1.0);
    REQUIRE(bias_naive(x, t, d) == Catch::Approx(expect).epsilon(1e-12));
  }
  REQUIRE(bias_naive(1.0, t, DensityDerivatives::exp1(1.0)) ==
          Catch::Approx(-std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("f-coefficients of the log transform")
{
  auto t = Transformation::log();
  for (double x = 0.1; x <= 10.0; x += 0.31) {
    REQUIRE(naive_f_coefficient(t, x) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(loclin_f_coefficient(t, x) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(locquad_f_coefficient(t, x) == Catch::Approx(0.0).margin(1e-10));
  }
}

TEST_CASE("log-linear bias for the log transform and Exp(1)")
{
  auto t = Transformation::log();
  for (double x : { 0.3, 1.0, 2.0 }) {
    auto d = DensityDerivatives::exp1(x);
    // f'' - f'^2/f vanishes for Exp(1), so b = -x f' = x exp(-x)
    REQUIRE(bias_loclin(x, t, d) == Catch::Approx(x * std::exp(-x)).epsilon(1e-12));
  }
  DensityDerivatives zero_f{ 1.0, 0.0, -1.0, 1.0, -1.0, 1.0 };
  REQUIRE_THROWS_AS(bias_loclin(1.0, t, zero_f), std::domain_error);
}

TEST_CASE("log-quadratic bias for the log transform and Exp(1)")
{
  auto t = Transformation::log();
  for (double x : { 0.4, 1.0, 1.9, 4.2 }) {
    auto d = DensityDerivatives::exp1(x);
    // b_log^(2)(x) = exp(-x) x (4x - 5)
    double expect = std::exp(-x) * x * (4.0 * x - 5.0);
    REQUIRE(bias_locquad(x, t, d) == Catch::Approx(expect).epsilon(1e-10).margin(1e-13));
  }
  REQUIRE(bias_locquad(1.0, t, DensityDerivatives::exp1(1.0)) ==
          Catch::Approx(-std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("exact local model kills the leading log-linear bias")
{
  // density locally exponential in the transformed domain: f_Y'' - f_Y'^2/f_Y = 0
  // translates to (f'' - f'^2/f) evaluated through the chain rule; Exp(1) under
  // the log transform has exactly that property in its first term
  auto d = DensityDerivatives::exp1(1.3);
  REQUIRE(d.d2 - d.d1 * d.d1 / d.f == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("transformed-domain derivatives: Exp(1) under log is the Gumbel")
{
  auto t = Transformation::log();
  for (double y = -4.0; y <= 2.0; y += 0.37) {
    double x = std::exp(y);
    auto td = transformed_derivatives(y, t, DensityDerivatives::exp1(x));
    REQUIRE(td.f == Catch::Approx(std::exp(y - std::exp(y))).epsilon(1e-12));
  }
}

TEST_CASE("transformed-domain derivatives: Exp(1) under probex is standard normal")
{
  auto t = Transformation::probex();
  for (double y = -3.0; y <= 3.0; y += 0.41) {
    double x = t.inverse(y);
    auto td = transformed_derivatives(y, t, DensityDerivatives::exp1(x));
    REQUIRE(td.f == Catch::Approx(normal_pdf(y)).epsilon(1e-9));
    REQUIRE(td.d1 == Catch::Approx(-y * normal_pdf(y)).margin(1e-9));
    REQUIRE(td.d2 == Catch::Approx((y * y - 1.0) * normal_pdf(y)).margin(1e-8));
  }
}

TEST_CASE("transformed-domain derivatives agree with finite differences")
{
  for (auto t : { Transformation::log(), Transformation::probex() }) {
    auto fy = [&](double y) {
      return transformed_derivatives(y, t, DensityDerivatives::exp1(t.inverse(y))).f;
    };
    for (double y = -4.0; y <= 2.0; y += 0.53) {
      double h = 1e-5;
      double d1_fd = (fy(y + h) - fy(y - h)) / (2.0 * h);
      double d2_fd = (fy(y + h) - 2.0 * fy(y) + fy(y - h)) / (h * h);
      auto td = transformed_derivatives(y, t, DensityDerivatives::exp1(t.inverse(y)));
      REQUIRE(td.d1 == Catch::Approx(d1_fd).epsilon(1e-5).margin(1e-10));
      REQUIRE(td.d2 == Catch::Approx(d2_fd).epsilon(1e-4).margin(1e-8));
    }
  }
}

TEST_CASE("chain-rule consistency of the log-linear bias")
{
  for (auto t : { Transformation::log(), Transformation::probex() }) {
    for (double x = 0.1; x <= 5.0; x += 0.17) {
      auto d = DensityDerivatives::exp1(x);
      double y = t.forward(x);
      auto td = transformed_derivatives(y, t, d);
      double via_y = (td.d2 - td.d1 * td.d1 / td.f) * t.derivative(1, x);
      REQUIRE(bias_loclin(x, t, d) == Catch::Approx(via_y).epsilon(1e-8).margin(1e-12));
    }
  }
}

TEST_CASE("chain-rule consistency of the log-quadratic bias")
{
  for (auto t : { Transformation::log(), Transformation::probex() }) {
    for (double x = 0.2; x <= 5.0; x += 0.23) {
      auto d = DensityDerivatives::exp1(x);
      double y = t.forward(x);
      auto fy2 = [&](double yy) {
        return transformed_derivatives(yy, t, DensityDerivatives::exp1(t.inverse(yy))).d2;
      };
      // third and fourth derivatives of f_Y by differencing the chain-rule f_Y''
      double h = 3e-5;
      double fy3 = (fy2(y + h) - fy2(y - h)) / (2.0 * h);
      double h2 = 3e-4;
      double fy4 = (fy2(y + h2) - 2.0 * fy2(y) + fy2(y - h2)) / (h2 * h2);
      auto td = transformed_derivatives(y, t, d);
      double by2 = fy4 - 3.0 * td.d2 * td.d2 / td.f +
                   2.0 * std::pow(td.d1, 4) / std::pow(td.f, 3);
      (void)fy3;
      double via_y = by2 * t.derivative(1, x);
      REQUIRE(bias_locquad(x, t, d) == Catch::Approx(via_y).epsilon(1e-6).margin(1e-9));
    }
  }
}

TEST_CASE("variance factors")
{
  auto k = Kernel::gaussian();
  auto tlog = Transformation::log();
  for (double x : { 0.2, 1.0, 3.0 }) {
    auto d = DensityDerivatives::exp1(x);
    // v_log^2(x) = f(x)/x, and the p=1 constant is nu0
    REQUIRE(variance_factor(x, tlog, d, 1, k) ==
            Catch::Approx(k.nu(0) * std::exp(-x) / x).epsilon(1e-12));
    REQUIRE(variance_factor(x, tlog, d, 2, k) ==
            Catch::Approx(k.quad_variance_constant() * std::exp(-x) / x).epsilon(1e-12));
  }
  // NN mode stays bounded at the boundary
  auto d0 = DensityDerivatives::exp1(0.01);
  double nn = variance_factor(0.01, tlog, d0, 2, k, true);
  REQUIRE(nn == Catch::Approx(2.0 * k.quad_variance_constant() * std::exp(-0.02)).epsilon(1e-12));
  REQUIRE(nn < 1.0);
}

TEST_CASE("genf derivative builder matches the exponential special case")
{
  auto d1 = GenFParams::preset_density(1);
  for (double x : { 0.4, 1.0, 2.3 }) {
    auto fd = DensityDerivatives::genf(d1, x);
    auto exact = DensityDerivatives::exp1(x);
    REQUIRE(fd.f == Catch::Approx(exact.f).epsilon(1e-10));
    REQUIRE(fd.d1 == Catch::Approx(exact.d1).epsilon(1e-8));
    REQUIRE(fd.d2 == Catch::Approx(exact.d2).epsilon(1e-8));
    REQUIRE(fd.d3 == Catch::Approx(exact.d3).epsilon(1e-5));
    REQUIRE(fd.d4 == Catch::Approx(exact.d4).epsilon(1e-4));
  }
}

TEST_CASE("empirical bias of the log-linear fit matches the formula")
{
  // Exp(1), log transform, p=1, fixed h, evaluated at x=1 (y=0, T'(1)=1):
  // predicted bias = (mu2/2) h^2 b_log^(1)(1)
  const double h = 0.3;
  const int reps = 400;
  const std::size_t n = 5000;
  auto d1 = GenFParams::preset_density(1);
  LocalFitConfig lc;
  lc.degree = 1;
  lc.smoothing = SmoothingSpec::fixed(h);

  double acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    auto sample = genf_sample(n, d1, 777000 + r);
    std::vector<double> logs(n);
    for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(sample[i]);
    acc += fit_at(0.0, logs, lc).density;
  }
  double bias = acc / reps - std::exp(-1.0);
  double predicted = 0.5 * h * h * bias_loclin(1.0, Transformation::log(),
                                               DensityDerivatives::exp1(1.0));
  REQUIRE(predicted > 0.0);
  REQUIRE(bias > 0.5 * predicted);
  REQUIRE(bias < 2.0 * predicted);
}
