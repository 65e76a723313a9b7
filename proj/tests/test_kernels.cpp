#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lltkde/kernels.hpp"
#include "lltkde/quadrature.hpp"

using namespace lltkde;

namespace {

double moment_oracle(const Kernel& k, int j, bool squared)
{
  double lim = k.compact_support() ? k.support() : 12.0;
  return integrate(
      [&](double u) {
        double kv = k(u);
        return std::pow(u, j) * (squared ? kv * kv : kv);
      },
      -lim, lim, 96, 20);
}

} // namespace

TEST_CASE("kernel values")
{
  auto g = Kernel::gaussian();
  REQUIRE(g(0.0) == Catch::Approx(0.3989422804014327).epsilon(1e-12));
  REQUIRE(g(-1.3) == g(1.3));

  auto e = Kernel::epanechnikov();
  REQUIRE(e(-0.7) == e(0.7));
  // support is |u| <= sqrt(5) after unit-variance rescaling
  REQUIRE(e(2.0) > 0.0);
  REQUIRE(e(2.2360679774997896) == 0.0);
  REQUIRE(e(2.5) == 0.0);
  REQUIRE(e(3.0) == 0.0);
}

TEST_CASE("stored moments agree with quadrature to 1e-10")
{
  for (auto k : { Kernel::gaussian(), Kernel::epanechnikov() }) {
    for (int j = 0; j <= 6; ++j)
      REQUIRE(k.mu(j) == Catch::Approx(moment_oracle(k, j, false)).margin(1e-10));
    for (int j = 0; j <= 4; ++j)
      REQUIRE(k.nu(j) == Catch::Approx(moment_oracle(k, j, true)).margin(1e-10));
  }
}

TEST_CASE("gaussian moment constants")
{
  auto g = Kernel::gaussian();
  REQUIRE(g.mu(0) == 1.0);
  REQUIRE(g.mu(1) == 0.0);
  REQUIRE(g.mu(2) == 1.0);
  REQUIRE(g.mu(4) == 3.0);
  REQUIRE(g.mu(6) == 15.0);
  REQUIRE(g.nu(0) == Catch::Approx(0.28209479177387814).epsilon(1e-12)); // 1/(2 sqrt(pi))
}

TEST_CASE("log-quadratic variance inflation is 27/16 for the gaussian")
{
  auto g = Kernel::gaussian();
  REQUIRE(g.quad_variance_inflation() == Catch::Approx(27.0 / 16.0).margin(1e-12));
  // the absolute constant is the inflation times nu0
  REQUIRE(g.quad_variance_constant() ==
          Catch::Approx(27.0 / 16.0 * g.nu(0)).epsilon(1e-14));
  // epanechnikov inflates too, by a different factor
  auto e = Kernel::epanechnikov();
  REQUIRE(e.quad_variance_inflation() > 1.0);
}

TEST_CASE("kernel lookup by name")
{
  REQUIRE(Kernel::from_name("gaussian").id() == KernelId::gaussian);
  REQUIRE(Kernel::from_name("epanechnikov").id() == KernelId::epanechnikov);
  REQUIRE_THROWS_AS(Kernel::from_name("triangle"), std::invalid_argument);
}

TEST_CASE("raw kde basics")
{
  std::vector<double> sample{ 0.0 };
  REQUIRE(raw_kde(0.0, sample, 1.0, Kernel::gaussian()) ==
          Catch::Approx(0.3989422804014327).epsilon(1e-12));
  REQUIRE_THROWS_AS(raw_kde(0.0, sample, 0.0, Kernel::gaussian()), std::invalid_argument);
}
