#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "lltkde/competitors.hpp"
#include "lltkde/genf.hpp"

using namespace lltkde;

TEST_CASE("gamma kernel point values")
{
  std::vector<double> one{ 1.0 };
  // shape x/b + 1 = 1 at x = 0: Exp(1) density at X_1 = 1
  REQUIRE(gamma_kde(0.0, one, 1.0, false) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
  REQUIRE_THROWS_AS(gamma_kde(1.0, one, 0.0, false), std::invalid_argument);
  REQUIRE_THROWS_AS(gamma_kde(-0.1, one, 1.0, false), std::domain_error);
}

TEST_CASE("modified gamma shape is continuous at 2b")
{
  auto sample = genf_sample(40, GenFParams::preset_density(1), 11);
  double b = 0.3;
  double left = gamma_kde(2.0 * b - 1e-9, sample, b, true);
  double at = gamma_kde(2.0 * b, sample, b, true);
  double right = gamma_kde(2.0 * b + 1e-9, sample, b, true);
  REQUIRE(left == Catch::Approx(at).margin(1e-6));
  REQUIRE(right == Catch::Approx(at).margin(1e-6));
}

TEST_CASE("standard and modified gamma differ in the interior")
{
  auto sample = genf_sample(60, GenFParams::preset_density(1), 19);
  double b = 0.25;
  for (double x : { 0.7, 1.4, 2.2 }) {
    double std_v = gamma_kde(x, sample, b, false);
    double mod_v = gamma_kde(x, sample, b, true);
    REQUIRE(std_v != mod_v); // shapes x/b+1 vs x/b
    REQUIRE(std::abs(std_v - mod_v) / std_v < 0.5);
  }
}

TEST_CASE("gamma estimators integrate to one")
{
  auto sample = genf_sample(30, GenFParams::preset_density(1), 23);
  for (bool modified : { false, true }) {
    double mass = integrate(
        [&](double x) { return gamma_kde(x, sample, 0.2, modified); }, 1e-10, 40.0, 300, 20);
    REQUIRE(mass == Catch::Approx(1.0).margin(1e-3));
  }
}

TEST_CASE("reflection estimator basics")
{
  auto sample = genf_sample(50, GenFParams::preset_density(1), 29);
  auto k = Kernel::gaussian();
  double h = 0.4;
  // at 0 the two kernel terms coincide
  double direct = 0.0;
  for (double v : sample) direct += k(v / h);
  direct *= 2.0 / (sample.size() * h);
  REQUIRE(reflection_kde(0.0, sample, h, k) == Catch::Approx(direct).epsilon(1e-14));

  // reflection forces zero slope at the boundary
  double d = 1e-4;
  REQUIRE(std::abs(reflection_kde(d, sample, h, k) - reflection_kde(0.0, sample, h, k)) < 1e-4);
}

TEST_CASE("reflection equals the raw kde away from the boundary")
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(5.0, 10.0);
  std::vector<double> sample(60);
  for (auto& v : sample) v = u(rng);
  auto k = Kernel::gaussian();
  for (double x : { 5.5, 7.0, 9.2 })
    REQUIRE(reflection_kde(x, sample, 0.3, k) ==
            Catch::Approx(raw_kde(x, sample, 0.3, k)).margin(1e-12));
}

TEST_CASE("cut-and-normalise doubles the raw kde at zero and matches it inside")
{
  auto sample = genf_sample(50, GenFParams::preset_density(1), 37);
  auto k = Kernel::gaussian();
  double h = 0.3;
  REQUIRE(cut_and_normalise_kde(0.0, sample, h, k) ==
          Catch::Approx(2.0 * raw_kde(0.0, sample, h, k)).epsilon(1e-12));
  for (double x : { 6.0 * h, 2.5, 4.0 })
    REQUIRE(cut_and_normalise_kde(x, sample, h, k) ==
            Catch::Approx(raw_kde(x, sample, h, k)).margin(1e-9));
}

TEST_CASE("boundary-corrected estimator is nonnegative and interior-consistent")
{
  auto sample = genf_sample(80, GenFParams::preset_density(1), 41);
  auto k = Kernel::gaussian();
  double h = 0.35;
  for (double x = 0.0; x < 5.0; x += 0.05) {
    double v = boundary_corrected_kde(x, sample, h, k);
    REQUIRE(v >= 0.0);
    REQUIRE(std::isfinite(v));
  }
  for (double x : { 6.0 * h, 3.0, 4.5 })
    REQUIRE(boundary_corrected_kde(x, sample, h, k) ==
            Catch::Approx(raw_kde(x, sample, h, k)).margin(1e-9));
}

TEST_CASE("all competitors reduce to the raw kde in the interior")
{
  auto sample = genf_sample(100, GenFParams::preset_density(3), 43);
  auto k = Kernel::gaussian();
  double h = 0.3;
  for (double x : { 6.5 * h, 8.0 * h }) {
    double raw = raw_kde(x, sample, h, k);
    REQUIRE(reflection_kde(x, sample, h, k) == Catch::Approx(raw).margin(1e-9));
    REQUIRE(cut_and_normalise_kde(x, sample, h, k) == Catch::Approx(raw).margin(1e-9));
    REQUIRE(boundary_corrected_kde(x, sample, h, k) == Catch::Approx(raw).margin(1e-9));
  }
}

TEST_CASE("competitor grid wrapper and renormalization")
{
  auto sample = genf_sample(60, GenFParams::preset_density(1), 47);
  std::vector<double> grid(300);
  for (int i = 0; i < 300; ++i) grid[i] = 0.001 + (6.0 - 0.001) * i / 299.0;

  CompetitorConfig cc;
  cc.id = CompetitorConfig::id_from_name("can");
  cc.bandwidth = 0.35;
  auto est = competitor_grid(grid, sample, cc, true);
  REQUIRE(est.estimator == "can");
  double mass = trapezoid(est.grid, est.values);
  REQUIRE(mass > 0.95);
  REQUIRE(mass < 1.02);
  for (double v : est.values) REQUIRE(v >= 0.0);

  REQUIRE_THROWS_AS(CompetitorConfig::id_from_name("nope"), std::invalid_argument);
  REQUIRE(CompetitorConfig::name_of(CompetitorId::boundary_corrected) == "bound");
}
