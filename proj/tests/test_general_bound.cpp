#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heatnorm/general_bound.hpp"
#include "heatnorm/sharp_constant.hpp"
#include "oracles.hpp"

using namespace heatnorm;

TEST_CASE("Kernel norm reduces to M(t) for n = 2, q = 2, s = 1")
{
  for (double t : {1e-6, 1e-3, 0.1, 1.0, 10.0, 200.0})
  {
    CAPTURE(t);
    CHECK(oracle::relerr(kernel_norm(EmbeddingParams<double>{2, 2.0, 1.0}, t), exact_m(t)) < 1e-10);
  }
}

TEST_CASE("Kernel norm against tanh-sinh quadrature")
{
  const EmbeddingParams<double> cases[] = {{1, 1.0, 0.3}, {3, 1.5, 2.0}, {4, 2.0, 0.5}, {2, 1.2, 1.7}};
  for (const auto& p : cases)
    for (double t : {0.01, 0.5, 4.0})
    {
      CAPTURE(p.n);
      CAPTURE(p.q);
      CAPTURE(t);
      CHECK(oracle::relerr(kernel_norm(p, t), oracle::kernel_norm(p.n, p.q, p.s, t)) < 1e-9);
    }
}

TEST_CASE("s = 0 Gaussian moment closed form")
{
  for (int n = 1; n <= 4; ++n)
    for (double q : {1.0, 1.5, 2.0})
      for (double t : {1e-3, 0.2, 7.0})
        CHECK(oracle::relerr(kernel_norm(EmbeddingParams<double>{n, q, 0.0}, t),
                             oracle::gaussian_moment_norm(n, q, t)) < 1e-10);
}

TEST_CASE("Kernel norm is monotone in s and t")
{
  const double t = 0.05;
  double prev = kernel_norm(EmbeddingParams<double>{3, 1.5, 0.0}, t);
  for (double s : {0.5, 1.0, 2.0, 4.0})
  {
    const double cur = kernel_norm(EmbeddingParams<double>{3, 1.5, s}, t);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(kernel_norm(EmbeddingParams<double>{2, 1.0, 2.0}, 0.1) >
        kernel_norm(EmbeddingParams<double>{2, 1.0, 2.0}, 0.2));
}

TEST_CASE("Critical log bound dominates the kernel norm")
{
  for (int n = 1; n <= 4; ++n)
    for (double q : {1.0, 1.5, 2.0})
      for (double t = 1e-8; t < 1e3; t *= 3.7)
      {
        CAPTURE(n);
        CAPTURE(q);
        CAPTURE(t);
        CHECK(kernel_norm(EmbeddingParams<double>::critical_for(n, q), t) <= critical_log_bound(n, q, t));
      }
}

TEST_CASE("Critical split: each piece bounds its part of the radial integral")
{
  for (int n = 1; n <= 4; ++n)
    for (double q : {1.0, 2.0})
      for (double t : {1e-4, 0.1, 2.0})
      {
        const auto split = critical_split_terms(n, q, t);
        CHECK(split.a == doctest::Approx(std::numbers::e / (2 * q)));
        const auto p = EmbeddingParams<double>::critical_for(n, q);
        const double total = radial_integral(p, t);
        CHECK(total <= split.head + split.tail);
      }
}

TEST_CASE("EmbeddingParams validation")
{
  CHECK(EmbeddingParams<double>::critical_for(3, 1.5).critical());
  CHECK_FALSE((EmbeddingParams<double>{2, 2.0, 0.5}.critical()));
  CHECK_THROWS_AS((EmbeddingParams<double>{0, 2.0, 1.0}.validate()), std::domain_error);
  CHECK_THROWS_AS((EmbeddingParams<double>{2, 0.5, 1.0}.validate()), std::domain_error);
  CHECK_THROWS_AS((EmbeddingParams<double>{2, 2.5, 1.0}.validate()), std::domain_error);
  CHECK_THROWS_AS(kernel_norm(EmbeddingParams<double>{2, 2.0, 1.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS(critical_log_bound(0, 2.0, 0.1), std::domain_error);
}

TEST_CASE("Fixed truncation radius")
{
  QuadratureConfig cfg;
  const EmbeddingParams<double> p{2, 2.0, 1.0};
  cfg.truncation = TruncationPolicy::fixed(3.0);
  const double truncated = radial_integral(p, 1.0, cfg);
  CHECK(truncated < radial_integral(p, 1.0));
  // int_0^3 r e^{-2r^2}/(1+r^2) dr = (e^2/2) (E1(2) - E1(20))
  const double e2 = std::exp(2.0);
  CHECK(truncated == doctest::Approx(e2 / 2 * (oracle::e1_boost(2.0) - oracle::e1_boost(20.0))).epsilon(1e-11));
}
