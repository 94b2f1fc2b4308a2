#pragma once

// Special functions used throughout heatnorm: the exponential integral E1,
// the gamma function, unit-sphere surface areas, and two elementary upper
// envelopes of E1(2t).

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Core>

namespace heatnorm
{

/// Real scalar types; excludes Eigen expressions so the array overloads are chosen for them.
template <typename T>
concept RealScalar = !std::is_base_of_v<Eigen::EigenBase<T>, T>;

namespace detail
{

template <typename Scalar>
inline void require_positive(Scalar x, const char* what)
{
  if (!(x > Scalar(0)) || !std::isfinite(x))
    throw std::domain_error(std::string(what) + ": argument must be positive and finite, got " +
                            std::to_string(static_cast<double>(x)));
}

}  // namespace detail

template <typename Scalar = double>
inline constexpr Scalar euler_gamma = Scalar(0.57721566490153286061L);

/// A strictly positive, finite real. Construction throws std::domain_error otherwise.
template <typename Scalar = double>
class PositiveReal
{
 public:
  explicit PositiveReal(Scalar v) : value_(v) { detail::require_positive(v, "PositiveReal"); }
  Scalar value() const { return value_; }
  operator Scalar() const { return value_; }

 private:
  Scalar value_;
};

/// Absolute and relative tolerance pair; at least one must be positive.
struct Accuracy
{
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;

  void validate() const
  {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0))
      throw std::domain_error("Accuracy: tolerances must be non-negative and not both zero");
  }
};

namespace detail
{

// -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), used for 0 < x <= 1.
template <typename Scalar>
Scalar e1_series(Scalar x)
{
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar sum(0);
  Scalar term(1);
  for (int k = 1; k < 1000; ++k)
  {
    term *= -x / Scalar(k);
    const Scalar del = -term / Scalar(k);
    sum += del;
    if (std::abs(del) <= std::abs(sum) * eps * Scalar(0.25))
      break;
  }
  return -euler_gamma<Scalar> - std::log(x) + sum;
}

// e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))) by modified Lentz, used for x > 1.
template <typename Scalar>
Scalar e1_scaled_continued_fraction(Scalar x)
{
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;
  Scalar b = x + Scalar(1);
  Scalar c = Scalar(1) / tiny;
  Scalar d = Scalar(1) / b;
  Scalar h = d;
  for (int i = 1; i < 100000; ++i)
  {
    const Scalar an = -Scalar(i) * Scalar(i);
    b += Scalar(2);
    d = Scalar(1) / (an * d + b);
    c = b + an / c;
    const Scalar del = c * d;
    h *= del;
    if (std::abs(del - Scalar(1)) <= eps)
      return h;
  }
  throw std::runtime_error("exp_integral_e1: continued fraction failed to converge");
}

}  // namespace detail

/// Exponential integral E1(x) = int_x^inf e^{-r}/r dr for x > 0.
///
/// Power series for x <= 1, continued fraction otherwise. Returns exactly 0
/// for x > 700, where e^{-x} is on its way to subnormal territory.
template <RealScalar Scalar>
Scalar exp_integral_e1(Scalar x)
{
  detail::require_positive(x, "exp_integral_e1");
  if (x <= Scalar(1))
    return detail::e1_series(x);
  if (x > Scalar(700))
    return Scalar(0);
  return std::exp(-x) * detail::e1_scaled_continued_fraction(x);
}

/// e^x E1(x). Finite for every x > 0, unlike the product of the two factors.
template <typename Scalar>
Scalar exp_integral_e1_scaled(Scalar x)
{
  detail::require_positive(x, "exp_integral_e1_scaled");
  if (x <= Scalar(1))
    return std::exp(x) * detail::e1_series(x);
  return detail::e1_scaled_continued_fraction(x);
}

template <typename Derived>
auto exp_integral_e1(const Eigen::ArrayBase<Derived>& x)
{
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([](Scalar v) { return exp_integral_e1(v); });
}

/// e^{-2t}/(2t), an upper bound for E1(2t).
template <typename Scalar>
Scalar e1_upper_exponential(Scalar t)
{
  detail::require_positive(t, "e1_upper_exponential");
  return std::exp(-Scalar(2) * t) / (Scalar(2) * t);
}

/// (e^{2/e}/2) log(e + 1/t), an upper bound for E1(2t) that stays finite as t -> inf.
template <typename Scalar>
Scalar e1_upper_log(Scalar t)
{
  detail::require_positive(t, "e1_upper_log");
  constexpr Scalar e = std::numbers::e_v<Scalar>;
  return std::exp(Scalar(2) / e) / Scalar(2) * std::log(e + Scalar(1) / t);
}

/// Gamma function for a > 0 (Lanczos, g = 7, nine coefficients).
template <typename Scalar>
Scalar gamma_fn(Scalar a)
{
  detail::require_positive(a, "gamma_fn");
  if (a < Scalar(0.5))
    return gamma_fn(a + Scalar(1)) / a;

  static constexpr double coeffs[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr Scalar g = 7;

  const Scalar z = a - Scalar(1);
  Scalar series = Scalar(coeffs[0]);
  for (int i = 1; i < 9; ++i)
    series += Scalar(coeffs[i]) / (z + Scalar(i));
  const Scalar base = z + g + Scalar(0.5);
  // Split the power so that a ~ 50 does not overflow before exp(-base) pulls it back.
  const Scalar half = std::pow(base, (z + Scalar(0.5)) / Scalar(2));
  return std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>) * half * (half * std::exp(-base)) *
         series;
}

/// Surface area 2 pi^{n/2} / Gamma(n/2) of the unit sphere in R^n.
template <typename Scalar = double>
Scalar unit_sphere_area(int n)
{
  if (n < 1)
    throw std::domain_error("unit_sphere_area: dimension must be >= 1, got " + std::to_string(n));
  const Scalar half_n = Scalar(n) / Scalar(2);
  return Scalar(2) * std::pow(std::numbers::pi_v<Scalar>, half_n) / gamma_fn(half_n);
}

}  // namespace heatnorm
