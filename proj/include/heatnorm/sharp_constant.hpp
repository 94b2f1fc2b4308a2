#pragma once

// The H^1(R^2) -> L^inf operator norm M(t) of the heat semigroup and the
// explicit two-dimensional bounds that bracket it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "heatnorm/specfun.hpp"

namespace heatnorm
{

template <typename Scalar = double>
using TimePoint = PositiveReal<Scalar>;

/// log(e + 1/t), the time profile shared by all of the bounds below.
template <typename Scalar>
Scalar log_profile(Scalar t)
{
  detail::require_positive(t, "log_profile");
  return std::log(std::numbers::e_v<Scalar> + Scalar(1) / t);
}

/// M(t) = e^t/(2 sqrt(pi)) * sqrt(E1(2t)).
///
/// Evaluated through e^{2t} E1(2t) so that large t neither overflows e^t nor
/// underflows E1.
template <RealScalar Scalar>
Scalar exact_m(Scalar t)
{
  detail::require_positive(t, "exact_m");
  const Scalar scaled = exp_integral_e1_scaled(Scalar(2) * t);
  return std::sqrt(scaled) / (Scalar(2) * std::sqrt(std::numbers::pi_v<Scalar>));
}

template <typename Derived>
auto exact_m(const Eigen::ArrayBase<Derived>& t)
{
  using Scalar = typename Derived::Scalar;
  return t.unaryExpr([](Scalar v) { return exact_m(v); });
}

/// (2 pi)^{-1/2} sqrt(log(e + 1/t)).
template <typename Scalar>
Scalar envelope_ub(Scalar t)
{
  return std::sqrt(log_profile(t) / (Scalar(2) * std::numbers::pi_v<Scalar>));
}

template <typename Scalar = double>
inline constexpr Scalar floor_prefactor =
    Scalar(1) / (Scalar(2) * Scalar(2.5066282746310005024L) * Scalar(7.3890560989306502272L));

/// sqrt(log(e + 1/t)) / (2 sqrt(2 pi) e^2), valid for 0 < t < 1/e.
template <typename Scalar>
Scalar floor_lb(Scalar t)
{
  detail::require_positive(t, "floor_lb");
  if (!(t < Scalar(1) / std::numbers::e_v<Scalar>))
    throw std::domain_error("floor_lb: requires t < 1/e");
  return floor_prefactor<Scalar> * std::sqrt(log_profile(t));
}

/// (2/sqrt(pi)) (sqrt(n) + 2^{-n} t^{-1/2}), an upper bound for M(t) for any n >= 1.
template <typename Scalar>
Scalar dyadic_bound(Scalar t, int n)
{
  detail::require_positive(t, "dyadic_bound");
  if (n < 1)
    throw std::domain_error("dyadic_bound: n must be >= 1");
  return Scalar(2) / std::sqrt(std::numbers::pi_v<Scalar>) *
         (std::sqrt(Scalar(n)) + std::ldexp(Scalar(1), -n) / std::sqrt(t));
}

/// Smallest N >= max(1, log2(t^{-1/2})) for 0 < t < 1. An exact integer
/// log2(t^{-1/2}) is taken as is.
template <typename Scalar>
int dyadic_optimal_n(Scalar t)
{
  detail::require_positive(t, "dyadic_optimal_n");
  if (!(t < Scalar(1)))
    throw std::domain_error("dyadic_optimal_n: requires t < 1 (use N = 1 for t >= 1)");
  const Scalar target = -std::log2(t) / Scalar(2);
  Scalar n = std::ceil(target);
  // Snap values a few ulps above an integer back down to it.
  if (n - target > Scalar(1) - Scalar(64) * std::numeric_limits<Scalar>::epsilon() * n)
    n -= Scalar(1);
  return std::max(1, static_cast<int>(n));
}

template <typename Scalar = double>
struct BoundCurveSample
{
  TimePoint<Scalar> t;
  Scalar exact_m;
  Scalar envelope_ub;
  std::optional<Scalar> floor_lb;
  Scalar dyadic_ub;
  int n_star;
  Scalar normalized_exact;
};

template <typename Scalar>
BoundCurveSample<Scalar> sample_bounds(TimePoint<Scalar> tp)
{
  const Scalar t = tp.value();
  const Scalar m = exact_m(t);
  const int n = t < Scalar(1) ? dyadic_optimal_n(t) : 1;
  std::optional<Scalar> floor;
  if (t < Scalar(1) / std::numbers::e_v<Scalar>)
    floor = floor_lb(t);
  return {tp, m, envelope_ub(t), floor, dyadic_bound(t, n), n, m / std::sqrt(log_profile(t))};
}

/// Evaluates every bound on a strictly increasing grid of times.
template <typename Scalar>
std::vector<BoundCurveSample<Scalar>> sweep(const std::vector<TimePoint<Scalar>>& grid)
{
  if (grid.empty())
    throw std::invalid_argument("sweep: empty time grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i].value() > grid[i - 1].value()))
      throw std::invalid_argument("sweep: time grid must be strictly increasing");
  std::vector<BoundCurveSample<Scalar>> out;
  out.reserve(grid.size());
  for (const auto& tp : grid)
    out.push_back(sample_bounds(tp));
  return out;
}

/// `points` log-spaced times on [t_min, t_max], endpoints included.
template <typename Scalar = double>
std::vector<TimePoint<Scalar>> log_grid(Scalar t_min, Scalar t_max, int points)
{
  detail::require_positive(t_min, "log_grid");
  detail::require_positive(t_max, "log_grid");
  if (points < 1 || (points > 1 && !(t_max > t_min)))
    throw std::invalid_argument("log_grid: need points >= 1 and t_max > t_min");
  if (points == 1)
    return {TimePoint<Scalar>(t_min)};
  const Eigen::Array<Scalar, Eigen::Dynamic, 1> exponents =
      Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(points, std::log10(t_min),
                                                          std::log10(t_max));
  std::vector<TimePoint<Scalar>> grid;
  grid.reserve(points);
  for (int i = 0; i < points; ++i)
  {
    // Pin the endpoints so that rounding in pow cannot push them out of range.
    const Scalar t = i == 0 ? t_min : i == points - 1 ? t_max : std::pow(Scalar(10), exponents(i));
    grid.emplace_back(t);
  }
  return grid;
}

}  // namespace heatnorm
