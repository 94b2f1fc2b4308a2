#pragma once

// The Brezis-Gallouet inequality assembled from the heat-semigroup bound:
//
//   ||f||_inf <= ||e^{t D} f||_inf + int_0^t ||e^{tau D} D f||_inf dtau
//             <= M(t) ||f||_{H^1} + sqrt(t / (2 pi)) ||f||_{H^2},
//
// evaluated at t* = ||f||_{H^1}^2 / ||f||_{H^2}^2. The Duhamel term uses
// ||e^{tau D} g||_inf <= (1/2pi) ||e^{-tau|xi|^2}||_2 ||F g||_2 = (8 pi tau)^{-1/2} ||g||_2.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "heatnorm/grid.hpp"
#include "heatnorm/sharp_constant.hpp"

namespace heatnorm
{

/// Constant in ||f||_inf <= C h1 (1 + sqrt(log(1 + h2/h1))).
///
/// Equal to (2 pi)^{-1/2}: with X = h2/h1 the two-term bound at t* is
/// h1 (M(1/X^2) + (2 pi)^{-1/2}), and E1(x) < e^{-x} log(1 + 1/x) gives
/// M(1/X^2)^2 < log(1 + X^2/2) / (4 pi) <= log(1 + X) / (2 pi).
/// The ratio approaches this value as X -> inf, so no smaller constant works.
template <typename Scalar = double>
inline constexpr Scalar bg_constant = Scalar(0.39894228040143267794L);

namespace detail
{

template <typename Scalar>
void require_norm_pair(Scalar h1, Scalar h2, const char* what)
{
  if (!(h1 > Scalar(0)) || !std::isfinite(h1) || !std::isfinite(h2))
    throw std::domain_error(std::string(what) + ": norms must be positive and finite");
  if (!(h2 >= h1))
    throw std::domain_error(std::string(what) + ": H^2 norm " + std::to_string(double(h2)) +
                            " is below the H^1 norm " + std::to_string(double(h1)));
}

}  // namespace detail

/// t* = h1^2 / h2^2, in (0, 1].
template <typename Scalar>
Scalar optimal_time(Scalar h1, Scalar h2)
{
  detail::require_norm_pair(h1, h2, "optimal_time");
  const Scalar r = h1 / h2;
  return r * r;
}

/// M(t) h1 + sqrt(t / (2 pi)) h2.
template <typename Scalar>
Scalar two_term_bound(Scalar h1, Scalar h2, Scalar t)
{
  detail::require_positive(t, "two_term_bound");
  return exact_m(t) * h1 + std::sqrt(t / (Scalar(2) * std::numbers::pi_v<Scalar>)) * h2;
}

/// C h1 (1 + sqrt(log(1 + h2/h1))) with C = bg_constant.
template <typename Scalar>
Scalar bg_bound(Scalar h1, Scalar h2)
{
  detail::require_norm_pair(h1, h2, "bg_bound");
  return bg_constant<Scalar> * h1 * (Scalar(1) + std::sqrt(std::log1p(h2 / h1)));
}

/// two_term_bound(1, X, 1/X^2) / (1 + sqrt(log(1 + X))), whose supremum over X >= 1 is bg_constant.
template <typename Scalar>
Scalar bg_constant_profile(Scalar ratio_h2_h1)
{
  const Scalar x = ratio_h2_h1;
  return two_term_bound(Scalar(1), x, Scalar(1) / (x * x)) / (Scalar(1) + std::sqrt(std::log1p(x)));
}

template <typename Scalar = double>
struct BGReport
{
  Scalar h1;
  Scalar h2;
  Scalar sup;
  Scalar t_star;
  Scalar rhs_two_term;
  Scalar rhs_bg;
  Scalar slack;  ///< rhs_bg / sup
  Scalar c_bg;

  bool holds() const
  {
    return sup <= rhs_two_term && rhs_two_term <= rhs_bg * (Scalar(1) + Scalar(1e-12));
  }
};

/// Evaluates every quantity of the inequality chain on a grid field.
template <typename Scalar>
BGReport<Scalar> bg_verify(const GridField<Scalar>& field)
{
  const auto spec = as_spectral(field);
  const Scalar h1 = sobolev_norm(spec, Scalar(1));
  if (!(h1 > Scalar(0)))
    throw std::invalid_argument("bg_verify: zero field");
  const Scalar h2 = sobolev_norm(spec, Scalar(2));
  const Scalar sup = sup_norm(as_physical(field));
  const Scalar t = optimal_time(h1, h2);
  const Scalar two_term = two_term_bound(h1, h2, t);
  const Scalar bg = bg_bound(h1, h2);
  return {h1, h2, sup, t, two_term, bg, bg / sup, bg_constant<Scalar>};
}

}  // namespace heatnorm
