#pragma once

// Lower bounds for M(t) from the annular test functions whose spectrum is
// |xi|^{-2} on 1 < |xi| < lambda, plus the spectral profile that attains M(t).

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "heatnorm/general_bound.hpp"
#include "heatnorm/quadrature.hpp"
#include "heatnorm/sharp_constant.hpp"
#include "heatnorm/specfun.hpp"

namespace heatnorm
{

inline constexpr double extremizer_lambda_floor = 1.0 + 1e-6;

namespace detail
{

template <typename Scalar>
void require_lambda(Scalar lambda, const char* what)
{
  if (!(lambda > Scalar(1)) || !std::isfinite(lambda))
    throw std::domain_error(std::string(what) + ": lambda must be finite and > 1, got " +
                            std::to_string(double(lambda)));
}

}  // namespace detail

/// ||f(., lambda)||_{H^1}^2 = 2 pi (log lambda + (1 - lambda^{-2}) / 2).
template <typename Scalar>
Scalar h1_norm_sq(Scalar lambda)
{
  detail::require_lambda(lambda, "h1_norm_sq");
  const Scalar d = lambda - Scalar(1);
  const Scalar shell = d * (lambda + Scalar(1)) / (Scalar(2) * lambda * lambda);
  return Scalar(2) * std::numbers::pi_v<Scalar> * (std::log1p(d) + shell);
}

/// (e^{t Delta} f(., lambda))(0) = int_1^lambda e^{-t r^2} r^{-1} dr = (E1(t) - E1(t lambda^2)) / 2.
template <typename Scalar>
Scalar heat_at_origin(Scalar t, Scalar lambda)
{
  detail::require_positive(t, "heat_at_origin");
  detail::require_lambda(lambda, "heat_at_origin");
  const Scalar stretch = lambda * lambda - Scalar(1);
  if (stretch < Scalar(0.25))
  {
    // The E1 difference cancels badly on thin annuli; one Kronrod panel is exact here.
    auto integrand = [t](Scalar r) { return std::exp(-t * r * r) / r; };
    QuadratureConfig cfg;
    cfg.abs_tol = 1e-300;
    cfg.rel_tol = 1e-15;
    return integrate<Scalar>(integrand, Scalar(1), lambda, cfg).value;
  }
  // e^{-t}(e^t E1(t) - e^{-t(lambda^2 - 1)} e^{t lambda^2} E1(t lambda^2)) / 2 stays finite for large t.
  const Scalar near = exp_integral_e1_scaled(t);
  const Scalar far = std::exp(-t * stretch) * exp_integral_e1_scaled(t * lambda * lambda);
  return std::exp(-t) * (near - far) / Scalar(2);
}

/// Certified lower bound heat_at_origin / ||f(., lambda)||_{H^1} for M(t).
template <typename Scalar>
Scalar ratio(Scalar t, Scalar lambda)
{
  return heat_at_origin(t, lambda) / std::sqrt(h1_norm_sq(lambda));
}

/// lambda = sqrt(e + 1/t), for 0 < t < 1/e.
template <typename Scalar>
Scalar paper_lambda(Scalar t)
{
  detail::require_positive(t, "paper_lambda");
  if (!(t < Scalar(1) / std::numbers::e_v<Scalar>))
    throw std::domain_error("paper_lambda: requires t < 1/e");
  return std::sqrt(std::numbers::e_v<Scalar> + Scalar(1) / t);
}

template <typename Scalar = double>
struct ExtremizerReport
{
  TimePoint<Scalar> t;
  Scalar lambda;
  Scalar h1_norm;
  Scalar heat_at_origin;
  Scalar ratio;
  std::optional<Scalar> paper_floor;
  bool is_optimized;
};

template <typename Scalar>
ExtremizerReport<Scalar> extremizer_report(Scalar t, Scalar lambda, bool optimized = false)
{
  const Scalar heat = heat_at_origin(t, lambda);
  const Scalar norm = std::sqrt(h1_norm_sq(lambda));
  std::optional<Scalar> floor;
  if (t < Scalar(1) / std::numbers::e_v<Scalar>)
    floor = floor_lb(t);
  return {TimePoint<Scalar>(t), lambda, norm, heat, heat / norm, floor, optimized};
}

/// Maximizes ratio(t, .) over lambda.
///
/// Works in u = log(lambda - 1): a 101-point scan of (1 + 1e-6, 10 sqrt(e + 1/t)],
/// widened x4 while the best sample sits on the upper edge, then golden-section
/// refinement between the neighbours of the best sample. The scan guards
/// against a non-unimodal profile.
template <typename Scalar>
ExtremizerReport<Scalar> optimize_lambda(Scalar t)
{
  detail::require_positive(t, "optimize_lambda");
  constexpr int scan_points = 101;
  constexpr int max_widenings = 40;
  constexpr int max_iterations = 200;

  const auto objective = [t](Scalar u) { return ratio(t, Scalar(1) + std::exp(u)); };
  const Scalar u_lo = std::log(Scalar(extremizer_lambda_floor) - Scalar(1));
  Scalar upper = Scalar(10) * std::sqrt(std::numbers::e_v<Scalar> + Scalar(1) / t);

  Scalar best_u = u_lo, step = 0;
  bool interior = false;
  for (int widen = 0; widen < max_widenings && !interior; ++widen, upper *= Scalar(4))
  {
    const Scalar u_hi = std::log(upper - Scalar(1));
    step = (u_hi - u_lo) / Scalar(scan_points - 1);
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    int best_i = 0;
    for (int i = 0; i < scan_points; ++i)
    {
      const Scalar v = objective(u_lo + step * Scalar(i));
      if (v > best)
      {
        best = v;
        best_i = i;
      }
    }
    best_u = u_lo + step * Scalar(best_i);
    interior = best_i < scan_points - 1;
  }
  if (!interior)
    throw std::runtime_error("optimize_lambda: maximizer not bracketed for t = " +
                             std::to_string(double(t)));

  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar a = std::max(u_lo, best_u - step), b = best_u + step;
  Scalar c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  Scalar fc = objective(c), fd = objective(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > Scalar(1e-12) * std::max(Scalar(1), std::abs(a)); ++it)
  {
    if (fc >= fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  if (it == max_iterations)
    throw std::runtime_error("optimize_lambda: golden-section search hit the iteration cap");

  Scalar lambda = Scalar(1) + std::exp(fc >= fd ? c : d);
  if (t < Scalar(1) / std::numbers::e_v<Scalar>)
  {
    const Scalar fixed = paper_lambda(t);
    if (ratio(t, fixed) > ratio(t, lambda))
      lambda = fixed;
  }
  return extremizer_report(t, lambda, true);
}

/// Ratio (e^{t Delta} g)(0) / ||g||_{H^1} for the profile Fg = e^{-t|xi|^2} (1 + |xi|^2)^{-1}.
///
/// Numerator and squared denominator are computed by separate radial
/// quadratures of their defining integrals, without going through E1, so the
/// result is an independent check on exact_m(t).
template <typename Scalar>
Scalar saturating_profile_ratio(Scalar t, const QuadratureConfig& cfg = {})
{
  detail::require_positive(t, "saturating_profile_ratio");
  cfg.validate();

  // Both integrands are bounded by r e^{-2 t r^2}, whose tail past R is e^{-2tR^2}/(4t).
  Scalar R = std::max(Scalar(1), std::sqrt(Scalar(10) / t));
  if (cfg.truncation.kind == TruncationPolicy::Kind::fixed)
    R = Scalar(cfg.truncation.radius);
  else
    while (std::exp(-Scalar(2) * t * R * R) / (Scalar(4) * t) > Scalar(cfg.abs_tol) / Scalar(10))
      R *= Scalar(1.1);

  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  // (1/2pi) int_{R^2} e^{-t|xi|^2} Fg(xi) dxi, in polar form.
  const auto heat_integrand = [t](Scalar r) {
    return std::exp(-Scalar(2) * t * r * r) / (Scalar(1) + r * r) * r;
  };
  // int_{R^2} (1 + |xi|^2) |Fg(xi)|^2 dxi, in polar form.
  const auto norm_integrand = [t, two_pi](Scalar r) {
    const Scalar weight = Scalar(1) + r * r;
    const Scalar profile = std::exp(-t * r * r) / weight;
    return two_pi * weight * profile * profile * r;
  };
  const Scalar heat = integrate_radial<Scalar>(heat_integrand, R, cfg);
  const Scalar norm_sq = integrate_radial<Scalar>(norm_integrand, R, cfg);
  return heat / std::sqrt(norm_sq);
}

}  // namespace heatnorm
