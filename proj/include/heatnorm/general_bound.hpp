#pragma once

// L^inf bounds for e^{t Delta} on the Bessel-potential spaces H^{s,q}(R^n),
// 1 <= q <= 2: the exact radial kernel-norm coefficient and its closed-form
// logarithmic majorant in the critical case s = n/q.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatnorm/quadrature.hpp"
#include "heatnorm/specfun.hpp"

namespace heatnorm
{

template <typename Scalar = double>
struct EmbeddingParams
{
  int n = 2;
  Scalar q = 2;
  Scalar s = 1;

  bool valid() const { return n >= 1 && q >= Scalar(1) && q <= Scalar(2) && std::isfinite(s); }
  bool critical() const { return std::abs(s * q - Scalar(n)) <= Scalar(1e-14) * Scalar(n); }

  void validate() const
  {
    if (!valid())
      throw std::domain_error("EmbeddingParams: need n >= 1, 1 <= q <= 2 and finite s (got n=" +
                              std::to_string(n) + ", q=" + std::to_string(double(q)) +
                              ", s=" + std::to_string(double(s)) + ")");
  }

  static EmbeddingParams critical_for(int n, Scalar q) { return {n, q, Scalar(n) / q}; }
};

namespace detail
{

// Upper bound for int_R^inf r^m e^{-c r^2} dr, R >= 1.
template <typename Scalar>
Scalar gaussian_moment_tail(Scalar m, Scalar c, Scalar R)
{
  const Scalar x = c * R * R;
  if (m <= Scalar(1))
    return std::pow(R, m - Scalar(1)) * std::exp(-x) / (Scalar(2) * c);
  // Gamma(a, x) <= x^{a-1} e^{-x} / (1 - (a-1)/x) for x > a - 1.
  const Scalar a = (m + Scalar(1)) / Scalar(2);
  if (!(x > Scalar(2) * (a - Scalar(1))))
    return std::numeric_limits<Scalar>::infinity();
  const Scalar upper_gamma = std::pow(x, a - Scalar(1)) * std::exp(-x) * Scalar(2);
  return upper_gamma / (Scalar(2) * std::pow(c, a));
}

// Upper bound for the part of the radial integral beyond R >= 1.
template <typename Scalar>
Scalar radial_tail_bound(const EmbeddingParams<Scalar>& p, Scalar t, Scalar R)
{
  const Scalar sq = p.s * p.q;
  const Scalar m = Scalar(p.n - 1) - sq;
  const Scalar growth = sq >= Scalar(0) ? Scalar(1) : std::pow(Scalar(2), -sq / Scalar(2));
  return growth * gaussian_moment_tail(m, p.q * t, R);
}

template <typename Scalar>
Scalar truncation_radius(const EmbeddingParams<Scalar>& p, Scalar t, const QuadratureConfig& cfg)
{
  if (cfg.truncation.kind == TruncationPolicy::Kind::fixed)
    return Scalar(cfg.truncation.radius);
  const Scalar c = p.q * t;
  Scalar R = std::max(Scalar(1), std::sqrt(Scalar(20) / c));
  for (int i = 0; i < 200 && !(radial_tail_bound(p, t, R) < Scalar(cfg.abs_tol) / Scalar(10)); ++i)
    R *= Scalar(1.1);
  return R;
}

}  // namespace detail

/// Integrates f over [0, R] with dyadic breakpoints 1, 2, 4, ... so that the
/// slowly decaying stretches of radial integrands stay resolved.
template <typename Scalar, typename F>
Scalar integrate_radial(F&& f, Scalar R, const QuadratureConfig& cfg)
{
  detail::require_positive(R, "integrate_radial");
  std::vector<Scalar> breaks{Scalar(0)};
  for (Scalar b = Scalar(1); b < R; b *= Scalar(2))
    breaks.push_back(b);
  breaks.push_back(R);
  return integrate<Scalar>(f, std::span<const Scalar>(breaks), cfg).value;
}

/// int_0^inf r^{n-1} e^{-q t r^2} (1 + r^2)^{-s q / 2} dr, truncated at the
/// configured radius.
template <typename Scalar>
Scalar radial_integral(const EmbeddingParams<Scalar>& p, Scalar t, const QuadratureConfig& cfg = {})
{
  p.validate();
  detail::require_positive(t, "radial_integral");
  cfg.validate();

  const Scalar c = p.q * t;
  const Scalar half_sq = p.s * p.q / Scalar(2);
  const int power = p.n - 1;
  auto integrand = [&](Scalar r) {
    const Scalar r2 = r * r;
    return std::pow(r, power) * std::exp(-c * r2 - half_sq * std::log1p(r2));
  };

  return integrate_radial<Scalar>(integrand, detail::truncation_radius(p, t, cfg), cfg);
}

/// { omega_{n-1} / (2 pi)^n * radial_integral }^{1/q}: the coefficient in
/// ||e^{t Delta} f||_inf <= coeff * ||f||_{H^{s,q}}.
template <typename Scalar>
Scalar kernel_norm(const EmbeddingParams<Scalar>& p, Scalar t, const QuadratureConfig& cfg = {})
{
  const Scalar integral = radial_integral(p, t, cfg);
  const Scalar weight =
      unit_sphere_area<Scalar>(p.n) / std::pow(Scalar(2) * std::numbers::pi_v<Scalar>, p.n);
  return std::pow(weight * integral, Scalar(1) / p.q);
}

/// [2 log(e + 1/t) / ((4 pi)^{n/2} Gamma(n/2)) * {e^{-1/2} + (e/(2q))^{n/2}/n}]^{1/q}.
template <typename Scalar>
Scalar critical_log_bound(int n, Scalar q, Scalar t)
{
  if (n < 1)
    throw std::domain_error("critical_log_bound: n must be >= 1");
  EmbeddingParams<Scalar>::critical_for(n, q).validate();
  detail::require_positive(t, "critical_log_bound");
  constexpr Scalar e = std::numbers::e_v<Scalar>;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar half_n = Scalar(n) / Scalar(2);
  const Scalar bracket = Scalar(1) / std::sqrt(e) + std::pow(e / (Scalar(2) * q), half_n) / Scalar(n);
  const Scalar base = Scalar(2) * std::log(e + Scalar(1) / t) /
                      (std::pow(Scalar(4) * pi, half_n) * gamma_fn(half_n)) * bracket;
  return std::pow(base, Scalar(1) / q);
}

template <typename Scalar = double>
struct CriticalSplit
{
  Scalar tail;  ///< bound for the radial integral over r > sqrt(a)
  Scalar head;  ///< bound for the radial integral over r < sqrt(a)
  Scalar a;
};

/// The two pieces of the critical-case estimate, split at r = sqrt(a) with a = e/(2q).
template <typename Scalar>
CriticalSplit<Scalar> critical_split_terms(int n, Scalar q, Scalar t)
{
  if (n < 1)
    throw std::domain_error("critical_split_terms: n must be >= 1");
  EmbeddingParams<Scalar>::critical_for(n, q).validate();
  detail::require_positive(t, "critical_split_terms");
  const Scalar a = std::numbers::e_v<Scalar> / (Scalar(2) * q);
  return {exp_integral_e1(a * q * t) / Scalar(2), std::pow(a, Scalar(n) / Scalar(2)) / Scalar(n), a};
}

}  // namespace heatnorm
