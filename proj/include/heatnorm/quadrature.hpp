#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatnorm/specfun.hpp"

namespace heatnorm
{

class QuadratureError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// How the semi-infinite radial integrals are cut off.
struct TruncationPolicy
{
  enum class Kind
  {
    automatic,
    fixed
  };
  Kind kind = Kind::automatic;
  double radius = 0.0;

  static TruncationPolicy automatic() { return {}; }
  static TruncationPolicy fixed(double r) { return {Kind::fixed, r}; }
};

struct QuadratureConfig
{
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  int max_subdivisions = 2000;
  TruncationPolicy truncation = TruncationPolicy::automatic();

  void validate() const
  {
    Accuracy{abs_tol, rel_tol}.validate();
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::domain_error("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 10)
      throw std::domain_error("QuadratureConfig: max_subdivisions must be >= 10");
    if (truncation.kind == TruncationPolicy::Kind::fixed && !(truncation.radius > 0.0))
      throw std::domain_error("QuadratureConfig: fixed truncation radius must be positive");
  }
};

template <typename Scalar = double>
struct QuadratureResult
{
  Scalar value;
  Scalar error;
  int subdivisions;
};

namespace detail
{

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kronrod15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod15_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Panel
{
  Scalar a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> gauss_kronrod15(F& f, Scalar a, Scalar b)
{
  const Scalar center = (a + b) / Scalar(2);
  const Scalar half = (b - a) / Scalar(2);
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(kronrod15_weights[7]);
  Scalar gauss = fc * Scalar(gauss7_weights[3]);
  for (int j = 0; j < 7; ++j)
  {
    const Scalar dx = half * Scalar(kronrod15_nodes[j]);
    const Scalar pair = f(center - dx) + f(center + dx);
    kronrod += Scalar(kronrod15_weights[j]) * pair;
    if (j % 2 == 1)
      gauss += Scalar(gauss7_weights[j / 2]) * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over the union of consecutive panels [breakpoints[i], breakpoints[i+1]]
/// until the summed |K15 - G7| estimate drops below max(abs_tol, rel_tol * |value|).
/// The rule is open, so f is never evaluated at a breakpoint. Throws
/// QuadratureError when max_subdivisions is exhausted.
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(F&& f, std::span<const Scalar> breakpoints,
                                   const QuadratureConfig& cfg = {})
{
  cfg.validate();
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate: need at least two breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i)
  {
    if (!std::isfinite(breakpoints[i]))
      throw std::domain_error("integrate: breakpoints must be finite");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
      throw std::invalid_argument("integrate: breakpoints must be strictly increasing");
  }

  std::priority_queue<detail::Panel<Scalar>> panels;
  Scalar total(0), error(0);
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
  {
    const auto panel = detail::gauss_kronrod15<Scalar>(f, breakpoints[i - 1], breakpoints[i]);
    total += panel.value;
    error += panel.error;
    panels.push(panel);
  }
  int subdivisions = static_cast<int>(panels.size());

  const auto converged = [&] {
    return error <= std::max(Scalar(cfg.abs_tol), Scalar(cfg.rel_tol) * std::abs(total));
  };

  while (!converged())
  {
    if (subdivisions >= cfg.max_subdivisions)
      throw QuadratureError("integrate: no convergence on [" + std::to_string(double(breakpoints.front())) +
                            ", " + std::to_string(double(breakpoints.back())) + "] after " +
                            std::to_string(subdivisions) + " subdivisions (error estimate " +
                            std::to_string(double(error)) + ")");
    const auto worst = panels.top();
    panels.pop();
    const Scalar mid = (worst.a + worst.b) / Scalar(2);
    if (!(mid > worst.a && mid < worst.b))
      throw QuadratureError("integrate: interval collapsed below machine resolution");
    const auto left = detail::gauss_kronrod15<Scalar>(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15<Scalar>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }

  // Re-sum to shed the drift accumulated by the incremental updates.
  Scalar value(0), err(0);
  while (!panels.empty())
  {
    value += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {value, err, subdivisions};
}

template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate(F&& f, Scalar a, Scalar b, const QuadratureConfig& cfg = {})
{
  if (a == b)
    return {Scalar(0), Scalar(0), 0};
  if (b < a)
  {
    auto flipped = integrate<Scalar>(f, b, a, cfg);
    flipped.value = -flipped.value;
    return flipped;
  }
  const std::array<Scalar, 2> ends = {a, b};
  return integrate<Scalar>(f, std::span<const Scalar>(ends), cfg);
}

}  // namespace heatnorm
