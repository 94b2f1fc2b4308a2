#pragma once

// Discrete spectral harness on a periodic N x N grid standing in for R^2.
//
// Transforms follow the symmetric convention
//   (F f)(xi) = (1/2pi) int e^{-i x.xi} f(x) dx,
//   (F^{-1} g)(x) = (1/2pi) int e^{i x.xi} g(xi) dxi,
// discretized with weight h^2 (h = L/N) in physical space and dk^2
// (dk = 2pi/L) in frequency space. Physical samples sit at x = -L/2 + j h,
// frequencies at (p - N/2) dk, both stored centered and row-major.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "heatnorm/sharp_constant.hpp"
#include "heatnorm/specfun.hpp"

namespace heatnorm
{

template <typename Scalar = double>
class SpectralGrid
{
 public:
  SpectralGrid(int points_per_axis, Scalar domain_length)
      : n_(points_per_axis), length_(domain_length)
  {
    if (n_ < 8 || (n_ & (n_ - 1)) != 0)
      throw std::domain_error("SpectralGrid: points per axis must be a power of two >= 8, got " +
                              std::to_string(n_));
    detail::require_positive(length_, "SpectralGrid domain length");
  }

  int points() const { return n_; }
  Scalar length() const { return length_; }
  Scalar spacing() const { return length_ / Scalar(n_); }
  Scalar frequency_step() const { return Scalar(2) * std::numbers::pi_v<Scalar> / length_; }
  Scalar nyquist() const { return std::numbers::pi_v<Scalar> * Scalar(n_) / length_; }
  Scalar coordinate(int i) const { return -length_ / Scalar(2) + Scalar(i) * spacing(); }
  Scalar frequency(int i) const { return Scalar(i - n_ / 2) * frequency_step(); }

  /// |xi|^2 at every spectral sample.
  Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> frequency_sq() const
  {
    Eigen::Array<Scalar, Eigen::Dynamic, 1> k(n_);
    for (int i = 0; i < n_; ++i)
      k(i) = frequency(i) * frequency(i);
    return k.replicate(1, n_) + k.transpose().replicate(n_, 1);
  }

  bool operator==(const SpectralGrid& other) const
  {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  int n_;
  Scalar length_;
};

enum class Representation
{
  physical,
  spectral
};

template <typename Scalar = double>
class GridField
{
 public:
  using Complex = std::complex<Scalar>;
  using Values = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  GridField(SpectralGrid<Scalar> grid, Values values, Representation rep)
      : grid_(grid), values_(std::move(values)), rep_(rep)
  {
    if (values_.rows() != grid_.points() || values_.cols() != grid_.points())
      throw std::invalid_argument("GridField: value array does not match the grid");
  }

  const SpectralGrid<Scalar>& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Representation representation() const { return rep_; }
  bool is_physical() const { return rep_ == Representation::physical; }

 private:
  SpectralGrid<Scalar> grid_;
  Values values_;
  Representation rep_;
};

namespace detail
{

// Multiplies sample (i, j) by (-1)^{i+j}, which recentres the DFT on index N/2.
template <typename Values>
void checkerboard(Values& v)
{
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = (i % 2 == 0) ? 1 : 0; j < v.cols(); j += 2)
      v(i, j) = -v(i, j);
}

template <typename Scalar, typename Values>
void fft2(Values& v, bool forward)
{
  using Complex = std::complex<Scalar>;
  Eigen::FFT<Scalar> fft;
  fft.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  const Eigen::Index n = v.rows();
  std::vector<Complex> in(n), out(n);
  const auto pass = [&](auto&& get, auto&& set) {
    for (Eigen::Index line = 0; line < n; ++line)
    {
      for (Eigen::Index k = 0; k < n; ++k)
        in[k] = get(line, k);
      if (forward)
        fft.fwd(out.data(), in.data(), n);
      else
        fft.inv(out.data(), in.data(), n);
      for (Eigen::Index k = 0; k < n; ++k)
        set(line, k, out[k]);
    }
  };
  pass([&](auto r, auto c) { return v(r, c); }, [&](auto r, auto c, Complex x) { v(r, c) = x; });
  pass([&](auto c, auto r) { return v(r, c); }, [&](auto c, auto r, Complex x) { v(r, c) = x; });
}

template <typename Scalar>
void require_same_grid(const GridField<Scalar>& a, const GridField<Scalar>& b)
{
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("grid fields live on different grids");
}

}  // namespace detail

/// Discrete (F f) on the centered frequency lattice.
template <typename Scalar>
GridField<Scalar> to_spectral(const GridField<Scalar>& field)
{
  if (!field.is_physical())
    throw std::invalid_argument("to_spectral: field is already spectral");
  const auto& g = field.grid();
  auto v = field.values();
  detail::checkerboard(v);
  detail::fft2<Scalar>(v, true);
  detail::checkerboard(v);
  v *= g.spacing() * g.spacing() / (Scalar(2) * std::numbers::pi_v<Scalar>);
  return {g, std::move(v), Representation::spectral};
}

template <typename Scalar>
GridField<Scalar> to_physical(const GridField<Scalar>& field)
{
  if (field.is_physical())
    throw std::invalid_argument("to_physical: field is already physical");
  const auto& g = field.grid();
  auto v = field.values();
  detail::checkerboard(v);
  detail::fft2<Scalar>(v, false);
  detail::checkerboard(v);
  v *= g.frequency_step() * g.frequency_step() / (Scalar(2) * std::numbers::pi_v<Scalar>);
  return {g, std::move(v), Representation::physical};
}

template <typename Scalar>
GridField<Scalar> as_spectral(const GridField<Scalar>& field)
{
  return field.is_physical() ? to_spectral(field) : field;
}

template <typename Scalar>
GridField<Scalar> as_physical(const GridField<Scalar>& field)
{
  return field.is_physical() ? field : to_physical(field);
}

/// Discrete L^2 norm, using the quadrature weight of the field's representation.
template <typename Scalar>
Scalar l2_norm(const GridField<Scalar>& field)
{
  const auto& g = field.grid();
  const Scalar w = field.is_physical() ? g.spacing() : g.frequency_step();
  return w * std::sqrt(field.values().abs2().sum());
}

/// e^{t Delta} as the multiplier e^{-t |xi|^2}; the result keeps the input's representation.
template <typename Scalar>
GridField<Scalar> heat_apply(const GridField<Scalar>& field, Scalar t)
{
  if (!(t >= Scalar(0)) || !std::isfinite(t))
    throw std::domain_error("heat_apply: t must be finite and >= 0");
  const auto spec = as_spectral(field);
  typename GridField<Scalar>::Values v =
      spec.values() * (-t * spec.grid().frequency_sq()).exp().template cast<std::complex<Scalar>>();
  GridField<Scalar> out(spec.grid(), std::move(v), Representation::spectral);
  return field.is_physical() ? to_physical(out) : out;
}

/// (int (1 + |xi|^2)^s |F f|^2 dxi)^{1/2} by lattice quadrature.
template <typename Scalar>
Scalar sobolev_norm(const GridField<Scalar>& field, Scalar s)
{
  if (!(s >= Scalar(0)) || !std::isfinite(s))
    throw std::domain_error("sobolev_norm: s must be finite and >= 0");
  const auto spec = as_spectral(field);
  const Scalar dk = spec.grid().frequency_step();
  const Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> weight =
      (Scalar(1) + spec.grid().frequency_sq()).pow(s);
  return dk * std::sqrt((weight * spec.values().abs2()).sum());
}

/// Largest |f| over the grid samples. This is a lower bound for the
/// continuum sup norm, since off-grid maxima are missed.
template <typename Scalar>
Scalar sup_norm(const GridField<Scalar>& field)
{
  if (!field.is_physical())
    throw std::invalid_argument("sup_norm: field must be in physical representation");
  return field.values().abs().maxCoeff();
}

template <typename Scalar = double>
struct RatioReport
{
  Scalar ratio;
  Scalar exact_m;
  Scalar margin;  ///< exact_m - ratio
  bool within_bound;
};

/// sup|e^{t Delta} f| / ||f||_{H^1} against M(t), allowing a relative
/// discretization slack of `tol`.
template <typename Scalar>
RatioReport<Scalar> ratio_check(const GridField<Scalar>& field, Scalar t, Scalar tol = Scalar(1e-3))
{
  detail::require_positive(t, "ratio_check");
  const Scalar h1 = sobolev_norm(field, Scalar(1));
  if (!(h1 > Scalar(0)))
    throw std::invalid_argument("ratio_check: zero field");
  const Scalar sup = sup_norm(as_physical(heat_apply(field, t)));
  const Scalar r = sup / h1;
  const Scalar m = exact_m(t);
  return {r, m, m - r, r <= m * (Scalar(1) + tol)};
}

/// Complex Gaussian spectrum supported on |xi| <= max_freq; deterministic per seed.
template <typename Scalar = double>
GridField<Scalar> random_band_limited(std::uint64_t seed, const SpectralGrid<Scalar>& grid,
                                      Scalar max_freq)
{
  if (!(max_freq > Scalar(0)) || max_freq > grid.nyquist() / Scalar(2))
    throw std::domain_error("random_band_limited: max_freq must lie in (0, nyquist/2]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid.points();
  typename GridField<Scalar>::Values v = GridField<Scalar>::Values::Zero(n, n);
  const Scalar cutoff = max_freq * max_freq;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
    {
      const Scalar kx = grid.frequency(i), ky = grid.frequency(j);
      if (kx * kx + ky * ky <= cutoff)
      {
        const Scalar re = Scalar(normal(rng));
        const Scalar im = Scalar(normal(rng));
        v(i, j) = {re, im};
      }
    }
  return {grid, std::move(v), Representation::spectral};
}

/// e^{-|x|^2/2}, which the symmetric transform maps to e^{-|xi|^2/2}.
template <typename Scalar = double>
GridField<Scalar> gaussian_field(const SpectralGrid<Scalar>& grid)
{
  const int n = grid.points();
  typename GridField<Scalar>::Values v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
    {
      const Scalar x = grid.coordinate(i), y = grid.coordinate(j);
      v(i, j) = std::exp(-(x * x + y * y) / Scalar(2));
    }
  return {grid, std::move(v), Representation::physical};
}

/// Spectrum e^{-t|xi|^2} / (1 + |xi|^2), for which the Cauchy-Schwarz step
/// behind exact_m(t) is an equality.
template <typename Scalar = double>
GridField<Scalar> saturating_field(const SpectralGrid<Scalar>& grid, Scalar t)
{
  detail::require_positive(t, "saturating_field");
  const auto k2 = grid.frequency_sq();
  typename GridField<Scalar>::Values v = ((-t * k2).exp() / (Scalar(1) + k2)).template cast<std::complex<Scalar>>();
  return {grid, std::move(v), Representation::spectral};
}

/// Spectrum |xi|^{-2} on the annulus 1 < |xi| < lambda.
template <typename Scalar = double>
GridField<Scalar> annular_field(const SpectralGrid<Scalar>& grid, Scalar lambda)
{
  if (!(lambda > Scalar(1)))
    throw std::domain_error("annular_field: lambda must be > 1");
  const auto k2 = grid.frequency_sq();
  const Scalar outer = lambda * lambda;
  typename GridField<Scalar>::Values v =
      ((k2 > Scalar(1)) && (k2 < outer)).select(k2.inverse(), Scalar(0)).template cast<std::complex<Scalar>>();
  return {grid, std::move(v), Representation::spectral};
}

/// | ||F f|| - ||f|| | / ||f||.
template <typename Scalar>
Scalar plancherel_error(const GridField<Scalar>& field)
{
  const auto phys = as_physical(field);
  const Scalar a = l2_norm(phys);
  const Scalar b = l2_norm(to_spectral(phys));
  return std::abs(a - b) / a;
}

/// || e^{t1 D} e^{t2 D} f - e^{(t1+t2) D} f || / ||f||, measured in physical space.
template <typename Scalar>
Scalar semigroup_error(const GridField<Scalar>& field, Scalar t1, Scalar t2)
{
  const auto phys = as_physical(field);
  const auto composed = heat_apply(heat_apply(phys, t2), t1);
  const auto direct = heat_apply(phys, t1 + t2);
  const GridField<Scalar> diff(phys.grid(), composed.values() - direct.values(),
                               Representation::physical);
  return l2_norm(diff) / l2_norm(phys);
}

/// Relative L^2 residual of f - [e^{t D} f - int_0^t D e^{tau D} f dtau], with the
/// tau-integral done by composite Simpson over n_quad panels, mode by mode.
template <typename Scalar>
Scalar decomposition_residual(const GridField<Scalar>& field, Scalar t, int n_quad)
{
  detail::require_positive(t, "decomposition_residual");
  if (n_quad < 2)
    throw std::domain_error("decomposition_residual: n_quad must be >= 2");
  const auto spec = as_spectral(field);
  const auto k2 = spec.grid().frequency_sq();
  const Scalar norm = std::sqrt(spec.values().abs2().sum());
  if (!(norm > Scalar(0)))
    throw std::invalid_argument("decomposition_residual: zero field");

  const int nodes = 2 * n_quad + 1;
  const Scalar h = t / Scalar(2 * n_quad);
  Scalar residual_sq(0);
  for (Eigen::Index i = 0; i < k2.rows(); ++i)
    for (Eigen::Index j = 0; j < k2.cols(); ++j)
    {
      const Scalar a2 = std::norm(spec.values()(i, j));
      if (a2 == Scalar(0))
        continue;
      const Scalar kappa = k2(i, j);
      // -Delta e^{tau Delta} has multiplier kappa e^{-tau kappa}; walk tau geometrically.
      const Scalar step = std::exp(-h * kappa);
      Scalar decay(1), simpson(0);
      for (int m = 0; m < nodes; ++m)
      {
        const Scalar w = (m == 0 || m == nodes - 1) ? Scalar(1) : (m % 2 == 1 ? Scalar(4) : Scalar(2));
        simpson += w * decay;
        decay *= step;
      }
      simpson *= kappa * h / Scalar(3);
      const Scalar multiplier = std::exp(-t * kappa) + simpson;
      residual_sq += (multiplier - Scalar(1)) * (multiplier - Scalar(1)) * a2;
    }
  return std::sqrt(residual_sq) / norm;
}

}  // namespace heatnorm
