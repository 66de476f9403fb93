// field.hpp — complex fields on periodic spectral grids: transforms, norms,
// differentiation, quadrature, dealiasing and L2-preserving dilation.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

#include "nlslab/core.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/grid.hpp"

namespace nlslab {

// Default guard values for the periodic truncation of R^N: a field is treated
// as representable while at most kLeakTolerance of its mass sits outside the
// centered box with half-length kCoreFraction * L.
inline constexpr double kCoreFraction = 0.8;
inline constexpr double kLeakTolerance = 1e-8;

class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(const GridSpec& grid) : grid_(grid) {
    grid_.validate();
    values_.assign(grid_.size(), Complex{0.0, 0.0});
  }
  ComplexField(const GridSpec& grid, AlignedComplexVector values)
      : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    require(values_.size() == grid_.size(), "ComplexField: value count must equal M^N");
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  Complex* data() { return values_.data(); }
  const Complex* data() const { return values_.data(); }

  AlignedComplexVector& values() { return values_; }
  const AlignedComplexVector& values() const { return values_; }

  bool all_finite() const {
    for (const auto& z : values_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

 private:
  GridSpec grid_;
  AlignedComplexVector values_;
};

using ProfileRule = std::function<Complex(const std::array<double, 3>&)>;

// Pointwise evaluation of an analytic rule at the grid nodes.
inline ComplexField sample_profile(const GridSpec& grid, const ProfileRule& rule) {
  grid.validate();
  ComplexField out(grid);
  const std::size_t n = out.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    const auto idx = grid.unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int d = 0; d < grid.dimension; ++d)
      x[static_cast<std::size_t>(d)] = grid.coordinate(idx[static_cast<std::size_t>(d)]);
    const Complex z = rule(x);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericError("sample_profile: rule produced a non-finite sample");
    out[flat] = z;
  }
  return out;
}

// 1D convenience overload.
inline ComplexField sample_profile(const GridSpec& grid,
                                   const std::function<Complex(double)>& rule) {
  return sample_profile(grid, [&rule](const std::array<double, 3>& x) { return rule(x[0]); });
}

// ---------------------------------------------------------------------------
// Quadrature and norms (trapezoid = exact for smooth periodic integrands)
// ---------------------------------------------------------------------------

inline double mass(const ComplexField& v) {
  double sum = 0.0;
  for (const auto& z : v.values()) sum += abs2(z);
  return v.grid().cell_volume() * sum;
}

inline double norm_l2(const ComplexField& v) { return std::sqrt(mass(v)); }

// real L2 inner product <a, b> = Re (dx^N sum conj(a) b)
inline double inner_real(const ComplexField& a, const ComplexField& b) {
  require(a.grid() == b.grid(), "inner_real: grid mismatch");
  double sum = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return a.grid().cell_volume() * sum;
}

inline AlignedComplexVector spectrum(const ComplexField& v) {
  AlignedComplexVector hat = v.values();
  fft::forward(v.grid(), hat);
  return hat;
}

// |k|^2 of a flat spectral index
inline double spectral_k2(const GridSpec& grid, std::size_t flat) {
  if (grid.dimension == 1) {
    const double k = grid.wavenumber(flat);
    return k * k;
  }
  const auto idx = grid.unflatten(flat);
  double k2 = 0.0;
  for (int d = 0; d < grid.dimension; ++d) {
    const double k = grid.wavenumber(idx[static_cast<std::size_t>(d)]);
    k2 += k * k;
  }
  return k2;
}

// ||grad v||_2^2 with Plancherel normalization matching mass()
inline double kinetic(const ComplexField& v) {
  const GridSpec& g = v.grid();
  AlignedComplexVector hat = spectrum(v);
  double sum = 0.0;
  if (g.dimension == 1) {
    const std::size_t m = g.points_per_axis;
    for (std::size_t j = 0; j < m; ++j) {
      const double k = g.wavenumber(j);
      sum += k * k * abs2(hat[j]);
    }
  } else {
    for (std::size_t flat = 0; flat < hat.size(); ++flat)
      sum += spectral_k2(g, flat) * abs2(hat[flat]);
  }
  return g.cell_volume() / static_cast<double>(g.size()) * sum;
}

inline ComplexField laplacian(const ComplexField& v) {
  const GridSpec& g = v.grid();
  AlignedComplexVector hat = spectrum(v);
  for (std::size_t flat = 0; flat < hat.size(); ++flat) hat[flat] *= -spectral_k2(g, flat);
  fft::inverse(g, hat);
  return ComplexField(g, std::move(hat));
}

// dx^N sum |x|^2 |v|^2 with centered box coordinates; meaningful only while
// the leak guard holds (non-periodic weight on a periodic grid).
inline double weighted_moment(const ComplexField& v) {
  const GridSpec& g = v.grid();
  double sum = 0.0;
  const std::size_t n = v.size();
  if (g.dimension == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.coordinate(i);
      sum += x * x * abs2(v[i]);
    }
  } else {
    for (std::size_t flat = 0; flat < n; ++flat) {
      const auto idx = g.unflatten(flat);
      double x2 = 0.0;
      for (int d = 0; d < g.dimension; ++d) {
        const double x = g.coordinate(idx[static_cast<std::size_t>(d)]);
        x2 += x * x;
      }
      sum += x2 * abs2(v[flat]);
    }
  }
  return g.cell_volume() * sum;
}

// Fraction of mass outside the centered box of half-length core_fraction * L.
inline double boundary_mass_fraction(const ComplexField& v, double core_fraction) {
  require(core_fraction > 0.0 && core_fraction < 1.0,
          "boundary_mass_fraction: core_fraction must lie in (0,1)");
  const GridSpec& g = v.grid();
  const double cut = core_fraction * g.half_length;
  double outside = 0.0, total = 0.0;
  const std::size_t n = v.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    const double a2 = abs2(v[flat]);
    total += a2;
    if (g.dimension == 1) {
      if (std::abs(g.coordinate(flat)) > cut) outside += a2;
    } else {
      const auto idx = g.unflatten(flat);
      bool out = false;
      for (int d = 0; d < g.dimension; ++d)
        if (std::abs(g.coordinate(idx[static_cast<std::size_t>(d)])) > cut) out = true;
      if (out) outside += a2;
    }
  }
  if (total == 0.0) return 0.0;
  return outside / total;
}

// ---------------------------------------------------------------------------
// Dealiasing (2/3 rule) and the spectral resolution guard
// ---------------------------------------------------------------------------

namespace detail {

// keep |signed index| <= M/3 per axis
inline bool mode_kept(const GridSpec& g, std::size_t flat) {
  const long cut = static_cast<long>(g.points_per_axis / 3);
  if (g.dimension == 1) return std::abs(g.signed_index(flat)) <= cut;
  const auto idx = g.unflatten(flat);
  for (int d = 0; d < g.dimension; ++d)
    if (std::abs(g.signed_index(idx[static_cast<std::size_t>(d)])) > cut) return false;
  return true;
}

}  // namespace detail

// Spectral truncation to the 2/3 band; applied before evaluating nonlinear terms.
inline ComplexField dealias(const ComplexField& v) {
  const GridSpec& g = v.grid();
  AlignedComplexVector hat = spectrum(v);
  for (std::size_t flat = 0; flat < hat.size(); ++flat)
    if (!detail::mode_kept(g, flat)) hat[flat] = Complex{0.0, 0.0};
  fft::inverse(g, hat);
  return ComplexField(g, std::move(hat));
}

// Fraction of |v_hat|^2 carried by modes the 2/3 rule discards. Used as the
// resolution-validity guard along trajectories.
inline double spectral_tail_fraction(const ComplexField& v) {
  const GridSpec& g = v.grid();
  AlignedComplexVector hat = spectrum(v);
  double tail = 0.0, total = 0.0;
  for (std::size_t flat = 0; flat < hat.size(); ++flat) {
    const double a2 = abs2(hat[flat]);
    total += a2;
    if (!detail::mode_kept(g, flat)) tail += a2;
  }
  if (total == 0.0) return 0.0;
  return tail / total;
}

// ---------------------------------------------------------------------------
// L2-preserving dilation v^lambda(x) = lambda^{N/2} v(lambda x), evaluated by
// trigonometric interpolation: zero-pad the line spectrum 4x, then 8-point
// Lagrange interpolation on the fine grid at the stretched nodes.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::size_t kResamplePad = 4;
inline constexpr int kResampleStencil = 8;  // 8-point Lagrange

// Resample one periodic line of length m at positions lambda * x_i.
// in/out may not alias. Scratch is a buffer of length pad*m.
inline void resample_line(const Complex* in, std::size_t stride, std::size_t m, double lambda,
                          AlignedComplexVector& fine, Complex* out, std::size_t out_stride) {
  const std::size_t p = kResamplePad * m;
  // spectrum of the line
  AlignedComplexVector line(m);
  for (std::size_t i = 0; i < m; ++i) line[i] = in[i * stride];
  fft::forward_1d(m, line.data());
  // zero-padded spectrum; split the Nyquist mode symmetrically
  std::fill(fine.begin(), fine.end(), Complex{0.0, 0.0});
  for (std::size_t j = 0; j < m / 2; ++j) fine[j] = line[j];
  for (std::size_t j = m / 2 + 1; j < m; ++j) fine[p - m + j] = line[j];
  fine[m / 2] = 0.5 * line[m / 2];
  fine[p - m / 2] = 0.5 * line[m / 2];
  fft::inverse_1d(p, fine.data());
  const double up = static_cast<double>(kResamplePad);
  // evaluate at stretched nodes: fine grid has spacing dx/pad on [-L, L)
  const double pd = static_cast<double>(p);
  for (std::size_t i = 0; i < m; ++i) {
    // target position in fine-grid index units
    const double s = static_cast<double>(i) * up * lambda +
                     (1.0 - lambda) * 0.5 * pd;  // (x_i*lambda + L)/dx_fine
    if (s < 0.0 || s >= pd) {
      // lambda x falls outside the box; the principal-branch value is below
      // the leak tolerance there, and wrapping would plant spurious copies
      out[i * out_stride] = Complex{0.0, 0.0};
      continue;
    }
    const auto base = static_cast<long>(std::floor(s));
    const double frac = s - static_cast<double>(base);
    Complex acc{0.0, 0.0};
    if (frac < 1e-13) {
      acc = up * fine[static_cast<std::size_t>(base) % p];
    } else if (frac > 1.0 - 1e-13) {
      acc = up * fine[static_cast<std::size_t>(base + 1) % p];
    } else {
      // Lagrange nodes at offsets -3..4 around base
      for (int t = -3; t <= 4; ++t) {
        double w = 1.0;
        for (int s2 = -3; s2 <= 4; ++s2) {
          if (s2 == t) continue;
          w *= (frac - static_cast<double>(s2)) / static_cast<double>(t - s2);
        }
        long j = (base + t) % static_cast<long>(p);
        if (j < 0) j += static_cast<long>(p);
        acc += w * fine[static_cast<std::size_t>(j)];
      }
      acc *= up;
    }
    out[i * out_stride] = acc;
  }
}

}  // namespace detail

// Returns lambda^{N/2} v(lambda x). Throws TruncationError when the stretched
// field is not representable on the box (leak guard).
inline ComplexField rescale(const ComplexField& v, double lambda,
                            double leak_tol = kLeakTolerance) {
  require(std::isfinite(lambda) && lambda > 0.0, "rescale: lambda must be positive");
  if (lambda == 1.0) return v;
  if (lambda > 1.0) {
    const double frac = boundary_mass_fraction(v, 1.0 / lambda);
    if (frac > leak_tol)
      throw TruncationError("rescale: boundary mass fraction " + std::to_string(frac) +
                            " exceeds leak tolerance at core fraction 1/lambda");
  }
  const GridSpec& g = v.grid();
  const std::size_t m = g.points_per_axis;
  ComplexField cur = v;
  ComplexField next(g);
  AlignedComplexVector fine(detail::kResamplePad * m);
  // axis-by-axis 1D passes (the dilation is separable)
  for (int axis = 0; axis < g.dimension; ++axis) {
    std::size_t stride = 1;
    for (int d = g.dimension - 1; d > axis; --d) stride *= m;
    const std::size_t lines = g.size() / m;
    for (std::size_t l = 0; l < lines; ++l) {
      // flat index of the first element of line l along `axis`
      const std::size_t block = stride * m;
      const std::size_t outer = l / stride;
      const std::size_t inner = l % stride;
      const std::size_t start = outer * block + inner;
      detail::resample_line(cur.data() + start, stride, m, lambda, fine, next.data() + start,
                            stride);
    }
    std::swap(cur, next);
  }
  const double amp = std::pow(lambda, 0.5 * static_cast<double>(g.dimension));
  for (auto& z : cur.values()) z *= amp;
  return cur;
}

// ---------------------------------------------------------------------------
// Small helpers used across modules and tests
// ---------------------------------------------------------------------------

inline ComplexField scaled(const ComplexField& v, Complex factor) {
  ComplexField out = v;
  for (auto& z : out.values()) z *= factor;
  return out;
}

inline ComplexField difference(const ComplexField& a, const ComplexField& b) {
  require(a.grid() == b.grid(), "difference: grid mismatch");
  ComplexField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

inline double sup_distance(const ComplexField& a, const ComplexField& b) {
  require(a.grid() == b.grid(), "sup_distance: grid mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// grid surrogate of the H^1 distance
inline double h1_distance(const ComplexField& a, const ComplexField& b) {
  const ComplexField d = difference(a, b);
  return std::sqrt(mass(d) + kinetic(d));
}

}  // namespace nlslab
