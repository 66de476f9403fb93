// grid.hpp — periodic spectral grid on [-L, L)^N.

#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>

#include "nlslab/core.hpp"

namespace nlslab {

// Uniform periodic grid: box [-L, L) per axis, M points per axis (power of
// two), row-major storage over axes. Wavenumbers follow the standard FFT
// ordering, k_j = (pi/L) * j with j in [-M/2, M/2).
struct GridSpec {
  int dimension = 1;            // N in {1,2,3}
  double half_length = 20.0;    // L
  std::size_t points_per_axis = 4096;  // M, power of two

  void validate() const {
    require(dimension >= 1 && dimension <= 3, "GridSpec: dimension must be 1, 2 or 3");
    require(half_length > 0.0 && std::isfinite(half_length),
            "GridSpec: half_length must be positive");
    require(is_power_of_two(points_per_axis) && points_per_axis >= 8,
            "GridSpec: points_per_axis must be a power of two >= 8");
    // total point count must fit the address space
    std::size_t total = 1;
    for (int d = 0; d < dimension; ++d) {
      require(total <= std::numeric_limits<std::size_t>::max() / points_per_axis,
              "GridSpec: point count overflows");
      total *= points_per_axis;
    }
  }

  double spacing() const { return 2.0 * half_length / static_cast<double>(points_per_axis); }

  std::size_t size() const {
    std::size_t total = 1;
    for (int d = 0; d < dimension; ++d) total *= points_per_axis;
    return total;
  }

  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dimension; ++d) v *= spacing();
    return v;
  }

  // coordinate of index i along one axis: x_i = -L + i*dx
  double coordinate(std::size_t i) const { return -half_length + static_cast<double>(i) * spacing(); }

  // signed FFT index: i < M/2 -> i, else i - M
  long signed_index(std::size_t i) const {
    const std::size_t m = points_per_axis;
    return i < m / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m);
  }

  // wavenumber of FFT index i along one axis
  double wavenumber(std::size_t i) const {
    return std::numbers::pi / half_length * static_cast<double>(signed_index(i));
  }

  double max_wavenumber() const {
    return std::numbers::pi / half_length * static_cast<double>(points_per_axis / 2);
  }

  // decompose a flat row-major index into per-axis indices
  std::array<std::size_t, 3> unflatten(std::size_t flat) const {
    std::array<std::size_t, 3> idx{0, 0, 0};
    for (int d = dimension - 1; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = flat % points_per_axis;
      flat /= points_per_axis;
    }
    return idx;
  }

  bool operator==(const GridSpec&) const = default;
};

}  // namespace nlslab
