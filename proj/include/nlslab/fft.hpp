// fft.hpp — thin FFTW3 wrapper with a process-wide plan cache.
//
// Plans are created once per (rank, size, direction) with FFTW_ESTIMATE on
// 64-byte aligned scratch buffers and then executed on caller arrays via the
// new-array interface. FFTW_ESTIMATE keeps planning deterministic, which the
// reproducibility contract of the experiment layer relies on.

#pragma once

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "nlslab/core.hpp"
#include "nlslab/grid.hpp"

namespace nlslab::fft {

namespace detail {

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  // In-place c2c plan for `rank` axes of length `n` each.
  fftw_plan get(int rank, std::size_t n, int sign) {
    const Key key{rank, n, sign};
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    AlignedComplexVector scratch;
    std::size_t total = 1;
    for (int d = 0; d < rank; ++d) total *= n;
    scratch.resize(total);
    int dims[3] = {static_cast<int>(n), static_cast<int>(n), static_cast<int>(n)};
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(rank, dims, buf, buf, sign, FFTW_ESTIMATE);
    if (!plan) throw NumericError("fft: planner failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::tuple<int, std::size_t, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;

  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }
};

inline void execute(int rank, std::size_t n, int sign, Complex* data) {
  fftw_plan plan = PlanCache::instance().get(rank, n, sign);
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);  // thread-safe for distinct arrays
}

}  // namespace detail

// Unnormalized forward transform, in place.
inline void forward(const GridSpec& grid, AlignedComplexVector& data) {
  detail::execute(grid.dimension, grid.points_per_axis, FFTW_FORWARD, data.data());
}

// Inverse transform, in place, normalized by 1/M^N.
inline void inverse(const GridSpec& grid, AlignedComplexVector& data) {
  detail::execute(grid.dimension, grid.points_per_axis, FFTW_BACKWARD, data.data());
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : data) z *= scale;
}

// 1D helpers for arbitrary power-of-two lengths (used by the resampling code).
inline void forward_1d(std::size_t n, Complex* data) { detail::execute(1, n, FFTW_FORWARD, data); }

inline void inverse_1d(std::size_t n, Complex* data) {
  detail::execute(1, n, FFTW_BACKWARD, data);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

}  // namespace nlslab::fft
