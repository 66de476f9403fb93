// core.hpp — shared error taxonomy, aligned storage, and small numeric helpers.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlslab {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Errors. Everything thrown by the library derives from Error so callers can
// map failures to exit codes in one place.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument values (non-finite input, s <= 0 where positivity is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A computation produced non-finite values or failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

// An iterative solver exceeded its budget or diverged.
class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A root finder could not bracket a sign change.
class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A field is not representable on the periodic box (leak guard tripped).
class TruncationError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Bad configuration input (file, schema, override path).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Aligned allocator: FFT plans are created on 64-byte aligned buffers, so all
// field storage uses the same alignment and any field can be transformed with
// a cached plan.
// ---------------------------------------------------------------------------

template <class T, std::size_t Alignment = 64>
struct AlignedAllocator {
  using value_type = T;

  // non-type template parameter defeats the default rebind machinery
  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Alignment>;
  };

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Alignment>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_alloc{};
    void* p = std::aligned_alloc(Alignment, round_up(n * sizeof(T)));
    if (!p) throw std::bad_alloc{};
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U, Alignment>&) const noexcept {
    return true;
  }

 private:
  static std::size_t round_up(std::size_t bytes) {
    return (bytes + Alignment - 1) / Alignment * Alignment;
  }
};

using AlignedComplexVector = std::vector<Complex, AlignedAllocator<Complex>>;

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline double abs2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

inline void require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw DomainError(what + ": non-finite value");
}

}  // namespace nlslab
