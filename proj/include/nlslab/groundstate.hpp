// groundstate.hpp — ground-state profiles of -lap(phi) + omega phi = g(phi):
// closed form for the 1D pure power, Petviashvili fixed point on the spectral
// grid, and radial shooting; every accepted result is certified by its PDE
// residual and by |I(phi)|, |Q(phi)| << kinetic(phi).

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"

namespace nlslab {

enum class GroundStateMethod { closed_form, petviashvili, shooting };

inline const char* to_string(GroundStateMethod m) {
  switch (m) {
    case GroundStateMethod::closed_form: return "closed_form";
    case GroundStateMethod::petviashvili: return "petviashvili";
    case GroundStateMethod::shooting: return "shooting";
  }
  return "?";
}

struct GroundStateResult {
  ComplexField field;       // real, positive, even profile
  double omega = 0.0;
  double level_m = 0.0;     // S(phi)
  double residual_rel = 0.0;
  GroundStateMethod method = GroundStateMethod::closed_form;
  int iterations = 0;
};

struct GroundStateTolerances {
  double residual_rel = 1e-6;
  double constraint_rel = 1e-6;  // |I|, |Q| against kinetic
};

namespace detail {

inline GroundStateResult certify(ComplexField field, const NonlinearityModel& model, double omega,
                                 GroundStateMethod method, int iterations,
                                 const GroundStateTolerances& tol = {}) {
  // positivity screen (rejects sign-changing excited states)
  double max_re = 0.0, min_re = 0.0;
  for (const auto& z : field.values()) {
    max_re = std::max(max_re, z.real());
    min_re = std::min(min_re, z.real());
  }
  if (!(max_re > 0.0) || min_re < -1e-8 * max_re)
    throw ConvergenceError(std::string("ground state (") + to_string(method) +
                           "): profile is not positive");
  // drop rounding-level imaginary parts
  for (auto& z : field.values()) z = Complex{z.real(), 0.0};

  const double nrm = norm_l2(field);
  if (!(nrm > 0.0))
    throw ConvergenceError(std::string("ground state (") + to_string(method) + "): zero profile");
  const double res = norm_l2(action_gradient(field, model, omega)) / nrm;
  const FunctionalReport rep = evaluate(field, model, omega);
  if (!(res <= tol.residual_rel))
    throw ConvergenceError(std::string("ground state (") + to_string(method) +
                           "): residual " + std::to_string(res) + " exceeds tolerance");
  if (!(std::abs(rep.I) <= tol.constraint_rel * rep.kinetic) ||
      !(std::abs(rep.Q) <= tol.constraint_rel * rep.kinetic))
    throw ConvergenceError(std::string("ground state (") + to_string(method) +
                           "): I or Q constraint violated");
  if (!(rep.S > 0.0))
    throw ConvergenceError(std::string("ground state (") + to_string(method) +
                           "): nonpositive action level");

  GroundStateResult out{std::move(field), omega, rep.S, res, method, iterations};
  return out;
}

}  // namespace detail

// --------------------------------------------------------------------------
// 1D pure power closed form:
//   phi(x) = [(p+1) omega / 2]^{1/(p-1)} sech^{2/(p-1)}( (p-1) sqrt(omega)/2 x )
// --------------------------------------------------------------------------

inline double closed_form_1d_amplitude(double p, double omega) {
  return std::pow(0.5 * (p + 1.0) * omega, 1.0 / (p - 1.0));
}

inline ComplexField closed_form_1d_profile(double p, double omega, const GridSpec& grid) {
  require(grid.dimension == 1, "closed_form_1d: grid must be one-dimensional");
  require(p > 1.0 && omega > 0.0, "closed_form_1d: need p > 1 and omega > 0");
  const double amp = closed_form_1d_amplitude(p, omega);
  const double rate = 0.5 * (p - 1.0) * std::sqrt(omega);
  const double expo = 2.0 / (p - 1.0);
  return sample_profile(grid, [&](double x) {
    const double t = std::abs(rate * x);
    const double sech = 2.0 / (std::exp(t) + std::exp(-t));
    return Complex{amp * std::pow(sech, expo), 0.0};
  });
}

inline GroundStateResult closed_form_1d(double p, double omega, const GridSpec& grid,
                                        const GroundStateTolerances& tol = {}) {
  const NonlinearityModel model = NonlinearityModel::pure_power(p, 1);
  return detail::certify(closed_form_1d_profile(p, omega, grid), model, omega,
                         GroundStateMethod::closed_form, 0, tol);
}

// --------------------------------------------------------------------------
// Petviashvili iteration: w <- M[w]^gamma (omega - lap)^{-1} g(w) with the
// stabilizing factor M[w] = <(omega - lap) w, w> / <g(w), w>; gamma defaults
// to p/(p-1) for the largest power-law degree p.
// --------------------------------------------------------------------------

struct PetviashviliOptions {
  double gamma = 0.0;  // 0 -> p/(p-1)
  double tol = 1e-13;  // relative L2 update
  int max_iter = 500;
};

inline ComplexField gaussian_seed(const GridSpec& grid, double amplitude = 1.0,
                                  double width = 1.0) {
  return sample_profile(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < grid.dimension; ++d) r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
    return Complex{amplitude * std::exp(-r2 / (width * width)), 0.0};
  });
}

inline GroundStateResult petviashvili(const NonlinearityModel& model, double omega,
                                      const GridSpec& grid, const ComplexField& seed,
                                      const PetviashviliOptions& opts = {},
                                      const GroundStateTolerances& tol = {}) {
  grid.validate();
  require(omega > 0.0, "petviashvili: omega must be positive");
  require(seed.grid() == grid, "petviashvili: seed grid mismatch");
  const auto pmax = model.max_exponent();
  require(pmax.has_value(), "petviashvili: requires a power-like model");

  // seed screen: positive, nonzero, (numerically) real
  double max_re = 0.0, min_re = 0.0, max_im = 0.0;
  for (const auto& z : seed.values()) {
    max_re = std::max(max_re, z.real());
    min_re = std::min(min_re, z.real());
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  if (!(max_re > 0.0) || min_re < -1e-12 * max_re || max_im > 1e-12 * max_re)
    throw DomainError("petviashvili: seed must be a nonzero positive real profile");

  const double gamma = opts.gamma > 0.0 ? opts.gamma : *pmax / (*pmax - 1.0);
  const GridSpec& g = grid;
  const std::size_t n = g.size();
  const double cell = g.cell_volume();

  ComplexField w = seed;
  for (int it = 1; it <= opts.max_iter; ++it) {
    // <(omega - lap) w, w> and <g(w), w> (the nonlinear term follows the
    // dealiasing policy shared with action_gradient)
    AlignedComplexVector hat = spectrum(w);
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      quad += (omega + spectral_k2(g, i)) * abs2(hat[i]);
    quad *= cell / static_cast<double>(n);

    ComplexField gw = dealias(w);
    for (auto& z : gw.values()) z = model.g(z);
    gw = dealias(gw);
    const double pair = inner_real(gw, w);
    if (!(pair > 0.0))
      throw DomainError("petviashvili: degenerate seed, <g(w), w> is not positive");

    const double stab = std::pow(quad / pair, gamma);
    if (!std::isfinite(stab) || stab <= 0.0)
      throw ConvergenceError("petviashvili: stabilization factor diverged");

    AlignedComplexVector ghat = spectrum(gw);
    for (std::size_t i = 0; i < n; ++i) ghat[i] *= stab / (omega + spectral_k2(g, i));
    fft::inverse(g, ghat);
    ComplexField next(g, std::move(ghat));

    const double diff = norm_l2(difference(next, w));
    const double base = norm_l2(w);
    w = std::move(next);
    if (!(base > 0.0) || !std::isfinite(diff))
      throw ConvergenceError("petviashvili: iteration collapsed");
    if (diff <= opts.tol * base)
      return detail::certify(std::move(w), model, omega, GroundStateMethod::petviashvili, it, tol);
  }
  throw ConvergenceError("petviashvili: no convergence within max_iter");
}

// --------------------------------------------------------------------------
// Radial shooting: integrate phi'' + (N-1)/r phi' = omega phi - g(phi) with
// phi(0) = s, phi'(0) = 0, and bisect s between decay and sign-change
// outcomes. The resolved profile is resampled onto the spectral grid.
// --------------------------------------------------------------------------

namespace detail {

struct RadialTable {
  double h = 0.0;               // node spacing
  std::vector<double> values;   // phi at r = j h
  double sqrt_omega = 1.0;
  int dim = 1;
  double tail_start = 0.0;      // r beyond which the linearized far field applies
  double tail_value = 0.0;

  // decaying solution of the linearized far-field equation, up to a constant:
  // exp(-sqrt(omega) r) in 1D, K0(sqrt(omega) r) in 2D, exp(-sqrt(omega) r)/r in 3D
  double linear_decay(double r) const {
    switch (dim) {
      case 2: return std::cyl_bessel_k(0.0, sqrt_omega * r);
      case 3: return std::exp(-sqrt_omega * r) / r;
      default: return std::exp(-sqrt_omega * r);
    }
  }

  double operator()(double r) const {
    if (r >= tail_start)
      return tail_value * linear_decay(r) / linear_decay(tail_start);
    const double s = r / h;
    auto j = static_cast<long>(std::floor(s));
    const long last = static_cast<long>(values.size()) - 1;
    // 6-point Lagrange on the dense table; the spectral Laplacian amplifies
    // interpolation noise by k^2, so the stencil is kept high order
    long j0 = std::clamp<long>(j - 2, 0, last - 5);
    const double t = s - static_cast<double>(j0);
    double acc = 0.0;
    for (int a = 0; a < 6; ++a) {
      double wgt = 1.0;
      for (int b = 0; b < 6; ++b) {
        if (a == b) continue;
        wgt *= (t - static_cast<double>(b)) / static_cast<double>(a - b);
      }
      acc += wgt * values[static_cast<std::size_t>(j0 + a)];
    }
    return acc;
  }
};

// one RK4 step of (phi, psi)' = (psi, omega phi - g(phi) - (N-1)/r psi)
struct RadialRhs {
  const NonlinearityModel& model;
  double omega;
  int dim;
  void operator()(double r, double phi, double psi, double& dphi, double& dpsi) const {
    dphi = psi;
    double friction = 0.0;
    if (dim > 1 && r > 0.0) friction = static_cast<double>(dim - 1) / r * psi;
    dpsi = omega * phi - model.g(phi) - friction;
  }
};

enum class ShotOutcome { crossed_zero, turned_back, decayed };

// integrate from the Taylor start; optionally record node values every
// `record_every` steps
inline ShotOutcome integrate_shot(const RadialRhs& rhs, double s, double h, double r_max,
                                  std::vector<double>* record, int record_every) {
  // series start around r = 0: phi'' (0) = (omega s - g(s))/N
  const double c2 = (rhs.omega * s - rhs.model.g(s)) / static_cast<double>(rhs.dim);
  double r = h;
  double phi = s + 0.5 * c2 * h * h;
  double psi = c2 * h;
  if (record) {
    record->clear();
    record->push_back(s);
    if (record_every == 1) record->push_back(phi);
  }
  if (phi <= 0.0) return ShotOutcome::crossed_zero;
  long step = 1;
  const double floor_value = 1e-13 * std::abs(s);
  const double escape = 1e6 * std::abs(s);
  while (r < r_max) {
    // an exploding shot has left the decaying manifold on the overshoot side
    if (!std::isfinite(phi) || !std::isfinite(psi) || std::abs(phi) > escape)
      return ShotOutcome::crossed_zero;
    double k1p, k1q, k2p, k2q, k3p, k3q, k4p, k4q;
    rhs(r, phi, psi, k1p, k1q);
    rhs(r + 0.5 * h, phi + 0.5 * h * k1p, psi + 0.5 * h * k1q, k2p, k2q);
    rhs(r + 0.5 * h, phi + 0.5 * h * k2p, psi + 0.5 * h * k2q, k3p, k3q);
    rhs(r + h, phi + h * k3p, psi + h * k3q, k4p, k4q);
    phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    psi += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    r += h;
    ++step;
    if (record && step % record_every == 0) record->push_back(phi);
    if (phi <= 0.0) return ShotOutcome::crossed_zero;
    if (psi > 0.0) return ShotOutcome::turned_back;
    if (phi < floor_value) return ShotOutcome::decayed;
  }
  return ShotOutcome::decayed;
}

}  // namespace detail

inline GroundStateResult shoot_radial(const NonlinearityModel& model, double omega,
                                      std::pair<double, double> bracket, const GridSpec& grid,
                                      const GroundStateTolerances& tol = {}) {
  grid.validate();
  require(model.dimension() == grid.dimension, "shoot_radial: model/grid dimension mismatch");
  require(omega > 0.0, "shoot_radial: omega must be positive");
  require(bracket.first > 0.0 && bracket.first < bracket.second, "shoot_radial: bad bracket");

  const detail::RadialRhs rhs{model, omega, grid.dimension};
  // Dense integration step. The RK4 error floor enters the resampled field as
  // broadband spectral noise that the Laplacian amplifies by k^2; with the
  // huge high-k mode count of 3D grids this needs a much smaller step there.
  const double h = grid.spacing() / (grid.dimension == 1 ? 16.0 : 128.0);
  const double r_max =
      std::sqrt(static_cast<double>(grid.dimension)) * grid.half_length + 2.0 * grid.spacing();

  auto outcome = [&](double s) { return detail::integrate_shot(rhs, s, h, r_max, nullptr, 1); };
  auto classify = [&](detail::ShotOutcome o) {
    // crossed zero -> s too large; turned back or decayed -> s too small
    return o == detail::ShotOutcome::crossed_zero ? +1 : -1;
  };

  double lo = bracket.first, hi = bracket.second;
  const int c_lo = classify(outcome(lo));
  const int c_hi = classify(outcome(hi));
  if (c_lo == c_hi)
    throw BracketError("shoot_radial: bracket endpoints give the same shot outcome");
  if (c_lo > 0) std::swap(lo, hi);  // ensure lo undershoots, hi overshoots

  // bisect to machine precision: the shooting error is amplified by the
  // unstable far-field mode e^{+sqrt(omega) r}, so spare resolution here buys
  // accuracy of the recorded tail
  int iterations = 0;
  while (std::abs(hi - lo) > 4.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(lo), std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (classify(outcome(mid)) > 0 ? hi : lo) = mid;
    if (++iterations > 200) break;
  }
  const double s_star = 0.5 * (lo + hi);

  // final pass: dense table, cut where the divergence of the shot starts to
  // matter, linearized far field beyond the cut
  detail::RadialTable table;
  table.h = h;
  table.sqrt_omega = std::sqrt(omega);
  table.dim = grid.dimension;
  std::vector<double> rec;
  detail::integrate_shot(rhs, s_star, h, r_max, &rec, 1);
  table.values = std::move(rec);
  const double cut_level = 1e-4 * s_star;
  std::size_t cut = table.values.size();
  for (std::size_t j = 1; j < table.values.size(); ++j) {
    if (table.values[j] <= cut_level || table.values[j] > table.values[j - 1]) {
      cut = j + 1;
      break;
    }
  }
  table.values.resize(std::min(std::max<std::size_t>(cut, 16), table.values.size()));
  table.tail_start = table.h * static_cast<double>(table.values.size() - 1);
  table.tail_value = table.values.back();

  ComplexField field = sample_profile(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int d = 0; d < grid.dimension; ++d) r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
    return Complex{table(std::sqrt(r2)), 0.0};
  });
  return detail::certify(std::move(field), model, omega, GroundStateMethod::shooting, iterations,
                         tol);
}

}  // namespace nlslab
