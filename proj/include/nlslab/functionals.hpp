// functionals.hpp — the scalar functionals S, I, Q, the action gradient and
// the invariant-set membership predicate.
//
//   S(v) = 1/2 ||grad v||^2 + (omega/2) ||v||^2 - int G(v)
//   I(v) = ||grad v||^2 + omega ||v||^2 - int g(|v|) |v|
//   Q(v) = ||grad v||^2 - (N/2) int (g(|v|) |v| - 2 G(v))
//
// Nonlinear integrands are evaluated on the 2/3-dealiased field.

#pragma once

#include <cmath>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/nonlinearity.hpp"

namespace nlslab {

struct FunctionalReport {
  double S = 0.0;
  double I = 0.0;
  double Q = 0.0;
  double mass = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;  // int G(v)
  double omega = 0.0;
};

namespace detail {

struct NonlinearIntegrals {
  double potential = 0.0;  // int G(|v|)
  double nehari = 0.0;     // int g(|v|) |v|
};

inline NonlinearIntegrals nonlinear_integrals(const ComplexField& dealiased,
                                              const NonlinearityModel& model) {
  NonlinearIntegrals out;
  double pot = 0.0, neh = 0.0;
  const std::size_t n = dealiased.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(dealiased[i]);
    pot += model.G(a);
    neh += model.g(a) * a;
  }
  const double w = dealiased.grid().cell_volume();
  out.potential = w * pot;
  out.nehari = w * neh;
  if (!std::isfinite(out.potential) || !std::isfinite(out.nehari))
    throw NumericError("functionals: non-finite nonlinear integrand");
  return out;
}

inline FunctionalReport assemble(double kin, double m, const NonlinearIntegrals& nl, double omega,
                                 int dimension) {
  FunctionalReport r;
  r.mass = m;
  r.kinetic = kin;
  r.potential = nl.potential;
  r.omega = omega;
  r.S = 0.5 * kin + 0.5 * omega * m - nl.potential;
  r.I = kin + omega * m - nl.nehari;
  r.Q = kin - 0.5 * static_cast<double>(dimension) * (nl.nehari - 2.0 * nl.potential);
  return r;
}

}  // namespace detail

inline FunctionalReport evaluate(const ComplexField& v, const NonlinearityModel& model,
                                 double omega) {
  require(omega > 0.0 && std::isfinite(omega), "evaluate: omega must be positive");
  require(model.dimension() == v.grid().dimension, "evaluate: model/grid dimension mismatch");
  const double m = mass(v);
  const double kin = kinetic(v);
  const auto nl = detail::nonlinear_integrals(dealias(v), model);
  return detail::assemble(kin, m, nl, omega, v.grid().dimension);
}

// --------------------------------------------------------------------------
// Scaled evaluation: functionals of v^lambda = lambda^{N/2} v(lambda .) via
// the exact change of variables
//
//   int F(lambda^{N/2} |v(lambda x)|) dx = lambda^{-N} int F(lambda^{N/2} |v(y)|) dy,
//
// so every curve in lambda reduces to pointwise quadratures on the original
// samples. Mirrors the scaling computation in the analysis and serves as the
// fast second route next to rescale() + evaluate(). Also covers amplitude
// rays t |v| (used by the Nehari projection and mountain-pass paths).
// --------------------------------------------------------------------------

class ScaledFunctionals {
 public:
  ScaledFunctionals(const ComplexField& v, const NonlinearityModel& model, double omega)
      : model_(model),
        omega_(omega),
        dimension_(v.grid().dimension),
        cell_(v.grid().cell_volume()),
        mass_(mass(v)),
        kinetic_(kinetic(v)) {
    require(omega > 0.0 && std::isfinite(omega), "ScaledFunctionals: omega must be positive");
    const ComplexField vd = dealias(v);
    moduli_.resize(vd.size());
    for (std::size_t i = 0; i < vd.size(); ++i) moduli_[i] = std::abs(vd[i]);
  }

  double mass_seed() const { return mass_; }
  double kinetic_seed() const { return kinetic_; }

  // functionals of v^lambda
  FunctionalReport at_scale(double lambda) const {
    require(lambda > 0.0 && std::isfinite(lambda), "at_scale: lambda must be positive");
    const double nd = static_cast<double>(dimension_);
    const double amp = std::pow(lambda, 0.5 * nd);
    const double jac = std::pow(lambda, -nd);
    detail::NonlinearIntegrals nl;
    double pot = 0.0, neh = 0.0;
    for (const double a0 : moduli_) {
      const double a = amp * a0;
      pot += model_.G(a);
      neh += model_.g(a) * a;
    }
    nl.potential = jac * cell_ * pot;
    nl.nehari = jac * cell_ * neh;
    return detail::assemble(lambda * lambda * kinetic_, mass_, nl, omega_, dimension_);
  }

  // functionals of t * v (amplitude ray)
  FunctionalReport at_amplitude(double t) const {
    require(t >= 0.0 && std::isfinite(t), "at_amplitude: t must be nonnegative");
    detail::NonlinearIntegrals nl;
    double pot = 0.0, neh = 0.0;
    for (const double a0 : moduli_) {
      const double a = t * a0;
      pot += model_.G(a);
      neh += model_.g(a) * a;
    }
    nl.potential = cell_ * pot;
    nl.nehari = cell_ * neh;
    return detail::assemble(t * t * kinetic_, t * t * mass_, nl, omega_, dimension_);
  }

 private:
  NonlinearityModel model_;
  double omega_;
  int dimension_;
  double cell_;
  double mass_;
  double kinetic_;
  std::vector<double> moduli_;
};

// Frechet gradient of S under the real inner product: -lap v + omega v - g(v).
inline ComplexField action_gradient(const ComplexField& v, const NonlinearityModel& model,
                                    double omega) {
  require(omega > 0.0 && std::isfinite(omega), "action_gradient: omega must be positive");
  ComplexField grad = laplacian(v);
  // nonlinear term on the dealiased field, truncated again on output
  ComplexField nl = dealias(v);
  for (auto& z : nl.values()) z = model.g(z);
  nl = dealias(nl);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = -grad[i] + omega * v[i] - nl[i];
  return grad;
}

struct MembershipFlags {
  bool below_level = false;  // S < m
  bool q_negative = false;   // Q < 0
  bool i_negative = false;   // I < 0
  bool in_invariant_set = false;
};

// Strict-inequality membership in {S < m, Q < 0, I < 0}; the signs are the
// semantics, so no tolerance is applied.
inline MembershipFlags set_membership(const FunctionalReport& report, double m) {
  require_finite(m, "set_membership");
  MembershipFlags f;
  f.below_level = report.S < m;
  f.q_negative = report.Q < 0.0;
  f.i_negative = report.I < 0.0;
  f.in_invariant_set = f.below_level && f.q_negative && f.i_negative;
  return f;
}

}  // namespace nlslab
