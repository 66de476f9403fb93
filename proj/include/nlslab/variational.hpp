// variational.hpp — numerical realizations of the level identities:
// Nehari projection, d(omega) over profile families, the two-constraint level
// d_M on {Q = 0, I <= 0}, and the mountain-pass level c along amplitude rays.
// Infima over H^1 are replaced by minima over explicit families; equality
// certificates come from membership of the computed ground state, one-sided
// bounds hold for every family.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/rescale.hpp"

namespace nlslab {

struct NehariProjection {
  double t_star = 0.0;
  ComplexField projected;
};

namespace detail {

inline constexpr int kBracketDoublings = 60;

// unique positive root of I(t v) = 0 along the amplitude ray
inline double nehari_amplitude(const ScaledFunctionals& sf) {
  auto I_of = [&sf](double t) { return sf.at_amplitude(t).I; };
  double hi = 1.0;
  int d = 0;
  while (I_of(hi) > 0.0) {
    hi *= 2.0;
    if (++d > kBracketDoublings)
      throw BracketError("nehari_project: I(t v) stays positive after bracket expansion");
  }
  double lo = std::min(1.0, 0.5 * hi);
  d = 0;
  while (!(I_of(lo) > 0.0)) {
    lo *= 0.5;
    if (++d > 2000) throw BracketError("nehari_project: no positive I(t v) near t = 0");
  }
  return detail::bisect_root(I_of, lo, hi, [&sf](double t) {
    return 1e-10 * sf.at_amplitude(t).kinetic;
  });
}

}  // namespace detail

// Projection onto the Nehari manifold {I = 0} along the ray t -> t v. The ray
// maximum of S at t* (guaranteed by the monotonicity of g(s)/s) is verified by
// sampling 100 amplitudes around the root.
inline NehariProjection nehari_project(const ComplexField& v, const NonlinearityModel& model,
                                       double omega) {
  require(mass(v) > 0.0, "nehari_project: field must be nonzero");
  const ScaledFunctionals sf(v, model, omega);
  const double t_star = detail::nehari_amplitude(sf);

  // ray-maximum verification
  const double S_star = sf.at_amplitude(t_star).S;
  const double tol = 1e-9 * (std::abs(S_star) + t_star * t_star * sf.kinetic_seed()) + 1e-14;
  for (int i = 0; i < 100; ++i) {
    const double t = t_star * std::exp(-2.0 + 4.0 * static_cast<double>(i) / 99.0);
    if (sf.at_amplitude(t).S > S_star + tol)
      throw NumericError("nehari_project: ray maximum is not at the Nehari point");
  }
  return {t_star, scaled(v, Complex{t_star, 0.0})};
}

// --------------------------------------------------------------------------
// Profile families
// --------------------------------------------------------------------------

struct FamilyMember {
  std::string id;
  ComplexField field;
};

struct ProfileFamilyConfig {
  std::vector<double> gaussian_widths{0.5, 0.8, 1.2, 2.0, 3.0};
  std::vector<double> gaussian_amplitudes{0.6, 1.0, 1.6, 2.5};
  std::vector<double> sech_widths{0.7, 1.0, 1.5};
  std::vector<double> sech_amplitudes{0.8, 1.3, 2.0};
  bool include_ground_state = true;
};

inline std::vector<FamilyMember> build_family(const GridSpec& grid,
                                              const ProfileFamilyConfig& cfg,
                                              const ComplexField* ground_state = nullptr) {
  std::vector<FamilyMember> fam;
  auto radial = [&grid](double amplitude, const std::function<double(double)>& shape) {
    return sample_profile(grid, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int d = 0; d < grid.dimension; ++d)
        r2 += x[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(d)];
      return Complex{amplitude * shape(std::sqrt(r2)), 0.0};
    });
  };
  for (double w : cfg.gaussian_widths)
    for (double a : cfg.gaussian_amplitudes)
      fam.push_back({"gauss_w" + std::to_string(w) + "_a" + std::to_string(a),
                     radial(a, [w](double r) { return std::exp(-r * r / (w * w)); })});
  for (double w : cfg.sech_widths)
    for (double a : cfg.sech_amplitudes)
      fam.push_back({"sech_w" + std::to_string(w) + "_a" + std::to_string(a),
                     radial(a, [w](double r) {
                       return 2.0 / (std::exp(r / w) + std::exp(-r / w));
                     })});
  if (cfg.include_ground_state && ground_state)
    fam.push_back({"ground_state", *ground_state});
  return fam;
}

// --------------------------------------------------------------------------
// Level estimates
// --------------------------------------------------------------------------

struct MemberLevels {
  std::string id;
  std::optional<double> S_projected;  // Nehari value S(t* v)
  std::optional<double> t_star;
  std::optional<double> lambda0;      // Q-root used for the d_M candidate
  bool admitted = false;              // I(v^{lambda0}) <= 0
  std::optional<double> S_dM;         // S(v^{lambda0}) when admitted
  std::optional<double> mountain_pass;
  double constraint_violation = 0.0;  // worst |I|/K or |Q|/K at the landed points
};

struct VariationalReport {
  double m_ref = 0.0;
  double d_omega_est = 0.0;
  double d_M_est = 0.0;
  double c_est = 0.0;
  int family_size = 0;
  double worst_constraint_violation = 0.0;
  std::vector<MemberLevels> members;
};

namespace detail {

// Q-root along the dilation ray for an arbitrary seed: members with Q(v) > 0
// are first scaled up (doubling) until Q < 0, which cond4 guarantees possible.
inline double q_root_any(const ScaledFunctionals& sf) {
  auto q = [&sf](double l) { return sf.at_scale(l).Q; };
  double lo = 1.0, hi = 1.0;
  if (q(1.0) > 0.0) {
    int d = 0;
    while (q(hi) > 0.0) {
      hi *= 2.0;
      if (++d > kBracketDoublings)
        throw BracketError("estimate_d_M: Q(v^lambda) stays positive under upscaling");
    }
    lo = 0.5 * hi;
  } else {
    lo = kLambdaFloor;
    if (!(q(lo) > 0.0)) throw BracketError("estimate_d_M: no Q sign change above lambda floor");
    hi = 1.0;
  }
  return bisect_root(q, lo, hi,
                     [&sf](double l) { return 1e-10 * sf.at_scale(l).kinetic; });
}

inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         double tol_rel) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol_rel * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace detail

// Per-member computation of all three levels; the report-level estimates are
// deterministic minima over the family.
inline VariationalReport variational_report(const std::vector<FamilyMember>& family,
                                            const NonlinearityModel& model, double omega,
                                            double m_ref) {
  require(!family.empty(), "variational_report: family must be nonempty");
  VariationalReport rep;
  rep.m_ref = m_ref;
  rep.family_size = static_cast<int>(family.size());
  double d_omega = std::numeric_limits<double>::infinity();
  double d_M = std::numeric_limits<double>::infinity();
  double c_lvl = std::numeric_limits<double>::infinity();

  for (const auto& member : family) {
    MemberLevels row;
    row.id = member.id;
    const ScaledFunctionals sf(member.field, model, omega);

    // Nehari level
    try {
      const double t_star = detail::nehari_amplitude(sf);
      const FunctionalReport at = sf.at_amplitude(t_star);
      row.t_star = t_star;
      row.S_projected = at.S;
      row.constraint_violation =
          std::max(row.constraint_violation, std::abs(at.I) / std::max(at.kinetic, 1e-300));
      d_omega = std::min(d_omega, at.S);
    } catch (const BracketError&) {
      // member simply contributes nothing to this level
    }

    // two-constraint level on {Q = 0, I <= 0}
    try {
      const double l0 = detail::q_root_any(sf);
      const FunctionalReport at = sf.at_scale(l0);
      row.lambda0 = l0;
      row.constraint_violation =
          std::max(row.constraint_violation, std::abs(at.Q) / std::max(at.kinetic, 1e-300));
      if (at.I <= 1e-10 * at.kinetic) {
        row.admitted = true;
        row.S_dM = at.S;
        d_M = std::min(d_M, at.S);
      }
    } catch (const BracketError&) {
    }

    // mountain-pass level along the ray path t -> t A v, t in [0, 1]
    try {
      double A = 1.0;
      int d = 0;
      while (sf.at_amplitude(A).S >= 0.0) {
        A *= 2.0;
        if (++d > detail::kBracketDoublings)
          throw BracketError("mountain_pass: S(A v) stays nonnegative under doubling");
      }
      const double level = detail::golden_max(
          [&sf, A](double t) { return sf.at_amplitude(t * A).S; }, 0.0, 1.0, 1e-12);
      row.mountain_pass = level;
      c_lvl = std::min(c_lvl, level);
    } catch (const BracketError&) {
    }

    rep.worst_constraint_violation =
        std::max(rep.worst_constraint_violation, row.constraint_violation);
    rep.members.push_back(std::move(row));
  }

  if (!std::isfinite(d_omega))
    throw BracketError("estimate_d_omega: every family member failed to project");
  if (!std::isfinite(d_M))
    throw BracketError("estimate_d_M: no admissible family member");
  if (!std::isfinite(c_lvl))
    throw BracketError("mountain_pass_level: no ray reached negative action");
  rep.d_omega_est = d_omega;
  rep.d_M_est = d_M;
  rep.c_est = c_lvl;
  return rep;
}

inline double estimate_d_omega(const std::vector<FamilyMember>& family,
                               const NonlinearityModel& model, double omega) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : family) {
    try {
      const ScaledFunctionals sf(m.field, model, omega);
      best = std::min(best, sf.at_amplitude(detail::nehari_amplitude(sf)).S);
    } catch (const BracketError&) {
    }
  }
  if (!std::isfinite(best))
    throw BracketError("estimate_d_omega: every family member failed to project");
  return best;
}

inline double estimate_d_M(const std::vector<FamilyMember>& family,
                           const NonlinearityModel& model, double omega) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : family) {
    try {
      const ScaledFunctionals sf(m.field, model, omega);
      const double l0 = detail::q_root_any(sf);
      const FunctionalReport at = sf.at_scale(l0);
      if (at.I <= 1e-10 * at.kinetic) best = std::min(best, at.S);
    } catch (const BracketError&) {
    }
  }
  if (!std::isfinite(best)) throw BracketError("estimate_d_M: no admissible family member");
  return best;
}

inline double mountain_pass_level(const std::vector<FamilyMember>& family,
                                  const NonlinearityModel& model, double omega) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : family) {
    try {
      const ScaledFunctionals sf(m.field, model, omega);
      double A = 1.0;
      int d = 0;
      while (sf.at_amplitude(A).S >= 0.0) {
        A *= 2.0;
        if (++d > detail::kBracketDoublings)
          throw BracketError("mountain_pass: S(A v) stays nonnegative under doubling");
      }
      best = std::min(best, detail::golden_max(
                                [&sf, A](double t) { return sf.at_amplitude(t * A).S; }, 0.0,
                                1.0, 1e-12));
    } catch (const BracketError&) {
    }
  }
  if (!std::isfinite(best))
    throw BracketError("mountain_pass_level: no ray reached negative action");
  return best;
}

}  // namespace nlslab
