// experiment.hpp — end-to-end instability pipeline: certified ground state,
// dilated initial data u0 = phi^lambda, strict entry conditions, evolution
// with every intermediate inequality monitored (sign invariance, the uniform
// bound Q <= -delta, the variance parabola, and the per-sample concavity
// chord bound), plus the subcritical stability contrast.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlslab/dynamics.hpp"
#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/rescale.hpp"
#include "nlslab/variational.hpp"

namespace nlslab {

// delta = m - S(u0), the uniform gap of the virial bound; requires S(u0) < m.
inline double delta_of(double S_u0, double m) {
  require_finite(S_u0, "delta_of");
  require_finite(m, "delta_of");
  if (!(S_u0 < m))
    throw DomainError("delta_of: requires S(u0) < m (got S(u0) = " + std::to_string(S_u0) +
                      ", m = " + std::to_string(m) + ")");
  return m - S_u0;
}

struct EntryConditions {
  bool s_below_m = false;
  bool q_negative = false;
  bool i_negative = false;
  double margin_s = 0.0;  // m - S(u0)
  double margin_q = 0.0;  // -Q(u0)
  double margin_i = 0.0;  // -I(u0)
  bool all() const { return s_below_m && q_negative && i_negative; }
};

class EntryConditionError : public Error {
 public:
  EntryConditionError(const std::string& what, const EntryConditions& entry)
      : Error(what), entry_(entry) {}
  const EntryConditions& entry() const { return entry_; }

 private:
  EntryConditions entry_;
};

struct ExperimentConfig {
  NonlinearityModel model = NonlinearityModel::pure_power(7.0, 1);
  double omega = 1.0;
  GridSpec grid{1, 20.0, 4096};
  double lambda = 1.05;
  std::vector<double> lambda_sweep;  // optional sweep values for the CLI
  IntegratorControls controls;
  std::string gs_method = "auto";  // auto | closed_form | petviashvili | shooting
  PetviashviliOptions petviashvili_options;
  std::pair<double, double> shooting_bracket{0.2, 20.0};
  ProfileFamilyConfig family;
  bool variational_check = true;
  std::size_t max_chord_checks = 256;
  std::string output_dir = "out";
};

struct ChordCheckSummary {
  int checks = 0;
  int failures = 0;
  double worst_defect = 0.0;  // most negative slack of the chord bound, relative
  bool ok() const { return checks >= 10 && failures == 0; }
};

struct ExperimentReport {
  // ground-state summary
  double m = 0.0;
  double gs_residual = 0.0;
  std::string gs_method;
  // entry data
  EntryConditions entry;
  double delta = 0.0;
  double epsilon_h1 = 0.0;            // ||u0 - phi||_{H1 surrogate}
  double scaling_crosscheck = 0.0;    // relative gap between the two S(phi^lambda) routes
  // flow monitors
  bool invariance_ok = false;
  int sign_flips = 0;
  bool q_bound_ok = false;
  bool parabola_ok = false;
  ChordCheckSummary chord;
  double virial_error = 0.0;
  double mass_drift = 0.0;
  double action_drift = 0.0;
  // outcome
  BlowupVerdict verdict;
  TrajectoryRecord record;
  std::optional<VariationalReport> variational;
  bool borderline = false;
  bool pass = false;
  double lambda = 0.0;
};

namespace detail {

inline GroundStateResult solve_ground_state(const ExperimentConfig& cfg) {
  const bool is_1d_power = cfg.grid.dimension == 1 && cfg.model.is_pure_power();
  std::string method = cfg.gs_method;
  if (method == "auto") method = is_1d_power ? "closed_form" : "petviashvili";
  if (method == "closed_form") {
    require(is_1d_power, "ground state: closed form requires a 1D pure power model");
    return closed_form_1d(cfg.model.power(), cfg.omega, cfg.grid);
  }
  if (method == "petviashvili")
    return petviashvili(cfg.model, cfg.omega, cfg.grid, gaussian_seed(cfg.grid),
                        cfg.petviashvili_options);
  if (method == "shooting")
    return shoot_radial(cfg.model, cfg.omega, cfg.shooting_bracket, cfg.grid);
  throw ConfigError("ground state: unknown method '" + method + "'");
}

inline EntryConditions entry_conditions(const FunctionalReport& rep, double m) {
  EntryConditions e;
  e.margin_s = m - rep.S;
  e.margin_q = -rep.Q;
  e.margin_i = -rep.I;
  e.s_below_m = e.margin_s > 0.0;
  e.q_negative = e.margin_q > 0.0;
  e.i_negative = e.margin_i > 0.0;
  return e;
}

// Step-3 probe at one sampled time: locate the Q-root beta0 of the dilation
// ray, fall back to the I-root beta in (beta0, 1) when I(v^{beta0}) > 0, and
// check both S(v^beta) >= d(omega) and the concavity chord bound
// S(v) - S(v^beta) >= Q(v).
inline void chord_probe(const ComplexField& u, const NonlinearityModel& model, double omega,
                        double m, ChordCheckSummary& chord) {
  const ScaledFunctionals sf(u, model, omega);
  const FunctionalReport at1 = sf.at_scale(1.0);
  if (!(at1.Q < 0.0)) return;  // probe applies inside the invariant set only
  double beta = 0.0;
  try {
    beta = q_root_any(sf);
  } catch (const BracketError&) {
    chord.checks++;
    chord.failures++;
    return;
  }
  FunctionalReport at_beta = sf.at_scale(beta);
  if (at_beta.I > 1e-10 * at_beta.kinetic) {
    // replace beta0 by the I-root in (beta0, 1)
    auto iv = [&sf](double l) { return sf.at_scale(l).I; };
    beta = bisect_root(iv, beta, 1.0,
                       [&sf](double l) { return 1e-10 * sf.at_scale(l).kinetic; });
    at_beta = sf.at_scale(beta);
  }
  chord.checks++;
  const double tol = 1e-3;
  const bool level_ok = at_beta.S >= m * (1.0 - tol);
  const double lhs = at1.S - at_beta.S;  // chord bound: lhs >= Q(v)
  const bool chord_ok = lhs >= at1.Q - tol * std::abs(at1.Q);
  const double defect = (lhs - at1.Q) / std::max(std::abs(at1.Q), 1e-300);
  chord.worst_defect = std::min(chord.worst_defect, defect);
  if (!(level_ok && chord_ok)) chord.failures++;
}

}  // namespace detail

// Ground state for an experiment configuration (method per config, "auto"
// picks the closed form for 1D pure powers and Petviashvili otherwise).
inline GroundStateResult experiment_ground_state(const ExperimentConfig& cfg) {
  return detail::solve_ground_state(cfg);
}

// --------------------------------------------------------------------------
// Theorem-experiment: u0 = phi^lambda with lambda > 1 inside the invariant
// set; expects finite-time gradient blow-up.
// --------------------------------------------------------------------------
inline ExperimentReport run_instability(const ExperimentConfig& cfg) {
  cfg.grid.validate();
  const auto adm = cfg.model.check_admissibility(1e-6, 1e3, 256, cfg.omega);
  if (adm.borderline)
    throw ConfigError("instability: exponent sits at the critical value 1 + 4/N");
  if (!adm.supercritical)
    throw ConfigError("instability: model is not mass-supercritical");

  ExperimentReport rep;
  rep.lambda = cfg.lambda;

  const GroundStateResult gs = detail::solve_ground_state(cfg);
  rep.m = gs.level_m;
  rep.gs_residual = gs.residual_rel;
  rep.gs_method = to_string(gs.method);

  const ComplexField u0 = rescale(gs.field, cfg.lambda);
  const FunctionalReport rep0 = evaluate(u0, cfg.model, cfg.omega);
  rep.entry = detail::entry_conditions(rep0, rep.m);
  if (!rep.entry.all()) {
    throw EntryConditionError(
        "instability: entry conditions are not strict inequalities (margins: S " +
            std::to_string(rep.entry.margin_s) + ", Q " + std::to_string(rep.entry.margin_q) +
            ", I " + std::to_string(rep.entry.margin_i) + ")",
        rep.entry);
  }
  rep.delta = delta_of(rep0.S, rep.m);
  rep.epsilon_h1 = h1_distance(u0, gs.field);

  // two independent routes to S(phi^lambda): field rescale + evaluate versus
  // the change-of-variables quadrature
  {
    const ScaledFunctionals sf(gs.field, cfg.model, cfg.omega);
    const double s_scaled = sf.at_scale(cfg.lambda).S;
    rep.scaling_crosscheck =
        std::abs(s_scaled - rep0.S) / (std::abs(rep0.S) + rep0.kinetic);
  }

  IntegratorControls controls = cfg.controls;
  controls.level_m = rep.m;

  ChordCheckSummary chord;
  SampleProbe probe;
  if (cfg.max_chord_checks > 0) {
    probe = [&chord, &cfg, m = rep.m](const TrajectorySample& s, const ComplexField& u) {
      if (s.t == 0.0 || !s.valid) return;
      if (chord.checks >= static_cast<int>(cfg.max_chord_checks)) return;
      detail::chord_probe(u, cfg.model, cfg.omega, m, chord);
    };
  }

  auto [record, verdict] = evolve(u0, cfg.model, cfg.omega, controls, probe);
  rep.record = std::move(record);
  rep.verdict = verdict;
  rep.chord = chord;

  // sign invariance across valid samples (zero flips of all three flags)
  int flips = 0;
  for (const auto& s : rep.record.samples) {
    if (!s.valid || !s.membership) continue;
    if (!s.membership->in_invariant_set) ++flips;
  }
  rep.sign_flips = flips;
  rep.invariance_ok = flips == 0;
  rep.q_bound_ok = verdict.q_bound_ok;
  rep.parabola_ok = verdict.parabola_ok;
  rep.virial_error = rep.record.samples.size() >= 5 ? virial_check(rep.record) : 0.0;
  const auto drifts = conservation_check(rep.record);
  rep.mass_drift = drifts.first;
  rep.action_drift = drifts.second;

  if (cfg.variational_check) {
    const auto family = build_family(cfg.grid, cfg.family, &gs.field);
    rep.variational = variational_report(family, cfg.model, cfg.omega, rep.m);
  }

  rep.pass = rep.entry.all() && rep.invariance_ok && rep.q_bound_ok && rep.parabola_ok &&
             rep.chord.ok() && rep.verdict.status == BlowupStatus::blew_up;
  return rep;
}

// --------------------------------------------------------------------------
// Subcritical contrast: same pipeline, expects a stable window (gradient
// ratio staying below 2) and no invariant-set entry.
// --------------------------------------------------------------------------
inline ExperimentReport run_stability_contrast(const ExperimentConfig& cfg) {
  cfg.grid.validate();
  const auto adm = cfg.model.check_admissibility(1e-6, 1e3, 256, cfg.omega);

  ExperimentReport rep;
  rep.lambda = cfg.lambda;
  rep.borderline = adm.borderline;
  if (adm.supercritical)
    throw ConfigError("stability contrast: model is mass-supercritical; use `instability`");

  const GroundStateResult gs = detail::solve_ground_state(cfg);
  rep.m = gs.level_m;
  rep.gs_residual = gs.residual_rel;
  rep.gs_method = to_string(gs.method);

  const ComplexField u0 = rescale(gs.field, cfg.lambda);
  const FunctionalReport rep0 = evaluate(u0, cfg.model, cfg.omega);
  rep.entry = detail::entry_conditions(rep0, rep.m);  // recorded, not asserted
  rep.epsilon_h1 = h1_distance(u0, gs.field);

  IntegratorControls controls = cfg.controls;
  controls.level_m = rep.m;
  auto [record, verdict] = evolve(u0, cfg.model, cfg.omega, controls);
  rep.record = std::move(record);
  rep.verdict = verdict;
  const auto drifts = conservation_check(rep.record);
  rep.mass_drift = drifts.first;
  rep.action_drift = drifts.second;

  if (rep.borderline) {
    rep.pass = false;  // no PASS/FAIL asserted at the critical exponent
    return rep;
  }
  rep.pass = rep.verdict.status == BlowupStatus::stable_window &&
             rep.record.max_grad_ratio <= 2.0;
  return rep;
}

}  // namespace nlslab
