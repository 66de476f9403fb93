// dynamics.hpp — time integration of i u_t + lap(u) + g(u) = 0 by Strang-split
// spectral stepping: exact half-kinetic substeps in Fourier space around an
// exact pointwise nonlinear phase rotation. Adaptive step control from the
// phase-rotation cap and a per-step action-drift budget; conservation, virial
// and leak diagnostics; blow-up classification.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/functionals.hpp"

namespace nlslab {

struct IntegratorControls {
  double t_max = 10.0;
  double dt_initial = 1e-3;
  double dt_min = 1e-13;
  double dt_max = 5e-3;
  double sample_interval = 0.0;     // 0 -> t_max / 2000
  double energy_drift_tol = 1e-6;   // per step, relative to |S(u0)| + kinetic(u0)
  double phase_rotation_cap = 0.1;  // max radians of nonlinear phase per step
  double blowup_gradient_ratio = 1e3;
  double leak_tol = 1e-8;           // trajectory abort threshold
  std::optional<double> level_m;    // reference level for membership flags / delta

  void validate() const {
    require(t_max > 0.0, "controls: t_max must be positive");
    require(dt_min > 0.0 && dt_min < dt_initial && dt_initial <= dt_max,
            "controls: need dt_min < dt_initial <= dt_max");
    require(sample_interval >= 0.0, "controls: sample_interval must be nonnegative");
    require(energy_drift_tol > 0.0 && phase_rotation_cap > 0.0 && blowup_gradient_ratio > 1.0 &&
                leak_tol > 0.0,
            "controls: tolerances must be positive");
  }

  double effective_sample_interval() const {
    return sample_interval > 0.0 ? sample_interval : t_max / 2000.0;
  }
};

enum class Termination { reached_t_max, blowup_detected, leak_violation, step_underflow };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_max: return "reached_t_max";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::leak_violation: return "leak_violation";
    case Termination::step_underflow: return "step_underflow";
  }
  return "?";
}

enum class BlowupStatus { blew_up, stable_window, inconclusive };

inline const char* to_string(BlowupStatus s) {
  switch (s) {
    case BlowupStatus::blew_up: return "blew_up";
    case BlowupStatus::stable_window: return "stable_window";
    case BlowupStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TrajectorySample {
  double t = 0.0;
  double dt = 0.0;  // step size in use when the sample was taken
  FunctionalReport report;
  double grad_norm = 0.0;      // ||grad u||_2
  double f_moment = 0.0;       // f(t) = || |x| u ||_2^2
  double leak = 0.0;           // boundary mass fraction at core 0.8
  double tail_fraction = 0.0;  // spectral mass beyond the 2/3 band
  bool valid = false;          // leak and tail both below the validity guards
  std::optional<MembershipFlags> membership;
};

// Validity guards for scoring samples (stricter than the abort threshold).
inline constexpr double kValidityLeakTol = 1e-8;
inline constexpr double kValidityTailTol = 1e-8;

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;        // uniform times k * sample_interval
  std::optional<TrajectorySample> terminal;     // off-grid state at termination
  std::vector<double> dt_history;               // accepted step sizes
  std::vector<unsigned char> dt_clamped;        // 1 if the step was event-clamped
  Termination termination = Termination::reached_t_max;
  double t_end = 0.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  double sample_interval = 0.0;
  double initial_scale = 0.0;  // |S(u0)| + kinetic(u0)
  double max_grad_ratio = 1.0;
  double max_amplitude_ratio = 1.0;

  const TrajectorySample& last_state() const {
    return terminal ? *terminal : samples.back();
  }
};

struct BlowupVerdict {
  BlowupStatus status = BlowupStatus::inconclusive;
  std::optional<double> T_estimate;        // dt-collapse extrapolation
  std::optional<double> t_cross_parabola;  // root of the variance bound
  std::optional<double> delta;             // m - S(u0) when a level is supplied
  bool parabola_ok = false;
  bool q_bound_ok = false;
};

// probe invoked at every uniform sample with the current field
using SampleProbe = std::function<void(const TrajectorySample&, const ComplexField&)>;

// --------------------------------------------------------------------------
// One Strang step: half kinetic, full nonlinear phase rotation, half kinetic.
// Both substeps are isometries of the L2 norm, so mass is conserved to
// rounding regardless of dt.
// --------------------------------------------------------------------------
inline ComplexField step_strang(const ComplexField& u, double dt, const NonlinearityModel& model) {
  require(dt > 0.0 && std::isfinite(dt), "step_strang: dt must be positive");
  const GridSpec& g = u.grid();
  AlignedComplexVector hat = spectrum(u);
  const std::size_t n = hat.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = -0.5 * dt * spectral_k2(g, i);
    hat[i] *= Complex{std::cos(phase), std::sin(phase)};
  }
  fft::inverse(g, hat);
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = dt * model.phase_rate(std::abs(hat[i]));
    hat[i] *= Complex{std::cos(theta), std::sin(theta)};
  }
  fft::forward(g, hat);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = -0.5 * dt * spectral_k2(g, i);
    hat[i] *= Complex{std::cos(phase), std::sin(phase)};
  }
  fft::inverse(g, hat);
  ComplexField out(g, std::move(hat));
  if (!out.all_finite())
    throw NumericError("step_strang: non-finite values after step (numeric blow-up signal)");
  return out;
}

namespace detail {

// Pointwise nonlinearity kernels with fast paths for odd-integer pure powers
// (the hot loops of the integrator: |u|^{p-1} and G(|u|) from |u|^2).
struct PointwiseKernel {
  const NonlinearityModel& model;
  bool pure = false;
  long half_pm1 = -1;  // (p-1)/2 when integral
  double p = 0.0;

  explicit PointwiseKernel(const NonlinearityModel& m) : model(m) {
    if (m.is_pure_power()) {
      pure = true;
      p = m.power();
      const double hp = 0.5 * (p - 1.0);
      if (std::round(hp) == hp && hp >= 0.0 && hp <= 32.0) half_pm1 = static_cast<long>(hp);
    }
  }

  // g(|u|)/|u| from |u|^2
  double rate_from_a2(double a2) const {
    if (pure) {
      if (half_pm1 >= 0) {
        double acc = 1.0, b = a2;
        long n = half_pm1;
        while (n) {
          if (n & 1) acc *= b;
          b *= b;
          n >>= 1;
        }
        return acc;
      }
      return std::pow(a2, 0.5 * (p - 1.0));
    }
    return model.phase_rate(std::sqrt(a2));
  }

  // G(|u|) from |u|^2
  double G_from_a2(double a2) const {
    if (pure) return rate_from_a2(a2) * a2 / (p + 1.0);  // |u|^{p+1}/(p+1)
    return model.G(std::sqrt(a2));
  }
};

struct StepScalars {
  double mass = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;  // non-dealiased int G(|u|), controller use only
  double max_rate = 0.0;   // max g(|u|)/|u|
  double max_a2 = 0.0;
  double S() const { return 0.5 * kinetic; }  // assembled by caller with omega
};

}  // namespace detail

// --------------------------------------------------------------------------
// evolve: adaptive Strang stepping with event-aligned sampling. Steps land
// exactly on the uniform sample times so the virial check can use centered
// differences. omega enters diagnostics only; the flow itself is omega-free.
// --------------------------------------------------------------------------
inline std::pair<TrajectoryRecord, BlowupVerdict> evolve(const ComplexField& u0,
                                                         const NonlinearityModel& model,
                                                         double omega,
                                                         const IntegratorControls& controls,
                                                         const SampleProbe& probe = {}) {
  controls.validate();
  require(u0.all_finite(), "evolve: initial data must be finite");
  require(model.dimension() == u0.grid().dimension, "evolve: model/grid dimension mismatch");

  const GridSpec& g = u0.grid();
  const std::size_t n = g.size();
  const double cell = g.cell_volume();
  const double spec_norm = cell / static_cast<double>(n);
  const detail::PointwiseKernel kernel(model);

  // flat |k|^2 table
  std::vector<double> k2(n);
  for (std::size_t i = 0; i < n; ++i) k2[i] = spectral_k2(g, i);

  TrajectoryRecord rec;
  rec.sample_interval = controls.effective_sample_interval();

  // state buffers: physical + spectral representation of the current u
  AlignedComplexVector phys = u0.values();
  AlignedComplexVector hat = phys;
  fft::forward(g, hat);
  AlignedComplexVector cand_hat(n), cand_phys(n);

  auto pointwise_scan = [&](const AlignedComplexVector& f) {
    detail::StepScalars s;
    double m = 0.0, pot = 0.0, mr = 0.0, ma = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a2 = abs2(f[i]);
      m += a2;
      pot += kernel.G_from_a2(a2);
      if (a2 > ma) ma = a2;
    }
    mr = kernel.rate_from_a2(ma);
    s.mass = cell * m;
    s.potential = cell * pot;
    s.max_rate = mr;
    s.max_a2 = ma;
    return s;
  };
  auto spectral_kinetic = [&](const AlignedComplexVector& h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += k2[i] * abs2(h[i]);
    return spec_norm * acc;
  };

  detail::StepScalars cur = pointwise_scan(phys);
  cur.kinetic = spectral_kinetic(hat);
  const double kinetic0 = cur.kinetic;
  const double grad0 = std::sqrt(kinetic0);
  const double amp0 = std::sqrt(cur.max_a2);
  auto cheap_S = [&](const detail::StepScalars& s) {
    return 0.5 * s.kinetic + 0.5 * omega * s.mass - s.potential;
  };
  double S_prev = cheap_S(cur);

  // initial sample

  auto make_field = [&](const AlignedComplexVector& f) { return ComplexField(g, f); };
  auto full_sample = [&](double t, double dt, const AlignedComplexVector& f) {
    ComplexField uf = make_field(f);
    TrajectorySample s;
    s.t = t;
    s.dt = dt;
    s.report = evaluate(uf, model, omega);
    s.grad_norm = std::sqrt(s.report.kinetic);
    s.f_moment = weighted_moment(uf);
    s.leak = boundary_mass_fraction(uf, kCoreFraction);
    s.tail_fraction = spectral_tail_fraction(uf);
    s.valid = s.leak <= kValidityLeakTol && s.tail_fraction <= kValidityTailTol &&
              std::isfinite(s.report.S);
    if (controls.level_m) s.membership = set_membership(s.report, *controls.level_m);
    if (probe) probe(s, uf);
    return s;
  };

  rec.samples.push_back(full_sample(0.0, 0.0, phys));
  rec.initial_scale = std::abs(rec.samples.front().report.S) + rec.samples.front().report.kinetic;
  const double drift_budget = controls.energy_drift_tol * rec.initial_scale;

  double t = 0.0;
  double dt_target = controls.dt_initial;
  std::size_t sample_index = 1;  // next uniform sample to hit
  double next_sample = rec.sample_interval;
  int clean_streak = 0;
  bool done = false;

  // cached half-kinetic phase table, rebuilt when dt changes
  AlignedComplexVector half_phase(n);
  double cached_dt = -1.0;
  auto build_phase = [&](double dt) {
    if (dt == cached_dt) return;
    for (std::size_t i = 0; i < n; ++i) {
      const double phase = -0.5 * dt * k2[i];
      half_phase[i] = Complex{std::cos(phase), std::sin(phase)};
    }
    cached_dt = dt;
  };

  while (!done) {
    // step-size selection: controller target, phase cap, event alignment
    double dt = std::min(dt_target, controls.dt_max);
    if (cur.max_rate > 0.0) dt = std::min(dt, controls.phase_rotation_cap / cur.max_rate);
    dt = std::max(dt, controls.dt_min);
    bool clamped = false;
    const double next_event = std::min(next_sample, controls.t_max);
    if (t + dt >= next_event - 1e-14 * next_event) {
      dt = next_event - t;
      clamped = true;
    }
    if (!(dt > 0.0)) {
      rec.termination = Termination::step_underflow;
      break;
    }

    // attempt one Strang step into the candidate buffers
    build_phase(dt);
    for (std::size_t i = 0; i < n; ++i) cand_hat[i] = hat[i] * half_phase[i];
    cand_phys = cand_hat;
    fft::inverse(g, cand_phys);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = dt * kernel.rate_from_a2(abs2(cand_phys[i]));
      cand_phys[i] *= Complex{std::cos(theta), std::sin(theta)};
    }
    cand_hat = cand_phys;
    fft::forward(g, cand_hat);
    for (std::size_t i = 0; i < n; ++i) cand_hat[i] *= half_phase[i];
    cand_phys = cand_hat;
    fft::inverse(g, cand_phys);

    detail::StepScalars cand = pointwise_scan(cand_phys);
    cand.kinetic = spectral_kinetic(cand_hat);
    const double S_new = cheap_S(cand);

    const bool finite = std::isfinite(S_new) && std::isfinite(cand.mass);
    if (!finite || std::abs(S_new - S_prev) > drift_budget) {
      // reject and halve (non-finite values are treated as a failed step)
      rec.rejected_steps++;
      clean_streak = 0;
      const double dt_next = 0.5 * dt;
      if (dt_next < controls.dt_min) {
        rec.termination = Termination::step_underflow;
        break;
      }
      dt_target = dt_next;
      continue;
    }

    // accept
    std::swap(phys, cand_phys);
    std::swap(hat, cand_hat);
    cur = cand;
    S_prev = S_new;
    t += dt;
    rec.steps++;
    rec.dt_history.push_back(dt);
    rec.dt_clamped.push_back(clamped ? 1 : 0);
    if (++clean_streak >= 10 && !clamped) {
      dt_target = std::min(2.0 * dt_target, controls.dt_max);
      clean_streak = 0;
    }

    const double ratio = std::sqrt(cur.kinetic / kinetic0);
    rec.max_grad_ratio = std::max(rec.max_grad_ratio, ratio);
    if (amp0 > 0.0)
      rec.max_amplitude_ratio = std::max(rec.max_amplitude_ratio, std::sqrt(cur.max_a2) / amp0);

    if (ratio >= controls.blowup_gradient_ratio) {
      rec.termination = Termination::blowup_detected;
      done = true;
    }

    // uniform sampling (steps land exactly on the boundaries; snap t to the
    // ladder so rounding does not accumulate)
    if (!done && std::abs(t - next_sample) <= 1e-12 * std::max(1.0, next_sample)) {
      t = next_sample;
      rec.samples.push_back(full_sample(next_sample, dt, phys));
      ++sample_index;
      next_sample = rec.sample_interval * static_cast<double>(sample_index);
      if (rec.samples.back().leak > controls.leak_tol) {
        rec.termination = Termination::leak_violation;
        done = true;
      }
    }
    if (!done && t >= controls.t_max - 1e-14 * controls.t_max) {
      rec.termination = Termination::reached_t_max;
      done = true;
    }
  }

  rec.t_end = t;
  // terminal state (off the uniform sample ladder when termination hit mid-interval)
  if (rec.samples.empty() || rec.samples.back().t < t - 1e-12 * std::max(1.0, t))
    rec.terminal = full_sample(t, rec.dt_history.empty() ? 0.0 : rec.dt_history.back(), phys);

  // ------------------------------------------------------------------ verdict
  BlowupVerdict verdict;
  const FunctionalReport& rep0 = rec.samples.front().report;
  if (controls.level_m && *controls.level_m - rep0.S > 0.0)
    verdict.delta = *controls.level_m - rep0.S;

  // Q uniform bound and variance parabola, scored on valid samples only
  if (verdict.delta) {
    const double delta = *verdict.delta;
    bool q_ok = true;
    for (const auto& s : rec.samples)
      if (s.valid && !(s.report.Q <= -delta + 1e-3 * delta)) q_ok = false;
    verdict.q_bound_ok = q_ok;

    // f'(0) from the second-order one-sided difference (exact for parabolas;
    // the two-point slope would fail the bound identically at the first sample)
    if (rec.samples.size() >= 3) {
      const double dt_s = rec.sample_interval;
      const double f0 = rec.samples[0].f_moment;
      const double fp0 = (-3.0 * rec.samples[0].f_moment + 4.0 * rec.samples[1].f_moment -
                          rec.samples[2].f_moment) /
                         (2.0 * dt_s);
      bool p_ok = true;
      for (const auto& s : rec.samples) {
        if (!s.valid) continue;
        const double bound = f0 + fp0 * s.t - delta * s.t * s.t * (1.0 - 1e-3) +
                             1e-12 * std::max(1.0, f0);
        if (!(s.f_moment <= bound)) p_ok = false;
      }
      verdict.parabola_ok = p_ok;
      const double disc = fp0 * fp0 + 4.0 * delta * f0;
      if (disc >= 0.0) verdict.t_cross_parabola = (fp0 + std::sqrt(disc)) / (2.0 * delta);
    }
  }

  // classification
  const double leak_end = rec.last_state().leak;
  auto collapse_tail = [&]() -> std::optional<double> {
    // geometric ratio of the unclamped step sizes near termination
    std::vector<double> tail;
    for (std::size_t i = rec.dt_history.size(); i-- > 0 && tail.size() < 12;)
      if (!rec.dt_clamped[i]) tail.push_back(rec.dt_history[i]);
    if (tail.size() < 4) return std::nullopt;
    const double r = std::pow(tail.front() / tail.back(), 1.0 / static_cast<double>(tail.size() - 1));
    return r;  // tail is reversed: front = last step
  };
  const bool concentrating = rec.max_amplitude_ratio >= 2.0 && leak_end <= controls.leak_tol;

  switch (rec.termination) {
    case Termination::blowup_detected:
    case Termination::step_underflow: {
      const auto r = collapse_tail();
      const bool dt_collapsing = r && *r < 0.999;
      const bool detected = rec.max_grad_ratio >= controls.blowup_gradient_ratio ||
                            rec.termination == Termination::step_underflow;
      if (detected && dt_collapsing && concentrating) {
        verdict.status = BlowupStatus::blew_up;
        const double dt_last = rec.dt_history.empty() ? 0.0 : rec.dt_history.back();
        verdict.T_estimate = rec.t_end + dt_last * *r / (1.0 - *r);
      } else {
        verdict.status = BlowupStatus::inconclusive;
      }
      break;
    }
    case Termination::reached_t_max:
      verdict.status = BlowupStatus::stable_window;
      break;
    case Termination::leak_violation:
      verdict.status = BlowupStatus::inconclusive;
      break;
  }
  return {std::move(rec), verdict};
}

// --------------------------------------------------------------------------
// Diagnostics on recorded trajectories
// --------------------------------------------------------------------------

// Worst relative error of the virial identity d^2/dt^2 f = 8 Q over interior
// valid samples, scored against |8 Q| plus a fixed floor from the initial
// functional scale.
inline double virial_check(const TrajectoryRecord& rec) {
  if (rec.samples.size() < 5)
    throw DomainError("virial_check: need at least 5 uniform samples");
  const double dt = rec.sample_interval;
  const FunctionalReport& rep0 = rec.samples.front().report;
  const double floor = 1e-2 * 8.0 * (rep0.kinetic + rep0.omega * rep0.mass);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < rec.samples.size(); ++i) {
    const auto& a = rec.samples[i - 1];
    const auto& b = rec.samples[i];
    const auto& c = rec.samples[i + 1];
    if (!(a.valid && b.valid && c.valid)) continue;
    const double lhs = (c.f_moment - 2.0 * b.f_moment + a.f_moment) / (dt * dt);
    const double rhs = 8.0 * b.report.Q;
    worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(rhs) + floor));
  }
  return worst;
}

// (max relative mass drift, max relative action drift) over valid samples.
inline std::pair<double, double> conservation_check(const TrajectoryRecord& rec) {
  require(rec.samples.size() >= 2, "conservation_check: need at least 2 samples");
  const double mass0 = rec.samples.front().report.mass;
  const double S0 = rec.samples.front().report.S;
  const double scale = rec.initial_scale;
  double dm = 0.0, dS = 0.0;
  for (const auto& s : rec.samples) {
    if (!s.valid) continue;
    dm = std::max(dm, std::abs(s.report.mass - mass0) / std::max(mass0, 1e-300));
    dS = std::max(dS, std::abs(s.report.S - S0) / std::max(scale, 1e-300));
  }
  return {dm, dS};
}

}  // namespace nlslab
