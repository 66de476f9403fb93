// io.hpp — CSV and JSON serialization plus atomic file writes (temp + rename).

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nlslab/dynamics.hpp"
#include "nlslab/experiment.hpp"
#include "nlslab/field.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/nonlinearity.hpp"
#include "nlslab/rescale.hpp"
#include "nlslab/variational.hpp"

namespace nlslab::io {

using nlohmann::json;

// 17 significant digits: round-trip exact for doubles
inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Write via a temporary file in the same directory, then rename. A killed run
// never leaves a partially written file at the final path.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("atomic_write_text: cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("atomic_write_text: write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Field CSV: columns x[,y[,z]], re, im (row-major); grid metadata in a sidecar
// ---------------------------------------------------------------------------

inline void write_field_csv(const std::filesystem::path& csv_path, const ComplexField& v) {
  const GridSpec& g = v.grid();
  std::ostringstream out;
  static const char* axes[] = {"x", "y", "z"};
  for (int d = 0; d < g.dimension; ++d) out << axes[d] << ",";
  out << "re,im\n";
  const std::size_t n = v.size();
  for (std::size_t flat = 0; flat < n; ++flat) {
    const auto idx = g.unflatten(flat);
    for (int d = 0; d < g.dimension; ++d)
      out << g17(g.coordinate(idx[static_cast<std::size_t>(d)])) << ",";
    out << g17(v[flat].real()) << "," << g17(v[flat].imag()) << "\n";
  }
  atomic_write_text(csv_path, out.str());
}

inline json grid_to_json(const GridSpec& g) {
  return json{{"dimension", g.dimension},
              {"half_length", g.half_length},
              {"points_per_axis", g.points_per_axis},
              {"spacing", g.spacing()}};
}

inline void save_field(const std::filesystem::path& dir, const std::string& name,
                       const ComplexField& v) {
  write_field_csv(dir / (name + ".csv"), v);
  atomic_write_text(dir / (name + ".grid.json"), grid_to_json(v.grid()).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// JSON views of the report types
// ---------------------------------------------------------------------------

inline json to_json(const FunctionalReport& r) {
  return json{{"S", r.S},         {"I", r.I},           {"Q", r.Q},     {"mass", r.mass},
              {"kinetic", r.kinetic}, {"potential", r.potential}, {"omega", r.omega}};
}

inline json to_json(const AdmissibilityReport& r) {
  json j{{"a0b_ok", r.a0b_ok},     {"a1_ok", r.a1_ok},
         {"cond3_ok", r.cond3_ok}, {"cond4_ok", r.cond4_ok},
         {"supercritical", r.supercritical}, {"borderline", r.borderline},
         {"notes", r.notes}};
  if (r.s0) j["s0"] = *r.s0;
  return j;
}

inline json to_json(const GroundStateResult& r) {
  return json{{"method", to_string(r.method)},
              {"omega", r.omega},
              {"level_m", r.level_m},
              {"residual_rel", r.residual_rel},
              {"iterations", r.iterations}};
}

inline json to_json(const ScalingScan& s) {
  json j{{"concave_past_lambda0", s.concave_past_lambda0},
         {"derivative_identity_max_error", s.derivative_identity_max_error},
         {"points", s.lambdas.size()},
         {"truncated", s.truncated}};
  if (!s.note.empty()) j["note"] = s.note;
  if (s.lambda0) j["lambda0"] = *s.lambda0;
  if (s.lambda1) j["lambda1"] = *s.lambda1;
  return j;
}

inline void write_scan_csv(const std::filesystem::path& path, const ScalingScan& s) {
  std::ostringstream out;
  out << "lambda,S,Q,I\n";
  for (std::size_t i = 0; i < s.lambdas.size(); ++i)
    out << g17(s.lambdas[i]) << "," << g17(s.S_curve[i]) << "," << g17(s.Q_curve[i]) << ","
        << g17(s.I_curve[i]) << "\n";
  atomic_write_text(path, out.str());
}

inline json to_json(const VariationalReport& r) {
  return json{{"m_ref", r.m_ref},
              {"d_omega_est", r.d_omega_est},
              {"d_M_est", r.d_M_est},
              {"c_est", r.c_est},
              {"family_size", r.family_size},
              {"worst_constraint_violation", r.worst_constraint_violation}};
}

inline void write_members_csv(const std::filesystem::path& path, const VariationalReport& r) {
  std::ostringstream out;
  out << "member_id,S_projected,t_star,lambda0,admitted\n";
  for (const auto& m : r.members) {
    out << m.id << ",";
    out << (m.S_projected ? g17(*m.S_projected) : "") << ",";
    out << (m.t_star ? g17(*m.t_star) : "") << ",";
    out << (m.lambda0 ? g17(*m.lambda0) : "") << ",";
    out << (m.admitted ? "1" : "0") << "\n";
  }
  atomic_write_text(path, out.str());
}

inline void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec) {
  std::ostringstream out;
  out << "t,dt,mass,S,I,Q,grad_norm,f,leak,in_set\n";
  auto row = [&out](const TrajectorySample& s) {
    const int in_set = s.membership && s.membership->in_invariant_set ? 1 : 0;
    out << g17(s.t) << "," << g17(s.dt) << "," << g17(s.report.mass) << "," << g17(s.report.S)
        << "," << g17(s.report.I) << "," << g17(s.report.Q) << "," << g17(s.grad_norm) << ","
        << g17(s.f_moment) << "," << g17(s.leak) << "," << in_set << "\n";
  };
  for (const auto& s : rec.samples) row(s);
  if (rec.terminal) row(*rec.terminal);
  atomic_write_text(path, out.str());
}

inline json to_json(const BlowupVerdict& v) {
  json j{{"status", to_string(v.status)},
         {"parabola_ok", v.parabola_ok},
         {"q_bound_ok", v.q_bound_ok}};
  if (v.T_estimate) j["T_estimate"] = *v.T_estimate;
  if (v.t_cross_parabola) j["t_cross_parabola"] = *v.t_cross_parabola;
  if (v.delta) j["delta"] = *v.delta;
  return j;
}

inline json to_json(const TrajectoryRecord& rec) {
  return json{{"termination", to_string(rec.termination)},
              {"t_end", rec.t_end},
              {"steps", rec.steps},
              {"rejected_steps", rec.rejected_steps},
              {"samples", rec.samples.size()},
              {"sample_interval", rec.sample_interval},
              {"max_grad_ratio", rec.max_grad_ratio},
              {"max_amplitude_ratio", rec.max_amplitude_ratio}};
}

inline json to_json(const EntryConditions& e) {
  return json{{"s_below_m", e.s_below_m}, {"q_negative", e.q_negative},
              {"i_negative", e.i_negative}, {"margin_s", e.margin_s},
              {"margin_q", e.margin_q},     {"margin_i", e.margin_i}};
}

inline json to_json(const ExperimentReport& r) {
  json j{{"lambda", r.lambda},
         {"m", r.m},
         {"ground_state", {{"method", r.gs_method}, {"residual_rel", r.gs_residual}}},
         {"entry_conditions", to_json(r.entry)},
         {"delta", r.delta},
         {"epsilon_h1", r.epsilon_h1},
         {"scaling_crosscheck", r.scaling_crosscheck},
         {"invariance_ok", r.invariance_ok},
         {"sign_flips", r.sign_flips},
         {"q_bound_ok", r.q_bound_ok},
         {"parabola_ok", r.parabola_ok},
         {"chord", {{"checks", r.chord.checks}, {"failures", r.chord.failures},
                    {"worst_defect", r.chord.worst_defect}}},
         {"virial_error", r.virial_error},
         {"mass_drift", r.mass_drift},
         {"action_drift", r.action_drift},
         {"verdict", to_json(r.verdict)},
         {"trajectory", to_json(r.record)},
         {"borderline", r.borderline},
         {"pass", r.pass}};
  if (r.variational) j["variational"] = to_json(*r.variational);
  return j;
}

}  // namespace nlslab::io
