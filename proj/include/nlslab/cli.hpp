// cli.hpp — subcommand dispatch: config ingestion, overrides, atomic output
// writing, machine-readable exit codes. Kept header-side so the test suite
// can drive the CLI without spawning processes.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlslab/config.hpp"
#include "nlslab/io.hpp"
#include "nlslab/version.hpp"

namespace nlslab::cli {

// exit codes: 0 pass/ok, 2 fail, 3 inconclusive/borderline, 64 bad config,
// 1 numeric failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitConfig = 64;

namespace detail {

using nlohmann::json;
namespace fs = std::filesystem;

struct Invocation {
  std::string subcommand;
  std::string config_path;
  std::string output_dir;  // optional CLI override
  std::vector<std::string> overrides;
};

inline json load_config(const Invocation& inv) {
  if (inv.config_path.empty()) throw ConfigError("missing --config");
  json cfg = config::load(inv.config_path);
  for (const auto& ov : inv.overrides) config::apply_override(cfg, ov);
  // precedence: --output-dir flag, then NLSLAB_OUTPUT_DIR, then config value
  if (!inv.output_dir.empty()) {
    cfg["output_dir"] = inv.output_dir;
  } else if (const char* env = std::getenv("NLSLAB_OUTPUT_DIR"); env && *env) {
    cfg["output_dir"] = std::string(env);
  }
  return cfg;
}

inline int cmd_admissibility(const json& cfg) {
  const auto model = config::build_model(cfg);
  const json& a = cfg.at("admissibility");
  const auto rep = model.check_admissibility(a.at("s_min").get<double>(),
                                             a.at("s_max").get<double>(),
                                             a.at("count").get<std::size_t>(),
                                             cfg.at("omega").get<double>());
  const fs::path dir = cfg.at("output_dir").get<std::string>();
  io::atomic_write_text(dir / "admissibility.json", io::to_json(rep).dump(2) + "\n");
  return kExitOk;
}

inline int cmd_groundstate(const json& cfg) {
  const auto exp = config::build_experiment(cfg);
  const GroundStateResult gs = experiment_ground_state(exp);
  const fs::path dir = exp.output_dir;
  io::atomic_write_text(dir / "groundstate.json", io::to_json(gs).dump(2) + "\n");
  io::save_field(dir, "profile", gs.field);
  return kExitOk;
}

inline int cmd_scan_lambda(const json& cfg) {
  const auto exp = config::build_experiment(cfg);
  const ComplexField seed = config::build_initial(cfg, exp);
  const json& lr = cfg.at("lambda_range");
  const ScalingScan s = scan(seed, exp.model, exp.omega, lr.at("min").get<double>(),
                             lr.at("max").get<double>(), lr.at("count").get<std::size_t>());
  const fs::path dir = exp.output_dir;
  io::write_scan_csv(dir / "scan.csv", s);
  io::atomic_write_text(dir / "scan.json", io::to_json(s).dump(2) + "\n");
  return kExitOk;
}

inline int cmd_variational(const json& cfg) {
  const auto exp = config::build_experiment(cfg);
  const GroundStateResult gs = experiment_ground_state(exp);
  const auto family = build_family(exp.grid, exp.family, &gs.field);
  const VariationalReport rep = variational_report(family, exp.model, exp.omega, gs.level_m);
  const fs::path dir = exp.output_dir;
  io::atomic_write_text(dir / "variational.json", io::to_json(rep).dump(2) + "\n");
  io::write_members_csv(dir / "members.csv", rep);
  return kExitOk;
}

inline int cmd_evolve(const json& cfg) {
  const auto exp = config::build_experiment(cfg);
  const ComplexField u0 = config::build_initial(cfg, exp);
  auto [record, verdict] = evolve(u0, exp.model, exp.omega, exp.controls);
  const fs::path dir = exp.output_dir;
  io::write_trajectory_csv(dir / "trajectory.csv", record);
  json v = io::to_json(verdict);
  v["trajectory"] = io::to_json(record);
  io::atomic_write_text(dir / "verdict.json", v.dump(2) + "\n");
  return kExitOk;
}

inline int write_instability_outputs(const fs::path& dir, const ExperimentReport& rep) {
  io::write_trajectory_csv(dir / "trajectory.csv", rep.record);
  io::atomic_write_text(dir / "report.json", io::to_json(rep).dump(2) + "\n");
  if (rep.pass) return kExitOk;
  return rep.verdict.status == BlowupStatus::inconclusive ? kExitInconclusive : kExitFail;
}

inline int cmd_instability(const json& cfg) {
  const auto exp = config::build_experiment(cfg);
  const fs::path dir = exp.output_dir;
  try {
    if (!exp.lambda_sweep.empty()) {
      // fan the sweep out concurrently; reports are assembled by index
      std::vector<std::future<ExperimentReport>> futures;
      for (double lam : exp.lambda_sweep) {
        ExperimentConfig one = exp;
        one.lambda = lam;
        one.variational_check = false;
        futures.push_back(
            std::async(std::launch::async, [one]() { return run_instability(one); }));
      }
      json sweep = json::array();
      int worst = kExitOk;
      for (std::size_t i = 0; i < futures.size(); ++i) {
        ExperimentReport rep = futures[i].get();
        const fs::path sub = dir / ("lambda_" + io::g17(exp.lambda_sweep[i]));
        worst = std::max(worst, write_instability_outputs(sub, rep));
        json row = io::to_json(rep);
        row.erase("variational");
        sweep.push_back(row);
      }
      io::atomic_write_text(dir / "sweep.json", sweep.dump(2) + "\n");
      return worst;
    }
    const ExperimentReport rep = run_instability(exp);
    return write_instability_outputs(dir, rep);
  } catch (const EntryConditionError& e) {
    json j{{"error", "entry_conditions"},
           {"message", e.what()},
           {"entry_conditions", io::to_json(e.entry())},
           {"pass", false}};
    io::atomic_write_text(dir / "report.json", j.dump(2) + "\n");
    std::cerr << "instability: " << e.what() << "\n";
    return kExitFail;
  }
}

inline int cmd_stability_contrast(const json& cfg) {
  const auto exp = config::build_experiment(cfg);
  const ExperimentReport rep = run_stability_contrast(exp);
  const fs::path dir = exp.output_dir;
  io::write_trajectory_csv(dir / "trajectory.csv", rep.record);
  io::atomic_write_text(dir / "report.json", io::to_json(rep).dump(2) + "\n");
  if (rep.borderline) return kExitInconclusive;
  return rep.pass ? kExitOk : kExitFail;
}

}  // namespace detail

inline int run(std::vector<std::string> args) {
  CLI::App app{"numerical laboratory for focusing NLS standing-wave instability"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);

  detail::Invocation inv;
  auto add_common = [&inv](CLI::App* sub) {
    sub->add_option("--config", inv.config_path, "JSON config file")->required();
    sub->add_option("--output-dir", inv.output_dir, "output directory (overrides config)");
    sub->add_option("--override", inv.overrides,
                    "dotted-path config override, e.g. controls.t_max=5");
  };
  for (const char* name : {"groundstate", "scan-lambda", "variational", "evolve", "instability",
                           "stability-contrast", "admissibility"})
    add_common(app.add_subcommand(name));

  // CLI11 wants argv in reverse order for parse(vector)
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // handles --help/--version with exit code 0
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cout << app.help();
    return kExitOk;
  }
  inv.subcommand = subs.front()->get_name();

  try {
    const auto cfg = detail::load_config(inv);
    if (inv.subcommand == "admissibility") return detail::cmd_admissibility(cfg);
    if (inv.subcommand == "groundstate") return detail::cmd_groundstate(cfg);
    if (inv.subcommand == "scan-lambda") return detail::cmd_scan_lambda(cfg);
    if (inv.subcommand == "variational") return detail::cmd_variational(cfg);
    if (inv.subcommand == "evolve") return detail::cmd_evolve(cfg);
    if (inv.subcommand == "instability") return detail::cmd_instability(cfg);
    if (inv.subcommand == "stability-contrast") return detail::cmd_stability_contrast(cfg);
    throw ConfigError("unknown subcommand '" + inv.subcommand + "'");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace nlslab::cli
