// acsim: access-control scheme suitability analysis toolkit.
//
// Modes: simulate (one seeded run), montecarlo (independent runs in
// parallel), ci (confidence-bounded estimation), verify (bounded
// state-matching check), list-schemes.
//
// Exit codes: 0 success, 1 configuration error, 2 invariant breach,
// 3 verification counterexample.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "acsim/config.hpp"
#include "acsim/mapping.hpp"
#include "acsim/schemes.hpp"

namespace {

using namespace acsim;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInvariantBreach = 2;
constexpr int kCounterexample = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  bool print_config = false;
  ExperimentConfig cfg;

  // CLI flags override config-file values when given.
  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--out", out_dir, "output directory");
    app->add_flag("--print-config", print_config,
                  "echo the effective config as JSON and exit");
    app->add_option("--runs", cfg.runs, "Monte Carlo run count");
    app->add_option("--seed", cfg.seed, "master RNG seed");
    app->add_option("--goal-hours", cfg.goal_hours, "simulated hours T_f");
    app->add_option("--step-seconds", cfg.step_seconds, "time step t");
    app->add_option("--confidence", cfg.confidence, "CI confidence u");
    app->add_option("--tolerance", cfg.tolerance, "CI relative tolerance v");
    app->add_option("--max-runs", cfg.max_runs, "CI run cap");
  }

  void load(CLI::App* app) {
    if (!config_path.empty()) {
      ExperimentConfig from_file = load_config(config_path);
      // Re-apply any flags the user passed on top of the file values.
      ExperimentConfig flags = cfg;
      cfg = from_file;
      if (app->count("--runs")) cfg.runs = flags.runs;
      if (app->count("--seed")) cfg.seed = flags.seed;
      if (app->count("--goal-hours")) cfg.goal_hours = flags.goal_hours;
      if (app->count("--step-seconds")) cfg.step_seconds = flags.step_seconds;
      if (app->count("--confidence")) cfg.confidence = flags.confidence;
      if (app->count("--tolerance")) cfg.tolerance = flags.tolerance;
      if (app->count("--max-runs")) cfg.max_runs = flags.max_runs;
    }
    if (print_config) {
      std::cout << to_json(cfg).dump(2) << std::endl;
    }
  }

  std::filesystem::path out_path(const std::string& name) const {
    if (out_dir.empty()) return name;
    std::filesystem::create_directories(out_dir);
    return std::filesystem::path(out_dir) / name;
  }
};

int do_simulate(const CommonOpts& opts) {
  SimConfig sim = opts.cfg.sim_config();
  std::vector<RunRecord> recs = simulate(sim);
  std::ofstream jsonl(opts.out_path("run_0.jsonl"));
  write_jsonl(jsonl, recs, sim.measures, 0);
  std::ofstream csv(opts.out_path("summary.csv"));
  write_csv(csv, {recs}, sim.measures);
  for (const RunRecord& rec : recs) {
    std::cout << rec.scheme;
    for (std::size_t i = 0; i < sim.measures.size(); ++i) {
      std::cout << "  " << sim.measures[i].name << '='
                << scalar_total(rec.totals[i]);
    }
    std::cout << '\n';
  }
  return kOk;
}

int do_montecarlo(const CommonOpts& opts) {
  SimConfig sim = opts.cfg.sim_config();
  auto runs = monte_carlo(sim, opts.cfg.runs);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::ofstream jsonl(opts.out_path("run_" + std::to_string(k) + ".jsonl"));
    write_jsonl(jsonl, runs[k], sim.measures, k);
  }
  std::ofstream csv(opts.out_path("summary.csv"));
  write_csv(csv, runs, sim.measures);
  auto summary = summarize(runs, sim.measures);
  for (const auto& [scheme, per_measure] : summary) {
    std::cout << scheme << '\n';
    for (const auto& [measure, w] : per_measure) {
      std::cout << "  " << measure << ": mean=" << w.mean()
                << " var=" << (w.count() > 1 ? w.variance() : 0.0)
                << " min=" << w.min() << " max=" << w.max() << '\n';
    }
  }
  return kOk;
}

int do_ci(const CommonOpts& opts) {
  SimConfig sim = opts.cfg.sim_config();
  std::size_t midx = sim.time_index();
  for (std::size_t i = 0; i < sim.measures.size(); ++i) {
    if (sim.measures[i].name == opts.cfg.ci_measure) midx = i;
  }
  CiReport rep = ci_run(
      sim,
      [midx](const std::vector<RunRecord>& recs) {
        double total = 0.0;
        for (const RunRecord& rec : recs) total += scalar_total(rec.totals[midx]);
        return total;
      },
      opts.cfg.confidence, opts.cfg.tolerance, opts.cfg.max_runs);
  nlohmann::json out{{"measure", opts.cfg.ci_measure},
                     {"mean", rep.mean},
                     {"variance", rep.variance},
                     {"runs", rep.runs},
                     {"half_width", rep.half_width},
                     {"confidence", rep.confidence},
                     {"tolerance", rep.tolerance},
                     {"terminated_by", rep.hit_cap ? "cap" : "tolerance"},
                     {"note", rep.note}};
  std::cout << out.dump(2) << std::endl;
  return kOk;
}

struct VerifyOpts {
  std::string workload = "gms";
  std::string scheme = "rbac_u";
  std::string impl = "sigma_r";
  std::size_t depth = 2;
  std::size_t users = 2;
  std::size_t groups = 1;
  std::size_t messages = 2;
  std::size_t subjects = 2;
  std::size_t objects = 2;
};

int do_verify(const VerifyOpts& v) {
  Scheme workload = make_scheme(v.workload);
  Scheme target = make_scheme(v.scheme);
  Implementation impl = make_implementation(v.impl);
  Universe universe;
  RelationalState start;
  if (v.workload == "gms" || v.workload == "sd3gm") {
    universe = gms_universe(static_cast<int>(v.users),
                            static_cast<int>(v.groups),
                            static_cast<int>(v.messages));
  } else {
    universe = dac_universe(static_cast<int>(v.subjects),
                            static_cast<int>(v.objects));
  }
  Universe target_u = target_universe(v.impl, universe);
  MatchingReport rep = verify_state_matching(workload, target, impl, start,
                                             v.depth, universe, &target_u);
  nlohmann::json out{{"workload", v.workload},
                     {"scheme", v.scheme},
                     {"impl", v.impl},
                     {"depth", v.depth},
                     {"property1", rep.property1_holds},
                     {"property2", rep.property2_holds},
                     {"workload_states", rep.workload_states},
                     {"target_states", rep.target_states},
                     {"bound_sufficient", rep.bound_sufficient()},
                     {"verdict", rep.verified()
                                     ? (rep.bound_sufficient() ? "verified"
                                                               : "verified-to-bound")
                                     : "counterexample"}};
  if (!rep.verified()) {
    nlohmann::json trace = nlohmann::json::array();
    for (const CommandInstance& ci : rep.counterexample) {
      trace.push_back(nlohmann::json{{"command", ci.name},
                                     {"args", detail::args_to_json(ci.args)}});
    }
    out["counterexample_property"] = rep.counterexample_property;
    out["counterexample_trace"] = trace;
  }
  std::cout << out.dump(2) << std::endl;
  return rep.verified() ? kOk : kCounterexample;
}

int do_list_schemes() {
  for (const auto& [name, entry] : scheme_registry()) {
    std::cout << name << "  " << entry.description << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"access-control scheme suitability analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  VerifyOpts vopts;

  CLI::App* sim = app.add_subcommand("simulate", "one seeded simulation run");
  opts.attach(sim);
  CLI::App* mc = app.add_subcommand("montecarlo", "independent Monte Carlo runs");
  opts.attach(mc);
  CLI::App* ci = app.add_subcommand("ci", "confidence-bounded estimation");
  opts.attach(ci);
  CLI::App* verify =
      app.add_subcommand("verify", "bounded state-matching verification");
  verify->add_option("--workload", vopts.workload, "workload scheme name");
  verify->add_option("--scheme", vopts.scheme, "target scheme name");
  verify->add_option("--impl", vopts.impl, "implementation name");
  verify->add_option("--depth", vopts.depth, "exploration depth");
  verify->add_option("--users", vopts.users, "universe users");
  verify->add_option("--groups", vopts.groups, "universe groups");
  verify->add_option("--messages", vopts.messages, "universe messages");
  verify->add_option("--subjects", vopts.subjects, "universe subjects");
  verify->add_option("--objects", vopts.objects, "universe objects");
  CLI::App* list = app.add_subcommand("list-schemes", "list built-in schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    CLI::App* active = sim->parsed()      ? sim
                       : mc->parsed()     ? mc
                       : ci->parsed()     ? ci
                       : verify->parsed() ? verify
                                          : list;
    if (active == sim || active == mc || active == ci) {
      opts.load(active);
      if (opts.print_config) return kOk;
    }
    if (active == sim) return do_simulate(opts);
    if (active == mc) return do_montecarlo(opts);
    if (active == ci) return do_ci(opts);
    if (active == verify) return do_verify(vopts);
    return do_list_schemes();
  } catch (const acsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const acsim::InvariantViolation& e) {
    std::cerr << "invariant breach: " << e.what() << '\n';
    return kInvariantBreach;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
