#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acsim/case_study.hpp"
#include "acsim/schemes.hpp"
#include "acsim/sim.hpp"

namespace acsim {

// Experiment configuration as read from the JSON config file. Rates are
// events per simulated hour here; CaseParams wants events per second.
struct ExperimentConfig {
  std::size_t users = 20;
  std::size_t groups = 3;
  std::vector<std::string> impls = {"sigma_r", "sigma_d", "sigma_s"};

  // events per simulated hour
  double post_rate = 6.0;
  double self_leave_rate = 0.05;
  double coi_rate = 0.5;
  double sadd_rate = 2.0;
  double ladd_rate = 1.0;
  double sremove_rate = 0.5;
  double lremove_rate = 0.5;
  double grant_admin_rate = 0.2;
  double revoke_admin_rate = 0.1;
  double coi_serve_rate = 6.0;
  double coi_owner_rate = 6.0;
  double seconds_per_command = 0.25;

  double goal_hours = 1.0;
  double step_seconds = 1.0;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  double confidence = 0.90;
  double tolerance = 0.10;
  std::size_t max_runs = 1000;
  std::string ci_measure = "time";

  CaseParams case_params() const {
    CaseParams p;
    p.users = users;
    p.groups = groups;
    p.post_rate = post_rate / 3600.0;
    p.self_leave_rate = self_leave_rate / 3600.0;
    p.coi_rate = coi_rate / 3600.0;
    p.sadd_rate = sadd_rate / 3600.0;
    p.ladd_rate = ladd_rate / 3600.0;
    p.sremove_rate = sremove_rate / 3600.0;
    p.lremove_rate = lremove_rate / 3600.0;
    p.grant_admin_rate = grant_admin_rate / 3600.0;
    p.revoke_admin_rate = revoke_admin_rate / 3600.0;
    p.coi_serve_rate = coi_serve_rate / 3600.0;
    p.coi_owner_rate = coi_owner_rate / 3600.0;
    p.seconds_per_command = seconds_per_command;
    return p;
  }

  SimConfig sim_config() const {
    return case_study_config(case_params(), seed, goal_hours * 3600.0,
                             step_seconds, impls);
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return nlohmann::json{{"users", c.users},
                        {"groups", c.groups},
                        {"impls", c.impls},
                        {"post_rate", c.post_rate},
                        {"self_leave_rate", c.self_leave_rate},
                        {"coi_rate", c.coi_rate},
                        {"sadd_rate", c.sadd_rate},
                        {"ladd_rate", c.ladd_rate},
                        {"sremove_rate", c.sremove_rate},
                        {"lremove_rate", c.lremove_rate},
                        {"grant_admin_rate", c.grant_admin_rate},
                        {"revoke_admin_rate", c.revoke_admin_rate},
                        {"coi_serve_rate", c.coi_serve_rate},
                        {"coi_owner_rate", c.coi_owner_rate},
                        {"seconds_per_command", c.seconds_per_command},
                        {"goal_hours", c.goal_hours},
                        {"step_seconds", c.step_seconds},
                        {"seed", c.seed},
                        {"runs", c.runs},
                        {"confidence", c.confidence},
                        {"tolerance", c.tolerance},
                        {"max_runs", c.max_runs},
                        {"ci_measure", c.ci_measure}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ExperimentConfig c;
  nlohmann::json known = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key))
      throw ConfigError("unknown config key: '" + key + "'");
    (void)value;
  }
  auto get = [&j](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("users", c.users);
  get("groups", c.groups);
  get("impls", c.impls);
  get("post_rate", c.post_rate);
  get("self_leave_rate", c.self_leave_rate);
  get("coi_rate", c.coi_rate);
  get("sadd_rate", c.sadd_rate);
  get("ladd_rate", c.ladd_rate);
  get("sremove_rate", c.sremove_rate);
  get("lremove_rate", c.lremove_rate);
  get("grant_admin_rate", c.grant_admin_rate);
  get("revoke_admin_rate", c.revoke_admin_rate);
  get("coi_serve_rate", c.coi_serve_rate);
  get("coi_owner_rate", c.coi_owner_rate);
  get("seconds_per_command", c.seconds_per_command);
  get("goal_hours", c.goal_hours);
  get("step_seconds", c.step_seconds);
  get("seed", c.seed);
  get("runs", c.runs);
  get("confidence", c.confidence);
  get("tolerance", c.tolerance);
  get("max_runs", c.max_runs);
  get("ci_measure", c.ci_measure);
  for (const std::string& impl : c.impls) {
    (void)make_implementation(impl);  // throws ConfigError on unknown names
  }
  if (c.users < 1) throw ConfigError("config: users must be >= 1");
  if (c.groups < 1) throw ConfigError("config: groups must be >= 1");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return config_from_json(j);
}

namespace detail {

inline nlohmann::json value_to_json(const Value& v) {
  if (v.is_atom()) return v.atom.sort + ":" + v.atom.id;
  return v.num;
}

inline nlohmann::json args_to_json(const Args& args) {
  nlohmann::json out = nlohmann::json::array();
  for (const Value& v : args) out.push_back(value_to_json(v));
  return out;
}

}  // namespace detail

// One JSON line per event, then one summary line per (scheme, measure).
// nlohmann::json orders object keys, so equal records serialize to equal
// bytes.
inline void write_jsonl(std::ostream& out, const std::vector<RunRecord>& recs,
                        const std::vector<CostMeasure>& measures,
                        std::uint64_t run_index) {
  for (const RunRecord& rec : recs) {
    for (const SimEvent& ev : rec.events) {
      nlohmann::json costs = nlohmann::json::object();
      for (std::size_t i = 0; i < ev.costs.size(); ++i) {
        costs[measures[i].name] = scalar_total(ev.costs[i]);
      }
      nlohmann::json expansion = nlohmann::json::array();
      for (const CommandInstance& ci : ev.expansion) {
        expansion.push_back(nlohmann::json{
            {"command", ci.name}, {"args", detail::args_to_json(ci.args)}});
      }
      nlohmann::json line{{"run", run_index},
                          {"scheme", rec.scheme},
                          {"at", ev.at},
                          {"actor", ev.actor},
                          {"action", ev.action},
                          {"command", ev.command},
                          {"args", detail::args_to_json(ev.args)},
                          {"expansion", expansion},
                          {"fired", ev.fired},
                          {"status", to_string(ev.status)},
                          {"costs", costs}};
      out << line.dump() << '\n';
    }
    for (std::size_t i = 0; i < measures.size(); ++i) {
      nlohmann::json line{{"run", run_index},
                          {"scheme", rec.scheme},
                          {"measure", measures[i].name},
                          {"total", scalar_total(rec.totals[i])},
                          {"seed", rec.seed}};
      out << line.dump() << '\n';
    }
  }
}

inline std::string csv_header(const std::vector<CostMeasure>& measures) {
  std::string h = "run,scheme,users,admins";
  for (const CostMeasure& m : measures) h += "," + m.name;
  h += ",roles,role_user_ratio,coi_attempted,coi_completed,wall_ms";
  return h;
}

inline void write_csv(std::ostream& out,
                      const std::vector<std::vector<RunRecord>>& runs,
                      const std::vector<CostMeasure>& measures) {
  out << csv_header(measures) << '\n';
  for (std::size_t k = 0; k < runs.size(); ++k) {
    for (const RunRecord& rec : runs[k]) {
      auto metric = [&rec](const char* name) {
        auto it = rec.metrics.find(name);
        return it == rec.metrics.end() ? 0.0 : it->second;
      };
      std::ostringstream row;
      row << k << ',' << rec.scheme << ',' << metric("users") << ','
          << metric("admins");
      for (std::size_t i = 0; i < measures.size(); ++i) {
        row << ',' << scalar_total(rec.totals[i]);
      }
      row << ',' << metric("roles") << ',' << metric("role_user_ratio") << ','
          << rec.wsat.instances_created << ',' << rec.wsat.instances_completed
          << ',' << rec.wall_ms;
      out << row.str() << '\n';
    }
  }
}

}  // namespace acsim
