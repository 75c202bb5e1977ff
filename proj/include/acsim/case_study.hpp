#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "acsim/actor.hpp"
#include "acsim/schemes.hpp"
#include "acsim/sim.hpp"
#include "acsim/workflow.hpp"

namespace acsim {

// Group-messaging case study: population sizes and actor-machine rates.
// Rates are events per second; the CLI layer converts from events per
// simulated hour. The defaults model a chatty membership-heavy workload.
struct CaseParams {
  std::size_t users = 20;
  std::size_t groups = 3;

  double post_rate = 6.0 / 3600.0;           // member posts a message
  double self_leave_rate = 0.05 / 3600.0;    // member strict-leaves a group
  double coi_rate = 0.5 / 3600.0;            // member requests a COI leave
  double sadd_rate = 2.0 / 3600.0;           // admin strict-adds a member
  double ladd_rate = 1.0 / 3600.0;           // admin liberal-adds a member
  double sremove_rate = 0.5 / 3600.0;        // admin strict-removes a member
  double lremove_rate = 0.5 / 3600.0;        // admin liberal-removes a member
  double grant_admin_rate = 0.2 / 3600.0;    // owner promotes an admin
  double revoke_admin_rate = 0.1 / 3600.0;   // owner demotes an admin
  double coi_serve_rate = 6.0 / 3600.0;      // admin serves COI leave/return
  double coi_owner_rate = 6.0 / 3600.0;      // owner serves temp-admin steps

  double seconds_per_command = 0.25;  // time cost per expanded target command
};

// The five-step conflict-of-interest task: a member announces a temporary
// leave, an owner appoints a temporary admin (someone other than the
// requester), who is later revoked by the same owner; in between the leaver
// is liberally removed and re-added so their access set survives the gap.
inline ConstrainedWorkflow coi_workflow() {
  ConstrainedWorkflow wf;
  Action request;
  request.name = "RequestLeave";
  request.exports = {{"leaver", ParamSelf{}}, {"coi_group", ParamVar{"G"}}};
  wf.add_action(request);

  Action grant;
  grant.name = "GrantTempAdmin";
  grant.target = "GrantAdmin";
  grant.params = {ParamSelf{}, ParamTaskVar{"tempadmin", "U"},
                  ParamTaskVar{"coi_group", "G"}};
  wf.add_action(grant);

  Action remove;
  remove.name = "CoiLRemoveMember";
  remove.target = "LRemoveMember";
  remove.params = {ParamSelf{}, ParamTaskVar{"leaver", "U"},
                   ParamTaskVar{"coi_group", "G"}};
  wf.add_action(remove);

  Action readd;
  readd.name = "CoiLAddMember";
  readd.target = "LAddMember";
  readd.params = {ParamSelf{}, ParamTaskVar{"leaver", "U"},
                  ParamTaskVar{"coi_group", "G"}};
  wf.add_action(readd);

  Action revoke;
  revoke.name = "RevokeTempAdmin";
  revoke.target = "RevokeAdmin";
  revoke.params = {ParamSelf{}, ParamTaskVar{"tempadmin", "U"},
                   ParamTaskVar{"coi_group", "G"}};
  wf.add_action(revoke);

  wf.add_dependency("RequestLeave", "GrantTempAdmin");
  wf.add_dependency("GrantTempAdmin", "CoiLRemoveMember");
  wf.add_dependency("CoiLRemoveMember", "CoiLAddMember");
  wf.add_dependency("CoiLAddMember", "RevokeTempAdmin");
  wf.add_constraint(ConstraintOp::kNeq, "RequestLeave", "GrantTempAdmin");
  wf.add_constraint(ConstraintOp::kEq, "GrantTempAdmin", "RevokeTempAdmin");
  return wf;
}

namespace detail {

inline Action spoke(std::string name, std::string target,
                    std::vector<ParamSpec> params) {
  Action a;
  a.name = std::move(name);
  a.target = std::move(target);
  a.params = std::move(params);
  return a;
}

// Hub-and-spoke machine: a waiting hub, one spoke per (action, rate) pair,
// and an immediate edge back to the hub after each spoke fires.
inline ActorMachine hub_machine(
    std::string name,
    const std::vector<std::pair<std::string, double>>& spokes) {
  ActorMachine m;
  m.name = std::move(name);
  int hub = m.add_state("");
  for (const auto& [action, rate] : spokes) {
    if (rate <= 0.0) continue;
    int s = m.add_state(action);
    m.add_edge(hub, s, rate);
    m.add_edge(s, hub, kImmediateRate);
  }
  return m;
}

}  // namespace detail

// Workload actions plus dependency/constraint structure: the independent
// hub-and-spoke actions and the COI task.
inline ConstrainedWorkflow gms_workflow() {
  ConstrainedWorkflow wf = coi_workflow();
  using detail::spoke;
  wf.add_action(spoke("Post", "Post",
                      {ParamSelf{}, ParamVar{"G"}, ParamFresh{"M"}}));
  wf.add_action(spoke("LeaveGroup", "SRemoveMember",
                      {ParamSelf{}, ParamSelf{}, ParamVar{"G"}}));
  wf.add_action(spoke("ServeSAdd", "SAddMember",
                      {ParamSelf{}, ParamVar{"U"}, ParamVar{"G"}}));
  wf.add_action(spoke("ServeLAdd", "LAddMember",
                      {ParamSelf{}, ParamVar{"U"}, ParamVar{"G"}}));
  wf.add_action(spoke("ServeSRemove", "SRemoveMember",
                      {ParamSelf{}, ParamVar{"U"}, ParamVar{"G"}}));
  wf.add_action(spoke("ServeLRemove", "LRemoveMember",
                      {ParamSelf{}, ParamVar{"U"}, ParamVar{"G"}}));
  wf.add_action(spoke("PromoteAdmin", "GrantAdmin",
                      {ParamSelf{}, ParamVar{"U"}, ParamVar{"G"}}));
  wf.add_action(spoke("DemoteAdmin", "RevokeAdmin",
                      {ParamSelf{}, ParamVar{"U"}, ParamVar{"G"}}));
  wf.finalize();
  return wf;
}

// Deterministic start state: group g_j is owned (and administered) by user
// u_{j mod users}; every user holds a liberal membership in one group.
inline RelationalState gms_start(const CaseParams& p) {
  RelationalState st;
  st.set_scalar("T_c", 1);
  for (std::size_t j = 0; j < p.groups; ++j) {
    Atom g{"G", "g" + std::to_string(j)};
    Atom owner{"U", "u" + std::to_string(j % p.users)};
    st.insert("O", {Value::of(owner), Value::of(g)});
    st.insert("A", {Value::of(owner), Value::of(g)});
    st.insert("R", {Value::of(owner), Value::of(g), Value::of(std::int64_t{0}),
                    Value::of(kInfinity)});
  }
  for (std::size_t i = 0; i < p.users; ++i) {
    Atom u{"U", "u" + std::to_string(i)};
    Atom g{"G", "g" + std::to_string(i % p.groups)};
    st.insert("R", {Value::of(u), Value::of(g), Value::of(std::int64_t{0}),
                    Value::of(kInfinity)});
  }
  return st;
}

// Actor extraction and partitioning per the member/admin/owner roles: every
// user is an actor; owners run the owner machine, group admins the admin
// machine, everyone else the member machine.
inline Invocation gms_invocation(const CaseParams& p) {
  Invocation inv;
  inv.workflow = gms_workflow();
  inv.actor_sort = "U";
  std::size_t users = p.users;
  inv.extract_actors = [users](const RelationalState&) {
    std::vector<std::string> out;
    out.reserve(users);
    for (std::size_t i = 0; i < users; ++i) out.push_back("u" + std::to_string(i));
    return out;
  };
  inv.assign = [](const RelationalState& st, const std::string& actor) {
    bool owner = false, admin = false;
    for (const Tuple& t : st.tuples("O")) {
      if (t[0].is_atom() && t[0].atom.id == actor) owner = true;
    }
    for (const Tuple& t : st.tuples("A")) {
      if (t[0].is_atom() && t[0].atom.id == actor) admin = true;
    }
    if (owner) return std::string("owner");
    if (admin) return std::string("admin");
    return std::string("member");
  };
  inv.machines["member"] = detail::hub_machine(
      "member", {{"Post", p.post_rate},
                 {"LeaveGroup", p.self_leave_rate},
                 {"RequestLeave", p.coi_rate}});
  inv.machines["admin"] = detail::hub_machine(
      "admin", {{"Post", p.post_rate},
                {"ServeSAdd", p.sadd_rate},
                {"ServeLAdd", p.ladd_rate},
                {"ServeSRemove", p.sremove_rate},
                {"ServeLRemove", p.lremove_rate},
                {"CoiLRemoveMember", p.coi_serve_rate},
                {"CoiLAddMember", p.coi_serve_rate}});
  inv.machines["owner"] = detail::hub_machine(
      "owner", {{"Post", p.post_rate},
                {"ServeSAdd", p.sadd_rate},
                {"ServeLAdd", p.ladd_rate},
                {"ServeSRemove", p.sremove_rate},
                {"ServeLRemove", p.lremove_rate},
                {"PromoteAdmin", p.grant_admin_rate},
                {"DemoteAdmin", p.revoke_admin_rate},
                {"GrantTempAdmin", p.coi_owner_rate},
                {"RevokeTempAdmin", p.coi_owner_rate},
                {"CoiLRemoveMember", p.coi_serve_rate},
                {"CoiLAddMember", p.coi_serve_rate}});
  return inv;
}

// Per-candidate cost functions for the three case-study measures, in the
// fixed order ⟨time, am_comm, state_size⟩.
inline std::vector<CostFunction> case_study_costs(const Scheme& scheme,
                                                  double seconds_per_command) {
  auto sch = std::make_shared<Scheme>(scheme);
  CostFunction time_fn{[seconds_per_command](const CommandInstance&,
                                             const RelationalState&) {
                         return CostVal{seconds_per_command};
                       },
                       false};
  CostFunction am_fn{[sch](const CommandInstance& ci, const RelationalState&) {
                       return CostVal{
                           sch->command(ci.name).am_command ? 1.0 : 0.0};
                     },
                     false};
  CostFunction size_fn{[](const CommandInstance&, const RelationalState& st) {
                         return CostVal{static_cast<double>(st.tuple_count())};
                       },
                       true};
  return {time_fn, am_fn, size_fn};
}

inline std::vector<CostMeasure> case_study_measures() {
  return {real_time_measure("time"), nat_add_measure("am_comm"),
          nat_max_measure("state_size")};
}

// End-of-run metrics shared by every candidate: population figures, final
// state sizes and the overhead relative to the workload shadow, the RBAC
// role figures, and the naive-storage baselines of §6.4-style comparisons.
inline CandidateSpec case_study_candidate(const std::string& impl_name,
                                          const CaseParams& p,
                                          const Universe& workload_universe) {
  Implementation impl = make_implementation(impl_name);
  std::string scheme_name = impl_name == "sigma_r"   ? "rbac_u"
                            : impl_name == "sigma_d" ? "dac_v"
                                                     : "sd3gm";
  CandidateSpec cand;
  cand.name = scheme_name;
  cand.scheme = make_scheme(scheme_name);
  cand.impl = std::move(impl);
  cand.universe = target_universe(impl_name, workload_universe);
  cand.cost_fns = case_study_costs(cand.scheme, p.seconds_per_command);
  std::size_t users = p.users;
  cand.metrics = [users, scheme_name](const RelationalState& target,
                                      const RelationalState& shadow) {
    std::map<std::string, double> m;
    m["users"] = static_cast<double>(users);
    std::set<std::string> admins;
    for (const Tuple& t : shadow.tuples("A")) {
      if (t[0].is_atom()) admins.insert(t[0].atom.id);
    }
    m["admins"] = static_cast<double>(admins.size());
    double roles = static_cast<double>(target.tuples("Roles").size());
    m["roles"] = roles;
    m["role_user_ratio"] = users > 0 ? roles / static_cast<double>(users) : 0.0;
    m["shadow_size"] = static_cast<double>(shadow.tuple_count());
    m["target_size"] = static_cast<double>(target.tuple_count());
    m["overhead"] = m["target_size"] - m["shadow_size"];
    if (scheme_name == "dac_v") {
      m["baseline_size"] = static_cast<double>(target.tuples("M").size());
    } else if (scheme_name == "rbac_u") {
      // Naive RBAC storage: one role per user, so |UA| + |PA| with |UA| = |U|.
      m["baseline_size"] = static_cast<double>(users +
                                               target.tuples("PA").size());
    } else {
      m["baseline_size"] = m["target_size"];
    }
    return m;
  };
  return cand;
}

// The full §6-style experiment: GMS workload against the three candidate
// schemes, with all three cost measures.
inline SimConfig case_study_config(const CaseParams& p, std::uint64_t seed,
                                   double goal_time, double step,
                                   std::vector<std::string> impls = {
                                       "sigma_r", "sigma_d", "sigma_s"}) {
  SimConfig cfg;
  cfg.workload = gms_scheme();
  cfg.universe = gms_universe(p.users, p.groups, 0);
  cfg.invocation = gms_invocation(p);
  cfg.measures = case_study_measures();
  cfg.start = gms_start(p);
  cfg.goal_time = goal_time;
  cfg.step = step;
  cfg.seed = seed;
  for (const std::string& impl : impls) {
    cfg.candidates.push_back(case_study_candidate(impl, p, cfg.universe));
  }
  return cfg;
}

}  // namespace acsim
