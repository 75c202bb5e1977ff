#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "acsim/mapping.hpp"
#include "acsim/rng.hpp"
#include "acsim/schemes.hpp"

using namespace acsim;

namespace {

Value uv(const std::string& id) { return Value::of(Atom{"U", id}); }
Value gv(const std::string& id) { return Value::of(Atom{"G", id}); }
Value mv(const std::string& id) { return Value::of(Atom{"M", id}); }
Value sv(const std::string& id) { return Value::of(Atom{"S", id}); }
Value ov(const std::string& id) { return Value::of(Atom{"O", id}); }
Value iv(const std::string& id) { return Value::of(Atom{"I", id}); }

// Reconstruction of the paper's six-event single-group scenario: three users
// joining strictly at different times see three different message views.
std::vector<CommandInstance> fig8_trace() {
  return {
      {"CreateGroup", {uv("u1"), gv("g0")}},
      {"Post", {uv("u1"), gv("g0"), mv("m1")}},
      {"SAddMember", {uv("u1"), uv("u2"), gv("g0")}},
      {"Post", {uv("u1"), gv("g0"), mv("m2")}},
      {"SAddMember", {uv("u1"), uv("u3"), gv("g0")}},
      {"Post", {uv("u1"), gv("g0"), mv("m3")}},
  };
}

Universe fig8_universe() {
  Universe u;
  u.add_sort("U", 0, "u");
  u.sorts["U"] = {{"U", "u1"}, {"U", "u2"}, {"U", "u3"}};
  u.add_sort("G", 1, "g");
  u.sorts["M"] = {{"M", "m1"}, {"M", "m2"}, {"M", "m3"}};
  return u;
}

std::set<std::string> view(const Scheme& gms, const RelationalState& st,
                           const std::string& user) {
  std::set<std::string> msgs;
  for (const std::string& m : {"m1", "m2", "m3"}) {
    if (eval_query(gms, st, "Access", {uv(user), mv(m)})) msgs.insert(m);
  }
  return msgs;
}

// Uniform random well-sorted command instance of the scheme.
CommandInstance random_command(const Scheme& sch, const Universe& u, Rng& rng) {
  std::vector<const CommandDef*> defs;
  for (const auto& [name, cmd] : sch.commands) defs.push_back(&cmd);
  const CommandDef* cmd = defs[rng.next_below(defs.size())];
  Args args;
  for (const std::string& sort : cmd->signature.sorts) {
    const std::vector<Atom>& pool = u.sort(sort);
    args.push_back(Value::of(pool[rng.next_below(pool.size())]));
  }
  return {cmd->name, args};
}

struct Candidate {
  const char* impl;
  const char* scheme;
};

}  // namespace

TEST_CASE("GMS semantics: strict vs liberal membership windows") {
  Scheme gms = gms_scheme();
  RelationalState st;
  CHECK(apply_command_in_place(gms, st, "CreateGroup", {uv("u0"), gv("g0")}));
  // Re-creating an existing group is a no-op.
  CHECK_FALSE(apply_command_in_place(gms, st, "CreateGroup", {uv("u1"), gv("g0")}));
  CHECK(apply_command_in_place(gms, st, "Post", {uv("u0"), gv("g0"), mv("m0")}));
  // Re-posting the same message handle is forged history: rejected.
  CHECK_FALSE(apply_command_in_place(gms, st, "Post", {uv("u0"), gv("g0"), mv("m0")}));
  // Strict add: no access to the pre-join message, access to later ones.
  CHECK(apply_command_in_place(gms, st, "SAddMember", {uv("u0"), uv("u1"), gv("g0")}));
  CHECK_FALSE(eval_query(gms, st, "Access", {uv("u1"), mv("m0")}));
  CHECK(apply_command_in_place(gms, st, "Post", {uv("u1"), gv("g0"), mv("m1")}));
  CHECK(eval_query(gms, st, "Access", {uv("u1"), mv("m1")}));
  // Liberal remove rewrites the open interval and keeps old access.
  CHECK(apply_command_in_place(gms, st, "LRemoveMember", {uv("u0"), uv("u1"), gv("g0")}));
  CHECK(eval_query(gms, st, "Access", {uv("u1"), mv("m1")}));
  // ...but a Post after the removal is not readable.
  CHECK(apply_command_in_place(gms, st, "Post", {uv("u0"), gv("g0"), mv("m2")}));
  CHECK_FALSE(eval_query(gms, st, "Access", {uv("u1"), mv("m2")}));
  // Strict remove erases the history entirely.
  CHECK(apply_command_in_place(gms, st, "SRemoveMember", {uv("u1"), uv("u1"), gv("g0")}));
  CHECK_FALSE(eval_query(gms, st, "Access", {uv("u1"), mv("m1")}));
}

TEST_CASE("GMS liberal add grants historical access") {
  Scheme gms = gms_scheme();
  RelationalState st;
  apply_command_in_place(gms, st, "CreateGroup", {uv("u0"), gv("g0")});
  apply_command_in_place(gms, st, "Post", {uv("u0"), gv("g0"), mv("m0")});
  apply_command_in_place(gms, st, "LAddMember", {uv("u0"), uv("u1"), gv("g0")});
  CHECK(eval_query(gms, st, "Access", {uv("u1"), mv("m0")}));
}

TEST_CASE("SD3-GM mirrors GMS command by command") {
  Scheme sd3 = sd3gm_scheme();
  RelationalState st;
  CHECK(apply_command_in_place(sd3, st, "CreateGroup", {uv("u0"), gv("g0")}));
  CHECK(apply_command_in_place(sd3, st, "Post", {uv("u0"), gv("g0"), mv("m0")}));
  CHECK(eval_query(sd3, st, "Access", {uv("u0"), mv("m0")}));
  CHECK(apply_command_in_place(sd3, st, "SAddMember", {uv("u0"), uv("u1"), gv("g0")}));
  CHECK_FALSE(eval_query(sd3, st, "Access", {uv("u1"), mv("m0")}));
  // Exactly one TIME fact at any moment.
  CHECK(st.tuples("TIME").size() == 1);
}

TEST_CASE("RBAC commands demand the admin role") {
  Scheme rbac = rbac_u_scheme();
  RelationalState st;
  Value admin = Value::of(Atom{"R", "admin"});
  Value role = Value::of(Atom{"R", "m^g0"});
  // Without ⟨a, admin⟩ ∈ UA nothing fires.
  CHECK_FALSE(apply_command_in_place(rbac, st, "AddRole", {uv("u0"), role}));
  st.insert("Roles", {admin});
  st.insert("UA", {uv("u0"), admin});
  CHECK(apply_command_in_place(rbac, st, "AddRole", {uv("u0"), role}));
  CHECK(apply_command_in_place(rbac, st, "AssignUser", {uv("u0"), uv("u1"), role}));
  CHECK(eval_query(rbac, st, "Assigned", {uv("u1"), role}));
  CHECK(apply_command_in_place(rbac, st, "DeassignUser", {uv("u0"), uv("u1"), role}));
  CHECK_FALSE(eval_query(rbac, st, "Assigned", {uv("u1"), role}));
}

TEST_CASE("Fig 8 scenario: three pairwise-distinct views, agreed by all targets") {
  Scheme gms = gms_scheme();
  Universe u = fig8_universe();
  RelationalState ws;
  for (const CommandInstance& ci : fig8_trace()) {
    REQUIRE(apply_command_in_place(gms, ws, ci.name, ci.args));
  }
  std::set<std::string> v1 = view(gms, ws, "u1");
  std::set<std::string> v2 = view(gms, ws, "u2");
  std::set<std::string> v3 = view(gms, ws, "u3");
  CHECK(v1 == std::set<std::string>{"m1", "m2", "m3"});
  CHECK(v2 == std::set<std::string>{"m2", "m3"});
  CHECK(v3 == std::set<std::string>{"m3"});
  CHECK(v1 != v2);
  CHECK(v2 != v3);
  CHECK(v1 != v3);

  for (Candidate c : {Candidate{"sigma_r", "rbac_u"},
                      Candidate{"sigma_d", "dac_v"},
                      Candidate{"sigma_s", "sd3gm"}}) {
    CAPTURE(c.impl);
    Scheme target = make_scheme(c.scheme);
    Implementation impl = make_implementation(c.impl);
    LockstepReport rep = lockstep_trace_check(gms, target, impl,
                                              RelationalState{}, fig8_trace(), u);
    CHECK(rep.equivalent);
  }
}

TEST_CASE("Fig 8 under sigma_r yields at least three roles carrying permissions") {
  Scheme gms = gms_scheme();
  Universe u = fig8_universe();
  Implementation sr = sigma_r();
  RelationalState ws, ts;
  ts = sr.map_state(ws, u);
  Scheme rbac = rbac_u_scheme();
  for (const CommandInstance& ci : fig8_trace()) {
    std::vector<CommandInstance> seq = sr.expand_command(ci, ts, u);
    apply_command_in_place(gms, ws, ci.name, ci.args);
    apply_expansion(rbac, ts, seq);
  }
  std::set<std::string> roles_with_perms;
  for (const Tuple& t : ts.tuples("PA")) {
    roles_with_perms.insert(t[1].atom.id);
  }
  CHECK(roles_with_perms.size() >= 3);
}

TEST_CASE("lockstep equivalence holds on 200 random GMS traces for all three") {
  Scheme gms = gms_scheme();
  Universe u = gms_universe(3, 2, 3);
  Rng rng(4242);
  struct Target {
    Scheme scheme;
    Implementation impl;
  };
  std::vector<Target> targets;
  for (Candidate c : {Candidate{"sigma_r", "rbac_u"},
                      Candidate{"sigma_d", "dac_v"},
                      Candidate{"sigma_s", "sd3gm"}}) {
    targets.push_back({make_scheme(c.scheme), make_implementation(c.impl)});
  }
  for (int t = 0; t < 200; ++t) {
    std::size_t len = 1 + rng.next_below(6);
    std::vector<CommandInstance> trace;
    for (std::size_t i = 0; i < len; ++i) {
      trace.push_back(random_command(gms, u, rng));
    }
    for (const Target& tgt : targets) {
      LockstepReport rep = lockstep_trace_check(gms, tgt.scheme, tgt.impl,
                                                RelationalState{}, trace, u);
      CAPTURE(t);
      CAPTURE(tgt.scheme.name);
      REQUIRE(rep.equivalent);
    }
  }
}

TEST_CASE("SD3-GM shadow equality: mapped state equals the fact translation") {
  Scheme gms = gms_scheme();
  Scheme sd3 = sd3gm_scheme();
  Implementation ss = sigma_s();
  Universe u = gms_universe(3, 2, 3);
  Rng rng(777);
  for (int t = 0; t < 50; ++t) {
    RelationalState ws, ts = ss.map_state(ws, u);
    for (int i = 0; i < 6; ++i) {
      CommandInstance ci = random_command(gms, u, rng);
      std::vector<CommandInstance> seq = ss.expand_command(ci, ts, u);
      apply_command_in_place(gms, ws, ci.name, ci.args);
      apply_expansion(sd3, ts, seq);
      // Strict lockstep: the fact set tracks the shadow exactly.
      REQUIRE(ts == ss.map_state(ws, u));
    }
  }
}

TEST_CASE("DAC-V flattening: M agrees with the GMS access oracle stepwise") {
  Scheme gms = gms_scheme();
  Scheme dacv = dac_v_scheme();
  Implementation sd = sigma_d();
  Universe u = gms_universe(3, 2, 3);
  Rng rng(991);
  for (int t = 0; t < 50; ++t) {
    RelationalState ws, ts = sd.map_state(ws, u);
    for (int i = 0; i < 6; ++i) {
      CommandInstance ci = random_command(gms, u, rng);
      std::vector<CommandInstance> seq = sd.expand_command(ci, ts, u);
      apply_command_in_place(gms, ws, ci.name, ci.args);
      apply_expansion(dacv, ts, seq);
      for (const Atom& ua : u.sort("U")) {
        for (const Atom& ma : u.sort("M")) {
          bool oracle = eval_query(gms, ws, "Access", {Value::of(ua), Value::of(ma)});
          bool flat = ts.contains("M", {Value::of(ua), Value::of(ma), iv("r")});
          CAPTURE(ua.id);
          CAPTURE(ma.id);
          REQUIRE(oracle == flat);
        }
      }
    }
  }
}

TEST_CASE("bounded state matching verifies for all three at depth 2") {
  Scheme gms = gms_scheme();
  Universe u = gms_universe(2, 1, 2);
  for (Candidate c : {Candidate{"sigma_r", "rbac_u"},
                      Candidate{"sigma_d", "dac_v"},
                      Candidate{"sigma_s", "sd3gm"}}) {
    CAPTURE(c.impl);
    Scheme target = make_scheme(c.scheme);
    Universe tu = target_universe(c.impl, u);
    MatchingReport rep = verify_state_matching(gms, target,
                                               make_implementation(c.impl),
                                               RelationalState{}, 2, u, &tu);
    CHECK(rep.property1_holds);
    CHECK(rep.property2_holds);
  }
}

TEST_CASE("ADAC in DAC-M: lockstep equivalence on random traces") {
  Scheme adac = adac_scheme();
  Scheme dacm = dac_m_scheme();
  Implementation sa = sigma_adac();
  Universe u = dac_universe(3, 2);
  Rng rng(1357);
  for (int t = 0; t < 100; ++t) {
    std::size_t len = 1 + rng.next_below(6);
    std::vector<CommandInstance> trace;
    for (std::size_t i = 0; i < len; ++i) {
      trace.push_back(random_command(adac, u, rng));
    }
    LockstepReport rep = lockstep_trace_check(adac, dacm, sa,
                                              RelationalState{}, trace, u);
    CAPTURE(t);
    REQUIRE(rep.equivalent);
  }
}

TEST_CASE("ADAC admin promotion and the hidden-matrix copy discipline") {
  Scheme adac = adac_scheme();
  Scheme dacm = dac_m_scheme();
  Implementation sa = sigma_adac();
  Universe u = dac_universe(2, 2);
  std::vector<CommandInstance> trace = {
      {"CreateObject", {sv("s0"), ov("o0")}},
      {"Grant", {sv("s0"), sv("s1"), ov("o0"), iv("r")}},
      {"GrantAdmin", {sv("s0"), sv("s1")}},
  };
  // No command mints the first administrator; seed one in the start state.
  RelationalState ws;
  ws.insert("A", {sv("s0")});
  RelationalState ts = sa.map_state(ws, u);
  for (const CommandInstance& ci : trace) {
    std::vector<CommandInstance> seq = sa.expand_command(ci, ts, u);
    apply_command_in_place(adac, ws, ci.name, ci.args);
    apply_expansion(dacm, ts, seq);
  }
  // s1 is now an admin: pre-admin right lives in N, bypass rights in M.
  CHECK(ts.contains("A", {sv("s1")}));
  CHECK(ts.contains("N", {sv("s1"), ov("o0"), iv("r")}));
  CHECK(ts.contains("M", {sv("s1"), ov("o0"), iv("r")}));
  CHECK(eval_query(adac, ws, "SubjectAdmin", {sv("s0"), sv("s1")}));
  // Demotion reverses the procedure.
  CommandInstance demote{"RevokeAdmin", {sv("s0"), sv("s1")}};
  std::vector<CommandInstance> seq = sa.expand_command(demote, ts, u);
  apply_command_in_place(adac, ws, demote.name, demote.args);
  apply_expansion(dacm, ts, seq);
  CHECK_FALSE(ts.contains("A", {sv("s1")}));
  CHECK_FALSE(ts.contains("N", {sv("s1"), ov("o0"), iv("r")}));
  CHECK(ts.contains("M", {sv("s1"), ov("o0"), iv("r")}));  // kept: was in N
  CHECK(check_query_equivalence(adac, dacm, sa, ws, ts, u));
}

TEST_CASE("scheme registry resolves every built-in") {
  for (const std::string& name :
       {"gms", "rbac_u", "dac_v", "sd3gm", "dac", "adac", "dac_m"}) {
    CHECK(make_scheme(name).name == name);
  }
  CHECK_THROWS_AS(make_scheme("nope"), ConfigError);
  CHECK_THROWS_AS(make_implementation("nope"), ConfigError);
}
