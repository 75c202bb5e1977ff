#pragma once

#include <string>

#include "acsim/auxm.hpp"
#include "acsim/mapping.hpp"
#include "acsim/relstate.hpp"
#include "acsim/scheme.hpp"
#include "acsim/schemes/gms.hpp"

namespace acsim {

// RBAC (NIST-style, sessions elided): Roles(r), UA(u,r), PA(p,r). Every
// command is guarded on the executor holding the admin role. The auxiliary
// machine U adds the group catalog G(g) and the group-permission relation
// GM(g,p) needed to translate group messaging.

namespace rbac {

inline Atom admin_role() { return Atom{"R", "admin"}; }
inline Atom member_role(const std::string& g) { return Atom{"R", "m^" + g}; }
inline Atom owner_role(const std::string& g) { return Atom{"R", "o^" + g}; }
inline Atom admin_of_role(const std::string& g) { return Atom{"R", "a^" + g}; }
inline Atom message_role(const std::string& m) { return Atom{"R", "r^" + m}; }
inline Atom message_perm(const std::string& m) { return Atom{"P", "p^" + m}; }

inline bool is_admin(const RelationalState& s, const Value& a) {
  return s.contains("UA", {a, Value::of(admin_role())});
}

}  // namespace rbac

inline Scheme rbac_scheme() {
  Scheme sch;
  sch.name = "rbac";
  sch.relation_names = {"Roles", "UA", "PA"};

  auto guarded = [](auto body) {
    return [body](RelationalState& s, const Args& a) {
      if (!rbac::is_admin(s, a[0])) return false;
      body(s, a);
      return true;
    };
  };

  sch.add_command({"AddRole", {{"U", "R"}},
                   guarded([](RelationalState& s, const Args& a) {
                     s.insert("Roles", {a[1]});
                   })});
  sch.add_command({"DeleteRole", {{"U", "R"}},
                   guarded([](RelationalState& s, const Args& a) {
                     s.erase("Roles", {a[1]});
                   })});
  sch.add_command({"AssignUser", {{"U", "U", "R"}},
                   guarded([](RelationalState& s, const Args& a) {
                     s.insert("UA", {a[1], a[2]});
                   })});
  sch.add_command({"DeassignUser", {{"U", "U", "R"}},
                   guarded([](RelationalState& s, const Args& a) {
                     s.erase("UA", {a[1], a[2]});
                   })});
  sch.add_command({"GrantPermission", {{"U", "P", "R"}},
                   guarded([](RelationalState& s, const Args& a) {
                     s.insert("PA", {a[1], a[2]});
                   })});
  sch.add_command({"RevokePermission", {{"U", "P", "R"}},
                   guarded([](RelationalState& s, const Args& a) {
                     s.erase("PA", {a[1], a[2]});
                   })});

  sch.add_query({"Access", {{"U", "P"}},
                 [](const RelationalState& s, const Args& a) {
                   for (const Tuple& ua : s.tuples("UA")) {
                     if (ua[0] != a[0]) continue;
                     if (!s.contains("Roles", {ua[1]})) continue;
                     if (s.contains("PA", {a[1], ua[1]})) return true;
                   }
                   return false;
                 }});
  sch.add_query({"Assigned", {{"U", "R"}},
                 [](const RelationalState& s, const Args& a) {
                   return s.contains("UA", {a[0], a[1]});
                 }});
  sch.access_queries = {"Access"};
  return sch;
}

inline AuxiliaryMachine rbac_am_u() {
  AuxiliaryMachine am;
  am.name = "u";
  am.relation_names = {"G", "GM"};
  am.commands.push_back({"CreateGroup", {{"U", "G"}},
                         [](RelationalState& s, const Args& a) {
                           if (!rbac::is_admin(s, a[0])) return false;
                           if (s.contains("G", {a[1]})) return false;
                           s.insert("G", {a[1]});
                           return true;
                         }});
  am.commands.push_back({"AssociateWithGroup", {{"U", "G", "P"}},
                         [](RelationalState& s, const Args& a) {
                           if (!rbac::is_admin(s, a[0])) return false;
                           s.insert("GM", {a[1], a[2]});
                           return true;
                         }});
  return am;
}

inline Scheme rbac_u_scheme() { return augment(rbac_scheme(), rbac_am_u()); }

// Target universe for implementing GMS in RBAC∘U: minted roles for group
// membership/ownership/administration and per-message roles/permissions.
inline Universe rbac_u_universe(const Universe& gms_universe) {
  Universe u = gms_universe;
  std::vector<Atom> roles{rbac::admin_role()};
  std::vector<Atom> perms;
  for (const Atom& g : gms_universe.sort("G")) {
    roles.push_back(rbac::member_role(g.id));
    roles.push_back(rbac::owner_role(g.id));
    roles.push_back(rbac::admin_of_role(g.id));
  }
  for (const Atom& m : gms_universe.sort("M")) {
    roles.push_back(rbac::message_role(m.id));
    perms.push_back(rbac::message_perm(m.id));
  }
  u.sorts["R"] = std::move(roles);
  u.sorts["P"] = std::move(perms);
  return u;
}

// σ^R: GMS in RBAC∘U. Every user holds the (permissionless) admin role so
// RBAC's uniform admin guards never block a translated command; each GMS
// guard is re-checked against the target state and a failing guard expands
// to the empty sequence.
inline Implementation sigma_r() {
  Implementation impl;
  impl.name = "sigma_r";

  impl.map_state = [](const RelationalState& g, const Universe& universe) {
    RelationalState s;
    auto admin = Value::of(rbac::admin_role());
    s.insert("Roles", {admin});
    for (const Atom& u : universe.sort("U")) {
      s.insert("UA", {Value::of(u), admin});
    }
    for (const Tuple& t : g.tuples("G")) {
      const std::string& gid = t[0].as_atom().id;
      s.insert("G", {t[0]});
      s.insert("Roles", {Value::of(rbac::member_role(gid))});
      s.insert("Roles", {Value::of(rbac::owner_role(gid))});
      s.insert("Roles", {Value::of(rbac::admin_of_role(gid))});
    }
    for (const Tuple& t : g.tuples("O")) {
      s.insert("UA", {t[0], Value::of(rbac::owner_role(t[1].as_atom().id))});
    }
    for (const Tuple& t : g.tuples("A")) {
      s.insert("UA", {t[0], Value::of(rbac::admin_of_role(t[1].as_atom().id))});
    }
    for (const Tuple& t : g.tuples("R")) {
      if (t[3].as_int() == kInfinity) {
        s.insert("UA", {t[0], Value::of(rbac::member_role(t[1].as_atom().id))});
      }
    }
    const Scheme gms = gms_scheme();
    const QueryDef& access = gms.query("Access");
    for (const Tuple& tx : g.tuples("TX")) {
      const std::string& mid = tx[1].as_atom().id;
      auto role = Value::of(rbac::message_role(mid));
      auto perm = Value::of(rbac::message_perm(mid));
      s.insert("Roles", {role});
      s.insert("PA", {perm, role});
      s.insert("GM", {tx[0], perm});
      for (const Atom& u : universe.sort("U")) {
        if (access.entail(g, {Value::of(u), tx[1]})) {
          s.insert("UA", {Value::of(u), role});
        }
      }
    }
    return s;
  };

  impl.expand_command = [](const CommandInstance& c, const RelationalState& s,
                           const Universe& uni) -> std::vector<CommandInstance> {
    const Args& a = c.args;
    auto ua = [&s](const Value& u, const Atom& r) {
      return s.contains("UA", {u, Value::of(r)});
    };
    if (c.name == "CreateGroup") {
      const std::string& gid = a[1].as_atom().id;
      if (s.contains("G", {a[1]})) return {};
      auto mr = Value::of(rbac::member_role(gid));
      auto orr = Value::of(rbac::owner_role(gid));
      auto ar = Value::of(rbac::admin_of_role(gid));
      return {{"CreateGroup", {a[0], a[1]}},
              {"AddRole", {a[0], mr}},
              {"AssignUser", {a[0], a[0], mr}},
              {"AddRole", {a[0], orr}},
              {"AssignUser", {a[0], a[0], orr}},
              {"AddRole", {a[0], ar}},
              {"AssignUser", {a[0], a[0], ar}}};
    }
    if (c.name == "GrantAdmin") {
      const std::string& gid = a[2].as_atom().id;
      if (!ua(a[0], rbac::owner_role(gid))) return {};
      return {{"AssignUser", {a[0], a[1], Value::of(rbac::admin_of_role(gid))}}};
    }
    if (c.name == "RevokeAdmin") {
      const std::string& gid = a[2].as_atom().id;
      if (!ua(a[0], rbac::owner_role(gid)) && a[0] != a[1]) return {};
      return {{"DeassignUser", {a[0], a[1], Value::of(rbac::admin_of_role(gid))}}};
    }
    if (c.name == "SAddMember") {
      const std::string& gid = a[2].as_atom().id;
      if (!ua(a[0], rbac::admin_of_role(gid))) return {};
      return {{"AssignUser", {a[0], a[1], Value::of(rbac::member_role(gid))}}};
    }
    if (c.name == "LAddMember") {
      const std::string& gid = a[2].as_atom().id;
      if (!ua(a[0], rbac::admin_of_role(gid))) return {};
      std::vector<CommandInstance> seq{
          {"AssignUser", {a[0], a[1], Value::of(rbac::member_role(gid))}}};
      for (const Tuple& gm : s.tuples("GM")) {
        if (gm[0] != a[2]) continue;
        const std::string& mid = gm[1].as_atom().id.substr(2);
        seq.push_back(
            {"AssignUser", {a[0], a[1], Value::of(rbac::message_role(mid))}});
      }
      return seq;
    }
    if (c.name == "SRemoveMember") {
      const std::string& gid = a[2].as_atom().id;
      if (!ua(a[0], rbac::admin_of_role(gid)) && a[0] != a[1]) return {};
      std::vector<CommandInstance> seq{
          {"DeassignUser", {a[0], a[1], Value::of(rbac::member_role(gid))}}};
      for (const Tuple& gm : s.tuples("GM")) {
        if (gm[0] != a[2]) continue;
        const std::string& mid = gm[1].as_atom().id.substr(2);
        seq.push_back(
            {"DeassignUser", {a[0], a[1], Value::of(rbac::message_role(mid))}});
      }
      return seq;
    }
    if (c.name == "LRemoveMember") {
      const std::string& gid = a[2].as_atom().id;
      if (!ua(a[0], rbac::admin_of_role(gid))) return {};
      return {{"DeassignUser", {a[0], a[1], Value::of(rbac::member_role(gid))}}};
    }
    if (c.name == "Post") {
      const std::string& gid = a[1].as_atom().id;
      const std::string& mid = a[2].as_atom().id;
      if (!ua(a[0], rbac::member_role(gid))) return {};
      auto role = Value::of(rbac::message_role(mid));
      // The message role exists iff the message was already posted (only
      // Post mints it), so freshness is one probe instead of a GM scan.
      if (s.contains("Roles", {role})) return {};
      auto perm = Value::of(rbac::message_perm(mid));
      std::vector<CommandInstance> seq{
          {"AssociateWithGroup", {a[0], a[1], perm}},
          {"AddRole", {a[0], role}},
          {"GrantPermission", {a[0], perm, role}}};
      auto member = Value::of(rbac::member_role(gid));
      // Probe membership per user instead of scanning the growing UA set.
      for (const Atom& u : uni.sort("U")) {
        auto uv = Value::of(u);
        if (s.contains("UA", {uv, member})) {
          seq.push_back({"AssignUser", {a[0], uv, role}});
        }
      }
      return seq;
    }
    throw ConfigError("sigma_r: unknown workload command " + c.name);
  };

  impl.map_query = [](const std::string& q, const Args& a) {
    if (q != "Access") throw ConfigError("sigma_r: unmapped query " + q);
    return std::make_pair(
        std::string("Access"),
        Args{a[0], Value::of(rbac::message_perm(a[1].as_atom().id))});
  };
  return impl;
}

}  // namespace acsim
