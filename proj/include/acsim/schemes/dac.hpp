#pragma once

#include <optional>
#include <string>

#include "acsim/auxm.hpp"
#include "acsim/mapping.hpp"
#include "acsim/relstate.hpp"
#include "acsim/scheme.hpp"
#include "acsim/schemes/gms.hpp"

namespace acsim {

// Graham-Denning-style DAC: access matrix M(s,o,i); owners grant and revoke
// any right except ownership itself. CreateObject seats the initial owner —
// without it no object could ever acquire one, and Grant could never fire.
//
// Instantiated with configurable sort names so the same listing serves both
// the stand-alone DAC (sorts S/O/I) and the GMS target (users/messages).

namespace dac {

inline Value own_right(const std::string& right_sort) {
  return Value::of(Atom{right_sort, "own"});
}

inline bool owns(const RelationalState& s, const Value& subj, const Value& obj,
                 const Value& own) {
  return s.contains("M", {subj, obj, own});
}

// Ownership is immutable after CreateObject (Grant/Revoke exclude `own`),
// so the companion relation OWN(o, s) stays in sync with M's own-rights and
// answers "who owns o" with one ordered-set probe instead of a matrix scan.
inline std::optional<Value> owner_of(const RelationalState& s, const Value& obj,
                                     const Value& /*own*/) {
  const std::set<Tuple>& ownrel = s.tuples("OWN");
  auto it = ownrel.lower_bound(Tuple{obj});
  if (it != ownrel.end() && !it->empty() && (*it)[0] == obj) return (*it)[1];
  return std::nullopt;
}

}  // namespace dac

inline Scheme dac_scheme(const std::string& subj = "S",
                         const std::string& obj = "O",
                         const std::string& right = "I") {
  Scheme sch;
  sch.name = "dac";
  sch.relation_names = {"M", "OWN"};
  auto own = dac::own_right(right);

  sch.add_command({"CreateObject", {{subj, obj}},
                   [own](RelationalState& s, const Args& a) {
                     if (dac::owner_of(s, a[1], own)) return false;
                     s.insert("M", {a[0], a[1], own});
                     s.insert("OWN", {a[1], a[0]});
                     return true;
                   }});
  sch.add_command({"Grant", {{subj, subj, obj, right}},
                   [own](RelationalState& s, const Args& a) {
                     if (!dac::owns(s, a[0], a[2], own) || a[3] == own)
                       return false;
                     s.insert("M", {a[1], a[2], a[3]});
                     return true;
                   }});
  sch.add_command({"Revoke", {{subj, subj, obj, right}},
                   [own](RelationalState& s, const Args& a) {
                     if (!dac::owns(s, a[0], a[2], own) || a[3] == own)
                       return false;
                     s.erase("M", {a[1], a[2], a[3]});
                     return true;
                   }});
  sch.add_query({"Access", {{subj, obj, right}},
                 [](const RelationalState& s, const Args& a) {
                   return s.contains("M", {a[0], a[1], a[2]});
                 }});
  sch.access_queries = {"Access"};
  return sch;
}

inline Universe dac_universe(int subjects, int objects) {
  Universe u;
  u.add_sort("S", subjects, "s");
  u.add_sort("O", objects, "o");
  u.sorts["I"] = {Atom{"I", "own"}, Atom{"I", "r"}};
  return u;
}

// ---------------------------------------------------------------------------
// DAC ∘ V: the GMS target. The auxiliary machine V keeps the group metadata
// (groups, group-message relation, ownership/administration/membership)
// while DAC's M holds the flattened per-message read accesses.

namespace dacv {

inline Value read_right() { return Value::of(Atom{"I", "r"}); }

}  // namespace dacv

inline AuxiliaryMachine dac_am_v() {
  AuxiliaryMachine am;
  am.name = "v";
  am.relation_names = {"G", "GM", "W", "A", "B"};
  am.commands.push_back({"CreateGroup", {{"U", "G"}},
                         [](RelationalState& s, const Args& a) {
                           if (s.contains("G", {a[1]})) return false;
                           s.insert("G", {a[1]});
                           s.insert("W", {a[0], a[1]});
                           s.insert("A", {a[0], a[1]});
                           s.insert("B", {a[0], a[1]});
                           return true;
                         }});
  am.commands.push_back({"AssociateWithGroup", {{"U", "G", "M"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("B", {a[0], a[1]})) return false;
                           s.insert("GM", {a[1], a[2]});
                           return true;
                         }});
  am.commands.push_back({"GrantAdmin", {{"U", "U", "G"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("W", {a[0], a[2]})) return false;
                           s.insert("A", {a[1], a[2]});
                           return true;
                         }});
  am.commands.push_back({"RevokeAdmin", {{"U", "U", "G"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("W", {a[0], a[2]}) && a[0] != a[1])
                             return false;
                           s.erase("A", {a[1], a[2]});
                           return true;
                         }});
  am.commands.push_back({"GrantMember", {{"U", "U", "G"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("A", {a[0], a[2]})) return false;
                           s.insert("B", {a[1], a[2]});
                           return true;
                         }});
  // Guard widened with s = t so GMS's self strict-leave stays translatable.
  am.commands.push_back({"RevokeMember", {{"U", "U", "G"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("A", {a[0], a[2]}) && a[0] != a[1])
                             return false;
                           s.erase("B", {a[1], a[2]});
                           return true;
                         }});
  return am;
}

inline Scheme dac_v_scheme() {
  return augment(dac_scheme("U", "M", "I"), dac_am_v());
}

inline Universe dac_v_universe(const Universe& gms_universe) {
  Universe u = gms_universe;
  u.sorts["I"] = {Atom{"I", "own"}, Atom{"I", "r"}};
  return u;
}

// σ^D: GMS in DAC∘V. Posting mints the message object (poster becomes its
// owner); grants and revokes on existing messages are executed by the
// message's owner as found in M. GMS guards are re-checked against the AM
// relations; a failing guard expands to the empty sequence.
inline Implementation sigma_d() {
  Implementation impl;
  impl.name = "sigma_d";

  impl.map_state = [](const RelationalState& g, const Universe& universe) {
    RelationalState s;
    auto own = dac::own_right("I");
    auto r = dacv::read_right();
    for (const Tuple& t : g.tuples("G")) s.insert("G", {t[0]});
    for (const Tuple& t : g.tuples("O")) s.insert("W", t);
    for (const Tuple& t : g.tuples("A")) s.insert("A", t);
    for (const Tuple& t : g.tuples("R")) {
      if (t[3].as_int() == kInfinity) s.insert("B", {t[0], t[1]});
    }
    const Scheme gms = gms_scheme();
    const QueryDef& access = gms.query("Access");
    for (const Tuple& tx : g.tuples("TX")) {
      s.insert("GM", {tx[0], tx[1]});
      // TX does not record the poster; seat the group's least owner.
      std::optional<Value> owner;
      for (const Tuple& o : g.tuples("O")) {
        if (o[1] == tx[0] && (!owner || o[0] < *owner)) owner = o[0];
      }
      if (!owner)
        throw ConfigError("sigma_d: message posted to ownerless group");
      s.insert("M", {*owner, tx[1], own});
      s.insert("OWN", {tx[1], *owner});
      for (const Atom& u : universe.sort("U")) {
        if (access.entail(g, {Value::of(u), tx[1]})) {
          s.insert("M", {Value::of(u), tx[1], r});
        }
      }
    }
    return s;
  };

  impl.expand_command = [](const CommandInstance& c, const RelationalState& s,
                           const Universe&) -> std::vector<CommandInstance> {
    const Args& a = c.args;
    auto own = dac::own_right("I");
    auto r = dacv::read_right();
    auto owner_exec = [&](const Value& m) {
      auto w = dac::owner_of(s, m, own);
      if (!w) throw InvariantViolation("sigma_d: message without owner");
      return *w;
    };
    if (c.name == "CreateGroup") {
      if (s.contains("G", {a[1]})) return {};
      return {{"CreateGroup", {a[0], a[1]}}};
    }
    if (c.name == "GrantAdmin") return {{"GrantAdmin", {a[0], a[1], a[2]}}};
    if (c.name == "RevokeAdmin") return {{"RevokeAdmin", {a[0], a[1], a[2]}}};
    if (c.name == "SAddMember") return {{"GrantMember", {a[0], a[1], a[2]}}};
    if (c.name == "LAddMember") {
      if (!s.contains("A", {a[0], a[2]})) return {};
      std::vector<CommandInstance> seq{{"GrantMember", {a[0], a[1], a[2]}}};
      for (const Tuple& gm : s.tuples("GM")) {
        if (gm[0] == a[2])
          seq.push_back({"Grant", {owner_exec(gm[1]), a[1], gm[1], r}});
      }
      return seq;
    }
    if (c.name == "SRemoveMember") {
      if (!s.contains("A", {a[0], a[2]}) && a[0] != a[1]) return {};
      std::vector<CommandInstance> seq{{"RevokeMember", {a[0], a[1], a[2]}}};
      for (const Tuple& gm : s.tuples("GM")) {
        if (gm[0] == a[2])
          seq.push_back({"Revoke", {owner_exec(gm[1]), a[1], gm[1], r}});
      }
      return seq;
    }
    if (c.name == "LRemoveMember") return {{"RevokeMember", {a[0], a[1], a[2]}}};
    if (c.name == "Post") {
      if (!s.contains("B", {a[0], a[1]})) return {};
      // The message object exists iff it was posted before; one OWN probe
      // replaces a scan over the growing group-message relation.
      if (dac::owner_of(s, a[2], own)) return {};
      std::vector<CommandInstance> seq{
          {"CreateObject", {a[0], a[2]}},
          {"AssociateWithGroup", {a[0], a[1], a[2]}}};
      for (const Tuple& b : s.tuples("B")) {
        if (b[1] == a[1]) seq.push_back({"Grant", {a[0], b[0], a[2], r}});
      }
      return seq;
    }
    throw ConfigError("sigma_d: unknown workload command " + c.name);
  };

  impl.map_query = [](const std::string& q, const Args& a) {
    if (q != "Access") throw ConfigError("sigma_d: unmapped query " + q);
    return std::make_pair(std::string("Access"),
                          Args{a[0], a[1], dacv::read_right()});
  };
  return impl;
}

// ---------------------------------------------------------------------------
// ADAC: DAC plus a set of administrators with full (non-own) access to every
// existing object. Access is answered from M or by the admin bypass.

inline Scheme adac_scheme() {
  Scheme sch;
  sch.name = "adac";
  sch.relation_names = {"A", "M", "OWN"};
  auto own = dac::own_right("I");

  sch.add_command({"CreateObject", {{"S", "O"}},
                   [own](RelationalState& s, const Args& a) {
                     if (dac::owner_of(s, a[1], own)) return false;
                     s.insert("M", {a[0], a[1], own});
                     s.insert("OWN", {a[1], a[0]});
                     return true;
                   }});
  sch.add_command({"Grant", {{"S", "S", "O", "I"}},
                   [own](RelationalState& s, const Args& a) {
                     bool may = dac::owns(s, a[0], a[2], own) ||
                                (s.contains("A", {a[0]}) &&
                                 dac::owner_of(s, a[2], own).has_value());
                     if (!may || a[3] == own) return false;
                     s.insert("M", {a[1], a[2], a[3]});
                     return true;
                   }});
  sch.add_command({"Revoke", {{"S", "S", "O", "I"}},
                   [own](RelationalState& s, const Args& a) {
                     bool may = dac::owns(s, a[0], a[2], own) ||
                                (s.contains("A", {a[0]}) &&
                                 dac::owner_of(s, a[2], own).has_value());
                     if (!may || a[3] == own) return false;
                     s.erase("M", {a[1], a[2], a[3]});
                     return true;
                   }});
  sch.add_command({"GrantAdmin", {{"S", "S"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("A", {a[0]}) || s.contains("A", {a[1]}))
                       return false;
                     s.insert("A", {a[1]});
                     return true;
                   }});
  sch.add_command({"RevokeAdmin", {{"S", "S"}},
                   [](RelationalState& s, const Args& a) {
                     if ((!s.contains("A", {a[0]}) && a[0] != a[1]) ||
                         !s.contains("A", {a[1]}))
                       return false;
                     s.erase("A", {a[1]});
                     return true;
                   }});

  sch.add_query({"Access", {{"S", "O", "I"}},
                 [own](const RelationalState& s, const Args& a) {
                   if (s.contains("M", {a[0], a[1], a[2]})) return true;
                   return s.contains("A", {a[0]}) && a[2] != own &&
                          dac::owner_of(s, a[1], own).has_value();
                 }});
  sch.add_query({"SubjectAdmin", {{"S", "S"}},
                 [](const RelationalState& s, const Args& a) {
                   return s.contains("A", {a[1]});
                 }});
  sch.access_queries = {"Access"};
  return sch;
}

// Auxiliary machine M: the administrator set plus the hidden matrix N that
// records the rights an administrator reverts to on demotion.
inline AuxiliaryMachine dac_am_m() {
  AuxiliaryMachine am;
  am.name = "m";
  am.relation_names = {"A", "N"};
  am.commands.push_back({"GrantAdmin", {{"S", "S"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("A", {a[0]}) ||
                               s.contains("A", {a[1]}))
                             return false;
                           s.insert("A", {a[1]});
                           return true;
                         }});
  am.commands.push_back({"RevokeAdmin", {{"S", "S"}},
                         [](RelationalState& s, const Args& a) {
                           if ((!s.contains("A", {a[0]}) && a[0] != a[1]) ||
                               !s.contains("A", {a[1]}))
                             return false;
                           s.erase("A", {a[1]});
                           return true;
                         }});
  am.commands.push_back({"SoftGrant", {{"S", "S", "O", "I"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("A", {a[1]})) return false;
                           s.insert("N", {a[1], a[2], a[3]});
                           return true;
                         }});
  am.commands.push_back({"SoftRevoke", {{"S", "S", "O", "I"}},
                         [](RelationalState& s, const Args& a) {
                           if (!s.contains("A", {a[1]})) return false;
                           s.erase("N", {a[1], a[2], a[3]});
                           return true;
                         }});
  am.queries.push_back({"SubjectAdmin", {{"S", "S"}},
                        [](const RelationalState& s, const Args& a) {
                          return s.contains("A", {a[1]});
                        }});
  am.queries.push_back({"HiddenAccess", {{"S", "S", "O", "I"}},
                        [](const RelationalState& s, const Args& a) {
                          return s.contains("N", {a[1], a[2], a[3]});
                        }});
  return am;
}

inline Scheme dac_m_scheme() { return augment(dac_scheme(), dac_am_m()); }

// Negative control for the AM safety check: an extension command that writes
// the base matrix directly (granting every right, ownership included),
// bolted on without augment()'s immutability wrapper.
inline Scheme dac_m_grant_all_mutant() {
  Scheme sch = dac_m_scheme();
  sch.name = "dac_m_grant_all";
  auto own = dac::own_right("I");
  sch.add_command({"GrantAll", {{"S", "S", "O"}},
                   [own](RelationalState& s, const Args& a) {
                     s.insert("M", {a[1], a[2], own});
                     return true;
                   }});
  return sch;
}

// σ^adac: ADAC in DAC∘M, the Example-6 copy discipline. On promotion an
// admin's matrix rights are copied into N and the admin is granted every
// non-own right over every owned object; demotion reverses this. Grants and
// revokes that target an admin touch only N. Executors of base Grant/Revoke
// are chosen as the object's owner recorded in M.
inline Implementation sigma_adac() {
  Implementation impl;
  impl.name = "sigma_adac";
  auto own = dac::own_right("I");

  impl.map_state = [own](const RelationalState& g, const Universe& universe) {
    RelationalState s;
    for (const Tuple& t : g.tuples("M")) s.insert("M", t);
    for (const Tuple& t : g.tuples("OWN")) s.insert("OWN", t);
    for (const Tuple& t : g.tuples("A")) {
      const Value& adm = t[0];
      s.insert("A", {adm});
      for (const Tuple& m : g.tuples("M")) {
        if (m[0] == adm && m[2] != own) s.insert("N", {adm, m[1], m[2]});
      }
      for (const Atom& o : universe.sort("O")) {
        auto obj = Value::of(o);
        if (!dac::owner_of(g, obj, own)) continue;
        for (const Atom& i : universe.sort("I")) {
          auto right = Value::of(i);
          if (right != own) s.insert("M", {adm, obj, right});
        }
      }
    }
    return s;
  };

  impl.expand_command = [own](const CommandInstance& c,
                              const RelationalState& s, const Universe& u)
      -> std::vector<CommandInstance> {
    const Args& a = c.args;
    auto is_admin = [&s](const Value& v) { return s.contains("A", {v}); };
    auto owner_exec = [&](const Value& o) {
      auto w = dac::owner_of(s, o, own);
      if (!w) throw InvariantViolation("sigma_adac: object without owner");
      return *w;
    };
    if (c.name == "CreateObject") {
      if (dac::owner_of(s, a[1], own)) return {};
      std::vector<CommandInstance> seq{{"CreateObject", {a[0], a[1]}}};
      // Admin bypass must cover the new object in the flattened matrix.
      for (const Tuple& t : s.tuples("A")) {
        for (const Atom& i : u.sort("I")) {
          auto right = Value::of(i);
          if (right != own) seq.push_back({"Grant", {a[0], t[0], a[1], right}});
        }
      }
      return seq;
    }
    if (c.name == "Grant" || c.name == "Revoke") {
      bool may = dac::owns(s, a[0], a[2], own) ||
                 (is_admin(a[0]) && dac::owner_of(s, a[2], own).has_value());
      if (!may || a[3] == own) return {};
      if (is_admin(a[1])) {
        return {{c.name == "Grant" ? "SoftGrant" : "SoftRevoke",
                 {a[0], a[1], a[2], a[3]}}};
      }
      return {{c.name, {owner_exec(a[2]), a[1], a[2], a[3]}}};
    }
    if (c.name == "GrantAdmin") {
      if (!is_admin(a[0]) || is_admin(a[1])) return {};
      std::vector<CommandInstance> seq{{"GrantAdmin", {a[0], a[1]}}};
      for (const Tuple& t : s.tuples("M")) {
        if (t[0] == a[1] && t[2] != own)
          seq.push_back({"SoftGrant", {a[0], a[1], t[1], t[2]}});
      }
      for (const Atom& o : u.sort("O")) {
        auto obj = Value::of(o);
        if (!dac::owner_of(s, obj, own)) continue;
        for (const Atom& i : u.sort("I")) {
          auto right = Value::of(i);
          if (right == own || s.contains("M", {a[1], obj, right})) continue;
          seq.push_back({"Grant", {owner_exec(obj), a[1], obj, right}});
        }
      }
      return seq;
    }
    if (c.name == "RevokeAdmin") {
      if ((!is_admin(a[0]) && a[0] != a[1]) || !is_admin(a[1])) return {};
      std::vector<CommandInstance> seq;
      for (const Tuple& t : s.tuples("M")) {
        if (t[0] != a[1] || t[2] == own) continue;
        if (!s.contains("N", {a[1], t[1], t[2]}))
          seq.push_back({"Revoke", {owner_exec(t[1]), a[1], t[1], t[2]}});
      }
      for (const Tuple& t : s.tuples("N")) {
        if (t[0] == a[1])
          seq.push_back({"SoftRevoke", {a[0], t[0], t[1], t[2]}});
      }
      seq.push_back({"RevokeAdmin", {a[0], a[1]}});
      return seq;
    }
    throw ConfigError("sigma_adac: unknown workload command " + c.name);
  };

  impl.map_query = [](const std::string& q, const Args& a) {
    if (q == "Access" || q == "SubjectAdmin") return std::make_pair(q, a);
    throw ConfigError("sigma_adac: unmapped query " + q);
  };
  return impl;
}

}  // namespace acsim
