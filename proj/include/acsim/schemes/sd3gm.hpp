#pragma once

#include <set>
#include <string>

#include "acsim/mapping.hpp"
#include "acsim/relstate.hpp"
#include "acsim/scheme.hpp"

namespace acsim {

// SD3-GM: the group-messaging instantiation of the SD3 trust-management
// language. The state is a set of ground facts OWN, ADMIN, MEMBER, POST plus
// a single TIME fact; ACCESS and CURRMEMBER are fixed derivation rules
// evaluated directly (no general inference engine).

namespace sd3 {

inline std::int64_t time_of(const RelationalState& s) {
  for (const Tuple& t : s.tuples("TIME")) return t[0].as_int();
  return 0;
}

inline void advance_time(RelationalState& s) {
  std::int64_t t = time_of(s);
  s.erase("TIME", {Value::of(t)});
  s.insert("TIME", {Value::of(t + 1)});
}

inline bool owned(const RelationalState& s, const Value& g) {
  for (const Tuple& t : s.tuples("OWN")) {
    if (t[1] == g) return true;
  }
  return false;
}

// POSTM(m) mirrors the set of posted messages so the freshness check is one
// probe instead of a scan (POST is keyed by group, not message).
inline bool posted(const RelationalState& s, const Value& m) {
  return s.contains("POSTM", {m});
}

// Visits exactly the MEMBER facts for one (user, group) pair via an
// ordered-set prefix scan; `body` returning true stops early.
template <typename F>
inline bool scan_member(const RelationalState& s, const Value& u,
                        const Value& g, F body) {
  const std::set<Tuple>& rel = s.tuples("MEMBER");
  for (auto it = rel.lower_bound(Tuple{u, g}); it != rel.end(); ++it) {
    if ((*it)[0] != u || (*it)[1] != g) break;
    if (body(*it)) return true;
  }
  return false;
}

// CURRMEMBER(u, g) ⟸ MEMBER(u, g, t, ∞)
inline bool currmember(const RelationalState& s, const Value& u,
                       const Value& g) {
  return scan_member(s, u, g,
                     [](const Tuple& t) { return t[3].as_int() == kInfinity; });
}

}  // namespace sd3

inline Scheme sd3gm_scheme() {
  Scheme sch;
  sch.name = "sd3gm";
  sch.relation_names = {"OWN", "ADMIN", "MEMBER", "POST", "POSTM", "TIME"};

  auto inf = Value::of(kInfinity);
  auto zero = Value::of(std::int64_t{0});

  sch.add_command({"CreateGroup", {{"U", "G"}},
                   [inf, zero](RelationalState& s, const Args& a) {
                     if (sd3::owned(s, a[1])) return false;
                     s.insert("OWN", {a[0], a[1]});
                     s.insert("ADMIN", {a[0], a[1]});
                     s.insert("MEMBER", {a[0], a[1], zero, inf});
                     return true;
                   }});

  sch.add_command({"GrantAdmin", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("OWN", {a[0], a[2]})) return false;
                     s.insert("ADMIN", {a[1], a[2]});
                     return true;
                   }});

  sch.add_command({"RevokeAdmin", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("OWN", {a[0], a[2]}) && a[0] != a[1])
                       return false;
                     s.erase("ADMIN", {a[1], a[2]});
                     return true;
                   }});

  sch.add_command({"SAddMember", {{"U", "U", "G"}},
                   [inf](RelationalState& s, const Args& a) {
                     if (!s.contains("ADMIN", {a[0], a[2]})) return false;
                     s.insert("MEMBER",
                              {a[1], a[2], Value::of(sd3::time_of(s)), inf});
                     sd3::advance_time(s);
                     return true;
                   }});

  sch.add_command({"LAddMember", {{"U", "U", "G"}},
                   [inf, zero](RelationalState& s, const Args& a) {
                     if (!s.contains("ADMIN", {a[0], a[2]})) return false;
                     s.insert("MEMBER", {a[1], a[2], zero, inf});
                     return true;
                   }});

  sch.add_command({"SRemoveMember", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("ADMIN", {a[0], a[2]}) && a[0] != a[1])
                       return false;
                     std::vector<Tuple> gone;
                     sd3::scan_member(s, a[1], a[2], [&](const Tuple& t) {
                       gone.push_back(t);
                       return false;
                     });
                     for (const Tuple& t : gone) s.erase("MEMBER", t);
                     return true;
                   }});

  sch.add_command({"LRemoveMember", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("ADMIN", {a[0], a[2]})) return false;
                     std::int64_t tc = sd3::time_of(s);
                     std::vector<Tuple> open;
                     sd3::scan_member(s, a[1], a[2], [&](const Tuple& t) {
                       if (t[3].as_int() == kInfinity) open.push_back(t);
                       return false;
                     });
                     for (const Tuple& t : open) {
                       s.erase("MEMBER", t);
                       s.insert("MEMBER", {t[0], t[1], t[2], Value::of(tc)});
                     }
                     sd3::advance_time(s);
                     return true;
                   }});

  sch.add_command({"Post", {{"U", "G", "M"}},
                   [](RelationalState& s, const Args& a) {
                     if (!sd3::currmember(s, a[0], a[1])) return false;
                     if (sd3::posted(s, a[2])) return false;
                     s.insert("POST", {a[1], a[2], Value::of(sd3::time_of(s))});
                     s.insert("POSTM", {a[2]});
                     sd3::advance_time(s);
                     return true;
                   }});

  // ACCESS(u, m) ⟸ MEMBER(u, g, t1, t2), POST(g, m, t), t1 ≤ t ≤ t2
  sch.add_query({"Access", {{"U", "M"}},
                 [](const RelationalState& s, const Args& a) {
                   for (const Tuple& p : s.tuples("POST")) {
                     if (p[1] != a[1]) continue;
                     std::int64_t t = p[2].as_int();
                     for (const Tuple& m : s.tuples("MEMBER")) {
                       if (m[0] == a[0] && m[1] == p[0] &&
                           m[2].as_int() <= t && t <= m[3].as_int())
                         return true;
                     }
                   }
                   return false;
                 }});
  sch.access_queries = {"Access"};
  return sch;
}

// σ^S: fact-for-tuple state translation; commands and queries are identity.
inline Implementation sigma_s() {
  Implementation impl = identity_implementation("sigma_s");
  impl.map_state = [](const RelationalState& g, const Universe&) {
    RelationalState s;
    for (const Tuple& t : g.tuples("O")) s.insert("OWN", t);
    for (const Tuple& t : g.tuples("A")) s.insert("ADMIN", t);
    for (const Tuple& t : g.tuples("R")) s.insert("MEMBER", t);
    for (const Tuple& t : g.tuples("TX")) s.insert("POST", t);
    for (const Tuple& t : g.tuples("TXM")) s.insert("POSTM", t);
    s.insert("TIME", {Value::of(g.scalar("T_c"))});
    return s;
  };
  return impl;
}

}  // namespace acsim
