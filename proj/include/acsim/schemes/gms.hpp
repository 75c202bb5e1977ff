#pragma once

#include <set>
#include <string>

#include "acsim/relstate.hpp"
#include "acsim/scheme.hpp"

namespace acsim {

// Group Messaging Scheme (GMS): time-variant group membership where access
// to a message depends on the member's recorded intervals covering the
// message's posting timestamp.
//
// Relations: G(g), O(u,g) owners, A(u,g) admins, R(u,g,tl,tu) membership
// record, TX(g,m,t) transcript. Scalar T_c is the current timestamp.
//
// Two guards are strengthened relative to the usual presentation: CreateGroup
// requires a fresh group and Post a fresh message, and LRemoveMember
// advances T_c after capping intervals. Without these, a re-created group or
// a post landing on the cap timestamp silently re-grants revoked access.

namespace gms {

inline Value user(const std::string& id) { return Value::of(Atom{"U", id}); }
inline Value group(const std::string& id) { return Value::of(Atom{"G", id}); }
inline Value message(const std::string& id) { return Value::of(Atom{"M", id}); }

inline bool group_exists(const RelationalState& s, const Value& g) {
  return s.contains("G", {g});
}

// TXM(m) mirrors the set of posted messages so freshness is one probe
// instead of a transcript scan (TX is keyed by group, not message).
inline bool message_posted(const RelationalState& s, const Value& m) {
  return s.contains("TXM", {m});
}

// Visits exactly the R-tuples for one (user, group) pair via an ordered-set
// prefix scan; `body` returning true stops early.
template <typename F>
inline bool scan_intervals(const RelationalState& s, const Value& u,
                           const Value& g, F body) {
  const std::set<Tuple>& r = s.tuples("R");
  for (auto it = r.lower_bound(Tuple{u, g}); it != r.end(); ++it) {
    if ((*it)[0] != u || (*it)[1] != g) break;
    if (body(*it)) return true;
  }
  return false;
}

inline bool open_interval(const RelationalState& s, const Value& u,
                          const Value& g) {
  return scan_intervals(
      s, u, g, [](const Tuple& t) { return t[3].as_int() == kInfinity; });
}

}  // namespace gms

inline Scheme gms_scheme() {
  Scheme sch;
  sch.name = "gms";
  sch.relation_names = {"G", "O", "A", "R", "TX", "TXM"};
  sch.scalar_names = {"T_c"};

  auto inf = Value::of(kInfinity);
  auto zero = Value::of(std::int64_t{0});

  sch.add_command({"CreateGroup", {{"U", "G"}},
                   [inf, zero](RelationalState& s, const Args& a) {
                     const Value& u = a[0];
                     const Value& g = a[1];
                     if (gms::group_exists(s, g)) return false;
                     s.insert("G", {g});
                     s.insert("O", {u, g});
                     s.insert("A", {u, g});
                     s.insert("R", {u, g, zero, inf});
                     return true;
                   }});

  sch.add_command({"GrantAdmin", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("O", {a[0], a[2]})) return false;
                     s.insert("A", {a[1], a[2]});
                     return true;
                   }});

  sch.add_command({"RevokeAdmin", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("O", {a[0], a[2]}) && a[0] != a[1])
                       return false;
                     s.erase("A", {a[1], a[2]});
                     return true;
                   }});

  sch.add_command({"SAddMember", {{"U", "U", "G"}},
                   [inf](RelationalState& s, const Args& a) {
                     if (!s.contains("A", {a[0], a[2]})) return false;
                     std::int64_t tc = s.scalar("T_c");
                     s.insert("R", {a[1], a[2], Value::of(tc), inf});
                     s.set_scalar("T_c", tc + 1);
                     return true;
                   }});

  sch.add_command({"LAddMember", {{"U", "U", "G"}},
                   [inf, zero](RelationalState& s, const Args& a) {
                     if (!s.contains("A", {a[0], a[2]})) return false;
                     s.insert("R", {a[1], a[2], zero, inf});
                     return true;
                   }});

  sch.add_command({"SRemoveMember", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("A", {a[0], a[2]}) && a[0] != a[1])
                       return false;
                     std::vector<Tuple> gone;
                     gms::scan_intervals(s, a[1], a[2], [&](const Tuple& t) {
                       gone.push_back(t);
                       return false;
                     });
                     for (const Tuple& t : gone) s.erase("R", t);
                     return true;
                   }});

  sch.add_command({"LRemoveMember", {{"U", "U", "G"}},
                   [](RelationalState& s, const Args& a) {
                     if (!s.contains("A", {a[0], a[2]})) return false;
                     std::int64_t tc = s.scalar("T_c");
                     std::vector<Tuple> open;
                     gms::scan_intervals(s, a[1], a[2], [&](const Tuple& t) {
                       if (t[3].as_int() == kInfinity) open.push_back(t);
                       return false;
                     });
                     for (const Tuple& t : open) {
                       s.erase("R", t);
                       s.insert("R", {t[0], t[1], t[2], Value::of(tc)});
                     }
                     s.set_scalar("T_c", tc + 1);
                     return true;
                   }});

  sch.add_command({"Post", {{"U", "G", "M"}},
                   [](RelationalState& s, const Args& a) {
                     if (!gms::open_interval(s, a[0], a[1])) return false;
                     if (gms::message_posted(s, a[2])) return false;
                     std::int64_t tc = s.scalar("T_c");
                     s.insert("TX", {a[1], a[2], Value::of(tc)});
                     s.insert("TXM", {a[2]});
                     s.set_scalar("T_c", tc + 1);
                     return true;
                   }});

  sch.add_query({"Access", {{"U", "M"}},
                 [](const RelationalState& s, const Args& a) {
                   for (const Tuple& tx : s.tuples("TX")) {
                     if (tx[1] != a[1]) continue;
                     std::int64_t t = tx[2].as_int();
                     for (const Tuple& r : s.tuples("R")) {
                       if (r[0] == a[0] && r[1] == tx[0] &&
                           r[2].as_int() <= t && t <= r[3].as_int())
                         return true;
                     }
                   }
                   return false;
                 }});
  sch.access_queries = {"Access"};
  return sch;
}

inline Universe gms_universe(int users, int groups, int messages) {
  Universe u;
  u.add_sort("U", users, "u");
  u.add_sort("G", groups, "g");
  u.add_sort("M", messages, "m");
  return u;
}

}  // namespace acsim
