#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "acsim/relstate.hpp"
#include "acsim/scheme.hpp"

namespace acsim {

// An auxiliary machine: extra relations, commands, and queries layered on a
// base scheme. Its commands may read the base state but must never write it.
struct AuxiliaryMachine {
  std::string name;
  std::vector<std::string> relation_names;
  std::vector<std::string> scalar_names;
  std::vector<CommandDef> commands;
  std::vector<QueryDef> queries;
  std::vector<std::string> access_queries;
  // Populates the machine's own relations in a fresh augmented start state.
  std::function<void(RelationalState&, const Universe&)> init;
};

namespace detail {

// Mutation-version counters of the base relations plus the base scalar
// values: O(#base names) to collect, and equality across an operation proves
// the operation never wrote the base state.
inline std::vector<std::uint64_t> base_footprint(
    const RelationalState& s, const std::set<std::string>& base_rels,
    const std::set<std::string>& base_scalars) {
  std::vector<std::uint64_t> fp;
  fp.reserve(base_rels.size() + base_scalars.size());
  for (const std::string& r : base_rels) fp.push_back(s.version(r));
  for (const std::string& k : base_scalars) {
    fp.push_back(static_cast<std::uint64_t>(s.scalar(k)));
  }
  return fp;
}

}  // namespace detail

// Builds the augmented scheme: base relations plus machine relations, the
// disjoint union of commands and queries. Machine commands are wrapped so a
// write to any base relation raises an invariant violation.
inline Scheme augment(const Scheme& base, const AuxiliaryMachine& am) {
  Scheme out;
  out.name = base.name + "_" + am.name;
  out.relation_names = base.relation_names;
  out.scalar_names = base.scalar_names;

  std::set<std::string> rels(base.relation_names.begin(), base.relation_names.end());
  std::set<std::string> scalars(base.scalar_names.begin(), base.scalar_names.end());
  for (const std::string& r : am.relation_names) {
    if (rels.contains(r))
      throw ConfigError("augment: relation name collision: " + r);
    out.relation_names.push_back(r);
  }
  for (const std::string& k : am.scalar_names) {
    if (scalars.contains(k))
      throw ConfigError("augment: scalar name collision: " + k);
    out.scalar_names.push_back(k);
  }

  for (const auto& [cn, c] : base.commands) out.add_command(c);
  for (const auto& [qn, q] : base.queries) out.add_query(q);
  out.access_queries = base.access_queries;

  for (const CommandDef& c : am.commands) {
    CommandDef wrapped = c;
    wrapped.am_command = true;
    auto inner = c.effect;
    std::set<std::string> base_rels = rels;
    std::set<std::string> base_scalars = scalars;
    wrapped.effect = [inner, base_rels, base_scalars](RelationalState& s,
                                                      const Args& a) {
      std::vector<std::uint64_t> before =
          detail::base_footprint(s, base_rels, base_scalars);
      bool fired = inner(s, a);
      if (detail::base_footprint(s, base_rels, base_scalars) != before)
        throw InvariantViolation("auxiliary machine command wrote base state");
      return fired;
    };
    out.add_command(wrapped);
  }
  for (const QueryDef& q : am.queries) out.add_query(q);
  for (const std::string& q : am.access_queries) out.access_queries.push_back(q);
  return out;
}

inline RelationalState augment_state(const RelationalState& base_state,
                                     const AuxiliaryMachine& am,
                                     const Universe& universe) {
  RelationalState s = base_state;
  if (am.init) am.init(s, universe);
  return s;
}

}  // namespace acsim
