#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acsim/relstate.hpp"
#include "acsim/scheme.hpp"

namespace acsim {

// A scheme mapping: translates workload states, commands, and queries into
// the target scheme's vocabulary. Command translation may consult the
// current target state and may expand one command into a sequence.
struct Implementation {
  std::string name;
  std::function<RelationalState(const RelationalState&, const Universe&)> map_state;
  std::function<std::vector<CommandInstance>(const CommandInstance&,
                                             const RelationalState&,
                                             const Universe&)> expand_command;
  std::function<std::pair<std::string, Args>(const std::string&, const Args&)> map_query;
};

inline Implementation identity_implementation(std::string name = "identity") {
  Implementation impl;
  impl.name = std::move(name);
  impl.map_state = [](const RelationalState& s, const Universe&) { return s; };
  impl.expand_command = [](const CommandInstance& c, const RelationalState&,
                           const Universe&) {
    return std::vector<CommandInstance>{c};
  };
  impl.map_query = [](const std::string& q, const Args& a) {
    return std::make_pair(q, a);
  };
  return impl;
}

// Applies the expansion of one workload command to a target state in place.
inline void apply_expansion(const Scheme& target, RelationalState& state,
                            const std::vector<CommandInstance>& seq) {
  for (const CommandInstance& ci : seq) {
    apply_command_in_place(target, state, ci.name, ci.args);
  }
}

// All workload query results over a universe, encoded as a canonical
// signature string usable as a set key.
inline std::string query_signature(const Scheme& workload,
                                   const Implementation& impl,
                                   const Scheme& target,
                                   const RelationalState& target_state,
                                   const Universe& universe) {
  std::string sig;
  for (const auto& [qname, q] : workload.queries) {
    sig += q.name;
    sig += ':';
    for (const Args& args : enumerate_args(q.signature, universe)) {
      auto [tq, targs] = impl.map_query(q.name, args);
      sig += eval_query(target, target_state, tq, targs) ? '1' : '0';
    }
    sig += ';';
  }
  return sig;
}

inline std::string direct_query_signature(const Scheme& scheme,
                                          const RelationalState& state,
                                          const Universe& universe) {
  std::string sig;
  for (const auto& [qname, q] : scheme.queries) {
    sig += q.name;
    sig += ':';
    for (const Args& args : enumerate_args(q.signature, universe)) {
      sig += eval_query(scheme, state, q.name, args) ? '1' : '0';
    }
    sig += ';';
  }
  return sig;
}

// True iff every workload query under every parameterization from the
// universe answers identically on the workload state and (mapped) on the
// target state.
inline bool check_query_equivalence(const Scheme& workload,
                                    const Scheme& target,
                                    const Implementation& impl,
                                    const RelationalState& workload_state,
                                    const RelationalState& target_state,
                                    const Universe& universe) {
  return direct_query_signature(workload, workload_state, universe) ==
         query_signature(workload, impl, target, target_state, universe);
}

struct MatchingReport {
  bool property1_holds = true;  // workload reachable -> equivalent target reachable
  bool property2_holds = true;  // target reachable -> equivalent workload reachable
  bool workload_closed = true;  // bound covered the full reachable set
  bool target_closed = true;
  std::size_t workload_states = 0;
  std::size_t target_states = 0;
  // Witness trace leading to the unmatched state, when a property fails.
  std::vector<CommandInstance> counterexample;
  std::string counterexample_property;  // "1" or "2"
  std::string counterexample_signature;

  bool verified() const { return property1_holds && property2_holds; }
  bool bound_sufficient() const { return workload_closed && target_closed; }
};

// Bounded check of state matching between a workload scheme and its image in
// the target under impl: explores both reachable sets to the given depth and
// compares query signatures in both directions.
inline MatchingReport verify_state_matching(const Scheme& workload,
                                            const Scheme& target,
                                            const Implementation& impl,
                                            const RelationalState& start,
                                            std::size_t depth,
                                            const Universe& universe,
                                            const Universe* target_universe =
                                                nullptr,
                                            std::size_t property2_workload_depth =
                                                0) {
  MatchingReport report;
  // The target scheme may span extra sorts (roles, permissions, rights);
  // its reachability exploration enumerates over its own universe.
  const Universe& tuniverse = target_universe ? *target_universe : universe;
  // A workload command expands to a sequence of target commands, so the
  // workload needs a deeper bound than the target when matching property
  // (2)'s raw target states back to workload states.
  if (property2_workload_depth == 0) property2_workload_depth = 3 * depth;

  ReachResult wl = reachable_states(workload, start, depth, universe);
  RelationalState tstart = impl.map_state(start, universe);
  ReachResult tg = reachable_states(target, tstart, depth, tuniverse);
  report.workload_closed = wl.closure;
  report.target_closed = tg.closure;
  report.workload_states = wl.nodes.size();
  report.target_states = tg.nodes.size();

  // Property (1): every bounded-reachable workload state has a
  // query-equivalent target state — witnessed constructively by replaying
  // the BFS trace through the implementation's expansions (the witness lies
  // within depth × max-expansion-length raw target steps).
  for (std::size_t i = 0; i < wl.nodes.size(); ++i) {
    RelationalState ws = start;
    RelationalState ts = tstart;
    std::vector<CommandInstance> trace = wl.trace_to(i);
    for (const CommandInstance& ci : trace) {
      std::vector<CommandInstance> seq = impl.expand_command(ci, ts, universe);
      apply_command_in_place(workload, ws, ci.name, ci.args);
      apply_expansion(target, ts, seq);
    }
    std::string wsig = direct_query_signature(workload, ws, universe);
    std::string tsig = query_signature(workload, impl, target, ts, universe);
    if (wsig != tsig) {
      report.property1_holds = false;
      report.counterexample = trace;
      report.counterexample_property = "1";
      report.counterexample_signature = wsig;
      break;
    }
  }

  // Property (2): every bounded-reachable raw target state must have a
  // query-equivalent workload state. The workload side explores up to
  // property2_workload_depth, stopping early once every target signature is
  // covered.
  std::map<std::string, std::size_t> uncovered;  // signature -> tg node index
  for (std::size_t i = tg.nodes.size(); i-- > 0;) {
    uncovered[query_signature(workload, impl, target, tg.nodes[i].state,
                              universe)] = i;
  }
  ReachResult wl2 = reachable_states(
      workload, start, property2_workload_depth, universe,
      [&](const RelationalState& st) {
        uncovered.erase(direct_query_signature(workload, st, universe));
        return uncovered.empty();  // stop once all target signatures matched
      });
  if (!uncovered.empty()) {
    report.property2_holds = false;
    std::size_t idx = uncovered.begin()->second;
    if (report.counterexample.empty()) {
      report.counterexample = tg.trace_to(idx);
      report.counterexample_property = "2";
      report.counterexample_signature = uncovered.begin()->first;
    }
  }
  return report;
}

struct LockstepReport {
  bool equivalent = true;
  std::size_t divergence_step = 0;
  std::string detail;
};

// Replays a workload command trace against both the workload scheme and the
// target via impl, checking query agreement after every step. Commands whose
// workload guard fails must expand to a sequence with no observable effect.
inline LockstepReport lockstep_trace_check(const Scheme& workload,
                                           const Scheme& target,
                                           const Implementation& impl,
                                           const RelationalState& start,
                                           const std::vector<CommandInstance>& trace,
                                           const Universe& universe) {
  LockstepReport report;
  RelationalState ws = start;
  RelationalState ts = impl.map_state(start, universe);

  auto check = [&](std::size_t step) {
    std::string wsig = direct_query_signature(workload, ws, universe);
    std::string tsig = query_signature(workload, impl, target, ts, universe);
    if (wsig != tsig) {
      report.equivalent = false;
      report.divergence_step = step;
      report.detail = "workload=" + wsig + " target=" + tsig;
      return false;
    }
    return true;
  };

  if (!check(0)) return report;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const CommandInstance& ci = trace[i];
    apply_command_in_place(workload, ws, ci.name, ci.args);
    apply_expansion(target, ts, impl.expand_command(ci, ts, universe));
    if (!check(i + 1)) return report;
  }
  return report;
}

}  // namespace acsim
