#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acsim/relstate.hpp"

namespace acsim {

// Ordered parameter sorts. By convention the first parameter is the entity
// executing the command or query.
struct ParamSignature {
  std::vector<std::string> sorts;
};

struct QueryDef {
  std::string name;
  ParamSignature signature;
  // Total and deterministic for well-sorted arguments.
  std::function<bool(const RelationalState&, const Args&)> entail;
};

struct CommandDef {
  std::string name;
  ParamSignature signature;
  // Mutating effect; returns whether the guard fired. A false return must
  // leave the state untouched.
  std::function<bool(RelationalState&, const Args&)> effect;
  // Set by augment() on commands contributed by an auxiliary machine.
  bool am_command = false;
};

struct Scheme {
  std::string name;
  // Declared relation and scalar names. Augmentation uses these to carve out
  // the base component for the immutability check.
  std::vector<std::string> relation_names;
  std::vector<std::string> scalar_names;
  std::map<std::string, CommandDef> commands;
  std::map<std::string, QueryDef> queries;
  // Names of the queries that decide accesses; implementation query
  // mappings are restricted to these.
  std::vector<std::string> access_queries;

  const CommandDef& command(const std::string& n) const {
    auto it = commands.find(n);
    if (it == commands.end())
      throw ConfigError("unknown command '" + n + "' in scheme " + name);
    return it->second;
  }

  const QueryDef& query(const std::string& n) const {
    auto it = queries.find(n);
    if (it == queries.end())
      throw ConfigError("unknown query '" + n + "' in scheme " + name);
    return it->second;
  }

  void add_command(CommandDef c) {
    if (commands.contains(c.name) || queries.contains(c.name))
      throw ConfigError("duplicate name '" + c.name + "' in scheme " + name);
    commands.emplace(c.name, std::move(c));
  }

  void add_query(QueryDef q) {
    if (commands.contains(q.name) || queries.contains(q.name))
      throw ConfigError("duplicate name '" + q.name + "' in scheme " + name);
    queries.emplace(q.name, std::move(q));
  }
};

namespace detail {

inline void check_sorted(const ParamSignature& sig, const Args& args,
                         const std::string& what, const std::string& name) {
  if (args.size() != sig.sorts.size()) {
    throw ConfigError(what + " " + name + ": expected " +
                      std::to_string(sig.sorts.size()) + " arguments, got " +
                      std::to_string(args.size()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].is_atom() && args[i].atom.sort != sig.sorts[i]) {
      throw ConfigError(what + " " + name + ": argument " +
                        std::to_string(i + 1) + " has sort '" +
                        args[i].atom.sort + "', expected '" + sig.sorts[i] +
                        "'");
    }
  }
}

}  // namespace detail

struct ApplyResult {
  RelationalState state;
  bool fired = false;
};

inline ApplyResult apply_command(const Scheme& scheme,
                                 const RelationalState& state,
                                 const std::string& name, const Args& args) {
  const CommandDef& cmd = scheme.command(name);
  detail::check_sorted(cmd.signature, args, "command", name);
  ApplyResult out{state, false};
  out.fired = cmd.effect(out.state, args);
  return out;
}

// In-place variant used on the simulation hot path.
inline bool apply_command_in_place(const Scheme& scheme, RelationalState& state,
                                   const std::string& name, const Args& args) {
  const CommandDef& cmd = scheme.command(name);
  detail::check_sorted(cmd.signature, args, "command", name);
  return cmd.effect(state, args);
}

inline bool eval_query(const Scheme& scheme, const RelationalState& state,
                       const std::string& name, const Args& args) {
  const QueryDef& q = scheme.query(name);
  detail::check_sorted(q.signature, args, "query", name);
  return q.entail(state, args);
}

// Full cartesian product of the signature's sorts, in deterministic order
// (last position varies fastest).
inline std::vector<Args> enumerate_args(const ParamSignature& sig,
                                        const Universe& universe) {
  std::vector<Args> out;
  std::vector<const std::vector<Atom>*> factors;
  for (const std::string& s : sig.sorts) factors.push_back(&universe.sort(s));
  for (const auto* f : factors) {
    if (f->empty()) return out;
  }
  Args current(sig.sorts.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == factors.size()) {
      out.push_back(current);
      return;
    }
    for (const Atom& a : *factors[i]) {
      current[i] = Value::of(a);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

struct CommandInstance {
  std::string name;
  Args args;
};

// One node of the bounded reachability graph; parent links reconstruct a
// minimal-length witness trace.
struct ReachNode {
  RelationalState state;
  int parent = -1;
  CommandInstance via;
  int depth = 0;
};

struct ReachResult {
  std::vector<ReachNode> nodes;  // BFS order; nodes[0] is the start state.
  bool closure = false;          // No new states below the depth bound.

  std::vector<CommandInstance> trace_to(int index) const {
    std::vector<CommandInstance> trace;
    for (int i = index; i > 0; i = nodes[i].parent) trace.push_back(nodes[i].via);
    std::reverse(trace.begin(), trace.end());
    return trace;
  }
};

// The optional visitor sees every discovered state (including the start);
// returning true stops the exploration early (closure is then reported
// false unless already established).
inline ReachResult reachable_states(
    const Scheme& scheme, const RelationalState& start, int depth,
    const Universe& universe,
    const std::function<bool(const RelationalState&)>& visit = nullptr) {
  ReachResult result;
  std::unordered_set<std::string> seen;
  result.nodes.push_back(ReachNode{start, -1, {}, 0});
  seen.insert(start.canonical());
  if (visit && visit(start)) {
    result.closure = false;
    return result;
  }

  // Enumerate parameterizations once per command.
  std::vector<std::pair<const CommandDef*, std::vector<Args>>> moves;
  for (const auto& [name, cmd] : scheme.commands) {
    moves.emplace_back(&cmd, enumerate_args(cmd.signature, universe));
  }

  result.closure = true;
  std::size_t frontier_begin = 0;
  for (int d = 0; d < depth; ++d) {
    std::size_t frontier_end = result.nodes.size();
    if (frontier_begin == frontier_end) break;
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& [cmd, arg_lists] : moves) {
        for (const Args& args : arg_lists) {
          RelationalState next = result.nodes[i].state;
          if (!cmd->effect(next, args)) continue;
          std::string key = next.canonical();
          if (!seen.insert(std::move(key)).second) continue;
          result.nodes.push_back(ReachNode{std::move(next),
                                           static_cast<int>(i),
                                           CommandInstance{cmd->name, args},
                                           d + 1});
          if (visit && visit(result.nodes.back().state)) {
            result.closure = false;
            return result;
          }
        }
      }
    }
    frontier_begin = frontier_end;
  }
  // Closure holds if the last frontier generated nothing new, i.e. a further
  // level could not add states. Probe only when states were added at the
  // final level.
  if (frontier_begin < result.nodes.size()) {
    result.closure = false;
    for (std::size_t i = frontier_begin; i < result.nodes.size() && !result.closure;
         ++i) {
      // A single unexplored frontier remains; report closure only if every
      // successor is already known.
      bool all_known = true;
      for (const auto& [cmd, arg_lists] : moves) {
        for (const Args& args : arg_lists) {
          RelationalState next = result.nodes[i].state;
          if (!cmd->effect(next, args)) continue;
          if (!seen.contains(next.canonical())) {
            all_known = false;
            break;
          }
        }
        if (!all_known) break;
      }
      if (!all_known) return result;
    }
    result.closure = true;
  }
  return result;
}

// Propositional formulas over fully parameterized queries.
struct Formula {
  enum class Kind { kQuery, kAnd, kOr, kNot, kTrue };

  Kind kind = Kind::kTrue;
  std::string query;
  Args args;
  std::vector<Formula> children;

  static Formula query_app(std::string name, Args a) {
    Formula f;
    f.kind = Kind::kQuery;
    f.query = std::move(name);
    f.args = std::move(a);
    return f;
  }
  static Formula conj(std::vector<Formula> cs) {
    Formula f;
    f.kind = Kind::kAnd;
    f.children = std::move(cs);
    return f;
  }
  static Formula disj(std::vector<Formula> cs) {
    Formula f;
    f.kind = Kind::kOr;
    f.children = std::move(cs);
    return f;
  }
  static Formula negate(Formula c) {
    Formula f;
    f.kind = Kind::kNot;
    f.children.push_back(std::move(c));
    return f;
  }
  static Formula truth() { return Formula{}; }
};

inline bool eval_formula(const Scheme& scheme, const RelationalState& state,
                         const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::kTrue:
      return true;
    case Formula::Kind::kQuery:
      return eval_query(scheme, state, f.query, f.args);
    case Formula::Kind::kNot:
      return !eval_formula(scheme, state, f.children[0]);
    case Formula::Kind::kAnd:
      for (const Formula& c : f.children) {
        if (!eval_formula(scheme, state, c)) return false;
      }
      return true;
    case Formula::Kind::kOr:
      for (const Formula& c : f.children) {
        if (eval_formula(scheme, state, c)) return true;
      }
      return false;
  }
  return false;
}

enum class Quantifier { kExists, kForAll };

struct CsaiInstance {
  RelationalState start;
  Formula formula;
  Quantifier quantifier = Quantifier::kExists;
};

enum class Verdict3 { kTrue, kFalse, kUnknown };

// Bounded check of a security analysis instance. Definite answers require
// either a witness/counterexample or closure of the reachable set.
inline Verdict3 eval_csai(const Scheme& scheme, const CsaiInstance& instance,
                          int depth, const Universe& universe) {
  ReachResult reach = reachable_states(scheme, instance.start, depth, universe);
  bool witnessed = false;
  for (const ReachNode& node : reach.nodes) {
    if (eval_formula(scheme, node.state, instance.formula)) {
      witnessed = true;
      if (instance.quantifier == Quantifier::kExists) return Verdict3::kTrue;
    } else if (instance.quantifier == Quantifier::kForAll) {
      return Verdict3::kFalse;
    }
  }
  (void)witnessed;
  if (reach.closure) {
    return instance.quantifier == Quantifier::kExists ? Verdict3::kFalse
                                                      : Verdict3::kTrue;
  }
  return Verdict3::kUnknown;
}

}  // namespace acsim
