#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acsim/relstate.hpp"
#include "acsim/rng.hpp"
#include "acsim/workflow.hpp"

namespace acsim {

// Inverse-CDF draw from Exp(rate): -ln(u)/rate, u uniform on (0,1].
inline double sample_exponential(double rate, Rng& rng) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw ConfigError("sample_exponential: rate must be positive and finite");
  return -std::log(rng.next_unit()) / rate;
}

constexpr double kImmediateRate = std::numeric_limits<double>::infinity();

struct MachineEdge {
  int from = 0;
  int to = 0;
  double rate = 0.0;  // kImmediateRate fires on entry
};

// A continuous-time stochastic state machine. Each state is labeled with a
// workflow action plus a refinement of the action's unbound parameters; an
// empty action name labels a waiting state.
struct ActorMachine {
  std::string name;
  struct State {
    std::string action;  // workflow action name, or "" for no operation
    std::map<std::size_t, ParamSpec> refinement;
  };
  std::vector<State> states;
  std::vector<MachineEdge> edges;
  int initial = 0;

  int add_state(std::string action,
                std::map<std::size_t, ParamSpec> refinement = {}) {
    states.push_back(State{std::move(action), std::move(refinement)});
    return static_cast<int>(states.size()) - 1;
  }

  void add_edge(int from, int to, double rate) {
    edges.push_back(MachineEdge{from, to, rate});
  }

  double exit_rate(int s) const {
    double total = 0.0;
    for (const MachineEdge& e : edges) {
      if (e.from == s && std::isfinite(e.rate)) total += e.rate;
    }
    return total;
  }
};

// One actor's position in its machine within one simulation run.
struct ActorRun {
  std::string actor;
  const ActorMachine* machine = nullptr;
  int state = 0;
  double next_fire = 0.0;
  double busy_until = 0.0;
};

struct FiredAction {
  std::string action;  // workflow action name; empty for a no-op state
  std::map<std::size_t, ParamSpec> refinement;
};

namespace detail {

// Chooses an outgoing edge with probability proportional to its finite
// rates. An infinite-rate edge preempts the draw and fires immediately.
inline std::optional<int> choose_edge(const ActorMachine& m, int s, Rng& rng) {
  for (const MachineEdge& e : m.edges) {
    if (e.from == s && e.rate == kImmediateRate) return e.to;
  }
  double total = m.exit_rate(s);
  if (total <= 0.0) return std::nullopt;
  double x = rng.next_unit() * total;
  for (const MachineEdge& e : m.edges) {
    if (e.from != s || !std::isfinite(e.rate)) continue;
    x -= e.rate;
    if (x <= 0.0) return e.to;
  }
  // Guard against floating-point slop on the last edge.
  for (auto it = m.edges.rbegin(); it != m.edges.rend(); ++it) {
    if (it->from == s && std::isfinite(it->rate)) return it->to;
  }
  return std::nullopt;
}

}  // namespace detail

// Advances an idle actor whose firing time has arrived. Enters the chosen
// state, chains any immediate edges, resamples the dwell time, and returns
// every action executed on entry (no-op states contribute nothing).
// Returns an empty list when the actor's clock has not yet expired.
inline std::vector<FiredAction> next_action(ActorRun& run, double now,
                                            Rng& rng) {
  std::vector<FiredAction> fired;
  if (run.next_fire > now) return fired;

  const ActorMachine& m = *run.machine;
  auto enter = [&](int s) {
    run.state = s;
    // No-op states (empty action names) model waiting; they produce nothing.
    if (!m.states[s].action.empty()) {
      fired.push_back(
          FiredAction{m.states[s].action, m.states[s].refinement});
    }
  };

  std::optional<int> target = detail::choose_edge(m, run.state, rng);
  if (!target) {
    // Absorbing state: nothing ever fires again.
    run.next_fire = std::numeric_limits<double>::infinity();
    return fired;
  }
  enter(*target);

  // Chain immediate transitions; a cycle of them would never terminate.
  std::size_t hops = 0;
  while (true) {
    std::optional<int> imm;
    for (const MachineEdge& e : m.edges) {
      if (e.from == run.state && e.rate == kImmediateRate) {
        imm = e.to;
        break;
      }
    }
    if (!imm) break;
    if (++hops > m.states.size())
      throw InvariantViolation("actor machine '" + m.name +
                               "': cycle of immediate transitions");
    enter(*imm);
  }

  double exit = m.exit_rate(run.state);
  run.next_fire = exit > 0.0
                      ? now + sample_exponential(exit, rng)
                      : std::numeric_limits<double>::infinity();
  return fired;
}

// Where a sort's live population is read from when drawing variables.
struct PopulationSource {
  enum class Kind { kUniverse, kRelation };
  Kind kind = Kind::kUniverse;
  std::string relation;  // unary relation listing the live atoms
};

struct ParamContext {
  std::string actor;
  const RelationalState* state = nullptr;
  const Universe* universe = nullptr;
  const std::map<std::string, PopulationSource>* populations = nullptr;
  WorkflowInstance* instance = nullptr;  // task-variable bindings, if any
  std::uint64_t* fresh_counter = nullptr;
};

struct InstantiationResult {
  Args args;
  bool starved = false;       // some sort had no live atoms
  std::string starved_sort;
};

namespace detail {

inline std::vector<Atom> live_atoms(const std::string& sort,
                                    const ParamContext& ctx) {
  PopulationSource src;
  if (ctx.populations) {
    auto it = ctx.populations->find(sort);
    if (it != ctx.populations->end()) src = it->second;
  }
  if (src.kind == PopulationSource::Kind::kUniverse) {
    return ctx.universe->sort(sort);
  }
  std::vector<Atom> out;
  for (const Tuple& t : ctx.state->tuples(src.relation)) {
    if (t.size() == 1 && t[0].is_atom()) out.push_back(t[0].atom);
  }
  return out;
}

}  // namespace detail

// Fills an action's parameter list: positions bound by the action or the
// machine's refinement keep their values, remaining variables draw uniformly
// from the sort's live population, and the executing-actor position becomes
// the actor id.
inline InstantiationResult instantiate_params(const Action& action,
                                              const std::map<std::size_t, ParamSpec>& refinement,
                                              const ParamContext& ctx,
                                              const std::string& executor_sort,
                                              Rng& rng) {
  InstantiationResult out;
  if (action.target.empty())
    throw ConfigError("cannot instantiate a no-op action: " + action.name);
  for (std::size_t i = 0; i < action.params.size(); ++i) {
    ParamSpec spec = action.params[i];
    auto ref = refinement.find(i);
    if (ref != refinement.end()) {
      // Refinements refine only positions the action left variable.
      if (!std::holds_alternative<Value>(spec)) spec = ref->second;
    }
    if (const Value* v = std::get_if<Value>(&spec)) {
      out.args.push_back(*v);
    } else if (std::holds_alternative<ParamSelf>(spec)) {
      out.args.push_back(Value::of(Atom{executor_sort, ctx.actor}));
    } else if (const ParamVar* var = std::get_if<ParamVar>(&spec)) {
      std::vector<Atom> pool = detail::live_atoms(var->sort, ctx);
      if (pool.empty()) {
        out.starved = true;
        out.starved_sort = var->sort;
        return out;
      }
      out.args.push_back(Value::of(pool[rng.next_below(pool.size())]));
    } else if (const ParamFresh* fresh = std::get_if<ParamFresh>(&spec)) {
      if (!ctx.fresh_counter)
        throw ConfigError("fresh parameter outside a simulation run");
      ++*ctx.fresh_counter;
      out.args.push_back(Value::of(
          Atom{fresh->sort, fresh->sort + "#" + std::to_string(*ctx.fresh_counter)}));
    } else if (const ParamTaskVar* tv = std::get_if<ParamTaskVar>(&spec)) {
      if (ctx.instance && ctx.instance->vars.contains(tv->name)) {
        out.args.push_back(ctx.instance->vars.at(tv->name));
      } else {
        std::vector<Atom> pool = detail::live_atoms(tv->sort, ctx);
        if (pool.empty()) {
          out.starved = true;
          out.starved_sort = tv->sort;
          return out;
        }
        Value v = Value::of(pool[rng.next_below(pool.size())]);
        if (ctx.instance) ctx.instance->vars[tv->name] = v;
        out.args.push_back(v);
      }
    }
  }
  return out;
}

// The workload's invocation component: workflow, actor extraction, machine
// catalog, and the actor-to-machine assignment.
struct Invocation {
  ConstrainedWorkflow workflow;
  std::function<std::vector<std::string>(const RelationalState&)> extract_actors;
  std::map<std::string, ActorMachine> machines;
  std::function<std::string(const RelationalState&, const std::string&)> assign;
  std::map<std::string, PopulationSource> populations;
  std::string actor_sort = "U";
};

}  // namespace acsim
