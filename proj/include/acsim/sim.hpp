#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "acsim/actor.hpp"
#include "acsim/cost.hpp"
#include "acsim/mapping.hpp"
#include "acsim/relstate.hpp"
#include "acsim/rng.hpp"
#include "acsim/scheme.hpp"
#include "acsim/stats.hpp"
#include "acsim/workflow.hpp"

namespace acsim {

// One candidate scheme under analysis: the target scheme, the implementation
// translating the workload into it, and per-measure cost functions.
struct CandidateSpec {
  std::string name;
  Scheme scheme;
  Implementation impl;
  Universe universe;  // the target scheme's enumeration universe
  std::vector<CostFunction> cost_fns;  // parallel to SimConfig::measures
  // End-of-run derived metrics over (target state, workload shadow state).
  std::function<std::map<std::string, double>(const RelationalState&,
                                              const RelationalState&)>
      metrics;
};

struct SimConfig {
  Scheme workload;
  Universe universe;
  Invocation invocation;
  std::vector<CostMeasure> measures;  // must contain the time measure
  std::string time_measure = "time";
  std::vector<CandidateSpec> candidates;
  RelationalState start;
  // Optional distribution over start states; overrides `start` when set.
  std::function<RelationalState(Rng&)> start_sampler;
  double goal_time = 0.0;  // T_f, seconds
  double step = 1.0;       // t, seconds
  std::uint64_t seed = 0;
  // Replay one workload trace across all candidates (common random numbers)
  // instead of the default per-scheme independent actor walks.
  bool share_trace = false;
  bool log_events = true;

  std::size_t time_index() const {
    for (std::size_t i = 0; i < measures.size(); ++i) {
      if (measures[i].name == time_measure) return i;
    }
    throw ConfigError("SimConfig: time measure '" + time_measure +
                      "' not among measures");
  }

  void validate() const {
    if (!(step > 0.0)) throw ConfigError("SimConfig: step must be > 0");
    if (goal_time < 0.0) throw ConfigError("SimConfig: goal_time must be >= 0");
    (void)time_index();
    for (const CandidateSpec& c : candidates) {
      if (c.cost_fns.size() != measures.size())
        throw ConfigError("SimConfig: candidate '" + c.name +
                          "' must supply one cost function per measure");
    }
  }
};

enum class EventStatus { kOk, kNoop, kBlocked, kStarved };

inline const char* to_string(EventStatus s) {
  switch (s) {
    case EventStatus::kOk: return "ok";
    case EventStatus::kNoop: return "noop";
    case EventStatus::kBlocked: return "blocked";
    case EventStatus::kStarved: return "starved";
  }
  return "?";
}

struct SimEvent {
  double at = 0.0;
  std::string actor;
  std::string action;   // workflow action name
  std::string command;  // workload command, empty for pure sync steps
  Args args;
  std::vector<CommandInstance> expansion;
  bool fired = false;  // workload guard outcome
  EventStatus status = EventStatus::kOk;
  std::vector<CostVal> costs;  // per measure; empty when nothing accrued
  double busy_until = 0.0;
};

struct WsatSummary {
  std::uint64_t instances_created = 0;
  std::uint64_t instances_completed = 0;
  std::uint64_t instances_abandoned = 0;
  std::uint64_t candidates_examined = 0;
  std::uint64_t max_candidates_single_call = 0;
};

struct RunRecord {
  std::string scheme;
  std::uint64_t run_index = 0;
  std::uint64_t seed = 0;
  std::vector<CostVal> totals;  // per measure
  std::vector<SimEvent> events;
  WsatSummary wsat;
  std::map<std::string, double> metrics;
  double wall_ms = 0.0;
};

namespace detail {

struct LiveActor {
  ActorRun run;
  std::string machine_name;
};

// Simulates one candidate scheme for one run of Algorithm 1.
inline RunRecord simulate_candidate(const SimConfig& cfg,
                                    const CandidateSpec& cand,
                                    const RelationalState& start,
                                    std::uint64_t run_index,
                                    std::uint64_t scheme_seed) {
  auto wall_start = std::chrono::steady_clock::now();
  const std::size_t time_idx = cfg.time_index();

  RunRecord rec;
  rec.scheme = cand.name;
  rec.run_index = run_index;
  rec.seed = scheme_seed;
  rec.totals.reserve(cfg.measures.size());
  for (const CostMeasure& m : cfg.measures) rec.totals.push_back(m.identity);

  Rng rng(scheme_seed);
  RelationalState shadow = start;
  RelationalState target = cand.impl.map_state(shadow, cand.universe);
  InstancePool pool(&cfg.invocation.workflow);
  std::uint64_t fresh_counter = 0;

  std::map<std::string, LiveActor> live;
  std::vector<std::string> actor_ids;
  std::vector<std::string> swept_actors;
  auto refresh_actors = [&](double now) {
    actor_ids = cfg.invocation.extract_actors(shadow);
    std::map<std::string, LiveActor> next;
    for (const std::string& id : actor_ids) {
      std::string mname = cfg.invocation.assign(shadow, id);
      auto it = live.find(id);
      if (it != live.end() && it->second.machine_name == mname) {
        next.emplace(id, std::move(it->second));
        continue;
      }
      const ActorMachine& m = cfg.invocation.machines.at(mname);
      LiveActor la;
      la.machine_name = mname;
      la.run.actor = id;
      la.run.machine = &m;
      la.run.state = m.initial;
      double exit = m.exit_rate(m.initial);
      la.run.next_fire = exit > 0.0 ? now + sample_exponential(exit, rng)
                                    : std::numeric_limits<double>::infinity();
      la.run.busy_until = it != live.end() ? it->second.run.busy_until : now;
      next.emplace(id, std::move(la));
    }
    live = std::move(next);
    // Completability depends only on the actor population, so re-sweeping
    // is redundant unless that population actually changed.
    if (actor_ids != swept_actors) {
      pool.sweep(actor_ids);
      swept_actors = actor_ids;
    }
  };
  refresh_actors(0.0);

  auto accrue = [&](const std::vector<CommandInstance>& seq, SimEvent& ev) {
    ev.costs.assign(cfg.measures.size(), CostVal{});
    for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
      ev.costs[i] = cfg.measures[i].identity;
    }
    for (const CommandInstance& ci : seq) {
      std::vector<CostVal> pre(cfg.measures.size());
      for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
        if (!cand.cost_fns[i].use_post_state) {
          pre[i] = cand.cost_fns[i].eval(ci, target);
        }
      }
      apply_command_in_place(cand.scheme, target, ci.name, ci.args);
      for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
        CostVal c = cand.cost_fns[i].use_post_state
                        ? cand.cost_fns[i].eval(ci, target)
                        : pre[i];
        ev.costs[i] = cfg.measures[i].combine(ev.costs[i], c);
      }
    }
    for (std::size_t i = 0; i < cfg.measures.size(); ++i) {
      rec.totals[i] = cfg.measures[i].combine(rec.totals[i], ev.costs[i]);
    }
  };

  for (double now = 0.0; now <= cfg.goal_time; now += cfg.step) {
    bool state_changed = false;
    for (const std::string& id : actor_ids) {
      auto it = live.find(id);
      if (it == live.end()) continue;
      ActorRun& run = it->second.run;
      if (run.busy_until > now || run.next_fire > now) continue;

      std::vector<FiredAction> fired = next_action(run, now, rng);
      for (const FiredAction& fa : fired) {
        if (fa.action.empty()) continue;  // waiting state
        const Action& act = cfg.invocation.workflow.action(fa.action);

        SimEvent ev;
        ev.at = now;
        ev.actor = id;
        ev.action = fa.action;
        ev.command = act.target;

        // Single-step tasks carry no cross-step constraints; skipping the
        // pool keeps its instance counters scoped to multi-step tasks and
        // avoids leaving an open instance behind a rejected guard.
        bool pooled =
            cfg.invocation.workflow.task_steps(fa.action).size() > 1;
        std::optional<std::uint64_t> iid;
        WorkflowInstance* inst = nullptr;
        if (pooled) {
          iid = pool.admit(fa.action, id, actor_ids, now);
          if (!iid) {
            ev.status = EventStatus::kBlocked;
            if (cfg.log_events) rec.events.push_back(std::move(ev));
            continue;
          }
          inst = pool.find(*iid);
        }

        ParamContext ctx;
        ctx.actor = id;
        ctx.state = &shadow;
        ctx.universe = &cfg.universe;
        ctx.populations = &cfg.invocation.populations;
        ctx.instance = inst;
        ctx.fresh_counter = &fresh_counter;

        bool is_sync = act.target.empty();
        bool guard_fired = true;
        std::vector<CommandInstance> expansion;
        if (!is_sync) {
          InstantiationResult inst_args = instantiate_params(
              act, fa.refinement, ctx, cfg.invocation.actor_sort, rng);
          if (inst_args.starved) {
            ev.status = EventStatus::kStarved;
            if (cfg.log_events) rec.events.push_back(std::move(ev));
            continue;
          }
          ev.args = inst_args.args;
          CommandInstance wci{act.target, inst_args.args};
          expansion = cand.impl.expand_command(wci, target, cand.universe);
          guard_fired = apply_command_in_place(cfg.workload, shadow,
                                               act.target, wci.args);
          state_changed = state_changed || guard_fired;
        }
        ev.fired = guard_fired;
        ev.status = is_sync ? EventStatus::kNoop : EventStatus::kOk;

        accrue(expansion, ev);
        ev.expansion = std::move(expansion);
        double dt = ev.costs.empty() ? 0.0 : ev.costs[time_idx][0];
        run.busy_until = now + dt;
        ev.busy_until = run.busy_until;

        if (guard_fired) {
          if (pooled) pool.record_execution(*iid, fa.action, id);
          if (inst) {
            for (const auto& [var, spec] : act.exports) {
              if (inst->vars.contains(var)) continue;
              if (std::holds_alternative<ParamSelf>(spec)) {
                inst->vars[var] =
                    Value::of(Atom{cfg.invocation.actor_sort, id});
              } else if (const Value* v = std::get_if<Value>(&spec)) {
                inst->vars[var] = *v;
              } else if (const ParamVar* pv = std::get_if<ParamVar>(&spec)) {
                std::vector<Atom> live = detail::live_atoms(pv->sort, ctx);
                if (!live.empty()) {
                  inst->vars[var] =
                      Value::of(live[rng.next_below(live.size())]);
                }
              }
            }
          }
        }
        if (cfg.log_events) rec.events.push_back(std::move(ev));
      }
    }
    if (state_changed) refresh_actors(now);
  }

  rec.wsat.instances_created = pool.created_total();
  rec.wsat.instances_completed = pool.completed_total();
  rec.wsat.instances_abandoned = pool.abandoned_total();
  rec.wsat.candidates_examined = pool.stats().candidates_examined;
  rec.wsat.max_candidates_single_call = pool.stats().max_candidates_single_call;
  if (cand.metrics) rec.metrics = cand.metrics(target, shadow);

  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - wall_start)
                    .count();
  return rec;
}

}  // namespace detail

// Algorithm 1: one deterministic run per candidate scheme.
inline std::vector<RunRecord> simulate(const SimConfig& cfg,
                                       std::uint64_t run_index = 0) {
  cfg.validate();
  RelationalState start = cfg.start;
  if (cfg.start_sampler) {
    Rng rng(derive_seed(cfg.seed, "start", run_index));
    start = cfg.start_sampler(rng);
  }
  std::vector<RunRecord> out;
  out.reserve(cfg.candidates.size());
  for (const CandidateSpec& cand : cfg.candidates) {
    std::string label =
        cfg.share_trace ? std::string("trace") : "scheme:" + cand.name;
    std::uint64_t seed = derive_seed(cfg.seed, label, run_index);
    out.push_back(
        detail::simulate_candidate(cfg, cand, start, run_index, seed));
  }
  return out;
}

// Algorithm 2: independent Monte Carlo runs, optionally on parallel workers;
// output is ordered by run index regardless of completion order.
inline std::vector<std::vector<RunRecord>> monte_carlo(const SimConfig& cfg,
                                                       std::size_t runs,
                                                       bool parallel = true) {
  if (runs < 1) throw ConfigError("monte_carlo: runs must be >= 1");
  cfg.validate();
  std::vector<std::vector<RunRecord>> out(runs);
  unsigned workers =
      parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(runs));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= runs) return;
      try {
        out[k] = simulate(cfg, k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct CiReport {
  double mean = 0.0;
  double variance = 0.0;
  std::size_t runs = 0;
  double half_width = 0.0;
  double confidence = 0.0;
  double tolerance = 0.0;
  bool hit_cap = false;
  std::string note;
};

// Algorithm 3 core: draw scalar outcomes until the relative confidence
// interval is tight enough or the run cap is reached.
inline CiReport ci_run(const std::function<double(std::size_t)>& sample_run,
                       double confidence, double tolerance,
                       std::size_t max_runs) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ConfigError("ci_run: confidence outside (0,1)");
  if (!(tolerance > 0.0 && tolerance < 1.0))
    throw ConfigError("ci_run: tolerance outside (0,1)");
  if (max_runs < 2) throw ConfigError("ci_run: max_runs must be >= 2");

  CiReport rep;
  rep.confidence = confidence;
  rep.tolerance = tolerance;
  Welford w;
  for (std::size_t k = 0; k < max_runs; ++k) {
    w.add(sample_run(k));
    if (w.count() < 2) continue;
    double t = t_quantile(static_cast<long>(w.count()) - 1,
                          1.0 - (1.0 - confidence) / 2.0);
    double hw = t * std::sqrt(w.variance() / static_cast<double>(w.count()));
    rep.half_width = hw;
    if (w.mean() == 0.0) {
      rep.note = "relative tolerance undefined at zero mean";
      continue;
    }
    if (hw <= tolerance * std::abs(w.mean())) {
      rep.mean = w.mean();
      rep.variance = w.variance();
      rep.runs = w.count();
      return rep;
    }
  }
  rep.mean = w.mean();
  rep.variance = w.variance();
  rep.runs = w.count();
  rep.hit_cap = true;
  if (rep.note.empty()) rep.note = "run cap reached before tolerance";
  return rep;
}

// Algorithm 3 over a simulation config: projects each run's records to one
// scalar cost.
inline CiReport ci_run(
    const SimConfig& cfg,
    const std::function<double(const std::vector<RunRecord>&)>& projection,
    double confidence, double tolerance, std::size_t max_runs) {
  return ci_run(
      [&](std::size_t k) { return projection(simulate(cfg, k)); }, confidence,
      tolerance, max_runs);
}

// Scalar projection of one measure total for summaries and CSV export:
// single-component measures report the component, two-component ratio
// measures (work-ratio style) report the quotient.
inline double scalar_total(const CostVal& v) {
  if (v.empty()) return 0.0;
  if (v.size() == 2) return v[1] != 0.0 ? v[0] / v[1] : 0.0;
  return v[0];
}

inline std::map<std::string, std::map<std::string, Welford>> summarize(
    const std::vector<std::vector<RunRecord>>& runs,
    const std::vector<CostMeasure>& measures) {
  std::map<std::string, std::map<std::string, Welford>> out;
  for (const auto& per_run : runs) {
    for (const RunRecord& rec : per_run) {
      auto& slot = out[rec.scheme];
      for (std::size_t i = 0; i < measures.size(); ++i) {
        slot[measures[i].name].add(scalar_total(rec.totals[i]));
      }
      for (const auto& [k, v] : rec.metrics) slot[k].add(v);
    }
  }
  return out;
}

}  // namespace acsim
