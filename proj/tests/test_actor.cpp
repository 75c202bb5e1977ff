#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acsim/actor.hpp"

using namespace acsim;

namespace {

ActorMachine one_spoke(double rate) {
  ActorMachine m;
  m.name = "spoke";
  int hub = m.add_state("");
  int act = m.add_state("Act");
  m.add_edge(hub, act, rate);
  m.add_edge(act, hub, kImmediateRate);
  return m;
}

}  // namespace

TEST_CASE("exponential samples have the right mean and tail") {
  Rng rng(5);
  double sum = 0.0;
  int over = 0;
  const int n = 200000;
  const double rate = 2.0;
  for (int i = 0; i < n; ++i) {
    double d = sample_exponential(rate, rng);
    CHECK(d > 0.0);
    sum += d;
    if (d > 1.0) ++over;  // P(X > 1) = e^{-2}
  }
  CHECK(sum / n == doctest::Approx(1.0 / rate).epsilon(0.02));
  CHECK(static_cast<double>(over) / n ==
        doctest::Approx(std::exp(-2.0)).epsilon(0.05));
}

TEST_CASE("exponential sampling rejects non-positive rates") {
  Rng rng(1);
  CHECK_THROWS_AS(sample_exponential(0.0, rng), ConfigError);
  CHECK_THROWS_AS(sample_exponential(-1.0, rng), ConfigError);
}

TEST_CASE("exit rate sums finite edges only") {
  ActorMachine m;
  int a = m.add_state("");
  int b = m.add_state("B");
  int c = m.add_state("C");
  m.add_edge(a, b, 2.0);
  m.add_edge(a, c, 3.0);
  m.add_edge(b, a, kImmediateRate);
  CHECK(m.exit_rate(a) == 5.0);
  CHECK(m.exit_rate(b) == 0.0);
  CHECK(m.exit_rate(c) == 0.0);
}

TEST_CASE("next_action fires only once the dwell elapses") {
  ActorMachine m = one_spoke(1.0);
  Rng rng(7);
  ActorRun run;
  run.machine = &m;
  run.state = m.initial;
  run.next_fire = 5.0;
  CHECK(next_action(run, 4.9, rng).empty());
  auto fired = next_action(run, 5.0, rng);
  REQUIRE(fired.size() == 1);
  CHECK(fired[0].action == "Act");
  CHECK(run.state == m.initial);  // immediate edge returned to the hub
  CHECK(run.next_fire > 5.0);     // fresh dwell sampled
}

TEST_CASE("event counts over a window match the Poisson expectation") {
  // One self-loop action at rate r observed for T: expect ~ r*T firings.
  ActorMachine m = one_spoke(0.5);
  Rng rng(11);
  ActorRun run;
  run.machine = &m;
  run.state = m.initial;
  run.next_fire = sample_exponential(0.5, rng);
  const double T = 40000.0;  // r*T = 2*10^4
  long count = 0;
  while (run.next_fire <= T) {
    count += static_cast<long>(next_action(run, run.next_fire, rng).size());
  }
  CHECK(static_cast<double>(count) ==
        doctest::Approx(0.5 * T).epsilon(0.05));
}

TEST_CASE("immediate edges chain through intermediate states") {
  ActorMachine m;
  int hub = m.add_state("");
  int first = m.add_state("First");
  int second = m.add_state("Second");
  m.add_edge(hub, first, 1.0);
  m.add_edge(first, second, kImmediateRate);
  m.add_edge(second, hub, kImmediateRate);
  Rng rng(3);
  ActorRun run;
  run.machine = &m;
  run.state = hub;
  run.next_fire = 0.0;
  auto fired = next_action(run, 0.0, rng);
  REQUIRE(fired.size() == 2);
  CHECK(fired[0].action == "First");
  CHECK(fired[1].action == "Second");
  CHECK(run.state == hub);
}

TEST_CASE("a cycle of immediate transitions aborts the run") {
  ActorMachine m;
  int a = m.add_state("A");
  int b = m.add_state("B");
  m.add_edge(a, b, kImmediateRate);
  m.add_edge(b, a, kImmediateRate);
  Rng rng(9);
  ActorRun run;
  run.machine = &m;
  run.state = a;
  run.next_fire = 0.0;
  CHECK_THROWS_AS(next_action(run, 0.0, rng), InvariantViolation);
}

TEST_CASE("absorbing states never fire again") {
  ActorMachine m;
  int hub = m.add_state("");
  int only = m.add_state("Only");
  m.add_edge(hub, only, 1.0);  // no exit from "Only"
  Rng rng(13);
  ActorRun run;
  run.machine = &m;
  run.state = hub;
  run.next_fire = 0.0;
  auto fired = next_action(run, 0.0, rng);
  CHECK(fired.size() == 1);  // entering action executes once
  CHECK(std::isinf(run.next_fire));
  CHECK(next_action(run, 100.0, rng).empty());
}

TEST_CASE("edge choice follows the rate proportions") {
  ActorMachine m;
  int hub = m.add_state("");
  int rare = m.add_state("Rare");
  int common = m.add_state("Common");
  m.add_edge(hub, rare, 1.0);
  m.add_edge(hub, common, 9.0);
  m.add_edge(rare, hub, kImmediateRate);
  m.add_edge(common, hub, kImmediateRate);
  Rng rng(17);
  ActorRun run;
  run.machine = &m;
  run.state = hub;
  int rare_count = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    run.next_fire = 0.0;
    auto fired = next_action(run, 0.0, rng);
    REQUIRE(fired.size() == 1);
    if (fired[0].action == "Rare") ++rare_count;
  }
  CHECK(static_cast<double>(rare_count) / n ==
        doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("instantiate_params fills self, variables, fresh and task vars") {
  Action act;
  act.name = "Do";
  act.target = "Cmd";
  act.params = {ParamSelf{}, ParamVar{"G"}, ParamFresh{"M"},
                ParamTaskVar{"who", "U"}};
  Universe u;
  u.add_sort("U", 2, "u");
  u.add_sort("G", 1, "g");
  RelationalState st;
  WorkflowInstance inst;
  std::uint64_t fresh = 0;
  std::map<std::string, PopulationSource> pops;
  ParamContext ctx;
  ctx.actor = "u1";
  ctx.state = &st;
  ctx.universe = &u;
  ctx.populations = &pops;
  ctx.instance = &inst;
  ctx.fresh_counter = &fresh;
  Rng rng(21);
  InstantiationResult r = instantiate_params(act, {}, ctx, "U", rng);
  REQUIRE_FALSE(r.starved);
  REQUIRE(r.args.size() == 4);
  CHECK(r.args[0] == Value::of(Atom{"U", "u1"}));
  CHECK(r.args[1].as_atom().sort == "G");
  CHECK(r.args[2].as_atom().sort == "M");
  CHECK(fresh == 1);
  // The drawn task variable is now pinned: re-instantiating reuses it.
  Value pinned = r.args[3];
  InstantiationResult r2 = instantiate_params(act, {}, ctx, "U", rng);
  CHECK(r2.args[3] == pinned);
}

TEST_CASE("an empty population starves the draw") {
  Action act;
  act.name = "Do";
  act.target = "Cmd";
  act.params = {ParamVar{"G"}};
  Universe u;  // no G sort
  RelationalState st;
  std::map<std::string, PopulationSource> pops;
  pops["G"] = PopulationSource{PopulationSource::Kind::kRelation, "Groups"};
  std::uint64_t fresh = 0;
  ParamContext ctx;
  ctx.actor = "u0";
  ctx.state = &st;
  ctx.universe = &u;
  ctx.populations = &pops;
  ctx.fresh_counter = &fresh;
  Rng rng(23);
  InstantiationResult r = instantiate_params(act, {}, ctx, "U", rng);
  CHECK(r.starved);
  CHECK(r.starved_sort == "G");
}

TEST_CASE("machine refinement overrides only variable positions") {
  Action act;
  act.name = "Do";
  act.target = "Cmd";
  act.params = {Value::of(Atom{"G", "g0"}), ParamVar{"U"}};
  Universe u;
  u.add_sort("U", 3, "u");
  RelationalState st;
  std::map<std::string, PopulationSource> pops;
  std::uint64_t fresh = 0;
  ParamContext ctx;
  ctx.actor = "u0";
  ctx.state = &st;
  ctx.universe = &u;
  ctx.populations = &pops;
  ctx.fresh_counter = &fresh;
  Rng rng(29);
  std::map<std::size_t, ParamSpec> refinement;
  refinement[0] = Value::of(Atom{"G", "g9"});  // must not override the fixed value
  refinement[1] = ParamSelf{};
  InstantiationResult r = instantiate_params(act, refinement, ctx, "U", rng);
  CHECK(r.args[0] == Value::of(Atom{"G", "g0"}));
  CHECK(r.args[1] == Value::of(Atom{"U", "u0"}));
}
