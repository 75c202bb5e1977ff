#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "acsim/auxm.hpp"
#include "acsim/schemes/dac.hpp"

using namespace acsim;

namespace {

Value xv(const std::string& sort, const std::string& id) {
  return Value::of(Atom{sort, id});
}

Scheme base_scheme() {
  Scheme sch;
  sch.name = "base";
  sch.relation_names = {"E"};
  sch.add_command({"Mark",
                   {{"X"}},
                   [](RelationalState& st, const Args& a) {
                     if (st.contains("E", {a[0]})) return false;
                     st.insert("E", {a[0]});
                     return true;
                   },
                   false});
  sch.add_query({"Marked", {{"X"}}, [](const RelationalState& st, const Args& a) {
                   return st.contains("E", {a[0]});
                 }});
  return sch;
}

AuxiliaryMachine reader_am() {
  AuxiliaryMachine am;
  am.name = "reader";
  am.relation_names = {"Seen"};
  // Reads the base relation, writes only its own.
  am.commands.push_back({"Note",
                         {{"X"}},
                         [](RelationalState& st, const Args& a) {
                           if (!st.contains("E", {a[0]})) return false;
                           st.insert("Seen", {a[0]});
                           return true;
                         },
                         true});
  am.queries.push_back({"Noted", {{"X"}},
                        [](const RelationalState& st, const Args& a) {
                          return st.contains("Seen", {a[0]});
                        }});
  return am;
}

}  // namespace

TEST_CASE("augmentation is a disjoint union of commands, queries, relations") {
  Scheme aug = augment(base_scheme(), reader_am());
  CHECK(aug.commands.size() == 2);
  CHECK(aug.queries.size() == 2);
  CHECK(aug.command("Mark").am_command == false);
  CHECK(aug.command("Note").am_command == true);
  CHECK(std::find(aug.relation_names.begin(), aug.relation_names.end(),
                  "Seen") != aug.relation_names.end());
}

TEST_CASE("AM commands read base state and write only their own") {
  Scheme aug = augment(base_scheme(), reader_am());
  RelationalState st;
  // Note is guarded on base state it cannot yet see.
  CHECK_FALSE(apply_command_in_place(aug, st, "Note", {xv("X", "x0")}));
  CHECK(apply_command_in_place(aug, st, "Mark", {xv("X", "x0")}));
  CHECK(apply_command_in_place(aug, st, "Note", {xv("X", "x0")}));
  CHECK(eval_query(aug, st, "Noted", {xv("X", "x0")}));
  CHECK(eval_query(aug, st, "Marked", {xv("X", "x0")}));
}

TEST_CASE("an AM command writing base state trips the immutability guard") {
  AuxiliaryMachine rogue = reader_am();
  rogue.commands.push_back({"Tamper",
                            {{"X"}},
                            [](RelationalState& st, const Args& a) {
                              st.insert("E", {a[0]});  // forbidden
                              return true;
                            },
                            true});
  Scheme aug = augment(base_scheme(), rogue);
  RelationalState st;
  CHECK_THROWS_AS(apply_command_in_place(aug, st, "Tamper", {xv("X", "x0")}),
                  InvariantViolation);
}

TEST_CASE("name collisions between base and AM are configuration errors") {
  AuxiliaryMachine clash = reader_am();
  clash.commands.push_back({"Mark",
                            {{"X"}},
                            [](RelationalState&, const Args&) { return false; },
                            true});
  CHECK_THROWS_AS(augment(base_scheme(), clash), ConfigError);

  AuxiliaryMachine rel_clash = reader_am();
  rel_clash.relation_names = {"E"};
  CHECK_THROWS_AS(augment(base_scheme(), rel_clash), ConfigError);
}

TEST_CASE("base commands of an augmented scheme behave exactly as before") {
  Scheme base = base_scheme();
  Scheme aug = augment(base, reader_am());
  RelationalState sb, sa;
  for (int i = 0; i < 3; ++i) {
    Value v = xv("X", "x" + std::to_string(i));
    CHECK(apply_command_in_place(base, sb, "Mark", {v}) ==
          apply_command_in_place(aug, sa, "Mark", {v}));
  }
  CHECK(sb.canonical() == sa.canonical());
}

TEST_CASE("DAC with machine V keeps the flattened matrix in sync") {
  // The AM side (G/GM/W/A/B) never writes M; base Grant/Revoke never touch
  // AM relations. Run a mixed command sequence and check the footprints.
  Scheme dv = dac_v_scheme();
  RelationalState st;
  Value u0 = xv("U", "u0"), u1 = xv("U", "u1");
  Value m0 = xv("M", "m0");
  Value g0 = xv("G", "g0");
  Value own = xv("I", "own"), r = xv("I", "r");
  CHECK(apply_command_in_place(dv, st, "CreateObject", {u0, m0}));
  CHECK(apply_command_in_place(dv, st, "CreateGroup", {u0, g0}));
  std::size_t m_before = st.tuples("M").size();
  CHECK(apply_command_in_place(dv, st, "GrantMember", {u0, u1, g0}));
  CHECK(st.tuples("M").size() == m_before);  // AM writes W/A/B/GM only
  CHECK(apply_command_in_place(dv, st, "Grant", {u0, u1, m0, r}));
  CHECK(eval_query(dv, st, "Access", {u1, m0, r}));
  CHECK(eval_query(dv, st, "Access", {u0, m0, own}));
}
