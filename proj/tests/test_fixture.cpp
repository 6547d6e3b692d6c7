#include <fstream>
#include <sstream>

#include "baac/parse.hpp"
#include "baac/semantics.hpp"
#include "baac/trace.hpp"
#include "doctest.h"

using namespace baac;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Problem load_volleyball() {
  std::string dir = std::string(BAAC_SOURCE_DIR) + "/domains/volleyball2v2/";
  std::vector<AgentTheory> ts;
  ts.push_back(parse_theory(slurp(dir + "white.baac")));
  ts.push_back(parse_theory(slurp(dir + "black.baac")));
  Diagnostics d;
  Problem p = Problem::build(std::move(ts), d);
  REQUIRE_MESSAGE(d.ok(), d.summary());
  return p;
}

}  // namespace

TEST_CASE("volleyball theories parse and expand") {
  Problem p = load_volleyball();
  CHECK(p.theories[0].name == "white");
  CHECK(p.theories[1].name == "black");
  // 2 players x (8 moves + 40 throws) + whistle
  CHECK(p.theories[0].actions.size() == 97);
  CHECK(p.theories[1].actions.size() == 97);
  CHECK(p.table.size() == 17);
}

TEST_CASE("the nine-step rally fixture is a valid trajectory") {
  Problem p = load_volleyball();
  std::string text =
      slurp(std::string(BAAC_SOURCE_DIR) + "/domains/volleyball2v2/rally.fixture");
  Trajectory traj = fixture_to_trajectory(p, text);
  REQUIRE(traj.states.size() == 10);
  REQUIRE(traj.steps.size() == 9);

  CheckReport r = check_trajectory(p, traj, 9);
  INFO(r.to_string(p));
  CHECK(r.valid());
  CHECK(r.agent_success.at("black"));
  CHECK(!r.agent_success.at("white"));
}

TEST_CASE("a mutated rally fixture is rejected") {
  Problem p = load_volleyball();
  std::string text =
      slurp(std::string(BAAC_SOURCE_DIR) + "/domains/volleyball2v2/rally.fixture");
  Trajectory traj = fixture_to_trajectory(p, text);

  SUBCASE("fluent nudged off") {
    traj.states[4][p.table.index_of("y_w_2")] += 1;
    CheckReport r = check_trajectory(p, traj, 9);
    CHECK(!r.valid());
  }
  SUBCASE("action removed leaves unexplained changes") {
    traj.steps[0].clear();
    CheckReport r = check_trajectory(p, traj, 9);
    bool inertia = false;
    for (auto& v : r.violations)
      if (v.kind == Violation::Kind::InertiaViolation) inertia = true;
    CHECK(inertia);
  }
  SUBCASE("truncated") {
    traj.states.pop_back();
    traj.steps.pop_back();
    CheckReport r = check_trajectory(p, traj, 9);
    REQUIRE(!r.valid());
    CHECK(r.violations[0].kind == Violation::Kind::Length);
  }
}

TEST_CASE("fixture round trip") {
  Problem p = load_volleyball();
  std::string text =
      slurp(std::string(BAAC_SOURCE_DIR) + "/domains/volleyball2v2/rally.fixture");
  Trajectory traj = fixture_to_trajectory(p, text);
  std::string printed = trajectory_to_fixture(p, traj);
  Trajectory again = fixture_to_trajectory(p, printed);
  CHECK(again.states == traj.states);
  CHECK(again.steps == traj.steps);
}
