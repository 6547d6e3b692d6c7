#include <fstream>
#include <set>
#include <sstream>

#include "baac/engine.hpp"
#include "baac/parse.hpp"
#include "baac/trace.hpp"
#include "doctest.h"

using namespace baac;

namespace {

std::string domain_dir(const std::string& name) {
  return std::string(BAAC_SOURCE_DIR) + "/domains/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Loaded {
  RunConfig cfg;
  Problem problem;
};

Loaded load(const std::string& domain, const std::string& settings) {
  std::string dir = domain_dir(domain);
  RunConfig cfg = parse_settings(slurp(dir + "/" + settings));
  Diagnostics diags;
  Loaded out{cfg, load_problem(cfg, dir, diags)};
  REQUIRE_MESSAGE(diags.ok(), diags.summary());
  return out;
}

// trace inspection helpers
std::vector<std::vector<std::string>> trace_lines(const std::string& trace) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::string col;
    std::istringstream ls(line);
    while (std::getline(ls, col, '\t')) cols.push_back(col);
    out.push_back(cols);
  }
  return out;
}

// events of one step, between STEP markers
std::vector<std::vector<std::string>> step_events(const std::string& trace, int step) {
  std::vector<std::vector<std::string>> out;
  bool in_step = false;
  for (auto& cols : trace_lines(trace)) {
    if (cols.size() >= 2 && cols[0] == "STEP") {
      in_step = std::stoi(cols[1]) == step;
      continue;
    }
    if (in_step) out.push_back(cols);
  }
  return out;
}

bool has_event(const std::vector<std::vector<std::string>>& events,
               std::initializer_list<const char*> prefix) {
  for (auto& cols : events) {
    if (cols.size() < prefix.size()) continue;
    bool ok = true;
    size_t i = 0;
    for (const char* p : prefix)
      if (cols[i++] != p) ok = false;
    if (ok) return true;
  }
  return false;
}

std::vector<std::string> proposals_of(const std::string& trace, const std::string& agent) {
  std::vector<std::string> out;
  for (auto& cols : trace_lines(trace))
    if (cols.size() >= 3 && cols[0] == "PROPOSE" && cols[1] == agent)
      out.push_back(cols[2]);
  return out;
}

}  // namespace

TEST_CASE("conflict domain, supervisor mode: priority filter plus lexicographic pick") {
  Loaded l = load("conflict", "supervisor.cfg");
  RunResult r = run(l.problem, l.cfg);
  INFO(r.trace);
  REQUIRE(r.error.empty());

  auto s1 = step_events(r.trace, 1);
  // (a) the priority filter inhibits act_c (priority 2)
  CHECK(has_event(s1, {"INHIBIT", "c", "act_c", "priority"}));
  // (b) lexicographic pick enables act_a, commits f = 1, b fails
  CHECK(has_event(s1, {"ENABLE", "a", "act_a"}));
  CHECK(has_event(s1, {"INHIBIT", "b", "act_b", "arbitration"}));
  CHECK(has_event(s1, {"STATE-DIFF", "f=1"}));
  CHECK(has_event(s1, {"OUTCOME", "a", "success"}));
  CHECK(has_event(s1, {"OUTCOME", "b", "failure"}));
  CHECK(has_event(s1, {"OUTCOME", "c", "failure"}));

  // c's on_failure retry_after 3: failure at step 1, two nops, retry at step 4
  auto c_props = proposals_of(r.trace, "c");
  REQUIRE(c_props.size() >= 4);
  CHECK(c_props[0] == "act_c");
  CHECK(c_props[1] == "-");
  CHECK(c_props[2] == "-");
  CHECK(c_props[3] == "act_c");

  // the run stays a valid trajectory throughout
  CHECK(r.safety.valid());
}

TEST_CASE("conflict domain, negotiate mode: retry schedule for a, forego for b") {
  Loaded l = load("conflict", "negotiate.cfg");
  RunResult r = run(l.problem, l.cfg);
  INFO(r.trace);
  REQUIRE(r.error.empty());

  auto s1 = step_events(r.trace, 1);
  CHECK(has_event(s1, {"INHIBIT", "c", "act_c", "priority"}));
  CHECK(has_event(s1, {"NEGOTIATE", "a", "act_a", "0", "applied"}));
  CHECK(has_event(s1, {"NEGOTIATE", "b", "act_b", "0", "applied"}));
  CHECK(has_event(s1, {"INHIBIT", "a", "act_a", "negotiation"}));
  CHECK(has_event(s1, {"INHIBIT", "b", "act_b", "negotiation"}));
  // failure outcomes delivered to both
  CHECK(has_event(s1, {"OUTCOME", "a", "failure"}));
  CHECK(has_event(s1, {"OUTCOME", "b", "failure"}));
  // nothing survives the negotiation: the state is unchanged
  CHECK(has_event(s1, {"STATE-DIFF", "-"}));

  // a's on_conflict retry_after 2: two nops then the retry
  auto a_props = proposals_of(r.trace, "a");
  REQUIRE(a_props.size() >= 4);
  CHECK(a_props[0] == "act_a");
  CHECK(a_props[1] == "-");
  CHECK(a_props[2] == "-");
  CHECK(a_props[3] == "act_a");

  CHECK(r.safety.valid());
}

TEST_CASE("guitar domain: ten guitars within the settings horizon") {
  Loaded l = load("guitar", "settings.cfg");
  RunResult r = run(l.problem, l.cfg);
  INFO(r.error);
  REQUIRE(r.error.empty());
  REQUIRE(r.safety.valid());

  int guitars_id = l.problem.table.index_of("guitars");
  CHECK(r.trajectory.states.back()[guitars_id] == 10);
  CHECK(r.goal_verdicts.at("guitar_maker"));
  CHECK(r.exit_code == 0);

  // the account grows by 8 per executed strings serve and 60 per pickup
  // serve (request axioms 2 and 3 of the maker)
  int strings_served = 0, pickups_served = 0;
  for (auto& cols : trace_lines(r.trace)) {
    if (cols.size() >= 3 && cols[0] == "ENABLE" && cols[1] == "seller") {
      if (cols[2] == serve_action_name("guitar_maker", 2)) ++strings_served;
      if (cols[2] == serve_action_name("guitar_maker", 3)) ++pickups_served;
    }
  }
  int account_id = l.problem.table.index_of("seller_account");
  CHECK(r.trajectory.states.back()[account_id] ==
        8 * strings_served + 60 * pickups_served);
  CHECK(strings_served > 0);
  CHECK(pickups_served > 0);
}

TEST_CASE("guitar domain: fulfilled requests appear in the tuple log") {
  Loaded l = load("guitar", "settings.cfg");
  RunResult r = run(l.problem, l.cfg);
  int fulfilled = 0;
  for (auto& cols : trace_lines(r.trace))
    if (cols.size() >= 3 && cols[0] == "TUPLE" && cols[1] == "out" &&
        cols[2] == "Fulfilled")
      ++fulfilled;
  CHECK(fulfilled >= 8);  // several restocks of each material
}

TEST_CASE("determinism: same seed, byte-identical traces") {
  for (const char* spec : {"conflict/supervisor.cfg", "conflict/negotiate.cfg",
                           "guitar/settings.cfg"}) {
    std::string s(spec);
    auto slash = s.find('/');
    Loaded l = load(s.substr(0, slash), s.substr(slash + 1));
    RunResult a = run(l.problem, l.cfg);
    RunResult b = run(l.problem, l.cfg);
    REQUIRE_MESSAGE(a.trace == b.trace, spec);
  }
}

TEST_CASE("concurrent mode produces the deterministic trace") {
  Loaded l = load("guitar", "settings.cfg");
  RunResult det = run(l.problem, l.cfg);
  RunConfig conc = l.cfg;
  conc.deterministic = false;
  RunResult par = run(l.problem, conc);
  // identical apart from the RUN header echoing the mode
  auto body = [](const std::string& t) { return t.substr(t.find('\n') + 1); };
  CHECK(body(det.trace) == body(par.trace));
  CHECK(det.trace.find("deterministic=true") != std::string::npos);
  CHECK(par.trace.find("deterministic=false") != std::string::npos);
}

TEST_CASE("trace replay: the derived fixture validates") {
  Loaded l = load("guitar", "settings.cfg");
  RunResult r = run(l.problem, l.cfg);
  Trajectory replay = trajectory_from_trace(l.problem, r.trace);
  REQUIRE(replay.states.size() == r.trajectory.states.size());
  CHECK(replay.states == r.trajectory.states);
  std::string fixture = trajectory_to_fixture(l.problem, replay);
  Trajectory again = fixture_to_trajectory(l.problem, fixture);
  CheckReport rep = check_trajectory(l.problem, again, l.cfg.horizon);
  INFO(rep.to_string(l.problem));
  CHECK(rep.valid());
}

TEST_CASE("run: horizon zero with satisfied goals exits clean") {
  Problem p = [] {
    Diagnostics d;
    std::vector<AgentTheory> ts;
    ts.push_back(parse_theory("agent t.\nfluent f valued 0..5.\ngoal f = 0.\n"
                              "initially f = 0.\n"));
    return Problem::build(std::move(ts), d);
  }();
  RunConfig cfg;
  cfg.horizon = 0;
  RunResult r = run(p, cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.goal_verdicts.at("t"));
  CHECK(r.trajectory.states.size() == 1);
}

TEST_CASE("run: inconsistent initial state aborts with a config error") {
  Diagnostics d;
  std::vector<AgentTheory> ts;
  ts.push_back(parse_theory("agent x.\nfluent f valued 0..5.\ninitially f = 1.\n"));
  ts.push_back(parse_theory("agent y.\nfluent f valued 0..5.\ninitially f = 2.\n"));
  Problem p = Problem::build(std::move(ts), d);
  CHECK(!d.ok());  // the validator catches it syntactically too
  RunConfig cfg;
  cfg.horizon = 2;
  RunResult r = run(p, cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.error.find("InconsistentInitialState") != std::string::npos);
}

TEST_CASE("run: exactly N transitions, enabled sets are proposal subsets") {
  for (const char* spec : {"conflict/supervisor.cfg", "conflict/negotiate.cfg",
                           "guitar/settings.cfg"}) {
    std::string s(spec);
    auto slash = s.find('/');
    Loaded l = load(s.substr(0, slash), s.substr(slash + 1));
    RunResult r = run(l.problem, l.cfg);
    CHECK(static_cast<int>(r.trajectory.steps.size()) == l.cfg.horizon);
    CHECK(static_cast<int>(r.trajectory.states.size()) == l.cfg.horizon + 1);

    // X_{i+1} is always a subset of the proposed Y_{i+1}
    int step = 0;
    std::set<std::pair<std::string, std::string>> proposed;
    auto check_enabled = [&](const std::vector<std::string>& cols) {
      if (cols[0] == "STEP") {
        step = std::stoi(cols[1]);
        proposed.clear();
      } else if (cols[0] == "PROPOSE" && cols.size() >= 3 && cols[2] != "-") {
        std::istringstream names(cols[2]);
        std::string n;
        while (std::getline(names, n, ',')) proposed.insert({cols[1], n});
      } else if (cols[0] == "ENABLE" && cols.size() >= 3) {
        CHECK_MESSAGE(proposed.count({cols[1], cols[2]}) == 1,
                      spec << " step " << step << ": enabled " << cols[1] << ":"
                           << cols[2] << " was not proposed");
      }
    };
    for (auto& cols : trace_lines(r.trace))
      if (!cols.empty()) check_enabled(cols);
  }
}

TEST_CASE("volleyball runs: valid trajectories, black converts its serve") {
  for (const char* domain : {"volleyball1v1", "volleyball2v2"}) {
    Loaded l = load(domain, "settings.cfg");
    RunResult r = run(l.problem, l.cfg);
    INFO(domain);
    REQUIRE(r.error.empty());
    CHECK(r.safety.valid());
    // one team scores within the horizon
    int pb = l.problem.table.index_of("point_black");
    int pw = l.problem.table.index_of("point_white");
    CHECK(r.trajectory.states.back()[pb] + r.trajectory.states.back()[pw] >= 1);
    // the trace replays into a fixture the checker accepts
    Trajectory replay = trajectory_from_trace(l.problem, r.trace);
    CheckReport rep = check_trajectory(l.problem, replay, l.cfg.horizon);
    CHECK(rep.valid());
  }
}

TEST_CASE("volleyball 1v1: concurrent schedule matches the deterministic trace") {
  Loaded l = load("volleyball1v1", "settings.cfg");
  RunResult det = run(l.problem, l.cfg);
  RunConfig conc = l.cfg;
  conc.deterministic = false;
  RunResult par = run(l.problem, conc);
  auto body = [](const std::string& t) { return t.substr(t.find('\n') + 1); };
  CHECK(body(det.trace) == body(par.trace));
}

TEST_CASE("request conservation: every removed request was fulfilled") {
  Loaded l = load("guitar", "settings.cfg");
  RunResult r = run(l.problem, l.cfg);
  int posted = 0, removed = 0, fulfilled = 0;
  for (auto& cols : trace_lines(r.trace)) {
    if (cols.size() >= 3 && cols[0] == "TUPLE" && cols[2] == "Request") {
      if (cols[1] == "out") ++posted;
      if (cols[1] == "in") ++removed;
    }
    if (cols.size() >= 3 && cols[0] == "TUPLE" && cols[1] == "out" &&
        cols[2] == "Fulfilled")
      ++fulfilled;
  }
  CHECK(posted > 0);
  CHECK(removed == fulfilled);   // removal happens only at the rendezvous
  CHECK(posted >= removed);      // the rest persist to the horizon
}
