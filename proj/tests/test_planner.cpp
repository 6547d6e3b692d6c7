#include "baac/parse.hpp"
#include "baac/planner.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace baac;

namespace {

Problem make_problem(std::initializer_list<const char*> texts) {
  std::vector<AgentTheory> ts;
  for (const char* t : texts) ts.push_back(parse_theory(t));
  Diagnostics d;
  Problem p = Problem::build(std::move(ts), d);
  REQUIRE(d.ok());
  return p;
}

State state_of(const Problem& p,
               std::initializer_list<std::pair<const char*, Value>> vals) {
  State s(p.table.size(), 0);
  for (auto& [name, v] : vals) s[p.table.index_of(name)] = v;
  return s;
}

const char* kIncTheory =
    "agent t.\nfluent f valued 0..2.\naction inc.\n"
    "executable inc if f < 2.\ninc causes f = f@-1 + 1.\n"
    "goal f = 2.\ninitially f = 0.\n";

PlanResult plan_simple(const Problem& p, const StateSeq& seq, int N,
                       PlannerOptions opts = {}) {
  const AgentTheory& t = p.theories[0];
  return plan(p, t, seq, N, t.goals, {}, {}, opts);
}

}  // namespace

TEST_CASE("plan: inc-to-2 over two steps") {
  Problem p = make_problem({kIncTheory});
  StateSeq seq{state_of(p, {{"f", 0}})};
  PlanResult r = plan_simple(p, seq, 2);
  REQUIRE(r.status == PlanStatus::Found);
  REQUIRE(r.plan.steps.size() == 2);
  CHECK(r.plan.steps[0] == std::vector<PlanAction>{{"inc", false, -1}});
  CHECK(r.plan.steps[1] == std::vector<PlanAction>{{"inc", false, -1}});
}

TEST_CASE("plan: satisfied goal at zero horizon is the empty plan") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..2.\ngoal f = 1.\ninitially f = 1.\n"});
  StateSeq seq{state_of(p, {{"f", 1}})};
  PlanResult r = plan_simple(p, seq, 0);
  REQUIRE(r.status == PlanStatus::Found);
  CHECK(r.plan.steps.empty());
}

TEST_CASE("plan: goal outside the domain bound is NoPlan") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..2.\naction inc.\nexecutable inc if f < 2.\n"
      "inc causes f = f@-1 + 1.\ngoal f = 5.\n"});
  StateSeq seq{state_of(p, {{"f", 0}})};
  CHECK(plan_simple(p, seq, 4).status == PlanStatus::NoPlan);
}

TEST_CASE("plan: budget exhaustion is reported distinctly") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..9.\nfluent g valued 0..9.\n"
      "action a.\nexecutable a if true.\na causes f = f@-1 + 1 if f < 9.\n"
      "action b.\nexecutable b if true.\nb causes g = g@-1 + 1 if g < 9.\n"
      "goal f = 9 and g = 9.\n"});
  StateSeq seq{state_of(p, {})};
  PlannerOptions opts;
  opts.node_budget = 20;
  PlanResult r = plan_simple(p, seq, 9, opts);
  CHECK(r.status == PlanStatus::BudgetExceeded);
}

TEST_CASE("plan: determinism, identical inputs give identical plans") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..5.\nfluent g valued 0..5.\n"
      "action a.\nexecutable a if true.\na causes f = f@-1 + 1 if f < 5.\n"
      "action b.\nexecutable b if true.\nb causes g = g@-1 + 2 if g < 4.\n"
      "goal f = 2 and g = 2.\n"});
  StateSeq seq{state_of(p, {})};
  PlanResult r1 = plan_simple(p, seq, 4);
  PlanResult r2 = plan_simple(p, seq, 4);
  REQUIRE(r1.status == PlanStatus::Found);
  CHECK(r1.plan.steps == r2.plan.steps);
}

TEST_CASE("plan: timed goals are honored at their index") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..5.\naction inc.\nexecutable inc if f < 5.\n"
      "inc causes f = f@-1 + 1.\ngoal f = 1.\n"});
  StateSeq seq{state_of(p, {{"f", 0}})};
  // require f = 2 at time 2, goal f = 1 at N = 4: up two, down... impossible
  // (no decrement action), so expect NoPlan; with goal f = 2 it plans.
  std::vector<TimedGoal> extras{{parse_constraint_text("f = 2", p.theories[0]), 2}};
  for (auto& e : extras) {
    // resolve ids against this problem
    e.cond = parse_constraint_text("f = 2", p.theories[0]);
  }
  Problem& pr = p;
  // parse_constraint_text resolves names only; resolve ids via a fresh build
  struct {
    const FluentTable* table;
    void expr(Expr& e) {
      if (e.kind == Expr::Kind::Fluent) e.fluent_id = table->index_of(e.fluent);
      if (e.lhs) expr(*e.lhs);
      if (e.rhs) expr(*e.rhs);
      if (e.reified) constraint(*e.reified);
    }
    void constraint(Constraint& c) {
      if (c.lhs) expr(*c.lhs);
      if (c.rhs) expr(*c.rhs);
      for (auto& k : c.kids) constraint(*k);
    }
  } resolver{&pr.table};
  resolver.constraint(*extras[0].cond);

  const AgentTheory& t = p.theories[0];
  PlanResult no = plan(p, t, seq, 4, t.goals, extras, {}, {});
  CHECK(no.status == PlanStatus::NoPlan);

  std::vector<ConstraintPtr> goal2{extras[0].cond};
  PlanResult yes = plan(p, t, seq, 4, goal2, extras, {}, {});
  REQUIRE(yes.status == PlanStatus::Found);
  // two increments land f=2 exactly at time 2, then inertia
  CHECK(yes.plan.steps[0].size() == 1);
  CHECK(yes.plan.steps[1].size() == 1);
  CHECK(yes.plan.steps[2].empty());
}

TEST_CASE("plan: own always constraints prune local simulation") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..9.\naction jump.\nexecutable jump if true.\n"
      "jump causes f = f@-1 + 3.\nalways f <= 4.\ngoal f = 3.\n"});
  StateSeq seq{state_of(p, {})};
  PlanResult r = plan_simple(p, seq, 3);
  REQUIRE(r.status == PlanStatus::Found);
  // one jump then rest: f=3 <= 4 throughout; a second jump would break the cap
  int active = 0;
  for (auto& s : r.plan.steps) active += static_cast<int>(s.size());
  CHECK(active == 1);
}

TEST_CASE("plan: soundness, every found plan replays to a successful trajectory") {
  gen::Rng rng(606);
  int found = 0;
  for (int round = 0; round < 120; ++round) {
    // random tiny theory: 2 fluents, 2 actions with basic effects
    std::string text = "agent r.\nfluent f valued 0..3.\nfluent g valued 0..3.\n";
    const char* effects[] = {"f = f@-1 + 1", "g = g@-1 + 1", "f = g@-1", "g = f@-1 + 1",
                             "f = f@-1 - 1", "g = 2"};
    const char* conds[] = {"f < 3", "g < 3", "true", "f <= g"};
    for (int a = 0; a < 2; ++a) {
      std::string name = a == 0 ? "act_a" : "act_b";
      text += "action " + name + ".\nexecutable " + name + " if " +
              conds[rng() % 4] + ".\n" + name + " causes " + effects[rng() % 6] +
              " if " + conds[rng() % 4] + ".\n";
    }
    text += "goal f = " + std::to_string(static_cast<int>(rng() % 4)) + " and g = " +
            std::to_string(static_cast<int>(rng() % 4)) + ".\n";
    Problem p = make_problem({text.c_str()});
    StateSeq seq{state_of(p, {})};
    int N = 1 + static_cast<int>(rng() % 4);
    PlanResult r = plan_simple(p, seq, N);
    if (r.status != PlanStatus::Found) continue;
    ++found;
    // replay through the transition semantics
    StateSeq replay = seq;
    for (auto& step : r.plan.steps) {
      std::vector<ActionInstance> acts;
      for (auto& a : step) {
        REQUIRE(!a.virtual_request);
        REQUIRE(executable_in(p, p.theories[0], replay, a.name));
        acts.push_back({"r", a.name});
      }
      auto next = apply_transition(p, replay, acts);
      REQUIRE(next.has_value());
      replay.push_back(*next);
    }
    Trajectory traj;
    traj.states = replay;
    for (auto& step : r.plan.steps) {
      std::vector<ActionInstance> acts;
      for (auto& a : step) acts.push_back({"r", a.name});
      traj.steps.push_back(acts);
    }
    CheckReport rep = check_trajectory(p, traj, N);
    REQUIRE(rep.valid());
    REQUIRE(rep.agent_success.at("r"));
  }
  CHECK(found > 20);
}

TEST_CASE("plan/oracle equivalence on tiny domains") {
  gen::Rng rng(707);
  int agree = 0;
  for (int round = 0; round < 150; ++round) {
    std::string text = "agent r.\nfluent f valued 0..3.\nfluent g valued 0..2.\n";
    const char* effects[] = {"f = f@-1 + 1", "g = g@-1 + 1", "f = g@-1",
                             "f = f@-1 - 1 and g = g@-1 + 1", "g = 0"};
    const char* conds[] = {"f < 3", "g < 2", "true", "f = g", "g > 0"};
    int n_actions = 1 + static_cast<int>(rng() % 4);
    for (int a = 0; a < n_actions; ++a) {
      std::string name = "act_" + std::to_string(a);
      text += "action " + name + ".\nexecutable " + name + " if " +
              conds[rng() % 5] + ".\n" + name + " causes " + effects[rng() % 5] +
              " if " + conds[rng() % 5] + ".\n";
    }
    text += "goal f = " + std::to_string(static_cast<int>(rng() % 4)) + " and g = " +
            std::to_string(static_cast<int>(rng() % 3)) + ".\n";
    Problem p = make_problem({text.c_str()});
    StateSeq seq{state_of(p, {})};
    int N = 1 + static_cast<int>(rng() % 4);

    OracleResult oracle = brute_force_plans(p, p.theories[0], seq[0], N);
    REQUIRE(!oracle.too_large);
    PlanResult r = plan_simple(p, seq, N);
    REQUIRE(r.status != PlanStatus::BudgetExceeded);
    bool oracle_has = !oracle.plans.empty();
    bool planner_has = r.status == PlanStatus::Found;
    REQUIRE_MESSAGE(oracle_has == planner_has, "round " << round << ":\n" << text);
    ++agree;
  }
  CHECK(agree == 150);
}

TEST_CASE("synthesize_help_action: offer becomes part of the effect") {
  AgentTheory maker = parse_theory(
      "agent maker.\nknown_agents seller.\n"
      "fluent strings valued 0..30.\nfluent seller_account valued 0..1000.\n"
      "request strings > 5 to_agent seller if strings < 6 "
      "offering seller_account = seller_account@-1 + 8.\n");
  HelpAxiom help;
  help.all = true;
  SynthAction y = synthesize_help_action("maker", 0, maker.requests[0], help);
  CHECK(y.name == "serve@maker@r0");
  REQUIRE(y.exec_alternatives.size() == 1);
  CHECK(to_string(*y.exec_alternatives[0]) == "true and strings@-1 < 6");
  CHECK(to_string(*y.effect) ==
        "strings > 5 and seller_account = seller_account@-1 + 8");
}

TEST_CASE("synthesize_help_action: no offer leaves the requested constraint alone") {
  AgentTheory maker = parse_theory(
      "agent maker.\nknown_agents joiner.\nfluent neck valued 0..10.\n"
      "request neck > 0 to_agent joiner if neck = 0.\n");
  HelpAxiom help;
  help.donors.push_back("maker");
  SynthAction y = synthesize_help_action("maker", 0, maker.requests[0], help);
  CHECK(to_string(*y.effect) == "neck > 0");
  // the trigger is shifted one step into the past
  CHECK(to_string(*y.exec_alternatives[0]) == "true and neck@-1 = 0");
}

namespace {

// maker needs a neck next step; joiner owns the neck fluent and helps.
Problem maker_joiner() {
  return make_problem({
      "agent maker.\nknown_agents joiner.\n"
      "fluent neck valued 0..10.\nfluent guitars valued 0..20.\n"
      "action make.\nexecutable make if neck > 0.\n"
      "make causes guitars = guitars@-1 + 1 and neck = neck@-1 - 1.\n"
      "request neck > 0 to_agent joiner if neck = 0.\n"
      "goal guitars = 1.\ninitially neck = 0 and guitars = 0.\n",
      "agent joiner.\nknown_agents maker.\nfluent neck valued 0..10.\n"
      "help maker.\ninitially neck = 0.\n"});
}

}  // namespace

TEST_CASE("evaluate_request: joiner accepts and plans the serve action") {
  Problem p = maker_joiner();
  const AgentTheory& joiner = p.theories[1];
  // the request fired at time 0 (neck = 0); the joiner evaluates at time 1
  StateSeq seq{state_of(p, {}), state_of(p, {})};
  RequestInstance req{"maker", 0, 0, 0, &p.theories[0].requests[0]};
  EvaluateRequestResult r =
      evaluate_request(p, joiner, seq, req, 4, {}, {}, {}, {});
  CHECK(r.planned);
  REQUIRE(r.accept);
  CHECK(r.obligation.at == 2);
  REQUIRE(!r.plan.plan.steps.empty());
  REQUIRE(r.plan.plan.steps[0].size() == 1);
  CHECK(r.plan.plan.steps[0][0].name == "serve@maker@r0");
}

TEST_CASE("evaluate_request: false help condition rejects without planning") {
  Problem p = make_problem({
      "agent maker.\nknown_agents joiner.\nfluent neck valued 0..10.\n"
      "request neck > 0 to_agent joiner if neck = 0.\ninitially neck = 0.\n",
      "agent joiner.\nknown_agents maker.\nfluent neck valued 0..10.\n"
      "help maker if neck > 3.\ninitially neck = 0.\n"});
  StateSeq seq{state_of(p, {}), state_of(p, {})};
  RequestInstance req{"maker", 0, 0, 0, &p.theories[0].requests[0]};
  EvaluateRequestResult r =
      evaluate_request(p, p.theories[1], seq, req, 4, {}, {}, {}, {});
  CHECK(!r.accept);
  CHECK(!r.planned);
}

TEST_CASE("evaluate_request: responder must know all fluents of the request") {
  Problem p = make_problem({
      "agent maker.\nknown_agents helper.\nfluent neck valued 0..10.\n"
      "fluent secret valued 0..5.\n"
      "request neck > 0 and secret = 1 to_agent helper if neck = 0.\n",
      "agent helper.\nknown_agents maker.\nfluent neck valued 0..10.\nhelp all.\n"});
  StateSeq seq{state_of(p, {}), state_of(p, {})};
  RequestInstance req{"maker", 0, 0, 0, &p.theories[0].requests[0]};
  EvaluateRequestResult r =
      evaluate_request(p, p.theories[1], seq, req, 4, {}, {}, {}, {});
  CHECK(!r.accept);
  CHECK(!r.planned);
}

TEST_CASE("evaluate_request: two requests where only the first fits") {
  // Both requests pin the same dial to different values at the same due
  // time; evaluated in order, the first is accepted and the second
  // ignored because the enlarged theory admits no plan.
  Problem p = make_problem({
      "agent buyer.\nknown_agents shop.\n"
      "fluent dial valued 0..5.\n"
      "request dial = 1 to_agent shop if dial = 0.\n"
      "request dial = 3 to_agent shop if dial = 0.\n"
      "initially dial = 0.\n",
      "agent shop.\nknown_agents buyer.\n"
      "fluent dial valued 0..5.\nhelp buyer.\ninitially dial = 0.\n"});
  const AgentTheory& shop = p.theories[1];
  StateSeq seq{state_of(p, {}), state_of(p, {})};
  PlannerOptions opts;
  opts.max_actions_per_step = 2;

  RequestInstance first{"buyer", 0, 0, 0, &p.theories[0].requests[0]};
  EvaluateRequestResult r1 = evaluate_request(p, shop, seq, first, 4, {}, {}, {}, opts);
  REQUIRE(r1.accept);

  // carry the committed obligation and serve action into the second evaluation
  std::vector<TimedGoal> obligations{r1.obligation};
  std::vector<SynthAction> synths{r1.synth};
  RequestInstance second{"buyer", 0, 1, 0, &p.theories[0].requests[1]};
  EvaluateRequestResult r2 =
      evaluate_request(p, shop, seq, second, 4, {}, obligations, synths, opts);
  CHECK(r2.planned);
  CHECK(!r2.accept);  // dial = 1 and dial = 3 cannot both hold at time 2

  // independent oracle: the two obligations are jointly unsatisfiable
  ConstraintPtr both =
      conj({p.theories[0].requests[0].requested, p.theories[0].requests[1].requested});
  CHECK(!solve_next(p.table, seq, *both).has_value());
}

TEST_CASE("plan: a requester anticipates its own request being served") {
  Problem p = maker_joiner();
  const AgentTheory& maker = p.theories[0];
  StateSeq seq{state_of(p, {})};
  PlanResult r = plan(p, maker, seq, 4, maker.goals, {}, {}, {});
  REQUIRE(r.status == PlanStatus::Found);
  // The trigger (neck = 0) already holds at the planning root, so the
  // clamp rule lets the anticipated serve fire in the very first step:
  // X_1 = {request@0}, X_2 = {make}.
  REQUIRE(r.plan.steps.size() == 4);
  REQUIRE(r.plan.steps[0].size() == 1);
  CHECK(r.plan.steps[0][0].virtual_request);
  CHECK(r.plan.steps[0][0].request_index == 0);
  CHECK(r.plan.proposed_names(0).empty());  // virtual steps propose nothing
  REQUIRE(r.plan.steps[1].size() == 1);
  CHECK(r.plan.steps[1][0].name == "make");
  CHECK(r.plan.steps[2].empty());

  // One step in, the anticipated serve sits exactly two steps after the
  // trigger held.
  StateSeq longer{state_of(p, {}), state_of(p, {})};
  PlanResult r2 = plan(p, maker, longer, 4, maker.goals, {}, {}, {});
  REQUIRE(r2.status == PlanStatus::Found);
  REQUIRE(r2.plan.steps.size() == 3);
  CHECK(r2.plan.steps[0][0].virtual_request);
  CHECK(r2.plan.steps[1][0].name == "make");
}

TEST_CASE("obligation monotonicity: committed obligations shape every later plan") {
  Problem p = maker_joiner();
  const AgentTheory& joiner = p.theories[1];
  StateSeq seq{state_of(p, {}), state_of(p, {})};
  RequestInstance req{"maker", 0, 0, 0, &p.theories[0].requests[0]};
  EvaluateRequestResult r = evaluate_request(p, joiner, seq, req, 6, {}, {}, {}, {});
  REQUIRE(r.accept);

  std::vector<TimedGoal> obligations{r.obligation};
  std::vector<SynthAction> synths{r.synth};
  // replanning from the same point keeps the serve at its due step
  for (int round = 0; round < 3; ++round) {
    PlanResult again = replan(p, joiner, seq, 6, {}, obligations, synths, {});
    REQUIRE(again.status == PlanStatus::Found);
    bool serves = false;
    for (auto& a : again.plan.steps[0])
      if (a.name == r.synth.name) serves = true;
    CHECK(serves);
  }
  // once the due time passed with the obligation met, it stops binding
  StateSeq done = seq;
  State served = done.back();
  served[p.table.index_of("neck")] = 1;
  done.push_back(served);
  PlanResult after = replan(p, joiner, done, 6, {}, obligations, synths, {});
  CHECK(after.status == PlanStatus::Found);
}

TEST_CASE("simulate_own_step: expected state for nop and joint actions") {
  Problem p = make_problem({
      "agent t.\nfluent f valued 0..5.\nfluent g valued 0..5.\n"
      "action a.\nexecutable a if true.\na causes f = f@-1 + 1.\n"
      "action b.\nexecutable b if true.\nb causes g = g@-1 + 2.\n"});
  StateSeq seq{state_of(p, {{"f", 1}, {"g", 1}})};
  auto same = simulate_own_step(p, p.theories[0], seq, {}, {});
  REQUIRE(same.has_value());
  CHECK(*same == seq.back());

  std::vector<PlanAction> both{{"a", false, -1}, {"b", false, -1}};
  auto next = simulate_own_step(p, p.theories[0], seq, both, {});
  REQUIRE(next.has_value());
  CHECK((*next)[p.table.index_of("f")] == 2);
  CHECK((*next)[p.table.index_of("g")] == 3);
}
