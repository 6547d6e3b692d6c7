#include "baac/engine.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "baac/parse.hpp"
#include "baac/tuple_space.hpp"

namespace baac {

Problem load_problem(const RunConfig& cfg, const std::string& base_dir,
                     Diagnostics& diags) {
  std::vector<AgentTheory> theories;
  for (const std::string& rel : cfg.theory_files) {
    std::string path = rel;
    if (!base_dir.empty() && !rel.empty() && rel[0] != '/')
      path = base_dir + "/" + rel;
    std::ifstream in(path);
    if (!in.good()) {
      diags.error("cannot open theory file '" + path + "'");
      continue;
    }
    std::ostringstream os;
    os << in.rdbuf();
    theories.push_back(parse_theory(os.str()));
  }
  if (theories.empty()) diags.error("no theory files given");
  return Problem::build(std::move(theories), diags);
}

namespace {

std::string join_names(const std::vector<std::string>& names) {
  if (names.empty()) return "-";
  std::ostringstream os;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) os << ",";
    os << names[i];
  }
  return os.str();
}

std::string join_fields(const std::vector<std::string>& fields) {
  std::ostringstream os;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) os << " ";
    os << fields[i];
  }
  return os.str();
}

struct Engine {
  const Problem& problem;
  const RunConfig& cfg;
  TupleSpace space;
  TraceLog trace;
  std::mt19937_64 rng;
  std::vector<AgentRuntime> agents;
  StateSeq seq;
  Trajectory committed;
  RunResult result;
  int step = 0;  // 1-based transition index while running

  // per-step bookkeeping
  std::map<std::string, std::vector<std::string>> proposals;
  std::map<std::string, bool> outcome_success;
  std::map<std::string, std::string> first_failed_action;

  Engine(const Problem& p, const RunConfig& c) : problem(p), cfg(c), rng(c.seed) {}

  AgentRuntime* runtime(const std::string& name) {
    for (auto& rt : agents)
      if (rt.name == name) return &rt;
    return nullptr;
  }

  void tuple_event(int phase, const std::string& key, const char* op, const Tuple& t) {
    trace.add(step, phase, key, {"TUPLE", op, t.tag, join_fields(t.fields)});
  }

  Tuple out_logged(int phase, const std::string& key, std::string tag,
                   std::vector<std::string> fields) {
    Tuple t = space.out(std::move(tag), std::move(fields));
    tuple_event(phase, key, "out", t);
    return t;
  }

  template <typename F>
  void for_each_agent(F&& f) {
    if (cfg.deterministic) {
      for (auto& rt : agents) f(rt);
      return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(agents.size());
    for (auto& rt : agents)
      futures.push_back(std::async(std::launch::async, [&f, &rt] { f(rt); }));
    for (auto& fu : futures) fu.get();
  }

  // ---- phase 1: proposals and request posting ---------------------------

  void phase_propose() {
    trace.add(step, kPhaseHeader, "", {"STEP", std::to_string(step)});
    out_logged(kPhaseHeader, "tick", "Tick", {std::to_string(step)});

    proposals.clear();
    for_each_agent([&](AgentRuntime& rt) {
      std::vector<std::string> names = agent_propose(rt, problem, seq);
      std::sort(names.begin(), names.end());
      // the map insert is the only shared write; guard via presized map
      static std::mutex mu;
      std::lock_guard<std::mutex> lock(mu);
      proposals[rt.name] = std::move(names);
    });

    for (auto& rt : agents) {
      if (rt.status != AgentRuntime::Status::Active) continue;
      const auto& names = proposals[rt.name];
      out_logged(kPhasePropose, rt.name, "Propose",
                 {rt.name, std::to_string(step), join_names(names)});
      trace.add(step, kPhasePropose, rt.name, {"PROPOSE", rt.name, join_names(names)});

      int j = static_cast<int>(seq.size()) - 1;
      for (size_t k = 0; k < rt.theory->requests.size(); ++k) {
        const RequestAxiom& r = rt.theory->requests[k];
        if (!holds_or_false(seq, j, *r.trigger)) continue;
        TuplePattern pending{"Request", {rt.name, std::to_string(k)}};
        if (space.rd(pending)) continue;  // still outstanding
        // A fulfilled request delivers its effect one step after the
        // rendezvous; while that step is still in flight the trigger is
        // stale, so reposting waits it out.
        bool just_fulfilled = false;
        for (const Tuple& f :
             space.rd_all(TuplePattern{"Fulfilled", {rt.name, std::to_string(k)}}))
          if (std::stoi(f.fields[3]) >= step - 1) just_fulfilled = true;
        if (just_fulfilled) continue;
        out_logged(kPhasePropose, rt.name, "Request",
                   {rt.name, std::to_string(k), r.target ? *r.target : "*",
                    std::to_string(step)});
      }
    }
  }

  // ---- phase 2: supervision ----------------------------------------------

  bool phase_supervise() {
    std::vector<CandidateAction> candidates;
    for (auto& rt : agents) {
      if (rt.status != AgentRuntime::Status::Active) continue;
      TuplePattern mine{"Propose", {rt.name, std::to_string(step)}};
      auto t = space.in(mine);
      if (t) tuple_event(kPhaseSupervise, "0-collect:" + rt.name, "in", *t);
      for (const std::string& name : proposals[rt.name]) {
        assert(executable_in(problem, *rt.theory, seq, name) &&
               "agents only propose executable actions");
        candidates.push_back(make_candidate(problem, seq, rt.name, name));
      }
    }

    NegotiateFn negotiate = [&](const std::vector<const CandidateAction*>& conflict,
                                const SatFn& sat) {
      return run_negotiation(conflict, sat);
    };

    StepResolution res = resolve_step(problem, seq, std::move(candidates), cfg.strategy,
                                      cfg.mode, rng, negotiate);
    if (res.global_unsat) {
      result.exit_code = 2;
      result.error = "GlobalUnsatisfiable: no consistent transition exists at step " +
                     std::to_string(step);
      trace.add(step, kPhaseSupervise, "z-note", {"NOTE", result.error});
      return false;
    }

    if (res.had_conflict) {
      std::vector<std::string> names;
      for (const auto& c : res.conflict_set) names.push_back(c.agent + ":" + c.action);
      std::sort(names.begin(), names.end());
      trace.add(step, kPhaseSupervise, "1-conflict", {"CONFLICT", join_names(names)});
    }
    for (const auto& inh : res.inhibited) {
      trace.add(step, kPhaseSupervise, "4-inhibit:" + inh.action.agent,
                {"INHIBIT", inh.action.agent, inh.action.action, inh.reason});
      if (!first_failed_action.count(inh.action.agent))
        first_failed_action[inh.action.agent] = inh.action.action;
    }
    for (const auto& en : res.enabled) {
      trace.add(step, kPhaseSupervise, "5-enable:" + en.agent,
                {"ENABLE", en.agent, en.action});
    }

    State before = seq.back();
    seq.push_back(res.next);
    std::vector<ActionInstance> executed;
    for (const auto& en : res.enabled) executed.push_back({en.agent, en.action});
    std::sort(executed.begin(), executed.end());
    committed.states.push_back(res.next);
    committed.steps.push_back(executed);

    trace.add(step, kPhaseSupervise, "6-diff",
              {"STATE-DIFF", format_diff(problem, before, res.next)});

    for (auto& rt : agents) {
      if (rt.status != AgentRuntime::Status::Active) continue;
      bool failed = first_failed_action.count(rt.name) > 0;
      outcome_success[rt.name] = !failed;
      std::string verdict = failed ? "failure" : "success";
      std::string diff = agent_diff(rt, before, res.next);
      out_logged(kPhaseSupervise, "7-outcome:" + rt.name, "Outcome",
                 {rt.name, std::to_string(step), verdict, diff});
      trace.add(step, kPhaseSupervise, "7-outcome:" + rt.name,
                {"OUTCOME", rt.name, verdict});
    }
    return true;
  }

  std::string agent_diff(const AgentRuntime& rt, const State& before, const State& after) {
    std::vector<std::pair<std::string, Value>> changed;
    for (const auto& f : rt.theory->fluents) {
      int id = problem.table.index_of(f.name);
      if (before[id] != after[id]) changed.emplace_back(f.name, after[id]);
    }
    std::sort(changed.begin(), changed.end());
    if (changed.empty()) return "-";
    std::ostringstream os;
    for (size_t i = 0; i < changed.size(); ++i) {
      if (i) os << ",";
      os << changed[i].first << "=" << changed[i].second;
    }
    return os.str();
  }

  std::vector<const CandidateAction*> run_negotiation(
      const std::vector<const CandidateAction*>& conflict, const SatFn& sat) {
    std::vector<std::string> names;
    for (const CandidateAction* c : conflict) names.push_back(c->agent + ":" + c->action);
    std::sort(names.begin(), names.end());
    out_logged(kPhaseSupervise, "2-negotiate", "ConflictNotice",
               {std::to_string(step), join_names(names)});

    std::vector<NegotiationParticipant> participants;
    for (const CandidateAction* c : conflict) {
      NegotiationParticipant p;
      p.action = c;
      const AgentTheory* t = problem.theory(c->agent);
      if (const ActionDecl* decl = t ? t->find_action(c->action) : nullptr)
        p.options = decl->on_conflict;
      participants.push_back(std::move(p));
    }
    NegotiationOutcome out =
        negotiate_round_robin(seq, std::move(participants), sat, cfg.strategy, rng);

    for (const auto& turn : out.turns) {
      const char* res = nullptr;
      switch (turn.result) {
        case NegotiationTurnRecord::Result::Applied: res = "applied"; break;
        case NegotiationTurnRecord::Result::Skipped: res = "skipped"; break;
        case NegotiationTurnRecord::Result::Deferred: res = "deferred"; break;
        case NegotiationTurnRecord::Result::Exhausted: res = "exhausted"; break;
      }
      out_logged(kPhaseSupervise, "2-negotiate", "NegotiationTurn",
                 {std::to_string(step), turn.agent, turn.action,
                  turn.option_index < 0 ? "-" : std::to_string(turn.option_index), res});
      trace.add(step, kPhaseSupervise, "3-negotiate",
                {"NEGOTIATE", turn.agent, turn.action,
                 turn.option_index < 0 ? "-" : std::to_string(turn.option_index), res});
    }
    for (const auto& fate : out.fates) {
      AgentRuntime* rt = runtime(fate.agent);
      if (!rt) continue;
      switch (fate.kind) {
        case NegotiationFate::Kind::Forego:
          rt->negotiated = AgentRuntime::NegotiatedFate::Forego;
          break;
        case NegotiationFate::Kind::Retry:
          if (rt->negotiated == AgentRuntime::NegotiatedFate::None) {
            rt->negotiated = AgentRuntime::NegotiatedFate::Retry;
            rt->negotiated_delay = fate.retry_delay;
            rt->negotiated_action = fate.action;
          }
          break;
        case NegotiationFate::Kind::Exhausted:
        case NegotiationFate::Kind::Arbitrated:
          break;  // plain failure, on_failure policies apply
      }
    }
    std::vector<std::string> kept;
    for (const CandidateAction* c : out.survivors) kept.push_back(c->agent + ":" + c->action);
    std::sort(kept.begin(), kept.end());
    out_logged(kPhaseSupervise, "2-negotiate", "Resolution",
               {std::to_string(step), join_names(kept)});
    return out.survivors;
  }

  // ---- phase 3: request/offer exchange -----------------------------------

  struct Tentative {
    RequestInstance request;
    SynthAction synth;
    TimedGoal obligation;
    Plan plan;
    long offer_id = 0;
  };

  void phase_exchange() {
    // snapshot of the pending requests, ordered by requester priority
    std::vector<Tuple> pending = space.rd_all(TuplePattern{"Request", {}});
    std::vector<RequestInstance> instances;
    for (const Tuple& t : pending) {
      RequestInstance inst;
      inst.requester = t.fields[0];
      inst.axiom_index = std::stoi(t.fields[1]);
      inst.posted_step = std::stoi(t.fields[3]);
      const AgentTheory* rq = problem.theory(inst.requester);
      if (!rq) continue;
      inst.requester_priority = rq->priority;
      inst.axiom = &rq->requests[inst.axiom_index];
      instances.push_back(inst);
    }
    std::stable_sort(instances.begin(), instances.end(),
                     [](const RequestInstance& a, const RequestInstance& b) {
                       return std::tie(a.requester_priority, a.requester, a.axiom_index,
                                       a.posted_step) <
                              std::tie(b.requester_priority, b.requester, b.axiom_index,
                                       b.posted_step);
                     });

    // (3.a) responders evaluate and collect tentative acceptances
    std::map<std::string, std::vector<Tentative>> tentatives;
    std::mutex mu;
    for_each_agent([&](AgentRuntime& rt) {
      if (rt.status != AgentRuntime::Status::Active) return;
      if (!outcome_success.count(rt.name) || !outcome_success[rt.name]) return;
      std::vector<Tentative> mine;
      std::vector<TimedGoal> obligations = rt.obligations;
      std::vector<SynthAction> synths = rt.synths;
      for (const RequestInstance& inst : instances) {
        if (inst.requester == rt.name) continue;
        if (inst.axiom->target && *inst.axiom->target != rt.name) continue;
        AgentRuntime* requester_rt = runtime(inst.requester);
        if (!requester_rt || requester_rt->status != AgentRuntime::Status::Active)
          continue;
        EvaluateRequestResult r =
            evaluate_request(problem, *rt.theory, seq, inst, rt.horizon, rt.goals,
                             obligations, synths, rt.options);
        if (!r.accept) continue;
        obligations.push_back(r.obligation);
        synths.push_back(r.synth);
        mine.push_back({inst, r.synth, r.obligation, std::move(r.plan.plan), 0});
      }
      std::lock_guard<std::mutex> lock(mu);
      tentatives[rt.name] = std::move(mine);
    });

    for (auto& rt : agents) {
      for (Tentative& t : tentatives[rt.name]) {
        Tuple offer = out_logged(
            kPhaseExchange, "a:" + rt.name, "Offer",
            {rt.name, t.request.requester, std::to_string(t.request.axiom_index),
             std::to_string(step)});
        t.offer_id = offer.id;
      }
    }

    // (3.b) requesters pick one responder per request and rendezvous
    for (auto& rt : agents) {
      if (rt.status != AgentRuntime::Status::Active) continue;
      if (!outcome_success.count(rt.name) || !outcome_success[rt.name]) continue;
      std::vector<Tuple> own = space.rd_all(TuplePattern{"Request", {rt.name}});
      for (const Tuple& req : own) {
        std::vector<Tuple> offers =
            space.rd_all(TuplePattern{"Offer", {std::nullopt, rt.name, req.fields[1]}});
        if (offers.empty()) continue;
        std::stable_sort(offers.begin(), offers.end(), [&](const Tuple& a, const Tuple& b) {
          const AgentTheory* ta = problem.theory(a.fields[0]);
          const AgentTheory* tb = problem.theory(b.fields[0]);
          int pa = ta ? ta->priority : 0;
          int pb = tb ? tb->priority : 0;
          return std::tie(pa, a.fields[0]) < std::tie(pb, b.fields[0]);
        });
        const std::string& responder = offers[0].fields[0];
        out_logged(kPhaseExchange, "b:" + rt.name, "Accept",
                   {rt.name, responder, req.fields[1], std::to_string(step)});
        out_logged(kPhaseExchange, "b:" + rt.name, "Fulfilled",
                   {rt.name, req.fields[1], responder, std::to_string(step)});
        auto removed = space.in(TuplePattern{"Request", {rt.name, req.fields[1]}});
        if (removed) tuple_event(kPhaseExchange, "b:" + rt.name, "in", *removed);
        for (const Tuple& o : offers) {
          auto gone = space.in(TuplePattern{
              "Offer", {o.fields[0], o.fields[1], o.fields[2], o.fields[3]}});
          if (gone) tuple_event(kPhaseExchange, "b:" + rt.name, "in", *gone);
        }
      }
    }

    // rendezvous completion on the responder side
    for (auto& rt : agents) {
      auto it = tentatives.find(rt.name);
      if (it == tentatives.end() || it->second.empty()) continue;
      bool accepted_any = false;
      bool all_accepted = true;
      const Plan* adopted = nullptr;
      for (Tentative& t : it->second) {
        auto accept = space.in(TuplePattern{
            "Accept",
            {t.request.requester, rt.name, std::to_string(t.request.axiom_index)}});
        if (accept) {
          tuple_event(kPhaseExchange, "c:" + rt.name, "in", *accept);
          rt.obligations.push_back(t.obligation);
          bool have = false;
          for (const auto& s : rt.synths)
            if (s.name == t.synth.name) have = true;
          if (!have) rt.synths.push_back(t.synth);
          accepted_any = true;
          adopted = &t.plan;
        } else {
          all_accepted = false;
        }
      }
      if (!accepted_any) continue;
      if (all_accepted && adopted) {
        rt.current_plan = *adopted;
        rt.has_plan = true;
        rt.cursor = 0;
        rt.plan_fresh = true;
      } else {
        // some tentative lost its rendezvous: replan against the committed
        // obligations only
        PlanResult fresh = plan(problem, *rt.theory, seq, rt.horizon, rt.goals,
                                rt.obligations, rt.synths, rt.options);
        if (fresh.status == PlanStatus::Found) {
          rt.current_plan = std::move(fresh.plan);
          rt.has_plan = true;
          rt.cursor = 0;
          rt.plan_fresh = true;
        } else {
          rt.replan_reason = AgentRuntime::ReplanReason::Policy;
        }
      }
    }
  }

  // ---- phase 4: local updates --------------------------------------------

  void phase_update() {
    for (auto& rt : agents) {
      if (rt.status != AgentRuntime::Status::Active) continue;
      bool success = outcome_success.count(rt.name) ? outcome_success[rt.name] : true;
      std::string failed;
      if (auto it = first_failed_action.find(rt.name); it != first_failed_action.end())
        failed = it->second;
      agent_handle_outcome(rt, problem, seq, success, failed);
      if (rt.status == AgentRuntime::Status::Failed)
        trace.add(step, kPhaseUpdate, rt.name, {"STATUS", rt.name, "failed"});
    }
  }

  RunResult execute() {
    InitialState init = collect_initial(problem);
    if (!init.state) {
      result.exit_code = 2;
      result.error = init.error;
      trace.add(0, -2, "", {"NOTE", init.error});
      result.trace = trace.render();
      return result;
    }
    trace.add(0, -3, "",
              {"RUN", "horizon=" + std::to_string(cfg.horizon),
               "seed=" + std::to_string(cfg.seed),
               "strategy=" + to_string(cfg.strategy), "mode=" + to_string(cfg.mode),
               "deterministic=" + std::string(cfg.deterministic ? "true" : "false")});
    trace.add(0, -2, "", {"INIT", format_state(problem, *init.state)});

    seq = {*init.state};
    committed.states = {*init.state};
    for (const auto& t : problem.theories) {
      agents.emplace_back();
      init_runtime(agents.back(), t, cfg);
    }
    std::sort(agents.begin(), agents.end(),
              [](const AgentRuntime& a, const AgentRuntime& b) { return a.name < b.name; });

    for (step = 1; step <= cfg.horizon; ++step) {
      outcome_success.clear();
      first_failed_action.clear();
      for (auto& rt : agents) rt.replans_this_step = 0;
      phase_propose();
      if (!phase_supervise()) {
        result.trace = trace.render();
        return result;
      }
      phase_exchange();
      phase_update();
    }

    bool all_ok = true;
    for (auto& rt : agents) {
      bool ok = false;
      if (rt.status != AgentRuntime::Status::Failed) {
        ok = true;
        for (const auto& g : rt.theory->goals)
          if (!holds_or_false(seq, cfg.horizon, *g)) ok = false;
        if (!ok) all_ok = false;
      }
      result.goal_verdicts[rt.name] = ok;
      result.final_status[rt.name] =
          rt.status == AgentRuntime::Status::Failed ? "failed" : "active";
      trace.add(cfg.horizon + 1, kPhaseVerdict, rt.name,
                {"GOAL", rt.name, ok ? "success" : "failure"});
    }
    result.exit_code = all_ok ? 0 : 1;
    result.trajectory = committed;
    result.safety = check_trajectory(problem, committed, cfg.horizon);
    if (!result.safety.valid()) {
      result.error = "internal: committed trajectory failed validation";
      result.exit_code = 2;
    }
    space.close();
    result.trace = trace.render();
    return result;
  }
};

}  // namespace

RunResult run(const Problem& problem, const RunConfig& cfg) {
  Engine engine(problem, cfg);
  return engine.execute();
}

}  // namespace baac
