#include "baac/supervisor.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace baac {

InitialState collect_initial(const Problem& problem) {
  InitialState out;
  std::vector<ConstraintPtr> inits;
  for (const auto& t : problem.theories)
    for (const auto& i : t.inits) inits.push_back(i);
  ConstraintPtr all = conj(std::move(inits));
  StateSeq empty;
  auto sigma = solve_next(problem.table, empty, *all);
  if (!sigma) {
    out.error = "InconsistentInitialState: the initially axioms have no common solution";
    return out;
  }
  State v0(problem.table.size());
  for (int f = 0; f < problem.table.size(); ++f) v0[f] = problem.table.info(f).min();
  for (auto& [id, v] : sigma->assignments) v0[id] = v;

  StateSeq seq{v0};
  for (const auto& t : problem.theories) {
    for (const auto& g : t.globals) {
      bool applies = g.always || g.at_time == 0;
      if (applies && !holds_or_false(seq, 0, *g.cond)) {
        out.error = "GlobalUnsatisfiable: initial state violates a global constraint of "
                    "agent " + t.name;
        return out;
      }
    }
  }
  out.state = v0;
  return out;
}

CandidateAction make_candidate(const Problem& problem, const StateSeq& seq,
                               const std::string& agent, const std::string& action) {
  CandidateAction c;
  c.agent = agent;
  c.action = action;
  const AgentTheory* t = problem.theory(agent);
  assert(t);
  c.priority = t->priority;
  c.deff = desired_effects(problem, *t, seq, action);
  return c;
}

namespace {

std::vector<const GlobalAxiom*> active_globals(const Problem& problem, int next_index) {
  std::vector<const GlobalAxiom*> out;
  for (const auto& t : problem.theories)
    for (const auto& g : t.globals)
      if (g.always || g.at_time == next_index) out.push_back(&g);
  return out;
}

}  // namespace

std::optional<PartialState> solve_candidates(const Problem& problem, const StateSeq& seq,
                                             const std::vector<const CandidateAction*>& chosen) {
  std::vector<ConstraintPtr> parts;
  for (const CandidateAction* c : chosen) parts.push_back(c->deff);
  ConstraintPtr joint = conj(std::move(parts));
  return solve_next(problem.table, seq, *joint);
}

std::optional<PartialState> solve_candidates_with_globals(
    const Problem& problem, const StateSeq& seq,
    const std::vector<const CandidateAction*>& chosen) {
  std::vector<ConstraintPtr> parts;
  for (const CandidateAction* c : chosen) parts.push_back(c->deff);
  ConstraintPtr effects = conj(parts);
  std::vector<int> touched = timeless_fluents(*effects);

  std::vector<ConstraintPtr> with_globals{effects};
  std::set<int> pinned;
  for (const GlobalAxiom* g :
       active_globals(problem, static_cast<int>(seq.size()))) {
    with_globals.push_back(g->cond);
    for (int id : timeless_fluents(*g->cond)) {
      if (std::binary_search(touched.begin(), touched.end(), id))
        continue;  // the effects decide this fluent
      if (pinned.insert(id).second)
        with_globals.push_back(pin_constraint(problem.table, id, seq.back()[id]));
    }
  }
  ConstraintPtr joint = conj(std::move(with_globals));
  return solve_next(problem.table, seq, *joint);
}

FilterResult priority_filter(const std::vector<const CandidateAction*>& conflict,
                             const SatFn& sat) {
  FilterResult out;
  out.survivors = conflict;
  while (!sat(out.survivors).has_value()) {
    int lowest = 0;  // numerically largest value = lowest priority
    std::set<int> levels;
    for (const CandidateAction* c : out.survivors) {
      levels.insert(c->priority);
      lowest = std::max(lowest, c->priority);
    }
    if (levels.size() <= 1) break;
    std::vector<const CandidateAction*> kept;
    for (const CandidateAction* c : out.survivors) {
      if (c->priority == lowest)
        out.inhibited.push_back(c);
      else
        kept.push_back(c);
    }
    out.survivors = std::move(kept);
  }
  return out;
}

std::vector<const CandidateAction*> arbitrate(
    const std::vector<const CandidateAction*>& conflict, Strategy strategy,
    const SatFn& sat, std::mt19937_64& rng) {
  if (conflict.empty()) return {};
  // tie-break order: (agent, action) name
  std::vector<const CandidateAction*> sorted = conflict;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CandidateAction* a, const CandidateAction* b) {
                     return std::tie(a->agent, a->action) < std::tie(b->agent, b->action);
                   });

  if (strategy == Strategy::Random) {
    // exactly one action; skip candidates that are inconsistent alone
    size_t k = sorted.size();
    size_t start = static_cast<size_t>(rng() % k);
    for (size_t off = 0; off < k; ++off) {
      const CandidateAction* pick = sorted[(start + off) % k];
      if (sat({pick}).has_value()) return {pick};
    }
    return {};
  }

  int k = static_cast<int>(sorted.size());
  for (int size = k; size >= 1; --size) {
    std::vector<int> cursor(size);
    for (int i = 0; i < size; ++i) cursor[i] = i;
    while (true) {
      std::vector<const CandidateAction*> subset;
      for (int i : cursor) subset.push_back(sorted[i]);
      if (sat(subset).has_value()) return subset;
      int j = size - 1;
      while (j >= 0 && cursor[j] == k - size + j) --j;
      if (j < 0) break;
      ++cursor[j];
      for (int i = j + 1; i < size; ++i) cursor[i] = cursor[i - 1] + 1;
    }
  }
  return {};
}

StepResolution resolve_step(const Problem& problem, const StateSeq& seq,
                            std::vector<CandidateAction> proposals, Strategy strategy,
                            ConflictMode mode, std::mt19937_64& rng,
                            const NegotiateFn& negotiate) {
  StepResolution out;
  std::vector<const CandidateAction*> all;
  for (const auto& c : proposals) all.push_back(&c);

  SatFn plain = [&](const std::vector<const CandidateAction*>& chosen) {
    return solve_candidates(problem, seq, chosen);
  };
  SatFn with_globals = [&](const std::vector<const CandidateAction*>& chosen) {
    return solve_candidates_with_globals(problem, seq, chosen);
  };

  auto inhibit = [&](const CandidateAction* c, const std::string& reason) {
    out.inhibited.push_back({*c, reason});
  };

  // Stage one: conflicts among the joint effects, globals aside.
  std::vector<const CandidateAction*> enabled = all;
  if (!plain(all).has_value()) {
    out.had_conflict = true;
    for (const CandidateAction* c : all) out.conflict_set.push_back(*c);

    FilterResult filtered = priority_filter(all, plain);
    for (const CandidateAction* c : filtered.inhibited) inhibit(c, "priority");
    enabled = filtered.survivors;

    if (!plain(enabled).has_value()) {
      std::vector<const CandidateAction*> resolved;
      if (mode == ConflictMode::Negotiate && negotiate) {
        resolved = negotiate(enabled, plain);
        std::set<const CandidateAction*> kept(resolved.begin(), resolved.end());
        for (const CandidateAction* c : enabled)
          if (!kept.count(c)) inhibit(c, "negotiation");
      } else {
        resolved = arbitrate(enabled, strategy, plain, rng);
        std::set<const CandidateAction*> kept(resolved.begin(), resolved.end());
        for (const CandidateAction* c : enabled)
          if (!kept.count(c)) inhibit(c, "arbitration");
      }
      enabled = resolved;
    }
  }

  // Stage two: global constraints, enforced while merging.
  for (int guard = 0; guard < 2; ++guard) {
    if (solve_candidates_with_globals(problem, seq, enabled).has_value()) break;
    if (!out.had_conflict) {
      out.had_conflict = true;
      for (const CandidateAction* c : enabled) out.conflict_set.push_back(*c);
    }
    // which globals break against the stage-one candidate state?
    auto sigma1 = solve_candidates(problem, seq, enabled);
    std::set<int> violated_fluents;
    if (sigma1) {
      StateSeq ext = seq;
      ext.push_back(inertial_complete(*sigma1, seq));
      int idx = static_cast<int>(ext.size()) - 1;
      for (const GlobalAxiom* g : active_globals(problem, idx)) {
        if (!holds_or_false(ext, idx, *g->cond))
          for (int id : timeless_fluents(*g->cond)) violated_fluents.insert(id);
      }
    } else {
      for (const GlobalAxiom* g :
           active_globals(problem, static_cast<int>(seq.size())))
        for (int id : timeless_fluents(*g->cond)) violated_fluents.insert(id);
    }
    std::vector<const CandidateAction*> contributing, kept;
    for (const CandidateAction* c : enabled) {
      bool touches = false;
      for (int id : timeless_fluents(*c->deff))
        if (violated_fluents.count(id)) touches = true;
      (touches ? contributing : kept).push_back(c);
    }
    if (contributing.empty()) {
      out.global_unsat = true;
      return out;
    }
    SatFn sat_kept = [&, kept](const std::vector<const CandidateAction*>& chosen) {
      std::vector<const CandidateAction*> full = kept;
      full.insert(full.end(), chosen.begin(), chosen.end());
      return solve_candidates_with_globals(problem, seq, full);
    };
    std::vector<const CandidateAction*> resolved;
    if (mode == ConflictMode::Negotiate && negotiate)
      resolved = negotiate(contributing, sat_kept);
    else
      resolved = arbitrate(contributing, strategy, sat_kept, rng);
    std::set<const CandidateAction*> keep_set(resolved.begin(), resolved.end());
    for (const CandidateAction* c : contributing)
      if (!keep_set.count(c)) inhibit(c, "global");
    enabled = kept;
    enabled.insert(enabled.end(), resolved.begin(), resolved.end());
  }

  auto sigma = solve_candidates_with_globals(problem, seq, enabled);
  if (!sigma) {
    out.global_unsat = true;
    return out;
  }
  out.next = enabled.empty() ? seq.back() : inertial_complete(*sigma, seq);
  for (const CandidateAction* c : enabled) out.enabled.push_back(*c);
  return out;
}

}  // namespace baac
