#include "baac/solve.hpp"

#include <algorithm>
#include <cassert>

namespace baac {

namespace {

// Conjuncts of the top-level conjunction; anything that is not an And is a
// single conjunct checked as a whole.
void flatten(const Constraint& c, std::vector<const Constraint*>& out) {
  if (c.kind == Constraint::Kind::And) {
    for (const auto& k : c.kids) flatten(*k, out);
  } else {
    out.push_back(&c);
  }
}

struct Conjunct {
  const Constraint* c;
  std::vector<int> vars;  // timeless fluents, sorted
  bool checked = false;
  // Basic primitive form "f = expr": propagation target.
  int target = -1;
  const Expr* rhs = nullptr;
  std::vector<int> rhs_vars;
};

struct Search {
  const FluentTable& table;
  const StateSeq& seq;
  std::vector<int> vars;  // all variables, sorted by table id
  std::vector<Conjunct> conjuncts;
  std::vector<std::optional<Value>> tail;  // indexed by fluent id
  size_t max_count;
  long* budget;
  bool* budget_hit;
  std::vector<PartialState> solutions;

  Search(const FluentTable& t, const StateSeq& s)
      : table(t), seq(s), tail(t.size()), max_count(1), budget(nullptr),
        budget_hit(nullptr) {}

  bool charge() {
    if (!budget) return true;
    if (*budget <= 0) {
      if (budget_hit) *budget_hit = true;
      return false;
    }
    --*budget;
    return true;
  }

  bool vars_assigned(const std::vector<int>& ids) const {
    for (int id : ids)
      if (!tail[id]) return false;
    return true;
  }

  // Evaluates every conjunct whose variables are fully assigned and not yet
  // checked. Returns false when one is violated (or errors).
  bool check_ready(std::vector<int>& newly_checked) {
    TailView view(seq, tail);
    int next_index = static_cast<int>(seq.size());
    for (size_t i = 0; i < conjuncts.size(); ++i) {
      Conjunct& cj = conjuncts[i];
      if (cj.checked || !vars_assigned(cj.vars)) continue;
      auto r = holds(view, next_index, *cj.c);
      if (!r || !*r) return false;  // eval errors count as unsatisfied
      cj.checked = true;
      newly_checked.push_back(static_cast<int>(i));
    }
    return true;
  }

  // Unit propagation on basic conjuncts whose right-hand side is fully
  // determined. Records forced assignments in `forced`.
  bool propagate(std::vector<int>& forced, std::vector<int>& newly_checked) {
    TailView view(seq, tail);
    int next_index = static_cast<int>(seq.size());
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t i = 0; i < conjuncts.size(); ++i) {
        Conjunct& cj = conjuncts[i];
        if (cj.checked || cj.target < 0) continue;
        if (tail[cj.target]) continue;
        if (!vars_assigned(cj.rhs_vars)) continue;
        auto v = eval_expr(view, next_index, *cj.rhs);
        if (!v) return false;
        if (!table.info(cj.target).contains(*v)) return false;
        tail[cj.target] = *v;
        forced.push_back(cj.target);
        cj.checked = true;
        newly_checked.push_back(static_cast<int>(i));
        progress = true;
      }
      if (!check_ready(newly_checked)) return false;
    }
    return true;
  }

  void undo(const std::vector<int>& forced, const std::vector<int>& newly_checked) {
    for (int id : forced) tail[id] = std::nullopt;
    for (int i : newly_checked) conjuncts[i].checked = false;
  }

  // True when enumeration should stop (solution cap reached or budget out).
  bool dfs() {
    if (!charge()) return true;
    std::vector<int> forced, newly_checked;
    if (!propagate(forced, newly_checked)) {
      undo(forced, newly_checked);
      return false;
    }
    int var = -1;
    for (int id : vars) {
      if (!tail[id]) {
        var = id;
        break;
      }
    }
    if (var < 0) {
      PartialState sigma;
      for (int id : vars) sigma.assignments.emplace_back(id, *tail[id]);
      solutions.push_back(std::move(sigma));
      undo(forced, newly_checked);
      return solutions.size() >= max_count;
    }
    for (Value v : table.info(var).domain) {
      tail[var] = v;
      std::vector<int> nc;
      bool stop = false;
      if (check_ready(nc)) {
        stop = dfs();
      }
      for (int i : nc) conjuncts[i].checked = false;
      tail[var] = std::nullopt;
      if (stop) {
        undo(forced, newly_checked);
        return true;
      }
    }
    undo(forced, newly_checked);
    return false;
  }

  void prepare(const Constraint& c) {
    std::vector<const Constraint*> flat;
    flatten(c, flat);
    for (const Constraint* f : flat) {
      Conjunct cj;
      cj.c = f;
      cj.vars = timeless_fluents(*f);
      if (f->kind == Constraint::Kind::Compare && f->op == RelOp::Eq &&
          f->lhs->kind == Expr::Kind::Fluent && f->lhs->offset == 0) {
        cj.target = f->lhs->fluent_id;
        cj.rhs = f->rhs.get();
        Constraint rhs_holder;
        rhs_holder.kind = Constraint::Kind::Compare;
        rhs_holder.op = RelOp::Eq;
        rhs_holder.lhs = f->rhs;
        rhs_holder.rhs = f->rhs;
        cj.rhs_vars = timeless_fluents(rhs_holder);
      }
      conjuncts.push_back(std::move(cj));
      for (int id : conjuncts.back().vars) vars.push_back(id);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  }
};

}  // namespace

std::optional<PartialState> solve_next(const FluentTable& table, const StateSeq& seq,
                                       const Constraint& c) {
  auto all = solve_next_all(table, seq, c, 1);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::vector<PartialState> solve_next_all(const FluentTable& table, const StateSeq& seq,
                                         const Constraint& c, size_t max_count,
                                         long* node_budget, bool* budget_hit) {
  Search s(table, seq);
  s.max_count = max_count;
  s.budget = node_budget;
  s.budget_hit = budget_hit;
  s.prepare(c);
  s.dfs();
  return std::move(s.solutions);
}

State inertial_complete(const PartialState& sigma, const StateSeq& seq) {
  assert(!seq.empty());
  State next = seq.back();
  for (auto& [id, v] : sigma.assignments) next[id] = v;
  return next;
}

ConstraintPtr pin_constraint(const FluentTable& table, int fluent_id, Value v) {
  ExprPtr f = fluent_ref(table.info(fluent_id).name, 0);
  f->fluent_id = fluent_id;
  return compare(RelOp::Eq, std::move(f), lit(v));
}

}  // namespace baac
