#include "baac/problem.hpp"

#include <algorithm>
#include <sstream>

namespace baac {

bool FluentInfo::contains(Value v) const {
  return std::binary_search(domain.begin(), domain.end(), v);
}

int FluentTable::add(const std::string& name, std::vector<Value> domain) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(fluents_.size());
  fluents_.push_back({name, std::move(domain)});
  index_[name] = id;
  return id;
}

int FluentTable::index_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

bool Diagnostics::ok() const {
  for (const auto& d : items)
    if (d.severity == Diagnostic::Severity::Error) return false;
  return true;
}

void Diagnostics::error(std::string msg) {
  items.push_back({Diagnostic::Severity::Error, std::move(msg)});
}

void Diagnostics::warning(std::string msg) {
  items.push_back({Diagnostic::Severity::Warning, std::move(msg)});
}

std::string Diagnostics::summary() const {
  std::ostringstream os;
  for (const auto& d : items)
    os << (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ")
       << d.message << "\n";
  return os.str();
}

namespace {

void resolve_expr(Expr& e, const FluentTable& table);

void resolve_constraint(Constraint& c, const FluentTable& table) {
  if (c.lhs) resolve_expr(*c.lhs, table);
  if (c.rhs) resolve_expr(*c.rhs, table);
  for (auto& k : c.kids) resolve_constraint(*k, table);
}

void resolve_expr(Expr& e, const FluentTable& table) {
  switch (e.kind) {
    case Expr::Kind::Fluent:
      e.fluent_id = table.index_of(e.fluent);
      break;
    case Expr::Kind::Binary:
      resolve_expr(*e.lhs, table);
      resolve_expr(*e.rhs, table);
      break;
    case Expr::Kind::Negate:
    case Expr::Kind::Abs:
      resolve_expr(*e.lhs, table);
      break;
    case Expr::Kind::Reify:
      resolve_constraint(*e.reified, table);
      break;
    case Expr::Kind::Literal:
      break;
  }
}

void resolve_theory(AgentTheory& t, const FluentTable& table) {
  auto res = [&](const ConstraintPtr& c) {
    if (c) resolve_constraint(*c, table);
  };
  for (auto& e : t.execs) res(e.cond);
  for (auto& l : t.laws) {
    res(l.eff);
    res(l.prec);
  }
  for (auto& a : t.actions) {
    for (auto& oc : a.on_conflict) res(oc.provided);
    for (auto& of : a.on_failure) {
      res(of.cond);
      res(of.add_goal);
    }
  }
  for (auto& r : t.requests) {
    res(r.requested);
    res(r.trigger);
    res(r.offer);
  }
  for (auto& h : t.helps) res(h.cond);
  for (auto& g : t.goals) res(g);
  for (auto& i : t.inits) res(i);
  for (auto& g : t.globals) res(g.cond);
}

// Collects `fluent = literal` conjuncts from an initial-state constraint.
void basic_init_literals(const Constraint& c,
                         std::vector<std::pair<std::string, Value>>& out) {
  if (c.kind == Constraint::Kind::And) {
    for (const auto& k : c.kids) basic_init_literals(*k, out);
    return;
  }
  if (c.kind == Constraint::Kind::Compare && c.op == RelOp::Eq &&
      c.lhs->kind == Expr::Kind::Fluent && c.lhs->offset == 0 &&
      c.rhs->kind == Expr::Kind::Literal) {
    out.emplace_back(c.lhs->fluent, c.rhs->literal);
  }
}

}  // namespace

Diagnostics validate_problem(const std::vector<AgentTheory>& theories) {
  Diagnostics diags;
  std::vector<std::string> agent_names;
  for (const auto& t : theories) agent_names.push_back(t.name);

  for (size_t i = 0; i < theories.size(); ++i)
    for (size_t j = i + 1; j < theories.size(); ++j)
      if (theories[i].name == theories[j].name)
        diags.error("duplicate agent '" + theories[i].name + "'");

  std::unordered_map<std::string, std::pair<std::string, const FluentDecl*>> seen;
  for (const auto& t : theories) {
    for (const auto& f : t.fluents) {
      auto it = seen.find(f.name);
      if (it == seen.end()) {
        seen[f.name] = {t.name, &f};
      } else if (it->second.second->domain != f.domain) {
        diags.error("fluent '" + f.name + "' declared with different domains by '" +
                    it->second.first + "' and '" + t.name + "'");
      }
    }
  }

  std::unordered_map<std::string, std::pair<std::string, Value>> init_lits;
  for (const auto& t : theories) {
    for (const auto& init : t.inits) {
      std::vector<std::pair<std::string, Value>> lits;
      basic_init_literals(*init, lits);
      for (auto& [name, value] : lits) {
        auto it = init_lits.find(name);
        if (it == init_lits.end()) {
          init_lits[name] = {t.name, value};
        } else if (it->second.second != value) {
          diags.error("contradictory initial values for '" + name + "': " +
                      std::to_string(it->second.second) + " (agent '" +
                      it->second.first + "') vs " + std::to_string(value) +
                      " (agent '" + t.name + "')");
        }
      }
    }
  }

  for (const auto& t : theories) {
    for (const auto& r : t.requests) {
      if (r.target &&
          std::find(agent_names.begin(), agent_names.end(), *r.target) ==
              agent_names.end()) {
        diags.warning("agent '" + t.name + "' requests to_agent '" + *r.target +
                      "' which is not part of the problem; the request will never "
                      "receive an answer");
      }
    }
  }
  return diags;
}

Problem Problem::build(std::vector<AgentTheory> theories, Diagnostics& diags) {
  Diagnostics v = validate_problem(theories);
  diags.items.insert(diags.items.end(), v.items.begin(), v.items.end());
  Problem p;
  p.theories = std::move(theories);
  for (const auto& t : p.theories)
    for (const auto& f : t.fluents) p.table.add(f.name, f.domain);
  for (auto& t : p.theories) resolve_theory(t, p.table);
  return p;
}

const AgentTheory* Problem::theory(std::string_view agent) const {
  for (const auto& t : theories)
    if (t.name == agent) return &t;
  return nullptr;
}

std::vector<int> Problem::agent_fluents(const AgentTheory& t) const {
  std::vector<int> ids;
  for (const auto& f : t.fluents) ids.push_back(table.index_of(f.name));
  std::sort(ids.begin(), ids.end());
  return ids;
}

void timeless_fluents(const Constraint& c, std::vector<int>& out) {
  struct Walk {
    std::vector<int>& out;
    void expr(const Expr& e) {
      switch (e.kind) {
        case Expr::Kind::Fluent:
          if (e.offset == 0) out.push_back(e.fluent_id);
          return;
        case Expr::Kind::Binary:
          expr(*e.lhs);
          expr(*e.rhs);
          return;
        case Expr::Kind::Negate:
        case Expr::Kind::Abs:
          expr(*e.lhs);
          return;
        case Expr::Kind::Reify:
          constraint(*e.reified);
          return;
        case Expr::Kind::Literal:
          return;
      }
    }
    void constraint(const Constraint& c) {
      if (c.lhs) expr(*c.lhs);
      if (c.rhs) expr(*c.rhs);
      for (const auto& k : c.kids) constraint(*k);
    }
  } walk{out};
  walk.constraint(c);
}

std::vector<int> timeless_fluents(const Constraint& c) {
  std::vector<int> out;
  timeless_fluents(c, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int lookback_depth(const Constraint& c) {
  struct Walk {
    int depth = 0;
    void expr(const Expr& e) {
      switch (e.kind) {
        case Expr::Kind::Fluent:
          depth = std::max(depth, -e.offset);
          return;
        case Expr::Kind::Binary:
          expr(*e.lhs);
          expr(*e.rhs);
          return;
        case Expr::Kind::Negate:
        case Expr::Kind::Abs:
          expr(*e.lhs);
          return;
        case Expr::Kind::Reify:
          constraint(*e.reified);
          return;
        case Expr::Kind::Literal:
          return;
      }
    }
    void constraint(const Constraint& c) {
      if (c.lhs) expr(*c.lhs);
      if (c.rhs) expr(*c.rhs);
      for (const auto& k : c.kids) constraint(*k);
    }
  } walk;
  walk.constraint(c);
  return walk.depth;
}

}  // namespace baac
