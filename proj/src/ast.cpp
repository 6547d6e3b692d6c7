#include "baac/ast.hpp"

#include <algorithm>
#include <sstream>

namespace baac {

ExprPtr lit(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Literal;
  e->literal = v;
  return e;
}

ExprPtr fluent_ref(std::string name, int offset) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Fluent;
  e->fluent = std::move(name);
  e->offset = offset;
  return e;
}

ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->op = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr negate(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Negate;
  e->lhs = std::move(a);
  return e;
}

ExprPtr abs_of(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Abs;
  e->lhs = std::move(a);
  return e;
}

ExprPtr reify(ConstraintPtr c) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Reify;
  e->reified = std::move(c);
  return e;
}

ConstraintPtr ctrue() {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::True;
  return c;
}

ConstraintPtr cfalse() {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::False;
  return c;
}

ConstraintPtr compare(RelOp op, ExprPtr a, ExprPtr b) {
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::Compare;
  c->op = op;
  c->lhs = std::move(a);
  c->rhs = std::move(b);
  return c;
}

ConstraintPtr conj(std::vector<ConstraintPtr> kids) {
  if (kids.empty()) return ctrue();
  if (kids.size() == 1) return kids[0];
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::And;
  c->kids = std::move(kids);
  return c;
}

ConstraintPtr disj(std::vector<ConstraintPtr> kids) {
  if (kids.empty()) return cfalse();
  if (kids.size() == 1) return kids[0];
  auto c = std::make_shared<Constraint>();
  c->kind = Constraint::Kind::Or;
  c->kids = std::move(kids);
  return c;
}

ConstraintPtr cnot(ConstraintPtr c) {
  auto n = std::make_shared<Constraint>();
  n->kind = Constraint::Kind::Not;
  n->kids.push_back(std::move(c));
  return n;
}

ExprPtr shift_time(const ExprPtr& e, int delta) {
  if (!e) return nullptr;
  auto out = std::make_shared<Expr>(*e);
  switch (e->kind) {
    case Expr::Kind::Fluent:
      out->offset += delta;
      break;
    case Expr::Kind::Binary:
      out->lhs = shift_time(e->lhs, delta);
      out->rhs = shift_time(e->rhs, delta);
      break;
    case Expr::Kind::Negate:
    case Expr::Kind::Abs:
      out->lhs = shift_time(e->lhs, delta);
      break;
    case Expr::Kind::Reify:
      out->reified = shift_time(e->reified, delta);
      break;
    case Expr::Kind::Literal:
      break;
  }
  return out;
}

ConstraintPtr shift_time(const ConstraintPtr& c, int delta) {
  if (!c) return nullptr;
  auto out = std::make_shared<Constraint>(*c);
  out->lhs = shift_time(c->lhs, delta);
  out->rhs = shift_time(c->rhs, delta);
  out->kids.clear();
  for (const auto& k : c->kids) out->kids.push_back(shift_time(k, delta));
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Literal:
      return a.literal == b.literal;
    case Expr::Kind::Fluent:
      return a.fluent == b.fluent && a.offset == b.offset;
    case Expr::Kind::Binary:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case Expr::Kind::Negate:
    case Expr::Kind::Abs:
      return equal(*a.lhs, *b.lhs);
    case Expr::Kind::Reify:
      return equal(*a.reified, *b.reified);
  }
  return false;
}

bool equal(const Constraint& a, const Constraint& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Constraint::Kind::True:
    case Constraint::Kind::False:
      return true;
    case Constraint::Kind::Compare:
      return a.op == b.op && equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case Constraint::Kind::And:
    case Constraint::Kind::Or:
    case Constraint::Kind::Not: {
      if (a.kids.size() != b.kids.size()) return false;
      for (size_t i = 0; i < a.kids.size(); ++i)
        if (!equal(*a.kids[i], *b.kids[i])) return false;
      return true;
    }
  }
  return false;
}

std::string to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "mod";
  }
  return "?";
}

std::string to_string(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "!=";
    case RelOp::Le: return "<=";
    case RelOp::Lt: return "<";
    case RelOp::Ge: return ">=";
    case RelOp::Gt: return ">";
  }
  return "?";
}

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      return (e.op == BinOp::Add || e.op == BinOp::Sub) ? 1 : 2;
    default:
      return 3;
  }
}

void print_expr(std::ostringstream& os, const Expr& e, int parent_prec) {
  int prec = precedence(e);
  bool parens = e.kind == Expr::Kind::Binary && prec < parent_prec;
  if (parens) os << "(";
  switch (e.kind) {
    case Expr::Kind::Literal:
      os << e.literal;
      break;
    case Expr::Kind::Fluent:
      os << e.fluent;
      if (e.offset != 0) os << "@" << e.offset;
      break;
    case Expr::Kind::Binary:
      print_expr(os, *e.lhs, prec);
      os << " " << to_string(e.op) << " ";
      print_expr(os, *e.rhs, prec + 1);
      break;
    case Expr::Kind::Negate:
      os << "-";
      print_expr(os, *e.lhs, 3);
      break;
    case Expr::Kind::Abs:
      os << "abs(";
      print_expr(os, *e.lhs, 0);
      os << ")";
      break;
    case Expr::Kind::Reify:
      os << "rei(" << to_string(*e.reified) << ")";
      break;
  }
  if (parens) os << ")";
}

void print_constraint(std::ostringstream& os, const Constraint& c, bool atom_context) {
  switch (c.kind) {
    case Constraint::Kind::True:
      os << "true";
      break;
    case Constraint::Kind::False:
      os << "false";
      break;
    case Constraint::Kind::Compare:
      print_expr(os, *c.lhs, 0);
      os << " " << to_string(c.op) << " ";
      print_expr(os, *c.rhs, 0);
      break;
    case Constraint::Kind::And: {
      if (atom_context) os << "(";
      for (size_t i = 0; i < c.kids.size(); ++i) {
        if (i) os << " and ";
        bool kid_atom = c.kids[i]->kind == Constraint::Kind::Or;
        print_constraint(os, *c.kids[i], kid_atom);
      }
      if (atom_context) os << ")";
      break;
    }
    case Constraint::Kind::Or: {
      if (atom_context) os << "(";
      for (size_t i = 0; i < c.kids.size(); ++i) {
        if (i) os << " or ";
        print_constraint(os, *c.kids[i], false);
      }
      if (atom_context) os << ")";
      break;
    }
    case Constraint::Kind::Not:
      os << "not ";
      print_constraint(os, *c.kids[0], true);
      break;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string to_string(const Constraint& c) {
  std::ostringstream os;
  print_constraint(os, c, false);
  return os.str();
}

const ActionDecl* AgentTheory::find_action(std::string_view n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

bool AgentTheory::declares_fluent(std::string_view n) const {
  for (const auto& f : fluents)
    if (f.name == n) return true;
  return false;
}

namespace {

std::string domain_string(const std::vector<Value>& dom) {
  // Contiguous domains print as intervals.
  bool contiguous = true;
  for (size_t i = 1; i < dom.size(); ++i)
    if (dom[i] != dom[i - 1] + 1) { contiguous = false; break; }
  std::ostringstream os;
  if (contiguous) {
    os << dom.front() << ".." << dom.back();
  } else {
    os << "{";
    for (size_t i = 0; i < dom.size(); ++i) {
      if (i) os << ", ";
      os << dom[i];
    }
    os << "}";
  }
  return os.str();
}

}  // namespace

std::string to_string(const AgentTheory& t) {
  std::ostringstream os;
  os << "agent " << t.name;
  if (t.priority != 0) os << " priority " << t.priority;
  os << ".\n";
  if (!t.known_agents.empty()) {
    os << "known_agents ";
    for (size_t i = 0; i < t.known_agents.size(); ++i) {
      if (i) os << ", ";
      os << t.known_agents[i];
    }
    os << ".\n";
  }
  for (const auto& f : t.fluents)
    os << "fluent " << f.name << " valued " << domain_string(f.domain) << ".\n";
  for (const auto& a : t.actions) {
    os << "action " << a.name;
    for (const auto& oc : a.on_conflict) {
      os << " on_conflict ";
      switch (oc.kind) {
        case ConflictOption::Kind::RetryAfter:
          os << "retry_after " << oc.delay;
          if (oc.provided) os << " provided " << to_string(*oc.provided);
          break;
        case ConflictOption::Kind::Forego:
          os << "forego";
          if (oc.provided) os << " provided " << to_string(*oc.provided);
          break;
        case ConflictOption::Kind::Arbitrate:
          os << "arbitrate";
          break;
      }
    }
    for (const auto& of : a.on_failure) {
      os << " on_failure ";
      switch (of.kind) {
        case FailureOption::Kind::RetryAfter:
          os << "retry_after " << of.delay;
          if (of.cond) os << " if " << to_string(*of.cond);
          break;
        case FailureOption::Kind::Replan:
          os << "replan";
          if (of.cond) os << " if " << to_string(*of.cond);
          if (of.add_goal) os << " add_goal " << to_string(*of.add_goal);
          break;
        case FailureOption::Kind::Fail:
          os << "fail";
          if (of.cond) os << " if " << to_string(*of.cond);
          break;
      }
    }
    os << ".\n";
  }
  for (const auto& e : t.execs)
    os << "executable " << e.action << " if " << to_string(*e.cond) << ".\n";
  for (const auto& l : t.laws) {
    os << l.action << " causes " << to_string(*l.eff);
    if (l.prec && l.prec->kind != Constraint::Kind::True)
      os << " if " << to_string(*l.prec);
    os << ".\n";
  }
  for (const auto& r : t.requests) {
    os << "request " << to_string(*r.requested);
    if (r.target) os << " to_agent " << *r.target;
    os << " if " << to_string(*r.trigger);
    if (r.offer) os << " offering " << to_string(*r.offer);
    os << ".\n";
  }
  for (const auto& h : t.helps) {
    os << "help ";
    if (h.all) {
      os << "all";
    } else {
      for (size_t i = 0; i < h.donors.size(); ++i) {
        if (i) os << ", ";
        os << h.donors[i];
      }
    }
    if (h.cond) os << " if " << to_string(*h.cond);
    os << ".\n";
  }
  for (const auto& g : t.goals) os << "goal " << to_string(*g) << ".\n";
  for (const auto& i : t.inits) os << "initially " << to_string(*i) << ".\n";
  for (const auto& g : t.globals) {
    if (g.always)
      os << "always " << to_string(*g.cond) << ".\n";
    else
      os << to_string(*g.cond) << " holds_at " << g.at_time << ".\n";
  }
  return os.str();
}

}  // namespace baac
