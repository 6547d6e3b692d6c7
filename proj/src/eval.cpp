#include "baac/eval.hpp"

#include <cassert>
#include <cstdlib>
#include <sstream>

namespace baac {

bool PartialState::has(int id) const {
  for (auto& [k, v] : assignments)
    if (k == id) return true;
  return false;
}

Value PartialState::get(int id) const {
  for (auto& [k, v] : assignments)
    if (k == id) return v;
  assert(false && "fluent not assigned");
  return 0;
}

std::string state_to_string(const FluentTable& table, const State& s) {
  std::ostringstream os;
  for (int i = 0; i < table.size(); ++i) {
    if (i) os << ",";
    os << table.info(i).name << "=" << s[i];
  }
  return os.str();
}

namespace {

// Shared evaluator; Lookup(j, fluent_id) -> optional<Value>.
template <typename Lookup>
std::optional<Value> eval_e(const Lookup& at, int length, int j, const Expr& e);

template <typename Lookup>
std::optional<bool> holds_c(const Lookup& at, int length, int j, const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::True:
      return true;
    case Constraint::Kind::False:
      return false;
    case Constraint::Kind::Compare: {
      auto a = eval_e(at, length, j, *c.lhs);
      if (!a) return std::nullopt;
      auto b = eval_e(at, length, j, *c.rhs);
      if (!b) return std::nullopt;
      switch (c.op) {
        case RelOp::Eq: return *a == *b;
        case RelOp::Ne: return *a != *b;
        case RelOp::Le: return *a <= *b;
        case RelOp::Lt: return *a < *b;
        case RelOp::Ge: return *a >= *b;
        case RelOp::Gt: return *a > *b;
      }
      return std::nullopt;
    }
    case Constraint::Kind::And: {
      for (const auto& k : c.kids) {
        auto r = holds_c(at, length, j, *k);
        if (!r) return std::nullopt;
        if (!*r) return false;
      }
      return true;
    }
    case Constraint::Kind::Or: {
      for (const auto& k : c.kids) {
        auto r = holds_c(at, length, j, *k);
        if (!r) return std::nullopt;
        if (*r) return true;
      }
      return false;
    }
    case Constraint::Kind::Not: {
      auto r = holds_c(at, length, j, *c.kids[0]);
      if (!r) return std::nullopt;
      return !*r;
    }
  }
  return std::nullopt;
}

template <typename Lookup>
std::optional<Value> eval_e(const Lookup& at, int length, int j, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Literal:
      return e.literal;
    case Expr::Kind::Fluent: {
      int k = j + e.offset;
      if (k < 0) k = 0;  // clamp rule
      assert(e.fluent_id >= 0 && "unresolved fluent reference");
      (void)length;
      return at(k, e.fluent_id);
    }
    case Expr::Kind::Binary: {
      auto a = eval_e(at, length, j, *e.lhs);
      if (!a) return std::nullopt;
      auto b = eval_e(at, length, j, *e.rhs);
      if (!b) return std::nullopt;
      switch (e.op) {
        case BinOp::Add: return *a + *b;
        case BinOp::Sub: return *a - *b;
        case BinOp::Mul: return *a * *b;
        case BinOp::Div:
          if (*b == 0) return std::nullopt;
          return *a / *b;  // truncation toward zero
        case BinOp::Mod:
          if (*b == 0) return std::nullopt;
          return *a % *b;
      }
      return std::nullopt;
    }
    case Expr::Kind::Negate: {
      auto a = eval_e(at, length, j, *e.lhs);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Expr::Kind::Abs: {
      auto a = eval_e(at, length, j, *e.lhs);
      if (!a) return std::nullopt;
      return *a < 0 ? -*a : *a;
    }
    case Expr::Kind::Reify: {
      auto r = holds_c(at, length, j, *e.reified);
      if (!r) return std::nullopt;
      return *r ? 1 : 0;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Value> eval_expr(const StateSeq& seq, int j, const Expr& e) {
  assert(j >= 0 && j < static_cast<int>(seq.size()));
  auto at = [&](int k, int id) -> std::optional<Value> { return seq[k][id]; };
  return eval_e(at, static_cast<int>(seq.size()), j, e);
}

std::optional<bool> holds(const StateSeq& seq, int j, const Constraint& c) {
  assert(j >= 0 && j < static_cast<int>(seq.size()));
  auto at = [&](int k, int id) -> std::optional<Value> { return seq[k][id]; };
  return holds_c(at, static_cast<int>(seq.size()), j, c);
}

bool holds_or_false(const StateSeq& seq, int j, const Constraint& c, bool* eval_error) {
  auto r = holds(seq, j, c);
  if (!r) {
    if (eval_error) *eval_error = true;
    return false;
  }
  return *r;
}

std::optional<Value> TailView::value(int j, int fluent_id) const {
  if (j < static_cast<int>(base_.size())) return base_[j][fluent_id];
  return tail_[fluent_id];
}

std::optional<Value> eval_expr(const TailView& view, int j, const Expr& e) {
  auto at = [&](int k, int id) -> std::optional<Value> { return view.value(k, id); };
  return eval_e(at, view.length(), j, e);
}

std::optional<bool> holds(const TailView& view, int j, const Constraint& c) {
  auto at = [&](int k, int id) -> std::optional<Value> { return view.value(k, id); };
  return holds_c(at, view.length(), j, c);
}

}  // namespace baac
