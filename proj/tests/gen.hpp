// Random generators shared by the property suites.
#ifndef BAAC_TESTS_GEN_HPP
#define BAAC_TESTS_GEN_HPP

#include <random>

#include "baac/problem.hpp"
#include "baac/state.hpp"

namespace baac::gen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

// A fluent table of n fluents with contiguous domains of size <= max_dom.
inline FluentTable table(Rng& rng, int n, int max_dom) {
  FluentTable t;
  for (int i = 0; i < n; ++i) {
    Value lo = pick(rng, -2, 2);
    Value hi = lo + pick(rng, 0, max_dom - 1);
    std::vector<Value> dom;
    for (Value v = lo; v <= hi; ++v) dom.push_back(v);
    t.add("f" + std::to_string(i), std::move(dom));
  }
  return t;
}

inline State random_state(Rng& rng, const FluentTable& t) {
  State s(t.size());
  for (int i = 0; i < t.size(); ++i) {
    const auto& dom = t.info(i).domain;
    s[i] = dom[rng() % dom.size()];
  }
  return s;
}

inline StateSeq random_seq(Rng& rng, const FluentTable& t, int min_len, int max_len) {
  StateSeq seq;
  int len = pick(rng, min_len, max_len);
  for (int i = 0; i < len; ++i) seq.push_back(random_state(rng, t));
  return seq;
}

inline ExprPtr ref(const FluentTable& t, int id, int offset) {
  ExprPtr e = fluent_ref(t.info(id).name, offset);
  e->fluent_id = id;
  return e;
}

ConstraintPtr random_constraint(Rng& rng, const FluentTable& t, int depth);

inline ExprPtr random_expr(Rng& rng, const FluentTable& t, int depth) {
  int roll = pick(rng, 0, depth >= 3 ? 1 : 6);
  switch (roll) {
    case 0:
      return lit(pick(rng, -4, 4));
    case 1:
      return ref(t, pick(rng, 0, t.size() - 1), -pick(rng, 0, 2));
    case 2:
    case 3: {
      BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
      return binary(ops[rng() % 5], random_expr(rng, t, depth + 1),
                    random_expr(rng, t, depth + 1));
    }
    case 4:
      return negate(random_expr(rng, t, depth + 1));
    case 5:
      return abs_of(random_expr(rng, t, depth + 1));
    default:
      return reify(random_constraint(rng, t, depth + 1));
  }
}

inline ConstraintPtr random_constraint(Rng& rng, const FluentTable& t, int depth) {
  int roll = pick(rng, 0, depth >= 2 ? 0 : 3);
  switch (roll) {
    case 0: {
      RelOp ops[] = {RelOp::Eq, RelOp::Ne, RelOp::Le, RelOp::Lt, RelOp::Ge, RelOp::Gt};
      return compare(ops[rng() % 6], random_expr(rng, t, depth + 1),
                     random_expr(rng, t, depth + 1));
    }
    case 1:
      return conj({random_constraint(rng, t, depth + 1),
                   random_constraint(rng, t, depth + 1)});
    case 2:
      return disj({random_constraint(rng, t, depth + 1),
                   random_constraint(rng, t, depth + 1)});
    default:
      return cnot(random_constraint(rng, t, depth + 1));
  }
}

// Conjunction of basic primitive constraints "f = expr", the shape dynamic
// law effects take.
inline ConstraintPtr random_basic_effect(Rng& rng, const FluentTable& t, int max_conj) {
  std::vector<ConstraintPtr> parts;
  int n = pick(rng, 1, max_conj);
  for (int i = 0; i < n; ++i) {
    int target = pick(rng, 0, t.size() - 1);
    parts.push_back(compare(RelOp::Eq, ref(t, target, 0), random_expr(rng, t, 2)));
  }
  return conj(std::move(parts));
}

}  // namespace baac::gen

#endif
