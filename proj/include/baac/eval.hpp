#ifndef BAAC_EVAL_HPP
#define BAAC_EVAL_HPP

#include <optional>

#include "baac/state.hpp"

namespace baac {

// Value of an expression in the sequence at time j. The annotation rule:
// f@t reads v_{j+t}, clamped to v_0 when j+t < 0. Returns nullopt on
// division or modulo by zero.
std::optional<Value> eval_expr(const StateSeq& seq, int j, const Expr& e);

// Satisfaction at time j. Propagates evaluation errors as nullopt.
std::optional<bool> holds(const StateSeq& seq, int j, const Constraint& c);

// Policy helper: an erroring constraint counts as unsatisfied (the caller
// logs the event).
bool holds_or_false(const StateSeq& seq, int j, const Constraint& c,
                    bool* eval_error = nullptr);

// Evaluation against <v_0..v_i, sigma> at index i+1, where sigma covers
// only the timeless fluents the constraint mentions. Used by the solver.
class TailView {
 public:
  TailView(const StateSeq& base, const std::vector<std::optional<Value>>& tail)
      : base_(base), tail_(tail) {}

  const StateSeq& base() const { return base_; }
  int length() const { return static_cast<int>(base_.size()) + 1; }
  std::optional<Value> value(int j, int fluent_id) const;

 private:
  const StateSeq& base_;
  const std::vector<std::optional<Value>>& tail_;
};

std::optional<Value> eval_expr(const TailView& view, int j, const Expr& e);
std::optional<bool> holds(const TailView& view, int j, const Constraint& c);

}  // namespace baac

#endif
