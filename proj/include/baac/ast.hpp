#ifndef BAAC_AST_HPP
#define BAAC_AST_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace baac {

using Value = std::int64_t;

enum class BinOp { Add, Sub, Mul, Div, Mod };
enum class RelOp { Eq, Ne, Le, Lt, Ge, Gt };

struct Constraint;
using ConstraintPtr = std::shared_ptr<Constraint>;

// Fluent expressions. A fluent reference carries a non-positive time
// offset: f@0 is the current value, f@-k the value k steps in the past.
struct Expr {
  enum class Kind { Literal, Fluent, Binary, Negate, Abs, Reify };

  Kind kind = Kind::Literal;
  Value literal = 0;
  std::string fluent;
  int fluent_id = -1;  // resolved against the problem's fluent table
  int offset = 0;      // always <= 0
  BinOp op = BinOp::Add;
  std::shared_ptr<Expr> lhs, rhs;  // Negate/Abs use lhs only
  ConstraintPtr reified;
};
using ExprPtr = std::shared_ptr<Expr>;

// Propositional combination of primitive comparisons. And/Or are n-ary;
// Not uses kids[0].
struct Constraint {
  enum class Kind { True, False, Compare, And, Or, Not };

  Kind kind = Kind::True;
  RelOp op = RelOp::Eq;
  ExprPtr lhs, rhs;
  std::vector<ConstraintPtr> kids;
};

ExprPtr lit(Value v);
ExprPtr fluent_ref(std::string name, int offset = 0);
ExprPtr binary(BinOp op, ExprPtr a, ExprPtr b);
ExprPtr negate(ExprPtr a);
ExprPtr abs_of(ExprPtr a);
ExprPtr reify(ConstraintPtr c);

ConstraintPtr ctrue();
ConstraintPtr cfalse();
ConstraintPtr compare(RelOp op, ExprPtr a, ExprPtr b);
ConstraintPtr conj(std::vector<ConstraintPtr> kids);
ConstraintPtr disj(std::vector<ConstraintPtr> kids);
ConstraintPtr cnot(ConstraintPtr c);

// Deep copy with every fluent offset shifted by delta (delta <= 0).
ExprPtr shift_time(const ExprPtr& e, int delta);
ConstraintPtr shift_time(const ConstraintPtr& c, int delta);

bool equal(const Expr& a, const Expr& b);
bool equal(const Constraint& a, const Constraint& b);

std::string to_string(const Expr& e);
std::string to_string(const Constraint& c);
std::string to_string(BinOp op);
std::string to_string(RelOp op);

// ---------------------------------------------------------------------------
// Theory-level declarations.

struct FluentDecl {
  std::string name;
  std::vector<Value> domain;  // sorted, distinct, nonempty
};

struct ConflictOption {
  enum class Kind { RetryAfter, Forego, Arbitrate };
  Kind kind = Kind::Forego;
  int delay = 0;           // RetryAfter
  ConstraintPtr provided;  // defaults to true
};

struct FailureOption {
  enum class Kind { RetryAfter, Replan, Fail };
  Kind kind = Kind::Replan;
  int delay = 0;
  ConstraintPtr cond;      // defaults to true
  ConstraintPtr add_goal;  // Replan only, may be null
};

struct ActionDecl {
  std::string name;
  std::vector<ConflictOption> on_conflict;
  std::vector<FailureOption> on_failure;
};

struct ExecAxiom {
  std::string action;
  ConstraintPtr cond;
};

// "x causes Eff if Prec"; eff is a conjunction of basic primitive
// constraints (timeless fluent on the left of '=').
struct DynamicLaw {
  std::string action;
  ConstraintPtr eff;
  ConstraintPtr prec;  // defaults to true
};

struct RequestAxiom {
  ConstraintPtr requested;           // C1
  std::optional<std::string> target; // absent = broadcast
  ConstraintPtr trigger;             // C2
  ConstraintPtr offer;               // C4, may be null
};

struct HelpAxiom {
  bool all = false;
  std::vector<std::string> donors;
  ConstraintPtr cond;  // C3, defaults to true
};

struct GlobalAxiom {
  bool always = true;
  int at_time = 0;  // holds_at only
  ConstraintPtr cond;
};

struct AgentTheory {
  std::string name;
  int priority = 0;  // 0 = highest
  std::vector<std::string> known_agents;
  std::vector<FluentDecl> fluents;
  std::vector<ActionDecl> actions;
  std::vector<ExecAxiom> execs;
  std::vector<DynamicLaw> laws;
  std::vector<RequestAxiom> requests;
  std::vector<HelpAxiom> helps;
  std::vector<ConstraintPtr> goals;
  std::vector<ConstraintPtr> inits;
  std::vector<GlobalAxiom> globals;

  const ActionDecl* find_action(std::string_view n) const;
  bool declares_fluent(std::string_view n) const;
};

std::string to_string(const AgentTheory& t);

}  // namespace baac

#endif
