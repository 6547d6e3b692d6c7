#include "baac/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace baac {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Value number = 0;
  int line = 1;
  int col = 1;
};

[[noreturn]] void fail(const Token& at, const std::string& msg) {
  throw ParseError(msg, at.line, at.col);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Int;
      t.text = text.substr(i, j - i);
      t.number = std::stoll(t.text);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    // multi-char symbols first
    auto sym = [&](const char* s) {
      size_t n = std::char_traits<char>::length(s);
      if (text.compare(i, n, s) == 0) {
        t.kind = Tok::Sym;
        t.text = s;
        advance(n);
        out.push_back(t);
        return true;
      }
      return false;
    };
    if (sym("..") || sym("!=") || sym("<=") || sym(">=")) continue;
    if (std::string(".,:{}()=<>+-*/@|").find(c) != std::string::npos) {
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    fail(t, std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {
    "agent",    "priority",   "known_agents", "fluent",   "valued",  "action",
    "executable", "if",       "causes",       "request",  "to_agent", "offering",
    "help",     "all",        "goal",         "initially", "always",  "holds_at",
    "on_conflict", "on_failure", "retry_after", "provided", "forego", "replan",
    "add_goal", "fail",       "arbitrate",    "and",      "or",      "not",
    "abs",      "rei",        "pair",         "mod",      "true",    "false",
    "forall",   "in",         "nop"};

class TheoryParser {
 public:
  explicit TheoryParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  AgentTheory parse() {
    while (!at_end()) parse_statement();
    validate();
    return std::move(theory_);
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  AgentTheory theory_;
  bool has_agent_decl_ = false;

  const Token& cur() const { return toks_[pos_]; }
  bool at_end() const { return cur().kind == Tok::End; }

  bool is_sym(const char* s) const { return cur().kind == Tok::Sym && cur().text == s; }
  bool is_kw(const char* s) const { return cur().kind == Tok::Ident && cur().text == s; }

  Token take() { return toks_[pos_++]; }

  void expect_sym(const char* s) {
    if (!is_sym(s)) fail(cur(), std::string("expected '") + s + "'");
    ++pos_;
  }

  void expect_kw(const char* s) {
    if (!is_kw(s)) fail(cur(), std::string("expected '") + s + "'");
    ++pos_;
  }

  std::string expect_name(const char* what) {
    if (cur().kind != Tok::Ident) fail(cur(), std::string("expected ") + what);
    if (kKeywords.count(cur().text))
      fail(cur(), "'" + cur().text + "' is a reserved word");
    return take().text;
  }

  Value expect_int() {
    bool neg = false;
    if (is_sym("-")) {
      ++pos_;
      neg = true;
    }
    if (cur().kind != Tok::Int) fail(cur(), "expected integer");
    Value v = take().number;
    return neg ? -v : v;
  }

  // ---- statements -------------------------------------------------------

  void parse_statement() {
    if (is_kw("forall")) {
      parse_forall();
      return;
    }
    if (is_kw("agent")) {
      ++pos_;
      if (has_agent_decl_) fail(cur(), "duplicate agent declaration");
      has_agent_decl_ = true;
      theory_.name = expect_name("agent name");
      if (is_kw("priority")) {
        ++pos_;
        Value p = expect_int();
        if (p < 0) fail(cur(), "priority must be non-negative");
        theory_.priority = static_cast<int>(p);
      }
      expect_sym(".");
      return;
    }
    if (is_kw("known_agents")) {
      ++pos_;
      theory_.known_agents.push_back(expect_name("agent name"));
      while (is_sym(",")) {
        ++pos_;
        theory_.known_agents.push_back(expect_name("agent name"));
      }
      expect_sym(".");
      return;
    }
    if (is_kw("fluent")) {
      parse_fluent_decl();
      return;
    }
    if (is_kw("action")) {
      parse_action_decl();
      return;
    }
    if (is_kw("executable")) {
      ++pos_;
      ExecAxiom ax;
      ax.action = expect_name("action name");
      expect_kw("if");
      ax.cond = parse_constraint();
      expect_sym(".");
      theory_.execs.push_back(std::move(ax));
      return;
    }
    if (is_kw("request")) {
      ++pos_;
      RequestAxiom r;
      r.requested = parse_constraint();
      if (is_kw("to_agent")) {
        ++pos_;
        r.target = expect_name("agent name");
      }
      expect_kw("if");
      r.trigger = parse_constraint();
      if (is_kw("offering")) {
        ++pos_;
        r.offer = parse_constraint();
      }
      expect_sym(".");
      theory_.requests.push_back(std::move(r));
      return;
    }
    if (is_kw("help")) {
      ++pos_;
      HelpAxiom h;
      if (is_kw("all")) {
        ++pos_;
        h.all = true;
      } else {
        h.donors.push_back(expect_name("agent name"));
        while (is_sym(",")) {
          ++pos_;
          h.donors.push_back(expect_name("agent name"));
        }
      }
      if (is_kw("if")) {
        ++pos_;
        h.cond = parse_constraint();
      }
      expect_sym(".");
      theory_.helps.push_back(std::move(h));
      return;
    }
    if (is_kw("goal")) {
      ++pos_;
      theory_.goals.push_back(parse_constraint());
      expect_sym(".");
      return;
    }
    if (is_kw("initially")) {
      ++pos_;
      const Token& where = cur();
      ConstraintPtr c = parse_constraint();
      if (!timeless(*c))
        throw ParseError("initially constraint must be timeless", where.line, where.col);
      theory_.inits.push_back(std::move(c));
      expect_sym(".");
      return;
    }
    if (is_kw("always")) {
      ++pos_;
      GlobalAxiom g;
      g.always = true;
      g.cond = parse_constraint();
      expect_sym(".");
      theory_.globals.push_back(std::move(g));
      return;
    }
    // Either a dynamic law ("x causes ...") or "C holds_at n".
    size_t save = pos_;
    if (cur().kind == Tok::Ident && !kKeywords.count(cur().text)) {
      std::string name = take().text;
      if (is_kw("causes")) {
        ++pos_;
        DynamicLaw law;
        law.action = name;
        const Token& where = cur();
        law.eff = parse_constraint();
        check_effect_shape(*law.eff, where);
        if (is_kw("if")) {
          ++pos_;
          law.prec = parse_constraint();
        } else {
          law.prec = ctrue();
        }
        expect_sym(".");
        theory_.laws.push_back(std::move(law));
        return;
      }
      pos_ = save;
    }
    {
      GlobalAxiom g;
      g.always = false;
      g.cond = parse_constraint();
      expect_kw("holds_at");
      Value n = expect_int();
      if (n < 0) fail(cur(), "holds_at time must be non-negative");
      g.at_time = static_cast<int>(n);
      expect_sym(".");
      theory_.globals.push_back(std::move(g));
      return;
    }
  }

  void parse_fluent_decl() {
    expect_kw("fluent");
    std::vector<std::string> names;
    names.push_back(expect_name("fluent name"));
    while (is_sym(",")) {
      ++pos_;
      names.push_back(expect_name("fluent name"));
    }
    expect_kw("valued");
    std::vector<Value> dom;
    const Token& where = cur();
    if (is_sym("{")) {
      ++pos_;
      dom.push_back(expect_int());
      while (is_sym(",")) {
        ++pos_;
        dom.push_back(expect_int());
      }
      expect_sym("}");
      std::sort(dom.begin(), dom.end());
      dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    } else {
      Value lo = expect_int();
      expect_sym("..");
      Value hi = expect_int();
      if (lo > hi) throw ParseError("empty fluent domain", where.line, where.col);
      for (Value v = lo; v <= hi; ++v) dom.push_back(v);
    }
    if (dom.empty()) throw ParseError("empty fluent domain", where.line, where.col);
    expect_sym(".");
    for (auto& n : names) {
      if (theory_.declares_fluent(n))
        throw ParseError("duplicate fluent '" + n + "'", where.line, where.col);
      theory_.fluents.push_back({n, dom});
    }
  }

  void parse_action_decl() {
    expect_kw("action");
    const Token& where = cur();
    ActionDecl a;
    a.name = expect_name("action name");
    if (theory_.find_action(a.name))
      throw ParseError("duplicate action '" + a.name + "'", where.line, where.col);
    while (is_kw("on_conflict") || is_kw("on_failure")) {
      if (is_kw("on_conflict")) {
        ++pos_;
        ConflictOption oc;
        if (is_kw("retry_after")) {
          ++pos_;
          oc.kind = ConflictOption::Kind::RetryAfter;
          Value t = expect_int();
          if (t < 1) fail(cur(), "retry_after delay must be >= 1");
          oc.delay = static_cast<int>(t);
          if (is_kw("provided")) {
            ++pos_;
            oc.provided = parse_constraint();
          }
        } else if (is_kw("forego")) {
          ++pos_;
          oc.kind = ConflictOption::Kind::Forego;
          if (is_kw("provided")) {
            ++pos_;
            oc.provided = parse_constraint();
          }
        } else if (is_kw("arbitrate")) {
          ++pos_;
          oc.kind = ConflictOption::Kind::Arbitrate;
        } else {
          fail(cur(), "expected retry_after, forego or arbitrate");
        }
        a.on_conflict.push_back(std::move(oc));
      } else {
        ++pos_;
        FailureOption of;
        if (is_kw("retry_after")) {
          ++pos_;
          of.kind = FailureOption::Kind::RetryAfter;
          Value t = expect_int();
          if (t < 1) fail(cur(), "retry_after delay must be >= 1");
          of.delay = static_cast<int>(t);
          if (is_kw("if")) {
            ++pos_;
            of.cond = parse_constraint();
          }
        } else if (is_kw("replan")) {
          ++pos_;
          of.kind = FailureOption::Kind::Replan;
          if (is_kw("if")) {
            ++pos_;
            of.cond = parse_constraint();
          }
          if (is_kw("add_goal")) {
            ++pos_;
            of.add_goal = parse_constraint();
          }
        } else if (is_kw("fail")) {
          ++pos_;
          of.kind = FailureOption::Kind::Fail;
          if (is_kw("if")) {
            ++pos_;
            of.cond = parse_constraint();
          }
        } else {
          fail(cur(), "expected retry_after, replan or fail");
        }
        a.on_failure.push_back(std::move(of));
      }
    }
    expect_sym(".");
    theory_.actions.push_back(std::move(a));
  }

  // Bounded template expansion: the body tokens are re-parsed once per
  // value with the variable substituted at token level.
  void parse_forall() {
    expect_kw("forall");
    const Token& vtok = cur();
    std::string var = expect_name("template variable");
    expect_kw("in");
    Value lo = expect_int();
    expect_sym("..");
    Value hi = expect_int();
    if (lo > hi) throw ParseError("empty template range", vtok.line, vtok.col);

    std::vector<Token> body;
    if (is_sym(":")) {
      ++pos_;
      capture_statement(body);
    } else if (is_sym("{")) {
      ++pos_;
      int depth = 1;
      while (depth > 0) {
        if (at_end()) fail(cur(), "unterminated forall block");
        if (is_sym("{")) ++depth;
        if (is_sym("}")) {
          --depth;
          if (depth == 0) {
            ++pos_;
            break;
          }
        }
        body.push_back(take());
      }
    } else {
      fail(cur(), "expected ':' or '{' after forall range");
    }

    Token end;
    end.kind = Tok::End;
    for (Value v = lo; v <= hi; ++v) {
      std::vector<Token> ground;
      ground.reserve(body.size() + 1);
      for (const Token& t : body) ground.push_back(substitute(t, var, v));
      ground.push_back(end);
      std::vector<Token> saved = std::move(toks_);
      size_t saved_pos = pos_;
      toks_ = std::move(ground);
      pos_ = 0;
      while (!at_end()) parse_statement();
      toks_ = std::move(saved);
      pos_ = saved_pos;
    }
  }

  // Captures the tokens of one '.'-terminated statement. Braces of nested
  // forall blocks guard their inner terminators.
  void capture_statement(std::vector<Token>& out) {
    int brace = 0;
    while (true) {
      if (at_end()) fail(cur(), "unterminated statement in forall");
      if (is_sym("{")) ++brace;
      if (is_sym("}")) --brace;
      bool done = brace == 0 && is_sym(".");
      out.push_back(take());
      if (done) return;
    }
  }

  static Token substitute(const Token& t, const std::string& var, Value v) {
    if (t.kind != Tok::Ident) return t;
    if (t.text == var) {
      Token n = t;
      n.kind = Tok::Int;
      n.number = v;
      n.text = std::to_string(v);
      return n;
    }
    // substitute whole '_'-separated segments equal to var
    std::string out;
    size_t start = 0;
    bool changed = false;
    while (start <= t.text.size()) {
      size_t us = t.text.find('_', start);
      std::string seg = t.text.substr(start, us == std::string::npos ? std::string::npos
                                                                     : us - start);
      if (seg == var) {
        out += std::to_string(v);
        changed = true;
      } else {
        out += seg;
      }
      if (us == std::string::npos) break;
      out += '_';
      start = us + 1;
    }
    if (!changed) return t;
    Token n = t;
    n.text = out;
    return n;
  }

  // ---- expressions -------------------------------------------------------

  static std::optional<RelOp> rel_from(const Token& t) {
    if (t.kind == Tok::Sym) {
      if (t.text == "=") return RelOp::Eq;
      if (t.text == "!=") return RelOp::Ne;
      if (t.text == "<=") return RelOp::Le;
      if (t.text == "<") return RelOp::Lt;
      if (t.text == ">=") return RelOp::Ge;
      if (t.text == ">") return RelOp::Gt;
    } else if (t.kind == Tok::Ident) {
      if (t.text == "eq") return RelOp::Eq;
      if (t.text == "neq") return RelOp::Ne;
      if (t.text == "leq") return RelOp::Le;
      if (t.text == "lt") return RelOp::Lt;
      if (t.text == "geq") return RelOp::Ge;
      if (t.text == "gt") return RelOp::Gt;
    }
    return std::nullopt;
  }

  ConstraintPtr parse_constraint() {
    std::vector<ConstraintPtr> terms;
    terms.push_back(parse_conjunction());
    while (is_kw("or")) {
      ++pos_;
      terms.push_back(parse_conjunction());
    }
    return disj(std::move(terms));
  }

  ConstraintPtr parse_conjunction() {
    std::vector<ConstraintPtr> terms;
    terms.push_back(parse_catom());
    while (is_kw("and")) {
      ++pos_;
      terms.push_back(parse_catom());
    }
    return conj(std::move(terms));
  }

  ConstraintPtr parse_catom() {
    if (is_kw("not")) {
      ++pos_;
      return cnot(parse_catom());
    }
    if (is_kw("true")) {
      ++pos_;
      return ctrue();
    }
    if (is_kw("false")) {
      ++pos_;
      return cfalse();
    }
    if (is_kw("pair")) return parse_pair();
    if (is_sym("(")) {
      // Either a parenthesized constraint or a parenthesized expression
      // starting a comparison; try the comparison first.
      size_t save = pos_;
      try {
        return parse_primitive();
      } catch (const ParseError&) {
        pos_ = save;
      }
      expect_sym("(");
      ConstraintPtr c = parse_constraint();
      expect_sym(")");
      return c;
    }
    return parse_primitive();
  }

  ConstraintPtr parse_pair() {
    expect_kw("pair");
    expect_sym("(");
    ExprPtr e1 = parse_expr();
    expect_sym(",");
    ExprPtr e3 = parse_expr();
    expect_sym(")");
    const Token& optok = cur();
    auto rel = rel_from(cur());
    if (!rel || (*rel != RelOp::Eq && *rel != RelOp::Ne))
      fail(optok, "pair constraints support only = and !=");
    ++pos_;
    expect_kw("pair");
    expect_sym("(");
    ExprPtr e2 = parse_expr();
    expect_sym(",");
    ExprPtr e4 = parse_expr();
    expect_sym(")");
    ConstraintPtr both = conj({compare(RelOp::Eq, e1, e2), compare(RelOp::Eq, e3, e4)});
    return *rel == RelOp::Eq ? both : cnot(both);
  }

  ConstraintPtr parse_primitive() {
    ExprPtr a = parse_expr();
    const Token& optok = cur();
    auto rel = rel_from(cur());
    if (!rel) fail(optok, "expected comparison operator");
    ++pos_;
    ExprPtr b = parse_expr();
    return compare(*rel, std::move(a), std::move(b));
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (is_sym("+") || is_sym("-")) {
      BinOp op = is_sym("+") ? BinOp::Add : BinOp::Sub;
      ++pos_;
      e = binary(op, std::move(e), parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (is_sym("*") || is_sym("/") || is_kw("mod")) {
      BinOp op = is_sym("*") ? BinOp::Mul : (is_sym("/") ? BinOp::Div : BinOp::Mod);
      const Token& optok = cur();
      ++pos_;
      ExprPtr rhs = parse_factor();
      if ((op == BinOp::Div || op == BinOp::Mod) &&
          rhs->kind == Expr::Kind::Literal && rhs->literal == 0)
        fail(optok, "division by literal zero");
      e = binary(op, std::move(e), std::move(rhs));
    }
    return e;
  }

  ExprPtr parse_factor() {
    if (is_sym("-")) {
      ++pos_;
      ExprPtr inner = parse_factor();
      if (inner->kind == Expr::Kind::Literal) return lit(-inner->literal);
      return negate(std::move(inner));
    }
    if (cur().kind == Tok::Int) return lit(take().number);
    if (is_kw("abs")) {
      ++pos_;
      expect_sym("(");
      ExprPtr inner = parse_expr();
      expect_sym(")");
      return abs_of(std::move(inner));
    }
    if (is_kw("rei")) {
      ++pos_;
      expect_sym("(");
      ConstraintPtr c = parse_constraint();
      expect_sym(")");
      return reify(std::move(c));
    }
    if (is_sym("(")) {
      ++pos_;
      ExprPtr inner = parse_expr();
      expect_sym(")");
      return inner;
    }
    if (cur().kind == Tok::Ident && !kKeywords.count(cur().text)) {
      const Token& where = cur();
      std::string name = take().text;
      int offset = 0;
      if (is_sym("@")) {
        ++pos_;
        Value t = expect_int();
        if (t > 0)
          throw ParseError("future annotation @" + std::to_string(t) + " on '" + name + "'",
                           where.line, where.col);
        offset = static_cast<int>(t);
      }
      return fluent_ref(std::move(name), offset);
    }
    fail(cur(), "expected expression");
  }

  static bool timeless(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Literal: return true;
      case Expr::Kind::Fluent: return e.offset == 0;
      case Expr::Kind::Binary: return timeless(*e.lhs) && timeless(*e.rhs);
      case Expr::Kind::Negate:
      case Expr::Kind::Abs: return timeless(*e.lhs);
      case Expr::Kind::Reify: return timeless(*e.reified);
    }
    return true;
  }

  static bool timeless(const Constraint& c) {
    switch (c.kind) {
      case Constraint::Kind::True:
      case Constraint::Kind::False:
        return true;
      case Constraint::Kind::Compare:
        return timeless(*c.lhs) && timeless(*c.rhs);
      default:
        for (const auto& k : c.kids)
          if (!timeless(*k)) return false;
        return true;
    }
  }

  // Eff must be a conjunction of basic primitive constraints after pair
  // normalization: timeless fluent = expression.
  void check_effect_shape(const Constraint& c, const Token& where) {
    switch (c.kind) {
      case Constraint::Kind::True:
        return;
      case Constraint::Kind::Compare: {
        if (c.op != RelOp::Eq ||
            c.lhs->kind != Expr::Kind::Fluent || c.lhs->offset != 0) {
          // Synthesized help effects may carry arbitrary constraints; the
          // surface grammar for laws stays restrictive.
          throw ParseError(
              "effect must be a conjunction of basic constraints 'f = expression'",
              where.line, where.col);
        }
        return;
      }
      case Constraint::Kind::And:
        for (const auto& k : c.kids) check_effect_shape(*k, where);
        return;
      default:
        throw ParseError(
            "effect must be a conjunction of basic constraints 'f = expression'",
            where.line, where.col);
    }
  }

  // ---- post-parse validation --------------------------------------------

  void collect_fluent_names(const Expr& e, std::vector<const Expr*>& out) const {
    switch (e.kind) {
      case Expr::Kind::Fluent:
        out.push_back(&e);
        return;
      case Expr::Kind::Binary:
        collect_fluent_names(*e.lhs, out);
        collect_fluent_names(*e.rhs, out);
        return;
      case Expr::Kind::Negate:
      case Expr::Kind::Abs:
        collect_fluent_names(*e.lhs, out);
        return;
      case Expr::Kind::Reify:
        collect_fluent_names(*e.reified, out);
        return;
      case Expr::Kind::Literal:
        return;
    }
  }

  void collect_fluent_names(const Constraint& c, std::vector<const Expr*>& out) const {
    if (c.lhs) collect_fluent_names(*c.lhs, out);
    if (c.rhs) collect_fluent_names(*c.rhs, out);
    for (const auto& k : c.kids) collect_fluent_names(*k, out);
  }

  void check_names(const ConstraintPtr& c, const char* where) {
    if (!c) return;
    std::vector<const Expr*> refs;
    collect_fluent_names(*c, refs);
    for (const Expr* r : refs) {
      if (!theory_.declares_fluent(r->fluent))
        throw ParseError(std::string("unresolved fluent '") + r->fluent + "' in " + where,
                         1, 1);
    }
  }

  void validate() {
    if (!has_agent_decl_) throw ParseError("missing agent declaration", 1, 1);
    auto known = [&](const std::string& a) {
      return std::find(theory_.known_agents.begin(), theory_.known_agents.end(), a) !=
             theory_.known_agents.end();
    };
    for (auto& e : theory_.execs) {
      if (!theory_.find_action(e.action))
        throw ParseError("executable axiom for undeclared action '" + e.action + "'", 1, 1);
      check_names(e.cond, "executability condition");
    }
    for (auto& l : theory_.laws) {
      if (!theory_.find_action(l.action))
        throw ParseError("dynamic law for undeclared action '" + l.action + "'", 1, 1);
      check_names(l.eff, "effect");
      check_names(l.prec, "law precondition");
    }
    for (auto& a : theory_.actions) {
      bool has_exec = false;
      for (auto& e : theory_.execs)
        if (e.action == a.name) has_exec = true;
      if (!has_exec)
        throw ParseError("action '" + a.name + "' has no executable axiom", 1, 1);
      for (auto& oc : a.on_conflict) check_names(oc.provided, "on_conflict condition");
      for (auto& of : a.on_failure) {
        check_names(of.cond, "on_failure condition");
        check_names(of.add_goal, "add_goal constraint");
      }
    }
    for (auto& r : theory_.requests) {
      check_names(r.requested, "request");
      check_names(r.trigger, "request trigger");
      check_names(r.offer, "offer");
      if (r.target && !known(*r.target))
        throw ParseError("request target '" + *r.target + "' not in known_agents", 1, 1);
    }
    for (auto& h : theory_.helps) {
      check_names(h.cond, "help condition");
    }
    for (auto& g : theory_.goals) check_names(g, "goal");
    for (auto& i : theory_.inits) check_names(i, "initially");
    for (auto& g : theory_.globals) check_names(g.cond, "global constraint");
  }
};

}  // namespace

AgentTheory parse_theory(const std::string& text) {
  TheoryParser p(tokenize(text));
  return p.parse();
}

ConstraintPtr parse_constraint_text(const std::string& text, const AgentTheory& scope) {
  // Reuses the statement parser by wrapping the constraint in a goal axiom
  // of a scratch theory carrying the scope's fluent declarations.
  std::ostringstream os;
  os << "agent scratch.\n";
  for (const auto& f : scope.fluents)
    os << "fluent " << f.name << " valued " << f.domain.front() << ".."
       << f.domain.back() << ".\n";
  os << "goal " << text << ".\n";
  AgentTheory t = parse_theory(os.str());
  return t.goals.back();
}

namespace {
std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}
}  // namespace

std::string to_string(Strategy s) {
  return s == Strategy::Random ? "random" : "max_subset";
}

std::string to_string(ConflictMode m) {
  return m == ConflictMode::Supervisor ? "supervisor" : "negotiate";
}

RunConfig parse_settings(const std::string& text) {
  RunConfig cfg;
  bool have_horizon = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto split_list = [](const std::string& v) {
    std::vector<std::string> out;
    std::istringstream ls(v);
    std::string item;
    while (std::getline(ls, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '%') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno, 1);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto as_int = [&](long lo) {
      long v;
      try {
        v = std::stol(val);
      } catch (...) {
        throw ParseError("invalid integer for '" + key + "'", lineno, 1);
      }
      if (v < lo) throw ParseError("'" + key + "' must be >= " + std::to_string(lo), lineno, 1);
      return v;
    };
    auto as_bool = [&]() {
      if (val == "true" || val == "1") return true;
      if (val == "false" || val == "0") return false;
      throw ParseError("invalid boolean for '" + key + "'", lineno, 1);
    };
    if (key == "horizon") {
      cfg.horizon = static_cast<int>(as_int(1));
      have_horizon = true;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
    } else if (key == "strategy") {
      if (val == "random") cfg.strategy = Strategy::Random;
      else if (val == "max_subset") cfg.strategy = Strategy::MaxSubset;
      else throw ParseError("unknown strategy '" + val + "'", lineno, 1);
    } else if (key == "mode") {
      if (val == "supervisor") cfg.mode = ConflictMode::Supervisor;
      else if (val == "negotiate") cfg.mode = ConflictMode::Negotiate;
      else throw ParseError("unknown mode '" + val + "'", lineno, 1);
    } else if (key == "deterministic") {
      cfg.deterministic = as_bool();
    } else if (key == "theory") {
      cfg.theory_files.push_back(val);
    } else if (key == "max_replans") {
      cfg.max_replans_per_step = static_cast<int>(as_int(1));
    } else if (key == "max_actions_per_step") {
      cfg.max_actions_per_step = static_cast<int>(as_int(1));
    } else if (key == "node_budget") {
      cfg.node_budget = as_int(1);
    } else if (key == "trace") {
      cfg.trace_path = val;
    } else if (key == "render") {
      if (val == "grid") cfg.render.enabled = true;
      else if (val == "none") cfg.render.enabled = false;
      else throw ParseError("unknown render mode '" + val + "'", lineno, 1);
    } else if (key == "grid_ball") {
      cfg.render.ball = val;
    } else if (key == "grid_white") {
      cfg.render.white = split_list(val);
    } else if (key == "grid_black") {
      cfg.render.black = split_list(val);
    } else if (key == "grid_net") {
      cfg.render.net = static_cast<int>(as_int(0));
    } else {
      throw ParseError("unknown setting '" + key + "'", lineno, 1);
    }
  }
  if (!have_horizon) throw ParseError("missing required setting 'horizon'", lineno, 1);
  return cfg;
}

}  // namespace baac
