#pragma once

// Symbolic probability expressions shared by the do-calculus engine and the
// estimand evaluator.
//
// A leaf is P(A | do(B), C).  Each entry of A, B and C is a value symbol: a
// variable name optionally followed by primes.  `X` and `X'` both refer to
// variable X but carry independent values, which is how a sum over X can
// coexist with a free query value x (as in the frontdoor formula).

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalid/error.hpp"
#include "causalid/graph.hpp"

namespace causalid {

/// Variable a value symbol refers to (the symbol without trailing primes).
inline std::string variable_of(std::string_view symbol) {
  auto end = symbol.find_last_not_of('\'');
  return std::string(symbol.substr(0, end == std::string_view::npos ? 0 : end + 1));
}

inline std::string primed(const std::string& var, std::size_t primes) {
  return var + std::string(primes, '\'');
}

struct Term {
  std::vector<std::string> outcome;
  std::vector<std::string> action;
  std::vector<std::string> condition;

  void normalize() {
    std::sort(outcome.begin(), outcome.end());
    std::sort(action.begin(), action.end());
    std::sort(condition.begin(), condition.end());
  }
  bool do_free() const { return action.empty(); }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class ExprKind { Term, Sum, Product, Quotient };

/// Expression tree with value semantics.  An empty product denotes 1.
struct Expr {
  ExprKind kind = ExprKind::Product;
  Term term;
  std::vector<std::string> bound;  // Sum only
  std::vector<Expr> args;          // Sum: {body}; Quotient: {num, den}

  static Expr leaf(Term t) {
    t.normalize();
    Expr e;
    e.kind = ExprKind::Term;
    e.term = std::move(t);
    return e;
  }
  static Expr leaf(std::vector<std::string> outcome,
                   std::vector<std::string> action = {},
                   std::vector<std::string> condition = {}) {
    return leaf(Term{std::move(outcome), std::move(action), std::move(condition)});
  }
  static Expr one() { return Expr{}; }
  static Expr sum(std::vector<std::string> symbols, Expr body) {
    if (symbols.empty()) return body;
    Expr e;
    e.kind = ExprKind::Sum;
    e.bound = std::move(symbols);
    e.args.push_back(std::move(body));
    return e;
  }
  static Expr product(std::vector<Expr> factors) {
    if (factors.size() == 1) return std::move(factors.front());
    Expr e;
    e.kind = ExprKind::Product;
    e.args = std::move(factors);
    return e;
  }
  static Expr quotient(Expr num, Expr den) {
    Expr e;
    e.kind = ExprKind::Quotient;
    e.args.push_back(std::move(num));
    e.args.push_back(std::move(den));
    return e;
  }

  bool is_term() const { return kind == ExprKind::Term; }
  bool is_one() const { return kind == ExprKind::Product && args.empty(); }
  const Expr& body() const { return args.at(0); }

  friend bool operator==(const Expr&, const Expr&) = default;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void join_into(std::string& out, const std::vector<std::string>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  std::string out = "P(";
  detail::join_into(out, t.outcome);
  if (!t.action.empty() || !t.condition.empty()) {
    out += '|';
    if (!t.action.empty()) {
      out += "do(";
      detail::join_into(out, t.action);
      out += ')';
      if (!t.condition.empty()) out += ',';
    }
    detail::join_into(out, t.condition);
  }
  return out + ')';
}

inline std::string to_string(const Expr& e);

namespace detail {

// Leaves, sums and the constant 1 delimit themselves; everything else is
// wrapped when used as an operand.
inline std::string operand(const Expr& e) {
  if (e.is_term() || e.kind == ExprKind::Sum || e.is_one()) return to_string(e);
  return "(" + to_string(e) + ")";
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Term: return to_string(e.term);
    case ExprKind::Sum: {
      std::string out = "sum_{";
      detail::join_into(out, e.bound);
      return out + "} (" + to_string(e.body()) + ")";
    }
    case ExprKind::Product: {
      if (e.args.empty()) return "1";
      std::string out;
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += '*';
        out += detail::operand(e.args[i]);
      }
      return out;
    }
    case ExprKind::Quotient:
      return detail::operand(e.args[0]) + "/" + detail::operand(e.args[1]);
  }
  return {};
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) {
  return os << to_string(e);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text, std::size_t line = 1, std::size_t column = 1)
      : text_(text), line_(line), column0_(column) {}

  Expr parse_all() {
    Expr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input", {"*", "/", "end of expression"});
    return e;
  }

  Term parse_term_only() {
    skip_ws();
    Term t = term();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected input after term", {"end of term"});
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected = {}) {
    throw ParseError(msg, line_, column0_ + pos_, std::move(expected));
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'", {std::string(1, c)});
  }
  bool peek_word(std::string_view w) {
    skip_ws();
    return text_.substr(pos_, w.size()) == w;
  }

  std::string symbol() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected a variable name", {"identifier"});
    while (pos_ < text_.size() && text_[pos_] == '\'') ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<std::string> symbol_list(char close) {
    std::vector<std::string> out;
    if (peek(close)) return out;
    out.push_back(symbol());
    while (accept(',')) out.push_back(symbol());
    return out;
  }

  Term term() {
    skip_ws();
    if (!peek_word("P")) fail("expected a probability term", {"P("});
    ++pos_;
    expect('(');
    Term t;
    if (!peek('|') && !peek(')')) {
      t.outcome.push_back(symbol());
      while (accept(',')) t.outcome.push_back(symbol());
    }
    if (accept('|')) {
      do {
        if (peek_word("do") && lookahead_do()) {
          pos_ += 2;
          expect('(');
          auto syms = symbol_list(')');
          t.action.insert(t.action.end(), syms.begin(), syms.end());
          expect(')');
        } else {
          t.condition.push_back(symbol());
        }
      } while (accept(','));
    }
    expect(')');
    if (t.outcome.empty()) fail("probability term needs an outcome", {"identifier"});
    t.normalize();
    return t;
  }

  bool lookahead_do() {
    std::size_t p = pos_ + 2;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == '(';
  }

  Expr factor() {
    skip_ws();
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    if (peek_word("sum_{")) {
      pos_ += 5;
      auto syms = symbol_list('}');
      if (syms.empty()) fail("sum needs at least one bound symbol", {"identifier"});
      expect('}');
      Expr body = factor();
      return Expr::sum(std::move(syms), std::move(body));
    }
    if (peek('1')) {
      ++pos_;
      return Expr::one();
    }
    if (peek_word("P")) return Expr::leaf(term());
    fail("expected a factor", {"P(", "sum_{", "(", "1"});
  }

  Expr expression() {
    Expr acc = factor();
    bool acc_is_chain = false;  // acc is a product built at this level
    for (;;) {
      if (accept('*')) {
        Expr f = factor();
        if (!acc_is_chain) {
          acc = Expr::product({std::move(acc), std::move(f)});
          acc_is_chain = true;
        } else {
          acc.args.push_back(std::move(f));
        }
      } else if (accept('/')) {
        acc = Expr::quotient(std::move(acc), factor());
        acc_is_chain = false;
      } else {
        return acc;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column0_;
};

}  // namespace detail

/// Parses the expression grammar produced by to_string().
inline Expr parse_expr(std::string_view text) {
  return detail::ExprParser(text).parse_all();
}

inline Term parse_term(std::string_view text) {
  return detail::ExprParser(text).parse_term_only();
}

// ---------------------------------------------------------------------------
// Structural queries

namespace detail {

inline void collect_free(const Expr& e, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Term:
      for (const auto* list : {&e.term.outcome, &e.term.action, &e.term.condition})
        for (const auto& s : *list)
          if (!bound.count(s)) out.insert(s);
      return;
    case ExprKind::Sum: {
      std::vector<std::string> added;
      for (const auto& b : e.bound)
        if (bound.insert(b).second) added.push_back(b);
      collect_free(e.body(), bound, out);
      for (const auto& b : added) bound.erase(b);
      return;
    }
    default:
      for (const auto& a : e.args) collect_free(a, bound, out);
  }
}

inline void collect_all(const Expr& e, std::set<std::string>& out) {
  if (e.is_term()) {
    for (const auto* list : {&e.term.outcome, &e.term.action, &e.term.condition})
      out.insert(list->begin(), list->end());
    return;
  }
  out.insert(e.bound.begin(), e.bound.end());
  for (const auto& a : e.args) collect_all(a, out);
}

}  // namespace detail

inline std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> bound, out;
  detail::collect_free(e, bound, out);
  return out;
}

/// Every symbol mentioned, bound or free.
inline std::set<std::string> all_symbols(const Expr& e) {
  std::set<std::string> out;
  detail::collect_all(e, out);
  return out;
}

/// Variables referenced anywhere in the expression.
inline NodeSet variables(const Expr& e) {
  NodeSet out;
  for (const auto& s : all_symbols(e)) out.insert(variable_of(s));
  return out;
}

inline bool has_action(const Expr& e) {
  if (e.is_term()) return !e.term.action.empty();
  return std::any_of(e.args.begin(), e.args.end(), has_action);
}

inline std::size_t leaf_count(const Expr& e) {
  if (e.is_term()) return 1;
  std::size_t n = 0;
  for (const auto& a : e.args) n += leaf_count(a);
  return n;
}

/// k-th leaf in depth-first, left-to-right order.
inline const Term& leaf_at(const Expr& e, std::size_t k) {
  if (e.is_term()) {
    if (k == 0) return e.term;
  } else {
    for (const auto& a : e.args) {
      auto n = leaf_count(a);
      if (k < n) return leaf_at(a, k);
      k -= n;
    }
  }
  throw Error("leaf index out of range");
}

inline Expr replace_leaf(const Expr& e, std::size_t k, const Expr& with) {
  if (e.is_term()) {
    if (k == 0) return with;
    throw Error("leaf index out of range");
  }
  Expr out = e;
  for (auto& a : out.args) {
    auto n = leaf_count(a);
    if (k < n) {
      a = replace_leaf(a, k, with);
      return out;
    }
    k -= n;
  }
  throw Error("leaf index out of range");
}

/// Renames free occurrences of `from` to `to`.
inline Expr rename_symbol(const Expr& e, const std::string& from, const std::string& to) {
  Expr out = e;
  if (e.is_term()) {
    for (auto* list : {&out.term.outcome, &out.term.action, &out.term.condition})
      std::replace(list->begin(), list->end(), from, to);
    out.term.normalize();
    return out;
  }
  if (e.kind == ExprKind::Sum &&
      std::find(e.bound.begin(), e.bound.end(), from) != e.bound.end())
    return out;
  for (auto& a : out.args) a = rename_symbol(a, from, to);
  return out;
}

/// First of `var`, `var'`, `var''`, ... not contained in `taken`.
inline std::string fresh_symbol(const std::string& var, const std::set<std::string>& taken) {
  for (std::size_t primes = 0;; ++primes) {
    auto s = primed(var, primes);
    if (!taken.count(s)) return s;
  }
}

/// Throws Error when a leaf mentions one variable twice or a sum binds a
/// symbol that never occurs beneath it.
inline void check_well_formed(const Expr& e) {
  if (e.is_term()) {
    std::set<std::string> vars;
    for (const auto* list : {&e.term.outcome, &e.term.action, &e.term.condition})
      for (const auto& s : *list)
        if (!vars.insert(variable_of(s)).second)
          throw Error("variable " + variable_of(s) + " occurs twice in " + to_string(e.term));
    if (e.term.outcome.empty()) throw Error("term without outcome");
    return;
  }
  if (e.kind == ExprKind::Sum) {
    auto inner = free_symbols(e.body());
    std::set<std::string> seen;
    for (const auto& b : e.bound) {
      if (!seen.insert(b).second) throw Error("symbol " + b + " bound twice");
      if (!inner.count(b)) throw Error("sum binds " + b + " which does not occur beneath it");
    }
  }
  if (e.kind == ExprKind::Quotient && e.args.size() != 2) throw Error("malformed quotient");
  for (const auto& a : e.args) check_well_formed(a);
}

// ---------------------------------------------------------------------------
// Canonical form

namespace detail {

inline std::vector<Expr> flat_factors(const Expr& e) {
  if (e.kind == ExprKind::Product) return e.args;
  return {e};
}

// Flattens products, merges nested sums and pulls sums out of products.
inline Expr normalize_structure(const Expr& in) {
  if (in.is_term()) return in;
  Expr e = in;
  for (auto& a : e.args) a = normalize_structure(a);

  if (e.kind == ExprKind::Sum) {
    if (e.body().kind == ExprKind::Sum) {
      Expr inner = e.body();
      std::vector<std::string> bound = e.bound;
      for (const auto& b : inner.bound) {
        if (std::find(bound.begin(), bound.end(), b) != bound.end()) {
          // Inner binder shadows the outer one; keep the nesting.
          return e;
        }
        bound.push_back(b);
      }
      return Expr::sum(std::move(bound), inner.body());
    }
    return e;
  }

  if (e.kind == ExprKind::Product) {
    std::vector<Expr> factors;
    for (const auto& a : e.args)
      for (auto& f : flat_factors(a))
        if (!f.is_one()) factors.push_back(std::move(f));
    // Pull the first sum out, renaming its binders away from the other factors.
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (factors[i].kind != ExprKind::Sum) continue;
      Expr s = factors[i];
      std::set<std::string> others_free, taken;
      for (std::size_t j = 0; j < factors.size(); ++j) {
        if (j == i) continue;
        auto fs = free_symbols(factors[j]);
        others_free.insert(fs.begin(), fs.end());
        auto as = all_symbols(factors[j]);
        taken.insert(as.begin(), as.end());
      }
      auto mine = all_symbols(s);
      taken.insert(mine.begin(), mine.end());
      Expr body = s.body();
      std::vector<std::string> bound = s.bound;
      for (auto& b : bound) {
        if (!others_free.count(b)) continue;
        auto fresh = fresh_symbol(variable_of(b), taken);
        taken.insert(fresh);
        body = rename_symbol(body, b, fresh);
        b = fresh;
      }
      std::vector<Expr> rest;
      for (std::size_t j = 0; j < factors.size(); ++j)
        if (j != i) rest.push_back(factors[j]);
      rest.insert(rest.begin(), body);
      return normalize_structure(Expr::sum(std::move(bound), Expr::product(std::move(rest))));
    }
    if (factors.empty()) return Expr::one();
    return Expr::product(std::move(factors));
  }

  // Quotient: x / 1 = x.
  if (e.args[1].is_one()) return e.args[0];
  return e;
}

// Renames bound symbols to the first free slot among var, var', var'', ...
inline Expr rename_binders(const Expr& in, std::set<std::string>& scope) {
  if (in.is_term()) return in;
  Expr e = in;
  if (e.kind == ExprKind::Sum) {
    Expr body = e.body();
    auto body_free = free_symbols(body);
    std::set<std::string> forbidden = scope;
    for (const auto& s : body_free)
      if (std::find(e.bound.begin(), e.bound.end(), s) == e.bound.end()) forbidden.insert(s);
    std::vector<std::size_t> order(e.bound.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return variable_of(e.bound[a]) < variable_of(e.bound[b]);
    });
    // Two-phase rename through placeholders so swaps cannot collide.
    std::vector<std::string> chosen(e.bound.size());
    for (auto i : order) {
      chosen[i] = fresh_symbol(variable_of(e.bound[i]), forbidden);
      forbidden.insert(chosen[i]);
    }
    for (std::size_t i = 0; i < e.bound.size(); ++i)
      body = rename_symbol(body, e.bound[i], "\x01" + std::to_string(i));
    for (std::size_t i = 0; i < e.bound.size(); ++i)
      body = rename_symbol(body, "\x01" + std::to_string(i), chosen[i]);
    std::vector<std::string> added;
    for (const auto& c : chosen)
      if (scope.insert(c).second) added.push_back(c);
    body = rename_binders(body, scope);
    for (const auto& c : added) scope.erase(c);
    std::sort(chosen.begin(), chosen.end());
    return Expr::sum(std::move(chosen), std::move(body));
  }
  for (auto& a : e.args) a = rename_binders(a, scope);
  return e;
}

// Sorts product factors and cancels factors shared by numerator and
// denominator.
inline Expr sort_and_cancel(const Expr& in) {
  if (in.is_term()) return in;
  Expr e = in;
  for (auto& a : e.args) a = sort_and_cancel(a);
  if (e.kind == ExprKind::Product) {
    std::stable_sort(e.args.begin(), e.args.end(), [](const Expr& a, const Expr& b) {
      return to_string(a) < to_string(b);
    });
    return e;
  }
  if (e.kind == ExprKind::Quotient) {
    auto num = flat_factors(e.args[0]);
    auto den = flat_factors(e.args[1]);
    for (auto it = num.begin(); it != num.end();) {
      auto hit = std::find(den.begin(), den.end(), *it);
      if (hit != den.end() && !it->is_one()) {
        den.erase(hit);
        it = num.erase(it);
      } else {
        ++it;
      }
    }
    Expr n = num.empty() ? Expr::one() : Expr::product(std::move(num));
    if (den.empty()) return n;
    return Expr::quotient(std::move(n), Expr::product(std::move(den)));
  }
  return e;
}

}  // namespace detail

/// Deterministic normal form: flattened and sorted products, sums pulled to
/// the front of products and merged, bound symbols renamed canonically,
/// syntactically equal quotient factors cancelled.  Idempotent.
inline Expr canonicalize(const Expr& e) {
  Expr cur = e;
  for (int round = 0; round < 16; ++round) {
    Expr next = detail::normalize_structure(cur);
    auto scope = free_symbols(next);
    next = detail::rename_binders(next, scope);
    next = detail::sort_and_cancel(next);
    next = detail::normalize_structure(next);
    if (next == cur) return next;
    cur = std::move(next);
  }
  return cur;
}

inline bool canonically_equal(const Expr& a, const Expr& b) {
  return canonicalize(a) == canonicalize(b);
}

}  // namespace causalid
