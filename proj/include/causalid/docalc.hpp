#pragma once

// Do-calculus: rule side conditions, proof objects, a proof checker and a
// bounded search for proofs that hold in every graph of a collection.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "causalid/dsep.hpp"
#include "causalid/error.hpp"
#include "causalid/expr.hpp"
#include "causalid/graph.hpp"
#include "causalid/query.hpp"

namespace causalid {

enum class Rule { R1, R2, R3, Marginalize, ChainRule, Condition };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::R1: return "R1";
    case Rule::R2: return "R2";
    case Rule::R3: return "R3";
    case Rule::Marginalize: return "Marginalize";
    case Rule::ChainRule: return "ChainRule";
    case Rule::Condition: return "Condition";
  }
  return "?";
}

inline std::optional<Rule> parse_rule(std::string_view s) {
  for (Rule r : {Rule::R1, Rule::R2, Rule::R3, Rule::Marginalize, Rule::ChainRule,
                 Rule::Condition})
    if (s == rule_name(r)) return r;
  return std::nullopt;
}

inline bool is_calculus_rule(Rule r) { return r == Rule::R1 || r == Rule::R2 || r == Rule::R3; }

/// Side condition of a do-calculus rule, as a d-separation of Y and X given
/// Z ∪ W in the appropriately mutilated graph.
///   R1: G_{W̄}          (insert/delete observations X)
///   R2: G_{W̄, X̲}       (exchange actions X and observations X)
///   R3: G_{W̄, X(Z)‾}   with X(Z) = X \ Anc_{G_W̄}(Z)  (insert/delete actions X)
inline bool rule_condition(const Admg& g, Rule rule, VarMask y, VarMask x, VarMask z, VarMask w) {
  if (!is_calculus_rule(rule)) throw Error("rule_condition applies to R1, R2 and R3 only");
  if ((y | x | z | w) & ~g.all()) throw UnknownVariable("set outside the graph");
  require_disjoint(g, {y, x, z, w});
  if (!x || !y) return true;
  const Admg gw = g.mutilate(w, 0);
  switch (rule) {
    case Rule::R1: return d_separated(gw, y, x, z | w);
    case Rule::R2: return d_separated(g.mutilate(w, x), y, x, z | w);
    case Rule::R3: {
      VarMask xz = x & ~gw.ancestors(z);
      return d_separated(g.mutilate(w | xz, 0), y, x, z | w);
    }
    default: return false;
  }
}

inline bool rule_condition(const Admg& g, Rule rule, const NodeSet& y, const NodeSet& x,
                           const NodeSet& z, const NodeSet& w) {
  return rule_condition(g, rule, g.mask(y), g.mask(x), g.mask(z), g.mask(w));
}

// ---------------------------------------------------------------------------
// Proof objects

struct ProofStep {
  Rule rule;
  NodeSet y, x, z, w;
  Expr result;
};

struct Proof {
  Expr initial;
  std::vector<ProofStep> steps;

  const Expr& final_expr() const { return steps.empty() ? initial : steps.back().result; }
};

inline std::string to_text(const Proof& p) {
  std::ostringstream out;
  out << "query: " << to_string(p.initial) << "\n";
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    out << "step " << i + 1 << ": " << rule_name(s.rule) << " Y=" << Admg::join(s.y)
        << " X=" << Admg::join(s.x) << " Z=" << Admg::join(s.z) << " W=" << Admg::join(s.w)
        << " => " << to_string(s.result) << "\n";
  }
  return out.str();
}

/// Parses the text produced by to_text(Proof).
inline Proof parse_proof(std::string_view text) {
  Proof p;
  bool have_query = false;
  std::size_t line_no = 0, expected_step = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto fail = [&](const std::string& msg, std::size_t col) -> void {
      throw ParseError(msg, line_no, col + 1);
    };
    if (!have_query) {
      if (line.compare(first, 6, "query:") != 0) fail("proof must start with 'query:'", first);
      auto rest = line.substr(first + 6);
      try {
        p.initial = detail::ExprParser(rest, line_no, first + 7).parse_all();
      } catch (const ParseError&) {
        throw;
      }
      have_query = true;
      if (end == text.size()) break;
      continue;
    }
    std::istringstream in(line);
    std::string word, number, rule;
    in >> word >> number >> rule;
    if (word != "step") fail("expected 'step'", first);
    if (number.empty() || number.back() != ':' ||
        number.substr(0, number.size() - 1) != std::to_string(expected_step))
      fail("expected step number " + std::to_string(expected_step) + ":", line.find(number));
    auto r = parse_rule(rule);
    if (!r) fail("unknown rule '" + rule + "'", line.find(rule));
    ProofStep step{*r, {}, {}, {}, {}, Expr::one()};
    auto arrow = line.find("=>");
    if (arrow == std::string::npos) fail("expected '=>'", line.size());
    std::string params = line.substr(0, arrow);
    for (auto [key, target] : {std::pair{"Y=", &step.y}, std::pair{"X=", &step.x},
                               std::pair{"Z=", &step.z}, std::pair{"W=", &step.w}}) {
      auto at = params.find(std::string(" ") + key);
      if (at == std::string::npos) fail(std::string("missing ") + key, arrow);
      auto open = at + 3;
      if (open >= params.size() || params[open] != '{') fail("expected '{'", open);
      auto close = params.find('}', open);
      if (close == std::string::npos) fail("expected '}'", params.size());
      std::string body = params.substr(open + 1, close - open - 1);
      std::stringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        auto a = item.find_first_not_of(' '), b = item.find_last_not_of(' ');
        if (a == std::string::npos) continue;
        item = item.substr(a, b - a + 1);
        if (!is_valid_name(item)) fail("invalid variable name '" + item + "'", open);
        target->insert(item);
      }
    }
    step.result = detail::ExprParser(std::string_view(line).substr(arrow + 2), line_no, arrow + 3)
                      .parse_all();
    p.steps.push_back(std::move(step));
    ++expected_step;
    if (end == text.size()) break;
  }
  if (!have_query) throw ParseError("empty proof", line_no, 1, {"query:"});
  return p;
}

// ---------------------------------------------------------------------------
// Moves at the symbol level

/// Concrete rewrite of one leaf.  `set` holds variable names.
enum class MoveKind {
  DoToObs,            // R2: do(S) -> S
  DeleteAction,       // R3
  DeleteObservation,  // R1
  Marginalize,        // P(A|·) -> sum_S P(A|·,S) P(S|·)
  Scope,              // P(A|·) -> sum_S P(A|·) P(S|·)
  Split,              // P(A|·) -> P(A\S|·,S) P(S|·)
  Join,               // P(A|·,S) -> P(A,S|·) / P(S|·)
  Chain,              // P(a1..ak|·) -> prod_i P(ai|·,a<i)
  ObsToDo,            // R2: S -> do(S)
  InsertAction,       // R3
  InsertObservation,  // R1
};

inline Rule rule_of(MoveKind k) {
  switch (k) {
    case MoveKind::DoToObs:
    case MoveKind::ObsToDo: return Rule::R2;
    case MoveKind::DeleteAction:
    case MoveKind::InsertAction: return Rule::R3;
    case MoveKind::DeleteObservation:
    case MoveKind::InsertObservation: return Rule::R1;
    case MoveKind::Marginalize:
    case MoveKind::Scope: return Rule::Marginalize;
    case MoveKind::Split:
    case MoveKind::Join: return Rule::Condition;
    case MoveKind::Chain: return Rule::ChainRule;
  }
  return Rule::R1;
}

namespace detail {

inline NodeSet vars_of(const std::vector<std::string>& syms) {
  NodeSet out;
  for (const auto& s : syms) out.insert(variable_of(s));
  return out;
}

inline std::vector<std::string> pick(const std::vector<std::string>& syms, const NodeSet& vars) {
  std::vector<std::string> out;
  for (const auto& s : syms)
    if (vars.count(variable_of(s))) out.push_back(s);
  return out;
}

inline std::vector<std::string> drop(const std::vector<std::string>& syms, const NodeSet& vars) {
  std::vector<std::string> out;
  for (const auto& s : syms)
    if (!vars.count(variable_of(s))) out.push_back(s);
  return out;
}

inline std::vector<std::string> concat(std::vector<std::string> a,
                                       const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline NodeSet set_union(NodeSet a, const NodeSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

inline NodeSet set_minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  for (const auto& v : a)
    if (!b.count(v)) out.insert(v);
  return out;
}

inline bool disjoint(const NodeSet& a, const NodeSet& b) {
  return std::none_of(a.begin(), a.end(), [&](const auto& v) { return b.count(v) > 0; });
}

// Bound symbols on the path to leaf k, outermost first.
inline bool bound_on_path(const Expr& e, std::size_t k, std::vector<std::string>& out) {
  if (e.is_term()) return k == 0;
  std::size_t before = out.size();
  if (e.kind == ExprKind::Sum) out.insert(out.end(), e.bound.begin(), e.bound.end());
  for (const auto& a : e.args) {
    auto n = leaf_count(a);
    if (k < n) return bound_on_path(a, k, out);
    k -= n;
  }
  out.resize(before);
  return false;
}

}  // namespace detail

/// Symbols in scope at leaf k, innermost binder first, then the query's
/// free symbols.
inline std::vector<std::string> scope_at(const Expr& e, std::size_t k,
                                         const std::set<std::string>& query_symbols) {
  std::vector<std::string> bound;
  detail::bound_on_path(e, k, bound);
  std::reverse(bound.begin(), bound.end());
  bound.insert(bound.end(), query_symbols.begin(), query_symbols.end());
  return bound;
}

namespace detail {

// Every way to pick one in-scope symbol for each variable of `vars`.
inline std::vector<std::vector<std::string>> scope_choices(const NodeSet& vars,
                                                           const std::vector<std::string>& scope,
                                                           bool innermost_only) {
  std::vector<std::vector<std::string>> out{{}};
  for (const auto& v : vars) {
    std::vector<std::string> options;
    for (const auto& s : scope)
      if (variable_of(s) == v && std::find(options.begin(), options.end(), s) == options.end())
        options.push_back(s);
    if (options.empty()) return {};
    if (innermost_only) options.resize(1);
    std::vector<std::vector<std::string>> next;
    for (const auto& partial : out)
      for (const auto& o : options) {
        auto p = partial;
        p.push_back(o);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  return out;
}

inline Expr term_expr(std::vector<std::string> a, std::vector<std::string> b,
                      std::vector<std::string> c) {
  return Expr::leaf(std::move(a), std::move(b), std::move(c));
}

}  // namespace detail

/// Results of applying a move to the leaf `t`.  `scope` lists in-scope
/// symbols (innermost first); `taken` lists symbols a fresh binder must avoid.
/// Insertion moves yield one result per choice of in-scope symbols unless
/// `innermost_only` is set.  An empty result means the move does not apply.
inline std::vector<Expr> apply_move(const Term& t, MoveKind kind, const NodeSet& s,
                                    const std::vector<std::string>& scope,
                                    const std::set<std::string>& taken,
                                    bool innermost_only = false) {
  using namespace detail;
  const NodeSet av = vars_of(t.outcome), bv = vars_of(t.action), cv = vars_of(t.condition);
  const NodeSet leaf = set_union(set_union(av, bv), cv);
  std::vector<Expr> out;
  auto fresh_for = [&](const NodeSet& vars) {
    std::set<std::string> used = taken;
    std::vector<std::string> syms;
    for (const auto& v : vars) {
      auto f = fresh_symbol(v, used);
      used.insert(f);
      syms.push_back(f);
    }
    return syms;
  };
  switch (kind) {
    case MoveKind::DoToObs:
      if (s.empty() || !std::includes(bv.begin(), bv.end(), s.begin(), s.end())) break;
      out.push_back(term_expr(t.outcome, drop(t.action, s), concat(t.condition, pick(t.action, s))));
      break;
    case MoveKind::ObsToDo:
      if (s.empty() || !std::includes(cv.begin(), cv.end(), s.begin(), s.end())) break;
      out.push_back(term_expr(t.outcome, concat(t.action, pick(t.condition, s)), drop(t.condition, s)));
      break;
    case MoveKind::DeleteAction:
      if (s.empty() || !std::includes(bv.begin(), bv.end(), s.begin(), s.end())) break;
      out.push_back(term_expr(t.outcome, drop(t.action, s), t.condition));
      break;
    case MoveKind::DeleteObservation:
      if (s.empty() || !std::includes(cv.begin(), cv.end(), s.begin(), s.end())) break;
      out.push_back(term_expr(t.outcome, t.action, drop(t.condition, s)));
      break;
    case MoveKind::InsertAction:
    case MoveKind::InsertObservation:
      if (s.empty() || !disjoint(s, leaf)) break;
      for (const auto& choice : scope_choices(s, scope, innermost_only)) {
        if (kind == MoveKind::InsertAction)
          out.push_back(term_expr(t.outcome, concat(t.action, choice), t.condition));
        else
          out.push_back(term_expr(t.outcome, t.action, concat(t.condition, choice)));
      }
      break;
    case MoveKind::Marginalize:
    case MoveKind::Scope: {
      if (s.empty() || !disjoint(s, leaf)) break;
      auto syms = fresh_for(s);
      Expr first = kind == MoveKind::Marginalize
                       ? term_expr(t.outcome, t.action, concat(t.condition, syms))
                       : term_expr(t.outcome, t.action, t.condition);
      Expr second = term_expr(syms, t.action, t.condition);
      out.push_back(Expr::sum(syms, Expr::product({std::move(first), std::move(second)})));
      break;
    }
    case MoveKind::Split:
      if (s.empty() || s.size() >= av.size() ||
          !std::includes(av.begin(), av.end(), s.begin(), s.end()))
        break;
      out.push_back(Expr::product(
          {term_expr(drop(t.outcome, s), t.action, concat(t.condition, pick(t.outcome, s))),
           term_expr(pick(t.outcome, s), t.action, t.condition)}));
      break;
    case MoveKind::Join:
      if (s.empty() || !std::includes(cv.begin(), cv.end(), s.begin(), s.end())) break;
      out.push_back(Expr::quotient(
          term_expr(concat(t.outcome, pick(t.condition, s)), t.action, drop(t.condition, s)),
          term_expr(pick(t.condition, s), t.action, drop(t.condition, s))));
      break;
    case MoveKind::Chain: {
      if (t.outcome.size() < 2 || !s.empty()) break;
      std::vector<std::string> outcome = t.outcome;
      std::sort(outcome.begin(), outcome.end());
      std::vector<Expr> factors;
      std::vector<std::string> earlier;
      for (const auto& a : outcome) {
        factors.push_back(term_expr({a}, t.action, concat(t.condition, earlier)));
        earlier.push_back(a);
      }
      out.push_back(Expr::product(std::move(factors)));
      break;
    }
  }
  return out;
}

/// Move kinds compatible with a step's parameters on a leaf, with the set the
/// move acts on.
inline std::vector<std::pair<MoveKind, NodeSet>> kinds_for_step(const ProofStep& step,
                                                                 const Term& t) {
  using namespace detail;
  const NodeSet av = vars_of(t.outcome), bv = vars_of(t.action), cv = vars_of(t.condition);
  const NodeSet leaf = set_union(set_union(av, bv), cv);
  const auto& [Y, X, Z, W] = std::tie(step.y, step.x, step.z, step.w);
  std::vector<std::pair<MoveKind, NodeSet>> out;
  switch (step.rule) {
    case Rule::R1:
      if (av == Y && bv == W && cv == set_union(Z, X) && disjoint(X, Z))
        out.emplace_back(MoveKind::DeleteObservation, X);
      if (av == Y && bv == W && cv == Z && disjoint(X, leaf))
        out.emplace_back(MoveKind::InsertObservation, X);
      break;
    case Rule::R2:
      if (av == Y && bv == set_union(W, X) && cv == Z && disjoint(X, W))
        out.emplace_back(MoveKind::DoToObs, X);
      if (av == Y && bv == W && cv == set_union(Z, X) && disjoint(X, Z))
        out.emplace_back(MoveKind::ObsToDo, X);
      break;
    case Rule::R3:
      if (av == Y && bv == set_union(W, X) && cv == Z && disjoint(X, W))
        out.emplace_back(MoveKind::DeleteAction, X);
      if (av == Y && bv == W && cv == Z && disjoint(X, leaf))
        out.emplace_back(MoveKind::InsertAction, X);
      break;
    case Rule::Marginalize:
      if (av == Y && bv == W && cv == Z && disjoint(X, leaf)) {
        out.emplace_back(MoveKind::Marginalize, X);
        out.emplace_back(MoveKind::Scope, X);
      }
      break;
    case Rule::Condition:
      if (av == set_union(Y, X) && disjoint(Y, X) && !Y.empty() && bv == W && cv == Z)
        out.emplace_back(MoveKind::Split, X);
      if (av == Y && bv == W && cv == set_union(Z, X) && disjoint(Z, X))
        out.emplace_back(MoveKind::Join, X);
      break;
    case Rule::ChainRule:
      if (av == Y && bv == W && cv == Z && X.empty()) out.emplace_back(MoveKind::Chain, X);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checking

struct CheckReport {
  bool ok = true;
  std::size_t step = 0;   // 1-based; 0 when the failure is not tied to a step
  std::size_t graph = 0;  // index into the graph list
  std::string condition;  // human-readable failing condition
};

inline std::string describe_condition(Rule rule, const NodeSet& y, const NodeSet& x,
                                      const NodeSet& z, const NodeSet& w) {
  std::string zw = Admg::join(detail::set_union(z, w));
  std::string where;
  switch (rule) {
    case Rule::R1: where = "G_{bar" + Admg::join(w) + "}"; break;
    case Rule::R2: where = "G_{bar" + Admg::join(w) + ", under" + Admg::join(x) + "}"; break;
    case Rule::R3: where = "G_{bar" + Admg::join(w) + ", bar X(Z)}"; break;
    default: break;
  }
  return Admg::join(y) + " _||_ " + Admg::join(x) + " | " + zw + " in " + where;
}

/// Replays every step.  Throws MalformedProof when a step's expression does
/// not follow from the previous one; returns the first failing side
/// condition otherwise.
inline CheckReport check_proof(const Proof& p, const std::vector<Admg>& graphs) {
  if (!p.initial.is_term()) throw MalformedProof("a proof must start from a single query term");
  const auto query_symbols = free_symbols(p.initial);
  Expr current = p.initial;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& step = p.steps[i];
    const Expr target = canonicalize(step.result);
    const auto taken = [&] {
      auto t = all_symbols(current);
      t.insert(query_symbols.begin(), query_symbols.end());
      return t;
    }();
    bool matched = false;
    for (std::size_t k = 0; k < leaf_count(current) && !matched; ++k) {
      const Term& t = leaf_at(current, k);
      auto scope = scope_at(current, k, query_symbols);
      for (const auto& [kind, set] : kinds_for_step(step, t)) {
        for (const auto& cand : apply_move(t, kind, set, scope, taken)) {
          if (canonicalize(replace_leaf(current, k, cand)) == target) {
            matched = true;
            break;
          }
        }
        if (matched) break;
      }
    }
    if (!matched)
      throw MalformedProof("step " + std::to_string(i + 1) + " (" + rule_name(step.rule) +
                           ") does not follow from the previous expression");
    if (is_calculus_rule(step.rule)) {
      for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        if (!rule_condition(graphs[gi], step.rule, step.y, step.x, step.z, step.w))
          return {false, i + 1, gi,
                  describe_condition(step.rule, step.y, step.x, step.z, step.w)};
      }
    }
    current = step.result;
  }
  if (has_action(current))
    return {false, p.steps.size(), 0, "final expression still contains do()"};
  return {};
}

// ---------------------------------------------------------------------------
// Plans: proofs at the level of variable sets

/// State of one leaf: outcome, actions, observations and the variables that
/// have a symbol in scope.
struct LeafState {
  VarMask a = 0, b = 0, c = 0, f = 0;
  auto key() const { return std::array<VarMask, 4>{a, b, c, f}; }
  friend bool operator==(const LeafState&, const LeafState&) = default;
};

struct Move {
  MoveKind kind;
  VarMask set = 0;
};

/// Derivation tree for one leaf; a node without a move is a do-free leaf.
struct PlanNode {
  std::optional<Move> move;
  std::vector<PlanNode> children;  // one per leaf of the move's result, in order
};

/// Leaves produced by a move, or nullopt when it does not apply.
inline std::optional<std::vector<LeafState>> successors(const LeafState& s, const Move& m) {
  const VarMask leaf = s.a | s.b | s.c;
  const VarMask x = m.set;
  switch (m.kind) {
    case MoveKind::DoToObs:
      if (!x || (x & ~s.b)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b & ~x, s.c | x, s.f}};
    case MoveKind::DeleteAction:
      if (!x || (x & ~s.b)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b & ~x, s.c, s.f}};
    case MoveKind::DeleteObservation:
      if (!x || (x & ~s.c)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b, s.c & ~x, s.f}};
    case MoveKind::Marginalize:
      if (!x || (x & leaf)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b, s.c | x, s.f | x}, LeafState{x, s.b, s.c, s.f | x}};
    case MoveKind::Scope:
      if (!x || (x & leaf)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b, s.c, s.f | x}, LeafState{x, s.b, s.c, s.f | x}};
    case MoveKind::Split:
      if (!x || (x & ~s.a) || x == s.a) return std::nullopt;
      return std::vector{LeafState{s.a & ~x, s.b, s.c | x, s.f}, LeafState{x, s.b, s.c, s.f}};
    case MoveKind::Join:
      if (!x || (x & ~s.c)) return std::nullopt;
      return std::vector{LeafState{s.a | x, s.b, s.c & ~x, s.f},
                         LeafState{x, s.b, s.c & ~x, s.f}};
    case MoveKind::Chain: {
      if (popcount(s.a) < 2 || x) return std::nullopt;
      std::vector<LeafState> out;
      VarMask earlier = 0;
      for_each_bit(s.a, [&](std::size_t i) {
        out.push_back(LeafState{bit(i), s.b, s.c | earlier, s.f});
        earlier |= bit(i);
      });
      return out;
    }
    case MoveKind::ObsToDo:
      if (!x || (x & ~s.c)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b | x, s.c & ~x, s.f}};
    case MoveKind::InsertAction:
      if (!x || (x & leaf) || (x & ~s.f)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b | x, s.c, s.f}};
    case MoveKind::InsertObservation:
      if (!x || (x & leaf) || (x & ~s.f)) return std::nullopt;
      return std::vector{LeafState{s.a, s.b, s.c | x, s.f}};
  }
  return std::nullopt;
}

/// Rule parameters (Y, X, Z, W) recorded for a move.
inline std::array<VarMask, 4> step_parameters(const LeafState& s, const Move& m) {
  const VarMask x = m.set;
  switch (m.kind) {
    case MoveKind::DoToObs:
    case MoveKind::DeleteAction: return {s.a, x, s.c, s.b & ~x};
    case MoveKind::DeleteObservation:
    case MoveKind::ObsToDo: return {s.a, x, s.c & ~x, s.b};
    case MoveKind::Split: return {s.a & ~x, x, s.c, s.b};
    case MoveKind::Join: return {s.a, x, s.c & ~x, s.b};
    case MoveKind::Chain: return {s.a, 0, s.c, s.b};
    default: return {s.a, x, s.c, s.b};
  }
}

/// Turns a plan into a proof of `q`.  `names` maps bit positions to variable
/// names (the sorted node list of the collection).
inline Proof emit_proof(const Query& q, const PlanNode& plan,
                        const std::vector<std::string>& names) {
  auto to_mask = [&](const NodeSet& s) {
    VarMask m = 0;
    for (const auto& v : s) {
      auto it = std::find(names.begin(), names.end(), v);
      if (it == names.end()) throw UnknownVariable("unknown variable '" + v + "'");
      m |= bit(static_cast<std::size_t>(it - names.begin()));
    }
    return m;
  };
  auto to_names = [&](VarMask m) {
    NodeSet out;
    for_each_bit(m, [&](std::size_t i) { out.insert(names[i]); });
    return out;
  };
  Proof proof;
  proof.initial = q.expr();
  const auto query_symbols = free_symbols(proof.initial);
  Expr current = proof.initial;
  LeafState root{to_mask(q.y), to_mask(q.x), to_mask(q.z), to_mask(q.variables())};

  auto emit = [&](auto&& self, const PlanNode& node, const LeafState& state,
                  std::size_t k) -> void {
    if (!node.move) return;
    const Move& move = *node.move;
    const Term t = leaf_at(current, k);
    auto taken = all_symbols(current);
    taken.insert(query_symbols.begin(), query_symbols.end());
    auto results = apply_move(t, move.kind, to_names(move.set),
                              scope_at(current, k, query_symbols), taken, true);
    if (results.empty()) throw Error("plan move does not apply to " + to_string(t));
    auto kids = successors(state, move);
    if (!kids || kids->size() != node.children.size())
      throw Error("plan does not match its move");
    auto [py, px, pz, pw] = step_parameters(state, move);
    current = replace_leaf(current, k, results.front());
    proof.steps.push_back({rule_of(move.kind), to_names(py), to_names(px), to_names(pz),
                           to_names(pw), current});
    // Later children first so earlier leaf indices stay valid.
    for (std::size_t i = node.children.size(); i-- > 0;)
      self(self, node.children[i], (*kids)[i], k + i);
  };
  emit(emit, plan, root, 0);
  return proof;
}

// ---------------------------------------------------------------------------
// Search

struct SearchBudget {
  int max_depth = 6;
  std::size_t max_expansions = 2'000'000;
};

struct SearchResult {
  std::optional<Proof> proof;
  std::string reason;           // why no proof was returned
  std::size_t expansions = 0;
};

inline void validate_budget(const SearchBudget& b) {
  if (b.max_depth < 0 || b.max_depth > 64)
    throw InvalidBudget("search depth must lie in [0, 64], got " + std::to_string(b.max_depth));
  if (b.max_expansions == 0) throw InvalidBudget("expansion budget must be positive");
}

/// Throws InvalidCollection unless all graphs share one node set.
inline void require_common_nodes(const std::vector<Admg>& graphs) {
  if (graphs.empty()) throw InvalidCollection("a collection needs at least one graph");
  for (const auto& g : graphs)
    if (g.sorted_nodes() != graphs.front().sorted_nodes())
      throw InvalidCollection("graphs of a collection must share one node set");
}

namespace detail {

class ProofSearch {
 public:
  ProofSearch(const std::vector<Admg>& graphs, const SearchBudget& budget)
      : graphs_(graphs), budget_(budget), all_(graphs.front().all()) {}

  std::optional<PlanNode> run(const LeafState& root) {
    for (int d = 0; d <= budget_.max_depth; ++d) {
      if (solve(root, d)) return build(root);
      if (exhausted_) return std::nullopt;
    }
    return std::nullopt;
  }

  std::size_t expansions() const { return expansions_; }
  bool exhausted() const { return exhausted_; }

 private:
  struct Entry {
    int failed_below = -1;  // no plan of depth <= failed_below exists
    bool solved = false;
    Move move{MoveKind::DoToObs, 0};
    std::vector<LeafState> kids;
  };

  bool holds(Rule r, const std::array<VarMask, 4>& p) {
    auto key = std::array<VarMask, 5>{static_cast<VarMask>(r), p[0], p[1], p[2], p[3]};
    auto it = conditions_.find(key);
    if (it != conditions_.end()) return it->second;
    bool ok = std::all_of(graphs_.begin(), graphs_.end(), [&](const Admg& g) {
      return rule_condition(g, r, p[0], p[1], p[2], p[3]);
    });
    conditions_.emplace(key, ok);
    return ok;
  }

  // Candidate moves in tie-breaking order.
  std::vector<Move> moves(const LeafState& s) const {
    std::vector<Move> out;
    const VarMask leaf = s.a | s.b | s.c;
    auto subsets = [](VarMask m, bool proper) {
      std::vector<VarMask> subs;
      for (VarMask x = m; x; x = (x - 1) & m)
        if (!proper || x != m) subs.push_back(x);
      std::stable_sort(subs.begin(), subs.end(), [](VarMask a, VarMask b) {
        return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
      });
      return subs;
    };
    auto singles = [](VarMask m) {
      std::vector<VarMask> out;
      for_each_bit(m, [&](std::size_t i) { out.push_back(bit(i)); });
      return out;
    };
    for (auto x : subsets(s.b, false)) out.push_back({MoveKind::DoToObs, x});
    for (auto x : subsets(s.b, false)) out.push_back({MoveKind::DeleteAction, x});
    for (auto x : subsets(s.c, false)) out.push_back({MoveKind::DeleteObservation, x});
    for (auto x : singles(all_ & ~leaf)) out.push_back({MoveKind::Marginalize, x});
    for (auto x : subsets(s.a, true)) out.push_back({MoveKind::Split, x});
    for (auto x : subsets(s.c, false)) out.push_back({MoveKind::Join, x});
    if (popcount(s.a) >= 3) out.push_back({MoveKind::Chain, 0});
    for (auto x : subsets(s.c, false)) out.push_back({MoveKind::ObsToDo, x});
    for (auto x : singles(s.f & ~leaf)) out.push_back({MoveKind::InsertAction, x});
    for (auto x : singles(s.f & ~leaf)) out.push_back({MoveKind::InsertObservation, x});
    for (auto x : singles(all_ & ~leaf & ~s.f)) out.push_back({MoveKind::Scope, x});
    return out;
  }

  bool solve(const LeafState& s, int depth) {
    auto& e = memo_[s.key()];
    if (e.solved) return true;
    if (s.b == 0) {
      e.solved = true;
      e.kids.clear();
      return true;
    }
    if (depth <= e.failed_below) return false;
    for (int d = e.failed_below + 1; d <= depth; ++d) {
      if (d == 0) {
        memo_[s.key()].failed_below = 0;
        continue;
      }
      for (const auto& m : moves(s)) {
        if (++expansions_ > budget_.max_expansions) {
          exhausted_ = true;
          return false;
        }
        auto kids = successors(s, m);
        if (!kids) continue;
        Rule r = rule_of(m.kind);
        if (is_calculus_rule(r) && !holds(r, step_parameters(s, m))) continue;
        bool ok = true;
        for (const auto& k : *kids)
          if (!solve(k, d - 1)) {
            ok = false;
            break;
          }
        if (exhausted_) return false;
        if (ok) {
          auto& entry = memo_[s.key()];
          entry.solved = true;
          entry.move = m;
          entry.kids = *kids;
          return true;
        }
      }
      memo_[s.key()].failed_below = d;
    }
    return false;
  }

  PlanNode build(const LeafState& s) const {
    if (s.b == 0) return PlanNode{};
    const auto& e = memo_.at(s.key());
    PlanNode node{e.move, {}};
    for (const auto& k : e.kids) node.children.push_back(build(k));
    return node;
  }

  const std::vector<Admg>& graphs_;
  SearchBudget budget_;
  VarMask all_;
  std::map<std::array<VarMask, 4>, Entry> memo_;
  std::map<std::array<VarMask, 5>, bool> conditions_;
  std::size_t expansions_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

/// Iterative-deepening AND-OR search over leaf states.  Depth bounds the
/// height of the derivation tree: rewriting one leaf into several costs one
/// level, and sibling leaves are derived independently.  A returned proof has
/// already passed check_proof on every graph.
inline SearchResult search_common_proof(const std::vector<Admg>& graphs, const Query& q,
                                        const SearchBudget& budget = {}) {
  validate_budget(budget);
  require_common_nodes(graphs);
  const Admg& g0 = graphs.front();
  auto [my, mx, mz] = q.masks(g0);
  SearchResult result;
  if (!mx) {
    Proof p;
    p.initial = q.expr();
    result.proof = p;
    return result;
  }
  detail::ProofSearch search(graphs, budget);
  LeafState root{my, mx, mz, my | mx | mz};
  auto plan = search.run(root);
  result.expansions = search.expansions();
  if (!plan) {
    result.reason = search.exhausted() ? "expansion budget exhausted"
                                       : "no proof within depth " + std::to_string(budget.max_depth);
    return result;
  }
  Proof proof = emit_proof(q, *plan, g0.sorted_nodes());
  auto report = check_proof(proof, graphs);
  if (!report.ok)
    throw InternalError("emitted proof fails at step " + std::to_string(report.step) +
                ": " + report.condition);
  result.proof = std::move(proof);
  return result;
}

}  // namespace causalid
