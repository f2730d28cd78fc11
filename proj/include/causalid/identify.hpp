#pragma once

// Complete single-graph identification (recursive c-component algorithm with
// hedge detection).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "causalid/expr.hpp"
#include "causalid/graph.hpp"
#include "causalid/query.hpp"

namespace causalid {

/// Maximal bidirected-connected blocks of the subgraph induced on `s`,
/// ordered by their smallest member.
inline std::vector<VarMask> c_components(const Admg& g, VarMask s) {
  std::vector<VarMask> out;
  VarMask left = s;
  while (left) {
    VarMask comp = left & (~left + 1), frontier = comp;
    while (frontier) {
      VarMask next = 0;
      for_each_bit(frontier, [&](std::size_t i) { next |= g.siblings(i); });
      next &= s & ~comp;
      comp |= next;
      frontier = next;
    }
    out.push_back(comp);
    left &= ~comp;
  }
  return out;
}

inline std::vector<NodeSet> c_components(const Admg& g, const NodeSet& s) {
  std::vector<NodeSet> out;
  for (auto m : c_components(g, g.mask(s))) out.push_back(g.names(m));
  return out;
}

/// Obstruction found by the algorithm: F' ⊂ F are both bidirected-connected in
/// `subgraph`, F' avoids the treatment, and F' is the root set of the
/// intervened part.
struct NonIdWitness {
  NodeSet f;
  NodeSet f_prime;
  Admg subgraph;
};

struct IdentifyResult {
  std::optional<Expr> estimand;
  std::optional<NonIdWitness> witness;

  bool identified() const { return estimand.has_value(); }
};

namespace detail {

class IdEngine {
 public:
  explicit IdEngine(const Admg& g) : g_(g), order_(g.topological_order()) {}

  // Joint distribution over an active set, as an expression over the symbols
  // named after the variables (plus fixed treatment values outside the set).
  struct Dist {
    enum Kind { Observational, Chain, General } kind = Observational;
    VarMask vars = 0;
    std::vector<std::pair<std::size_t, Expr>> factors;  // Chain, topological order
    Expr joint;                                         // General
  };

  std::optional<Expr> id(VarMask y, VarMask x, const Dist& p) {
    const VarMask v = p.vars;
    // 1
    if (!x) return marginal(p, y);
    // 2
    VarMask an = g_.ancestors_within(y, v);
    if (an != v) return id(y, x & an, restrict(p, an));
    // 3
    VarMask w = (v & ~x) & ~ancestors_cut(y, v, x);
    if (w) {
      auto inner = id(y, x | w, p);
      if (!inner) return std::nullopt;
      return Expr::sum(symbols(w), Expr::product({marginal(p, w), std::move(*inner)}));
    }
    // 4
    auto comps = c_components(g_, v & ~x);
    if (comps.size() > 1) {
      std::vector<Expr> factors;
      for (auto s : comps) {
        auto f = id(s, v & ~s, p);
        if (!f) return std::nullopt;
        factors.push_back(std::move(*f));
      }
      return Expr::sum(symbols(v & ~(y | x)), Expr::product(std::move(factors)));
    }
    const VarMask s = comps.front();
    auto whole = c_components(g_, v);
    // 5
    if (whole.size() == 1) {
      witness_ = NonIdWitness{g_.names(v), g_.names(s), g_.induced(v)};
      return std::nullopt;
    }
    // 6
    if (std::find(whole.begin(), whole.end(), s) != whole.end()) {
      std::vector<Expr> factors;
      for (auto i : order_)
        if (contains(s, i)) factors.push_back(conditional(p, bit(i), predecessors(i, v)));
      return Expr::sum(symbols(s & ~y), Expr::product(std::move(factors)));
    }
    // 7
    for (auto sp : whole) {
      if ((s & sp) != s) continue;
      Dist q;
      q.kind = Dist::Chain;
      q.vars = sp;
      for (auto i : order_)
        if (contains(sp, i)) q.factors.emplace_back(i, conditional(p, bit(i), predecessors(i, v)));
      return id(y, x & sp, q);
    }
    throw InternalError("no c-component contains the district");
  }

  const std::optional<NonIdWitness>& witness() const { return witness_; }

 private:
  std::vector<std::string> symbols(VarMask m) const {
    std::vector<std::string> out;
    for_each_bit(m, [&](std::size_t i) { out.push_back(g_.name(i)); });
    return out;
  }

  VarMask predecessors(std::size_t i, VarMask within) const {
    VarMask out = 0;
    for (auto j : order_) {
      if (j == i) break;
      if (contains(within, j)) out |= bit(j);
    }
    return out;
  }

  // Ancestors of y within v after removing edges into x.
  VarMask ancestors_cut(VarMask y, VarMask v, VarMask x) const {
    VarMask seen = y & v, frontier = seen;
    while (frontier) {
      VarMask next = 0;
      for_each_bit(frontier, [&](std::size_t i) {
        if (!contains(x, i)) next |= g_.parents(i);
      });
      next &= v & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  Expr marginal(const Dist& p, VarMask m) const {
    switch (p.kind) {
      case Dist::Observational: return Expr::leaf(symbols(m));
      case Dist::Chain: {
        std::vector<Expr> factors;
        VarMask covered = 0, needed = m;
        for (const auto& [i, f] : p.factors) {
          if (!needed) break;
          factors.push_back(f);
          covered |= bit(i);
          needed &= ~bit(i);
        }
        return Expr::sum(symbols(covered & ~m), Expr::product(std::move(factors)));
      }
      case Dist::General: return Expr::sum(symbols(p.vars & ~m), p.joint);
    }
    return Expr::one();
  }

  Expr conditional(const Dist& p, VarMask a, VarMask c) const {
    if (p.kind == Dist::Observational) return Expr::leaf(symbols(a), {}, symbols(c));
    if (!c) return marginal(p, a);
    return Expr::quotient(marginal(p, a | c), marginal(p, c));
  }

  Dist restrict(const Dist& p, VarMask keep) const {
    if (p.kind == Dist::Observational) return Dist{Dist::Observational, keep, {}, Expr::one()};
    Dist q;
    q.kind = Dist::General;
    q.vars = keep;
    q.joint = marginal(p, keep);
    return q;
  }

  const Admg& g_;
  std::vector<std::size_t> order_;
  std::optional<NonIdWitness> witness_;
};

}  // namespace detail

/// P(y | do(x), z) as a do-free estimand over P(V), or a hedge witness.
/// Conditional queries are answered by the quotient of P(y,z | do(x)) and
/// P(z | do(x)).  The estimand is returned in canonical form.
inline IdentifyResult identify(const Admg& g, const Query& q) {
  auto [y, x, z] = q.masks(g);
  detail::IdEngine::Dist p{detail::IdEngine::Dist::Observational, g.all(), {}, Expr::one()};
  IdentifyResult result;
  detail::IdEngine engine(g);
  auto num = engine.id(y | z, x, p);
  if (!num) {
    result.witness = engine.witness();
    return result;
  }
  if (!z) {
    result.estimand = canonicalize(*num);
    return result;
  }
  detail::IdEngine engine2(g);
  auto den = engine2.id(z, x, p);
  if (!den) {
    result.witness = engine2.witness();
    return result;
  }
  result.estimand = canonicalize(Expr::quotient(std::move(*num), std::move(*den)));
  return result;
}

}  // namespace causalid
