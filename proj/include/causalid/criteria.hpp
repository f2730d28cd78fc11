#pragma once

// Backdoor and frontdoor criteria, and the search for a set satisfying one of
// them in every graph of a collection.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "causalid/docalc.hpp"
#include "causalid/dsep.hpp"
#include "causalid/expr.hpp"
#include "causalid/graph.hpp"
#include "causalid/query.hpp"

namespace causalid {

enum class Criterion { Backdoor, Frontdoor };

inline const char* criterion_name(Criterion c) {
  return c == Criterion::Backdoor ? "backdoor" : "frontdoor";
}

/// Z contains no descendant of X and blocks every path from X to Y that
/// starts with an arrowhead into X (equivalently: X and Y are d-separated by
/// Z once the edges leaving X are removed).
inline bool is_backdoor_set(const Admg& g, VarMask x, VarMask y, VarMask z) {
  detail::check_separation_sets(g, x, y, z);
  if (z & g.descendants(x)) return false;
  return d_separated(g.mutilate(0, x), x, y, z);
}

inline bool is_backdoor_set(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
  return is_backdoor_set(g, g.mask(x), g.mask(y), g.mask(z));
}

/// Frontdoor criterion for a single treatment and outcome: M intercepts every
/// directed path from X to Y, X has no open backdoor path to M, and every
/// backdoor path from M to Y is blocked by X.
inline bool is_frontdoor_set(const Admg& g, VarMask x, VarMask y, VarMask m) {
  if (popcount(x) != 1 || popcount(y) != 1)
    throw UnsupportedSetSize("the frontdoor criterion needs a single treatment and outcome");
  if ((x | y | m) & ~g.all()) throw UnknownVariable("set outside the graph");
  require_disjoint(g, {x, y, m});
  // (i) directed paths avoiding M
  VarMask reach = x, frontier = x;
  while (frontier) {
    VarMask next = g.children_of(frontier) & ~m & ~reach;
    reach |= next;
    frontier = next;
  }
  if (reach & y) return false;
  if (!m) return true;
  // (ii) X to M
  if (!d_separated(g.mutilate(0, x), x, m, 0)) return false;
  // (iii) M to Y given X
  return d_separated(g.mutilate(0, m), m, y, x);
}

inline bool is_frontdoor_set(const Admg& g, const NodeSet& x, const NodeSet& y,
                             const NodeSet& m) {
  return is_frontdoor_set(g, g.mask(x), g.mask(y), g.mask(m));
}

struct CriterionWitness {
  Criterion criterion;
  NodeSet set;     // full adjustment set (backdoor) or mediator set (frontdoor)
  Expr estimand;   // canonical form
};

namespace detail {

inline std::vector<std::string> list(const NodeSet& s) { return {s.begin(), s.end()}; }

}  // namespace detail

/// Σ_s P(y | x, z, s) P(s | z), where the query's z is part of the adjustment set.
inline Expr backdoor_estimand(const Query& q, const NodeSet& extra) {
  auto cond = detail::list(detail::set_union(detail::set_union(q.x, q.z), extra));
  Expr main = Expr::leaf(detail::list(q.y), {}, cond);
  if (extra.empty()) return canonicalize(main);
  return canonicalize(Expr::sum(
      detail::list(extra),
      Expr::product({main, Expr::leaf(detail::list(extra), {}, detail::list(q.z))})));
}

/// Σ_m P(m | x) Σ_{x'} P(y | m, x') P(x').
inline Expr frontdoor_estimand(const Query& q, const NodeSet& m) {
  const std::string x = *q.x.begin();
  const std::string y = *q.y.begin();
  std::set<std::string> taken = q.variables();
  taken.insert(m.begin(), m.end());
  const std::string xp = fresh_symbol(x, taken);
  auto ms = detail::list(m);
  auto cond = ms;
  cond.push_back(xp);
  Expr inner = Expr::sum({xp}, Expr::product({Expr::leaf({y}, {}, cond), Expr::leaf({xp})}));
  if (m.empty()) return canonicalize(inner);
  return canonicalize(Expr::sum(ms, Expr::product({Expr::leaf(ms, {}, {x}), inner})));
}

/// Derivation tree reproducing the adjustment formula by the calculus.
inline PlanNode criterion_plan(const Admg& g, const Query& q, const CriterionWitness& w) {
  const VarMask x = g.mask(q.x);
  auto done = PlanNode{};
  if (w.criterion == Criterion::Backdoor) {
    const VarMask s = g.mask(w.set) & ~g.mask(q.z);
    PlanNode to_obs{Move{MoveKind::DoToObs, x}, {done}};
    if (!s) return to_obs;
    PlanNode drop{Move{MoveKind::DeleteAction, x}, {done}};
    return PlanNode{Move{MoveKind::Marginalize, s}, {to_obs, drop}};
  }
  const VarMask m = g.mask(w.set);
  if (!m) return PlanNode{Move{MoveKind::DeleteAction, x}, {done}};
  PlanNode y_given_mx{Move{MoveKind::DoToObs, m}, {done}};
  PlanNode x_marginal{Move{MoveKind::DeleteAction, m}, {done}};
  PlanNode split_x{Move{MoveKind::Marginalize, x}, {y_given_mx, x_marginal}};
  PlanNode drop_x{Move{MoveKind::DeleteAction, x}, {split_x}};
  PlanNode swap_m{Move{MoveKind::ObsToDo, m}, {drop_x}};
  PlanNode m_given_x{Move{MoveKind::DoToObs, x}, {done}};
  return PlanNode{Move{MoveKind::Marginalize, m}, {swap_m, m_given_x}};
}

/// First candidate set (by size, then name order) satisfying the criterion in
/// every graph.  The search is exhaustive, so nullopt is definitive.
inline std::optional<CriterionWitness> find_common_criterion(const std::vector<Admg>& graphs,
                                                             const Query& q,
                                                             Criterion criterion) {
  require_common_nodes(graphs);
  const Admg& g0 = graphs.front();
  auto [y, x, z] = q.masks(g0);
  if (criterion == Criterion::Frontdoor && (popcount(x) != 1 || popcount(y) != 1))
    throw UnsupportedSetSize("the frontdoor criterion needs a single treatment and outcome");
  if (criterion == Criterion::Frontdoor && z) return std::nullopt;
  if (!x) return CriterionWitness{criterion, q.z, backdoor_estimand(q, {})};

  const VarMask pool = g0.all() & ~(x | y | z);
  std::vector<VarMask> candidates;
  for (VarMask s = pool;; s = (s - 1) & pool) {
    candidates.push_back(s);
    if (!s) break;
  }
  std::sort(candidates.begin(), candidates.end(), [&](VarMask a, VarMask b) {
    if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
    auto na = g0.names(a), nb = g0.names(b);
    return std::lexicographical_compare(na.begin(), na.end(), nb.begin(), nb.end());
  });
  for (VarMask s : candidates) {
    bool ok = std::all_of(graphs.begin(), graphs.end(), [&](const Admg& g) {
      return criterion == Criterion::Backdoor ? is_backdoor_set(g, x, y, z | s)
                                              : is_frontdoor_set(g, x, y, s);
    });
    if (!ok) continue;
    if (criterion == Criterion::Backdoor)
      return CriterionWitness{criterion, g0.names(z | s), backdoor_estimand(q, g0.names(s))};
    return CriterionWitness{criterion, g0.names(s), frontdoor_estimand(q, g0.names(s))};
  }
  return std::nullopt;
}

}  // namespace causalid
