#pragma once

#include <array>
#include <map>
#include <string>

#include "causalid/expr.hpp"
#include "causalid/graph.hpp"

namespace causalid {

/// Causal query P(y | do(x), z) over variable sets.  `values` optionally
/// pins some of the query variables to concrete values (P(Y=1 | do(X=1))).
struct Query {
  NodeSet y;
  NodeSet x;
  NodeSet z;
  std::map<std::string, int> values;

  NodeSet variables() const {
    NodeSet all = y;
    all.insert(x.begin(), x.end());
    all.insert(z.begin(), z.end());
    return all;
  }

  /// The query as a single expression leaf; free symbols are the variable names.
  Term term() const {
    Term t{{y.begin(), y.end()}, {x.begin(), x.end()}, {z.begin(), z.end()}};
    t.normalize();
    return t;
  }
  Expr expr() const { return Expr::leaf(term()); }

  /// Checks the query against a graph and returns the masks (y, x, z).
  std::array<VarMask, 3> masks(const Admg& g) const {
    if (y.empty()) throw Error("query needs a non-empty outcome set");
    VarMask my = g.mask(y), mx = g.mask(x), mz = g.mask(z);
    require_disjoint(g, {my, mx, mz});
    for (const auto& [v, _] : values)
      if (!y.count(v) && !x.count(v) && !z.count(v))
        throw UnknownVariable("value given for '" + v + "' which is not a query variable");
    return {my, mx, mz};
  }

  friend bool operator==(const Query&, const Query&) = default;
};

inline std::string to_string(const Query& q) {
  auto item = [&](const std::string& v) {
    auto it = q.values.find(v);
    return it == q.values.end() ? v : v + "=" + std::to_string(it->second);
  };
  auto list = [&](const NodeSet& s) {
    std::string out;
    for (const auto& v : s) {
      if (!out.empty()) out += ',';
      out += item(v);
    }
    return out;
  };
  std::string out = "P(" + list(q.y);
  if (!q.x.empty() || !q.z.empty()) {
    out += '|';
    if (!q.x.empty()) {
      out += "do(" + list(q.x) + ")";
      if (!q.z.empty()) out += ',';
    }
    out += list(q.z);
  }
  return out + ")";
}

}  // namespace causalid
