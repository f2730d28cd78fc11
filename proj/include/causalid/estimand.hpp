#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "causalid/distribution.hpp"
#include "causalid/expr.hpp"

namespace causalid {

/// Assignment of values to free symbols.
using Binding = std::map<std::string, int>;

/// Calls f for every assignment of `symbols`, each ranging over its
/// variable's domain.  Symbols are visited in the given order, last fastest.
inline void for_each_binding(const std::vector<std::string>& symbols,
                             const std::vector<std::vector<int>>& domains,
                             const std::function<void(const Binding&)>& f) {
  Binding b;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == symbols.size()) {
      f(b);
      return;
    }
    for (int v : domains[i]) {
      b[symbols[i]] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

/// Evaluates do-free expressions against one joint table.  Marginal tables
/// are cached per variable subset, so repeated evaluation is cheap.
template <typename Scalar>
class Evaluator {
 public:
  explicit Evaluator(const Distribution<Scalar>& dist) : dist_(dist) {}

  Scalar operator()(const Expr& e, const Binding& binding) {
    Binding b = binding;
    return eval(e, b);
  }

 private:
  Scalar eval(const Expr& e, Binding& b) {
    switch (e.kind) {
      case ExprKind::Term: return term(e.term, b);
      case ExprKind::Product: {
        Scalar acc(1);
        for (const auto& f : e.args) {
          acc *= eval(f, b);
          if (acc == Scalar(0)) break;
        }
        return acc;
      }
      case ExprKind::Quotient: {
        Scalar den = eval(e.args[1], b);
        if (den == Scalar(0))
          throw EvaluationError("division by zero in " + to_string(e));
        Scalar num = eval(e.args[0], b);
        return num / den;
      }
      case ExprKind::Sum: {
        std::vector<std::vector<int>> doms;
        for (const auto& s : e.bound) doms.push_back(dist_.domain(dist_.require(variable_of(s))));
        // Save shadowed bindings.
        std::map<std::string, std::optional<int>> saved;
        for (const auto& s : e.bound) {
          auto it = b.find(s);
          saved[s] = it == b.end() ? std::nullopt : std::optional<int>(it->second);
        }
        Scalar acc(0);
        auto rec = [&](auto&& self, std::size_t i) -> void {
          if (i == e.bound.size()) {
            acc += eval(e.body(), b);
            return;
          }
          for (int v : doms[i]) {
            b[e.bound[i]] = v;
            self(self, i + 1);
          }
        };
        rec(rec, 0);
        for (const auto& [s, v] : saved) {
          if (v) b[s] = *v;
          else b.erase(s);
        }
        return acc;
      }
    }
    return Scalar(0);
  }

  Scalar term(const Term& t, const Binding& b) {
    if (!t.action.empty())
      throw EvaluationError("cannot evaluate interventional term " + to_string(t) +
                            " on an observational distribution");
    std::map<std::size_t, std::size_t> joint, cond;
    auto add = [&](const std::string& sym, std::map<std::size_t, std::size_t>& into) {
      auto it = b.find(sym);
      if (it == b.end()) throw MissingBinding("no value bound for '" + sym + "'");
      auto pos = dist_.require(variable_of(sym));
      auto vi = dist_.value_index(pos, it->second);
      if (joint.count(pos))
        throw EvaluationError("variable " + variable_of(sym) + " occurs twice in " +
                              to_string(t));
      joint[pos] = vi;
      into[pos] = vi;
    };
    std::map<std::size_t, std::size_t> none;
    for (const auto& s : t.condition) add(s, cond);
    for (const auto& s : t.outcome) add(s, none);
    Scalar den = cond.empty() ? Scalar(1) : mass(cond);
    if (den == Scalar(0))
      throw EvaluationError("conditioning event of " + to_string(t) + " has probability zero");
    return mass(joint) / den;
  }

  // Probability of a partial assignment given as position -> value index.
  Scalar mass(const std::map<std::size_t, std::size_t>& event) {
    std::vector<std::size_t> key;
    for (const auto& [p, _] : event) key.push_back(p);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::vector<std::size_t> radix;
      std::size_t cells = 1;
      for (auto p : key) {
        radix.push_back(dist_.domain(p).size());
        cells *= radix.back();
      }
      std::vector<Scalar> table(cells, Scalar(0));
      for (std::size_t c = 0; c < dist_.size(); ++c) {
        auto idx = dist_.indices(c);
        std::size_t sub = 0;
        for (std::size_t i = 0; i < key.size(); ++i) sub = sub * radix[i] + idx[key[i]];
        table[sub] += dist_[c];
      }
      it = cache_.emplace(key, std::move(table)).first;
    }
    std::size_t sub = 0;
    for (const auto& [p, v] : event) sub = sub * dist_.domain(p).size() + v;
    return it->second[sub];
  }

  const Distribution<Scalar>& dist_;
  std::map<std::vector<std::size_t>, std::vector<Scalar>> cache_;
};

/// Value of a do-free expression at one binding of its free symbols.
template <typename Scalar>
Scalar evaluate(const Expr& e, const Distribution<Scalar>& dist, const Binding& binding) {
  return Evaluator<Scalar>(dist)(e, binding);
}

/// Strictly positive random joint table (Dirichlet(1) weights).
inline Distribution<double> random_positive_table(const DomainSpec& spec,
                                                  const std::vector<std::string>& vars,
                                                  std::mt19937_64& rng) {
  std::vector<std::vector<int>> doms;
  for (const auto& v : vars) {
    auto it = spec.find(v);
    if (it == spec.end()) throw UnknownVariable("no domain for variable '" + v + "'");
    doms.push_back(it->second);
  }
  Distribution<double> d(vars, doms);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  double total = 0;
  for (std::size_t c = 0; c < d.size(); ++c) {
    double w = 0;
    while (w <= 1e-6) w = gamma(rng);
    d[c] = w;
    total += w;
  }
  for (std::size_t c = 0; c < d.size(); ++c) d[c] /= total;
  return d;
}

struct EquivalenceOptions {
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;
};

namespace detail {

inline void require_same_free(const Expr& a, const Expr& b) {
  if (free_symbols(a) != free_symbols(b))
    throw IncompatibleFreeVariables("estimands have different free variables: " +
                                    to_string(a) + " vs " + to_string(b));
}

/// Compares two expressions at every binding of their free symbols.
/// Bindings where both sides hit zero-probability conditioning are skipped.
template <typename Scalar>
bool agree_on(const Expr& a, const Expr& b, const Distribution<Scalar>& dist,
              double tolerance) {
  auto free = free_symbols(a);
  std::vector<std::string> syms(free.begin(), free.end());
  std::vector<std::vector<int>> doms;
  for (const auto& s : syms) doms.push_back(dist.domain(dist.require(variable_of(s))));
  Evaluator<Scalar> eval(dist);
  bool ok = true;
  for_each_binding(syms, doms, [&](const Binding& bind) {
    if (!ok) return;
    std::optional<Scalar> va, vb;
    try {
      va = eval(a, bind);
    } catch (const EvaluationError&) {
    }
    try {
      vb = eval(b, bind);
    } catch (const EvaluationError&) {
    }
    if (!va && !vb) return;
    if (!va || !vb || to_double(abs_diff(*va, *vb)) > tolerance) ok = false;
  });
  return ok;
}

}  // namespace detail

/// Semi-decision of functional equality on unconstrained positive tables.
/// false is definitive; true means canonical equality or agreement on every
/// sampled table.
inline bool equivalent(const Expr& a, const Expr& b, const DomainSpec& spec,
                       const EquivalenceOptions& opt = {}) {
  detail::require_same_free(a, b);
  if (opt.trials == 0) throw Error("equivalence testing needs at least one trial");
  if (canonically_equal(a, b)) return true;
  auto vars = variables(a);
  auto vb = variables(b);
  vars.insert(vb.begin(), vb.end());
  std::vector<std::string> order(vars.begin(), vars.end());
  std::mt19937_64 rng(opt.seed);
  for (std::size_t t = 0; t < opt.trials; ++t) {
    auto dist = random_positive_table(spec, order, rng);
    if (!detail::agree_on(a, b, dist, opt.tolerance)) return false;
  }
  return true;
}

}  // namespace causalid
