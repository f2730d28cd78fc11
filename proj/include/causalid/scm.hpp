#pragma once

// Finite structural causal models and the exact enumeration oracle.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "causalid/distribution.hpp"
#include "causalid/estimand.hpp"
#include "causalid/graph.hpp"
#include "causalid/query.hpp"
#include "causalid/rational.hpp"

namespace causalid {

struct ExoVar {
  std::string name;
  std::vector<int> domain;
  std::vector<Rational> prob;  // aligned with domain

  friend bool operator==(const ExoVar&, const ExoVar&) = default;
};

/// Endogenous variable with a total function table.  The table is indexed in
/// mixed radix over (parents..., exos...), first input most significant, and
/// stores output values (not indices).
struct EndoVar {
  std::string name;
  std::vector<int> domain;
  std::vector<std::string> parents;
  std::vector<std::string> exos;
  std::vector<int> table;

  friend bool operator==(const EndoVar&, const EndoVar&) = default;
};

class DiscreteScm {
 public:
  std::string name;
  std::vector<EndoVar> endo;
  std::vector<ExoVar> exo;

  const EndoVar* find_endo(const std::string& n) const {
    for (const auto& v : endo)
      if (v.name == n) return &v;
    return nullptr;
  }
  const ExoVar* find_exo(const std::string& n) const {
    for (const auto& u : exo)
      if (u.name == n) return &u;
    return nullptr;
  }
  const EndoVar& endogenous(const std::string& n) const {
    if (auto* v = find_endo(n)) return *v;
    throw UnknownVariable("unknown endogenous variable '" + n + "'");
  }
  const ExoVar& exogenous(const std::string& n) const {
    if (auto* u = find_exo(n)) return *u;
    throw UnknownVariable("unknown exogenous variable '" + n + "'");
  }

  std::vector<std::string> endo_names() const {
    std::vector<std::string> out;
    for (const auto& v : endo) out.push_back(v.name);
    return out;
  }

  /// Domain sizes of a variable's inputs, in table order.
  std::vector<std::size_t> input_radix(const EndoVar& v) const {
    std::vector<std::size_t> r;
    for (const auto& p : v.parents) r.push_back(endogenous(p).domain.size());
    for (const auto& u : v.exos) r.push_back(exogenous(u).domain.size());
    return r;
  }

  /// Throws InvalidModel (or CycleError) when the model is malformed.
  void validate() const {
    std::set<std::string> names;
    auto check_domain = [](const std::string& n, const std::vector<int>& d) {
      if (d.empty()) throw InvalidModel("empty domain for '" + n + "'");
      std::set<int> s(d.begin(), d.end());
      if (s.size() != d.size()) throw InvalidModel("repeated value in domain of '" + n + "'");
    };
    for (const auto& v : endo) {
      if (!is_valid_name(v.name)) throw InvalidModel("invalid name '" + v.name + "'");
      if (!names.insert(v.name).second) throw InvalidModel("duplicate name '" + v.name + "'");
      check_domain(v.name, v.domain);
    }
    for (const auto& u : exo) {
      if (!is_valid_name(u.name)) throw InvalidModel("invalid name '" + u.name + "'");
      if (!names.insert(u.name).second) throw InvalidModel("duplicate name '" + u.name + "'");
      check_domain(u.name, u.domain);
      if (u.prob.size() != u.domain.size())
        throw InvalidModel("probability list of '" + u.name + "' does not match its domain");
      Rational total = 0;
      for (const auto& p : u.prob) {
        if (p < 0) throw InvalidModel("negative probability for '" + u.name + "'");
        total += p;
      }
      if (total != 1)
        throw InvalidModel("probabilities of '" + u.name + "' sum to " + to_string(total));
    }
    for (const auto& v : endo) {
      std::set<std::string> seen;
      for (const auto& p : v.parents) {
        if (!find_endo(p))
          throw InvalidModel("parent '" + p + "' of '" + v.name + "' is not endogenous");
        if (p == v.name) throw InvalidModel("'" + v.name + "' is its own parent");
        if (!seen.insert(p).second) throw InvalidModel("repeated input '" + p + "'");
      }
      for (const auto& u : v.exos) {
        if (!find_exo(u))
          throw InvalidModel("input '" + u + "' of '" + v.name + "' is not exogenous");
        if (!seen.insert(u).second) throw InvalidModel("repeated input '" + u + "'");
      }
      std::size_t cells = 1;
      for (auto r : input_radix(v)) cells *= r;
      if (v.table.size() != cells)
        throw InvalidModel("function table of '" + v.name + "' has " +
                           std::to_string(v.table.size()) + " entries, expected " +
                           std::to_string(cells));
      for (int out : v.table)
        if (std::find(v.domain.begin(), v.domain.end(), out) == v.domain.end())
          throw InvalidModel("function of '" + v.name + "' returns " + std::to_string(out) +
                             " outside its domain");
    }
    std::vector<Edge> directed;
    for (const auto& v : endo)
      for (const auto& p : v.parents) directed.emplace_back(p, v.name);
    Admg::build(endo_names(), directed, {});
  }

  friend bool operator==(const DiscreteScm&, const DiscreteScm&) = default;
};

namespace detail {

inline std::size_t index_of(const std::vector<int>& domain, int value) {
  return static_cast<std::size_t>(std::find(domain.begin(), domain.end(), value) -
                                  domain.begin());
}

inline std::vector<std::size_t> decode(std::size_t cell, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> out(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    out[i] = cell % radix[i];
    cell /= radix[i];
  }
  return out;
}

inline std::size_t encode(const std::vector<std::size_t>& idx,
                          const std::vector<std::size_t>& radix) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < radix.size(); ++i) c = c * radix[i] + idx[i];
  return c;
}

inline std::size_t cells_of(const std::vector<std::size_t>& radix) {
  std::size_t c = 1;
  for (auto r : radix) c *= r;
  return c;
}

}  // namespace detail

/// Directed edges from parent lists; a bidirected edge between any two
/// endogenous variables sharing an exogenous input.
inline Admg induced_graph(const DiscreteScm& m) {
  std::vector<Edge> directed, bidirected;
  for (const auto& v : m.endo)
    for (const auto& p : v.parents) directed.emplace_back(p, v.name);
  for (std::size_t i = 0; i < m.endo.size(); ++i)
    for (std::size_t j = i + 1; j < m.endo.size(); ++j) {
      const auto& a = m.endo[i].exos;
      const auto& b = m.endo[j].exos;
      bool shared = std::any_of(a.begin(), a.end(), [&](const std::string& u) {
        return std::find(b.begin(), b.end(), u) != b.end();
      });
      if (shared) bidirected.emplace_back(m.endo[i].name, m.endo[j].name);
    }
  return Admg::build(m.endo_names(), directed, bidirected);
}

using Intervention = std::map<std::string, int>;

/// Exact joint distribution of the endogenous variables (declaration order)
/// under an intervention.  Exogenous inputs used by a single function are
/// summed out locally; the remaining shared inputs are enumerated per
/// bidirected component, so the cost is exponential only in the shared
/// inputs of one component.
inline ExactDistribution distribution(const DiscreteScm& m, const Intervention& intervention = {}) {
  m.validate();
  const std::size_t n = m.endo.size();
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[m.endo[i].name] = i;
  std::vector<std::optional<std::size_t>> clamp(n);
  for (const auto& [var, value] : intervention) {
    auto it = pos.find(var);
    if (it == pos.end()) throw UnknownVariable("cannot intervene on unknown variable '" + var + "'");
    const auto& d = m.endo[it->second].domain;
    auto vi = detail::index_of(d, value);
    if (vi == d.size())
      throw OutOfDomainValue("value " + std::to_string(value) + " outside the domain of " + var);
    clamp[it->second] = vi;
  }

  // Which endogenous variables read each exogenous input.
  std::map<std::string, std::vector<std::size_t>> readers;
  for (std::size_t i = 0; i < n; ++i)
    if (!clamp[i])
      for (const auto& u : m.endo[i].exos) readers[u].push_back(i);
  auto is_shared = [&](const std::string& u) { return readers[u].size() > 1; };

  // Conditional tables cond[i][(parents, shared inputs of i)][value].
  struct Local {
    std::vector<std::string> shared;            // shared inputs of i, in input order
    std::vector<std::size_t> parent_radix, shared_radix;
    std::vector<Rational> cond;                 // [parents][shared][value]
  };
  std::vector<Local> local(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& v = m.endo[i];
    auto& L = local[i];
    for (const auto& p : v.parents) L.parent_radix.push_back(m.endogenous(p).domain.size());
    if (clamp[i]) {
      // Constant mechanism: independent of everything.
      L.cond.assign(detail::cells_of(L.parent_radix) * v.domain.size(), Rational(0));
      for (std::size_t pc = 0; pc < detail::cells_of(L.parent_radix); ++pc)
        L.cond[pc * v.domain.size() + *clamp[i]] = 1;
      continue;
    }
    for (const auto& u : v.exos)
      if (is_shared(u)) {
        L.shared.push_back(u);
        L.shared_radix.push_back(m.exogenous(u).domain.size());
      }
    const std::size_t pcells = detail::cells_of(L.parent_radix);
    const std::size_t scells = detail::cells_of(L.shared_radix);
    L.cond.assign(pcells * scells * v.domain.size(), Rational(0));
    auto radix = m.input_radix(v);
    const std::size_t np = v.parents.size();
    for (std::size_t cell = 0; cell < v.table.size(); ++cell) {
      auto idx = detail::decode(cell, radix);
      Rational w = 1;
      std::vector<std::size_t> sidx;
      for (std::size_t k = 0; k < v.exos.size(); ++k) {
        const auto& u = m.exogenous(v.exos[k]);
        if (is_shared(u.name)) sidx.push_back(idx[np + k]);
        else w *= u.prob[idx[np + k]];
      }
      if (w == 0) continue;
      std::vector<std::size_t> pidx(idx.begin(), idx.begin() + np);
      std::size_t at = (detail::encode(pidx, L.parent_radix) * scells +
                        detail::encode(sidx, L.shared_radix)) * v.domain.size() +
                       detail::index_of(v.domain, v.table[cell]);
      L.cond[at] += w;
    }
  }

  // Group variables connected through shared inputs.
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto root = [&](std::size_t a) {
    while (comp[a] != a) a = comp[a] = comp[comp[a]];
    return a;
  };
  for (const auto& [u, rs] : readers)
    for (std::size_t k = 1; k < rs.size(); ++k) comp[root(rs[k])] = root(rs[0]);

  std::vector<std::vector<int>> domains;
  for (const auto& v : m.endo) domains.push_back(v.domain);
  ExactDistribution out(m.endo_names(), domains);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = 1;

  for (std::size_t r = 0; r < n; ++r) {
    if (root(r) != r) continue;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (root(i) == r) members.push_back(i);
    // Scope: members and their parents.  Shared inputs: those read by members.
    std::vector<std::size_t> scope;
    for (auto i : members) {
      scope.push_back(i);
      for (const auto& p : m.endo[i].parents) scope.push_back(pos[p]);
    }
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    std::vector<std::string> shared;
    for (auto i : members)
      for (const auto& u : local[i].shared)
        if (std::find(shared.begin(), shared.end(), u) == shared.end()) shared.push_back(u);
    std::vector<std::size_t> scope_radix, shared_radix;
    for (auto i : scope) scope_radix.push_back(m.endo[i].domain.size());
    for (const auto& u : shared) shared_radix.push_back(m.exogenous(u).domain.size());

    std::vector<Rational> q(detail::cells_of(scope_radix), Rational(0));
    const std::size_t scells = detail::cells_of(shared_radix);
    for (std::size_t sc = 0; sc < scells; ++sc) {
      auto sidx = detail::decode(sc, shared_radix);
      Rational w = 1;
      for (std::size_t k = 0; k < shared.size(); ++k) w *= m.exogenous(shared[k]).prob[sidx[k]];
      if (w == 0) continue;
      for (std::size_t vc = 0; vc < q.size(); ++vc) {
        auto vidx = detail::decode(vc, scope_radix);
        auto value_of = [&](std::size_t var) {
          return vidx[std::find(scope.begin(), scope.end(), var) - scope.begin()];
        };
        Rational prod = w;
        for (auto i : members) {
          const auto& v = m.endo[i];
          const auto& L = local[i];
          std::vector<std::size_t> pidx, lsidx;
          for (const auto& p : v.parents) pidx.push_back(value_of(pos[p]));
          for (const auto& u : L.shared)
            lsidx.push_back(sidx[std::find(shared.begin(), shared.end(), u) - shared.begin()]);
          std::size_t at = (detail::encode(pidx, L.parent_radix) * detail::cells_of(L.shared_radix) +
                            detail::encode(lsidx, L.shared_radix)) * v.domain.size() +
                           value_of(i);
          prod *= L.cond[at];
          if (prod == 0) break;
        }
        q[vc] += prod;
      }
    }
    for (std::size_t c = 0; c < out.size(); ++c) {
      auto idx = out.indices(c);
      std::vector<std::size_t> sub;
      for (auto i : scope) sub.push_back(idx[i]);
      out[c] *= q[detail::encode(sub, scope_radix)];
    }
  }
  for (std::size_t c = 0; c < out.size(); ++c) out[c].canonicalize();
  return out;
}

/// P(y | do(x), z) at one binding of the query variables, or nullopt when the
/// conditioning event has probability zero.
inline std::optional<Rational> query_value(const DiscreteScm& m, const Query& q,
                                           const Binding& binding) {
  Intervention iv;
  for (const auto& v : q.x) iv[v] = binding.at(v);
  auto d = distribution(m, iv);
  Binding yz, z;
  for (const auto& v : q.y) yz[v] = binding.at(v);
  for (const auto& v : q.z) yz[v] = z[v] = binding.at(v);
  Rational den = z.empty() ? Rational(1) : d.probability(z);
  if (den == 0) return std::nullopt;
  Rational r = d.probability(yz) / den;
  r.canonicalize();
  return r;
}

/// Bindings of the query variables (sorted names), honoring pinned values.
inline std::vector<Binding> query_bindings(const Query& q,
                                           const std::map<std::string, std::vector<int>>& domains) {
  auto vars = q.variables();
  std::vector<std::string> syms(vars.begin(), vars.end());
  std::vector<std::vector<int>> doms;
  for (const auto& s : syms) {
    auto pinned = q.values.find(s);
    if (pinned != q.values.end()) {
      doms.push_back({pinned->second});
    } else {
      auto it = domains.find(s);
      if (it == domains.end()) throw UnknownVariable("no domain for query variable '" + s + "'");
      doms.push_back(it->second);
    }
  }
  std::vector<Binding> out;
  for_each_binding(syms, doms, [&](const Binding& b) { out.push_back(b); });
  return out;
}

inline DomainSpec domains_of(const DiscreteScm& m) {
  DomainSpec spec;
  for (const auto& v : m.endo) spec[v.name] = v.domain;
  return spec;
}

struct ValidationReport {
  Rational max_error = 0;
  Binding worst;                  // binding attaining max_error
  std::size_t checked = 0;
  std::vector<Binding> skipped;   // zero-probability conditioning
};

/// Largest |F(P_M(V)) - P_M(y | do(x), z)| over all bindings of the query
/// variables.  Bindings with zero-probability conditioning on either side are
/// skipped and reported.
inline ValidationReport validate_estimand(const DiscreteScm& m, const Expr& e, const Query& q) {
  for (const auto& v : q.variables()) m.endogenous(v);
  auto qvars = q.variables();
  for (const auto& s : free_symbols(e))
    if (!qvars.count(s))
      throw MissingBinding("estimand has free symbol '" + s + "' which is not a query variable");
  auto obs = distribution(m);
  Evaluator<Rational> eval(obs);
  std::map<Binding, ExactDistribution> interventional;
  ValidationReport report;
  for (const auto& b : query_bindings(q, domains_of(m))) {
    Binding xs, yz, z;
    for (const auto& v : q.x) xs[v] = b.at(v);
    for (const auto& v : q.y) yz[v] = b.at(v);
    for (const auto& v : q.z) yz[v] = z[v] = b.at(v);
    auto it = interventional.find(xs);
    if (it == interventional.end()) it = interventional.emplace(xs, distribution(m, xs)).first;
    Rational den = z.empty() ? Rational(1) : it->second.probability(z);
    if (den == 0) {
      report.skipped.push_back(b);
      continue;
    }
    Rational truth = it->second.probability(yz) / den;
    Rational value;
    try {
      value = eval(e, b);
    } catch (const EvaluationError&) {
      report.skipped.push_back(b);
      continue;
    }
    ++report.checked;
    Rational err = abs_diff(truth, value);
    err.canonicalize();
    if (report.checked == 1 || err > report.max_error) {
      report.max_error = err;
      report.worst = b;
    }
  }
  return report;
}

namespace detail {

inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string s = base;
  while (taken.count(s)) s += "_";
  return s;
}

inline std::vector<Rational> random_probs(std::size_t k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(1, 9);
  std::vector<Rational> out;
  Rational total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    out.emplace_back(w(rng));
    total += out.back();
  }
  for (auto& p : out) {
    p /= total;
    p.canonicalize();
  }
  return out;
}

inline std::vector<int> range_domain(std::size_t k) {
  std::vector<int> d(k);
  std::iota(d.begin(), d.end(), 0);
  return d;
}

}  // namespace detail

/// Random SCM inducing exactly `g`: one private input per variable and one
/// binary input per bidirected edge.  Each function maps the private input
/// onto the whole domain in every context, so the observational distribution
/// is strictly positive.
inline DiscreteScm random_scm(const Admg& g, const DomainSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DiscreteScm m;
  m.name = "M";
  std::set<std::string> taken(g.sorted_nodes().begin(), g.sorted_nodes().end());
  std::map<std::string, std::string> private_of;
  for (const auto& v : g.nodes()) {
    auto it = spec.find(v);
    if (it == spec.end()) throw UnknownVariable("no domain for variable '" + v + "'");
    auto u = detail::fresh_name("U_" + v, taken);
    taken.insert(u);
    private_of[v] = u;
    m.exo.push_back({u, detail::range_domain(2 * it->second.size()),
                     detail::random_probs(2 * it->second.size(), rng)});
  }
  std::map<std::string, std::vector<std::string>> shared_of;
  for (const auto& [a, b] : g.bidirected_edges()) {
    auto u = detail::fresh_name("U_" + a + "_" + b, taken);
    taken.insert(u);
    m.exo.push_back({u, {0, 1}, detail::random_probs(2, rng)});
    shared_of[a].push_back(u);
    shared_of[b].push_back(u);
  }
  for (const auto& v : g.nodes()) {
    EndoVar e;
    e.name = v;
    e.domain = spec.at(v);
    auto parents = g.names(g.parents(g.index(v)));
    e.parents.assign(parents.begin(), parents.end());
    e.exos.push_back(private_of[v]);
    for (const auto& u : shared_of[v]) e.exos.push_back(u);
    m.endo.push_back(std::move(e));
  }
  for (auto& e : m.endo) {
    auto radix = m.input_radix(e);
    const std::size_t np = e.parents.size();
    const std::size_t d = e.domain.size();
    std::map<std::vector<std::size_t>, std::vector<int>> mapping;
    e.table.resize(detail::cells_of(radix));
    for (std::size_t cell = 0; cell < e.table.size(); ++cell) {
      auto idx = detail::decode(cell, radix);
      std::vector<std::size_t> context(idx.begin(), idx.begin() + np);
      context.insert(context.end(), idx.begin() + np + 1, idx.end());
      auto it = mapping.find(context);
      if (it == mapping.end()) {
        std::vector<int> values = e.domain;
        std::uniform_int_distribution<std::size_t> pick(0, d - 1);
        for (std::size_t k = 0; k < d; ++k) values.push_back(e.domain[pick(rng)]);
        std::shuffle(values.begin(), values.end(), rng);
        it = mapping.emplace(context, std::move(values)).first;
      }
      e.table[cell] = it->second[idx[np]];
    }
  }
  return m;
}

/// Re-expresses `m` over the supergraph `g`: extra parents and extra shared
/// inputs are added as ignored arguments.  The result induces `g` and has the
/// same observational and interventional distributions.
inline DiscreteScm lift(const DiscreteScm& m, const Admg& g) {
  auto base = induced_graph(m);
  if (!is_subgraph(base, g) || base.size() != g.size())
    throw InvalidModel("lift target must be a supergraph on the same variables");
  DiscreteScm out = m;
  std::set<std::string> taken;
  for (const auto& v : m.endo) taken.insert(v.name);
  for (const auto& u : m.exo) taken.insert(u.name);
  std::map<std::string, std::vector<std::string>> extra_exos;
  for (const auto& [a, b] : g.bidirected_edges()) {
    if (base.has_bidirected(base.index(a), base.index(b))) continue;
    auto u = detail::fresh_name("L_" + a + "_" + b, taken);
    taken.insert(u);
    out.exo.push_back({u, {0, 1}, {Rational(1, 2), Rational(1, 2)}});
    extra_exos[a].push_back(u);
    extra_exos[b].push_back(u);
  }
  for (std::size_t i = 0; i < out.endo.size(); ++i) {
    const auto& old = m.endo[i];
    auto& e = out.endo[i];
    std::vector<std::string> new_parents;
    for (const auto& p : g.names(g.parents(g.index(e.name))))
      if (std::find(old.parents.begin(), old.parents.end(), p) == old.parents.end())
        new_parents.push_back(p);
    e.parents.insert(e.parents.end(), new_parents.begin(), new_parents.end());
    e.exos.insert(e.exos.end(), extra_exos[e.name].begin(), extra_exos[e.name].end());
    auto old_radix = m.input_radix(old);
    auto radix = out.input_radix(e);
    const std::size_t np_old = old.parents.size();
    const std::size_t np = e.parents.size();
    e.table.assign(detail::cells_of(radix), 0);
    for (std::size_t cell = 0; cell < e.table.size(); ++cell) {
      auto idx = detail::decode(cell, radix);
      std::vector<std::size_t> oidx(idx.begin(), idx.begin() + np_old);
      oidx.insert(oidx.end(), idx.begin() + np, idx.begin() + np + old.exos.size());
      e.table[cell] = old.table[detail::encode(oidx, old_radix)];
    }
  }
  return out;
}

/// Equivalence relative to the models of one graph: both expressions are
/// compared on the observational distributions of `opt.trials` random SCMs
/// inducing `g`.  Estimands that are valid in `g` but differ as functionals of
/// unconstrained tables (e.g. two different adjustment sets) agree here.
inline bool equivalent_on_graph(const Expr& a, const Expr& b, const Admg& g,
                                const DomainSpec& spec, const EquivalenceOptions& opt = {}) {
  detail::require_same_free(a, b);
  if (opt.trials == 0) throw Error("equivalence testing needs at least one trial");
  if (canonically_equal(a, b)) return true;
  std::mt19937_64 rng(opt.seed);
  for (std::size_t t = 0; t < opt.trials; ++t) {
    auto dist = distribution(random_scm(g, spec, rng()));
    if (!detail::agree_on(a, b, dist, opt.tolerance)) return false;
  }
  return true;
}

/// Text form accepted by the document parser.
inline std::string to_text(const DiscreteScm& m) {
  auto join_ints = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  std::string out = "scm " + m.name + " {\n";
  for (const auto& v : m.endo) out += "  var " + v.name + " domain {" + join_ints(v.domain) + "}\n";
  for (const auto& u : m.exo) {
    out += "  exo " + u.name + " domain {" + join_ints(u.domain) + "} prob {";
    for (std::size_t i = 0; i < u.prob.size(); ++i) out += (i ? "," : "") + to_string(u.prob[i]);
    out += "}\n";
  }
  for (const auto& v : m.endo) {
    out += "  fn " + v.name + "(";
    for (std::size_t i = 0; i < v.parents.size(); ++i) out += (i ? ", " : "") + v.parents[i];
    out += "; ";
    for (std::size_t i = 0; i < v.exos.size(); ++i) out += (i ? ", " : "") + v.exos[i];
    out += ") {";
    auto radix = m.input_radix(v);
    std::vector<const std::vector<int>*> doms;
    for (const auto& p : v.parents) doms.push_back(&m.endogenous(p).domain);
    for (const auto& u : v.exos) doms.push_back(&m.exogenous(u).domain);
    for (std::size_t cell = 0; cell < v.table.size(); ++cell) {
      auto idx = detail::decode(cell, radix);
      out += cell ? "; (" : " (";
      for (std::size_t k = 0; k < idx.size(); ++k)
        out += (k ? "," : "") + std::to_string((*doms[k])[idx[k]]);
      out += ") -> " + std::to_string(v.table[cell]);
    }
    out += " }\n";
  }
  return out + "}\n";
}

}  // namespace causalid
