#pragma once

// Collections of causal diagrams over one variable set: maximal-element
// pruning, the per-notion verdicts and the observational counterexample
// search used to refute identifiability through graphs.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "causalid/criteria.hpp"
#include "causalid/docalc.hpp"
#include "causalid/estimand.hpp"
#include "causalid/identify.hpp"
#include "causalid/scm.hpp"

namespace causalid {

struct GraphCollection {
  std::string name;
  std::vector<std::string> names;  // one per graph
  std::vector<Admg> graphs;

  std::size_t size() const { return graphs.size(); }

  /// Throws InvalidCollection when empty, mis-sized or over different node sets.
  void validate() const {
    if (graphs.empty()) throw InvalidCollection("collection '" + name + "' is empty");
    if (names.size() != graphs.size())
      throw InvalidCollection("collection '" + name + "' has " + std::to_string(names.size()) +
                              " names for " + std::to_string(graphs.size()) + " graphs");
    require_common_nodes(graphs);
  }
};

inline GraphCollection make_collection(std::vector<Admg> graphs, std::string name = "C") {
  GraphCollection c{std::move(name), {}, std::move(graphs)};
  for (std::size_t i = 0; i < c.graphs.size(); ++i) c.names.push_back("G" + std::to_string(i + 1));
  c.validate();
  return c;
}

/// Members not strictly contained in another member.  Equal graphs collapse
/// onto the first occurrence.
inline GraphCollection maximal_elements(const GraphCollection& c) {
  c.validate();
  GraphCollection out{c.name, {}, {}};
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < c.size() && !dominated; ++j) {
      if (i == j || !is_subgraph(c.graphs[i], c.graphs[j])) continue;
      dominated = !(c.graphs[i] == c.graphs[j]) || j < i;
    }
    if (dominated) continue;
    out.names.push_back(c.names[i]);
    out.graphs.push_back(c.graphs[i]);
  }
  return out;
}

enum class Notion { ICB, ICF, ICD, IG };
enum class Verdict { Yes, No, Inconclusive };

inline const char* notion_name(Notion n) {
  switch (n) {
    case Notion::ICB: return "ICB";
    case Notion::ICF: return "ICF";
    case Notion::ICD: return "ICD";
    case Notion::IG: return "IG";
  }
  return "?";
}

inline std::optional<Notion> parse_notion(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (s == "ICB") return Notion::ICB;
  if (s == "ICF") return Notion::ICF;
  if (s == "ICD" || s == "ICGC") return Notion::ICD;
  if (s == "IG") return Notion::IG;
  return std::nullopt;
}

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CounterexampleBudget {
  std::size_t attempts = 64;
  std::uint64_t seed = 0;
  Rational min_gap{1, 10};  // stop early once a pair differs by this much
};

/// Two models inducing graphs of the collection, with identical observational
/// distributions and different query values at `binding`.
struct Counterexample {
  DiscreteScm m1, m2;
  std::string graph1, graph2;
  Binding binding;
  Rational value1, value2;

  Rational gap() const {
    Rational d = abs_diff(value1, value2);
    d.canonicalize();
    return d;
  }
};

struct NotionResult {
  Notion notion = Notion::ICB;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  std::optional<CriterionWitness> criterion;  // ICB, ICF
  std::optional<Proof> proof;                 // ICD
  std::optional<Expr> estimand;               // common estimand when yes
  std::vector<std::pair<std::string, std::optional<Expr>>> per_graph;  // IG
  std::optional<std::pair<std::string, NonIdWitness>> non_id;          // IG no
  std::optional<Counterexample> counterexample;                        // IG no
};

struct AnalysisOptions {
  SearchBudget budget;
  EquivalenceOptions equivalence;
  bool prune = true;
  bool counterexample_search = false;
  CounterexampleBudget counterexample;
  std::optional<DomainSpec> domains;  // binary when unset
};

struct HierarchyReport {
  std::size_t pruned_from = 0;
  std::size_t pruned_to = 0;
  std::vector<NotionResult> results;

  const NotionResult* find(Notion n) const {
    for (const auto& r : results)
      if (r.notion == n) return &r;
    return nullptr;
  }
};

namespace detail {

inline DomainSpec domains_for(const GraphCollection& c, const AnalysisOptions& opt) {
  return opt.domains ? *opt.domains : binary_domains(c.graphs.front().sorted_nodes());
}

/// Max |a - b| of the query values of two models over the query bindings
/// where both are defined.
inline std::optional<std::tuple<Binding, Rational, Rational>> widest_gap(const DiscreteScm& a,
                                                                         const DiscreteScm& b,
                                                                         const Query& q) {
  std::optional<std::tuple<Binding, Rational, Rational>> best;
  for (const auto& bind : query_bindings(q, domains_of(a))) {
    auto va = query_value(a, q, bind), vb = query_value(b, q, bind);
    if (!va || !vb || *va == *vb) continue;
    if (!best || abs_diff(*va, *vb) > abs_diff(std::get<1>(*best), std::get<2>(*best)))
      best.emplace(bind, *va, *vb);
  }
  return best;
}

/// A model over the DAG `d` whose observational distribution is the product
/// of the conditionals of `p` along `d`.  Each variable reads one private
/// input that splits [0,1) at every breakpoint of its conditional CDFs.
inline DiscreteScm markov_model(const Admg& d, const ExactDistribution& p, std::string name) {
  DiscreteScm m;
  m.name = std::move(name);
  std::set<std::string> taken(d.sorted_nodes().begin(), d.sorted_nodes().end());
  for (const auto& v : d.nodes()) {
    EndoVar e;
    e.name = v;
    e.domain = p.domain(p.require(v));
    auto parents = d.names(d.parents(d.index(v)));
    e.parents.assign(parents.begin(), parents.end());
    m.endo.push_back(std::move(e));
  }
  for (auto& e : m.endo) {
    std::vector<std::string> keep = e.parents;
    keep.push_back(e.name);
    auto joint = p.marginal(keep);
    const std::size_t dv = e.domain.size();
    const std::size_t contexts = joint.size() / dv;
    // cumulative conditional probabilities per context
    std::vector<std::vector<Rational>> cdf(contexts);
    std::vector<Rational> cuts{Rational(0), Rational(1)};
    for (std::size_t c = 0; c < contexts; ++c) {
      Rational mass = 0;
      for (std::size_t k = 0; k < dv; ++k) mass += joint[c * dv + k];
      Rational acc = 0;
      for (std::size_t k = 0; k < dv; ++k) {
        acc += mass == 0 ? Rational(1, dv) : Rational(joint[c * dv + k] / mass);
        acc.canonicalize();
        cdf[c].push_back(acc);
        cuts.push_back(acc);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    ExoVar u;
    u.name = fresh_name("R_" + e.name, taken);
    taken.insert(u.name);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      u.domain.push_back(static_cast<int>(i));
      Rational w = cuts[i + 1] - cuts[i];
      w.canonicalize();
      u.prob.push_back(w);
    }
    e.exos = {u.name};
    e.table.clear();
    for (std::size_t c = 0; c < contexts; ++c)
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        std::size_t k = 0;
        while (cdf[c][k] <= cuts[i]) ++k;
        e.table.push_back(e.domain[k]);
      }
    m.exo.push_back(std::move(u));
  }
  return m;
}

inline Admg directed_part(const Admg& g) { return Admg::build(g.nodes(), g.directed_edges(), {}); }

inline ExactDistribution observational_sorted(const DiscreteScm& m) {
  auto names = m.endo_names();
  std::sort(names.begin(), names.end());
  return distribution(m).marginal(names);
}

/// Copy of `m` in which input `u` takes `k` values.  Existing table rows are
/// kept; rows for the new values are drawn at random.
inline DiscreteScm widen_input(const DiscreteScm& m, const std::string& u, std::size_t k,
                               std::mt19937_64& rng) {
  DiscreteScm out = m;
  const std::size_t old_k = m.exogenous(u).domain.size();
  for (auto& x : out.exo)
    if (x.name == u) {
      x.domain = range_domain(k);
      x.prob = random_probs(k, rng);
    }
  for (std::size_t i = 0; i < out.endo.size(); ++i) {
    auto& e = out.endo[i];
    auto at = std::find(e.exos.begin(), e.exos.end(), u);
    if (at == e.exos.end()) continue;
    const std::size_t j = e.parents.size() + static_cast<std::size_t>(at - e.exos.begin());
    auto old_radix = m.input_radix(m.endo[i]);
    auto radix = out.input_radix(e);
    std::uniform_int_distribution<std::size_t> pick(0, e.domain.size() - 1);
    e.table.assign(cells_of(radix), 0);
    for (std::size_t cell = 0; cell < e.table.size(); ++cell) {
      auto idx = decode(cell, radix);
      e.table[cell] = idx[j] < old_k ? m.endo[i].table[encode(idx, old_radix)] : e.domain[pick(rng)];
    }
  }
  return out;
}

/// Basis of {d : a d = 0} for a dense row-major rational matrix.
inline std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> a,
                                                     std::size_t cols) {
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t r = row;
    while (r < a.size() && a[r][c] == 0) ++r;
    if (r == a.size()) continue;
    std::swap(a[r], a[row]);
    Rational inv = 1 / a[row][c];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != row && a[i][c] != 0) {
        Rational f = a[i][c];
        for (std::size_t k = 0; k < cols; ++k) a[i][k] -= f * a[row][k];
      }
    pivot_col.push_back(c);
    ++row;
  }
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), f) != pivot_col.end()) continue;
    std::vector<Rational> d(cols, Rational(0));
    d[f] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
      d[pivot_col[r]] = -a[r][f];
      d[pivot_col[r]].canonicalize();
    }
    basis.push_back(std::move(d));
  }
  return basis;
}

/// A model with the structure of `m` that differs only in the distribution of
/// input `u` and has the same observational distribution.  P(V) and every
/// interventional table are linear in that distribution, so a direction in
/// the kernel of the observational map keeps P(V) fixed while it may move the
/// query.  Returns the candidate with the widest query gap, if any.
inline std::optional<DiscreteScm> perturbed_twin(const DiscreteScm& m, const std::string& u,
                                                 const Query& q) {
  const auto& ux = m.exogenous(u);
  const std::size_t k = ux.domain.size();
  auto bindings = query_bindings(q, domains_of(m));
  std::vector<std::vector<Rational>> obs_rows, query_rows;
  for (std::size_t v = 0; v < k; ++v) {
    DiscreteScm point = m;
    for (auto& x : point.exo)
      if (x.name == u)
        for (std::size_t i = 0; i < k; ++i) x.prob[i] = i == v ? 1 : 0;
    auto p = observational_sorted(point);
    if (obs_rows.empty()) obs_rows.assign(p.size(), {});
    for (std::size_t c = 0; c < p.size(); ++c) obs_rows[c].push_back(p[c]);
    if (query_rows.empty()) query_rows.assign(bindings.size(), {});
    std::map<Intervention, ExactDistribution> tables;
    for (std::size_t b = 0; b < bindings.size(); ++b) {
      Intervention iv;
      Binding yz;
      for (const auto& x : q.x) iv[x] = bindings[b].at(x);
      for (const auto& y : q.y) yz[y] = bindings[b].at(y);
      for (const auto& z : q.z) yz[z] = bindings[b].at(z);
      auto it = tables.find(iv);
      if (it == tables.end()) it = tables.emplace(iv, distribution(point, iv)).first;
      query_rows[b].push_back(it->second.probability(yz));
    }
  }
  auto basis = null_space(obs_rows, k);
  auto dot = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < k; ++i) s += a[i] * b[i];
    return s;
  };
  // Greedy ascent of one query cell (either sign) along the kernel directions,
  // each step as long as the probabilities stay non-negative.
  std::optional<DiscreteScm> best;
  Rational best_gap = 0;
  for (const auto& row : query_rows)
    for (int sign : {1, -1}) {
      std::vector<Rational> theta = ux.prob;
      bool moved = false;
      for (int pass = 0; pass < 3; ++pass) {
        bool improved = false;
        for (const auto& d : basis) {
          Rational slope = dot(row, d) * sign;
          if (slope == 0) continue;
          const int dir = slope > 0 ? 1 : -1;
          std::optional<Rational> limit;
          for (std::size_t i = 0; i < k; ++i)
            if (d[i] * dir < 0) {
              Rational lim = theta[i] / abs(d[i]);
              if (!limit || lim < *limit) limit = lim;
            }
          if (!limit || *limit == 0) continue;
          // a coarser step keeps the printed model readable
          Rational scaled = *limit * 1024;
          Rational step(mpz_class(scaled.get_num() / scaled.get_den()), 1024);
          step.canonicalize();
          if (step == 0) step = *limit;
          for (std::size_t i = 0; i < k; ++i) {
            theta[i] += step * dir * d[i];
            theta[i].canonicalize();
          }
          improved = moved = true;
        }
        if (!improved) break;
      }
      if (!moved) continue;
      DiscreteScm twin = m;
      twin.name = "M2";
      for (auto& x : twin.exo)
        if (x.name == u) x.prob = theta;
      auto gap = widest_gap(m, twin, q);
      if (!gap) continue;
      Rational g = abs_diff(std::get<1>(*gap), std::get<2>(*gap));
      if (g > best_gap) {
        best_gap = g;
        best = std::move(twin);
      }
    }
  return best;
}

}  // namespace detail

/// Randomized search for two models inducing graphs of `c` that agree
/// exactly on P(V) but disagree on the query.  For every ordered pair of
/// maximal graphs (a, b), including a = b, a random model of a is drawn and
/// its observational distribution is re-expressed by a model of b's directed
/// part, lifted onto b.  The widest gap found is returned.
inline std::optional<Counterexample> find_ig_counterexample(const GraphCollection& c,
                                                            const Query& q,
                                                            const DomainSpec& spec,
                                                            const CounterexampleBudget& budget = {}) {
  if (budget.attempts == 0) throw InvalidBudget("counterexample search needs at least one attempt");
  auto maxc = maximal_elements(c);
  q.masks(maxc.graphs.front());
  std::mt19937_64 rng(budget.seed);
  std::optional<Counterexample> best;
  for (std::size_t t = 0; t < budget.attempts; ++t) {
    for (std::size_t a = 0; a < maxc.size(); ++a) {
      const std::uint64_t seed = rng();
      auto m1 = random_scm(maxc.graphs[a], spec, seed);
      m1.name = "M1";
      auto p = detail::observational_sorted(m1);
      for (std::size_t b = 0; b < maxc.size(); ++b) {
        const Admg& gb = maxc.graphs[b];
        auto m2 = lift(detail::markov_model(detail::directed_part(gb), p, "M2"), gb);
        if (!(detail::observational_sorted(m2) == p)) continue;
        auto gap = detail::widest_gap(m1, m2, q);
        if (!gap) continue;
        Counterexample cx{m1, m2, maxc.names[a], maxc.names[b], std::get<0>(*gap),
                          std::get<1>(*gap), std::get<2>(*gap)};
        if (!best || cx.gap() > best->gap()) best = std::move(cx);
        if (best->gap() >= budget.min_gap) return best;
      }
      // Second construction, within one graph: widen one input at a time
      // and move its distribution along the kernel of the observational map.
      // The kernel is non-trivial once the input has more values than the
      // cells of the reader's district and its parents.
      const Admg& ga = maxc.graphs[a];
      const auto districts = c_components(ga, ga.all());
      for (const auto& ux : m1.exo) {
        VarMask around = 0, readers = 0;
        for (const auto& e : m1.endo)
          if (std::find(e.exos.begin(), e.exos.end(), ux.name) != e.exos.end()) {
            readers |= bit(ga.index(e.name));
            for (VarMask d : districts)
              if (contains(d, ga.index(e.name))) around |= d;
          }
        if (popcount(readers) < 2) continue;  // private inputs carry no confounding
        around |= ga.parents_of(around);
        std::size_t cells = 1;
        for (const auto& v : ga.names(around)) cells = std::min<std::size_t>(cells * spec.at(v).size(), 64);
        auto wide = detail::widen_input(m1, ux.name, std::min<std::size_t>(cells + 1, 33), rng);
        auto m2 = detail::perturbed_twin(wide, ux.name, q);
        if (!m2) continue;
        if (!(detail::observational_sorted(*m2) == detail::observational_sorted(wide)))
          throw InternalError("perturbed model changed the observational distribution");
        auto gap = detail::widest_gap(wide, *m2, q);
        if (!gap) continue;
        Counterexample cx{wide, *m2, maxc.names[a], maxc.names[a], std::get<0>(*gap),
                          std::get<1>(*gap), std::get<2>(*gap)};
        if (!best || cx.gap() > best->gap()) best = std::move(cx);
        if (best->gap() >= budget.min_gap) return best;
      }
    }
  }
  return best;
}

/// Independent re-check of a counterexample against a collection.
inline bool verify_counterexample(const GraphCollection& c, const Query& q,
                                  const Counterexample& cx) {
  cx.m1.validate();
  cx.m2.validate();
  auto in_c = [&](const DiscreteScm& m) {
    auto g = induced_graph(m);
    return std::any_of(c.graphs.begin(), c.graphs.end(), [&](const Admg& h) { return h == g; });
  };
  if (!in_c(cx.m1) || !in_c(cx.m2)) return false;
  if (!(detail::observational_sorted(cx.m1) == detail::observational_sorted(cx.m2))) return false;
  auto v1 = query_value(cx.m1, q, cx.binding), v2 = query_value(cx.m2, q, cx.binding);
  return v1 && v2 && *v1 == cx.value1 && *v2 == cx.value2 && *v1 != *v2;
}

/// Whether two estimands of the same query agree on the observational
/// distributions of random models of `g`, at every binding of the query
/// variables.  Unlike equivalent_on_graph, the free symbols may differ (an
/// estimand need not mention every query variable).
inline bool equivalent_for_query(const Expr& e, const Expr& ref, const Admg& g, const Query& q,
                             const DomainSpec& spec, const EquivalenceOptions& opt) {
  if (canonically_equal(e, ref)) return true;
  std::mt19937_64 rng(opt.seed);
  auto vars = q.variables();
  std::vector<std::string> syms(vars.begin(), vars.end());
  std::vector<std::vector<int>> doms;
  for (const auto& s : syms) doms.push_back(spec.at(s));
  for (std::size_t t = 0; t < opt.trials; ++t) {
    auto dist = distribution(random_scm(g, spec, rng())).convert<double>();
    Evaluator<double> eval(dist);
    bool ok = true;
    for_each_binding(syms, doms, [&](const Binding& b) {
      if (!ok) return;
      std::optional<double> va, vb;
      try {
        va = eval(e, b);
      } catch (const EvaluationError&) {
      }
      try {
        vb = eval(ref, b);
      } catch (const EvaluationError&) {
      }
      if (!va && !vb) return;
      if (!va || !vb || std::abs(*va - *vb) > opt.tolerance) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

namespace detail {

inline NotionResult check_criterion(const GraphCollection& c, const Query& q, Notion notion) {
  NotionResult r;
  r.notion = notion;
  auto crit = notion == Notion::ICB ? Criterion::Backdoor : Criterion::Frontdoor;
  if (auto w = find_common_criterion(c.graphs, q, crit)) {
    r.verdict = Verdict::Yes;
    r.estimand = w->estimand;
    r.criterion = std::move(w);
  } else {
    r.verdict = Verdict::No;
    r.reason = std::string("no common ") + criterion_name(crit) + " set";
  }
  return r;
}

inline NotionResult check_icd(const GraphCollection& c, const Query& q, const SearchBudget& budget) {
  NotionResult r;
  r.notion = Notion::ICD;
  // A common proof is a proof in every member, and the calculus is sound, so
  // one member where the query is not identifiable rules it out.
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!identify(c.graphs[i], q).identified()) {
      r.verdict = Verdict::No;
      r.reason = "not identifiable in " + c.names[i];
      return r;
    }
  }
  auto found = search_common_proof(c.graphs, q, budget);
  if (!found.proof) {
    // A common criterion yields a common proof by replaying its derivation.
    for (auto crit : {Criterion::Backdoor, Criterion::Frontdoor}) {
      std::optional<CriterionWitness> w;
      try {
        w = find_common_criterion(c.graphs, q, crit);
      } catch (const UnsupportedSetSize&) {
      }
      if (!w) continue;
      auto proof = emit_proof(q, criterion_plan(c.graphs.front(), q, *w),
                              c.graphs.front().sorted_nodes());
      if (!check_proof(proof, c.graphs).ok)
        throw InternalError("criterion derivation fails the proof checker");
      found.proof = std::move(proof);
      break;
    }
  }
  if (!found.proof) {
    r.reason = found.reason;
    return r;
  }
  r.verdict = Verdict::Yes;
  r.estimand = canonicalize(found.proof->final_expr());
  r.proof = std::move(found.proof);
  return r;
}

inline NotionResult check_ig(const GraphCollection& c, const Query& q, const AnalysisOptions& opt,
                             const std::vector<Expr>& hints) {
  NotionResult r;
  r.notion = Notion::IG;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto id = identify(c.graphs[i], q);
    r.per_graph.emplace_back(c.names[i], id.estimand);
    if (!id.identified()) {
      r.verdict = Verdict::No;
      r.reason = "not identifiable in " + c.names[i];
      r.non_id.emplace(c.names[i], *id.witness);
      return r;
    }
  }
  const DomainSpec spec = domains_for(c, opt);
  std::vector<Expr> candidates = hints;
  for (const auto& [_, e] : r.per_graph) candidates.push_back(*e);
  for (const auto& cand : candidates) {
    bool common = true;
    for (std::size_t i = 0; i < c.size() && common; ++i)
      common = equivalent_for_query(cand, *r.per_graph[i].second, c.graphs[i], q, spec, opt.equivalence);
    if (common) {
      r.verdict = Verdict::Yes;
      r.estimand = cand;
      return r;
    }
  }
  r.reason = "identifiable in every graph, no common estimand found";
  if (opt.counterexample_search) {
    if (auto cx = find_ig_counterexample(c, q, spec, opt.counterexample)) {
      r.verdict = Verdict::No;
      r.reason = "observationally equivalent models disagree on the query";
      r.counterexample = std::move(cx);
    }
  }
  return r;
}

}  // namespace detail

/// Verdict for one notion on the maximal elements of `c` (or on all of `c`
/// when pruning is off).  `hints` are candidate common estimands for IG.
inline NotionResult check_notion(const GraphCollection& c, const Query& q, Notion notion,
                                 const AnalysisOptions& opt = {},
                                 const std::vector<Expr>& hints = {}) {
  c.validate();
  q.masks(c.graphs.front());
  const GraphCollection work = opt.prune ? maximal_elements(c) : c;
  switch (notion) {
    case Notion::ICB:
    case Notion::ICF: return detail::check_criterion(work, q, notion);
    case Notion::ICD: return detail::check_icd(work, q, opt.budget);
    case Notion::IG: return detail::check_ig(work, q, opt, hints);
  }
  throw Error("unknown notion");
}

/// All requested notions, in hierarchy order.  Estimands established by the
/// stronger notions are offered to IG as candidates.
inline HierarchyReport analyze(const GraphCollection& c, const Query& q,
                               std::vector<Notion> notions, const AnalysisOptions& opt = {}) {
  c.validate();
  HierarchyReport report;
  report.pruned_from = c.size();
  report.pruned_to = opt.prune ? maximal_elements(c).size() : c.size();
  std::sort(notions.begin(), notions.end());
  notions.erase(std::unique(notions.begin(), notions.end()), notions.end());
  std::vector<Expr> hints;
  for (auto n : notions) {
    NotionResult r;
    r.notion = n;
    if (n == Notion::ICF && (q.x.size() != 1 || q.y.size() != 1)) {
      r.reason = "frontdoor criterion needs a single treatment and outcome";
    } else {
      r = check_notion(c, q, n, opt, hints);
    }
    if (r.verdict == Verdict::Yes && r.estimand) hints.push_back(*r.estimand);
    report.results.push_back(std::move(r));
  }
  // A refuted query has no common proof either.
  const NotionResult* ig = report.find(Notion::IG);
  for (auto& r : report.results)
    if (ig && ig->verdict == Verdict::No && r.notion == Notion::ICD && r.verdict == Verdict::Inconclusive) {
      r.verdict = Verdict::No;
      r.reason = "not identifiable through the collection: " + ig->reason;
    }
  return report;
}

inline std::vector<Notion> all_notions() {
  return {Notion::ICB, Notion::ICF, Notion::ICD, Notion::IG};
}

/// Implications between notions that the report breaks.  Empty for a
/// consistent report.
inline std::vector<std::string> hierarchy_violations(const HierarchyReport& report) {
  std::vector<std::string> out;
  auto verdict = [&](Notion n) -> std::optional<Verdict> {
    if (auto* r = report.find(n)) return r->verdict;
    return std::nullopt;
  };
  auto icb = verdict(Notion::ICB), icf = verdict(Notion::ICF);
  auto icd = verdict(Notion::ICD), ig = verdict(Notion::IG);
  if (icb == Verdict::Yes && icd && icd != Verdict::Yes) out.push_back("ICB yes but ICD not yes");
  if (icf == Verdict::Yes && icd && icd != Verdict::Yes) out.push_back("ICF yes but ICD not yes");
  if (icd == Verdict::Yes && ig == Verdict::No) out.push_back("ICD yes but IG no");
  if (icb == Verdict::Yes && ig == Verdict::No) out.push_back("ICB yes but IG no");
  if (icf == Verdict::Yes && ig == Verdict::No) out.push_back("ICF yes but IG no");
  if (ig == Verdict::No && icd && icd != Verdict::No) out.push_back("IG no but ICD not no");
  if (report.pruned_to > report.pruned_from) out.push_back("pruning grew the collection");
  return out;
}

}  // namespace causalid
