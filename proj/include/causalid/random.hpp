#pragma once

// Seeded generators for graphs, subgraphs, collections and queries.

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "causalid/collection.hpp"
#include "causalid/graph.hpp"
#include "causalid/query.hpp"

namespace causalid {

inline std::vector<std::string> variable_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("V" + std::to_string(i));
  return out;
}

/// Random ADMG on V0..V{n-1}: a random causal order, then each forward pair
/// gets a directed edge and each unordered pair a bidirected edge, each with
/// probability `density`.
inline Admg random_admg(std::size_t n, double density, std::mt19937_64& rng) {
  auto names = variable_names(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  std::vector<Edge> directed, bidirected;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) directed.emplace_back(names[order[i]], names[order[j]]);
      if (coin(rng)) bidirected.emplace_back(names[order[i]], names[order[j]]);
    }
  return Admg::build(names, directed, bidirected);
}

/// Keeps each edge of `g` with probability `keep`.
inline Admg random_subgraph(const Admg& g, double keep, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(keep);
  std::vector<Edge> directed, bidirected;
  for (const auto& e : g.directed_edges())
    if (coin(rng)) directed.push_back(e);
  for (const auto& e : g.bidirected_edges())
    if (coin(rng)) bidirected.push_back(e);
  return Admg::build(g.nodes(), directed, bidirected);
}

/// Independent random graphs on a shared node set.
inline GraphCollection random_collection(std::size_t graphs, std::size_t n, double density,
                                         std::mt19937_64& rng) {
  std::vector<Admg> gs;
  for (std::size_t i = 0; i < graphs; ++i) gs.push_back(random_admg(n, density, rng));
  return make_collection(std::move(gs));
}

/// A random graph followed by random subgraphs of it, so the first member is
/// the greatest element.
inline GraphCollection random_collection_with_top(std::size_t graphs, std::size_t n,
                                                  double density, std::mt19937_64& rng) {
  std::vector<Admg> gs{random_admg(n, density, rng)};
  for (std::size_t i = 1; i < graphs; ++i) gs.push_back(random_subgraph(gs.front(), 0.7, rng));
  return make_collection(std::move(gs));
}

/// Random pairwise disjoint (x, y, z) over the first `n` bits, x and y non-empty.
inline std::array<VarMask, 3> random_triple(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> role(0, 3);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (;;) {
    std::array<VarMask, 3> s{0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      int r = role(rng);
      if (r < 3) s[r] |= bit(i);
    }
    if (s[0] && s[1]) return s;
    // force the two required roles onto distinct variables
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    for (auto& m : s) m &= ~(bit(a) | bit(b));
    s[0] |= bit(a);
    s[1] |= bit(b);
    return s;
  }
}

/// Random P(y | do(x)) with single-variable y and x of size 1 or 2.
inline Query random_effect_query(const Admg& g, std::mt19937_64& rng) {
  const auto& names = g.sorted_nodes();
  std::vector<std::size_t> idx(names.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  Query q;
  q.y = {names[idx[0]]};
  q.x = {names[idx[1]]};
  if (names.size() > 2 && std::bernoulli_distribution(0.3)(rng)) q.x.insert(names[idx[2]]);
  return q;
}

}  // namespace causalid
