#pragma once

#include <array>
#include <vector>

#include "causalid/graph.hpp"

namespace causalid {

namespace detail {

inline void check_separation_sets(const Admg& g, VarMask x, VarMask y, VarMask z) {
  if (!x || !y) throw Error("d-separation needs non-empty X and Y");
  if ((x | y | z) & ~g.all()) throw UnknownVariable("set outside the graph");
  require_disjoint(g, {x, y, z});
}

}  // namespace detail

/// Reachability over (vertex, arrived-with-arrowhead) states.  A walk may
/// pass a vertex as a collider only if it is an ancestor of z, and as a
/// non-collider only if it is outside z.  Active walks and active paths
/// connect the same endpoints, so reaching y means d-connection.
inline bool d_separated(const Admg& g, VarMask x, VarMask y, VarMask z) {
  detail::check_separation_sets(g, x, y, z);
  const VarMask anc_z = g.ancestors(z);
  const std::size_t n = g.size();
  std::vector<std::array<bool, 2>> seen(n, {false, false});
  std::vector<std::pair<std::size_t, bool>> queue;

  auto push = [&](std::size_t w, bool head_at_w) {
    if (!seen[w][head_at_w]) {
      seen[w][head_at_w] = true;
      queue.emplace_back(w, head_at_w);
    }
  };
  for_each_bit(x, [&](std::size_t v) {
    for_each_bit(g.children(v), [&](std::size_t c) { push(c, true); });
    for_each_bit(g.parents(v), [&](std::size_t p) { push(p, false); });
    for_each_bit(g.siblings(v), [&](std::size_t s) { push(s, true); });
  });

  while (!queue.empty()) {
    auto [v, head_in] = queue.back();
    queue.pop_back();
    if (contains(y, v)) return false;
    const bool open_collider = contains(anc_z, v);
    const bool open_noncollider = !contains(z, v);
    // Leaving through a tail at v never forms a collider.
    if (open_noncollider)
      for_each_bit(g.children(v), [&](std::size_t c) { push(c, true); });
    // Leaving through an arrowhead at v forms a collider iff we arrived
    // with an arrowhead.
    if (head_in ? open_collider : open_noncollider) {
      for_each_bit(g.parents(v), [&](std::size_t p) { push(p, false); });
      for_each_bit(g.siblings(v), [&](std::size_t s) { push(s, true); });
    }
  }
  return true;
}

inline bool d_separated(const Admg& g, const NodeSet& x, const NodeSet& y,
                        const NodeSet& z) {
  return d_separated(g, g.mask(x), g.mask(y), g.mask(z));
}

}  // namespace causalid
