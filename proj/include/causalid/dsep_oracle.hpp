#pragma once

// Brute-force d-separation: enumerate every simple path and apply the
// activation rules literally.  Shares nothing with d_separated() beyond the
// graph accessors; meant for graphs of about ten nodes.

#include <functional>
#include <string>
#include <vector>

#include "causalid/graph.hpp"

namespace causalid {

enum class EdgeKind { Directed, Bidirected };

/// One traversed edge.  `forward` is true for a directed edge traversed
/// tail-to-head; it is ignored for bidirected edges.
struct PathEdge {
  EdgeKind kind;
  bool forward;

  bool head_at_start() const { return kind == EdgeKind::Bidirected || !forward; }
  bool head_at_end() const { return kind == EdgeKind::Bidirected || forward; }
};

struct Path {
  std::vector<std::size_t> vertices;
  std::vector<PathEdge> edges;  // edges[i] joins vertices[i] and vertices[i+1]
};

/// Visits every simple path that starts in `from`, including the trivial
/// single-vertex path.  Enumeration stops once the visitor returns false.
inline void for_each_simple_path(const Admg& g, VarMask from,
                                 const std::function<bool(const Path&)>& visit) {
  Path path;
  std::vector<bool> on(g.size(), false);
  bool stop = false;
  auto extend = [&](auto&& self, std::size_t v) -> void {
    if (stop) return;
    if (!visit(path)) {
      stop = true;
      return;
    }
    for (std::size_t w = 0; w < g.size(); ++w) {
      if (on[w]) continue;
      std::vector<PathEdge> options;
      if (g.has_directed(v, w)) options.push_back({EdgeKind::Directed, true});
      if (g.has_directed(w, v)) options.push_back({EdgeKind::Directed, false});
      if (g.has_bidirected(v, w)) options.push_back({EdgeKind::Bidirected, false});
      for (const auto& e : options) {
        on[w] = true;
        path.vertices.push_back(w);
        path.edges.push_back(e);
        self(self, w);
        path.edges.pop_back();
        path.vertices.pop_back();
        on[w] = false;
      }
    }
  };
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!contains(from, s)) continue;
    on[s] = true;
    path.vertices = {s};
    path.edges.clear();
    extend(extend, s);
    on[s] = false;
    if (stop) return;
  }
}

/// Descendants by plain depth-first search over directed edges.
inline std::vector<bool> oracle_descendants(const Admg& g, std::size_t v) {
  std::vector<bool> seen(g.size(), false);
  std::vector<std::size_t> stack{v};
  seen[v] = true;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    for (std::size_t w = 0; w < g.size(); ++w)
      if (g.has_directed(u, w) && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return seen;
}

/// True iff every intermediate vertex of the path is active given z.
inline bool path_active(const Admg& g, const Path& p, VarMask z) {
  for (std::size_t i = 1; i + 1 < p.vertices.size(); ++i) {
    const auto v = p.vertices[i];
    const bool collider = p.edges[i - 1].head_at_end() && p.edges[i].head_at_start();
    if (collider) {
      auto desc = oracle_descendants(g, v);
      bool hit = false;
      for (std::size_t w = 0; w < g.size(); ++w)
        if (desc[w] && contains(z, w)) hit = true;
      if (!hit) return false;
    } else if (contains(z, v)) {
      return false;
    }
  }
  return true;
}

inline bool d_separated_oracle(const Admg& g, VarMask x, VarMask y, VarMask z) {
  if (!x || !y) throw Error("d-separation needs non-empty X and Y");
  if ((x | y | z) & ~g.all()) throw UnknownVariable("set outside the graph");
  require_disjoint(g, {x, y, z});
  bool connected = false;
  for_each_simple_path(g, x, [&](const Path& p) {
    if (p.vertices.size() >= 2 && contains(y, p.vertices.back()) &&
        path_active(g, p, z))
      connected = true;
    return !connected;
  });
  return !connected;
}

inline bool d_separated_oracle(const Admg& g, const NodeSet& x, const NodeSet& y,
                               const NodeSet& z) {
  return d_separated_oracle(g, g.mask(x), g.mask(y), g.mask(z));
}

}  // namespace causalid
