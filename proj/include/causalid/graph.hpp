#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalid/error.hpp"

namespace causalid {

/// Set of variable names, iterated in canonical (lexicographic) order.
using NodeSet = std::set<std::string>;

/// Bit set over a graph's variables.  Bit i stands for the i-th variable in
/// lexicographic order, so graphs over the same names share masks.
using VarMask = std::uint64_t;

using Edge = std::pair<std::string, std::string>;

inline constexpr std::size_t kMaxVariables = 64;

inline bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

inline VarMask bit(std::size_t i) { return VarMask{1} << i; }
inline bool contains(VarMask m, std::size_t i) { return (m >> i) & 1U; }
inline int popcount(VarMask m) { return std::popcount(m); }

/// Calls f(i) for every set bit, lowest first.
template <typename F>
void for_each_bit(VarMask m, F&& f) {
  while (m) {
    int i = std::countr_zero(m);
    f(static_cast<std::size_t>(i));
    m &= m - 1;
  }
}

/// Acyclic directed mixed graph.  Immutable once built.
class Admg {
 public:
  Admg() = default;

  /// Validates and builds a graph.  Node iteration order (nodes()) follows
  /// the input; every set-valued query answers in lexicographic order.
  static Admg build(const std::vector<std::string>& nodes,
                    const std::vector<Edge>& directed,
                    const std::vector<Edge>& bidirected) {
    if (nodes.size() > kMaxVariables)
      throw Error("graphs are limited to " + std::to_string(kMaxVariables) +
                  " variables");
    Admg g;
    g.input_order_ = nodes;
    g.sorted_ = nodes;
    std::sort(g.sorted_.begin(), g.sorted_.end());
    for (std::size_t i = 0; i < g.sorted_.size(); ++i) {
      if (!is_valid_name(g.sorted_[i]))
        throw Error("invalid variable name '" + g.sorted_[i] + "'");
      if (i > 0 && g.sorted_[i] == g.sorted_[i - 1])
        throw DuplicateNode("duplicate node '" + g.sorted_[i] + "'");
      g.index_.emplace(g.sorted_[i], i);
    }
    const std::size_t n = g.sorted_.size();
    g.parents_.assign(n, 0);
    g.children_.assign(n, 0);
    g.siblings_.assign(n, 0);
    auto endpoint = [&](const std::string& name) {
      auto it = g.index_.find(name);
      if (it == g.index_.end())
        throw UnknownEndpoint("edge endpoint '" + name + "' is not a node");
      return it->second;
    };
    for (const auto& [tail, head] : directed) {
      auto t = endpoint(tail), h = endpoint(head);
      if (t == h) throw SelfLoop("self-loop on '" + tail + "'");
      g.parents_[h] |= bit(t);
      g.children_[t] |= bit(h);
    }
    for (const auto& [a, b] : bidirected) {
      auto i = endpoint(a), j = endpoint(b);
      if (i == j) throw SelfLoop("bidirected self-loop on '" + a + "'");
      g.siblings_[i] |= bit(j);
      g.siblings_[j] |= bit(i);
    }
    if (auto cycle = g.find_cycle()) throw CycleError(*cycle);
    return g;
  }

  std::size_t size() const { return sorted_.size(); }
  /// Nodes in input order.
  const std::vector<std::string>& nodes() const { return input_order_; }
  /// Nodes in canonical order; position equals bit index.
  const std::vector<std::string>& sorted_nodes() const { return sorted_; }
  const std::string& name(std::size_t i) const { return sorted_.at(i); }
  VarMask all() const { return size() == 64 ? ~VarMask{0} : bit(size()) - 1; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(std::string_view name) const {
    auto i = find(name);
    if (!i) throw UnknownVariable("unknown variable '" + std::string(name) + "'");
    return *i;
  }
  bool has(std::string_view name) const { return find(name).has_value(); }

  VarMask mask(const NodeSet& s) const {
    VarMask m = 0;
    for (const auto& v : s) m |= bit(index(v));
    return m;
  }
  NodeSet names(VarMask m) const {
    NodeSet out;
    for_each_bit(m, [&](std::size_t i) { out.insert(sorted_[i]); });
    return out;
  }
  NodeSet node_set() const { return NodeSet(sorted_.begin(), sorted_.end()); }

  VarMask parents(std::size_t i) const { return parents_[i]; }
  VarMask children(std::size_t i) const { return children_[i]; }
  VarMask siblings(std::size_t i) const { return siblings_[i]; }

  VarMask parents_of(VarMask s) const { return collect(s, parents_); }
  VarMask children_of(VarMask s) const { return collect(s, children_); }

  /// Reflexive ancestors of s.
  VarMask ancestors(VarMask s) const { return closure(s, parents_); }
  /// Reflexive descendants of s.
  VarMask descendants(VarMask s) const { return closure(s, children_); }

  /// Ancestors of s in the subgraph induced on `within`.
  VarMask ancestors_within(VarMask s, VarMask within) const {
    VarMask seen = s & within, frontier = seen;
    while (frontier) {
      VarMask next = 0;
      for_each_bit(frontier, [&](std::size_t i) { next |= parents_[i]; });
      next &= within & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  bool has_directed(std::size_t tail, std::size_t head) const {
    return contains(children_[tail], head);
  }
  bool has_bidirected(std::size_t a, std::size_t b) const {
    return contains(siblings_[a], b);
  }

  std::size_t directed_count() const {
    std::size_t c = 0;
    for (auto m : children_) c += popcount(m);
    return c;
  }
  std::size_t bidirected_count() const {
    std::size_t c = 0;
    for (auto m : siblings_) c += popcount(m);
    return c / 2;
  }

  /// Directed edges as (tail, head), canonical order.
  std::vector<Edge> directed_edges() const {
    std::vector<Edge> out;
    for (std::size_t t = 0; t < size(); ++t)
      for_each_bit(children_[t], [&](std::size_t h) {
        out.emplace_back(sorted_[t], sorted_[h]);
      });
    return out;
  }
  /// Bidirected edges with the lexicographically smaller endpoint first.
  std::vector<Edge> bidirected_edges() const {
    std::vector<Edge> out;
    for (std::size_t a = 0; a < size(); ++a)
      for_each_bit(siblings_[a] & ~(bit(a + 1) - 1), [&](std::size_t b) {
        out.emplace_back(sorted_[a], sorted_[b]);
      });
    return out;
  }

  /// G with arrowheads into `over` and tails out of `under` removed.
  Admg mutilate(VarMask over, VarMask under) const {
    if (over & under)
      throw OverlappingSets("mutilation sets overlap: " + join(names(over & under)));
    Admg g = *this;
    for (std::size_t i = 0; i < size(); ++i) {
      if (contains(over, i)) {
        g.parents_[i] = 0;
        g.siblings_[i] = 0;
      } else {
        g.parents_[i] &= ~under;
        g.siblings_[i] &= ~over;
      }
      if (contains(under, i)) g.children_[i] = 0;
      g.children_[i] &= ~over;
    }
    return g;
  }
  Admg mutilate(const NodeSet& over, const NodeSet& under) const {
    return mutilate(mask(over), mask(under));
  }

  /// Subgraph with only the listed edges removed or kept; used by generators.
  Admg with_edges(const std::vector<Edge>& directed,
                  const std::vector<Edge>& bidirected) const {
    return build(input_order_, directed, bidirected);
  }

  /// Subgraph induced on `keep`, node order preserved.
  Admg induced(VarMask keep) const {
    std::vector<std::string> nodes;
    for (const auto& v : input_order_)
      if (contains(keep, index(v))) nodes.push_back(v);
    std::vector<Edge> d, b;
    for (auto& e : directed_edges())
      if (contains(keep, index(e.first)) && contains(keep, index(e.second)))
        d.push_back(e);
    for (auto& e : bidirected_edges())
      if (contains(keep, index(e.first)) && contains(keep, index(e.second)))
        b.push_back(e);
    return build(nodes, d, b);
  }

  /// Topological order (indices); ties broken by name.
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> order;
    VarMask placed = 0;
    while (order.size() < size()) {
      for (std::size_t i = 0; i < size(); ++i) {
        if (!contains(placed, i) && (parents_[i] & ~placed) == 0) {
          order.push_back(i);
          placed |= bit(i);
          break;
        }
      }
    }
    return order;
  }

  friend bool operator==(const Admg& a, const Admg& b) {
    return a.sorted_ == b.sorted_ && a.parents_ == b.parents_ &&
           a.siblings_ == b.siblings_;
  }

  static std::string join(const NodeSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
      if (!first) out += ",";
      out += v;
      first = false;
    }
    return out + "}";
  }

 private:
  VarMask collect(VarMask s, const std::vector<VarMask>& rel) const {
    VarMask out = 0;
    for_each_bit(s, [&](std::size_t i) { out |= rel[i]; });
    return out;
  }
  VarMask closure(VarMask s, const std::vector<VarMask>& rel) const {
    VarMask seen = s, frontier = s;
    while (frontier) {
      VarMask next = collect(frontier, rel) & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  std::optional<std::vector<std::string>> find_cycle() const {
    const std::size_t n = size();
    std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> stack;
    std::optional<std::vector<std::string>> found;
    auto dfs = [&](auto&& self, std::size_t v) -> bool {
      state[v] = 1;
      stack.push_back(v);
      bool hit = false;
      for_each_bit(children_[v], [&](std::size_t w) {
        if (hit) return;
        if (state[w] == 1) {
          auto it = std::find(stack.begin(), stack.end(), w);
          std::vector<std::string> cycle;
          for (; it != stack.end(); ++it) cycle.push_back(sorted_[*it]);
          cycle.push_back(sorted_[w]);
          found = cycle;
          hit = true;
        } else if (state[w] == 0) {
          hit = self(self, w);
        }
      });
      stack.pop_back();
      state[v] = 2;
      return hit;
    };
    for (const auto& name : input_order_) {
      auto v = index_.at(name);
      if (state[v] == 0 && dfs(dfs, v)) return found;
    }
    return std::nullopt;
  }

  std::vector<std::string> input_order_;
  std::vector<std::string> sorted_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<VarMask> parents_;
  std::vector<VarMask> children_;
  std::vector<VarMask> siblings_;
};

enum class Kinship { Parents, Children, Ancestors, Descendants };

/// Union of the requested relatives over the members of s.
inline NodeSet kinship(const Admg& g, Kinship which, const NodeSet& s) {
  VarMask m = g.mask(s);
  switch (which) {
    case Kinship::Parents: return g.names(g.parents_of(m));
    case Kinship::Children: return g.names(g.children_of(m));
    case Kinship::Ancestors: return g.names(g.ancestors(m));
    case Kinship::Descendants: return g.names(g.descendants(m));
  }
  return {};
}

inline Admg mutilate(const Admg& g, const NodeSet& over, const NodeSet& under) {
  return g.mutilate(over, under);
}

/// g1 ⊆ g2: node set and both edge sets included, compared by name.
inline bool is_subgraph(const Admg& g1, const Admg& g2) {
  for (const auto& v : g1.sorted_nodes())
    if (!g2.has(v)) return false;
  for (const auto& [t, h] : g1.directed_edges())
    if (!g2.has_directed(g2.index(t), g2.index(h))) return false;
  for (const auto& [a, b] : g1.bidirected_edges())
    if (!g2.has_bidirected(g2.index(a), g2.index(b))) return false;
  return true;
}

/// Throws OverlappingSets unless the masks are pairwise disjoint.
inline void require_disjoint(const Admg& g, std::initializer_list<VarMask> sets) {
  VarMask seen = 0;
  for (VarMask s : sets) {
    if (seen & s)
      throw OverlappingSets("sets are not pairwise disjoint: " +
                            Admg::join(g.names(seen & s)) + " repeated");
    seen |= s;
  }
}

}  // namespace causalid
