#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalid/error.hpp"
#include "causalid/rational.hpp"

namespace causalid {

/// Finite value lists per variable.
using DomainSpec = std::map<std::string, std::vector<int>>;

inline DomainSpec binary_domains(const std::vector<std::string>& vars) {
  DomainSpec spec;
  for (const auto& v : vars) spec[v] = {0, 1};
  return spec;
}

/// Full joint table over an ordered variable list.  Cells are laid out in
/// mixed radix with the first variable most significant.
template <typename Scalar>
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::vector<std::string> vars, std::vector<std::vector<int>> domains)
      : vars_(std::move(vars)), domains_(std::move(domains)) {
    if (vars_.size() != domains_.size()) throw Error("variable/domain count mismatch");
    std::size_t cells = 1;
    for (const auto& d : domains_) {
      if (d.empty()) throw Error("empty domain");
      cells *= d.size();
    }
    table_.assign(cells, Scalar(0));
  }

  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<int>& domain(std::size_t i) const { return domains_.at(i); }
  const std::vector<std::vector<int>>& domains() const { return domains_; }
  std::size_t size() const { return table_.size(); }

  std::optional<std::size_t> position(const std::string& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
  }
  std::size_t require(const std::string& var) const {
    auto p = position(var);
    if (!p) throw UnknownVariable("variable '" + var + "' is not in the distribution");
    return *p;
  }
  std::size_t value_index(std::size_t var, int value) const {
    const auto& d = domains_.at(var);
    auto it = std::find(d.begin(), d.end(), value);
    if (it == d.end())
      throw OutOfDomainValue("value " + std::to_string(value) + " outside the domain of " +
                             vars_[var]);
    return static_cast<std::size_t>(it - d.begin());
  }

  Scalar& operator[](std::size_t cell) { return table_[cell]; }
  const Scalar& operator[](std::size_t cell) const { return table_[cell]; }
  const std::vector<Scalar>& table() const { return table_; }

  /// Value indices of a cell, one per variable.
  std::vector<std::size_t> indices(std::size_t cell) const {
    std::vector<std::size_t> out(vars_.size());
    for (std::size_t i = vars_.size(); i-- > 0;) {
      out[i] = cell % domains_[i].size();
      cell /= domains_[i].size();
    }
    return out;
  }
  std::vector<int> values(std::size_t cell) const {
    auto idx = indices(cell);
    std::vector<int> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = domains_[i][idx[i]];
    return out;
  }
  std::size_t cell(const std::vector<std::size_t>& idx) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) c = c * domains_[i].size() + idx[i];
    return c;
  }

  Scalar total() const {
    Scalar s(0);
    for (const auto& p : table_) s += p;
    return s;
  }

  /// Probability of a partial assignment (variable -> value).
  Scalar probability(const std::map<std::string, int>& event) const {
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    for (const auto& [var, value] : event) {
      auto p = require(var);
      fixed.emplace_back(p, value_index(p, value));
    }
    Scalar s(0);
    for (std::size_t c = 0; c < table_.size(); ++c) {
      auto idx = indices(c);
      bool match = std::all_of(fixed.begin(), fixed.end(),
                               [&](const auto& f) { return idx[f.first] == f.second; });
      if (match) s += table_[c];
    }
    return s;
  }

  /// Marginal over `keep`, in the given order.
  Distribution marginal(const std::vector<std::string>& keep) const {
    std::vector<std::size_t> pos;
    std::vector<std::vector<int>> doms;
    for (const auto& v : keep) {
      pos.push_back(require(v));
      doms.push_back(domains_[pos.back()]);
    }
    Distribution out(keep, doms);
    std::vector<std::size_t> sub(pos.size());
    for (std::size_t c = 0; c < table_.size(); ++c) {
      auto idx = indices(c);
      for (std::size_t i = 0; i < pos.size(); ++i) sub[i] = idx[pos[i]];
      out.table_[out.cell(sub)] += table_[c];
    }
    return out;
  }

  template <typename Other>
  Distribution<Other> convert() const {
    Distribution<Other> out(vars_, domains_);
    for (std::size_t c = 0; c < table_.size(); ++c) out[c] = convert_scalar<Other>(table_[c]);
    return out;
  }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.vars_ == b.vars_ && a.domains_ == b.domains_ && a.table_ == b.table_;
  }

 private:
  template <typename Other>
  static Other convert_scalar(const Scalar& s) {
    if constexpr (std::is_same_v<Other, double>) {
      return to_double(s);
    } else {
      return Other(s);
    }
  }

  std::vector<std::string> vars_;
  std::vector<std::vector<int>> domains_;
  std::vector<Scalar> table_;
};

using ExactDistribution = Distribution<Rational>;

}  // namespace causalid
