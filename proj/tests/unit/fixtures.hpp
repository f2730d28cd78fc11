#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "causalid/causalid.hpp"

namespace fixtures {

using namespace causalid;

inline Admg chain() { return Admg::build({"X", "Y"}, {{"X", "Y"}}, {}); }
inline Admg reversed() { return Admg::build({"X", "Y"}, {{"Y", "X"}}, {}); }
inline Admg bow() { return Admg::build({"X", "Y"}, {{"X", "Y"}}, {{"X", "Y"}}); }

inline Admg frontdoor() {
  return Admg::build({"X", "M", "Y"}, {{"X", "M"}, {"M", "Y"}}, {{"X", "Y"}});
}

inline Admg napkin() {
  return Admg::build({"W", "Z", "X", "Y"}, {{"W", "Z"}, {"Z", "X"}, {"X", "Y"}},
                     {{"W", "X"}, {"W", "Y"}});
}

inline Admg backdoor_left() {
  return Admg::build({"X", "Y", "Z", "U", "V"},
                     {{"Z", "X"}, {"X", "Y"}, {"U", "Z"}, {"V", "Z"}, {"U", "V"}, {"V", "Y"}}, {});
}

inline Admg backdoor_right() {
  return Admg::build({"X", "Y", "Z", "U", "V"},
                     {{"Z", "X"}, {"X", "Y"}, {"U", "Z"}, {"V", "Z"}, {"V", "U"}, {"U", "Y"}}, {});
}

inline Query effect() { return Query{{"Y"}, {"X"}, {}, {}}; }

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(CAUSALID_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Exact validation of an estimand on several random models of g.
inline Rational worst_error(const Admg& g, const Expr& e, const Query& q, int models,
                            std::uint64_t seed = 1) {
  Rational worst = 0;
  for (int i = 0; i < models; ++i) {
    auto m = random_scm(g, binary_domains(g.sorted_nodes()), seed + i);
    auto rep = validate_estimand(m, e, q);
    if (rep.max_error > worst) worst = rep.max_error;
  }
  return worst;
}

}  // namespace fixtures
