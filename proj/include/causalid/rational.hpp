#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

#include "causalid/error.hpp"

namespace causalid {

/// Exact probabilities.  All oracle computations run on this type.
using Rational = mpq_class;

inline std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string to_string(double d) {
  std::string s = std::to_string(d);
  return s;
}

/// Parses `a`, `a/b` or a decimal literal such as `0.25` exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw Error("empty number");
  auto dot = s.find('.');
  Rational r;
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    if (digits.empty() || digits == "-") throw Error("malformed number: " + s);
    if (r.set_str(digits + "/" + den, 10) != 0)
      throw Error("malformed number: " + s);
  } else if (r.set_str(s, 10) != 0) {
    throw Error("malformed number: " + s);
  }
  if (r.get_den() == 0) throw Error("zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double d) { return d; }

inline Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  return abs(d);
}
inline double abs_diff(double a, double b) { return std::fabs(a - b); }

}  // namespace causalid
