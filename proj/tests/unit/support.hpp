#pragma once

#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "schwarz/jet.hpp"

namespace schwarz::test {

inline Rational Q(const std::string& s) { return parse_rational(s); }

inline std::vector<Rational> qv(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(parse_rational(x));
  return v;
}

/// Taylor jet of e^z at 0.
inline Jet<Rational> exp_jet(int order) {
  std::vector<Rational> c;
  Rational f(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) f /= k;
    c.push_back(f);
  }
  return Jet<Rational>(Rational(0), c);
}

/// z/(1-z) at 0: all F_k = 1 past the constant.
inline Jet<Rational> mobius_jet(int order) {
  std::vector<Rational> c(order + 1, Rational(1));
  c[0] = 0;
  return Jet<Rational>(Rational(0), c);
}

inline bool rel_close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
}

}  // namespace schwarz::test
