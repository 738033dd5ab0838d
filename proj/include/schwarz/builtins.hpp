#pragma once

// Closed-form jets shared by the CLI and the invariant suite.

#include <cmath>
#include <vector>

#include "schwarz/error.hpp"
#include "schwarz/jet.hpp"

namespace schwarz {

/// e^z at 0. Other rational points have irrational coefficients.
inline Jet<Rational> exp_jet(const Rational& x, int order) {
  if (x != 0) throw Error(ErrorCode::kInvalidArgument, "exp jets are exact at 0 only; use the float backend");
  std::vector<Rational> c;
  Rational f(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) f /= k;
    c.push_back(f);
  }
  return Jet<Rational>(x, c);
}

inline Jet<double> exp_jet(double x, int order) {
  std::vector<double> c;
  double e = std::exp(x), f = 1;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) f /= k;
    c.push_back(e * f);
  }
  return Jet<double>(x, c);
}

}  // namespace schwarz
