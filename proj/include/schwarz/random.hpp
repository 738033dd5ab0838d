#pragma once

// Seeded generators for property tests and sweeps.

#include <cstdint>
#include <random>
#include <vector>

#include "schwarz/jet.hpp"
#include "schwarz/schwarzian.hpp"

namespace schwarz {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  /// p/q with 1 <= q <= max_den and |p/q| <= bound.
  Rational rational(long bound, long max_den) {
    long q = integer(1, max_den);
    long p = integer(-bound * q, bound * q);
    return ScalarTraits<Rational>::from_ratio(p, q);
  }
  Rational positive_rational(long bound, long max_den) {
    long q = integer(1, max_den);
    long p = integer(1, bound * q);
    return ScalarTraits<Rational>::from_ratio(p, q);
  }

  Jet<Rational> jet(int order, long bound, long max_den, const Rational& base = Rational(0)) {
    std::vector<Rational> c;
    for (int k = 0; k <= order; ++k) c.push_back(rational(bound, max_den));
    return Jet<Rational>(base, std::move(c));
  }

  /// Random p/q of degree <= d with q(0) = 1.
  RationalMap<Rational> rational_map(int d, long bound, long max_den,
                                     const Rational& base = Rational(0)) {
    std::vector<Rational> p, q{Rational(1)};
    for (int k = 0; k <= d; ++k) p.push_back(rational(bound, max_den));
    for (int k = 1; k <= d; ++k) q.push_back(rational(bound, max_den));
    return RationalMap<Rational>(base, Polynomial<Rational>(p), Polynomial<Rational>(q));
  }

  /// Continued fraction about `base` with d levels. mu_k > 0 when
  /// `positive`; otherwise at least one mu_k < 0.
  ContinuedFractionRep<Rational> continued_fraction(int d, const Rational& base, bool positive = true) {
    ContinuedFractionRep<Rational> rep{base, {}, {}};
    for (int k = 0; k <= d; ++k) rep.A.push_back(rational(3, 4));
    for (int k = 0; k < d; ++k) rep.mu.push_back(positive_rational(3, 4));
    if (!positive && d > 0) {
      int flip = static_cast<int>(integer(0, d - 1));
      for (int k = 0; k < d; ++k)
        if (k == flip || integer(0, 2) == 0) rep.mu[k] = -rep.mu[k];
    }
    return rep;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace schwarz
