#pragma once

// Closed intervals with MPFR endpoints and outward rounding. Used to certify
// signs when exact numbers become too large to handle.

#include <mpfr.h>

#include <optional>
#include <string>
#include <vector>

#include "schwarz/scalar.hpp"

namespace schwarz {

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 128);
  Interval(const Interval& o);
  Interval(Interval&& o) noexcept;
  Interval& operator=(const Interval& o);
  Interval& operator=(Interval&& o) noexcept;
  ~Interval();

  static Interval from_rational(const Rational& r, mpfr_prec_t prec);
  static Interval from_integer(const Integer& n, mpfr_prec_t prec);
  static Interval from_int(long n, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  Interval operator+(const Interval& o) const;
  Interval operator-(const Interval& o) const;
  Interval operator-() const;
  Interval operator*(const Interval& o) const;
  /// Throws DivisionByZero when o contains 0.
  Interval operator/(const Interval& o) const;
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }

  /// +1 / -1 when certain, 0 when the interval contains 0.
  int sign() const;
  bool contains_zero() const { return sign() == 0; }
  bool certainly_above(const Rational& r) const;
  bool certainly_below(const Rational& r) const;
  bool contains(const Rational& r) const { return !certainly_above(r) && !certainly_below(r); }

  double mid() const;
  double lower() const;
  double upper() const;
  /// Relative width as a power of two (log2 of width/|mid|), or +inf if mid = 0.
  double log2_rel_width() const;
  std::string to_string(int digits = 17) const;

 private:
  mpfr_t lo_, hi_;
};

/// Determinant by cofactor expansion over column subsets; n <= 20.
Interval interval_determinant(const std::vector<std::vector<Interval>>& m, mpfr_prec_t prec);

}  // namespace schwarz
