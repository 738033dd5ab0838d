#pragma once

// Scalar backends. Rational is exact (GMP, always canonical); double is the
// float backend with a caller-scaled zero test.

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

#include "schwarz/error.hpp"

namespace schwarz {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr double kDefaultTau = 0x1p-40;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static constexpr const char* kName = "exact";

  static Rational from_int(long v) { return Rational(v); }
  static Rational from_ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  static bool is_zero(const Rational& v, double = 1.0, double = kDefaultTau) {
    return sgn(v) == 0;
  }
  static int sign(const Rational& v, double = 1.0, double = kDefaultTau) {
    return sgn(v);
  }
  static double to_double(const Rational& v) { return v.get_d(); }
  static double magnitude(const Rational& v) { return std::fabs(v.get_d()); }
  static bool same_point(const Rational& a, const Rational& b) { return a == b; }
  static std::string to_string(const Rational& v) { return v.get_str(); }
  static Rational parse(std::string_view s);
};

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static constexpr const char* kName = "float";

  static double from_int(long v) { return static_cast<double>(v); }
  static double from_ratio(long p, long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static bool is_zero(double v, double scale = 1.0, double tau = kDefaultTau) {
    return std::fabs(v) <= tau * scale;
  }
  static int sign(double v, double scale = 1.0, double tau = kDefaultTau) {
    if (is_zero(v, scale, tau)) return 0;
    return v > 0 ? 1 : -1;
  }
  static double to_double(double v) { return v; }
  static double magnitude(double v) { return std::fabs(v); }
  static bool same_point(double a, double b) {
    double s = std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
    return std::fabs(a - b) <= 1e-12 * s;
  }
  static std::string to_string(double v);
  static double parse(std::string_view s);
};

template <class T>
inline constexpr bool kIsExact = ScalarTraits<T>::kExact;

template <class T>
bool is_zero(const T& v, double scale = 1.0, double tau = kDefaultTau) {
  return ScalarTraits<T>::is_zero(v, scale, tau);
}

template <class T>
int sign_of(const T& v, double scale = 1.0, double tau = kDefaultTau) {
  return ScalarTraits<T>::sign(v, scale, tau);
}

template <class T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

template <class T>
std::string to_string(const T& v) {
  return ScalarTraits<T>::to_string(v);
}

template <class T>
T from_int(long v) {
  return ScalarTraits<T>::from_int(v);
}

template <class T>
T factorial(int n) {
  T r = from_int<T>(1);
  for (int i = 2; i <= n; ++i) r *= from_int<T>(i);
  return r;
}

// Converts an exact rational into the target backend.
template <class T>
T from_rational(const Rational& r) {
  if constexpr (std::is_same_v<T, Rational>) {
    return r;
  } else {
    return r.get_d();
  }
}

/// Parses "p/q", an integer, or a decimal ("0.125", "1e-3") into an exact
/// rational. Decimals are converted exactly.
Rational parse_rational(std::string_view s);

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

/// mpz/mpz as a double without overflow for huge operands.
double ratio_to_double(const Integer& num, const Integer& den);

inline Rational ScalarTraits<Rational>::parse(std::string_view s) {
  return parse_rational(s);
}
inline std::string ScalarTraits<double>::to_string(double v) {
  return format_double(v);
}

}  // namespace schwarz
