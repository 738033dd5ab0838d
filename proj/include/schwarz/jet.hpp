#pragma once

// Truncated Taylor expansions. Coefficients are F_k = D^k f(x) / k!.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "schwarz/error.hpp"
#include "schwarz/scalar.hpp"

namespace schwarz {

template <class T>
class Jet {
 public:
  Jet() : base_(from_int<T>(0)), coeffs_{from_int<T>(0)} {}
  Jet(T base, std::vector<T> coeffs) : base_(std::move(base)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorCode::kInvalidArgument, "jet needs at least one coefficient");
  }

  static Jet constant(const T& base, const T& value, int order) {
    std::vector<T> c(order + 1, from_int<T>(0));
    c[0] = value;
    return Jet(base, std::move(c));
  }
  /// z -> z expanded at base.
  static Jet identity(const T& base, int order) {
    std::vector<T> c(order + 1, from_int<T>(0));
    c[0] = base;
    if (order >= 1) c[1] = from_int<T>(1);
    return Jet(base, std::move(c));
  }
  static Jet from_derivatives(const T& base, const std::vector<T>& derivs) {
    std::vector<T> c(derivs.size());
    T fact = from_int<T>(1);
    for (std::size_t k = 0; k < derivs.size(); ++k) {
      if (k > 0) fact *= from_int<T>(static_cast<long>(k));
      c[k] = derivs[k] / fact;
    }
    return Jet(base, std::move(c));
  }

  const T& base() const { return base_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const T& operator[](int k) const { return coeffs_.at(k); }
  const std::vector<T>& coeffs() const { return coeffs_; }
  const T& value() const { return coeffs_[0]; }

  /// D^k f(base) = k! F_k.
  T derivative(int k) const { return factorial<T>(k) * coeffs_.at(k); }

  Jet truncated(int order) const {
    if (order > this->order())
      throw Error(ErrorCode::kOrderTooSmall, "cannot extend a jet by truncation");
    return Jet(base_, std::vector<T>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

  /// Largest |F_k|, used as the scale of float zero tests.
  double scale() const {
    double s = 0;
    for (const T& c : coeffs_) s = std::max(s, ScalarTraits<T>::magnitude(c));
    return s;
  }

  bool operator==(const Jet& o) const { return base_ == o.base_ && coeffs_ == o.coeffs_; }

 private:
  T base_;
  std::vector<T> coeffs_;
};

namespace series {

// Plain coefficient-vector helpers shared by jets, rational maps and the scan.

template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b, int order) {
  std::vector<T> c(order + 1, from_int<T>(0));
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if (is_zero(a[i], 1.0, 0.0)) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

/// a / b; b[0] must be nonzero.
template <class T>
std::vector<T> div(const std::vector<T>& a, const std::vector<T>& b, int order) {
  std::vector<T> q(order + 1, from_int<T>(0));
  for (int k = 0; k <= order; ++k) {
    T acc = k < static_cast<int>(a.size()) ? a[k] : from_int<T>(0);
    for (int j = 1; j <= k && j < static_cast<int>(b.size()); ++j) acc -= b[j] * q[k - j];
    q[k] = acc / b[0];
  }
  return q;
}

/// outer(u) for a series u with u[0] == 0 (Horner).
template <class T>
std::vector<T> compose_centered(const std::vector<T>& outer, const std::vector<T>& u, int order) {
  std::vector<T> r(order + 1, from_int<T>(0));
  for (int k = std::min(order, static_cast<int>(outer.size()) - 1); k >= 0; --k) {
    r = mul(r, u, order);
    r[0] += outer[k];
  }
  return r;
}

}  // namespace series

template <class T>
void require_same_base(const Jet<T>& a, const Jet<T>& b) {
  if (!ScalarTraits<T>::same_point(a.base(), b.base()))
    throw Error(ErrorCode::kBaseMismatch, "jets based at " + to_string(a.base()) + " and " +
                                              to_string(b.base()));
}

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  require_same_base(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<T> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = a[k] + b[k];
  return Jet<T>(a.base(), std::move(c));
}

template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  require_same_base(a, b);
  int n = std::min(a.order(), b.order());
  std::vector<T> c(n + 1);
  for (int k = 0; k <= n; ++k) c[k] = a[k] - b[k];
  return Jet<T>(a.base(), std::move(c));
}

template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  require_same_base(a, b);
  int n = std::min(a.order(), b.order());
  return Jet<T>(a.base(), series::mul(a.coeffs(), b.coeffs(), n));
}

template <class T>
Jet<T> operator*(const T& s, const Jet<T>& a) {
  std::vector<T> c = a.coeffs();
  for (T& v : c) v *= s;
  return Jet<T>(a.base(), std::move(c));
}

template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  require_same_base(a, b);
  if (is_zero(b[0], b.scale()))
    throw Error(ErrorCode::kDivisionByZero, "jet division by a series with zero constant term");
  int n = std::min(a.order(), b.order());
  return Jet<T>(a.base(), series::div(a.coeffs(), b.coeffs(), n));
}

/// outer o inner; outer must be expanded at inner's value.
template <class T>
Jet<T> compose(const Jet<T>& outer, const Jet<T>& inner) {
  if (!ScalarTraits<T>::same_point(outer.base(), inner[0]))
    throw Error(ErrorCode::kBaseMismatch, "outer jet based at " + to_string(outer.base()) +
                                              " but inner value is " + to_string(inner[0]));
  int n = std::min(outer.order(), inner.order());
  std::vector<T> u = inner.coeffs();
  u.resize(n + 1);
  u[0] = from_int<T>(0);
  return Jet<T>(inner.base(), series::compose_centered(outer.coeffs(), u, n));
}

/// Local inverse, expanded at f(base). Solved coefficient by coefficient
/// from g(f(z)) = z.
template <class T>
Jet<T> reverse(const Jet<T>& f) {
  int n = f.order();
  if (n < 1) throw Error(ErrorCode::kOrderTooSmall, "reversion needs order >= 1");
  if (is_zero(f[1], f.scale()))
    throw Error(ErrorCode::kCriticalPoint, "reversion at a critical point");
  std::vector<T> u = f.coeffs();
  u[0] = from_int<T>(0);
  // powers[j] = u^j truncated at n
  std::vector<std::vector<T>> powers(n + 1);
  powers[1] = u;
  for (int j = 2; j <= n; ++j) powers[j] = series::mul(powers[j - 1], u, n);
  std::vector<T> g(n + 1, from_int<T>(0));
  g[0] = f.base();
  T f1_pow = f[1];
  g[1] = from_int<T>(1) / f[1];
  for (int k = 2; k <= n; ++k) {
    f1_pow *= f[1];
    T acc = from_int<T>(0);
    for (int j = 1; j < k; ++j) acc += g[j] * powers[j][k];
    g[k] = -acc / f1_pow;
  }
  return Jet<T>(f[0], std::move(g));
}

template <class T>
Jet<T> jet_from_rational(const Jet<Rational>& j) {
  std::vector<T> c;
  for (const Rational& v : j.coeffs()) c.push_back(from_rational<T>(v));
  return Jet<T>(from_rational<T>(j.base()), std::move(c));
}

}  // namespace schwarz
