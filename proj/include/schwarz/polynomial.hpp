#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "schwarz/error.hpp"
#include "schwarz/scalar.hpp"

namespace schwarz {

using Complex = std::complex<long double>;

/// Dense polynomial, coefficients from the constant term upward. Trailing
/// exact zeros are trimmed; the zero polynomial has no coefficients.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }
  static Polynomial constant(const T& v) { return Polynomial(std::vector<T>{v}); }
  /// The monomial w.
  static Polynomial x() { return Polynomial(std::vector<T>{from_int<T>(0), from_int<T>(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero_poly() const { return c_.empty(); }
  T operator[](int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : from_int<T>(0); }
  const std::vector<T>& coeffs() const { return c_; }
  T leading() const { return c_.empty() ? from_int<T>(0) : c_.back(); }

  T operator()(const T& z) const {
    T r = from_int<T>(0);
    for (int k = degree(); k >= 0; --k) r = r * z + c_[k];
    return r;
  }
  Complex eval_complex(Complex z) const {
    Complex r = 0;
    for (int k = degree(); k >= 0; --k) r = r * z + static_cast<long double>(to_double(c_[k]));
    return r;
  }

  Polynomial derivative() const {
    std::vector<T> d;
    for (int k = 1; k <= degree(); ++k) d.push_back(from_int<T>(k) * c_[k]);
    return Polynomial(std::move(d));
  }

  /// w -> p(w + s).
  Polynomial shifted(const T& s) const {
    std::vector<T> a = c_;
    int n = degree();
    for (int i = 0; i < n; ++i)
      for (int k = n - 1; k >= i; --k) a[k] += s * a[k + 1];
    return Polynomial(std::move(a));
  }

  /// this o inner.
  Polynomial compose(const Polynomial& inner) const {
    Polynomial r;
    for (int k = degree(); k >= 0; --k) r = r * inner + constant(c_[k]);
    return r;
  }

  /// Exact-zero coefficients are dropped; used after float cancellation.
  void trim() {
    while (!c_.empty() && c_.back() == from_int<T>(0)) c_.pop_back();
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), from_int<T>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), from_int<T>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, from_int<T>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const T& s, const Polynomial& a) {
    std::vector<T> c = a.c_;
    for (T& v : c) v *= s;
    return Polynomial(std::move(c));
  }
  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  /// Euclidean division: a = q b + r with deg r < deg b.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero_poly()) throw Error(ErrorCode::kDivisionByZero, "polynomial division by zero");
    std::vector<T> r = a.c_;
    int db = b.degree();
    if (a.degree() < db) return {Polynomial(), a};
    std::vector<T> q(a.degree() - db + 1, from_int<T>(0));
    for (int k = a.degree() - db; k >= 0; --k) {
      T coef = r[k + db] / b.c_[db];
      q[k] = coef;
      for (int j = 0; j <= db; ++j) r[k + j] -= coef * b.c_[j];
      r[k + db] = from_int<T>(0);
    }
    r.resize(db);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
  }

  /// Monic gcd; exact backend only.
  static Polynomial gcd(Polynomial a, Polynomial b) {
    static_assert(kIsExact<T>, "polynomial gcd needs exact arithmetic");
    while (!b.is_zero_poly()) {
      auto r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero_poly()) return a;
    T lead = a.leading();
    for (T& v : a.c_) v /= lead;
    return a;
  }

 private:
  std::vector<T> c_;
};

}  // namespace schwarz
