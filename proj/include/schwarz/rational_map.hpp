#pragma once

// Real rational maps p/q written in powers of w = z - base, with q(0) = 1.

#include <optional>
#include <utility>

#include "schwarz/jet.hpp"
#include "schwarz/polynomial.hpp"

namespace schwarz {

template <class T>
class RationalMap {
 public:
  RationalMap() : base_(from_int<T>(0)), p_(), q_(Polynomial<T>::constant(from_int<T>(1))) {}
  RationalMap(T base, Polynomial<T> p, Polynomial<T> q)
      : base_(std::move(base)), p_(std::move(p)), q_(std::move(q)) {
    normalize();
  }

  static RationalMap constant(const T& base, const T& v) {
    return RationalMap(base, Polynomial<T>::constant(v), Polynomial<T>::constant(from_int<T>(1)));
  }
  /// (a z + b)/(c z + d) expanded about base.
  static RationalMap mobius(const T& a, const T& b, const T& c, const T& d, const T& base) {
    Polynomial<T> p(std::vector<T>{a * base + b, a});
    Polynomial<T> q(std::vector<T>{c * base + d, c});
    return RationalMap(base, p, q);
  }

  const T& base() const { return base_; }
  const Polynomial<T>& p() const { return p_; }
  const Polynomial<T>& q() const { return q_; }

  /// Value at z, or nullopt at a pole.
  std::optional<T> operator()(const T& z) const {
    T w = z - base_;
    T den = q_(w);
    T num = p_(w);
    if (is_zero(den, std::max(1.0, ScalarTraits<T>::magnitude(num)))) return std::nullopt;
    return num / den;
  }
  std::optional<Complex> eval_complex(Complex z) const {
    Complex w = z - static_cast<long double>(to_double(base_));
    Complex den = q_.eval_complex(w);
    if (den == Complex(0)) return std::nullopt;
    return p_.eval_complex(w) / den;
  }

  Jet<T> jet(int order) const {
    return Jet<T>(base_, series::div(p_.coeffs(), q_.coeffs(), order));
  }

  /// Same map expanded about another point; throws Pole if it is one.
  RationalMap recentered(const T& new_base) const {
    T s = new_base - base_;
    Polynomial<T> p = p_.shifted(s), q = q_.shifted(s);
    if (is_zero(q[0], 1.0))
      throw Error(ErrorCode::kPole, "pole at " + to_string(new_base));
    return RationalMap(new_base, p, q);
  }

  /// Cancels the common factor (exact backend only).
  RationalMap reduced() const {
    if constexpr (kIsExact<T>) {
      if (p_.is_zero_poly()) return constant(base_, from_int<T>(0));
      Polynomial<T> g = Polynomial<T>::gcd(p_, q_);
      if (g.degree() <= 0) return *this;
      return RationalMap(base_, Polynomial<T>::divmod(p_, g).first,
                         Polynomial<T>::divmod(q_, g).first);
    } else {
      return *this;
    }
  }

  /// max(deg p, deg q) after gcd reduction. In the float backend no reduction
  /// happens and `reduced_flag` (if given) is set to false.
  int degree(bool* reduced_flag = nullptr) const {
    if (reduced_flag) *reduced_flag = kIsExact<T>;
    const RationalMap r = reduced();
    return std::max(std::max(r.p_.degree(), r.q_.degree()), 0);
  }

  /// DR(base) = P_1 - P_0 Q_1.
  T derivative_at_base() const { return p_[1] - p_[0] * q_[1]; }

  bool operator==(const RationalMap& o) const {
    return base_ == o.base_ && p_ == o.p_ && q_ == o.q_;
  }

 private:
  void normalize() {
    T q0 = q_[0];
    if (is_zero(q0, 1.0, 0.0))
      throw Error(ErrorCode::kPole, "denominator vanishes at the base point");
    if (q0 != from_int<T>(1)) {
      T inv = from_int<T>(1) / q0;
      p_ = inv * p_;
      q_ = inv * q_;
    }
  }

  T base_;
  Polynomial<T> p_, q_;
};

/// outer o inner, expanded about inner's base. Numerator and denominator are
/// sum P_i a^i b^(n-i) and sum Q_i a^i b^(n-i) with a/b = inner - outer.base.
template <class T>
RationalMap<T> compose(const RationalMap<T>& outer, const RationalMap<T>& inner) {
  Polynomial<T> a = inner.p() - outer.base() * inner.q();
  const Polynomial<T>& b = inner.q();
  int n = std::max(outer.p().degree(), outer.q().degree());
  if (n < 0) n = 0;
  std::vector<Polynomial<T>> apow{Polynomial<T>::constant(from_int<T>(1))};
  std::vector<Polynomial<T>> bpow{Polynomial<T>::constant(from_int<T>(1))};
  for (int i = 1; i <= n; ++i) {
    apow.push_back(apow.back() * a);
    bpow.push_back(bpow.back() * b);
  }
  Polynomial<T> num, den;
  for (int i = 0; i <= n; ++i) {
    Polynomial<T> term = apow[i] * bpow[n - i];
    num = num + outer.p()[i] * term;
    den = den + outer.q()[i] * term;
  }
  if (is_zero(den[0], 1.0, 0.0))
    throw Error(ErrorCode::kPole, "composite has a pole at the base point");
  return RationalMap<T>(inner.base(), num, den);
}

/// The Pick transform of R at its base point, as a rational map:
/// (1 - DR w / (R - R(x))) / w.
template <class T>
RationalMap<T> pick_step(const RationalMap<T>& r) {
  // R - R(x) = N / q with N = p - P0 q = w N1.
  Polynomial<T> n = r.p() - r.p()[0] * r.q();
  std::vector<T> n1c(n.coeffs().begin() + (n.degree() >= 0 ? 1 : 0), n.coeffs().end());
  Polynomial<T> n1(n1c);
  T dr = n1[0];
  if (is_zero(dr, 1.0, 0.0))
    throw Error(ErrorCode::kCriticalPoint, "Pick step at a critical point of a rational map");
  Polynomial<T> top = n1 - dr * r.q();  // vanishes at 0
  std::vector<T> tc(top.coeffs().begin() + (top.degree() >= 0 ? 1 : 0), top.coeffs().end());
  RationalMap<T> t(r.base(), Polynomial<T>(tc), n1);
  return t.reduced();
}

template <class T>
RationalMap<T> map_from_rational(const RationalMap<Rational>& m) {
  std::vector<T> p, q;
  for (const Rational& v : m.p().coeffs()) p.push_back(from_rational<T>(v));
  for (const Rational& v : m.q().coeffs()) q.push_back(from_rational<T>(v));
  return RationalMap<T>(from_rational<T>(m.base()), Polynomial<T>(p), Polynomial<T>(q));
}

}  // namespace schwarz
