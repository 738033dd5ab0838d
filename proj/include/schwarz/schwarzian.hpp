#pragma once

// Higher-order Schwarzian derivatives S_d and the Pick algorithm on jets.

#include <optional>
#include <string>
#include <vector>

#include "schwarz/pade.hpp"

namespace schwarz {

enum class SFlag { kDefined, kNotNormal };

template <class T>
struct SchwarzianSequence {
  T base;
  std::vector<T> values;     // S_0..S_d; entries past a failure are zero
  std::vector<SFlag> flags;  // per k

  int d() const { return static_cast<int>(values.size()) - 1; }
  bool defined(int k) const { return flags.at(k) == SFlag::kDefined; }
  bool all_defined() const {
    for (SFlag f : flags)
      if (f != SFlag::kDefined) return false;
    return true;
  }
};

template <class T>
struct ContinuedFractionRep {
  T base;
  std::vector<T> A;   // A_0..A_d
  std::vector<T> mu;  // mu_0..mu_{d-1}
  int failed_level = -1;  // first k with mu_k = 0, -1 when complete

  bool complete() const { return failed_level < 0; }
  int d() const { return static_cast<int>(mu.size()); }
};

namespace detail {

template <class T>
void require_noncritical(const Jet<T>& f) {
  if (is_zero(f[1], std::max(1.0, f.scale())))
    throw Error(ErrorCode::kCriticalPoint, "vanishing derivative at " + to_string(f.base()));
}

}  // namespace detail

/// (2d+1)! det M_{d+1} / (Df det M_d).
template <class T>
T schwarzian_det(const Jet<T>& f, int d) {
  require_order(f, 2 * d + 1, "schwarzian_det");
  detail::require_noncritical(f);
  if (d == 0) return from_int<T>(1);
  T md = hankel_det(f, d);
  if (is_zero(md, hankel_scale(f, d)))
    throw Error(ErrorCode::kNotNormal, "not normal of order " + std::to_string(d),
                classify_non_normal(f.truncated(2 * d), d), d);
  return factorial<T>(2 * d + 1) * hankel_det(f, d + 1) / (f[1] * md);
}

/// D^{2d+1}(f - [f]_d)(x) / Df(x) with the normal approximant.
template <class T>
T schwarzian_defect(const Jet<T>& f, int d) {
  require_order(f, 2 * d + 1, "schwarzian_defect");
  detail::require_noncritical(f);
  if (d == 0) return from_int<T>(1);
  RationalMap<T> r = pade_approximant(f.truncated(2 * d), d);
  Jet<T> rj = r.jet(2 * d + 1);
  return factorial<T>(2 * d + 1) * (f[2 * d + 1] - rj[2 * d + 1]) / f[1];
}

/// S_d whenever it exists: the defect against the d'th approximant, which
/// may be degenerate (lower degree). Rational maps of degree <= d give 0.
template <class T>
T schwarzian(const Jet<T>& f, int d) {
  require_order(f, 2 * d + 1, "schwarzian");
  detail::require_noncritical(f);
  if (d == 0) return from_int<T>(1);
  auto r = pade_if_exists(f.truncated(2 * d), d);
  if (!r)
    throw Error(ErrorCode::kNotNormal, "no Pade approximant of order " + std::to_string(d),
                kIsExact<T> ? NormalityFailure::kNonexistent : NormalityFailure::kUndetermined, d);
  Jet<T> rj = r->jet(2 * d + 1);
  return factorial<T>(2 * d + 1) * (f[2 * d + 1] - rj[2 * d + 1]) / f[1];
}

/// S_0..S_d by the determinant route; stops at the first non-normal order.
template <class T>
SchwarzianSequence<T> schwarzian_sequence(const Jet<T>& f, int d) {
  require_order(f, 2 * d + 1, "schwarzian_sequence");
  detail::require_noncritical(f);
  SchwarzianSequence<T> s{f.base(), {from_int<T>(1)}, {SFlag::kDefined}};
  bool ok = true;
  T prev = f[1];  // det M_1
  for (int k = 1; k <= d; ++k) {
    T next = ok ? hankel_det(f, k + 1) : from_int<T>(0);
    if (ok && is_zero(prev, hankel_scale(f, k))) ok = false;
    if (ok) {
      s.values.push_back(factorial<T>(2 * k + 1) * next / (f[1] * prev));
      s.flags.push_back(SFlag::kDefined);
    } else {
      s.values.push_back(from_int<T>(0));
      s.flags.push_back(SFlag::kNotNormal);
    }
    prev = next;
  }
  return s;
}

/// Pick_x f = (1 - Df(x) w / (f - f(x))) / w, two orders shorter.
template <class T>
Jet<T> pick_step(const Jet<T>& f) {
  require_order(f, 2, "pick_step");
  detail::require_noncritical(f);
  int n = f.order();
  std::vector<T> g(f.coeffs().begin() + 1, f.coeffs().end());      // (f - F0)/w
  std::vector<T> h(f.coeffs().begin() + 2, f.coeffs().end());      // (g - F1)/w
  return Jet<T>(f.base(), series::div(h, g, n - 2));
}

/// A + mu w / (1 - w t), two orders longer than t.
template <class T>
Jet<T> pick_inverse_step(const Jet<T>& t, const T& a, const T& mu) {
  if (is_zero(mu, 1.0, 0.0)) throw Error(ErrorCode::kInvalidArgument, "inverse Pick step with mu = 0");
  int n = t.order() + 2;
  std::vector<T> den(n + 1, from_int<T>(0));
  den[0] = from_int<T>(1);
  for (int k = 0; k <= t.order(); ++k) den[k + 1] = -t[k];
  std::vector<T> num(n + 1, from_int<T>(0));
  num[1] = mu;
  std::vector<T> c = series::div(num, den, n);
  c[0] += a;
  return Jet<T>(t.base(), std::move(c));
}

/// S_k = (2k+1)! prod_{i<=k} D(Pick^i f)(x). A vanishing intermediate
/// derivative ends the recursion; later levels are flagged.
template <class T>
SchwarzianSequence<T> schwarzian_recursive(const Jet<T>& f, int d) {
  require_order(f, 2 * d + 1, "schwarzian_recursive");
  detail::require_noncritical(f);
  SchwarzianSequence<T> s{f.base(), {from_int<T>(1)}, {SFlag::kDefined}};
  Jet<T> t = f;
  T prod = from_int<T>(1);
  bool ok = true;
  for (int k = 1; k <= d; ++k) {
    if (ok) {
      t = pick_step(t);
      prod *= t[1];
      s.values.push_back(factorial<T>(2 * k + 1) * prod);
      s.flags.push_back(SFlag::kDefined);
      if (k < d && is_zero(t[1], std::max(1.0, t.scale()))) ok = false;
    } else {
      s.values.push_back(from_int<T>(0));
      s.flags.push_back(SFlag::kNotNormal);
    }
  }
  return s;
}

/// A_k = t_k(x), mu_k = D t_k(x) with t_0 = f, t_{k+1} = Pick t_k.
/// Stops (failed_level = k) when mu_k vanishes before level d.
template <class T>
ContinuedFractionRep<T> continued_fraction(const Jet<T>& f, int d) {
  require_order(f, 2 * d, "continued_fraction");
  ContinuedFractionRep<T> rep{f.base(), {}, {}};
  Jet<T> t = f;
  for (int k = 0; k <= d; ++k) {
    rep.A.push_back(t[0]);
    if (k == d) break;
    if (is_zero(t[1], std::max(1.0, t.scale()))) {
      rep.failed_level = k;
      break;
    }
    rep.mu.push_back(t[1]);
    t = pick_step(t);
  }
  return rep;
}

/// The (complete) continued fraction as a rational map about its base.
template <class T>
RationalMap<T> cf_to_rational_map(const ContinuedFractionRep<T>& rep) {
  if (!rep.complete())
    throw Error(ErrorCode::kNotNormal, "incomplete continued fraction", NormalityFailure::kNone,
                rep.failed_level);
  int d = rep.d();
  Polynomial<T> p = Polynomial<T>::constant(rep.A[d]);
  Polynomial<T> q = Polynomial<T>::constant(from_int<T>(1));
  Polynomial<T> w = Polynomial<T>::x();
  for (int k = d - 1; k >= 0; --k) {
    // A + mu w q / (q - w p)
    Polynomial<T> den = q - w * p;
    Polynomial<T> num = rep.A[k] * den + rep.mu[k] * (w * q);
    p = num;
    q = den;
  }
  RationalMap<T> r(rep.base, p, q);
  if constexpr (kIsExact<T>) return r.reduced();
  return r;
}

template <class T>
Jet<T> cf_to_jet(const ContinuedFractionRep<T>& rep, int order) {
  return cf_to_rational_map(rep).jet(order);
}

template <class T>
struct CompositionRecord {
  T lhs;        // S_d(g o f)(x)
  T rhs_sum;    // S_d(g)(f(x)) Df(x)^{2d} + S_d(f)(x)
  T extra_term; // S_d([g]_d o [f]_d)(x)
  bool holds;
};

template <class T>
CompositionRecord<T> composition_check(const Jet<T>& f, const Jet<T>& g, int d) {
  require_order(f, 2 * d + 1, "composition_check");
  require_order(g, 2 * d + 1, "composition_check");
  Jet<T> gf = compose(g, f);
  T lhs = schwarzian(gf, d);
  T sg = schwarzian(g, d);
  T sf = schwarzian(f, d);
  T df_pow = from_int<T>(1);
  for (int i = 0; i < 2 * d; ++i) df_pow *= f[1];
  T rhs = sg * df_pow + sf;
  auto pf = pade_if_exists(f.truncated(2 * d), d);
  auto pg = pade_if_exists(g.truncated(2 * d), d);
  if (!pf || !pg)
    throw Error(ErrorCode::kNotNormal, "Pade approximant missing in composition check",
                NormalityFailure::kNonexistent, d);
  RationalMap<T> comp = compose(*pg, *pf);
  T extra = schwarzian(comp.jet(2 * d + 1), d);
  bool holds;
  if constexpr (kIsExact<T>) {
    holds = lhs == rhs + extra;
  } else {
    double s = std::max({1.0, std::fabs(lhs), std::fabs(rhs), std::fabs(extra)});
    holds = std::fabs(lhs - rhs - extra) <= 1e-8 * s;
  }
  return {lhs, rhs, extra, holds};
}

/// S_d(g o f) >= S_d(g)(f(x)) Df^{2d} + S_d(f); requires S_k(f), S_k(g) >= 0
/// for k < d (HypothesisViolation otherwise).
template <class T>
bool composition_inequality_check(const Jet<T>& f, const Jet<T>& g, int d) {
  detail::require_noncritical(f);
  detail::require_noncritical(g);
  for (int k = 1; k < d; ++k) {
    if (sign_of(schwarzian(f, k)) < 0 || sign_of(schwarzian(g, k)) < 0)
      throw Error(ErrorCode::kHypothesisViolation,
                  "S_" + std::to_string(k) + " negative for an input of the composition inequality");
  }
  Jet<T> gf = compose(g, f);
  T lhs = schwarzian(gf, d);
  T df_pow = from_int<T>(1);
  for (int i = 0; i < 2 * d; ++i) df_pow *= f[1];
  T rhs = schwarzian(g, d) * df_pow + schwarzian(f, d);
  T diff = lhs - rhs;
  return sign_of(diff, std::max(1.0, ScalarTraits<T>::magnitude(lhs))) >= 0;
}

template <class T>
struct MobiusCheck {
  T pre_lhs, pre_rhs;    // S_d(f o M)(y), S_d(f)(M(y)) DM(y)^{2d}
  T post_lhs, post_rhs;  // S_d(M o f)(x), S_d(f)(x)
  bool holds;
};

/// f is based at x; M is a Mobius map whose base y satisfies M(y) = x.
/// Checks S_d(f o M) = S_d(f) o M (DM)^{2d} and S_d(N o f) = S_d(f) where
/// N = M recentered at f(x).
template <class T>
MobiusCheck<T> mobius_precomposition_check(const Jet<T>& f, const RationalMap<T>& m, int d) {
  if (m.degree() != 1) throw Error(ErrorCode::kInvalidArgument, "M must be a Mobius map");
  require_order(f, 2 * d + 1, "mobius_precomposition_check");
  Jet<T> mj = m.jet(2 * d + 1);
  Jet<T> fm = compose(f, mj);
  T pre_lhs = schwarzian(fm, d);
  T dm_pow = from_int<T>(1);
  for (int i = 0; i < 2 * d; ++i) dm_pow *= mj[1];
  T sf = schwarzian(f, d);
  T pre_rhs = sf * dm_pow;
  RationalMap<T> post = m.recentered(f[0]);
  T post_lhs = schwarzian(compose(post.jet(2 * d + 1), f), d);
  bool holds;
  if constexpr (kIsExact<T>) {
    holds = pre_lhs == pre_rhs && post_lhs == sf;
  } else {
    double s = std::max({1.0, std::fabs(pre_lhs), std::fabs(sf)});
    holds = std::fabs(pre_lhs - pre_rhs) <= 1e-8 * s && std::fabs(post_lhs - sf) <= 1e-8 * s;
  }
  return {pre_lhs, pre_rhs, post_lhs, sf, holds};
}

}  // namespace schwarz
