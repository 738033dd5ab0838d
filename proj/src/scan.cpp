// Return-time scan. Each sample is processed in two passes:
//  1. an interval pass carrying jets of order 2d+1 along the orbit, which
//     locates first entries, rejects critical orbits and encloses S_k;
//  2. an exact pass on gcd-free scaled integers (coefficients N_k / D with a
//     common denominator D), which re-verifies each entry, checks the d = 1
//     inversion identity and, while D is small enough, decides every sign of
//     S_k from exact Hankel determinants.

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "schwarz/dynamics.hpp"

namespace schwarz {

std::string to_string(EventMethod m) { return m == EventMethod::kExact ? "exact" : "interval"; }

bool ScanReport::all_positive() const {
  for (const auto& e : events)
    if (!e.all_positive) return false;
  for (const auto& c : composed)
    if (!c.all_positive) return false;
  return true;
}

bool ScanReport::identity_holds() const {
  for (const auto& e : events)
    if (!e.d1_identity || !*e.d1_identity) return false;
  return true;
}

namespace {

// ---------------------------------------------------------------------------
// Generic helpers shared by the exact and interval engines.

template <class T>
std::vector<T> mul_trunc(const std::vector<T>& a, const std::vector<T>& b, int order, const T& zero) {
  std::vector<T> c(order + 1, zero);
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if constexpr (std::is_same_v<T, Integer>)
      if (a[i] == 0) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Numerators B_k of the reversion of h(u) = sum_{k>=1} a_k u^k:
// h^-1(v) = sum_k B_k v^k / a_1^(2k-1). B_1 = 1 and
// B_k = -sum_{j=2..k} a_j a_1^(j-2) [t^k] G^j with G = sum_i B_i t^i.
// Only ring operations are used, so integers stay integers.
template <class T>
std::vector<T> reversion_numerators(const std::vector<T>& a, int order, const T& zero, const T& one) {
  std::vector<T> b(order + 1, zero);
  if (order < 1) return b;
  b[1] = one;
  std::vector<T> a1pow(order + 1, one);
  for (int k = 1; k <= order; ++k) a1pow[k] = a1pow[k - 1] * a[1];
  // pw[j][k] = [t^k] G^j
  std::vector<std::vector<T>> pw(order + 1, std::vector<T>(order + 1, zero));
  pw[1][1] = one;
  for (int k = 2; k <= order; ++k) {
    T acc = zero;
    for (int j = 2; j <= k; ++j) {
      T v = zero;
      for (int i = 1; i <= k - j + 1; ++i) v += b[i] * pw[j - 1][k - i];
      pw[j][k] = v;
      acc += a[j] * a1pow[j - 2] * v;
    }
    b[k] = -acc;
    pw[1][k] = b[k];
  }
  return b;
}

template <class T>
std::vector<std::vector<T>> hankel_of(const std::vector<T>& b, int n) {
  std::vector<std::vector<T>> m(n, std::vector<T>(n, b[0]));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = b[i + j + 1];
  return m;
}

Integer bareiss(std::vector<std::vector<Integer>> m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

long factorial_long(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// ---------------------------------------------------------------------------
// Exact engine: f = sum e_i x^i / L, jets N_k / D.

struct IntPoly {
  std::vector<Integer> e;
  Integer l = 1;
  int degree = 0;
};

IntPoly to_int_poly(const Polynomial<Rational>& p) {
  IntPoly r;
  r.degree = p.degree();
  for (const auto& c : p.coeffs()) mpz_lcm(r.l.get_mpz_t(), r.l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& c : p.coeffs()) r.e.push_back(c.get_num() * (r.l / c.get_den()));
  return r;
}

struct ScaledJet {
  std::vector<Integer> n;
  Integer d;
  int order() const { return static_cast<int>(n.size()) - 1; }
};

ScaledJet scaled_identity(const Rational& x, int order) {
  ScaledJet j{std::vector<Integer>(order + 1, Integer(0)), x.get_den()};
  j.n[0] = x.get_num();
  if (order >= 1) j.n[1] = x.get_den();
  return j;
}

// D^m L f(N/D) = sum_i e_i N^i D^(m-i), by Horner.
ScaledJet scaled_step(const IntPoly& f, const ScaledJet& j) {
  int m = f.degree, order = j.order();
  std::vector<Integer> dpow(m + 1, Integer(1));
  for (int k = 1; k <= m; ++k) dpow[k] = dpow[k - 1] * j.d;
  std::vector<Integer> r(order + 1, Integer(0));
  r[0] = f.e[m];
  for (int i = m - 1; i >= 0; --i) {
    r = mul_trunc(r, j.n, order, Integer(0));
    if (f.e[i] != 0) r[0] += f.e[i] * dpow[m - i];
  }
  return {std::move(r), f.l * dpow[m]};
}

std::size_t bits(const Integer& v) { return mpz_sizeinbase(v.get_mpz_t(), 2); }

// N0 / D strictly inside (lo, hi).
bool scaled_inside(const ScaledJet& j, const Rational& lo, const Rational& hi) {
  Integer a = j.n[0] * lo.get_den(), b = lo.get_num() * j.d;
  if (!(a > b)) return false;
  a = j.n[0] * hi.get_den();
  b = hi.get_num() * j.d;
  return a < b;
}

// ---------------------------------------------------------------------------
// Interval engine.

using IJet = std::vector<Interval>;

IJet interval_step(const std::vector<Interval>& coeffs, const IJet& j, mpfr_prec_t prec) {
  int m = static_cast<int>(coeffs.size()) - 1, order = static_cast<int>(j.size()) - 1;
  Interval zero(prec);
  IJet r(order + 1, zero);
  r[0] = coeffs[m];
  for (int i = m - 1; i >= 0; --i) {
    r = mul_trunc(r, j, order, zero);
    r[0] += coeffs[i];
  }
  return r;
}

// outer(inner) where outer is expanded about inner[0].
IJet interval_compose(const IJet& outer, const IJet& inner, mpfr_prec_t prec) {
  int order = static_cast<int>(std::min(outer.size(), inner.size())) - 1;
  Interval zero(prec);
  IJet u = inner;
  u[0] = zero;
  IJet r(order + 1, zero);
  r[0] = outer[order];
  for (int k = order - 1; k >= 0; --k) {
    r = mul_trunc(r, u, order, zero);
    r[0] += outer[k];
  }
  return r;
}

// Inverse jet, based at j[0], value `base`.
IJet interval_reverse(const IJet& j, const Interval& base, mpfr_prec_t prec) {
  int order = static_cast<int>(j.size()) - 1;
  Interval zero(prec), one = Interval::from_int(1, prec);
  auto b = reversion_numerators(j, order, zero, one);
  IJet g(order + 1, zero);
  g[0] = base;
  // g_k = B_k / a1^(2k-1)
  Interval a1 = j[1];
  Interval pow = a1;
  for (int k = 1; k <= order; ++k) {
    g[k] = b[k] / pow;
    pow = pow * a1 * a1;
  }
  return g;
}

struct IntervalSk {
  std::vector<Interval> s;  // S_1..S_d (meaningful where sign != 0 or decided)
  std::vector<int> signs;   // 0 when undecided
};

// S_k of the inverse of a jet with coefficients a_k (k >= 1), via the
// reversion numerators: S_k = (2k+1)! a1^(-4k) det M_{k+1}(B) / det M_k(B).
IntervalSk inverse_sk_interval(const IJet& j, int d, mpfr_prec_t prec) {
  Interval zero(prec), one = Interval::from_int(1, prec);
  auto b = reversion_numerators(j, 2 * d + 1, zero, one);
  std::vector<Interval> dets;
  for (int k = 0; k <= d + 1; ++k) dets.push_back(interval_determinant(hankel_of(b, k), prec));
  IntervalSk out;
  Interval inv_a1_sq = one / (j[1] * j[1]);
  for (int k = 1; k <= d; ++k) {
    if (dets[k].contains_zero()) {
      out.s.push_back(zero);
      out.signs.push_back(0);
      continue;
    }
    Interval scale = Interval::from_int(factorial_long(2 * k + 1), prec);
    for (int i = 0; i < 2 * k; ++i) scale = scale * inv_a1_sq;
    Interval v = scale * dets[k + 1] / dets[k];
    out.signs.push_back(v.sign());
    out.s.push_back(std::move(v));
  }
  return out;
}

// S_k of a jet directly: (2k+1)! det M_{k+1} / (F1 det M_k).
IntervalSk direct_sk_interval(const IJet& j, int d, mpfr_prec_t prec) {
  IntervalSk out;
  Interval zero(prec);
  std::vector<Interval> dets;
  for (int k = 0; k <= d + 1; ++k) dets.push_back(interval_determinant(hankel_of(j, k), prec));
  for (int k = 1; k <= d; ++k) {
    if (dets[k].contains_zero() || j[1].contains_zero()) {
      out.s.push_back(zero);
      out.signs.push_back(0);
      continue;
    }
    Interval v = Interval::from_int(factorial_long(2 * k + 1), prec) * dets[k + 1] / (j[1] * dets[k]);
    out.signs.push_back(v.sign());
    out.s.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Context {
  const IntervalMap& f;
  Polynomial<Rational> p, dp;
  IntPoly ip;
  Rational c;
  std::vector<Rational> lo, hi;  // X bounds per eps
  ScanOptions opt;
};

struct SampleResult {
  std::vector<ReturnEvent> events;
  std::vector<ComposedEvent> composed;
  std::vector<int> not_entered, critical;
};

struct NeedPrecision {};

enum class Tri { kNo, kYes, kUnknown };

struct IntervalPass {
  mpfr_prec_t prec;
  std::vector<IJet> jets;   // jets[n] = jet of f^n at x
  std::vector<IJet> local;  // local[n] = jet of f at f^n(x), expanded about it
  std::vector<Tri> critical;  // Df(f^n(x)) == 0
  std::vector<std::vector<int>> visits;  // per eps
  std::vector<std::optional<int>> first;  // per eps
};

class SampleRunner {
 public:
  SampleRunner(const Context& ctx, const Rational& x) : ctx_(ctx), x_(x) {}

  SampleResult run(std::size_t index) {
    for (mpfr_prec_t prec = ctx_.opt.start_precision;; prec *= 2) {
      bool last = prec * 2 > ctx_.opt.max_precision;
      try {
        IntervalPass pass = interval_pass(prec, last);
        SampleResult r = interval_results(pass, index);
        if (!exact_done_) {
          exact_pass(r);
          exact_done_ = true;
        }
        bool undecided = false;
        for (std::size_t i = 0; i < r.events.size(); ++i) {
          merge_exact(r.events[i], exact_[i]);
          for (int sg : r.events[i].signs) undecided |= sg == 0 && r.events[i].method == EventMethod::kInterval;
        }
        for (const auto& ce : r.composed)
          for (int k = 0; k < ctx_.opt.d; ++k) undecided |= ce.direct_signs[k] == 0 || ce.composed_signs[k] == 0;
        if (!undecided || last) return r;
      } catch (const NeedPrecision&) {
        if (last) throw Error(ErrorCode::kInternal, "interval pass failed at maximal precision");
      }
    }
  }

 private:
  // Exact orbit, extended on demand; used only to settle ambiguous comparisons.
  const Rational& exact_orbit(int n) {
    if (orbit_.empty()) orbit_.push_back(x_);
    while (static_cast<int>(orbit_.size()) <= n) orbit_.push_back(ctx_.p(orbit_.back()));
    return orbit_[n];
  }

  Tri inside(const Interval& y, std::size_t e, int n, bool settle) {
    const Rational &lo = ctx_.lo[e], &hi = ctx_.hi[e];
    if (y.certainly_above(lo) && y.certainly_below(hi)) return Tri::kYes;
    if (!y.certainly_above(lo) && !y.contains(lo)) return Tri::kNo;
    if (!y.certainly_below(hi) && !y.contains(hi)) return Tri::kNo;
    if (!settle) throw NeedPrecision{};
    const Rational& v = exact_orbit(n);
    return lo < v && v < hi ? Tri::kYes : Tri::kNo;
  }

  Tri is_critical(const IJet& loc, int n, bool settle) {
    if (loc[1].sign() != 0) return Tri::kNo;
    if (!settle) throw NeedPrecision{};
    return ctx_.dp(exact_orbit(n)) == 0 ? Tri::kYes : Tri::kNo;
  }

  IntervalPass interval_pass(mpfr_prec_t prec, bool settle) {
    const auto& opt = ctx_.opt;
    std::size_t ne = opt.eps.size();
    IntervalPass ps{prec, {}, {}, {}, std::vector<std::vector<int>>(ne), std::vector<std::optional<int>>(ne)};
    std::vector<Interval> coeffs;
    for (const auto& v : ctx_.p.coeffs()) coeffs.push_back(Interval::from_rational(v, prec));
    int order = 2 * opt.d + 1;
    IJet j(order + 1, Interval(prec));
    j[0] = Interval::from_rational(x_, prec);
    j[1] = Interval::from_int(1, prec);
    ps.jets.push_back(j);
    Interval zero = Interval::from_int(0, prec), one = Interval::from_int(1, prec);
    for (int n = 0; n <= opt.max_steps; ++n) {
      const IJet& cur = ps.jets[n];
      if (cur[0].certainly_below(Rational(0)) || cur[0].certainly_above(Rational(1)))
        throw Error(ErrorCode::kEscapedInterval, "orbit of " + x_.get_str() + " left [0,1] at step " + std::to_string(n));
      bool pending = false;
      for (std::size_t e = 0; e < ne; ++e) {
        if (!opt.general && ps.first[e]) continue;
        if (inside(cur[0], e, n, settle) == Tri::kYes) {
          ps.visits[e].push_back(n);
          if (!ps.first[e]) ps.first[e] = n;
        }
        if (opt.general || !ps.first[e]) pending = true;
      }
      // local jet of f at f^n(x) and the next jet are needed only if an event
      // may still occur, or to close an event that occurred at step n
      bool closing = false;
      for (std::size_t e = 0; e < ne; ++e)
        if (!ps.visits[e].empty() && ps.visits[e].back() == n) closing = true;
      if (!pending && !closing) break;
      IJet x0(order + 1, zero);
      x0[0] = cur[0];
      x0[1] = one;
      IJet loc = interval_step(coeffs, x0, prec);
      ps.critical.push_back(is_critical(loc, n, settle));
      ps.local.push_back(loc);
      ps.jets.push_back(interval_compose(loc, cur, prec));
      if (n == opt.max_steps) break;
    }
    return ps;
  }

  bool critical_upto(const IntervalPass& ps, int s) const {
    for (int n = 0; n <= s; ++n)
      if (ps.critical[n] == Tri::kYes) return true;
    return false;
  }

  SampleResult interval_results(const IntervalPass& ps, std::size_t index) {
    const auto& opt = ctx_.opt;
    SampleResult r;
    std::size_t ne = opt.eps.size();
    r.not_entered.assign(ne, 0);
    r.critical.assign(ne, 0);
    for (std::size_t e = 0; e < ne; ++e) {
      if (!ps.first[e]) {
        r.not_entered[e] = 1;
        continue;
      }
      int s = *ps.first[e];
      if (critical_upto(ps, s)) {
        r.critical[e] = 1;
        continue;
      }
      ReturnEvent ev;
      ev.sample = index;
      ev.x = x_;
      ev.eps = opt.eps[e];
      ev.s = s;
      ev.method = EventMethod::kInterval;
      ev.precision = ps.prec;
      const IJet& j = ps.jets[s + 1];
      ev.df_sign = j[1].sign();
      ev.image = Rational(j[0].mid());
      ev.image_exact = false;
      auto sk = inverse_sk_interval(j, opt.d, ps.prec);
      ev.signs = sk.signs;
      for (int k = 0; k < opt.d; ++k)
        ev.approx.push_back(sk.signs[k] == 0 ? std::numeric_limits<double>::quiet_NaN() : sk.s[k].mid());
      ev.values.assign(opt.d, std::nullopt);
      r.events.push_back(std::move(ev));

      if (!opt.general) continue;
      // later visits: compose the inverse of the first-entry branch with the
      // inverses of the pieces between consecutive visits
      const auto& v = ps.visits[e];
      mpfr_prec_t prec = ps.prec;
      IJet inv = interval_reverse(j, ps.jets[0][0], prec);
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (critical_upto(ps, v[i])) break;
        IJet acc(j.size(), Interval(prec));
        acc[0] = ps.jets[v[i - 1] + 1][0];
        acc[1] = Interval::from_int(1, prec);
        for (int n = v[i - 1] + 1; n <= v[i]; ++n) acc = interval_compose(ps.local[n], acc, prec);
        IJet piece_inv = interval_reverse(acc, ps.jets[v[i - 1] + 1][0], prec);
        inv = interval_compose(inv, piece_inv, prec);
        ComposedEvent ce;
        ce.sample = index;
        ce.eps = opt.eps[e];
        ce.s = v[i];
        ce.first = v[i - 1];
        ce.direct_signs = inverse_sk_interval(ps.jets[v[i] + 1], opt.d, prec).signs;
        ce.composed_signs = direct_sk_interval(inv, opt.d, prec).signs;
        ce.all_positive = true;
        for (int k = 0; k < opt.d; ++k)
          if (ce.direct_signs[k] <= 0 || ce.composed_signs[k] <= 0) ce.all_positive = false;
        ce.consistent = ce.direct_signs == ce.composed_signs;
        r.composed.push_back(std::move(ce));
      }
    }
    return r;
  }

  // Exact facts about one event, computed once and merged into every
  // interval pass of the same sample.
  struct ExactInfo {
    bool reached = false;
    std::size_t bits = 0;
    std::optional<Rational> image;
    std::optional<bool> identity;
    int s1_sign = 0;
    bool full = false;
    std::vector<int> signs;
    std::vector<std::optional<Rational>> values;
  };

  void exact_pass(const SampleResult& r) {
    const auto& opt = ctx_.opt;
    exact_.assign(r.events.size(), ExactInfo{});
    if (r.events.empty()) return;
    int last = 0;
    for (const auto& ev : r.events) last = std::max(last, ev.s + 1);
    int full = 2 * opt.d + 1;
    ScaledJet j = scaled_identity(x_, std::max(full, 3));
    int n = 0;
    for (;; ++n) {
      if (bits(j.d) > opt.identity_bits) break;
      for (std::size_t i = 0; i < r.events.size(); ++i) {
        const auto& ev = r.events[i];
        std::size_t e = std::find(opt.eps.begin(), opt.eps.end(), ev.eps) - opt.eps.begin();
        if (n <= ev.s && scaled_inside(j, ctx_.lo[e], ctx_.hi[e]) != (n == ev.s))
          throw Error(ErrorCode::kInternal, "exact orbit disagrees with the interval orbit at " + x_.get_str());
        if (n == ev.s + 1) exact_[i] = exact_event(ev, j);
      }
      if (n == last) break;
      j = scaled_step(ctx_.ip, j);
      if (j.order() > 3 && bits(j.d) > opt.exact_bits) j.n.resize(4);
    }
    // size estimates for events beyond the identity limit
    double b = static_cast<double>(bits(j.d));
    for (; n < last; ++n) b = b * ctx_.ip.degree + static_cast<double>(bits(ctx_.ip.l));
    for (std::size_t i = 0; i < r.events.size(); ++i)
      if (!exact_[i].reached) exact_[i].bits = static_cast<std::size_t>(b);
  }

  ExactInfo exact_event(const ReturnEvent& ev, const ScaledJet& j) {
    const auto& opt = ctx_.opt;
    int d = opt.d;
    ExactInfo info;
    info.reached = true;
    info.bits = bits(j.d);
    if (j.n[1] == 0) throw Error(ErrorCode::kInternal, "exact Df vanishes on an accepted event");
    if (sgn(j.n[1]) != ev.df_sign) throw Error(ErrorCode::kInternal, "sign of Df disagrees between engines");
    if (info.bits <= 4096) {
      Rational v(j.n[0], j.d);
      v.canonicalize();
      info.image = v;
    }
    // d = 1 inversion identity: S_1(f^-1)(f(x)) = -S_1(f)(x) / Df(x)^2.
    // Left side from the reversion numerators: 6 D^2 det M_2(B) / (a1^4 det M_1(B)).
    // Right side from the forward jet: -6 D^2 det M_2(a) / (a1^3 det M_1(a)).
    // The common factor 6 D^2 is nonzero and is left out of the cross product.
    std::vector<Integer> a(j.n.begin(), j.n.begin() + 4);
    auto b3 = reversion_numerators(a, 3, Integer(0), Integer(1));
    Integer det2b = bareiss(hankel_of(b3, 2)), det1b = bareiss(hankel_of(b3, 1));
    Integer det2a = bareiss(hankel_of(a, 2)), det1a = bareiss(hankel_of(a, 1));
    Integer a1_3 = a[1] * a[1] * a[1];
    Integer lhs = det2b * a1_3 * det1a;
    Integer rhs = -det2a * (a1_3 * a[1]) * det1b;
    info.identity = det1b != 0 && det1a != 0 && lhs == rhs;
    info.s1_sign = det1b == 0 ? 0 : sgn(det2b) * sgn(det1b);

    if (j.order() >= 2 * d + 1) {
      info.full = true;
      auto b = reversion_numerators(j.n, 2 * d + 1, Integer(0), Integer(1));
      std::vector<Integer> dets;
      for (int k = 0; k <= d + 1; ++k) dets.push_back(bareiss(hankel_of(b, k)));
      info.values.assign(d, std::nullopt);
      for (int k = 1; k <= d; ++k) {
        int sg = dets[k] == 0 ? 0 : sgn(dets[k + 1]) * sgn(dets[k]);
        info.signs.push_back(sg);
        if (sg != 0 && info.bits <= 8192) {
          // S_k = (2k+1)! (D / a1^2)^(2k) det M_{k+1}(B) / det M_k(B)
          Integer num = factorial_long(2 * k + 1) * dets[k + 1], den = dets[k];
          Integer dp, ap;
          mpz_pow_ui(dp.get_mpz_t(), j.d.get_mpz_t(), 2 * k);
          mpz_pow_ui(ap.get_mpz_t(), j.n[1].get_mpz_t(), 4 * k);
          Rational v(num * dp, den * ap);
          v.canonicalize();
          info.values[k - 1] = v;
        }
      }
    }
    return info;
  }

  static void merge_exact(ReturnEvent& ev, const ExactInfo& info) {
    ev.bits = info.bits;
    if (info.image) {
      ev.image = *info.image;
      ev.image_exact = true;
    }
    ev.d1_identity = info.identity;
    auto agree = [](int interval_sign, int exact_sign) {
      if (interval_sign != 0 && interval_sign != exact_sign)
        throw Error(ErrorCode::kInternal, "exact and interval signs disagree");
    };
    if (info.reached) {
      agree(ev.signs[0], info.s1_sign);
      ev.signs[0] = info.s1_sign;
    }
    if (info.full) {
      ev.method = EventMethod::kExact;
      ev.precision = 0;
      for (std::size_t k = 0; k < info.signs.size(); ++k) {
        agree(ev.signs[k], info.signs[k]);
        ev.signs[k] = info.signs[k];
        if (info.values[k]) {
          ev.values[k] = info.values[k];
          ev.approx[k] = info.values[k]->get_d();
        }
      }
    }
    ev.all_positive = ev.df_sign != 0;
    for (int sg : ev.signs)
      if (sg <= 0) ev.all_positive = false;
  }

  const Context& ctx_;
  Rational x_;
  std::vector<Rational> orbit_;
  std::vector<ExactInfo> exact_;
  bool exact_done_ = false;
};

}  // namespace

ScanReport return_scan(const IntervalMap& f, const Rational& c, const ScanOptions& opt_in) {
  auto t0 = std::chrono::steady_clock::now();
  const Polynomial<Rational>& p = f.poly();
  ScanOptions opt = opt_in;
  if (opt.d < 1) throw Error(ErrorCode::kInvalidArgument, "d must be >= 1");
  if (opt.max_steps < 0) throw Error(ErrorCode::kInvalidArgument, "max_steps must be >= 0");
  if (opt.eps.empty()) throw Error(ErrorCode::kInvalidArgument, "empty eps list");
  Polynomial<Rational> dp = p.derivative();
  if (dp.degree() < 0 || dp(c) != 0)
    throw Error(ErrorCode::kHypothesisViolation, c.get_str() + " is not a critical point of " + f.name());
  if (c <= 0 || c >= 1) throw Error(ErrorCode::kInvalidArgument, "critical point must lie in (0,1)");
  if (opt.samples.empty()) opt.samples = stern_brocot(opt.sample_count);

  Context ctx{f, p, dp, to_int_poly(p), c, {}, {}, opt};
  for (const auto& e : opt.eps) {
    if (e <= 0 || c - e <= 0 || c + e >= 1) throw Error(ErrorCode::kInvalidArgument, "X = (c-eps, c+eps) must lie in (0,1)");
    ctx.lo.push_back(c - e);
    ctx.hi.push_back(c + e);
  }

  std::size_t n = opt.samples.size();
  std::vector<SampleResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = SampleRunner(ctx, opt.samples[i]).run(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScanReport rep;
  rep.map = f.name();
  rep.critical_point = c;
  rep.d = opt.d;
  rep.max_steps = opt.max_steps;
  rep.samples = opt.samples;
  for (std::size_t e = 0; e < opt.eps.size(); ++e) {
    EpsSummary sm;
    sm.eps = opt.eps[e];
    sm.samples = static_cast<int>(n);
    sm.min_sk.assign(opt.d, std::numeric_limits<double>::infinity());
    rep.summaries.push_back(sm);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = results[i];
    for (std::size_t e = 0; e < opt.eps.size(); ++e) {
      rep.summaries[e].not_entered += r.not_entered[e];
      rep.summaries[e].critical_discarded += r.critical[e];
    }
    for (auto& ev : r.events) {
      std::size_t e = std::find(opt.eps.begin(), opt.eps.end(), ev.eps) - opt.eps.begin();
      auto& sm = rep.summaries[e];
      ++sm.events;
      if (ev.all_positive) ++sm.all_positive;
      else sm.witnesses.push_back(rep.events.size());
      if (ev.d1_identity) {
        ++sm.identity_checked;
        if (*ev.d1_identity) ++sm.identity_held;
      }
      (ev.method == EventMethod::kExact ? sm.exact_events : sm.interval_events)++;
      sm.max_bits = std::max(sm.max_bits, ev.bits);
      for (int k = 0; k < opt.d; ++k)
        if (!std::isnan(ev.approx[k])) sm.min_sk[k] = std::min(sm.min_sk[k], ev.approx[k]);
      rep.events.push_back(std::move(ev));
    }
    for (auto& ce : r.composed) {
      std::size_t e = std::find(opt.eps.begin(), opt.eps.end(), ce.eps) - opt.eps.begin();
      ++rep.summaries[e].composed_events;
      if (ce.all_positive) ++rep.summaries[e].composed_positive;
      rep.composed.push_back(std::move(ce));
    }
  }
  for (auto& sm : rep.summaries)
    if (sm.events == 0) sm.min_sk.clear();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace schwarz
