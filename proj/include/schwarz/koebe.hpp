#pragma once

// Generalized Koebe bound |D^m f| <= C dist(x, dU)^-(m-n) |D^n f| for maps in P_d(U).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "schwarz/pickclass.hpp"

namespace schwarz {

/// Which constant C to use. kProof (m!/n!) is the sharp one; kStatement (n!/m!)
/// is kept only so that its failure on the Moebius witness can be shown.
enum class KoebeConstant { kProof, kStatement };

/// U = (lo, hi); a missing endpoint means that side is unbounded.
template <class T>
struct KoebeQuery {
  int d = 1;
  int m = 1, n = 1;
  std::optional<T> lo, hi;
  T x{};

  void validate() const {
    if (d < 1) throw Error(ErrorCode::kInvalidArgument, "d must be >= 1");
    if (n < 1 || n % 2 == 0 || n > m || m > 2 * d)
      throw Error(ErrorCode::kInvalidArgument, "need n odd and 1 <= n <= m <= 2d");
    if (lo && hi && !(*lo < *hi)) throw Error(ErrorCode::kInvalidArgument, "empty interval");
    if ((lo && !(*lo < x)) || (hi && !(x < *hi)))
      throw Error(ErrorCode::kInvalidArgument, "x must lie strictly inside U");
  }
};

/// dist(x, dU); nullopt when U is the whole line.
template <class T>
std::optional<T> boundary_distance(const KoebeQuery<T>& q) {
  if (q.lo && q.hi) return std::min(q.x - *q.lo, *q.hi - q.x);
  if (q.lo) return q.x - *q.lo;
  if (q.hi) return *q.hi - q.x;
  return std::nullopt;
}

template <class T>
T koebe_constant(int m, int n, KoebeConstant c = KoebeConstant::kProof) {
  T r = factorial<T>(m) / factorial<T>(n);
  return c == KoebeConstant::kProof ? r : from_int<T>(1) / r;
}

/// C dist^-(m-n) |DnF|; nullopt means the bound is infinite (vacuous).
template <class T>
std::optional<T> koebe_bound(const KoebeQuery<T>& q, const T& dnf, KoebeConstant c = KoebeConstant::kProof) {
  q.validate();
  T mag = dnf < 0 ? T(-dnf) : dnf;
  T out = koebe_constant<T>(q.m, q.n, c) * mag;
  if (q.m == q.n) return out;
  auto dist = boundary_distance(q);
  if (!dist) return std::nullopt;
  for (int k = 0; k < q.m - q.n; ++k) out /= *dist;
  return out;
}

template <class T>
struct KoebePoint {
  T x;
  T dm, dn;                 // D^m f(x), D^n f(x)
  std::optional<T> dist;    // nullopt: unbounded U
  std::optional<T> bound;   // nullopt: infinite
  double ratio = 0;         // |D^m f| / bound
  bool within = true;
};

template <class T>
struct KoebeReport {
  int d = 0, m = 0, n = 0;
  KoebeConstant constant = KoebeConstant::kProof;
  std::vector<KoebePoint<T>> points;
  double max_ratio = 0;
  std::optional<T> argmax;
  bool vacuous = false;
  bool pass = true;

  std::string verdict() const { return vacuous ? "vacuous" : (pass ? "PASS" : "FAIL"); }
};

/// Chebyshev points of U clipped to its central `keep` fraction. Exact
/// backends get dyadic approximations with 2^-30 resolution.
template <class T>
std::vector<T> chebyshev_grid(const T& lo, const T& hi, int count = 64, double keep = 0.98) {
  std::vector<T> g;
  double a = to_double(lo), b = to_double(hi);
  double mid = (a + b) / 2, half = keep * (b - a) / 2;
  for (int k = count - 1; k >= 0; --k) {
    double v = mid + half * std::cos((2.0 * k + 1) * M_PI / (2.0 * count));
    if constexpr (kIsExact<T>) {
      Rational r(std::ldexp(std::nearbyint(std::ldexp(v, 30)), -30));
      if (r <= lo || r >= hi) continue;
      g.push_back(r);
    } else {
      g.push_back(v);
    }
  }
  return g;
}

namespace detail {

template <class T>
void koebe_point(const Jet<T>& j, const KoebeQuery<T>& q, KoebeConstant c, double tau, KoebeReport<T>& rep,
                 bool& first) {
  KoebePoint<T> p{q.x, j.derivative(q.m), j.derivative(q.n), boundary_distance(q), koebe_bound(q, j.derivative(q.n), c)};
  T am = p.dm < 0 ? T(-p.dm) : p.dm;
  if (!p.bound) {
    rep.vacuous = true;
    p.ratio = 0;
  } else if (am == 0) {
    p.ratio = 0;
  } else if (*p.bound == 0) {
    p.ratio = std::numeric_limits<double>::infinity();
    p.within = false;
  } else {
    if constexpr (kIsExact<T>) {
      T r = am / *p.bound;
      p.ratio = to_double(r);
      p.within = r <= 1;
    } else {
      p.ratio = am / *p.bound;
      p.within = p.ratio <= 1 + tau;
    }
  }
  if (!p.within) rep.pass = false;
  if (first || p.ratio > rep.max_ratio) {
    rep.max_ratio = p.ratio;
    rep.argmax = q.x;
    first = false;
  }
  rep.points.push_back(std::move(p));
}

}  // namespace detail

/// Checks the bound at every grid point after confirming f in P_d(U) on the
/// same grid. Exact backends compare exactly; float allows ratio <= 1 + tau.
template <class T>
KoebeReport<T> koebe_check(const JetSource<T>& f, int d, int m, int n, const std::optional<T>& lo,
                           const std::optional<T>& hi, const std::vector<T>& grid,
                           KoebeConstant c = KoebeConstant::kProof, double tau = 1e-9) {
  KoebeQuery<T> probe{d, m, n, lo, hi, grid.empty() ? T{} : grid.front()};
  if (!grid.empty()) probe.validate();
  auto mem = pd_membership(f, d, grid);
  if (!mem.pass) throw Error(ErrorCode::kMembershipFailure, "map is not in P_d(U) on the grid");
  KoebeReport<T> rep;
  rep.d = d;
  rep.m = m;
  rep.n = n;
  rep.constant = c;
  bool first = true;
  for (const T& x : grid) {
    KoebeQuery<T> q{d, m, n, lo, hi, x};
    q.validate();
    detail::koebe_point(f(x, std::max(m, 2 * d + 1)), q, c, tau, rep, first);
  }
  return rep;
}

/// Every valid (m, n) pair for the given d.
inline std::vector<std::pair<int, int>> koebe_pairs(int d) {
  std::vector<std::pair<int, int>> out;
  for (int n = 1; n <= 2 * d; n += 2)
    for (int m = n; m <= 2 * d; ++m) out.push_back({m, n});
  return out;
}

}  // namespace schwarz
