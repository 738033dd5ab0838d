#pragma once

// Pick-class certification, half-plane sampling, cross-ratio matrices,
// P_d(U) membership and randomized matrix-monotonicity tests.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "schwarz/schwarzian.hpp"

namespace schwarz {

enum class Verdict { kPick, kNotPick, kInconclusive };
enum class CertMethod { kSchwarzianSigns, kDegreeReduction };

std::string to_string(Verdict v);
std::string to_string(CertMethod m);

template <class T>
struct LevelRecord {
  int k;
  T value;        // DR at level k (degree reduction) or S_k (Schwarzian signs)
  int sign;       // 0 when the value vanishes or does not exist
  bool exists = true;
};

template <class T>
struct PickCertificate {
  int degree = 0;
  T base;
  CertMethod method;
  bool derivative_positive = false;
  std::vector<LevelRecord<T>> levels;
  bool strict_pass = false;  // DR > 0 and every level > 0
  bool weak_pass = false;    // DR > 0 and every level >= 0
  Verdict verdict = Verdict::kInconclusive;
  std::vector<std::pair<T, Verdict>> cross_checks;
  bool cross_consistent = true;
};

namespace detail {

template <class T>
PickCertificate<T> certify_at(const RationalMap<T>& map, const T& x, CertMethod method) {
  PickCertificate<T> c;
  c.base = x;
  c.method = method;
  RationalMap<T> r = map.recentered(x);
  if constexpr (kIsExact<T>) r = r.reduced();
  c.degree = r.degree();
  if (c.degree == 0) {
    c.derivative_positive = false;
    c.strict_pass = c.weak_pass = true;
    c.verdict = Verdict::kPick;
    return c;
  }
  double scale = 1.0;
  for (const T& v : r.p().coeffs()) scale = std::max(scale, ScalarTraits<T>::magnitude(v));
  for (const T& v : r.q().coeffs()) scale = std::max(scale, ScalarTraits<T>::magnitude(v));
  T dr = r.derivative_at_base();
  int dsign = sign_of(dr, scale, kIsExact<T> ? 0.0 : 1e-9);
  c.derivative_positive = dsign > 0;
  bool undecided = !kIsExact<T> && dsign == 0;

  if (method == CertMethod::kSchwarzianSigns) {
    Jet<T> j = r.jet(2 * c.degree + 1);
    bool strict = true, weak = true;
    for (int k = 1; k < c.degree; ++k) {
      LevelRecord<T> rec{k, from_int<T>(0), 0};
      if (dsign == 0) {
        rec.exists = false;
      } else {
        try {
          rec.value = schwarzian(j, k);
          rec.sign = sign_of(rec.value, std::max(1.0, ScalarTraits<T>::magnitude(rec.value)),
                             kIsExact<T> ? 0.0 : 1e-9);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNotNormal) throw;
          rec.exists = false;
        }
      }
      if (!rec.exists || rec.sign <= 0) strict = false;
      if (!rec.exists || rec.sign < 0) weak = false;
      if (!kIsExact<T> && rec.exists && rec.sign == 0) undecided = true;
      c.levels.push_back(rec);
    }
    c.strict_pass = c.derivative_positive && strict;
    c.weak_pass = c.derivative_positive && weak;
  } else {
    // Degree reduction: DR > 0 at every level until a constant remains.
    RationalMap<T> t = r;
    bool ok = c.derivative_positive;
    bool strict = ok;
    for (int k = 1; ok && t.degree() > 1; ++k) {
      t = pick_step(t);
      if (t.degree() == 0) break;
      LevelRecord<T> rec{k, t.derivative_at_base(), 0};
      rec.sign = sign_of(rec.value, scale, kIsExact<T> ? 0.0 : 1e-9);
      if (!kIsExact<T> && rec.sign == 0) undecided = true;
      c.levels.push_back(rec);
      if (rec.sign <= 0) ok = strict = false;
    }
    c.strict_pass = strict;
    c.weak_pass = ok;
  }
  if (c.weak_pass)
    c.verdict = Verdict::kPick;
  else
    c.verdict = undecided ? Verdict::kInconclusive : Verdict::kNotPick;
  return c;
}

}  // namespace detail

/// Certifies at x and cross-validates at two further finite points.
template <class T>
PickCertificate<T> certify_pick(const RationalMap<T>& r, const T& x, CertMethod method,
                                bool cross_validate = true) {
  PickCertificate<T> c = detail::certify_at(r, x, method);
  if (!cross_validate || c.degree == 0) return c;
  const long offsets[][2] = {{1, 2}, {-1, 2}, {1, 1}, {-1, 1}, {1, 3}, {-1, 3}, {2, 1}, {-2, 1}};
  for (const auto& o : offsets) {
    if (c.cross_checks.size() == 2) break;
    T y = x + ScalarTraits<T>::from_ratio(o[0], o[1]);
    try {
      auto other = detail::certify_at(r, y, method);
      c.cross_checks.push_back({y, other.verdict});
      if (other.verdict != c.verdict) c.cross_consistent = false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPole) throw;
    }
  }
  return c;
}

struct GridSpec {
  double re_lo = -10, re_hi = 10;
  int re_count = 40;
  double im_lo = 1e-3, im_hi = 1e3;  // log-spaced
  int im_count = 40;
  double tau = 1e-12;
};

struct HalfplaneReport {
  long double min_im = 0;
  Complex argmin{};
  int points = 0;
  int failures = 0;  // Im R(z) < -tau, or a pole in the upper half-plane
  std::vector<Complex> failing_points;  // first few
  bool pass = false;
};

HalfplaneReport halfplane_sample_check(const RationalMap<double>& r, const GridSpec& grid = {});

template <class T>
HalfplaneReport halfplane_sample_check(const RationalMap<T>& r, const GridSpec& grid = {}) {
  return halfplane_sample_check(map_from_rational<double>(r), grid);
}

struct CrossRatioMatrix {
  std::vector<double> points;
  std::vector<std::vector<double>> entries;
  std::vector<double> eigenvalues;  // ascending
  double min_eigenvalue() const { return eigenvalues.empty() ? 0 : eigenvalues.front(); }
};

/// From sampled values and derivatives at distinct points.
CrossRatioMatrix crossratio_matrix(const std::vector<double>& points, const std::vector<double>& values,
                                   const std::vector<double>& derivatives);

/// Exact variant: the squared entries are formed exactly, then rooted.
CrossRatioMatrix crossratio_matrix(const RationalMap<Rational>& r, const std::vector<Rational>& points);

/// Real roots of the denominator (poles on the real line), ascending.
std::vector<double> real_poles(const RationalMap<double>& r);

template <class T>
using JetSource = std::function<Jet<T>(const T& x, int order)>;

template <class T>
struct MembershipPoint {
  T x;
  std::vector<T> s;          // S_1..S_d
  std::vector<int> signs;
};

template <class T>
struct MembershipReport {
  int d = 0;
  std::vector<MembershipPoint<T>> points;
  double min_value = 0;
  std::optional<T> argmin;
  bool pass = true;
};

/// S_1..S_d at every point; pass iff all >= 0 (float: >= -tau scaled).
template <class T>
MembershipReport<T> pd_membership(const JetSource<T>& f, int d, const std::vector<T>& points,
                                  double tau = 1e-9) {
  MembershipReport<T> rep;
  rep.d = d;
  bool first = true;
  for (const T& x : points) {
    Jet<T> j = f(x, 2 * d + 1);
    if (is_zero(j[1], std::max(1.0, j.scale())))
      throw Error(ErrorCode::kCriticalPoint, "critical point at " + to_string(x));
    MembershipPoint<T> mp{x, {}, {}};
    for (int k = 1; k <= d; ++k) {
      T v = schwarzian(j, k);
      int sg = kIsExact<T> ? sign_of(v) : (to_double(v) < -tau * std::max(1.0, j.scale()) ? -1 : (to_double(v) > 0 ? 1 : 0));
      mp.s.push_back(v);
      mp.signs.push_back(sg);
      if (sg < 0) rep.pass = false;
      double dv = to_double(v);
      if (first || dv < rep.min_value) {
        rep.min_value = dv;
        rep.argmin = x;
        first = false;
      }
    }
    rep.points.push_back(std::move(mp));
  }
  return rep;
}

struct MonotoneReport {
  int n = 0;
  int trials = 0;
  int rejections = 0;
  double min_eigenvalue = 0;        // over all trials, of f(B) - f(A)
  double worst_margin = 0;          // min over trials of (min eig + tau_eig)
  int worst_trial = -1;
  std::vector<std::vector<double>> witness_a, witness_b;
  bool pass = true;
};

/// Random pairs A <= B with spectra in (lo, hi). Trial i uses seed + i.
MonotoneReport matrix_monotone_test(const std::function<double(double)>& f, double lo, double hi, int n,
                                    int trials, std::uint64_t seed, int max_rejections = 1000);

/// min eigenvalue of f(B) - f(A) for a given pair.
double matrix_pair_check(const std::function<double(double)>& f, const std::vector<std::vector<double>>& a,
                         const std::vector<std::vector<double>>& b);

}  // namespace schwarz
