#pragma once

// Hankel matrices and diagonal Padé approximants.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "schwarz/jet.hpp"
#include "schwarz/linalg.hpp"
#include "schwarz/rational_map.hpp"

namespace schwarz {

template <class T>
void require_order(const Jet<T>& f, int needed, const char* what) {
  if (f.order() < needed)
    throw Error(ErrorCode::kOrderTooSmall, std::string(what) + " needs jet order " +
                                               std::to_string(needed) + ", got " +
                                               std::to_string(f.order()));
}

/// M_d(x, f): entries F_{i+j+1}, 0 <= i, j < d.
template <class T>
Matrix<T> hankel_matrix(const Jet<T>& f, int d) {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "hankel_matrix needs d >= 1");
  require_order(f, 2 * d - 1, "hankel_matrix");
  Matrix<T> m(d, std::vector<T>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m[i][j] = f[i + j + 1];
  return m;
}

template <class T>
T hankel_det(const Jet<T>& f, int d) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "hankel_det needs d >= 0");
  if (d == 0) return from_int<T>(1);
  return determinant(hankel_matrix(f, d));
}

/// Float threshold: tau * (max_{1<=k<2d} |F_k|)^d.
template <class T>
double hankel_scale(const Jet<T>& f, int d) {
  double m = 0;
  for (int k = 1; k <= 2 * d - 1 && k <= f.order(); ++k)
    m = std::fmax(m, ScalarTraits<T>::magnitude(f[k]));
  return std::pow(m, d);
}

template <class T>
bool is_normal(const Jet<T>& f, int d) {
  require_order(f, 2 * d, "is_normal");
  if (d == 0) return true;
  return !is_zero(hankel_det(f, d), hankel_scale(f, d));
}

/// The denominator equations: sum_{i=1..d} Q_i F_{l-i} = -F_l, l = d+1..2d.
template <class T>
std::pair<Matrix<T>, std::vector<T>> pade_system(const Jet<T>& f, int d) {
  require_order(f, 2 * d, "pade_system");
  Matrix<T> a(d, std::vector<T>(d));
  std::vector<T> b(d);
  for (int r = 0; r < d; ++r) {
    int l = d + 1 + r;
    for (int i = 1; i <= d; ++i) a[r][i - 1] = f[l - i];
    b[r] = -f[l];
  }
  return {a, b};
}

namespace detail {

template <class T>
bool jets_agree(const Jet<T>& a, const Jet<T>& b, int order) {
  double s = std::max(1.0, std::max(a.scale(), b.scale()));
  for (int k = 0; k <= order; ++k) {
    if constexpr (kIsExact<T>) {
      if (a[k] != b[k]) return false;
    } else {
      if (!is_zero(a[k] - b[k], s, 1e-8)) return false;
    }
  }
  return true;
}

template <class T>
RationalMap<T> solve_pade(const Jet<T>& f, int d, const std::vector<int>& row_order) {
  std::vector<T> q(d + 1, from_int<T>(0));
  q[0] = from_int<T>(1);
  if (d > 0) {
    auto [a, b] = pade_system(f, d);
    auto sol = solve(a, b, row_order);
    if (!sol)
      throw Error(ErrorCode::kNotNormal, "Pade system of order " + std::to_string(d) + " is singular",
                  kIsExact<T> ? NormalityFailure::kNonexistent : NormalityFailure::kUndetermined, d);
    for (int i = 1; i <= d; ++i) q[i] = (*sol)[i - 1];
  }
  std::vector<T> p(d + 1);
  for (int l = 0; l <= d; ++l) {
    T acc = f[l];
    for (int i = 1; i <= l; ++i) acc += q[i] * f[l - i];
    p[l] = acc;
  }
  return RationalMap<T>(f.base(), Polynomial<T>(p), Polynomial<T>(q));
}

}  // namespace detail

/// Which sub-case a non-normal order falls into (exact backend): either the
/// d'th approximant exists with lower degree, or it does not exist at all.
template <class T>
NormalityFailure classify_non_normal(const Jet<T>& f, int d) {
  if constexpr (!kIsExact<T>) {
    return NormalityFailure::kUndetermined;
  } else {
    int k = d - 1;
    while (k > 0 && !is_normal(f, k)) --k;
    RationalMap<T> r = detail::solve_pade(f, k, {});
    return detail::jets_agree(r.jet(2 * d), f, 2 * d) ? NormalityFailure::kDegenerate
                                                      : NormalityFailure::kNonexistent;
  }
}

/// The d'th diagonal approximant of degree exactly d (requires normality).
/// The result is checked to coincide with f to order 2d.
template <class T>
RationalMap<T> pade_approximant(const Jet<T>& f, int d, const std::vector<int>& row_order = {}) {
  if (d < 0) throw Error(ErrorCode::kInvalidArgument, "pade_approximant needs d >= 0");
  require_order(f, 2 * d, "pade_approximant");
  if (d > 0 && !is_normal(f, d))
    throw Error(ErrorCode::kNotNormal, "not normal of order " + std::to_string(d),
                classify_non_normal(f, d), d);
  RationalMap<T> r = detail::solve_pade(f, d, row_order);
  if (!detail::jets_agree(r.jet(2 * d), f, 2 * d))
    throw Error(ErrorCode::kInternal, "Pade approximant does not coincide to order 2d");
  return r;
}

/// The d'th approximant whenever it exists, normal or not: the approximant
/// of the largest normal order k <= d, provided it still matches to order 2d.
template <class T>
std::optional<RationalMap<T>> pade_if_exists(const Jet<T>& f, int d) {
  require_order(f, 2 * d, "pade_if_exists");
  int k = d;
  while (k > 0 && !is_normal(f, k)) --k;
  RationalMap<T> r = detail::solve_pade(f, k, {});
  if (!detail::jets_agree(r.jet(2 * d), f, 2 * d)) return std::nullopt;
  return r;
}

template <class T>
std::optional<T> rational_eval(const RationalMap<T>& r, const T& z) {
  return r(z);
}

inline std::optional<Complex> rational_eval(const RationalMap<double>& r, Complex z) {
  return r.eval_complex(z);
}

template <class T>
int rational_degree(const RationalMap<T>& r, bool* reduced = nullptr) {
  return r.degree(reduced);
}

}  // namespace schwarz
