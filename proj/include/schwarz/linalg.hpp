#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "schwarz/error.hpp"
#include "schwarz/scalar.hpp"

namespace schwarz {

template <class T>
using Matrix = std::vector<std::vector<T>>;

namespace detail {

// Clears denominators row by row: row i of the result is scale[i] * A[i].
inline std::vector<std::vector<Integer>> integer_rows(const Matrix<Rational>& a,
                                                      std::vector<Integer>& scale) {
  std::vector<std::vector<Integer>> m(a.size());
  scale.assign(a.size(), Integer(1));
  for (std::size_t i = 0; i < a.size(); ++i) {
    Integer l = 1;
    for (const Rational& v : a[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    scale[i] = l;
    for (const Rational& v : a[i]) m[i].push_back(v.get_num() * (l / v.get_den()));
  }
  return m;
}

// Fraction-free elimination in place. Returns the rank of the leading `cols`
// columns; row swaps are recorded in `sign`. After the call, row k (k < rank)
// holds the k-th Bareiss pivot row.
inline int bareiss(std::vector<std::vector<Integer>>& m, int cols, int& sign,
                   std::vector<int>* pivot_cols = nullptr) {
  int rows = static_cast<int>(m.size());
  int width = rows ? static_cast<int>(m[0].size()) : 0;
  Integer prev = 1;
  sign = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      sign = -sign;
    }
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < width; ++j) {
        m[i][j] = m[i][j] * m[r][c] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    if (pivot_cols) pivot_cols->push_back(c);
    prev = m[r][c];
    ++r;
  }
  return r;
}

}  // namespace detail

template <class T>
T determinant(const Matrix<T>& a) {
  int n = static_cast<int>(a.size());
  if (n == 0) return from_int<T>(1);
  if constexpr (kIsExact<T>) {
    std::vector<Integer> scale;
    auto m = detail::integer_rows(a, scale);
    int sign = 1;
    int rank = detail::bareiss(m, n, sign);
    if (rank < n) return Rational(0);
    Integer den = 1;
    for (const Integer& s : scale) den *= s;
    Rational r(sign * m[n - 1][n - 1], den);
    r.canonicalize();
    return r;
  } else {
    Matrix<T> m = a;
    T det = 1;
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int i = c + 1; i < n; ++i)
        if (std::fabs(m[i][c]) > std::fabs(m[p][c])) p = i;
      if (m[p][c] == 0) return 0;
      if (p != c) {
        std::swap(m[p], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (int i = c + 1; i < n; ++i) {
        T f = m[i][c] / m[c][c];
        for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      }
    }
    return det;
  }
}

/// Solves A y = b for square A. `row_order` permutes the equations before
/// elimination (the solution is independent of it when A is invertible).
/// Returns nullopt when A is singular (float: a pivot below tau * scale).
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, const std::vector<T>& b,
                                    const std::vector<int>& row_order = {}) {
  int n = static_cast<int>(a.size());
  std::vector<int> order = row_order;
  if (order.empty())
    for (int i = 0; i < n; ++i) order.push_back(i);
  if constexpr (kIsExact<T>) {
    Matrix<Rational> aug;
    for (int i : order) {
      aug.push_back(a[i]);
      aug.back().push_back(b[i]);
    }
    std::vector<Integer> scale;
    auto m = detail::integer_rows(aug, scale);
    int sign = 1;
    if (detail::bareiss(m, n, sign) < n) return std::nullopt;
    std::vector<Rational> y(n);
    for (int i = n - 1; i >= 0; --i) {
      Rational acc(m[i][n]);
      for (int j = i + 1; j < n; ++j) acc -= Rational(m[i][j]) * y[j];
      y[i] = acc / Rational(m[i][i]);
    }
    return y;
  } else {
    Matrix<T> m;
    std::vector<T> rhs;
    double scale = 0;
    for (int i : order) {
      m.push_back(a[i]);
      rhs.push_back(b[i]);
      for (T v : a[i]) scale = std::fmax(scale, std::fabs(v));
    }
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int i = c + 1; i < n; ++i)
        if (std::fabs(m[i][c]) > std::fabs(m[p][c])) p = i;
      if (is_zero(m[p][c], scale)) return std::nullopt;
      std::swap(m[p], m[c]);
      std::swap(rhs[p], rhs[c]);
      for (int i = c + 1; i < n; ++i) {
        T f = m[i][c] / m[c][c];
        for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        rhs[i] -= f * rhs[c];
      }
    }
    std::vector<T> y(n);
    for (int i = n - 1; i >= 0; --i) {
      T acc = rhs[i];
      for (int j = i + 1; j < n; ++j) acc -= m[i][j] * y[j];
      y[i] = acc / m[i][i];
    }
    return y;
  }
}

/// Exact rank test: is A y = b solvable (A may be singular)?
inline bool is_consistent(const Matrix<Rational>& a, const std::vector<Rational>& b) {
  int n = a.empty() ? 0 : static_cast<int>(a[0].size());
  Matrix<Rational> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<Integer> scale;
  auto m = detail::integer_rows(aug, scale);
  auto m2 = m;
  int sign = 1;
  int rank_a = detail::bareiss(m, n, sign);
  int rank_aug = detail::bareiss(m2, n + 1, sign);
  return rank_a == rank_aug;
}

}  // namespace schwarz
