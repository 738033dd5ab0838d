#include "schwarz/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>

namespace schwarz {

namespace {

std::vector<double> real_roots_in_unit(const Polynomial<double>& p) {
  std::vector<double> out;
  int n = p.degree();
  if (n < 1) return out;
  const auto& c = p.coeffs();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  for (int i = 0; i < n; ++i) {
    auto ev = es.eigenvalues()[i];
    if (std::fabs(ev.imag()) > 1e-7 * std::max(1.0, std::abs(ev))) continue;
    double r = ev.real();
    if (r > 0 && r < 1) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Convergents p/q of v with q <= max_den.
std::vector<Rational> convergents(double v, long max_den) {
  std::vector<Rational> out;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = v;
  for (int it = 0; it < 40; ++it) {
    double a = std::floor(r);
    mpz_class ai(a);
    mpz_class p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    Rational c(p2, q2);
    c.canonicalize();
    out.push_back(c);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1 / frac;
  }
  return out;
}

Polynomial<double> to_double_poly(const Polynomial<Rational>& p) {
  std::vector<double> c;
  for (const auto& v : p.coeffs()) c.push_back(v.get_d());
  return Polynomial<double>(c);
}

double q_raw(double u, double alpha, double a) {
  double norm = std::pow(1 + a, alpha) - std::pow(a, alpha);
  return (std::pow(u + a, alpha) - std::pow(a, alpha)) / norm;
}

Jet<double> poly_jet(const Polynomial<double>& p, double x, int order) {
  auto s = p.shifted(x).coeffs();
  s.resize(order + 1, 0.0);
  return Jet<double>(x, s);
}

}  // namespace

IntervalMap IntervalMap::polynomial(Polynomial<Rational> p, std::string name) {
  IntervalMap m;
  m.kind_ = Kind::kPolynomial;
  m.p_ = std::move(p);
  m.name_ = std::move(name);
  m.find_critical_points();
  return m;
}

IntervalMap IntervalMap::composite(Polynomial<double> phi, double alpha, double a, Polynomial<double> psi,
                                   std::string name) {
  if (!(alpha > 1) || !(a >= 0)) throw Error(ErrorCode::kInvalidArgument, "need alpha > 1 and a >= 0");
  IntervalMap m;
  m.kind_ = Kind::kComposite;
  m.phi_ = std::move(phi);
  m.psi_ = std::move(psi);
  m.alpha_ = alpha;
  m.a_ = a;
  m.name_ = std::move(name);
  m.find_critical_points();
  return m;
}

const Polynomial<Rational>& IntervalMap::poly() const {
  if (kind_ != Kind::kPolynomial) throw Error(ErrorCode::kInvalidArgument, name_ + " is not a polynomial map");
  return p_;
}

double IntervalMap::operator()(double x) const {
  if (kind_ == Kind::kPolynomial) return to_double_poly(p_)(x);
  return psi_(q_raw(phi_(x), alpha_, a_));
}

Jet<Rational> IntervalMap::jet(const Rational& x, int order) const {
  auto s = poly().shifted(x).coeffs();
  s.resize(order + 1, Rational(0));
  return Jet<Rational>(x, s);
}

Jet<double> IntervalMap::jet(double x, int order) const {
  if (kind_ == Kind::kPolynomial) return poly_jet(to_double_poly(p_), x, order);
  Jet<double> inner = poly_jet(phi_, x, order);
  double u = inner[0];
  double v = u + a_;
  if (v <= 0) throw Error(ErrorCode::kCriticalPoint, "q_{alpha,a} is not smooth at " + format_double(x));
  double norm = std::pow(1 + a_, alpha_) - std::pow(a_, alpha_);
  std::vector<double> c(order + 1);
  c[0] = q_raw(u, alpha_, a_);
  double binom = 1;
  for (int k = 1; k <= order; ++k) {
    binom *= (alpha_ - (k - 1)) / k;
    c[k] = binom * std::pow(v, alpha_ - k) / norm;
  }
  Jet<double> mid = compose(Jet<double>(u, c), inner);
  return compose(poly_jet(psi_, mid[0], order), mid);
}

void IntervalMap::find_critical_points() {
  crit_.clear();
  if (kind_ == Kind::kPolynomial) {
    Polynomial<Rational> dp = p_.derivative();
    for (double r : real_roots_in_unit(to_double_poly(dp))) {
      // numerically split copies of a multiple root; an exact root already knows its order
      if (!crit_.empty() && std::fabs(crit_.back().approx - r) < (crit_.back().exact ? 1e-3 : 1e-6)) {
        if (!crit_.back().exact) ++crit_.back().order;
        continue;
      }
      CriticalPoint cp{r, std::nullopt, 1};
      for (const Rational& c : convergents(r, 1000000))
        if (dp(c) == 0) {
          cp.exact = c;
          break;
        }
      if (cp.exact) {
        cp.approx = cp.exact->get_d();
        cp.order = 0;
        for (Polynomial<Rational> q = dp; q.degree() >= 0 && q(*cp.exact) == 0; q = q.derivative()) ++cp.order;
      }
      crit_.push_back(cp);
    }
    return;
  }
  // composite: sign changes of f' on a grid, refined by bisection
  auto dfn = [&](double x) { return jet(x, 1)[1]; };
  const int n = 4000;
  double prev_x = 1e-9, prev = dfn(prev_x);
  for (int i = 1; i <= n; ++i) {
    double x = i == n ? 1 - 1e-9 : static_cast<double>(i) / n;
    double cur = dfn(x);
    if ((prev < 0) != (cur < 0) || cur == 0) {
      double lo = prev_x, hi = x;
      for (int it = 0; it < 80; ++it) {
        double m = (lo + hi) / 2;
        ((dfn(m) < 0) == (prev < 0) ? lo : hi) = m;
      }
      crit_.push_back({(lo + hi) / 2, std::nullopt, 1});
    }
    prev = cur;
    prev_x = x;
  }
}

void IntervalMap::validate() const {
  auto bad = [&](const std::string& where) {
    throw Error(ErrorCode::kInvalidArgument, name_ + " does not map [0,1] into itself (" + where + ")");
  };
  if (kind_ == Kind::kPolynomial) {
    for (const Rational& x : {Rational(0), Rational(1)}) {
      Rational v = p_(x);
      if (v < 0 || v > 1) bad("endpoint");
    }
    for (const auto& c : crit_) {
      if (c.exact) {
        Rational v = p_(*c.exact);
        if (v < 0 || v > 1) bad("critical value");
      } else {
        double v = (*this)(c.approx);
        if (v < -1e-12 || v > 1 + 1e-12) bad("critical value");
      }
    }
    return;
  }
  for (int i = 0; i <= 2000; ++i) {
    double v = (*this)(i / 2000.0);
    if (!(v >= -1e-12 && v <= 1 + 1e-12)) bad("grid");
  }
}

IntervalMap logistic(const Rational& a) {
  if (a <= 0 || a > 4) throw Error(ErrorCode::kInvalidArgument, "logistic parameter must lie in (0, 4]");
  IntervalMap f = IntervalMap::polynomial(Polynomial<Rational>(std::vector<Rational>{0, a, -a}),
                                          "logistic(" + a.get_str() + ")");
  f.validate();
  return f;
}

IntervalMap q_family(const Rational& alpha, const Rational& a) {
  if (alpha <= 1 || a < 0) throw Error(ErrorCode::kInvalidArgument, "q family needs alpha > 1 and a >= 0");
  std::string name = "q(" + alpha.get_str() + "," + a.get_str() + ")";
  if (alpha.get_den() == 1 && alpha.get_num() <= 64) {
    int n = static_cast<int>(alpha.get_num().get_si());
    Polynomial<Rational> shifted(std::vector<Rational>{a, Rational(1)}), pw = Polynomial<Rational>::constant(1);
    for (int i = 0; i < n; ++i) pw = pw * shifted;
    Rational an = 1, bn = 1;
    for (int i = 0; i < n; ++i) {
      an *= a;
      bn *= a + 1;
    }
    Polynomial<Rational> num = pw - Polynomial<Rational>::constant(an);
    Rational inv = 1 / Rational(bn - an);
    IntervalMap f = IntervalMap::polynomial(inv * num, name);
    f.validate();
    return f;
  }
  auto id = Polynomial<double>(std::vector<double>{0.0, 1.0});
  IntervalMap f = IntervalMap::composite(id, alpha.get_d(), a.get_d(), id, name);
  f.validate();
  return f;
}

std::vector<Rational> iterate(const IntervalMap& f, const Rational& x, int n) {
  if (x < 0 || x > 1) throw Error(ErrorCode::kInvalidArgument, "x must lie in [0,1]");
  std::vector<Rational> orbit{x};
  for (int j = 1; j <= n; ++j) {
    Rational y = f(orbit.back());
    if (y < 0 || y > 1) throw Error(ErrorCode::kEscapedInterval, "orbit left [0,1] at step " + std::to_string(j));
    orbit.push_back(y);
  }
  return orbit;
}

std::vector<double> iterate(const IntervalMap& f, double x, int n) {
  if (!(x >= 0 && x <= 1)) throw Error(ErrorCode::kInvalidArgument, "x must lie in [0,1]");
  std::vector<double> orbit{x};
  for (int j = 1; j <= n; ++j) {
    double y = f(orbit.back());
    if (!(y >= -1e-12 && y <= 1 + 1e-12))
      throw Error(ErrorCode::kEscapedInterval, "orbit left [0,1] at step " + std::to_string(j));
    orbit.push_back(std::clamp(y, 0.0, 1.0));
  }
  return orbit;
}

std::optional<int> first_entry(const IntervalMap& f, const Rational& x, const Rational& lo, const Rational& hi,
                               int max_steps) {
  Rational y = x;
  for (int s = 0; s <= max_steps; ++s) {
    if (lo < y && y < hi) return s;
    if (s < max_steps) y = f(y);
  }
  return std::nullopt;
}

std::optional<int> first_entry(const IntervalMap& f, double x, double lo, double hi, int max_steps) {
  double y = x;
  for (int s = 0; s <= max_steps; ++s) {
    if (lo < y && y < hi) return s;
    if (s < max_steps) y = f(y);
  }
  return std::nullopt;
}

Jet<Rational> forward_jet(const IntervalMap& f, const Rational& x, int steps, int order) {
  Jet<Rational> j = Jet<Rational>::identity(x, order);
  for (int k = 0; k < steps; ++k) j = compose(f.jet(j[0], order), j);
  return j;
}

Jet<double> forward_jet(const IntervalMap& f, double x, int steps, int order) {
  Jet<double> j = Jet<double>::identity(x, order);
  for (int k = 0; k < steps; ++k) j = compose(f.jet(j[0], order), j);
  return j;
}

namespace {

template <class T>
SchwarzianSequence<T> inverse_branch(const IntervalMap& f, const T& x, int s, int d) {
  if (s < 0 || d < 0) throw Error(ErrorCode::kInvalidArgument, "need s >= 0 and d >= 0");
  Jet<T> j = Jet<T>::identity(x, 2 * d + 1);
  for (int k = 0; k <= s; ++k) {
    Jet<T> step = f.jet(j[0], 2 * d + 1);
    if (is_zero(step[1], std::max(1.0, step.scale())))
      throw Error(ErrorCode::kCriticalOrbit, "Df vanishes at f^" + std::to_string(k) + "(x)");
    j = compose(step, j);
  }
  return schwarzian_sequence(reverse(j), d);
}

}  // namespace

SchwarzianSequence<Rational> inverse_branch_schwarzians(const IntervalMap& f, const Rational& x, int s, int d) {
  return inverse_branch<Rational>(f, x, s, d);
}

SchwarzianSequence<double> inverse_branch_schwarzians(const IntervalMap& f, double x, int s, int d) {
  return inverse_branch<double>(f, x, s, d);
}

std::vector<Rational> stern_brocot(int n) {
  struct Node {
    long a, b, c, d;  // the mediant of a/b and c/d
  };
  std::vector<Rational> out;
  std::deque<Node> queue{{0, 1, 1, 1}};
  while (static_cast<int>(out.size()) < n) {
    Node nd = queue.front();
    queue.pop_front();
    long p = nd.a + nd.c, q = nd.b + nd.d;
    out.push_back(Rational(p, q));
    queue.push_back({nd.a, nd.b, p, q});
    queue.push_back({p, q, nd.c, nd.d});
  }
  return out;
}

}  // namespace schwarz
