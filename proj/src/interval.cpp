#include "schwarz/interval.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "schwarz/error.hpp"

namespace schwarz {

Interval::Interval(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) {
  mpfr_init2(lo_, o.precision());
  mpfr_init2(hi_, o.precision());
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
  mpfr_init2(lo_, mpfr_get_prec(o.lo_));
  mpfr_init2(hi_, mpfr_get_prec(o.hi_));
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.precision());
    mpfr_set_prec(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& r, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_q(out.lo_, r.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_, r.get_mpq_t(), MPFR_RNDU);
  return out;
}

Interval Interval::from_integer(const Integer& n, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_z(out.lo_, n.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_, n.get_mpz_t(), MPFR_RNDU);
  return out;
}

Interval Interval::from_int(long n, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_si(out.lo_, n, MPFR_RNDD);
  mpfr_set_si(out.hi_, n, MPFR_RNDU);
  return out;
}

Interval Interval::operator+(const Interval& o) const {
  Interval out(std::max(precision(), o.precision()));
  mpfr_add(out.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, hi_, o.hi_, MPFR_RNDU);
  return out;
}

Interval Interval::operator-(const Interval& o) const {
  Interval out(std::max(precision(), o.precision()));
  mpfr_sub(out.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, hi_, o.lo_, MPFR_RNDU);
  return out;
}

Interval Interval::operator-() const {
  Interval out(precision());
  mpfr_neg(out.lo_, hi_, MPFR_RNDD);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  return out;
}

Interval Interval::operator*(const Interval& o) const {
  mpfr_prec_t p = std::max(precision(), o.precision());
  Interval out(p);
  mpfr_t t;
  mpfr_init2(t, p);
  const mpfr_srcptr a[2] = {lo_, hi_}, b[2] = {o.lo_, o.hi_};
  bool first = true;
  for (auto x : a)
    for (auto y : b) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_)) mpfr_set(out.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_)) mpfr_set(out.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return out;
}

Interval Interval::operator/(const Interval& o) const {
  if (o.contains_zero()) throw Error(ErrorCode::kDivisionByZero, "interval divisor contains zero");
  mpfr_prec_t p = std::max(precision(), o.precision());
  Interval inv(p);
  mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
  return *this * inv;
}

int Interval::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  return 0;
}

bool Interval::certainly_above(const Rational& r) const { return mpfr_cmp_q(lo_, r.get_mpq_t()) > 0; }
bool Interval::certainly_below(const Rational& r) const { return mpfr_cmp_q(hi_, r.get_mpq_t()) < 0; }

double Interval::mid() const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double v = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return v;
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::log2_rel_width() const {
  mpfr_t w, m;
  mpfr_init2(w, 64);
  mpfr_init2(m, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_abs(m, m, MPFR_RNDN);
  double out;
  if (mpfr_zero_p(m)) {
    out = std::numeric_limits<double>::infinity();
  } else if (mpfr_zero_p(w)) {
    out = -std::numeric_limits<double>::infinity();
  } else {
    long ew, em;
    double dw = mpfr_get_d_2exp(&ew, w, MPFR_RNDN), dm = mpfr_get_d_2exp(&em, m, MPFR_RNDN);
    out = std::log2(dw / dm) + static_cast<double>(ew - em) + 1;
  }
  mpfr_clear(w);
  mpfr_clear(m);
  return out;
}

std::string Interval::to_string(int digits) const {
  auto fmt = [&](mpfr_srcptr v, mpfr_rnd_t rnd) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*R*g", digits, rnd, v);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  };
  return "[" + fmt(lo_, MPFR_RNDD) + ", " + fmt(hi_, MPFR_RNDU) + "]";
}

Interval interval_determinant(const std::vector<std::vector<Interval>>& m, mpfr_prec_t prec) {
  int n = static_cast<int>(m.size());
  if (n == 0) return Interval::from_int(1, prec);
  if (n > 20) throw Error(ErrorCode::kInvalidArgument, "interval determinant too large");
  // minors[mask] = det of rows (n - popcount(mask) .. n-1) with columns in mask
  std::vector<Interval> minors(std::size_t(1) << n, Interval(prec));
  minors[0] = Interval::from_int(1, prec);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    int k = __builtin_popcount(mask);
    int row = n - k;
    Interval acc(prec);
    int parity = 0;
    for (int c = 0; c < n; ++c) {
      if (!(mask & (1u << c))) continue;
      Interval term = m[row][c] * minors[mask & ~(1u << c)];
      acc = parity % 2 == 0 ? acc + term : acc - term;
      ++parity;
    }
    minors[mask] = std::move(acc);
  }
  return minors[(1u << n) - 1];
}

}  // namespace schwarz
