#include "schwarz/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace schwarz {

namespace {

Integer parse_integer(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw Error(ErrorCode::kParse, "empty number");
  if (t[0] == '+') t.erase(0, 1);
  Integer z;
  if (t.empty() || z.set_str(t, 10) != 0)
    throw Error(ErrorCode::kParse, "bad integer '" + std::string(s) + "'");
  return z;
}

Rational parse_decimal(std::string_view s) {
  std::string t(s);
  std::string exp_part;
  if (auto e = t.find_first_of("eE"); e != std::string::npos) {
    exp_part = t.substr(e + 1);
    t = t.substr(0, e);
  }
  bool neg = false;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    neg = t[0] == '-';
    t.erase(0, 1);
  }
  std::string digits;
  long scale = 0;
  if (auto dot = t.find('.'); dot != std::string::npos) {
    digits = t.substr(0, dot) + t.substr(dot + 1);
    scale = static_cast<long>(t.size() - dot - 1);
  } else {
    digits = t;
  }
  if (digits.empty()) throw Error(ErrorCode::kParse, "bad number '" + std::string(s) + "'");
  long e10 = 0;
  if (!exp_part.empty()) {
    auto [p, ec] = std::from_chars(exp_part.data() + (exp_part[0] == '+'),
                                   exp_part.data() + exp_part.size(), e10);
    if (ec != std::errc() || p != exp_part.data() + exp_part.size())
      throw Error(ErrorCode::kParse, "bad exponent in '" + std::string(s) + "'");
  }
  Integer num = parse_integer(digits);
  long net = e10 - scale;
  Integer pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(net)));
  Rational r = net >= 0 ? Rational(num * pow10) : Rational(num, pow10);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorCode::kParse, "empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer p = parse_integer(s.substr(0, slash));
    Integer q = parse_integer(s.substr(slash + 1));
    if (q == 0) throw Error(ErrorCode::kDivisionByZero, "zero denominator in '" + std::string(s) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  if (s.find_first_of(".eE") != std::string_view::npos) return parse_decimal(s);
  return Rational(parse_integer(s));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

double ratio_to_double(const Integer& num, const Integer& den) {
  if (num == 0) return 0.0;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  long e = en - ed;
  if (e > std::numeric_limits<int>::max()) e = std::numeric_limits<int>::max();
  if (e < std::numeric_limits<int>::min()) e = std::numeric_limits<int>::min();
  return std::ldexp(mn / md, static_cast<int>(e));
}

double ScalarTraits<double>::parse(std::string_view s) {
  return parse_rational(s).get_d();
}

}  // namespace schwarz
