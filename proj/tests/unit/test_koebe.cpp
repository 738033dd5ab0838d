#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "schwarz/koebe.hpp"
#include "schwarz/random.hpp"
#include "support.hpp"

using namespace schwarz;
using test::Q;
using test::qv;

namespace {

using OptQ = std::optional<Rational>;

JetSource<Rational> map_source(const RationalMap<Rational>& r) {
  return [r](const Rational& x, int n) { return r.recentered(x).jet(n); };
}

RationalMap<Rational> mobius_map() { return RationalMap<Rational>::mobius(Q("1"), Q("0"), Q("-1"), Q("1"), Q("0")); }

Rational dyadic(double v) {
  return Rational(std::ldexp(std::nearbyint(std::ldexp(v, 20)), -20));
}

}  // namespace

TEST_CASE("bound formula") {
  KoebeQuery<Rational> q{1, 1, 1, Q("-1"), Q("1"), Q("1/2")};
  CHECK(*koebe_bound(q, Q("-7")) == 7);
  q.m = 2;
  CHECK(*koebe_bound(q, Q("4")) == 16);
  KoebeQuery<Rational> q3{2, 3, 1, Q("0"), Q("1"), Q("1/2")};
  CHECK(*koebe_bound(q3, Q("1")) == 24);
  CHECK(*koebe_bound(q3, Q("1"), KoebeConstant::kStatement) == Q("2/3"));

  KoebeQuery<double> half{1, 2, 1, 0.0, std::nullopt, 0.25};
  CHECK(*koebe_bound(half, 1.0) == doctest::Approx(8.0));
  KoebeQuery<double> line{1, 2, 1, std::nullopt, std::nullopt, 0.0};
  CHECK_FALSE(koebe_bound(line, 1.0).has_value());
  line.m = 1;
  CHECK(*koebe_bound(line, 3.0) == 3.0);
}

TEST_CASE("query validation") {
  auto bad = [](int d, int m, int n, const char* x) {
    KoebeQuery<Rational> q{d, m, n, Q("0"), Q("1"), Q(x)};
    CHECK_THROWS_AS(q.validate(), Error);
  };
  bad(1, 2, 2, "1/2");  // n even
  bad(1, 3, 1, "1/2");  // m > 2d
  bad(2, 1, 3, "1/2");  // n > m
  bad(0, 1, 1, "1/2");
  bad(1, 1, 1, "1");    // on the boundary
  bad(1, 1, 1, "2");
  CHECK(koebe_pairs(1) == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}});
  CHECK(koebe_pairs(2).size() == 4 + 2);
}

TEST_CASE("Moebius witness is sharp with m!/n!") {
  auto grid = qv({"0", "1/4", "1/2", "3/4"});
  auto rep = koebe_check(map_source(mobius_map()), 1, 2, 1, OptQ(Q("-1")), OptQ(Q("1")), grid);
  CHECK(rep.pass);
  REQUIRE(rep.points.size() == 4);
  for (const auto& p : rep.points) {
    CHECK(p.ratio == 1.0);
    CHECK(p.dm == *p.bound);
  }
  // ratio dist/(1-x) < 1 left of the centre
  auto left = koebe_check(map_source(mobius_map()), 1, 2, 1, OptQ(Q("-1")), OptQ(Q("1")), qv({"-1/2"}));
  CHECK(left.points[0].ratio == doctest::Approx(1.0 / 3));

  // with the constant n!/m! the same witness gives (m!/n!)^2 = 4
  auto st = koebe_check(map_source(mobius_map()), 1, 2, 1, OptQ(Q("-1")), OptQ(Q("1")), grid,
                        KoebeConstant::kStatement);
  CHECK_FALSE(st.pass);
  CHECK(st.max_ratio == 4.0);
}

TEST_CASE("affine maps, vacuous bounds and refusal") {
  JetSource<Rational> aff = [](const Rational& x, int n) {
    std::vector<Rational> c(n + 1, Rational(0));
    c[0] = 3 * x + 1;
    c[1] = 3;
    return Jet<Rational>(x, c);
  };
  auto rep = koebe_check(aff, 2, 4, 1, OptQ(Q("0")), OptQ(Q("1")), qv({"1/3", "1/2"}));
  CHECK(rep.pass);
  CHECK(rep.max_ratio == 0);

  auto vac = koebe_check(map_source(mobius_map()), 1, 2, 1, OptQ(), OptQ(), qv({"-1/2"}));
  CHECK(vac.vacuous);
  CHECK(vac.verdict() == "vacuous");

  JetSource<Rational> cube = [](const Rational& x, int n) {
    std::vector<Rational> c(n + 1, Rational(0));
    c[0] = x + x * x * x;
    c[1] = 1 + 3 * x * x;
    if (n >= 2) c[2] = 3 * x;
    if (n >= 3) c[3] = 1;
    return Jet<Rational>(x, c);
  };
  try {
    koebe_check(cube, 1, 2, 1, OptQ(Q("-1")), OptQ(Q("1")), qv({"0", "9/10"}));
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMembershipFailure);
  }
}

TEST_CASE("Chebyshev grid") {
  auto g = chebyshev_grid(-1.0, 1.0);
  REQUIRE(g.size() == 64);
  CHECK(g.front() > -0.98 - 1e-12);
  CHECK(g.back() < 0.98 + 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  auto gq = chebyshev_grid(Q("0"), Q("1"), 16);
  CHECK(gq.size() == 16);
  for (const auto& x : gq) CHECK((x > 0 && x < 1));
}

TEST_CASE("inverse logistic branch on (0.1, 0.9)") {
  JetSource<double> inv = [](const double& y, int n) {
    double x = (1 - std::sqrt(1 - y)) / 2;
    std::vector<double> c(n + 1, 0.0);
    c[0] = y;
    c[1] = 4 - 8 * x;
    c[2] = -4;
    return reverse(Jet<double>(x, c));
  };
  auto grid = chebyshev_grid(0.1, 0.9);
  auto rep = koebe_check(inv, 2, 3, 1, std::optional<double>(0.1), std::optional<double>(0.9), grid);
  CHECK(rep.pass);
  CHECK(rep.max_ratio < 1);
  for (auto [m, n] : koebe_pairs(2))
    CHECK(koebe_check(inv, 2, m, n, std::optional<double>(0.1), std::optional<double>(0.9), grid).pass);
}

TEST_CASE("Pick maps satisfy every bound on a pole-free interval") {
  Sampler s(51);
  for (int trial = 0; trial < 6; ++trial) {
    int d = static_cast<int>(s.integer(1, 3));
    auto r = cf_to_rational_map(s.continued_fraction(d, Q("0"), true));
    double lo = -4, hi = 4;
    for (double p : real_poles(map_from_rational<double>(r))) {
      if (p <= 0) lo = std::max(lo, p);
      if (p > 0) hi = std::min(hi, p);
    }
    Rational qlo = dyadic(lo + 1e-3 * (hi - lo)), qhi = dyadic(hi - 1e-3 * (hi - lo));
    auto grid = chebyshev_grid(qlo, qhi, 12);
    for (auto [m, n] : koebe_pairs(d)) {
      auto rep = koebe_check(map_source(r), d, m, n, OptQ(qlo), OptQ(qhi), grid);
      CHECK(rep.pass);
      CHECK(rep.max_ratio <= 1.0);
    }
  }
}

TEST_CASE("ratios are invariant under affine changes") {
  Sampler s(52);
  auto base = mobius_map();
  auto grid = qv({"-1/2", "0", "1/3", "3/5"});
  for (int trial = 0; trial < 10; ++trial) {
    Rational a1 = s.positive_rational(3, 4), a0 = s.rational(3, 4);
    Rational b1 = s.positive_rational(3, 4), b0 = s.rational(3, 4);
    if (s.integer(0, 1)) a1 = -a1;
    // g(y) = a1 f(b1 y + b0) + a0 on U' = b^-1(U)
    JetSource<Rational> g = [&](const Rational& y, int n) {
      auto j = base.recentered(b1 * y + b0).jet(n);
      std::vector<Rational> c = j.coeffs();
      Rational p = 1;
      for (int k = 0; k <= n; ++k) {
        c[k] = k == 0 ? Rational(a1 * c[k] + a0) : Rational(a1 * c[k] * p);
        p *= b1;
      }
      return Jet<Rational>(y, c);
    };
    std::vector<Rational> grid2;
    for (const auto& x : grid) grid2.push_back((x - b0) / b1);
    auto r1 = koebe_check(map_source(base), 1, 2, 1, OptQ(Q("-1")), OptQ(Q("1")), grid);
    auto r2 = koebe_check(g, 1, 2, 1, OptQ((Q("-1") - b0) / b1), OptQ((Q("1") - b0) / b1), grid2);
    REQUIRE(r1.points.size() == r2.points.size());
    for (std::size_t i = 0; i < r1.points.size(); ++i) {
      Rational q1 = abs(r1.points[i].dm) / *r1.points[i].bound;
      Rational q2 = abs(r2.points[i].dm) / *r2.points[i].bound;
      CHECK(q1 == q2);
    }
  }
}
