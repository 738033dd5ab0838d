#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "schwarz/random.hpp"
#include "schwarz/schwarzian.hpp"
#include "support.hpp"

using namespace schwarz;
using test::Q;
using test::qv;

namespace {

// Random continued fraction with mu_k > 0 (Pick) about `base`.
ContinuedFractionRep<Rational> pick_cf(Sampler& s, int d, const Rational& base) {
  ContinuedFractionRep<Rational> rep{base, {}, {}};
  for (int k = 0; k <= d; ++k) rep.A.push_back(s.rational(3, 4));
  for (int k = 0; k < d; ++k) rep.mu.push_back(s.positive_rational(3, 4));
  return rep;
}

}  // namespace

TEST_CASE("exp fixtures on all routes") {
  auto e = test::exp_jet(9);
  CHECK(schwarzian_det(e, 1) == Q("-1/2"));
  CHECK(schwarzian_det(e, 2) == Q("1/6"));
  CHECK(schwarzian_det(e, 3) == Q("-1/20"));
  CHECK(schwarzian_defect(e, 1) == Q("-1/2"));
  CHECK(schwarzian_defect(e, 2) == Q("1/6"));
  auto rec = schwarzian_recursive(e, 2);
  CHECK(rec.values == qv({"1", "-1/2", "1/6"}));
  CHECK(rec.all_defined());
  CHECK(schwarzian_sequence(e, 3).values == qv({"1", "-1/2", "1/6", "-1/20"}));
  CHECK(schwarzian_det(jet_from_rational<double>(e), 2) == doctest::Approx(1.0 / 6));
}

TEST_CASE("classical special cases") {
  CHECK(schwarzian_det(test::mobius_jet(3), 1) == 0);
  // z^2 at 1
  Jet<Rational> sq(Q("1"), qv({"1", "2", "1", "0"}));
  CHECK(schwarzian_det(sq, 1) == Q("-3/2"));
  // logistic at 1/4 and its inverse branch at 3/4
  Jet<Rational> lg(Q("1/4"), qv({"3/4", "2", "-4", "0"}));
  CHECK(schwarzian_det(lg, 1) == Q("-24"));
  CHECK(schwarzian_sequence(lg, 1).values[1] == Q("-24"));
  Jet<Rational> lginv(Q("3/4"), qv({"1/4", "1/2", "1/2", "1"}));
  CHECK(schwarzian_sequence(lginv, 1).values[1] == 6);
  CHECK(schwarzian_recursive(reverse(lg), 1).values[1] == 6);
  // z + z^3: S_1 = -6(6z^2 - 1)/(3z^2 + 1)^2
  for (const char* xs : {"0", "1/2", "-1/3", "2"}) {
    Rational x = Q(xs);
    Jet<Rational> f(x, {x + x * x * x, 1 + 3 * x * x, 3 * x, Rational(1)});
    Rational den = 3 * x * x + 1;
    CHECK(schwarzian_det(f, 1) == -6 * (6 * x * x - 1) / (den * den));
  }
}

TEST_CASE("errors") {
  Jet<Rational> crit(Q("0"), qv({"1", "0", "1", "1"}));
  try {
    (void)schwarzian_det(crit, 1);
    FAIL("expected CriticalPoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCriticalPoint);
  }
  try {
    (void)schwarzian_det(test::mobius_jet(5), 2);
    FAIL("expected NotNormal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotNormal);
  }
  CHECK_THROWS_AS(schwarzian_det(test::exp_jet(4), 2), Error);
}

TEST_CASE("lower-degree maps have vanishing S_d") {
  for (int d = 1; d <= 4; ++d) CHECK(schwarzian(test::mobius_jet(2 * d + 1), d) == 0);
  Sampler s(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto r = s.rational_map(2, 4, 3);
    for (int k = 0; k < 3; ++k) {
      Rational x = s.rational(2, 4);
      try {
        auto j = r.recentered(x).jet(7);
        if (j[1] == 0) continue;
        CHECK(schwarzian(j, 2) == 0);
        CHECK(schwarzian(j, 3) == 0);
      } catch (const Error&) {
      }
    }
  }
}

TEST_CASE("Pick step") {
  auto e = test::exp_jet(6);
  auto t = pick_step(e);
  CHECK(t.order() == 4);
  CHECK(t.coeffs() == qv({"1/2", "-1/12", "0", "1/720", "0"}));
  CHECK(pick_step(Jet<Rational>(Q("0"), qv({"3", "2", "0", "0"}))).coeffs() == qv({"0", "0"}));
  CHECK(pick_step(test::mobius_jet(5)).coeffs() == qv({"1", "0", "0", "0"}));

  auto inv = pick_inverse_step(Jet<Rational>::constant(Q("0"), Q("1/2"), 2), Q("1"), Q("1"));
  CHECK(inv.coeffs() == qv({"1", "1", "1/2", "1/4", "1/8"}));
  CHECK(pick_inverse_step(Jet<Rational>::constant(Q("0"), Q("0"), 1), Q("0"), Q("1")) ==
        Jet<Rational>::identity(Q("0"), 3));
  CHECK_THROWS_AS(pick_inverse_step(t, Q("1"), Q("0")), Error);

  Sampler s(32);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = s.jet(static_cast<int>(s.integer(2, 9)), 5, 3, Q("-1/2"));
    if (f[1] == 0) continue;
    CHECK(pick_inverse_step(pick_step(f), f[0], f[1]) == f);
  }
}

TEST_CASE("recursion flags") {
  auto seq = schwarzian_recursive(test::mobius_jet(7), 3);
  CHECK(seq.values[1] == 0);
  CHECK(seq.defined(1));
  CHECK_FALSE(seq.defined(2));
  CHECK_FALSE(seq.defined(3));
}

TEST_CASE("route equivalence on random jets") {
  Sampler s(33);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto f = s.jet(11, 5, 3, Q("1/5"));
    if (f[1] == 0) continue;
    auto rec = schwarzian_recursive(f, 4);
    auto seq = schwarzian_sequence(f, 4);
    for (int d = 1; d <= 4; ++d) {
      if (!is_normal(f, d)) break;
      Rational a = schwarzian_det(f, d);
      CHECK(a == schwarzian_defect(f, d));
      CHECK(a == rec.values[d]);
      CHECK(a == seq.values[d]);
      ++compared;
    }
  }
  CHECK(compared > 100);
}

TEST_CASE("continued fractions") {
  auto e = test::exp_jet(5);
  auto rep = continued_fraction(e, 2);
  REQUIRE(rep.complete());
  CHECK(rep.mu == qv({"1", "-1/12"}));
  CHECK(rep.A[0] == 1);
  CHECK(rep.A[1] == Q("1/2"));
  CHECK(cf_to_jet(rep, 4) == e.truncated(4));

  auto aff = continued_fraction(Jet<Rational>(Q("0"), qv({"3", "2", "0", "0", "0"})), 2);
  CHECK_FALSE(aff.complete());
  CHECK(aff.failed_level == 1);
  CHECK(aff.A == qv({"3", "0"}));
  CHECK(aff.mu == qv({"2"}));

  Sampler s(34);
  for (int trial = 0; trial < 40; ++trial) {
    int d = static_cast<int>(s.integer(1, 4));
    auto cf = pick_cf(s, d, Q("1/3"));
    auto back = continued_fraction(cf_to_jet(cf, 2 * d), d);
    CHECK(back.A == cf.A);
    CHECK(back.mu == cf.mu);
  }
}

TEST_CASE("mu relation") {
  Sampler s(35);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = s.jet(9, 5, 3);
    if (f[1] == 0) continue;
    auto rep = continued_fraction(f, 4);
    auto seq = schwarzian_recursive(f, 4);
    for (int k = 1; k < rep.d() && seq.defined(k); ++k) {
      if (seq.values[k - 1] == 0) break;
      CHECK(rep.mu[k] == seq.values[k] / (2 * k * (2 * k + 1) * seq.values[k - 1]));
    }
  }
}

TEST_CASE("composition formula") {
  Jet<Rational> m1(Q("0"), qv({"0", "1", "1", "1", "1", "1", "1", "1"}));
  Jet<Rational> m2 = RationalMap<Rational>::mobius(Q("2"), Q("1"), Q("1"), Q("3"), Q("0")).jet(7);
  auto rec = composition_check(m1, m2, 1);
  CHECK(rec.lhs == 0);
  CHECK(rec.rhs_sum == 0);
  CHECK(rec.extra_term == 0);

  // z + z^2 + z^3 has det M_2 = 0 at 0 and no second approximant there, so
  // S_2 does not exist; about 1/2 the three-term identity is checked.
  Polynomial<Rational> cubic_poly(qv({"0", "1", "1", "1"}));
  auto cubic_at = [&](const Rational& x) {
    RationalMap<Rational> m(Rational(0), cubic_poly, Polynomial<Rational>::constant(Rational(1)));
    return m.recentered(x).jet(7);
  };
  try {
    (void)composition_check(cubic_at(Q("0")), cubic_at(Q("0")), 2);
    FAIL("expected NotNormal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotNormal);
  }
  auto f_half = cubic_at(Q("1/2"));
  auto c2 = composition_check(f_half, cubic_at(f_half[0]), 2);
  CHECK(c2.holds);
  CHECK(c2.lhs == c2.rhs_sum + c2.extra_term);
  CHECK(c2.extra_term != 0);

  Sampler s(36);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = s.jet(7, 4, 3, Q("1/2"));
    std::vector<Rational> gc;
    for (int k = 0; k <= 7; ++k) gc.push_back(s.rational(4, 3));
    Jet<Rational> g(f[0], gc);
    if (f[1] == 0 || g[1] == 0) continue;
    auto r1 = composition_check(f, g, 1);
    CHECK(r1.holds);
    CHECK(r1.extra_term == 0);
    CHECK(r1.lhs == schwarzian_det(g, 1) * f[1] * f[1] + schwarzian_det(f, 1));
  }
}

TEST_CASE("composition inequality") {
  Sampler s(37);
  for (int trial = 0; trial < 20; ++trial) {
    auto cf = pick_cf(s, 2, Q("0"));
    auto f = cf_to_jet(cf, 7);
    auto cg = pick_cf(s, 2, f[0]);
    auto g = cf_to_jet(cg, 7);
    CHECK(composition_inequality_check(f, g, 2));
  }
  Jet<Rational> m(Q("0"), qv({"0", "1", "1", "1", "1", "1", "1", "1"}));
  CHECK(composition_inequality_check(m, m, 2));
  // g = z^2 near 1 has S_1 < 0
  Jet<Rational> f(Q("0"), qv({"1", "1", "1", "1", "1", "1", "1", "1"}));
  Jet<Rational> g(Q("1"), qv({"1", "2", "1", "0", "0", "0", "0", "0"}));
  try {
    (void)composition_inequality_check(f, g, 2);
    FAIL("expected HypothesisViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kHypothesisViolation);
  }
}

TEST_CASE("Mobius pre- and post-composition") {
  auto e = test::exp_jet(7);
  auto id = RationalMap<Rational>::mobius(Q("1"), Q("0"), Q("0"), Q("1"), Q("0"));
  CHECK(mobius_precomposition_check(e, id, 2).holds);
  auto neg = RationalMap<Rational>::mobius(Q("-1"), Q("0"), Q("0"), Q("1"), Q("0"));
  auto r = mobius_precomposition_check(e, neg, 3);
  CHECK(r.holds);
  CHECK(r.pre_lhs == r.post_rhs);
  // exp o (2z + 1) at -1/2 against exp at 0
  auto aff = RationalMap<Rational>::mobius(Q("2"), Q("1"), Q("0"), Q("1"), Q("-1/2"));
  auto a = mobius_precomposition_check(e, aff, 1);
  CHECK(a.holds);
  CHECK(a.pre_lhs == Q("-2"));
  CHECK(a.pre_rhs == Q("-1/2") * 4);
  auto gen = RationalMap<Rational>::mobius(Q("1"), Q("0"), Q("1"), Q("2"), Q("0"));
  CHECK(mobius_precomposition_check(e, gen, 2).holds);
}
