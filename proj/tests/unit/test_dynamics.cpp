#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "schwarz/dynamics.hpp"
#include "schwarz/pickclass.hpp"
#include "schwarz/random.hpp"
#include "support.hpp"

using namespace schwarz;
using test::Q;
using test::qv;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInternal;
}

ScanOptions small_scan(int d, const char* eps, int samples, int max_steps) {
  ScanOptions opt;
  opt.d = d;
  opt.eps = {Q(eps)};
  opt.sample_count = samples;
  opt.max_steps = max_steps;
  opt.threads = 1;
  return opt;
}

}  // namespace

TEST_CASE("iterate") {
  IntervalMap f = logistic();
  CHECK(iterate(f, Q("1/2"), 4) == qv({"1/2", "1", "0", "0", "0"}));
  CHECK(iterate(f, Q("3/4"), 5) == std::vector<Rational>(6, Q("3/4")));
  CHECK(iterate(f, Q("2/7"), 0) == qv({"2/7"}));
  auto fl = iterate(f, 0.25, 2);
  CHECK(fl[2] == doctest::Approx(0.75));

  // a map that leaves [0,1] is refused at load
  CHECK(code_of([] { IntervalMap::polynomial(Polynomial<Rational>(qv({"0", "2"}))).validate(); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { logistic(Q("5")); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("first entry") {
  IntervalMap f = logistic();
  Rational lo = Q("7/16"), hi = Q("9/16");
  CHECK(first_entry(f, Q("1/2"), lo, hi, 10) == 0);
  CHECK(first_entry(f, Q("1/3"), lo, hi, 25) == 5);  // oracle
  CHECK_FALSE(first_entry(f, Q("1/3"), lo, hi, 4).has_value());
  CHECK_FALSE(first_entry(f, Q("0"), lo, hi, 50).has_value());
  CHECK(first_entry(f, 1.0 / 3, 7.0 / 16, 9.0 / 16, 25) == 5);
}

TEST_CASE("forward jet") {
  IntervalMap f = logistic();
  Jet<Rational> id = forward_jet(f, Q("2/5"), 0, 4);
  CHECK(id == Jet<Rational>::identity(Q("2/5"), 4));
  CHECK(forward_jet(f, Q("1/4"), 1, 3).coeffs() == qv({"3/4", "2", "-4", "0"}));

  // chain rule
  Sampler rng(7);
  for (int t = 0; t < 20; ++t) {
    Rational x = rng.positive_rational(1, 40);
    if (x >= 1) continue;
    auto orb = iterate(f, x, 6);
    Rational prod(1);
    for (int j = 0; j < 6; ++j) prod *= f.poly().derivative()(orb[j]);
    CHECK(forward_jet(f, x, 6, 2)[1] == prod);
  }

  // against the symbolic composition, expanded at x
  Polynomial<Rational> comp = Polynomial<Rational>::x();
  for (int s = 1; s <= 6; ++s) {
    comp = f.poly().compose(comp);
    for (const char* xs : {"1/3", "2/7", "5/9"}) {
      Rational x = Q(xs);
      Polynomial<Rational> shifted = comp.shifted(x);
      for (int n : {1, 5, 9}) {
        Jet<Rational> j = forward_jet(f, x, s, n);
        for (int k = 0; k <= n; ++k) CHECK(j[k] == shifted[k]);
      }
    }
  }

  Jet<double> jd = forward_jet(f, 1.0 / 3, 4, 3);
  Jet<Rational> jq = forward_jet(f, Q("1/3"), 4, 3);
  for (int k = 0; k <= 3; ++k) CHECK(test::rel_close(jd[k], to_double(jq[k]), 1e-10));
  CHECK(jq[1] == Q("182266112/14348907"));  // oracle
}

TEST_CASE("inverse branches") {
  IntervalMap f = logistic();
  auto s0 = inverse_branch_schwarzians(f, Q("1/4"), 0, 1);
  CHECK(s0.base == Q("3/4"));
  CHECK(s0.values[1] == 6);
  CHECK(code_of([&] { inverse_branch_schwarzians(f, Q("1/2"), 0, 1); }) == ErrorCode::kCriticalOrbit);
  CHECK(code_of([&] { inverse_branch_schwarzians(f, 0.5, 3, 2); }) == ErrorCode::kCriticalOrbit);
  // 1/4 lands on the repelling fixed point 3/4, where Df = -2
  CHECK(inverse_branch_schwarzians(f, Q("1/4"), 3, 1).values[1] > 0);

  auto s3 = inverse_branch_schwarzians(f, Q("1/3"), 3, 2);
  CHECK(s3.base == Q("7250432/43046721"));
  CHECK(s3.values[1] == Q("130616932528526486897443447395/8420032966991203685624741888"));
  CHECK(s3.values[2] ==
        Q("149672455537323993167362565230372912734492951760606090000911387759158835/"
          "166581074237713948255469554214054400839419355343894007500834189869056"));
  auto s3f = inverse_branch_schwarzians(f, 1.0 / 3, 3, 2);
  CHECK(test::rel_close(s3f.values[1], 15.5126390883005, 1e-8));
  CHECK(test::rel_close(s3f.values[2], 898.496160036397, 1e-6));

  // D(f^-(s+1)) * Df^(s+1) = 1
  for (const char* xs : {"1/3", "2/7", "3/11", "5/13"}) {
    for (int s = 0; s <= 4; ++s) {
      Jet<Rational> j = forward_jet(f, Q(xs), s + 1, 3);
      if (j[1] == 0) continue;
      CHECK(reverse(j)[1] * j[1] == 1);
    }
  }
}

TEST_CASE("q family") {
  IntervalMap q = q_family(Q("2"), Q("1"));
  CHECK(q.exact());
  CHECK(q.poly() == Polynomial<Rational>(qv({"0", "2/3", "1/3"})));
  CHECK(q_family(Q("2"), Q("0")).poly() == Polynomial<Rational>(qv({"0", "0", "1"})));
  for (const char* a : {"0", "1/2", "3"}) {
    for (const char* alpha : {"2", "3", "5/2", "7/3"}) {
      IntervalMap m = q_family(Q(alpha), Q(a));
      CHECK(std::fabs(m(0.0)) < 1e-15);
      CHECK(std::fabs(m(1.0) - 1) < 1e-15);
      if (m.exact()) {
        CHECK(m(Q("0")) == 0);
        CHECK(m(Q("1")) == 1);
      }
    }
  }
  CHECK_FALSE(q_family(Q("5/2"), Q("1")).exact());
  CHECK(code_of([] { q_family(Q("1"), Q("0")); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { q_family(Q("2"), Q("-1")); }) == ErrorCode::kInvalidArgument);

  // the non-integer power agrees with its own definition
  IntervalMap r = q_family(Q("5/2"), Q("1/2"));
  double x = 0.3, norm = std::pow(1.5, 2.5) - std::pow(0.5, 2.5);
  CHECK(test::rel_close(r(x), (std::pow(x + 0.5, 2.5) - std::pow(0.5, 2.5)) / norm, 1e-13));
  CHECK(test::rel_close(r.jet(x, 2)[1], 2.5 * std::pow(x + 0.5, 1.5) / norm, 1e-12));

  // inverse branches are Pick restrictions
  for (double a : {0.0, 0.5, 1.0}) {
    IntervalMap m = q_family(Q("2"), Rational(a));
    JetSource<double> inv = [&m, a](const double& y, int n) {
      double x = -a + std::sqrt(a * a + (1 + 2 * a) * y);
      Jet<double> j = m.jet(x, n);
      std::vector<double> c = j.coeffs();
      c[0] = y;
      return reverse(Jet<double>(x, c));
    };
    std::vector<double> ys;
    for (int i = 0; i <= 30; ++i) ys.push_back(0.05 + 0.9 * i / 30);
    auto rep = pd_membership(inv, 2, ys);
    CHECK(rep.pass);
  }
}

TEST_CASE("critical points") {
  IntervalMap f = logistic();
  REQUIRE(f.critical_points().size() == 1);
  CHECK(f.critical_points()[0].exact == Q("1/2"));
  CHECK(f.critical_points()[0].order == 1);
  // (2x-1)^3 rescaled to [0,1] has a degenerate critical point
  IntervalMap cube = IntervalMap::polynomial(Polynomial<Rational>(qv({"0", "3", "-6", "4"})));
  REQUIRE(cube.critical_points().size() == 1);
  CHECK(cube.critical_points()[0].order == 2);
  CHECK(q_family(Q("5/2"), Q("1")).critical_points().empty());
}

TEST_CASE("stern brocot") {
  CHECK(stern_brocot(7) == qv({"1/2", "1/3", "2/3", "1/4", "2/5", "3/5", "3/4"}));
  auto v = stern_brocot(200);
  CHECK(v.size() == 200);
  std::vector<Rational> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  for (auto& r : v) CHECK((r > 0 && r < 1));
}

TEST_CASE("scan: d = 1 exact regime") {
  ScanOptions opt = small_scan(1, "1/8", 200, 25);
  ScanReport rep = return_scan(logistic(), Q("1/2"), opt);
  REQUIRE(rep.summaries.size() == 1);
  const EpsSummary& s = rep.summaries[0];
  CHECK(s.samples == 200);
  CHECK(s.events > 150);
  CHECK(s.events + s.not_entered + s.critical_discarded == 200);
  CHECK(s.all_positive == s.events);
  CHECK(s.identity_checked == s.events);
  CHECK(s.identity_held == s.events);
  CHECK(s.witnesses.empty());
  CHECK(rep.all_positive());
  CHECK(rep.identity_holds());
  for (const ReturnEvent& e : rep.events) {
    CHECK(e.df_sign != 0);
    CHECK(e.signs == std::vector<int>{1});
  }
}

TEST_CASE("scan: interval signs agree with exact signs") {
  ScanOptions exact = small_scan(3, "1/8", 60, 14);
  ScanOptions cert = exact;
  cert.exact_bits = 64;
  ScanReport a = return_scan(logistic(), Q("1/2"), exact);
  ScanReport b = return_scan(logistic(), Q("1/2"), cert);
  REQUIRE(a.events.size() == b.events.size());
  CHECK(b.summaries[0].interval_events > 10);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].x == b.events[i].x);
    CHECK(a.events[i].s == b.events[i].s);
    CHECK(a.events[i].signs == b.events[i].signs);
    for (int k = 0; k < 3; ++k)
      CHECK(test::rel_close(a.events[i].approx[k], b.events[i].approx[k], 1e-6));
  }
  // an exact event's value matches the direct pipeline
  for (const ReturnEvent& e : a.events) {
    if (e.x != Q("1/3")) continue;
    CHECK(e.s == 2);
    auto direct = inverse_branch_schwarzians(logistic(), e.x, e.s, 3);
    for (int k = 1; k <= 3; ++k) {
      REQUIRE(e.values[k - 1].has_value());
      CHECK(*e.values[k - 1] == direct.values[k]);
    }
  }
}

TEST_CASE("scan: general visits and ladder") {
  ScanOptions opt = small_scan(2, "1/8", 40, 16);
  opt.eps = {Q("1/4"), Q("1/8")};
  opt.general = true;
  ScanReport rep = return_scan(logistic(), Q("1/2"), opt);
  REQUIRE(rep.summaries.size() == 2);
  CHECK(rep.summaries[0].composed_events > 0);
  for (const ComposedEvent& c : rep.composed) {
    CHECK(c.consistent);
    CHECK(c.s > c.first);
  }
  // deterministic and thread-count independent
  opt.threads = 3;
  ScanReport again = return_scan(logistic(), Q("1/2"), opt);
  REQUIRE(again.events.size() == rep.events.size());
  for (std::size_t i = 0; i < rep.events.size(); ++i) {
    CHECK(again.events[i].x == rep.events[i].x);
    CHECK(again.events[i].eps == rep.events[i].eps);
    CHECK(again.events[i].signs == rep.events[i].signs);
  }
}

TEST_CASE("scan: preconditions") {
  IntervalMap id = IntervalMap::polynomial(Polynomial<Rational>::x(), "identity");
  CHECK(code_of([&] { return_scan(id, Q("1/2")); }) == ErrorCode::kHypothesisViolation);
  CHECK(code_of([] { return_scan(logistic(), Q("1/3")); }) == ErrorCode::kHypothesisViolation);
  ScanOptions wide = small_scan(1, "1/2", 5, 5);
  CHECK(code_of([&] { return_scan(logistic(), Q("1/2"), wide); }) == ErrorCode::kInvalidArgument);
  IntervalMap frac = q_family(Q("5/2"), Q("1"));
  CHECK(code_of([&] { return_scan(frac, Q("1/2")); }) == ErrorCode::kInvalidArgument);
}
