#include "schwarz/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "schwarz/builtins.hpp"
#include "schwarz/dynamics.hpp"
#include "schwarz/koebe.hpp"
#include "schwarz/pade.hpp"
#include "schwarz/random.hpp"

namespace schwarz {

namespace {

int scaled(int full, const SuiteOptions& opt) {
  return std::max(1, static_cast<int>(std::lround(full * opt.scale)));
}

Rational Q(const char* s) { return parse_rational(s); }

std::vector<Rational> qv(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (const char* x : xs) v.push_back(parse_rational(x));
  return v;
}

// Collects failures; the first few are kept for the detail line.
struct Tally {
  long checks = 0, failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0 && checks > 0; }
  std::string summary() const {
    std::ostringstream os;
    os << checks << " checks";
    if (failures) os << ", " << failures << " failed (first: " << first << ")";
    return os.str();
  }
};

ContinuedFractionRep<Rational> pick_cf(Sampler& s, int depth, const Rational& base) {
  ContinuedFractionRep<Rational> rep{base, {}, {}};
  for (int k = 0; k <= depth; ++k) rep.A.push_back(s.rational(3, 4));
  for (int k = 0; k < depth; ++k) rep.mu.push_back(s.positive_rational(3, 4));
  return rep;
}

// 1
CheckResult route_equivalence(const SuiteOptions& opt) {
  Sampler s(opt.seed + 1);
  Tally t;
  int want = scaled(200, opt), got = 0, drawn = 0;
  while (got < want && drawn < 100 * want) {
    ++drawn;
    Jet<Rational> f = s.jet(11, 5, 4);
    if (f[1] == 0) continue;
    bool normal = true;
    for (int d = 1; d <= 4 && normal; ++d) normal = is_normal(f, d);
    if (!normal) continue;
    ++got;
    auto rec = schwarzian_recursive(f, 4);
    for (int d = 1; d <= 4; ++d) {
      Rational a = schwarzian_det(f, d);
      t.expect(a == schwarzian_defect(f, d), "det != defect at d=" + std::to_string(d));
      t.expect(rec.defined(d) && a == rec.values[d], "det != recursive at d=" + std::to_string(d));
    }
  }
  t.expect(got == want, "too few normal jets");
  return {0, "", t.ok(), std::to_string(got) + " normal jets, " + t.summary()};
}

// 2
CheckResult pade_fixtures(const SuiteOptions&) {
  Tally t;
  Jet<Rational> e = exp_jet(Rational(0), 9);
  auto p1 = pade_approximant(e, 1), p2 = pade_approximant(e, 2);
  t.expect(p1.p().coeffs() == qv({"1", "1/2"}) && p1.q().coeffs() == qv({"1", "-1/2"}), "d=1 approximant");
  t.expect(p2.p().coeffs() == qv({"1", "1/2", "1/12"}) && p2.q().coeffs() == qv({"1", "-1/2", "1/12"}),
           "d=2 approximant");
  t.expect(schwarzian(e, 1) == Q("-1/2"), "S_1(exp)(0)");
  t.expect(schwarzian(e, 2) == Q("1/6"), "S_2(exp)(0)");
  t.expect(schwarzian_det(e, 2) == Q("1/6") && schwarzian_defect(e, 2) == Q("1/6"), "S_2 routes");
  return {0, "", t.ok(), "[exp]_1 = (1+z/2)/(1-z/2), [exp]_2 = (1+z/2+z^2/12)/(1-z/2+z^2/12), S_1 = -1/2, S_2 = 1/6; " +
                             t.summary()};
}

// 3
CheckResult low_degree_vanishing(const SuiteOptions& opt) {
  Sampler s(opt.seed + 3);
  Tally t;
  int maps = scaled(50, opt), points = 0;
  for (int i = 0; i < maps; ++i) {
    RationalMap<Rational> r = s.rational_map(static_cast<int>(s.integer(1, 3)), 4, 3);
    if (r.degree() == 0) {  // constant: no valid points
      --i;
      continue;
    }
    int valid = 0;
    for (int tries = 0; valid < 10 && tries < 200; ++tries) {
      Rational x = s.rational(3, 5);
      Jet<Rational> j;
      try {
        j = r.recentered(x).jet(7);
      } catch (const Error&) {
        continue;  // pole
      }
      if (j[1] == 0) continue;
      ++valid;
      ++points;
      t.expect(schwarzian(j, 3) == 0, "S_3 != 0 at x = " + x.get_str());
    }
    t.expect(valid == 10, "too few valid points");
  }
  return {0, "", t.ok(), std::to_string(maps) + " maps, " + std::to_string(points) + " points, " + t.summary()};
}

// 4
CheckResult composition_formula(const SuiteOptions& opt) {
  Sampler s(opt.seed + 4);
  Tally t;
  int want = scaled(100, opt);
  long extra_zero = 0, d1 = 0;
  for (int d = 1; d <= 3; ++d) {
    int got = 0;
    for (int drawn = 0; got < want && drawn < 100 * want; ++drawn) {
      Jet<Rational> f = s.jet(7, 4, 3, Q("1/2"));
      std::vector<Rational> gc;
      for (int k = 0; k <= 7; ++k) gc.push_back(s.rational(4, 3));
      Jet<Rational> g(f[0], gc);
      if (f[1] == 0 || g[1] == 0) continue;
      bool normal = true;
      for (int k = 1; k <= d && normal; ++k) normal = is_normal(f, k) && is_normal(g, k);
      if (!normal) continue;
      ++got;
      auto rec = composition_check(f, g, d);
      t.expect(rec.holds && rec.lhs == rec.rhs_sum + rec.extra_term, "identity at d=" + std::to_string(d));
      if (d == 1) {
        ++d1;
        if (rec.extra_term == 0) ++extra_zero;
        t.expect(rec.extra_term == 0, "nonzero extra term at d=1");
      }
    }
    t.expect(got == want, "too few normal pairs at d=" + std::to_string(d));
  }
  return {0, "", t.ok(),
          std::to_string(want) + " pairs per d; d=1 extra term zero in " + std::to_string(extra_zero) + "/" +
              std::to_string(d1) + "; " + t.summary()};
}

// 5
CheckResult composition_inequality(const SuiteOptions& opt) {
  Sampler s(opt.seed + 5);
  Tally t;
  int want = scaled(100, opt);
  for (int d = 2; d <= 3; ++d) {
    for (int i = 0; i < want; ++i) {
      auto cf = pick_cf(s, static_cast<int>(s.integer(1, 3)), s.rational(2, 3));
      Jet<Rational> f = cf_to_jet(cf, 2 * d + 1);
      auto cg = pick_cf(s, static_cast<int>(s.integer(1, 3)), f[0]);
      Jet<Rational> g = cf_to_jet(cg, 2 * d + 1);
      t.expect(composition_inequality_check(f, g, d), "inequality at d=" + std::to_string(d));
    }
  }
  return {0, "", t.ok(), std::to_string(want) + " pairs for d = 2, 3; " + t.summary()};
}

// 6
CheckResult pick_characterization(const SuiteOptions& opt) {
  Sampler s(opt.seed + 6);
  Tally t;
  int want = scaled(100, opt);
  long double min_im = 1;
  for (int i = 0; i < want; ++i) {
    int depth = static_cast<int>(s.integer(1, 4));
    Rational x = s.rational(2, 3);
    auto pos = cf_to_rational_map(s.continued_fraction(depth, x, true));
    auto a = certify_pick(pos, x, CertMethod::kSchwarzianSigns);
    auto b = certify_pick(pos, x, CertMethod::kDegreeReduction);
    t.expect(a.verdict == Verdict::kPick && a.strict_pass, "Schwarzian-sign certificate");
    t.expect(b.verdict == Verdict::kPick && b.strict_pass, "degree-reduction certificate");
    auto hp = halfplane_sample_check(pos);
    min_im = std::min(min_im, hp.min_im);
    t.expect(hp.pass && hp.min_im >= -1e-12L && hp.points == 1600, "half-plane sampling");

    auto neg = cf_to_rational_map(s.continued_fraction(depth, x, false));
    t.expect(!certify_pick(neg, x, CertMethod::kSchwarzianSigns).strict_pass, "negative mu certified (signs)");
    t.expect(!certify_pick(neg, x, CertMethod::kDegreeReduction).strict_pass, "negative mu certified (reduction)");
  }
  std::ostringstream os;
  os << want << " Pick and " << want << " non-Pick maps, min Im on the 40x40 grid " << static_cast<double>(min_im)
     << "; " << t.summary();
  return {0, "", t.ok(), os.str()};
}

// 7
CheckResult crossratio(const SuiteOptions& opt) {
  Sampler s(opt.seed + 7);
  Tally t;
  int want = scaled(100, opt);
  double min_eig = 1e300, mob_err = 0;
  int mobius = 0;
  for (int i = 0; i < want; ++i) {
    auto r = cf_to_rational_map(pick_cf(s, static_cast<int>(s.integer(1, 3)), Q("0")));
    int n = static_cast<int>(s.integer(1, 4));
    // the points share the pole-free interval around the base
    double lo = -4, hi = 4;
    for (double p : real_poles(map_from_rational<double>(r))) {
      if (p < 0) lo = std::max(lo, p);
      if (p > 0) hi = std::min(hi, p);
    }
    std::vector<Rational> pts;
    for (int tries = 0; static_cast<int>(pts.size()) < n && tries < 500; ++tries) {
      Rational x(std::ldexp(std::nearbyint(std::ldexp(lo + (hi - lo) * s.integer(1, 1023) / 1024.0, 20)), -20));
      if (!(x > lo && x < hi) || std::find(pts.begin(), pts.end(), x) != pts.end()) continue;
      try {
        if (r.recentered(x).jet(1)[1] == 0) continue;
      } catch (const Error&) {
        continue;
      }
      pts.push_back(x);
    }
    auto m = crossratio_matrix(r, pts);
    min_eig = std::min(min_eig, m.min_eigenvalue());
    t.expect(m.min_eigenvalue() >= -1e-9, "negative eigenvalue for a Pick map");

    // Mobius: rank one, all entries 1
    Rational a = s.rational(3, 3), b = s.rational(3, 3), c = s.rational(3, 3), dd = s.rational(3, 3);
    if (a * dd - b * c < 0) a = -a, b = -b;
    if (a * dd - b * c == 0 || dd == 0) continue;
    ++mobius;
    auto mob = RationalMap<Rational>::mobius(a, b, c, dd, Rational(0));
    std::vector<Rational> mp;
    for (int tries = 0; static_cast<int>(mp.size()) < n && tries < 500; ++tries) {
      Rational x = s.rational(3, 8);
      if (c * x + dd == 0 || std::find(mp.begin(), mp.end(), x) != mp.end()) continue;
      mp.push_back(x);
    }
    auto mm = crossratio_matrix(mob, mp);
    for (int k = 0; k < n; ++k) {
      double want_ev = k == n - 1 ? n : 0;
      mob_err = std::max(mob_err, std::fabs(mm.eigenvalues[k] - want_ev));
    }
  }
  t.expect(mobius > want / 2, "too few Mobius tuples");
  t.expect(mob_err <= 1e-10, "Mobius spectrum off by " + format_double(mob_err));
  std::ostringstream os;
  os << want << " Pick tuples, min eigenvalue " << min_eig << "; " << mobius << " Mobius tuples, spectrum error "
     << mob_err << "; " << t.summary();
  return {0, "", t.ok(), os.str()};
}

// 8
CheckResult matrix_monotone(const SuiteOptions& opt) {
  Tally t;
  int trials = scaled(1000, opt);
  auto rep = matrix_monotone_test([](double x) { return std::sqrt(x); }, 0, 4, 3, trials, opt.seed + 8);
  t.expect(rep.pass && rep.min_eigenvalue >= -1e-9, "sqrt not monotone of order 3");
  double me = matrix_pair_check([](double x) { return x * x; }, {{1, 1}, {1, 1}}, {{2, 1}, {1, 1}});
  // (3 - sqrt 13)/2 = -0.30277563773199464..., from the eigenvalue oracle
  t.expect(me <= -0.30277563773199464 + 1e-9, "t^2 fixture pair");
  std::ostringstream os;
  os << "sqrt on (0,4), n = 3, " << trials << " trials: min eigenvalue " << rep.min_eigenvalue
     << "; t^2 fixture pair: " << me << "; " << t.summary();
  return {0, "", t.ok(), os.str()};
}

// 9
CheckResult koebe(const SuiteOptions& opt) {
  Sampler s(opt.seed + 9);
  Tally t;
  double worst = 0;
  int maps = 0;
  auto source = [](const RationalMap<Rational>& r) -> JetSource<Rational> {
    return [r](const Rational& x, int n) { return r.recentered(x).jet(n); };
  };
  auto run_all = [&](const JetSource<Rational>& f, const Rational& lo, const Rational& hi) {
    auto grid = chebyshev_grid(lo, hi);
    for (int d = 1; d <= 3; ++d) {
      if (!pd_membership(f, d, grid).pass) continue;
      for (auto [m, n] : koebe_pairs(d)) {
        auto rep = koebe_check(f, d, m, n, std::optional<Rational>(lo), std::optional<Rational>(hi), grid);
        worst = std::max(worst, rep.max_ratio);
        t.expect(rep.pass && rep.max_ratio <= 1 + 1e-9,
                 "ratio " + format_double(rep.max_ratio) + " at d,m,n = " + std::to_string(d) + "," +
                     std::to_string(m) + "," + std::to_string(n));
      }
    }
    ++maps;
  };

  auto mob = RationalMap<Rational>::mobius(Q("1"), Q("0"), Q("-1"), Q("1"), Q("0"));
  run_all(source(mob), Q("-1"), Q("1"));
  int want = scaled(20, opt);
  for (int i = 0; i < want; ++i) {
    auto r = cf_to_rational_map(pick_cf(s, static_cast<int>(s.integer(1, 3)), Q("0")));
    double lo = -4, hi = 4;
    for (double p : real_poles(map_from_rational<double>(r))) {
      if (p < 0) lo = std::max(lo, p);
      if (p > 0) hi = std::min(hi, p);
    }
    Rational qlo(std::ldexp(std::ceil(std::ldexp(lo, 20)), -20)), qhi(std::ldexp(std::floor(std::ldexp(hi, 20)), -20));
    run_all(source(r), qlo, qhi);
  }

  // sharpness and the statement-constant regression on x/(1-x)
  auto wit = koebe_check(source(mob), 1, 2, 1, std::optional<Rational>(Q("-1")), std::optional<Rational>(Q("1")),
                         qv({"0", "1/4", "1/2"}));
  for (auto& p : wit.points) t.expect(std::fabs(to_double(p.ratio) - 1) <= 1e-12, "witness ratio != 1");
  auto stmt = koebe_check(source(mob), 1, 2, 1, std::optional<Rational>(Q("-1")), std::optional<Rational>(Q("1")),
                          qv({"0", "1/4", "1/2"}), KoebeConstant::kStatement);
  t.expect(!stmt.pass, "statement constant unexpectedly holds on the witness");
  std::ostringstream os;
  os << maps << " maps, max ratio " << worst << "; x/(1-x) ratio 1 at 0, 1/4, 1/2; constant n!/m! gives ratio "
     << stmt.max_ratio << " (violated); " << t.summary();
  return {0, "", t.ok(), os.str()};
}

// 10
CheckResult scan_check(const SuiteOptions& opt) {
  ScanOptions so;
  so.d = 3;
  so.eps = {Q("1/16")};
  so.sample_count = scaled(200, opt);
  so.max_steps = 25;
  so.threads = opt.threads;
  ScanReport rep = return_scan(logistic(), Q("1/2"), so);
  const EpsSummary& e = rep.summaries.front();
  bool ok = e.events > 0 && rep.all_positive() && rep.identity_holds() && e.identity_checked == e.events;
  std::ostringstream os;
  os << so.sample_count << " samples: " << e.events << " events, " << e.all_positive << " with S_1,S_2,S_3 > 0, "
     << "identity exact on " << e.identity_held << "/" << e.identity_checked << ", " << e.not_entered
     << " not entered, " << e.critical_discarded << " critical; " << e.exact_events << " exact, "
     << e.interval_events << " interval-certified, max " << e.max_bits << " bits";
  return {0, "", ok, os.str()};
}

// 11
CheckResult jet_substrate(const SuiteOptions& opt) {
  Sampler s(opt.seed + 11);
  Tally t;
  int want = scaled(500, opt);
  for (int i = 0; i < want; ++i) {
    int n = static_cast<int>(s.integer(1, 9));
    Jet<Rational> f = s.jet(n, 5, 4, s.rational(2, 3));
    if (f[1] != 0) {
      Jet<Rational> g = reverse(f);
      t.expect(compose(g, f) == Jet<Rational>::identity(f.base(), n), "g o f != id");
      t.expect(compose(f, g) == Jet<Rational>::identity(f[0], n), "f o g != id");
    }
    Jet<Rational> b = s.jet(n, 5, 4, f[0]);
    Jet<Rational> c = s.jet(n, 5, 4, b[0]);
    t.expect(compose(c, compose(b, f)) == compose(compose(c, b), f), "composition not associative");
  }
  return {0, "", t.ok(), std::to_string(want) + " jets; " + t.summary()};
}

}  // namespace

const std::vector<SuiteCheck>& invariant_checks() {
  static const std::vector<SuiteCheck> checks = {
      {1, "route equivalence (det = defect = recursive, d = 1..4)", route_equivalence},
      {2, "Pade fixtures for exp at 0", pade_fixtures},
      {3, "S_3 vanishes on rational maps of degree <= 3", low_degree_vanishing},
      {4, "composition formula (three-term identity)", composition_formula},
      {5, "composition inequality on Pick pairs", composition_inequality},
      {6, "Pick characterization (certificates and half-plane)", pick_characterization},
      {7, "cross-ratio matrices", crossratio},
      {8, "matrix monotonicity", matrix_monotone},
      {9, "Koebe derivative bound", koebe},
      {10, "return-time scan, logistic, d = 3", scan_check},
      {11, "jet reversion and associativity", jet_substrate},
  };
  return checks;
}

std::vector<CheckResult> run_suite(const SuiteOptions& opt, const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  for (const SuiteCheck& c : invariant_checks()) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c.run(opt);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = c.id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace schwarz
