#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "schwarz/cli.hpp"
#include "schwarz/json_io.hpp"

using namespace schwarz;

namespace {

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("pade of exp") {
  auto r = run({"pade", "--fn", "exp", "--at", "0", "--d", "2", "--backend", "exact"});
  REQUIRE(r.code == 0);
  auto j = r.json();
  CHECK(j["schema"] == "v1");
  CHECK(j["command"] == "pade");
  CHECK(j["p"] == Json({"1", "1/2", "1/12"}));
  CHECK(j["q"] == Json({"1", "-1/2", "1/12"}));

  auto d1 = run({"pade", "--fn", "exp", "--d", "1"}).json();
  CHECK(d1["p"] == Json({"1", "1/2"}));
  CHECK(d1["q"] == Json({"1", "-1/2"}));
}

TEST_CASE("schwarzian of exp, every route") {
  for (std::string route : {"sequence", "det", "defect", "recursive"}) {
    CAPTURE(route);
    auto r = run({"schwarzian", "--fn", "exp", "--at", "0", "--d", "2", "--route", route});
    REQUIRE(r.code == 0);
    CHECK(r.json()["S"] == Json({"-1/2", "1/6"}));
  }
  auto f = run({"schwarzian", "--fn", "exp", "--at", "0.25", "--d", "1", "--backend", "float"});
  REQUIRE(f.code == 0);
  CHECK(f.json()["S"][0].get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("function inputs") {
  // (1 + z)/(1 - z) twice: as a Mobius builtin and as inline JSON
  auto a = run({"schwarzian", "--fn", "mobius", "--mobius", "1,1,-1,1", "--d", "2"});
  auto b = run({"schwarzian", "--json", R"({"kind":"mobius","a":1,"b":1,"c":"-1","d":"1"})", "--d", "2"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.json()["S"] == b.json()["S"]);
  CHECK(a.json()["S"][0] == "0");

  auto p = run({"schwarzian", "--fn", "poly", "--coeffs", "0,1,0,1", "--at", "1/2", "--d", "3"});
  REQUIRE(p.code == 0);
  CHECK(p.json()["S"][2] == "0");

  auto jet = run({"pade", "--json", R"({"kind":"jet","base":"0","coeffs":["1","1","1/2","1/6","1/24"]})", "--d", "2"});
  REQUIRE(jet.code == 0);
  CHECK(jet.json()["q"] == Json({"1", "-1/2", "1/12"}));

  auto cf = run({"cf", "--json", R"({"kind":"cf","base":"0","A":["0","1","2"],"mu":["1","3"]})", "--d", "2"});
  REQUIRE(cf.code == 0);
  CHECK(cf.json()["A"] == Json({"0", "1", "2"}));
  CHECK(cf.json()["mu"] == Json({"1", "3"}));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"pade", "--d", "2"}).code == 2);                                     // no function
  CHECK(run({"pade", "--fn", "exp", "--d", "x"}).code == 2);                      // bad integer
  CHECK(run({"pade", "--fn", "exp", "--at", "1/0"}).code == 2);                   // bad rational
  CHECK(run({"pade", "--fn", "exp", "--at", "1", "--d", "2"}).code == 2);         // exp exact at 0 only
  CHECK(run({"schwarzian", "--fn", "q", "--alpha", "5/2", "--at", "1/2"}).code == 2);
  CHECK(run({"pade", "--fn", "exp", "--format", "xml"}).code == 2);
  CHECK(run({"monotone", "--fn", "power", "--n", "2"}).code == 2);                // seed is mandatory
  CHECK(run({"pick-certify", "--random", "5"}).code == 2);
  CHECK(run({"pade", "--json", "{not json"}).code == 2);
}

TEST_CASE("precondition errors exit 3") {
  auto r = run({"pade", "--fn", "mobius", "--d", "2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("NotNormal") != std::string::npos);

  auto cf = run({"cf", "--fn", "mobius", "--d", "2"});
  CHECK(cf.code == 3);
  CHECK(cf.json()["complete"] == false);  // partial representation still written

  CHECK(run({"schwarzian", "--fn", "poly", "--coeffs", "0,0,1", "--at", "0"}).code == 3);  // f'(0) = 0
  CHECK(run({"koebe", "--fn", "exp", "--backend", "float", "--d", "1", "--lo", "-1", "--hi", "1"}).code == 3);
}

TEST_CASE("the q family is float-only for non-integer alpha") {
  auto r = run({"schwarzian", "--fn", "q", "--alpha", "5/2", "--at", "1/2", "--d", "1", "--backend", "float"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["S"][0].is_number());
  auto e = run({"schwarzian", "--fn", "q", "--alpha", "2", "--at", "1/2", "--d", "1"});
  REQUIRE(e.code == 0);
  CHECK(e.json()["S"][0].is_string());
}

TEST_CASE("reports are byte-stable") {
  std::vector<std::vector<std::string>> cmds = {
      {"schwarzian", "--fn", "logistic", "--at", "1/3", "--d", "3"},
      {"pick-certify", "--random", "6", "--seed", "11"},
      {"monotone", "--fn", "power", "--power", "1/2", "--n", "2", "--trials", "50", "--seed", "5"},
      {"crossratio", "--fn", "mobius", "--points", "1/4,1/2,3/4", "--backend", "float"},
      {"scan", "--d", "2", "--eps", "1/8,1/16", "--samples", "12", "--max-steps", "16", "--threads", "3"},
  };
  for (const auto& c : cmds) {
    CAPTURE(c[0]);
    auto a = run(c), b = run(c);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
  // sorted keys
  auto j = run(cmds[0]).out;
  CHECK(j.find("\"at\"") < j.find("\"backend\""));
  CHECK(j.find("\"S\"") < j.find("\"at\""));
}

TEST_CASE("csv output") {
  auto r = run({"schwarzian", "--fn", "exp", "--d", "2", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "k,S,flag\r\n1,-1/2,defined\r\n2,1/6,defined\r\n");

  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");

  auto s = run({"scan", "--d", "1", "--eps", "1/8", "--samples", "5", "--max-steps", "12", "--format", "csv"});
  REQUIRE(s.code == 0);
  CHECK(s.out.rfind("sample,x,eps,s,image,", 0) == 0);
}

TEST_CASE("pick-certify and the half-plane check") {
  auto r = run({"pick-certify", "--fn", "rational", "--num", "0,1", "--den", "1,-1", "--at", "0"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["verdict"] == "PASS");

  // 1 + z + z^3 is not Pick: a FAIL verdict is data, not an error
  auto c = run({"pick-certify", "--fn", "poly", "--coeffs", "1,1,0,1", "--at", "1"});
  REQUIRE(c.code == 0);
  CHECK(c.json()["verdict"] == "FAIL");
  auto h = run({"halfplane", "--fn", "poly", "--coeffs", "1,1,0,1"});
  REQUIRE(h.code == 0);
  CHECK(h.json()["verdict"] == "FAIL");

  auto neg = run({"pick-certify", "--random", "10", "--seed", "3", "--negative"});
  REQUIRE(neg.code == 0);
  CHECK(neg.json()["strict_pass_any_method"] == 0);
}

TEST_CASE("koebe") {
  auto r = run({"koebe", "--fn", "rational", "--num", "0,1", "--den", "1,-1", "--d", "1", "--lo", "-1", "--hi",
                "1/2", "--grid", "8"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["verdict"] == "PASS");
  // U = R: only the trivial m = n bound is finite
  auto v = run({"koebe", "--fn", "mobius", "--d", "1", "--x", "1/2", "--m", "2", "--n", "1"});
  REQUIRE(v.code == 0);
  CHECK(v.json()["verdict"] == "vacuous");
}

TEST_CASE("selftest") {
  auto r = run({"selftest", "--scale", "0.02"});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j["verdict"] == "PASS");
  CHECK(j["checks"].size() == 11);
}

TEST_CASE("composite function inputs") {
  auto jet_of = [](const std::string& fn, const std::string& d) {
    auto r = run({"pade", "--check", "--d", d, "--json", fn});
    REQUIRE(r.code == 0);
    return r.json()["jet"];
  };
  CHECK(jet_of(R"({"kind":"sum","args":[{"kind":"exp"},{"kind":"exp"}]})", "2") ==
        Json({"2", "2", "1", "1/3", "1/12"}));
  CHECK(jet_of(R"({"kind":"product","args":[{"kind":"poly","coeffs":[1,1]},{"kind":"poly","coeffs":[1,-1]}]})",
               "1") == Json({"1", "0", "-1"}));
  CHECK(jet_of(R"({"kind":"quotient","args":[{"kind":"poly","coeffs":[1]},{"kind":"poly","coeffs":[1,-1]}]})",
               "2") == Json({"1", "1", "1", "1", "1"}));
  CHECK(jet_of(R"({"kind":"compose","outer":{"kind":"exp"},"inner":{"kind":"poly","coeffs":[0,2]}})", "2") ==
        Json({"1", "2", "2", "4/3", "2/3"}));
  CHECK(jet_of(R"({"kind":"inverse","of":{"kind":"poly","coeffs":[0,1,1]}})", "2") ==
        Json({"0", "1", "-1", "2", "-5"}));
}

TEST_CASE("inverse branches") {
  // local inverse of 4x(1-x) near 1/4, expanded at 3/4
  auto r = run({"schwarzian", "--fn", "logistic", "--inverse", "1/4", "--d", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["at"] == "3/4");
  CHECK(r.json()["jet"][1] == "1/2");
  CHECK(r.json()["S"] == Json({"6"}));
  CHECK(run({"schwarzian", "--fn", "logistic", "--inverse", "1/4", "--at", "1/2"}).code == 2);

  auto b = run({"schwarzian", "--fn", "logistic-inverse", "--at", "3/4", "--d", "1"});
  REQUIRE(b.code == 0);
  CHECK(b.json()["S"] == Json({"6"}));
  CHECK(run({"schwarzian", "--fn", "logistic-inverse", "--at", "1/2"}).code == 2);  // irrational preimage
  auto f = run({"schwarzian", "--fn", "logistic-inverse", "--at", "0.5", "--d", "1", "--backend", "float"});
  REQUIRE(f.code == 0);
  // S_1 of the left branch is 3/(8 (1-y)^2)
  CHECK(f.json()["S"][0].get<double>() == doctest::Approx(1.5));
}

TEST_CASE("pade: Hankel data and evaluation") {
  auto e = run({"pade", "--fn", "exp", "--d", "3", "--check"});
  REQUIRE(e.code == 0);
  CHECK(e.json()["hankel_dets"] == Json({"1", "1", "-1/12", "-1/8640"}));
  CHECK(e.json()["hankel"][1] == Json({"1/2", "1/6", "1/24"}));

  auto m = run({"pade", "--fn", "mobius", "--d", "2", "--check"});
  REQUIRE(m.code == 0);
  CHECK(m.json()["normal"] == Json({true, true, false}));

  auto v = run({"pade", "--fn", "exp", "--d", "1", "--eval", "0,1,2"});
  REQUIRE(v.code == 0);
  CHECK(v.json()["values"][0]["value"] == "1");
  CHECK(v.json()["values"][1]["value"] == "3");
  CHECK(v.json()["values"][2]["value"] == "inf");
}

TEST_CASE("composition checks") {
  auto r = run({"schwarzian", "--fn", "poly", "--coeffs", "0,1,1,1", "--at", "1/2", "--d", "2", "--outer",
                R"({"kind":"poly","coeffs":[0,1,1,1]})"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["composition"]["holds"] == true);
  // not normal of order 2 at 0
  CHECK(run({"schwarzian", "--fn", "poly", "--coeffs", "0,1,1,1", "--d", "2", "--outer",
             R"({"kind":"poly","coeffs":[0,1,1,1]})"})
            .code == 3);

  auto pick = run({"schwarzian", "--json", R"({"kind":"cf","A":[0,1],"mu":[1]})", "--d", "2", "--outer",
                   R"({"kind":"cf","A":[1,2],"mu":[3]})", "--inequality"});
  REQUIRE(pick.code == 0);
  CHECK(pick.json()["composition"]["inequality_holds"] == true);
  // g with S_1 < 0 violates the hypothesis
  CHECK(run({"schwarzian", "--json", R"({"kind":"cf","A":[0,1],"mu":[1]})", "--d", "2", "--outer",
             R"({"kind":"poly","coeffs":[0,1,1]})", "--inequality"})
            .code == 3);

  auto mob = run({"schwarzian", "--fn", "exp", "--backend", "float", "--at", "0.5", "--d", "1", "--pre-mobius",
                  "2,1,0,1"});
  REQUIRE(mob.code == 0);
  CHECK(mob.json()["mobius"]["holds"] == true);
  CHECK(mob.json()["mobius"]["pre_lhs"].get<double>() == doctest::Approx(-2.0));
}

TEST_CASE("membership and orbits") {
  auto m = run({"koebe", "--fn", "poly", "--coeffs", "0,1,0,1", "--d", "1", "--x", "-1/2,1/4", "--membership"});
  REQUIRE(m.code == 0);
  CHECK(m.json()["verdict"] == "FAIL");  // a sign map is data
  auto pts = m.json()["reports"][0]["points"];
  CHECK(pts[0]["signs"] == Json({-1}));
  CHECK(pts[1]["signs"] == Json({1}));

  auto o = run({"scan", "--orbit", "1/2", "--steps", "3"});
  REQUIRE(o.code == 0);
  CHECK(o.json()["orbit"] == Json({"1/2", "1", "0", "0"}));
  CHECK(run({"scan", "--orbit", "3/4", "--steps", "2"}).json()["orbit"] == Json({"3/4", "3/4", "3/4"}));
}
