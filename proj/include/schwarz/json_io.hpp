#pragma once

// JSON and CSV serialization of reports. Rationals are canonical "p/q"
// strings, doubles are shortest round-trip numbers, object keys are sorted
// (nlohmann::json is std::map backed), so output is byte-stable.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "schwarz/dynamics.hpp"
#include "schwarz/koebe.hpp"
#include "schwarz/pickclass.hpp"
#include "schwarz/schwarzian.hpp"

namespace schwarz {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "v1";

inline Json scalar_json(const Rational& v) { return v.get_str(); }
/// Non-finite values become the strings "inf", "-inf", "nan".
inline Json scalar_json(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}
inline Json scalar_json(long double v) { return scalar_json(static_cast<double>(v)); }

template <class T>
Json scalars_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const T& x : v) a.push_back(scalar_json(x));
  return a;
}

/// Accepts "p/q", decimal strings (exact) and JSON numbers.
Rational rational_from_json(const Json& j);
double double_from_json(const Json& j);
std::vector<Rational> rationals_from_json(const Json& j);

template <class T>
Json to_json(const Jet<T>& j) {
  return {{"base", scalar_json(j.base())}, {"coeffs", scalars_json(j.coeffs())}};
}

template <class T>
Json to_json(const RationalMap<T>& r) {
  return {{"base", scalar_json(r.base())}, {"p", scalars_json(r.p().coeffs())}, {"q", scalars_json(r.q().coeffs())}};
}

template <class T>
Json to_json(const SchwarzianSequence<T>& s) {
  Json vals = Json::array(), flags = Json::array();
  for (int k = 1; k <= s.d(); ++k) {
    vals.push_back(s.defined(k) ? scalar_json(s.values[k]) : Json(nullptr));
    flags.push_back(s.defined(k) ? "defined" : "not_normal");
  }
  return {{"base", scalar_json(s.base)}, {"d", s.d()}, {"S", vals}, {"flags", flags}};
}

template <class T>
Json to_json(const ContinuedFractionRep<T>& c) {
  Json j{{"base", scalar_json(c.base)}, {"A", scalars_json(c.A)}, {"mu", scalars_json(c.mu)},
         {"complete", c.complete()}};
  j["failed_level"] = c.complete() ? Json(nullptr) : Json(c.failed_level);
  return j;
}

template <class T>
Json to_json(const PickCertificate<T>& c) {
  Json levels = Json::array();
  for (const auto& l : c.levels)
    levels.push_back({{"k", l.k}, {"value", l.exists ? scalar_json(l.value) : Json(nullptr)}, {"sign", l.sign},
                      {"exists", l.exists}});
  return {{"method", to_string(c.method)},
          {"base", scalar_json(c.base)},
          {"degree", c.degree},
          {"derivative_positive", c.derivative_positive},
          {"levels", levels},
          {"strict_pass", c.strict_pass},
          {"weak_pass", c.weak_pass},
          {"verdict", to_string(c.verdict)},
          {"cross_consistent", c.cross_consistent}};
}

Json to_json(const HalfplaneReport& r);
Json to_json(const CrossRatioMatrix& m);
Json to_json(const MonotoneReport& r);

template <class T>
Json to_json(const MembershipReport<T>& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) pts.push_back({{"x", scalar_json(p.x)}, {"S", scalars_json(p.s)}, {"signs", p.signs}});
  return {{"d", r.d},
          {"points", pts},
          {"min_value", scalar_json(r.min_value)},
          {"argmin", r.argmin ? scalar_json(*r.argmin) : Json(nullptr)},
          {"verdict", r.pass ? "PASS" : "FAIL"}};
}

template <class T>
Json to_json(const KoebeReport<T>& r) {
  auto opt = [](const std::optional<T>& v) { return v ? scalar_json(*v) : Json("inf"); };
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"x", scalar_json(p.x)},
                   {"Dm", scalar_json(p.dm)},
                   {"Dn", scalar_json(p.dn)},
                   {"dist", opt(p.dist)},
                   {"bound", opt(p.bound)},
                   {"ratio", scalar_json(p.ratio)},
                   {"within", p.within}});
  return {{"d", r.d},
          {"m", r.m},
          {"n", r.n},
          {"constant", r.constant == KoebeConstant::kProof ? "m!/n!" : "n!/m!"},
          {"points", pts},
          {"max_ratio", scalar_json(r.max_ratio)},
          {"argmax", r.argmax ? scalar_json(*r.argmax) : Json(nullptr)},
          {"verdict", r.verdict()}};
}

Json to_json(const ReturnEvent& e);
Json to_json(const ComposedEvent& e);
/// {"map", "critical_point", "d", "max_steps", "epsilons": [...], "events": [...], ...}
Json to_json(const ScanReport& r, bool with_events = true);

// CSV (RFC 4180): fields quoted when they contain a comma, quote or line break.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
std::string csv_field(const std::string& s);
void write_csv(std::ostream& os, const Table& t);
Table scan_event_table(const ScanReport& r);

/// Scalars of a JSON value as a CSV cell ("p/q" strings unquoted).
std::string cell(const Json& j);

}  // namespace schwarz
