#include "schwarz/json_io.hpp"

#include "schwarz/error.hpp"

namespace schwarz {

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_unsigned()) return Rational(static_cast<double>(j.get<unsigned long>()));
  if (j.is_number_float()) return parse_rational(format_double(j.get<double>()));
  throw Error(ErrorCode::kParse, "expected a number or a \"p/q\" string, got " + j.dump());
}

double double_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  return to_double(rational_from_json(j));
}

std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "expected an array, got " + j.dump());
  std::vector<Rational> out;
  for (const Json& v : j) out.push_back(rational_from_json(v));
  return out;
}

namespace {

Json complex_json(const Complex& z) { return Json::array({scalar_json(z.real()), scalar_json(z.imag())}); }

}  // namespace

Json to_json(const HalfplaneReport& r) {
  Json fails = Json::array();
  for (const Complex& z : r.failing_points) fails.push_back(complex_json(z));
  return {{"min_im", scalar_json(r.min_im)},
          {"argmin", complex_json(r.argmin)},
          {"points", r.points},
          {"failures", r.failures},
          {"failing_points", fails},
          {"verdict", r.pass ? "PASS" : "FAIL"}};
}

Json to_json(const CrossRatioMatrix& m) {
  Json rows = Json::array();
  for (const auto& row : m.entries) rows.push_back(scalars_json(row));
  return {{"points", scalars_json(m.points)},
          {"matrix", rows},
          {"eigenvalues", scalars_json(m.eigenvalues)},
          {"min_eigenvalue", scalar_json(m.min_eigenvalue())}};
}

Json to_json(const MonotoneReport& r) {
  Json j{{"n", r.n},
         {"trials", r.trials},
         {"rejections", r.rejections},
         {"min_eigenvalue", scalar_json(r.min_eigenvalue)},
         {"worst_margin", scalar_json(r.worst_margin)},
         {"worst_trial", r.worst_trial},
         {"verdict", r.pass ? "PASS" : "FAIL"}};
  if (!r.pass) {
    Json a = Json::array(), b = Json::array();
    for (const auto& row : r.witness_a) a.push_back(scalars_json(row));
    for (const auto& row : r.witness_b) b.push_back(scalars_json(row));
    j["witness"] = {{"A", a}, {"B", b}};
  }
  return j;
}

Json to_json(const ReturnEvent& e) {
  Json vals = Json::array();
  for (const auto& v : e.values) vals.push_back(v ? scalar_json(*v) : Json(nullptr));
  Json j{{"sample", e.sample},
         {"x", scalar_json(e.x)},
         {"eps", scalar_json(e.eps)},
         {"s", e.s},
         {"image", scalar_json(e.image)},
         {"image_exact", e.image_exact},
         {"bits", e.bits},
         {"method", to_string(e.method)},
         {"precision", static_cast<long>(e.precision)},
         {"df_sign", e.df_sign},
         {"signs", e.signs},
         {"S_approx", scalars_json(e.approx)},
         {"S", vals},
         {"all_positive", e.all_positive}};
  j["d1_identity"] = e.d1_identity ? Json(*e.d1_identity) : Json(nullptr);
  return j;
}

Json to_json(const ComposedEvent& e) {
  return {{"sample", e.sample},         {"eps", scalar_json(e.eps)},
          {"s", e.s},                   {"first", e.first},
          {"direct_signs", e.direct_signs}, {"composed_signs", e.composed_signs},
          {"all_positive", e.all_positive}, {"consistent", e.consistent}};
}

Json to_json(const ScanReport& r, bool with_events) {
  Json eps = Json::array();
  for (const EpsSummary& s : r.summaries) {
    Json wit = Json::array();
    for (std::size_t w : s.witnesses) wit.push_back(to_json(r.events.at(w)));
    Json e{{"eps", scalar_json(s.eps)},
           {"samples", s.samples},
           {"events", s.events},
           {"all_positive", s.all_positive},
           {"fraction_positive", s.events ? scalar_json(static_cast<double>(s.all_positive) / s.events) : Json(nullptr)},
           {"not_entered", s.not_entered},
           {"critical_discarded", s.critical_discarded},
           {"identity_checked", s.identity_checked},
           {"identity_held", s.identity_held},
           {"min_Sk", scalars_json(s.min_sk)},
           {"witnesses", wit},
           {"max_bits", s.max_bits},
           {"exact_events", s.exact_events},
           {"interval_events", s.interval_events}};
    if (s.composed_events) {
      e["composed_events"] = s.composed_events;
      e["composed_positive"] = s.composed_positive;
    }
    eps.push_back(e);
  }
  Json j{{"map", r.map},
         {"critical_point", scalar_json(r.critical_point)},
         {"d", r.d},
         {"max_steps", r.max_steps},
         {"samples", r.samples.size()},
         {"epsilons", eps},
         {"all_positive", r.all_positive()},
         {"identity_holds", r.identity_holds()}};
  if (with_events) {
    Json ev = Json::array(), comp = Json::array();
    for (const ReturnEvent& e : r.events) ev.push_back(to_json(e));
    for (const ComposedEvent& c : r.composed) comp.push_back(to_json(c));
    j["events"] = ev;
    if (!r.composed.empty()) j["composed"] = comp;
  }
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << "\r\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

std::string cell(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_array()) {
    std::string out;
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ";" : "") + cell(j[i]);
    return out;
  }
  return j.dump();
}

Table scan_event_table(const ScanReport& r) {
  Table t;
  t.header = {"sample", "x", "eps", "s", "image", "bits", "method", "precision", "df_sign", "d1_identity",
              "all_positive"};
  for (int k = 1; k <= r.d; ++k) t.header.push_back("S" + std::to_string(k) + "_sign");
  for (int k = 1; k <= r.d; ++k) t.header.push_back("S" + std::to_string(k) + "_approx");
  for (int k = 1; k <= r.d; ++k) t.header.push_back("S" + std::to_string(k));
  for (const ReturnEvent& e : r.events) {
    std::vector<std::string> row{std::to_string(e.sample),
                                 e.x.get_str(),
                                 e.eps.get_str(),
                                 std::to_string(e.s),
                                 e.image_exact ? e.image.get_str() : format_double(e.image.get_d()),
                                 std::to_string(e.bits),
                                 to_string(e.method),
                                 std::to_string(e.precision),
                                 std::to_string(e.df_sign),
                                 e.d1_identity ? (*e.d1_identity ? "true" : "false") : "",
                                 e.all_positive ? "true" : "false"};
    for (int s : e.signs) row.push_back(std::to_string(s));
    for (double a : e.approx) row.push_back(format_double(a));
    for (const auto& v : e.values) row.push_back(v ? v->get_str() : "");
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace schwarz
