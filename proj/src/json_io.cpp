#include "phasekit/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace phasekit {

namespace {

// nlohmann reports type problems with its own exceptions; callers only see Error.
template <class Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid ") + what + ": " + e.what());
  }
}

Field field_of(const Json& j) { return Field(j.at("p").get<unsigned>()); }

unsigned n_of(const Json& j) { return j.at("n").get<unsigned>(); }

Json vector_json(std::span<const Residue> v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

Json indices_json(const std::vector<unsigned>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

}  // namespace

Json to_json(const NonClassicalPoly& poly) {
  const Field& field = poly.field();
  Json terms = Json::array();
  for (const auto& [m, c] : poly.terms()) {
    Json exps = Json::array();
    for (auto e : m.exps) exps.push_back(static_cast<unsigned>(e));
    terms.push_back({{"exps", std::move(exps)}, {"j", m.j}, {"coeff", c}});
  }
  return {{"p", field.p()}, {"n", poly.n()}, {"alpha", format_phase(field, poly.alpha())},
          {"terms", std::move(terms)}};
}

Json to_json(const ClassicalPoly& poly) { return to_json(poly.to_phase()); }

NonClassicalPoly poly_from_json(const Json& j) {
  return guarded("polynomial", [&] {
    const Field field = field_of(j);
    const unsigned n = n_of(j);
    const PhaseValue alpha =
        j.contains("alpha") ? parse_phase(field, j.at("alpha").get<std::string>()) : PhaseValue{};
    NonClassicalPoly::TermMap terms;
    for (const auto& t : j.value("terms", Json::array())) {
      const auto exps = t.at("exps").get<std::vector<unsigned>>();
      if (exps.size() != n) throw Error("term has " + std::to_string(exps.size()) + " exponents, expected " + std::to_string(n));
      Monomial m{Exponents(exps.begin(), exps.end()), t.value("j", 0u)};
      for (auto e : exps)
        if (e >= field.p()) throw Error("exponent " + std::to_string(e) + " is not below p");
      const auto coeff = t.at("coeff").get<long long>();
      if (coeff < 0 || coeff >= static_cast<long long>(field.p())) throw Error("coefficient out of range");
      if (!terms.emplace(std::move(m), static_cast<Residue>(coeff)).second) throw Error("duplicate term");
    }
    return NonClassicalPoly(field, n, alpha, std::move(terms));
  });
}

ClassicalPoly classical_from_json(const Json& j) { return ClassicalPoly::from_phase(poly_from_json(j)); }

Json to_json(const PhaseTable& table) {
  Json values = Json::array();
  for (const auto& v : table.values()) values.push_back(format_phase(table.field(), v));
  return {{"p", table.field().p()}, {"n", table.n()}, {"values", std::move(values)}};
}

PhaseTable phase_table_from_json(const Json& j) {
  return guarded("phase table", [&] {
    const Field field = field_of(j);
    std::vector<PhaseValue> values;
    for (const auto& v : j.at("values")) values.push_back(parse_phase(field, v.get<std::string>()));
    return PhaseTable(field, n_of(j), std::move(values));
  });
}

Json to_json(const ComplexTable& table) {
  Json values = Json::array();
  for (const auto& v : table.values()) values.push_back({v.real(), v.imag()});
  return {{"p", table.field().p()}, {"n", table.n()}, {"values", std::move(values)}};
}

ComplexTable complex_table_from_json(const Json& j) {
  return guarded("complex table", [&] {
    const Field field = field_of(j);
    std::vector<std::complex<double>> values;
    for (const auto& v : j.at("values")) {
      if (v.is_string()) {
        values.push_back(field.to_complex(parse_phase(field, v.get<std::string>())));
      } else if (v.is_array()) {
        if (v.size() != 2) throw Error("complex entries are [re, im]");
        values.emplace_back(v[0].get<double>(), v[1].get<double>());
      } else {
        values.emplace_back(v.get<double>(), 0.0);
      }
    }
    return ComplexTable(field, n_of(j), std::move(values));
  });
}

Json to_json(const GowersResult& r) {
  Json out{{"norm", r.norm}, {"d", r.d}, {"method", std::string(to_string(r.method))}, {"count", r.count}};
  if (!r.histogram.empty()) {
    Json counts = Json::object();
    for (const auto& [k, c] : r.histogram) counts[std::to_string(k)] = c;
    out["histogram"] = {{"depth", r.histogram_depth}, {"counts", std::move(counts)}};
  }
  return out;
}

Json to_json(const OracleReport& r) {
  Json out{{"name", r.name}, {"checked", r.checked}, {"passed", r.passed()}};
  out["counterexample"] = r.counterexample ? Json(*r.counterexample) : Json(nullptr);
  return out;
}

Json to_json(const MonochromaticSearch& r) {
  Json out;
  out["subset"] = r.subset ? indices_json(*r.subset) : Json(nullptr);
  out["largest"] = indices_json(r.largest);
  out["nodes"] = r.nodes;
  out["exhausted"] = r.exhausted;
  return out;
}

Json to_json(const RestrictionResult& r) {
  Json coeffs = Json::object();
  for (const auto& [a, c] : r.coeffs) coeffs[a.to_string()] = c;
  return {{"I", indices_json(r.subset)}, {"y", vector_json(r.outside)}, {"coeffs", std::move(coeffs)},
          {"remainder", to_json(r.remainder)}};
}

Json to_json(const Field& field, const HyperplaneSplit& s) {
  Json out{{"covector", vector_json(s.covector)},
           {"matrix", vector_json(s.basis_change.data())},
           {"alpha", format_phase(field, s.alpha)},
           {"poly", to_json(s.q)}};
  out["a"] = s.a ? Json(*s.a) : Json(nullptr);
  return out;
}

Json to_json(const CorrelateExtraction& e) {
  const Field& field = e.q_total.field();
  return {{"split", to_json(field, e.split)},
          {"q_total", to_json(e.q_total)},
          {"corr", e.corr},
          {"epsilon", e.epsilon},
          {"guarantee", e.epsilon / std::sqrt(static_cast<double>(field.p()))},
          {"slice_fourier", e.slice_fourier}};
}

Json to_json(const SearchReport& r) {
  return {{"p", r.p},
          {"n", r.n},
          {"d", r.d},
          {"mode", to_string(r.mode)},
          {"best_value", r.best_value},
          {"best_poly", to_json(r.best_poly)},
          {"candidates", r.candidates},
          {"seed", r.seed}};
}

Json to_json(const ZeroProbResult& r) {
  return {{"p", r.p},
          {"r", r.r},
          {"mode", to_string(r.mode)},
          {"probability", r.probability},
          {"std_error", r.std_error},
          {"bound", r.bound},
          {"zeros", r.zeros},
          {"evaluated", r.evaluated},
          {"leading", r.leading},
          {"seed", r.seed}};
}

Json to_json(const DecayCurve& c) {
  Json rows = Json::array();
  for (const auto& row : c.rows) {
    rows.push_back({{"n", row.n},
                    {"mode", to_string(row.mode)},
                    {"best_value", row.best_value},
                    {"candidates", row.candidates},
                    {"seed", row.seed},
                    {"best_poly", to_json(row.best_poly)}});
  }
  return {{"p", c.p}, {"k", c.k}, {"d", c.d}, {"boundary", c.boundary}, {"control", c.control},
          {"rows", std::move(rows)}};
}

Json load_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    return guarded("JSON", [&] { return Json::parse(text); });
  }
  std::ifstream in(text);
  if (!in) throw Error("cannot open '" + text + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return guarded("JSON", [&] { return Json::parse(buf.str()); });
}

}  // namespace phasekit
