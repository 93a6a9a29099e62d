#pragma once

// JSON forms of polynomials, tables and reports.

#include <string>

#include "json.hpp"
#include "phasekit/gowers.hpp"
#include "phasekit/hyperplane.hpp"
#include "phasekit/quasisym.hpp"
#include "phasekit/search.hpp"
#include "phasekit/symmetrize.hpp"

namespace phasekit {

using Json = nlohmann::ordered_json;

/// {"p","n","alpha":"num/p^D","terms":[{"exps":[...],"j":..,"coeff":..}]}
Json to_json(const NonClassicalPoly& poly);
/// Same layout with every j = 0 and the constant term as alpha.
Json to_json(const ClassicalPoly& poly);
/// Throws Error on malformed input, duplicate terms or non-canonical entries.
NonClassicalPoly poly_from_json(const Json& j);
/// Requires all j = 0 and alpha of depth <= 1.
ClassicalPoly classical_from_json(const Json& j);

/// {"p","n","values":["num/p^D",...]} in index order.
Json to_json(const PhaseTable& table);
PhaseTable phase_table_from_json(const Json& j);
/// Values as [re, im] pairs.
Json to_json(const ComplexTable& table);
/// Accepts [re, im] pairs, plain numbers, or phase strings (read as e(v)).
ComplexTable complex_table_from_json(const Json& j);

Json to_json(const GowersResult& r);
Json to_json(const OracleReport& r);
Json to_json(const MonochromaticSearch& r);
Json to_json(const RestrictionResult& r);
Json to_json(const Field& field, const HyperplaneSplit& s);
Json to_json(const CorrelateExtraction& e);
Json to_json(const SearchReport& r);
Json to_json(const ZeroProbResult& r);
Json to_json(const DecayCurve& c);

/// Parses `text` as JSON if it starts with '{' or '[', otherwise reads the
/// file it names.
Json load_json(const std::string& text);

}  // namespace phasekit
