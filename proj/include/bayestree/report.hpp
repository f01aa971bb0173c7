#ifndef BAYESTREE_REPORT_HPP
#define BAYESTREE_REPORT_HPP

#include <optional>
#include <string>

#include "json.hpp"

#include "bayestree/dataset.hpp"
#include "bayestree/engine.hpp"
#include "bayestree/logdomain.hpp"

namespace bayestree {

// Deterministic shortest-round-trip rendering of a double ("%.17g"); "inf"
// for divergent cells in CSV output.
std::string format_double(double v);

// Divergent quantities become {"divergent": true, "scaled_log": v} (the
// scaled_log field only where a scaled surrogate exists), never a float.
nlohmann::json json_of(const LogValue& v);
nlohmann::json json_of(const ScalarOrDivergent& v);
nlohmann::json json_of(const DivergenceClass& c);
nlohmann::json json_of(const InferenceResult& r, bool with_height);

std::string csv_of(const LogValue& v);
std::string csv_of(const ScalarOrDivergent& v);
// Heavy points as "value*multiplicity" joined with ';', empty string if none.
std::string csv_of(const DivergenceClass& c);

// Header line plus one data row mirroring the JSON keys. dim_dist is a
// ';'-joined list within a single column.
std::string csv_of(const InferenceResult& r, bool with_height);

}  // namespace bayestree

#endif
