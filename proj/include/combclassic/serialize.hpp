#pragma once

#include <string>

#include <json.hpp>

#include "combclassic/classicality.hpp"
#include "combclassic/comb.hpp"
#include "combclassic/instruments.hpp"
#include "combclassic/measure.hpp"
#include "combclassic/prob_table.hpp"

namespace combclassic {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "v1";

// Matrices are {"rows", "cols", "data"} with row-major [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& pointer = "");

Json layout_to_json(const FactorLayout& l);
FactorLayout layout_from_json(const Json& j, const std::string& pointer = "");

Json to_json(const Comb& c);
Json to_json(const Dilation& d);
Json to_json(const Instrument& inst);
Json to_json(const ProbTable& t);

// Throw SchemaError with the JSON pointer of the offending node.
Comb comb_from_json(const Json& j);
Dilation dilation_from_json(const Json& j);
Instrument instrument_from_json(const Json& j);

Json report_json(const ClassicalityReport& r);
Json report_json(const MarkovReport& r);
Json report_json(const NcgdReport& r, double tol);
Json report_json(const ChiReport& r, double tol);
Json report_json(const CausalityReport& r, double tol);
Json report_json(const MeasureResult& r);

// Reads a file and parses it; parse errors become SchemaError at the root.
Json read_json_file(const std::string& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace combclassic
