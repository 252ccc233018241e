#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "hyerslab/hyers.hpp"
#include "hyerslab/oracle.hpp"

namespace hyerslab {

using Json = nlohmann::ordered_json;

/// Doubles go out with 17 significant digits so values round-trip exactly and
/// repeated runs emit byte-identical files. NaN/inf become null.
std::string format_double(double d);

/// Deterministic serializer over an ordered_json tree (insertion-order keys,
/// format_double for every float).
std::string dump_deterministic(const Json& j, int indent = 2);

Json complex_to_json(cx z);
Json cvector_to_json(const CVector& v);
Json matrix_to_json(const CMatrix& m);  // {rows, cols, entries: row-major [re, im] pairs}
CMatrix matrix_from_json(const Json& j);

Json violation_report_to_json(const ViolationReport& rep);
Json solution_space_to_json(const SolutionSpace& space);
Json linearity_report_to_json(const LinearityReport& rep);

/// Convergence history CSV: basis_index, n, distance, scaled_bound.
void write_history_csv(std::ostream& os, const HyersResult& res);

/// Write with a temp-file rename so readers never observe partial output.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hyerslab
