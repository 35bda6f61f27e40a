#pragma once

// JSON coefficient files:
//   { "dims": d, "block_size": h, "degree": [n_1, ...], "kind": "laurent" | "analytic",
//     "coeffs": [ { "index": [k_1, ...], "re": [[...]], "im": [[...]] }, ... ] }
// Laurent files store canonical exponents only. Analytic files with
// rectangular coefficients add "block_rows"; "block_size" is the column count.
// Matrix files: { "rows": r, "cols": c, "re": [[...]], "im": [[...]] }.

#include <string>
#include <variant>

#include "json.hpp"

#include "outerfact/trigpoly.hpp"

namespace outerfact {

using AnyPoly = std::variant<LaurentPoly, AnalyticPoly>;

nlohmann::json to_json(const LaurentPoly& q);
nlohmann::json to_json(const AnalyticPoly& p);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

/// Throws Error(validation) on schema violations.
AnyPoly poly_from_json(const nlohmann::json& j, double herm_tol = 1e-10);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Parses text; throws Error(validation) on malformed JSON.
nlohmann::json parse_json_text(const std::string& text);

/// Reads a file ("-" reads standard input). Throws Error(io) on failure.
std::string read_text(const std::string& path);
/// Writes text ("-" writes standard output). Throws Error(io) on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace outerfact
