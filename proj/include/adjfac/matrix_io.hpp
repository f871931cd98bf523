#pragma once

#include "json.hpp"

#include "adjfac/matrix.hpp"

namespace adjfac {

using json = nlohmann::json;

// Matrix JSON form: {"rows": r, "cols": c, "entries": [[...], ...]}.
// Integers are JSON numbers when they fit in 64 bits and decimal strings
// otherwise; rationals with a denominator are "p/q" strings; polynomial
// entries are canonical polynomial strings.

json to_json(const IntMatrix& m);
json to_json(const RatMatrix& m);
json to_json(const PolyMatrix& m);
json to_json(const FpMatrix& m);

IntMatrix int_matrix_from_json(const json& j);
RatMatrix rat_matrix_from_json(const json& j);
/// Entries are parsed over the variable table of size n.
PolyMatrix poly_matrix_from_json(const json& j, int n);

}  // namespace adjfac
