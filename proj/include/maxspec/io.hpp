#pragma once

#include <json.hpp>

#include "maxspec/matrix.hpp"

namespace maxspec {

/// {"n": n, "entries": [[...], ...]} or {"n": n, "triplets": [[i, j, v], ...]}
/// with 1-based triplet indices. Negative, non-finite or duplicate entries
/// throw ValidationError.
FiniteMaxMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const FiniteMaxMatrix& a);

/// Linear value of a scalar; values outside double range are written as
/// {"log2": x}.
nlohmann::json scalar_to_json(MaxScalar x);
nlohmann::json vector_to_json(const MaxVector& x);

}  // namespace maxspec
