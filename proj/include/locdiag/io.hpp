#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "locdiag/matrix.hpp"

namespace locdiag {

using json = nlohmann::json;

// {"field":"gf:5","rows":[["1","2"],["0","1"]]}; a field override re-reads the entries
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::optional<FieldSpec> field = std::nullopt);
std::vector<Scalar> scalars_from_json(const json& j, const FieldSpec& f);
json scalars_to_json(const std::vector<Scalar>& v);

}  // namespace locdiag
