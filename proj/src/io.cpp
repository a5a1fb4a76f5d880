#include "locdiag/io.hpp"

namespace locdiag {

namespace {

std::string entry_text(const json& e) {
  if (e.is_string()) return e.get<std::string>();
  if (e.is_number_integer()) return std::to_string(e.get<long long>());
  throw std::invalid_argument("matrix entries must be strings or integers");
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return {{"field", m.field().to_string()}, {"rows", rows}};
}

Matrix matrix_from_json(const json& j, std::optional<FieldSpec> field) {
  if (!j.is_object() || !j.contains("rows")) throw std::invalid_argument("matrix json needs \"rows\"");
  FieldSpec f = field ? *field : (j.contains("field") ? FieldSpec::parse(j.at("field").get<std::string>()) : FieldSpec::qq());
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : j.at("rows")) {
    std::vector<std::string> row;
    for (const auto& e : r) row.push_back(entry_text(e));
    rows.push_back(row);
  }
  return Matrix::from_strings(f, rows);
}

std::vector<Scalar> scalars_from_json(const json& j, const FieldSpec& f) {
  std::vector<Scalar> out;
  for (const auto& e : j) out.push_back(Scalar::parse(f, entry_text(e)));
  return out;
}

json scalars_to_json(const std::vector<Scalar>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(s.to_string());
  return out;
}

}  // namespace locdiag
