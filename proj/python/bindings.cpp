// JSON text in, JSON text out; the Python package decodes.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locdiag/graph.hpp"
#include "locdiag/orbits.hpp"
#include "locdiag/verify.hpp"

namespace py = pybind11;
using namespace locdiag;

namespace {

json parse(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
}

Matrix matrix_arg(const std::string& s, const std::string& field) {
  return matrix_from_json(parse(s), field.empty() ? std::nullopt : std::optional(FieldSpec::parse(field)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact linear algebra, pencil ranks, graph reduction and lemma checks";

  m.def("rank", [](const std::string& mat, const std::string& field) { return rank(matrix_arg(mat, field)); },
        py::arg("matrix"), py::arg("field") = "");
  m.def("char_poly", [](const std::string& mat, const std::string& field) {
    return scalars_to_json(char_poly(matrix_arg(mat, field)).coeffs).dump();
  }, py::arg("matrix"), py::arg("field") = "");
  m.def("tuple_rank", [](const std::string& mat, const std::string& field) {
    Matrix p = matrix_arg(mat, field);
    json j = to_json(shift_rank(p));
    j["rank"] = tuple_rank_identity(p);
    return j.dump();
  }, py::arg("matrix"), py::arg("field") = "");
  m.def("pencil_rank", [](const std::string& mats, const std::string& field) {
    std::vector<Matrix> tuple;
    for (const auto& x : parse(mats)) tuple.push_back(matrix_from_json(x, field.empty() ? std::nullopt : std::optional(FieldSpec::parse(field))));
    return to_json(pencil_rank_enumerate(tuple)).dump();
  }, py::arg("matrices"), py::arg("field") = "");
  m.def("descriptor_intersect", [](const std::string& a, const std::string& b, const std::string& field) {
    FieldSpec f = FieldSpec::parse(field);
    return to_json(descriptor_intersect(descriptor_from_json(parse(a), f), descriptor_from_json(parse(b), f))).dump();
  }, py::arg("a"), py::arg("b"), py::arg("field") = "qq");
  m.def("reduce_graph", [](const std::string& g) {
    auto r = reduce(graph_from_json(parse(g)));
    if (auto* c = std::get_if<ReductionCertificate>(&r)) return json{{"reducible", true}, {"certificate", to_json(*c)}}.dump();
    return json{{"reducible", false}, {"obstruction", std::get<Obstruction>(r).component}}.dump();
  });
  m.def("replay_graph", [](const std::string& g, const std::string& cert) {
    return replay(graph_from_json(parse(g)), certificate_from_json(parse(cert)));
  });
  m.def("verify", [](const std::string& id, const std::string& params, std::uint64_t seed) {
    Report r;
    {
      py::gil_scoped_release release;
      r = verify(id, parse(params), seed);
    }
    return to_json(r).dump();
  }, py::arg("lemma"), py::arg("params") = "{}", py::arg("seed") = 0);
  m.def("run_suite", [](const std::string& config, std::uint64_t seed) {
    json c = config.empty() ? default_suite_config() : parse(config);
    py::gil_scoped_release release;
    return to_json(run_suite(c, seed)).dump();
  }, py::arg("config") = "", py::arg("seed") = 0);
  m.def("lemma_ids", &lemma_ids);
}
