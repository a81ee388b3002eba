// Thin bindings: every entry point takes plain integers and returns the same
// JSON documents as the command line tool, as text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "almostuniv/document.hpp"

namespace py = pybind11;
using namespace almostuniv;

namespace {

InstanceDocument make_doc(const std::array<std::int64_t, 6>& gram, const IntVec3& numerators, std::int64_t denominator,
                          const std::string& label) {
  InstanceDocument doc{gram, numerators, denominator, label};
  if (denominator <= 0) throw Error(ErrorCode::InvalidArgument, "denominator must be positive");
  return doc;
}

std::string analyze_json(const std::array<std::int64_t, 6>& gram, const IntVec3& numerators, std::int64_t denominator,
                         const std::string& label, std::size_t primes) {
  InstanceDocument doc = make_doc(gram, numerators, denominator, label);
  std::optional<Analysis> a;
  {
    py::gil_scoped_release release;
    a.emplace(analyze(doc.coset()));
  }
  return report(doc, *a, primes).dump();
}

std::string local_scan_json(const std::array<std::int64_t, 6>& gram) {
  Json out = Json::array();
  for (const auto& r : local_scan(GramMatrix3::from_upper(gram), 0)) out.push_back(to_json(r));
  return out.dump();
}

std::string enumerate_json(const std::array<std::int64_t, 6>& gram, const IntVec3& numerators, std::int64_t denominator,
                           std::uint64_t bound, bool list_gaps, unsigned jobs, std::uint64_t budget) {
  Coset coset = make_doc(gram, numerators, denominator, "").coset();
  Progression prog = progression(coset);
  std::optional<RepresentedSet> set;
  {
    py::gil_scoped_release release;
    set.emplace(enumerate(coset, bound, {budget, jobs}));
  }
  return to_json(*set, prog, list_gaps).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Almost universality of ternary inhomogeneous quadratic polynomials";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("analyze_json", &analyze_json, py::arg("gram"), py::arg("numerators"), py::arg("denominator"),
        py::arg("label") = "", py::arg("primes") = 5);
  m.def("local_scan_json", &local_scan_json, py::arg("gram"));
  m.def("enumerate_json", &enumerate_json, py::arg("gram"), py::arg("numerators"), py::arg("denominator"),
        py::arg("bound"), py::arg("gaps") = false, py::arg("jobs") = 1, py::arg("budget") = 0);
  m.def("hilbert", [](std::int64_t a, std::int64_t b, std::uint64_t q) { return hilbert(a, b, q); }, py::arg("a"),
        py::arg("b"), py::arg("q"));
}
