#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torsionlab/bessel.hpp"
#include "torsionlab/conekernel.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/fiber.hpp"
#include "torsionlab/phg_index.hpp"
#include "torsionlab/pipeline.hpp"
#include "torsionlab/serialize.hpp"

namespace py = pybind11;
using namespace torsionlab;

namespace {

pipeline::ModelConfig config_from(const py::dict& kw) {
  pipeline::ModelConfig c;
  for (const auto& [k, v] : kw) {
    const auto key = k.cast<std::string>();
    if (key == "model") c.model = v.cast<std::string>();
    else if (key == "fiber") c.fiber = v.cast<std::string>();
    else if (key == "fiber_radius") c.fiber_radius = v.cast<double>();
    else if (key == "fiber_periods") c.fiber_periods = v.cast<std::vector<double>>();
    else if (key == "base") c.base = v.cast<std::string>();
    else if (key == "base_radius") c.base_radius = v.cast<double>();
    else if (key == "base_periods") c.base_periods = v.cast<std::vector<double>>();
    else if (key == "convention") c.convention = fiber::parse_convention(v.cast<std::string>());
    else if (key == "nu_max") c.nu_max = v.cast<double>();
    else if (key == "lambda_max") c.lambda_max = v.cast<double>();
    else if (key == "t_min") c.t_min = v.cast<double>();
    else if (key == "t_max") c.t_max = v.cast<double>();
    else if (key == "points") c.points = v.cast<int>();
    else if (key == "even") c.even = v.cast<bool>();
    else if (key == "fit_order") c.fit_order = py::str(v).cast<std::string>();
    else if (key == "split") c.split = v.cast<double>();
    else if (key == "single_nu") {
      if (!v.is_none()) c.single_nu = v.cast<double>();
    } else
      fail(ErrorKind::InvalidArgument, "unknown model option '" + key + "'");
  }
  return c;
}

std::string run_json(const py::dict& kw, pipeline::Stage stage) {
  const auto c = config_from(kw);
  pipeline::RunResult r;
  {
    py::gil_scoped_release release;
    r = pipeline::run(c, stage);
  }
  switch (stage) {
    case pipeline::Stage::Trace: return io::dump(pipeline::trace_json(r), -1);
    case pipeline::Stage::Fit: return io::dump(pipeline::fit_json(r), -1);
    case pipeline::Stage::Zeta: return io::dump(pipeline::torsion_json(r), -1);
  }
  return "{}";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "torsionlab native core";

  // Deliberately leaked: the type must outlive interpreter teardown.
  static auto* exc = new py::exception<Error>(m, "TorsionlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // "Kind: message", so Python callers can branch on the kind.
      PyErr_SetString(exc->ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("bessel_i", &bessel::bessel_i, py::arg("nu"), py::arg("z"), py::arg("scaled") = false);
  m.def("bessel_j", &bessel::bessel_j, py::arg("nu"), py::arg("x"));
  m.def("bessel_j_zeros", &bessel::bessel_j_zeros, py::arg("nu"), py::arg("lambda_cutoff"));
  m.def("cone_heat_kernel", &cone::cone_heat_kernel, py::arg("nu"), py::arg("t"), py::arg("x"),
        py::arg("y"));

  m.def(
      "structure_json",
      [](int mm, int b, bool even, bool boundary, const std::string& cutoff) {
        const auto tpl = phg::heat_trace_structure(mm, b, even, boundary, phg::parse_rational(cutoff));
        io::Json j{{"schema", io::kSchema},
                   {"template", io::to_json(tpl)},
                   {"zeta", io::to_json(phg::zeta_pole_structure(tpl))}};
        return io::dump(j, -1);
      },
      py::arg("m"), py::arg("b"), py::arg("even") = false, py::arg("boundary") = false,
      py::arg("cutoff") = "3");

  m.def(
      "nu_spectrum",
      [](const std::vector<double>& periods, int p, const std::string& convention, double nu_cutoff) {
        const auto conv = fiber::parse_convention(convention);
        const int f = static_cast<int>(periods.size());
        const auto fs = fiber::torus_spectrum(periods, fiber::required_fiber_mu(f, p, conv, nu_cutoff));
        std::vector<std::pair<double, long>> out;
        for (const auto& mode : fiber::a_spectrum(fs, p, conv, nu_cutoff).modes)
          out.emplace_back(mode.nu, mode.multiplicity);
        return out;
      },
      py::arg("periods"), py::arg("p"), py::arg("convention") = "geometric-oracle",
      py::arg("nu_cutoff"));

  m.def(
      "dense_a_eigenvalues",
      [](const std::vector<double>& periods, int p, const std::string& convention, std::size_t n_modes) {
        return fiber::dense_a_eigenvalues(periods, p, fiber::parse_convention(convention), n_modes).nu2;
      },
      py::arg("periods"), py::arg("p"), py::arg("convention") = "geometric-oracle",
      py::arg("n_modes") = 64);

  m.def("trace_json", [](const py::dict& kw) { return run_json(kw, pipeline::Stage::Trace); });
  m.def("fit_json", [](const py::dict& kw) { return run_json(kw, pipeline::Stage::Fit); });
  m.def("torsion_json", [](const py::dict& kw) { return run_json(kw, pipeline::Stage::Zeta); });
}
