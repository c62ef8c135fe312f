#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <pybind11/functional.h>

#include "liouwave/blowup.hpp"
#include "liouwave/config.hpp"
#include "liouwave/error.hpp"
#include "liouwave/picard.hpp"
#include "liouwave/propagator.hpp"
#include "liouwave/scenario.hpp"
#include "liouwave/snapshot.hpp"

namespace py = pybind11;
using namespace liouwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Grid handle shared with every field created from it.
struct Grid {
  GridRef ref;
};

ScalarField to_field(const Grid& g, const Array& a) {
  if (a.ndim() != 2 || a.shape(0) != g.ref->n1() || a.shape(1) != g.ref->n2())
    throw std::invalid_argument("array shape must be (n1, n2) of the grid");
  ScalarField f(g.ref);
  std::copy(a.data(), a.data() + a.size(), f.values.begin());
  return f;
}

Array to_array(const ScalarField& f) {
  Array a({f.grid->n1(), f.grid->n2()});
  std::copy(f.values.begin(), f.values.end(), a.mutable_data());
  return a;
}

py::list to_arrays(const std::vector<ScalarField>& fs) {
  py::list out;
  for (const auto& f : fs) out.append(to_array(f));
  return out;
}

std::vector<ScalarField> to_fields(const Grid& g, const std::vector<Array>& as) {
  std::vector<ScalarField> out;
  for (const auto& a : as) out.push_back(to_field(g, a));
  return out;
}

py::dict report_dict(const FunctionalReport& r) {
  py::dict d;
  d["t"] = r.t;
  d["kinetic"] = r.kinetic;
  d["dirichlet"] = r.dirichlet;
  d["log_plus"] = r.log_plus;
  d["log_minus"] = r.log_minus;
  d["log_components"] = r.log_components;
  d["J"] = r.J;
  d["E"] = r.E;
  d["mt_residual"] = r.mt_residual;
  d["means"] = r.means;
  d["velocity_means"] = r.velocity_means;
  d["grad_l2"] = r.grad_l2;
  d["energy_defined"] = r.energy_defined;
  return d;
}

py::dict concentration_dict(const ConcentrationReport& r) {
  py::dict d;
  d["sign"] = r.sign;
  d["component"] = r.component;
  d["points"] = r.points;
  d["grid_indices"] = r.grid_indices;
  d["fractions"] = r.fractions;
  d["covered"] = r.covered;
  d["alarmed"] = r.alarmed;
  return d;
}

Grid grid_of(const WaveState& s) { return Grid{s.grid()}; }

}  // namespace

PYBIND11_MODULE(_liouwave, m) {
  m.doc() = "Spectral wave solver core";

  py::register_exception<DynamicRangeError>(m, "DynamicRangeError", PyExc_ArithmeticError);
  py::register_exception<SingularCouplingError>(m, "SingularCouplingError", PyExc_ValueError);
  py::register_exception<SnapshotError>(m, "SnapshotError", PyExc_IOError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Grid>(m, "Grid")
      .def(py::init([](int n1, int n2, double L1, double L2) {
             return Grid{make_torus_grid(n1, n2, L1, L2)};
           }),
           py::arg("n1"), py::arg("n2"), py::arg("L1") = 2 * M_PI, py::arg("L2") = 2 * M_PI)
      .def_property_readonly("n1", [](const Grid& g) { return g.ref->n1(); })
      .def_property_readonly("n2", [](const Grid& g) { return g.ref->n2(); })
      .def_property_readonly("L1", [](const Grid& g) { return g.ref->L1(); })
      .def_property_readonly("L2", [](const Grid& g) { return g.ref->L2(); })
      .def_property_readonly("area", [](const Grid& g) { return g.ref->area(); })
      .def("mesh", [](const Grid& g) {
        auto x1 = sample(g.ref, [](double a, double) { return a; });
        auto x2 = sample(g.ref, [](double, double b) { return b; });
        return py::make_tuple(to_array(x1), to_array(x2));
      }, "Coordinate arrays (X1, X2) of shape (n1, n2).");

  py::class_<WaveState>(m, "WaveState")
      .def(py::init([](const Grid& g, const std::vector<Array>& u, const std::vector<Array>& v,
                       double t0) { return wave_state_new(g.ref, to_fields(g, u), to_fields(g, v), t0); }),
           py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("t0") = 0.0)
      .def_readonly("t", &WaveState::t)
      .def_property_readonly("u", [](const WaveState& s) { return to_arrays(s.u); })
      .def_property_readonly("v", [](const WaveState& s) { return to_arrays(s.v); })
      .def_property_readonly("grid", &grid_of)
      .def_property_readonly("components", &WaveState::components);

  py::class_<CouplingConfig>(m, "CouplingConfig")
      .def_static("mean_field", &CouplingConfig::mean_field, py::arg("rho"))
      .def_static("sinh_gordon", &CouplingConfig::sinh_gordon, py::arg("rho1"), py::arg("rho2"))
      .def_static("asymmetric_sinh", &CouplingConfig::asymmetric_sinh, py::arg("rho1"),
                  py::arg("rho2"), py::arg("a"))
      .def_static("toda",
                  [](const std::vector<double>& rho, const std::string& kind) {
                    return CouplingConfig::toda(
                        rho, cartan_matrix(matrix_kind_from_string(kind), static_cast<int>(rho.size())));
                  },
                  py::arg("rho"), py::arg("matrix") = "A")
      .def_property_readonly("family", [](const CouplingConfig& c) { return to_string(c.family); })
      .def_readonly("rho", &CouplingConfig::rho)
      .def_property_readonly("components", &CouplingConfig::components);

  m.def("integrate", [](const Grid& g, const Array& f) { return integrate(to_field(g, f)); });
  m.def("random_smooth_field",
        [](const Grid& g, std::uint64_t seed, double amplitude, int kmax) {
          return to_array(random_smooth_field(g.ref, seed, amplitude, kmax));
        },
        py::arg("grid"), py::arg("seed"), py::arg("amplitude") = 1.0, py::arg("kmax") = 4);
  m.def("functional_J", [](const Grid& g, const Array& u, const CouplingConfig& c) {
    return functional_J(to_field(g, u), c);
  });
  m.def("energy", [](const WaveState& s, const CouplingConfig& c) { return energy(s, c); });
  m.def("functional_report",
        [](const WaveState& s, const CouplingConfig& c) { return report_dict(functional_report(s, c)); });

  m.def("evolve",
        [](const WaveState& s, double T, const CouplingConfig& c, double h, const std::string& scheme,
           std::size_t sample_every, bool dealias, bool keep_snapshots) {
          StepperConfig sc;
          sc.h = h;
          sc.scheme = scheme_from_string(scheme);
          sc.sample_every = sample_every;
          sc.dealias = dealias;
          EvolveOptions eo;
          eo.keep_snapshots = keep_snapshots;
          Trajectory tr;
          {
            py::gil_scoped_release release;
            tr = evolve(s, T, sc, c, eo);
          }
          py::dict d;
          py::list samples;
          for (const auto& r : tr.samples) samples.append(report_dict(r));
          d["samples"] = samples;
          d["times"] = tr.times();
          d["status"] = to_string(tr.status);
          d["detail"] = tr.status_detail;
          d["steps"] = tr.steps;
          d["final_state"] = tr.final_state;
          d["snapshots"] = tr.snapshots;
          return d;
        },
        py::arg("state"), py::arg("T"), py::arg("coupling"), py::arg("h") = 1e-3,
        py::arg("scheme") = "symmetric", py::arg("sample_every") = 1, py::arg("dealias") = true,
        py::arg("keep_snapshots") = false);

  m.def("picard_solve",
        [](const WaveState& s, const CouplingConfig& c, double T, double h, double tol, int max_iter) {
          const PicardResult pr = picard_solve(s, c, T, h, tol, max_iter);
          py::dict d;
          d["R"] = pr.report.R;
          d["iterations"] = pr.report.iterations;
          d["distances"] = pr.report.distances;
          d["contraction_ratios"] = pr.report.contraction_ratios;
          d["converged"] = pr.report.converged;
          d["diverged"] = pr.report.diverged;
          d["note"] = pr.report.note;
          d["path"] = pr.path;
          return d;
        },
        py::arg("state"), py::arg("coupling"), py::arg("T"), py::arg("h") = 1e-3,
        py::arg("tol") = 1e-10, py::arg("max_iter") = 50);

  m.def("bubble_field",
        [](const Grid& g, std::array<double, 2> center, double lam, double clamp) {
          return to_array(bubble_field(g.ref, center, lam, clamp));
        },
        py::arg("grid"), py::arg("center"), py::arg("lam"), py::arg("clamp") = 50.0);
  m.def("density",
        [](const Grid& g, const Array& u, int sign) {
          return to_array(density(to_field(g, u), sign >= 0 ? Sign::Plus : Sign::Minus));
        },
        py::arg("grid"), py::arg("u"), py::arg("sign") = 1);
  m.def("detect_concentration",
        [](const Grid& g, const Array& dens, int mpts, double r, double eps, double delta) {
          ConcentrationQuery q{mpts, r, eps, delta};
          return concentration_dict(detect_concentration(to_field(g, dens), q));
        },
        py::arg("grid"), py::arg("density"), py::arg("m") = 1, py::arg("r") = 0.5,
        py::arg("eps") = 0.1, py::arg("delta") = 0.0);
  m.def("concentration_window", [](double rho, const std::string& family) {
    return concentration_window(rho, family_from_string(family));
  });

  m.def("parse_config", [](const std::string& text) {
    const RunConfig c = parse_config(text);
    py::dict d;
    for (const auto& [k, v] : c.resolved) d[py::str(k)] = v;
    return d;
  }, "Validated configuration as a key -> effective value mapping.");
  m.def("run",
        [](const std::string& text, const std::string& out_dir) {
          const RunOutcome r = run_scenario(parse_config(text), out_dir);
          return py::make_tuple(r.status, r.out_dir);
        },
        py::arg("config_text"), py::arg("out_dir") = "");
  m.def("check_suite", [] {
    py::list out;
    for (const auto& it : run_check_suite()) out.append(py::make_tuple(it.name, it.pass, it.detail));
    return out;
  });
  m.def("write_snapshot", [](const WaveState& s, const std::string& path) { write_snapshot(s, path); });
  m.def("read_snapshot", [](const std::string& path) { return read_snapshot(path); });
}
