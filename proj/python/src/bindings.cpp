#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "qbgk/config.hpp"
#include "qbgk/diagnostics.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/io.hpp"

namespace py = pybind11;
using namespace qbgk;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

// columns of a table given as rows
py::dict columns(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  py::dict out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    py::array_t<double> col(static_cast<py::ssize_t>(rows.size()));
    auto* p = col.mutable_data();
    for (std::size_t r = 0; r < rows.size(); ++r) p[r] = rows[r][c];
    out[py::str(header[c])] = col;
  }
  return out;
}

py::dict run_config(SimConfig c, std::optional<double> t_end, std::optional<int> grid,
                    std::optional<std::size_t> stride) {
  if (t_end) c.t_end = *t_end;
  if (grid) c.grid_intervals = *grid;
  if (stride) c.stride = *stride;
  validate(c);

  std::vector<std::vector<double>> series, profile;
  std::vector<std::string> series_cols, profile_cols;
  double dt = 0.0;
  std::size_t steps = 0;
  PositivityReport worst;
  {
    py::gil_scoped_release release;
    auto setup = build_setup(c);
    Simulation sim(setup, initial_fields(c, setup));
    dt = resolve_dt(c, sim);
    DiagnosticsRecorder rec;
    sim.run(c.t_end, dt, c.stride, [&](const Simulation& s) { rec.record(s); });
    series_cols = series_header(sim.phase());
    for (const auto& r : rec.records()) series.push_back(series_row(r, sim.phase()));
    if (!c.homogeneous) {
      profile_cols = profile_header(sim.phase());
      for (const auto& r : spatial_profile(sim)) profile.push_back(profile_row(r, sim.phase()));
    }
    steps = sim.state().steps;
    worst = sim.worst_positivity();
  }
  py::dict out;
  out["series"] = columns(series_cols, series);
  out["profile"] = c.homogeneous ? py::object(py::none()) : py::object(columns(profile_cols, profile));
  out["dt"] = dt;
  out["steps"] = steps;
  out["min_f"] = worst.min_value;
  out["max_fermion_f"] = worst.max_fermion;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum BGK mixture solver";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  auto solver = py::register_exception<SolverError>(m, "SolverError", error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", error.ptr());
  (void)solver;

  py::enum_<Statistics>(m, "Statistics")
      .value("Fermion", Statistics::Fermion)
      .value("Classical", Statistics::Classical)
      .value("Boson", Statistics::Boson)
      .def_static("parse", &statistics_from_string);

  m.def("eta_integrals", &eta_integrals, py::arg("c"), py::arg("statistics"),
        "(eta_0(c), eta_0^E(c)) of the given statistics.");

  py::class_<Moments>(m, "Moments")
      .def(py::init([](double n, Vec3 P, double E) { return Moments{n, P, E}; }), py::arg("n"),
           py::arg("P"), py::arg("E"))
      .def_readwrite("n", &Moments::n)
      .def_readwrite("P", &Moments::P)
      .def_readwrite("E", &Moments::E)
      .def("__repr__", [](const Moments& x) {
        return "Moments(n=" + std::to_string(x.n) + ", P=(" + std::to_string(x.P[0]) + ", " +
               std::to_string(x.P[1]) + ", " + std::to_string(x.P[2]) + "), E=" + std::to_string(x.E) + ")";
      });

  py::class_<MomentumGrid>(m, "MomentumGrid")
      .def_property_readonly("mass", &MomentumGrid::mass)
      .def_property_readonly("nodes_per_axis", &MomentumGrid::nodes_per_axis)
      .def_property_readonly("spacing", &MomentumGrid::spacing)
      .def_property_readonly("center", &MomentumGrid::center)
      .def("__len__", &MomentumGrid::size)
      .def_property_readonly("px", [](const MomentumGrid& g) { return to_array(g.px()); })
      .def_property_readonly("py", [](const MomentumGrid& g) { return to_array(g.py()); })
      .def_property_readonly("pz", [](const MomentumGrid& g) { return to_array(g.pz()); })
      .def_property_readonly("quadrature", [](const MomentumGrid& g) { return to_array(g.quadrature()); });

  m.def("build_grid", &build_grid, py::arg("mass"), py::arg("statistics"),
        py::arg("mixture_velocity"), py::arg("mixture_temperature"),
        py::arg("intervals") = MomentumGrid::kDefaultIntervals);
  m.def("sample_maxwellian",
        [](const MomentumGrid& g, double n, Vec3 U, double T) { return to_array(sample_maxwellian(g, n, U, T)); },
        py::arg("grid"), py::arg("n"), py::arg("U"), py::arg("T"));
  m.def("compute_moments",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& f, const MomentumGrid& g) {
          if (static_cast<std::size_t>(f.size()) != g.size()) throw ConfigError("f: size does not match the grid");
          return compute_moments(from_array(f), g);
        },
        py::arg("f"), py::arg("grid"));
  m.def("kinetic_temperature", &kinetic_temperature, py::arg("moments"), py::arg("mass"));

  py::class_<IntraAlpha>(m, "IntraAlpha")
      .def(py::init([](double a0, Vec3 a1, double a2) { return IntraAlpha{a0, a1, a2, false}; }),
           py::arg("a0"), py::arg("a1"), py::arg("a2"))
      .def_readwrite("a0", &IntraAlpha::a0)
      .def_readwrite("a1", &IntraAlpha::a1)
      .def_readwrite("a2", &IntraAlpha::a2)
      .def_readonly("vacuum", &IntraAlpha::vacuum)
      .def("as_array", &IntraAlpha::as_array);

  m.def("maxwellian_alpha", &maxwellian_alpha, py::arg("moments"), py::arg("mass"));
  m.def("alpha_to_abc",
        [](const IntraAlpha& a, double mass) {
          const auto p = alpha_to_abc(a, mass);
          return py::make_tuple(p.a, p.b, p.c);
        },
        py::arg("alpha"), py::arg("mass"), "(a, b, c) of the equilibrium.");
  m.def("evaluate_equilibrium",
        [](const IntraAlpha& a, const MomentumGrid& g, Statistics s) {
          return to_array(evaluate_equilibrium(a, g, s));
        },
        py::arg("alpha"), py::arg("grid"), py::arg("statistics"));
  m.def("solve_intra",
        [](const Moments& target, const MomentumGrid& g, Statistics s) {
          const IntraTargets t{target.n, target.P[0], target.P[1], target.P[2], target.E};
          return solve_intra(t, g, s, 1.0);
        },
        py::arg("moments"), py::arg("grid"), py::arg("statistics"),
        "Equilibrium of the given statistics whose discrete moments equal `moments`.");

  py::class_<SimConfig>(m, "SimConfig")
      .def_readwrite("scenario", &SimConfig::scenario)
      .def_readwrite("grid_intervals", &SimConfig::grid_intervals)
      .def_readwrite("scheme_order", &SimConfig::scheme_order)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("nu", &SimConfig::nu)
      .def_readwrite("cells", &SimConfig::cells)
      .def_readwrite("flux_order", &SimConfig::flux_order)
      .def_readwrite("stride", &SimConfig::stride)
      .def_readonly("homogeneous", &SimConfig::homogeneous)
      .def_property_readonly("species", [](const SimConfig& c) {
        std::vector<std::string> names;
        for (const auto& s : c.species) names.push_back(s.name);
        return names;
      })
      .def("__str__", &format_config);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("format_config", &format_config, py::arg("config"));
  m.def("preset", &scenario_preset, py::arg("name"));
  m.def("preset_names", &preset_names);
  m.def("run", &run_config, py::arg("config"), py::arg("t_end") = py::none(),
        py::arg("grid") = py::none(), py::arg("stride") = py::none(),
        "Run a configuration. Returns {'series': {column: array}, 'profile': {column: array} "
        "or None, 'dt', 'steps', 'min_f', 'max_fermion_f'}.");
}
