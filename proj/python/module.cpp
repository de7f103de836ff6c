#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bubblegap/asymptotics.hpp"
#include "bubblegap/errors.hpp"
#include "bubblegap/greens.hpp"
#include "bubblegap/operators.hpp"
#include "bubblegap/solver.hpp"
#include "bubblegap/specfun.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace py = pybind11;
using namespace bubblegap;

namespace {

using Release = py::call_guard<py::gil_scoped_release>;

py::dict table_to_dict(const cli::CommandResult& r) {
    py::dict d;
    d["exit_code"] = r.exit_code;
    d["columns"] = r.table.columns;
    py::list rows;
    for (const auto& row : r.table.rows) {
        py::list out;
        for (const auto& cell : row) {
            if (cell.is_null()) out.append(py::none());
            else if (cell.is_number()) out.append(cell.get<double>());
            else if (cell.is_boolean()) out.append(cell.get<bool>());
            else out.append(cell.get<std::string>());
        }
        rows.append(out);
    }
    d["rows"] = rows;
    d["summary"] = py::module_::import("json").attr("loads")(r.summary.dump());
    d["message"] = r.message;
    return d;
}

}  // namespace

PYBIND11_MODULE(_bubblegap, m) {
    m.doc() = "Subwavelength bands and line-defect frequencies of bubbly square crystals";

    auto base = py::register_exception<Error>(m, "BubblegapError");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<NotFound>(m, "NotFound", base.ptr());
    py::register_exception<InconsistencyError>(m, "InconsistencyError", base.ptr());

    py::class_<BlochVector>(m, "BlochVector")
        .def(py::init<double, double>(), py::arg("alpha1"), py::arg("alpha2"))
        .def_readonly("alpha1", &BlochVector::alpha1)
        .def_readonly("alpha2", &BlochVector::alpha2)
        .def("__repr__", [](const BlochVector& a) {
            return "BlochVector(" + std::to_string(a.alpha1) + ", " + std::to_string(a.alpha2) + ")";
        });
    py::implicitly_convertible<py::tuple, BlochVector>();

    py::enum_<RemainderMethod>(m, "RemainderMethod")
        .value("LatticeSum", RemainderMethod::LatticeSum)
        .value("Quadrature", RemainderMethod::Quadrature);

    py::class_<CrystalConfig>(m, "CrystalConfig")
        .def(py::init<>())
        .def_readwrite("rho_b", &CrystalConfig::rho_b)
        .def_readwrite("kappa_b", &CrystalConfig::kappa_b)
        .def_readwrite("rho_w", &CrystalConfig::rho_w)
        .def_readwrite("kappa_w", &CrystalConfig::kappa_w)
        .def_readwrite("R", &CrystalConfig::R)
        .def_readwrite("epsilon", &CrystalConfig::epsilon)
        .def_readwrite("N", &CrystalConfig::N)
        .def_readwrite("Q", &CrystalConfig::Q)
        .def_readwrite("circle_points", &CrystalConfig::circle_points)
        .def_readwrite("remainder", &CrystalConfig::remainder)
        .def_readwrite("gap_cap_factor", &CrystalConfig::gap_cap_factor)
        .def_property(
            "ewald_split", [](const CrystalConfig& c) { return c.ewald.split; },
            [](CrystalConfig& c, double e) { c.ewald.split = e; })
        .def_property_readonly("delta", &CrystalConfig::delta)
        .def_property_readonly("R_d", &CrystalConfig::R_d)
        .def("validate", &CrystalConfig::validate);

    auto sf = m.def_submodule("specfun", "Integer-order Bessel and Hankel functions");
    sf.def("bessel_j", py::overload_cast<int, double>(&specfun::bessel_j), py::arg("n"), py::arg("x"));
    sf.def("bessel_j_prime", py::overload_cast<int, double>(&specfun::bessel_j_prime), py::arg("n"), py::arg("x"));
    sf.def("bessel_y", py::overload_cast<int, double>(&specfun::bessel_y), py::arg("n"), py::arg("x"));
    sf.def("bessel_y_prime", py::overload_cast<int, double>(&specfun::bessel_y_prime), py::arg("n"), py::arg("x"));
    sf.def("hankel1", py::overload_cast<int, double>(&specfun::hankel1), py::arg("n"), py::arg("x"));
    sf.def("hankel1_prime", py::overload_cast<int, double>(&specfun::hankel1_prime), py::arg("n"), py::arg("x"));
    sf.def("eta", py::overload_cast<double>(&specfun::eta), py::arg("k"));

    py::class_<LatticeGreensEvaluator>(m, "LatticeGreensEvaluator")
        .def(py::init([](Complex k, const BlochVector& a, double split) {
                 EwaldOptions o;
                 o.split = split;
                 return LatticeGreensEvaluator(k, a, o);
             }),
             py::arg("k"), py::arg("alpha"), py::arg("split") = std::sqrt(kPi))
        .def("gamma_quasi", &LatticeGreensEvaluator::gamma_quasi, py::arg("z"))
        .def("gamma_remainder", &LatticeGreensEvaluator::gamma_remainder, py::arg("z"))
        .def("gamma_remainder_gradient", &LatticeGreensEvaluator::gamma_remainder_gradient, py::arg("z"))
        .def("free_green", &LatticeGreensEvaluator::free_green, py::arg("z"));
    m.def("grad_alpha_gamma0", [](const BlochVector& a) { return grad_alpha_gamma0(a); }, py::arg("alpha"));

    m.def(
        "assemble_A_alpha",
        [](Complex w, const CrystalConfig& c, const BlochVector& a) { return assemble_A_alpha(w, c, a).dense(); },
        py::arg("omega"), py::arg("config"), py::arg("alpha"), Release());
    m.def(
        "assemble_M", [](Complex w, const CrystalConfig& c, double a1) { return assemble_M(w, c, a1).dense(); },
        py::arg("omega"), py::arg("config"), py::arg("alpha1"), Release());

    m.def(
        "muller_find_root",
        [](const std::function<Complex(Complex)>& f, Complex a, Complex b, Complex c, double tol, int max_iter) {
            return muller_find_root(f, {a, b, c}, tol, max_iter).root;
        },
        py::arg("f"), py::arg("z0"), py::arg("z1"), py::arg("z2"), py::arg("tol") = 1e-12, py::arg("max_iter") = 60);
    m.def(
        "band_omega1", [](const BlochVector& a, const CrystalConfig& c) { return band_omega1(a, c).omega; },
        py::arg("alpha"), py::arg("config"), Release());
    m.def("band_edge_omega_star", &band_edge_omega_star, py::arg("alpha1"), py::arg("config"), Release());
    m.def(
        "gap_bounds",
        [](double a1, const CrystalConfig& c) {
            const GapBounds g = gap_bounds(a1, c);
            return py::make_tuple(g.lower, g.upper, g.capped);
        },
        py::arg("alpha1"), py::arg("config"));
    m.def(
        "defect_omega",
        [](double a1, const CrystalConfig& c) -> std::optional<double> {
            py::gil_scoped_release nogil;
            return defect_omega(a1, c).omega;
        },
        py::arg("alpha1"), py::arg("config"));
    m.def(
        "defect_band",
        [](const CrystalConfig& c, int points) {
            DefectBand b;
            {
                py::gil_scoped_release nogil;
                b = defect_band(c, uniform_alpha1_grid(points));
            }
            py::list alpha1, omega, dilute;
            for (std::size_t i = 0; i < b.points.size(); ++i) {
                alpha1.append(b.curve.samples[i].alpha1);
                omega.append(b.points[i].omega ? py::cast(*b.points[i].omega) : py::none());
                dilute.append(b.dilute[i] ? py::cast(*b.dilute[i]) : py::none());
            }
            py::dict d;
            d["alpha1"] = alpha1;
            d["omega"] = omega;
            d["dilute"] = dilute;
            d["band_maximum"] = b.band_maximum;
            return d;
        },
        py::arg("config"), py::arg("points") = 41);
    m.def(
        "curvature_c_delta", [](double a1, const CrystalConfig& c) { return curvature_c_delta(a1, c).c; },
        py::arg("alpha1"), py::arg("config"), Release());

    m.def(
        "capacitance", [](const BlochVector& a, const CrystalConfig& c) { return capacitance(a, c).value; },
        py::arg("alpha"), py::arg("config"));
    m.def("omega1_asymptotic", &omega1_asymptotic, py::arg("alpha"), py::arg("config"));
    m.def("band_integral_I", &band_integral_I, py::arg("omega"), py::arg("alpha1"), py::arg("config"), Release());
    m.def(
        "dilute_defect_omega",
        [](double a1, const CrystalConfig& c) { return dilute_defect_omega(a1, c).omega; }, py::arg("alpha1"),
        py::arg("config"), Release());
    m.def(
        "critical_epsilon", [](const CrystalConfig& c) { return critical_epsilon(c).epsilon; }, py::arg("config"),
        Release());
    m.def(
        "operator_critical_epsilon", [](const CrystalConfig& c) { return operator_critical_epsilon(c).epsilon; },
        py::arg("config"), Release());
    m.def(
        "small_perturbation_defect_omega",
        [](double a1, const CrystalConfig& c) { return small_perturbation_defect_omega(a1, c).omega; },
        py::arg("alpha1"), py::arg("config"), Release());

    // Runs a CLI subcommand on a configuration given as a JSON string.
    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_json) {
            const cli::RunConfig rc = cli::parse_run_config(nlohmann::json::parse(config_json));
            cli::CommandResult r;
            {
                py::gil_scoped_release nogil;
                if (command == "band") r = cli::cmd_band(rc);
                else if (command == "defect-band") r = cli::cmd_defect_band(rc);
                else if (command == "eps0") r = cli::cmd_eps0(rc);
                else if (command == "validate") r = cli::cmd_validate(rc);
                else if (command == "validate-greens") r = cli::cmd_validate_greens(rc);
                else throw ConfigError("unknown command: " + command);
            }
            return table_to_dict(r);
        },
        py::arg("command"), py::arg("config_json"));
}
