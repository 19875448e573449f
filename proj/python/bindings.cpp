// Python bindings for the fisherlab core. Exposes the grid/transform layer,
// the closed-form family, the Fisher estimators, free evolution, series
// assembly, and the file emitters. Arrays cross the boundary as numpy copies.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "fisherlab/analytic.hpp"
#include "fisherlab/check.hpp"
#include "fisherlab/errors.hpp"
#include "fisherlab/fisher.hpp"
#include "fisherlab/grid.hpp"
#include "fisherlab/io.hpp"
#include "fisherlab/propagator.hpp"
#include "fisherlab/series.hpp"
#include "fisherlab/spectral.hpp"
#include "fisherlab/statespec.hpp"

namespace py = pybind11;
namespace fl = fisherlab;

namespace {

using complex_array = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using double_array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

fl::WaveFunction make_wave(const fl::Grid& grid, const complex_array& amp, fl::Space space) {
    if (amp.ndim() != 1 || amp.shape(0) != grid.n)
        fl::fail_usage("amplitude array must be one-dimensional with length grid.n");
    fl::WaveFunction wf{grid, std::vector<fl::complexd>(amp.data(), amp.data() + grid.n), space};
    return wf;
}

}  // namespace

PYBIND11_MODULE(_fisherlab, m) {
    m.doc() = "Fisher information laboratory for freely evolving 1-D wave packets";
    m.attr("__version__") = "0.1.0";

    static py::handle fisher_error = py::exception<fl::Error>(m, "FisherlabError").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const fl::Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(fisher_error)(e.what());
            inst.attr("code") = py::int_(static_cast<int>(e.code()));
            PyErr_SetObject(fisher_error.ptr(), inst.ptr());
        }
    });

    py::enum_<fl::Space>(m, "Space")
        .value("position", fl::Space::position)
        .value("momentum", fl::Space::momentum);

    py::enum_<fl::Estimator>(m, "Estimator")
        .value("density_form", fl::Estimator::density_form)
        .value("amplitude_form", fl::Estimator::amplitude_form);

    py::enum_<fl::DerivScheme>(m, "DerivScheme")
        .value("spectral", fl::DerivScheme::spectral)
        .value("finite_difference", fl::DerivScheme::finite_difference);

    py::enum_<fl::RegridPolicy>(m, "RegridPolicy")
        .value("fixed", fl::RegridPolicy::fixed)
        .value("auto_expand", fl::RegridPolicy::auto_expand);

    py::class_<fl::Grid>(m, "Grid")
        .def_readonly("x_min", &fl::Grid::x_min)
        .def_readonly("dx", &fl::Grid::dx)
        .def_readonly("n", &fl::Grid::n)
        .def("x_max", &fl::Grid::x_max)
        .def("extent", &fl::Grid::extent)
        .def("dp", &fl::Grid::dp)
        .def("p_min", &fl::Grid::p_min)
        .def("p_max", &fl::Grid::p_max)
        .def("xs",
             [](const fl::Grid& g) {
                 py::array_t<double> a(g.n);
                 auto r = a.mutable_unchecked<1>();
                 for (int i = 0; i < g.n; ++i) r(i) = g.x(i);
                 return a;
             })
        .def("ps",
             [](const fl::Grid& g) {
                 py::array_t<double> a(g.n);
                 auto r = a.mutable_unchecked<1>();
                 for (int i = 0; i < g.n; ++i) r(i) = g.p(i);
                 return a;
             })
        .def("__eq__", [](const fl::Grid& a, const fl::Grid& b) { return a == b; })
        .def("__repr__", [](const fl::Grid& g) {
            std::ostringstream os;
            os << "Grid(x_min=" << g.x_min << ", dx=" << g.dx << ", n=" << g.n << ")";
            return os.str();
        });

    m.def("make_grid", &fl::make_grid, py::arg("x_min"), py::arg("x_max"), py::arg("n"),
          "Uniform lattice on [x_min, x_max) with n points");

    py::class_<fl::WaveFunction>(m, "WaveFunction")
        .def(py::init(&make_wave), py::arg("grid"), py::arg("amp"),
             py::arg("space") = fl::Space::position)
        .def_readonly("grid", &fl::WaveFunction::grid)
        .def_readonly("space", &fl::WaveFunction::space)
        .def_readonly("grid_too_small", &fl::WaveFunction::grid_too_small)
        .def_property_readonly("amp",
                               [](const fl::WaveFunction& wf) {
                                   return py::array_t<std::complex<double>>(
                                       static_cast<py::ssize_t>(wf.amp.size()), wf.amp.data());
                               })
        .def("size", &fl::WaveFunction::size)
        .def("spacing", &fl::WaveFunction::spacing)
        .def("coordinates",
             [](const fl::WaveFunction& wf) {
                 py::array_t<double> a(wf.size());
                 auto r = a.mutable_unchecked<1>();
                 for (int i = 0; i < wf.size(); ++i) r(i) = wf.coordinate(i);
                 return a;
             })
        .def("__repr__", [](const fl::WaveFunction& wf) {
            std::ostringstream os;
            os << "WaveFunction(n=" << wf.size() << ", space="
               << (wf.space == fl::Space::position ? "position" : "momentum") << ")";
            return os.str();
        });

    m.def(
        "sample",
        [](const std::function<fl::complexd(double)>& f, const fl::Grid& grid) {
            return fl::sample(f, grid);
        },
        py::arg("f"), py::arg("grid"), "Pointwise evaluation of a callable on the grid");
    m.def("norm_sq", &fl::norm_sq, py::arg("wf"));
    m.def("boundary_mass", &fl::boundary_mass, py::arg("wf"));
    m.def("normalize", &fl::normalize, py::arg("wf"), py::arg("boundary_tol") = 1e-10);
    m.def("to_momentum", &fl::to_momentum, py::arg("wf"),
          py::call_guard<py::gil_scoped_release>());
    m.def("to_position", &fl::to_position, py::arg("wf"),
          py::call_guard<py::gil_scoped_release>());
    m.def("moment", &fl::moment, py::arg("wf"), py::arg("order"));

    py::class_<fl::FisherOptions>(m, "FisherOptions")
        .def(py::init<>())
        .def_readwrite("floor_rel", &fl::FisherOptions::floor_rel)
        .def_readwrite("scheme", &fl::FisherOptions::scheme)
        .def_readwrite("mass_tol", &fl::FisherOptions::mass_tol);

    py::class_<fl::FisherDiagnostics>(m, "FisherDiagnostics")
        .def_readonly("node_count", &fl::FisherDiagnostics::node_count)
        .def_readonly("regularized_mass", &fl::FisherDiagnostics::regularized_mass);

    py::class_<fl::FisherResult>(m, "FisherResult")
        .def_readonly("i_x", &fl::FisherResult::i_x)
        .def_readonly("i_p", &fl::FisherResult::i_p)
        .def_readonly("product", &fl::FisherResult::product)
        .def_readonly("estimator", &fl::FisherResult::estimator)
        .def_readonly("diagnostics", &fl::FisherResult::diagnostics)
        .def("__repr__", [](const fl::FisherResult& r) {
            std::ostringstream os;
            os << "FisherResult(i_x=" << r.i_x << ", i_p=" << r.i_p << ", product=" << r.product
               << ")";
            return os.str();
        });

    m.def(
        "fisher_density",
        [](const double_array& density, double spacing, const fl::FisherOptions& opts) {
            if (density.ndim() != 1) fl::fail_usage("density must be a one-dimensional array");
            fl::FisherDiagnostics diag;
            const double value = fl::fisher_density(
                std::span<const double>(density.data(), static_cast<size_t>(density.shape(0))),
                spacing, opts, &diag);
            return py::make_tuple(value, diag);
        },
        py::arg("density"), py::arg("spacing"), py::arg("options") = fl::FisherOptions{},
        "Fisher information of a sampled density; returns (value, diagnostics)");
    m.def("fisher_amplitude", &fl::fisher_amplitude, py::arg("wf"));
    m.def("fisher_product", &fl::fisher_product, py::arg("wf"),
          py::arg("estimator") = fl::Estimator::density_form,
          py::arg("options") = fl::FisherOptions{}, py::call_guard<py::gil_scoped_release>());

    py::class_<fl::AnalyticState>(m, "AnalyticState")
        .def(py::init([](int k, double delta, double t) {
                 return fl::AnalyticState{k, delta, t};
             }),
             py::arg("k") = 0, py::arg("delta") = 1.0, py::arg("t") = 0.0)
        .def_readwrite("k", &fl::AnalyticState::k)
        .def_readwrite("delta", &fl::AnalyticState::delta)
        .def_readwrite("t", &fl::AnalyticState::t)
        .def("__repr__", [](const fl::AnalyticState& s) {
            std::ostringstream os;
            os << "AnalyticState(k=" << s.k << ", delta=" << s.delta << ", t=" << s.t << ")";
            return os.str();
        });

    py::class_<fl::ComplexWidth>(m, "ComplexWidth")
        .def_readonly("c_squared", &fl::ComplexWidth::c_squared)
        .def("c", &fl::ComplexWidth::c);

    m.def("c_of_t", &fl::c_of_t, py::arg("delta"), py::arg("t"));
    m.def("hermite", py::overload_cast<int, double>(&fl::hermite), py::arg("k"), py::arg("y"));
    m.def("hermite", py::overload_cast<int, fl::complexd>(&fl::hermite), py::arg("k"),
          py::arg("y"));
    m.def("norm_const_sq", &fl::norm_const_sq, py::arg("k"), py::arg("delta"));
    m.def("psi_k", &fl::psi_k, py::arg("state"), py::arg("x"));
    m.def("density_x", &fl::density_x, py::arg("state"), py::arg("x"));
    m.def("density_p", &fl::density_p, py::arg("state"), py::arg("p"));
    m.def("product_closed", &fl::product_closed, py::arg("state"));
    m.def("fisher_p_exact", &fl::fisher_p_exact, py::arg("k"), py::arg("delta"));
    m.def("sample_state", &fl::sample_state, py::arg("state"), py::arg("grid"));

    m.def("default_max_n", &fl::default_max_n);

    py::class_<fl::AutoGridOptions>(m, "AutoGridOptions")
        .def(py::init<>())
        .def_readwrite("coverage", &fl::AutoGridOptions::coverage)
        .def_readwrite("mass_eps", &fl::AutoGridOptions::mass_eps)
        .def_readwrite("momentum_safety", &fl::AutoGridOptions::momentum_safety)
        .def_readwrite("max_n", &fl::AutoGridOptions::max_n);

    m.def("evolve_free", &fl::evolve_free, py::arg("wf0"), py::arg("t"),
          py::arg("boundary_tol") = 1e-10, py::call_guard<py::gil_scoped_release>());
    m.def("auto_grid", &fl::auto_grid, py::arg("wf0"), py::arg("t_max"),
          py::arg("options") = fl::AutoGridOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("regrid_to_cover", &fl::regrid_to_cover, py::arg("wf"), py::arg("extent"),
          py::arg("dx_max"), py::arg("max_n"), py::call_guard<py::gil_scoped_release>());

    py::class_<fl::EvolutionPlan>(m, "EvolutionPlan")
        .def(py::init([](const fl::Grid& grid, std::vector<double> ts, fl::RegridPolicy policy) {
                 return fl::EvolutionPlan{grid, std::move(ts), policy};
             }),
             py::arg("base_grid"), py::arg("t_values"),
             py::arg("regrid_policy") = fl::RegridPolicy::auto_expand)
        .def_readwrite("base_grid", &fl::EvolutionPlan::base_grid)
        .def_readwrite("t_values", &fl::EvolutionPlan::t_values)
        .def_readwrite("regrid_policy", &fl::EvolutionPlan::regrid_policy);

    py::class_<fl::StateSource>(m, "StateSource")
        .def_readonly("wf0", &fl::StateSource::wf0)
        .def_readonly("label", &fl::StateSource::label)
        .def_property_readonly(
            "has_evaluator", [](const fl::StateSource& s) { return bool(s.eval_t0); });

    m.def(
        "build_source",
        [](const std::string& text) { return fl::build_source(fl::parse_state_spec(text)); },
        py::arg("spec"),
        "Realize a state described by gaussian(...)/hermite(...)/superposition(...)/file(...)");
    m.def(
        "describe_spec",
        [](const std::string& text) { return fl::describe(fl::parse_state_spec(text)); },
        py::arg("spec"), "Canonical rendering of a state descriptor");
    m.def(
        "source_from_state",
        [](const fl::WaveFunction& wf, const std::string& label) {
            fl::StateSource s;
            s.wf0 = fl::normalize(wf);
            s.label = label.empty() ? "sampled state" : label;
            return s;
        },
        py::arg("wf"), py::arg("label") = "");

    py::class_<fl::SeriesOptions>(m, "SeriesOptions")
        .def(py::init<>())
        .def_readwrite("estimator", &fl::SeriesOptions::estimator)
        .def_readwrite("fisher", &fl::SeriesOptions::fisher)
        .def_readwrite("grid", &fl::SeriesOptions::grid)
        .def_readwrite("threads", &fl::SeriesOptions::threads)
        .def_readwrite("boundary_tol", &fl::SeriesOptions::boundary_tol);

    py::class_<fl::CurveEntry>(m, "CurveEntry")
        .def_readonly("t", &fl::CurveEntry::t)
        .def_readonly("i_x", &fl::CurveEntry::i_x)
        .def_readonly("i_p", &fl::CurveEntry::i_p)
        .def_readonly("product", &fl::CurveEntry::product)
        .def_readonly("analytic_product", &fl::CurveEntry::analytic_product)
        .def("rel_err", &fl::CurveEntry::rel_err)
        .def("__repr__", [](const fl::CurveEntry& e) {
            std::ostringstream os;
            os << "CurveEntry(t=" << e.t << ", product=" << e.product << ")";
            return os.str();
        });

    py::class_<fl::DecayFit>(m, "DecayFit")
        .def_readonly("amplitude", &fl::DecayFit::amplitude)
        .def_readonly("exponent", &fl::DecayFit::exponent)
        .def_readonly("t_lo", &fl::DecayFit::t_lo)
        .def_readonly("t_hi", &fl::DecayFit::t_hi)
        .def_readonly("residual", &fl::DecayFit::residual)
        .def("__repr__", [](const fl::DecayFit& f) {
            std::ostringstream os;
            os << "DecayFit(amplitude=" << f.amplitude << ", exponent=" << f.exponent << ")";
            return os.str();
        });

    py::class_<fl::CurveSeries>(m, "CurveSeries")
        .def_readonly("entries", &fl::CurveSeries::entries)
        .def_readonly("meta", &fl::CurveSeries::meta)
        .def_readonly("fit", &fl::CurveSeries::fit)
        .def("ts",
             [](const fl::CurveSeries& s) {
                 std::vector<double> v;
                 for (const auto& e : s.entries) v.push_back(e.t);
                 return to_array(v);
             })
        .def("products", [](const fl::CurveSeries& s) {
            std::vector<double> v;
            for (const auto& e : s.entries) v.push_back(e.product);
            return to_array(v);
        });

    m.def("evolve_series", &fl::evolve_series, py::arg("source"), py::arg("plan"),
          py::arg("options") = fl::SeriesOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("fit_decay", &fl::fit_decay, py::arg("series"), py::arg("t_lo"), py::arg("t_hi"));
    m.def("crossing_time", &fl::crossing_time, py::arg("series"), py::arg("threshold"),
          py::arg("reevaluate") = std::function<double(double)>{}, py::arg("refine_tol") = 0.0);

    m.def("format_double", &fl::format_double, py::arg("value"));
    m.def(
        "write_csv",
        [](const fl::CurveSeries& s, const std::filesystem::path& p) { fl::write_csv(s, p); },
        py::arg("series"), py::arg("path"));
    m.def("read_csv", &fl::read_csv, py::arg("path"));
    m.def(
        "write_json",
        [](const fl::CurveSeries& s, const std::filesystem::path& p) { fl::write_json(s, p); },
        py::arg("series"), py::arg("path"));
    m.def("load_state", &fl::load_state, py::arg("path"));

    m.def(
        "spectral_derivative",
        [](const double_array& f, double dx, int order) {
            if (f.ndim() != 1) fl::fail_usage("input must be a one-dimensional array");
            return to_array(fl::spectral_derivative(
                std::span<const double>(f.data(), static_cast<size_t>(f.shape(0))), dx, order));
        },
        py::arg("f"), py::arg("dx"), py::arg("order"));

    m.def("run_selfcheck", []() {
        std::ostringstream os;
        const bool ok = fl::run_selfcheck(os);
        return py::make_tuple(ok, os.str());
    });
}
