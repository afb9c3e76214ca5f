#include "gstwdp/error.hpp"
#include "gstwdp/fitting.hpp"
#include "gstwdp/model.hpp"
#include "gstwdp/montecarlo.hpp"
#include "gstwdp/oracle.hpp"
#include "gstwdp/perf.hpp"
#include "gstwdp/specfun.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace gstwdp;

namespace {

py::dict fit_dict(const fit::FitResult& r) {
    const fit::FitDiagnostics& d = r.diagnostics;
    py::dict diag;
    diag["grid_evaluations"] = d.grid_evaluations;
    diag["grid_failures"] = d.grid_failures;
    diag["refine_evaluations"] = d.refine_evaluations;
    diag["eval_points"] = d.eval_points;
    diag["omega_moment"] = d.omega_moment;
    diag["grid_epsilon"] = d.grid_epsilon;
    diag["refined_epsilon"] = d.refined_epsilon;
    diag["refinement_trace"] = d.refinement_trace;
    diag["warnings"] = d.warnings;
    py::dict out;
    out["params"] = r.params;
    out["epsilon"] = r.epsilon;
    out["diagnostics"] = diag;
    return out;
}

perf::QVariant variant(const std::string& name) {
    if (name == "exact") return perf::QVariant::Exact;
    if (name == "chernoff") return perf::QVariant::Chernoff;
    if (name == "chiani") return perf::QVariant::Chiani;
    throw DomainError("unknown Q variant '" + name + "' (exact, chernoff, chiani)");
}

// Broadcasts a scalar member over a numpy array (or a plain float).
template <double (model::GsTwdp::*Fn)(double) const>
py::object broadcast(const model::GsTwdp& c, py::array_t<double> x) {
    return py::vectorize([&c](double v) { return (c.*Fn)(v); })(std::move(x));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GS-TWDP composite fading: closed-form statistics, simulation, ASEP and fitting";

    auto domain_error = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PoleError>(m, "PoleError", domain_error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

    py::class_<model::ChannelParams>(m, "ChannelParams")
        .def(py::init([](double K, double gamma_ratio, double m_, double omega_s) {
                 model::ChannelParams p{K, gamma_ratio, m_, omega_s};
                 p.validate();
                 return p;
             }),
             py::arg("K") = 0.0, py::arg("gamma_ratio") = 0.0, py::arg("m") = 1.0, py::arg("omega_s") = 1.0)
        .def_readwrite("K", &model::ChannelParams::K)
        .def_readwrite("gamma_ratio", &model::ChannelParams::gamma_ratio)
        .def_readwrite("m", &model::ChannelParams::m)
        .def_readwrite("omega_s", &model::ChannelParams::omega_s)
        .def("__repr__", [](const model::ChannelParams& p) {
            return "ChannelParams(K=" + py::repr(py::float_(p.K)).cast<std::string>() +
                   ", gamma_ratio=" + py::repr(py::float_(p.gamma_ratio)).cast<std::string>() +
                   ", m=" + py::repr(py::float_(p.m)).cast<std::string>() +
                   ", omega_s=" + py::repr(py::float_(p.omega_s)).cast<std::string>() + ")";
        });

    py::class_<model::SeriesPolicy>(m, "SeriesPolicy")
        .def(py::init([](double rel_tol, int max_j) {
                 model::SeriesPolicy p{rel_tol, max_j};
                 p.validate();
                 return p;
             }),
             py::arg("rel_tol") = 1e-10, py::arg("max_j") = 200)
        .def_static("from_environment", &model::SeriesPolicy::from_environment)
        .def_readwrite("rel_tol", &model::SeriesPolicy::rel_tol)
        .def_readwrite("max_j", &model::SeriesPolicy::max_j);

    // methods broadcast over numpy arrays
    py::class_<model::GsTwdp>(m, "GsTwdp")
        .def(py::init<const model::ChannelParams&, const model::SeriesPolicy&>(), py::arg("params"),
             py::arg("policy") = model::SeriesPolicy{})
        .def_property_readonly("params", &model::GsTwdp::params)
        .def("envelope_pdf", &broadcast<&model::GsTwdp::envelope_pdf>)
        .def("envelope_cdf", &broadcast<&model::GsTwdp::envelope_cdf>)
        .def("snr_pdf", &broadcast<&model::GsTwdp::snr_pdf>)
        .def("snr_cdf", &broadcast<&model::GsTwdp::snr_cdf>)
        .def("mgf", &broadcast<&model::GsTwdp::mgf>)
        .def("moment", &model::GsTwdp::moment, py::arg("n"))
        .def("tj", [](const model::GsTwdp& c, int j) {
            if (j < 0 || j > c.weights().max_j()) throw DomainError("tj: index out of the tabulated range");
            return c.weights().t(j);
        });

    m.def("tj_coefficient", &model::tj_coefficient, py::arg("j"), py::arg("K"), py::arg("gamma_ratio"));
    m.def("delta_from_gamma", &model::delta_from_gamma, py::arg("gamma_ratio"));

    m.def(
        "sample_envelope",
        [](const model::ChannelParams& p, std::size_t n, std::uint64_t seed) {
            mc::SimConfig cfg;
            cfg.n_samples = n;
            cfg.seed = seed;
            std::vector<double> v;
            {
                py::gil_scoped_release release;
                v = mc::sample_envelope(p, cfg);
            }
            return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
        },
        py::arg("params"), py::arg("n") = 100000, py::arg("seed") = 1);

    m.def(
        "asep",
        [](const model::ChannelParams& p, const std::string& method, int mi, int mq, double beta) {
            const perf::RqamSpec spec = perf::RqamSpec::make(mi, mq, beta);
            if (method == "chernoff") return perf::asep_chernoff(spec, p);
            if (method == "chiani") return perf::asep_chiani(spec, p);
            if (method == "quad") return oracle::asep_by_quadrature(spec, p, perf::QVariant::Exact);
            throw DomainError("unknown ASEP method '" + method + "' (chernoff, chiani, quad)");
        },
        py::arg("params"), py::arg("method") = "chiani", py::arg("mi") = 4, py::arg("mq") = 2, py::arg("beta") = 1.0,
        "Average SEP of M_I x M_Q rectangular QAM; params.omega_s is the average SNR (linear).");

    m.def(
        "asep_montecarlo",
        [](const model::ChannelParams& p, int mi, int mq, double beta, std::size_t n, std::uint64_t seed,
           const std::string& q) {
            mc::SimConfig cfg;
            cfg.n_samples = n;
            cfg.seed = seed;
            const mc::McEstimate e = mc::asep_montecarlo(perf::RqamSpec::make(mi, mq, beta), p, cfg, variant(q));
            return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("params"), py::arg("mi") = 4, py::arg("mq") = 2, py::arg("beta") = 1.0, py::arg("n") = 100000,
        py::arg("seed") = 1, py::arg("q") = "exact", "Returns (mean, standard error).");

    m.def(
        "fit",
        [](std::vector<double> x, std::optional<std::vector<double>> p, std::size_t max_points, int grid_points,
           int iterations, int starts) {
            fit::FitConfig cfg;
            cfg.max_eval_points = max_points;
            cfg.grid_points = grid_points;
            cfg.refine_iterations = iterations;
            cfg.refine_starts = starts;
            const mc::EmpiricalCdf emp =
                p ? fit::empirical_from_pairs(std::move(x), std::move(*p)) : mc::empirical_cdf(std::move(x));
            fit::FitResult r;
            {
                py::gil_scoped_release release;
                r = fit::fit(emp, cfg);
            }
            return fit_dict(r);
        },
        py::arg("x"), py::arg("p") = py::none(), py::arg("max_points") = 1000, py::arg("grid_points") = 11,
        py::arg("iterations") = 300, py::arg("starts") = 3,
        "Fit to raw amplitudes, or to (amplitude, CDF) pairs when p is given.");

    m.def(
        "ks_error",
        [](std::vector<double> samples, const model::ChannelParams& p) {
            return fit::ks_error(mc::empirical_cdf(std::move(samples)), p);
        },
        py::arg("samples"), py::arg("params"));

    m.def(
        "oracle_envelope_pdf",
        [](double x, const model::ChannelParams& p) { return oracle::mixture_pdf(x, p, oracle::Conditional::Twdp); },
        py::arg("x"), py::arg("params"));
    m.def(
        "oracle_mgf", [](double s, const model::ChannelParams& p) { return oracle::mgf_by_laplace(s, p); },
        py::arg("s"), py::arg("params"));

    m.def("bessel_k", &specfun::bessel_k, py::arg("nu"), py::arg("x"));
    m.def("tricomi_u", &specfun::tricomi_u, py::arg("a"), py::arg("b"), py::arg("z"));
    m.def(
        "hyp1f2", [](double a, double b1, double b2, double z) { return specfun::hyp1f2(a, b1, b2, z); },
        py::arg("a"), py::arg("b1"), py::arg("b2"), py::arg("z"));
}
