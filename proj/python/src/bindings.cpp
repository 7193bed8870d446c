#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdspc/chart.hpp"
#include "hdspc/errors.hpp"
#include "hdspc/io.hpp"
#include "hdspc/moments.hpp"
#include "hdspc/oracle.hpp"
#include "hdspc/rmdp.hpp"
#include "hdspc/simlab.hpp"

namespace py = pybind11;
using namespace hdspc;

namespace {

ScenarioSpec scenario_from(const std::string& name, Index p, double a) {
    if (name == "identity") return ScenarioSpec::identity(p);
    if (name == "ar1") return ScenarioSpec::ar1(p, a);
    fail(ErrorKind::InvalidArgument, "unknown scenario '" + name + "' (identity or ar1)");
}

MdpConfig mdp_config(double alpha, std::optional<double> gamma, int n_starts, std::uint64_t seed,
                     bool use_cf) {
    MdpConfig cfg;
    cfg.alpha = alpha;
    cfg.gamma = gamma;
    cfg.n_starts = n_starts;
    cfg.seed = seed;
    cfg.use_cf = use_cf;
    return cfg;
}

ExperimentConfig experiment(const std::string& scenario, Index p, double a, Index m, double alpha, int reps,
                            std::uint64_t seed, int threads, bool use_cf, int n_starts) {
    ExperimentConfig cfg;
    cfg.scenario = scenario_from(scenario, p, a);
    cfg.m = m;
    cfg.alpha = alpha;
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.use_cf = use_cf;
    cfg.mdp.n_starts = n_starts;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Robust Phase I charting for high-dimensional data";
    m.attr("__version__") = library_version();

    // Numeric failures (nonpositive trace estimate, no rows left) and bad
    // input both surface as hdspc.Error; .kind gives the category name.
    static PyObject* error_type = PyErr_NewException("hdspc.Error", PyExc_ValueError, nullptr);
    m.add_object("Error", py::handle(error_type));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error_type)(e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    py::class_<MomentEstimates>(m, "MomentEstimates")
        .def_readonly("mu", &MomentEstimates::mu_hat)
        .def_readonly("d", &MomentEstimates::d_hat)
        .def_readonly("tr2", &MomentEstimates::tr2_hat)
        .def_readonly("tr3", &MomentEstimates::tr3_hat)
        .def_readonly("c", &MomentEstimates::c_pm)
        .def_readonly("m", &MomentEstimates::m_eff)
        .def_property_readonly("correlation", [](const MomentEstimates& e) { return e.r.dense(); });

    py::class_<RobustEstimates>(m, "RobustEstimates")
        .def_readonly("mu", &RobustEstimates::mu)
        .def_readonly("d", &RobustEstimates::d)
        .def_readonly("tr2", &RobustEstimates::tr2)
        .def_readonly("tr3", &RobustEstimates::tr3)
        .def_readonly("c", &RobustEstimates::c)
        .def_readonly("weights", &RobustEstimates::weights)
        .def_readonly("subset", &RobustEstimates::subset, "0-based row indices")
        .def_readonly("d_scale", &RobustEstimates::d_scale)
        .def_readonly("objective", &RobustEstimates::objective)
        .def_property_readonly("stage", [](const RobustEstimates& e) { return to_string(e.stage); });

    py::class_<ChartResult>(m, "ChartResult")
        .def_property_readonly("kind", [](const ChartResult& r) { return to_string(r.kind); })
        .def_readonly("m2", &ChartResult::m2)
        .def_readonly("u", &ChartResult::u)
        .def_readonly("stats", &ChartResult::stats)
        .def_readonly("threshold", &ChartResult::threshold)
        .def_readonly("flags", &ChartResult::flags)
        .def_property_readonly("flagged", &ChartResult::flagged_indices, "0-based row indices");

    py::class_<RmdpResult>(m, "RmdpResult")
        .def_readonly("raw", &RmdpResult::raw)
        .def_readonly("step3", &RmdpResult::step3)
        .def_readonly("estimates", &RmdpResult::estimates)
        .def_readonly("chart", &RmdpResult::chart)
        .def_readonly("refine_factor", &RmdpResult::refine_factor);

    m.def("classical_estimates",
          [](const Matrix& x) { return classical_estimates(PhaseISample(x)); }, py::arg("x"));
    m.def(
        "raw_mdp",
        [](const Matrix& x, double alpha, std::optional<double> gamma, int n_starts, std::uint64_t seed) {
            return raw_mdp(PhaseISample(x), mdp_config(alpha, gamma, n_starts, seed, true));
        },
        py::arg("x"), py::arg("alpha") = 0.05, py::arg("gamma") = py::none(), py::arg("n_starts") = 500,
        py::arg("seed") = 0);
    m.def(
        "rmdp",
        [](const Matrix& x, double alpha, std::optional<double> gamma, int n_starts, std::uint64_t seed,
           bool use_cf) {
            py::gil_scoped_release release;
            return reweighted_mdp(PhaseISample(x), mdp_config(alpha, gamma, n_starts, seed, use_cf));
        },
        py::arg("x"), py::arg("alpha") = 0.05, py::arg("gamma") = py::none(), py::arg("n_starts") = 500,
        py::arg("seed") = 0, py::arg("use_cf") = true);

    m.def(
        "z_chart",
        [](const Matrix& rows, const Vector& mu, const Vector& d, double tr2, double tr3, double c,
           double alpha, bool use_cf) {
            ChartParams p;
            p.mu = mu;
            p.d = d;
            p.tr2 = tr2;
            p.tr3 = tr3;
            p.c = c;
            p.alpha = alpha;
            p.use_cf = use_cf;
            return z_chart(rows, p);
        },
        py::arg("rows"), py::arg("mu"), py::arg("d"), py::arg("tr2"), py::arg("tr3"), py::arg("c") = 1.0,
        py::arg("alpha") = 0.05, py::arg("use_cf") = true);

    m.def("est_tr_rho2", [](const Matrix& r, Index m_eff) { return est_tr_rho2(SymMatrix(r), m_eff); },
          py::arg("r"), py::arg("m"));
    m.def("est_tr_rho3", [](const Matrix& r, Index m_eff) { return est_tr_rho3(SymMatrix(r), m_eff); },
          py::arg("r"), py::arg("m"));
    m.def("correction_c", &correction_c, py::arg("p"), py::arg("m"), py::arg("tr2"));
    m.def("cf_coefficient", &cf_coefficient, py::arg("tr2"), py::arg("tr3"));
    m.def("trace_power", [](const Matrix& a, int k) { return trace_power(SymMatrix(a), k); }, py::arg("a"),
          py::arg("k"));
    m.def("scaling_factor", [](double gamma, Index p, Index m_) { return scaling_factor(gamma, p, m_); },
          py::arg("gamma"), py::arg("p"), py::arg("m"));
    m.def("asymptotic_power", &asymptotic_power, py::arg("delta"), py::arg("d"), py::arg("tr2"),
          py::arg("alpha"));
    m.def("asymptotic_type2_error", &asymptotic_type2_error, py::arg("delta"), py::arg("d"), py::arg("tr2"),
          py::arg("alpha"));
    m.def("exhaustive_mdp",
          [](const Matrix& x, Index h) {
              const auto r = oracle::exhaustive_mdp(x, h);
              return py::make_tuple(r.subset, r.objective);
          },
          py::arg("x"), py::arg("h"), "(subset, objective) of the best h-subset, 0-based");

    m.def(
        "sample",
        [](const std::string& scenario, Index p, Index m_, double a, std::uint64_t seed) {
            return sample_mvn(scenario_from(scenario, p, a), m_, seed).data();
        },
        py::arg("scenario"), py::arg("p"), py::arg("m"), py::arg("a") = 0.5, py::arg("seed") = 1);

    m.def(
        "false_alarm_rate",
        [](const std::string& scenario, Index p, Index m_, double alpha, int reps, double a, std::uint64_t seed,
           int threads, bool use_cf, int n_starts) {
            const ExperimentConfig cfg = experiment(scenario, p, a, m_, alpha, reps, seed, threads, use_cf, n_starts);
            py::gil_scoped_release release;
            const ExperimentReport r = false_alarm_experiment(cfg);
            return std::make_pair(r.estimate, r.mc_se);
        },
        py::arg("scenario"), py::arg("p"), py::arg("m") = 200, py::arg("alpha") = 0.05, py::arg("reps") = 2000,
        py::arg("a") = 0.5, py::arg("seed") = 1, py::arg("threads") = 1, py::arg("use_cf") = true,
        py::arg("n_starts") = 500, "(estimate, Monte Carlo standard error)");
    m.def(
        "power",
        [](const std::string& scenario, Index p, Index m_, double rate, double delta, double alpha, int reps,
           double a, std::uint64_t seed, int threads, int n_starts) {
            ExperimentConfig cfg = experiment(scenario, p, a, m_, alpha, reps, seed, threads, true, n_starts);
            cfg.contamination = {rate, delta, 1.0};
            py::gil_scoped_release release;
            const ExperimentReport r = power_experiment(cfg);
            return std::make_pair(r.estimate, r.mc_se);
        },
        py::arg("scenario"), py::arg("p"), py::arg("m") = 200, py::arg("rate") = 0.1, py::arg("delta") = 1.0,
        py::arg("alpha") = 0.05, py::arg("reps") = 1000, py::arg("a") = 0.5, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("n_starts") = 500, "(estimate, Monte Carlo standard error)");
    m.def(
        "cdf_accuracy",
        [](Index p, Index draws, std::uint64_t seed) {
            const CdfAccuracy r = cdf_accuracy(p, draws, seed);
            return std::make_pair(r.ks_u, r.ks_z);
        },
        py::arg("p"), py::arg("draws") = 10000, py::arg("seed") = 1, "(KS of U, KS of Z)");
}
