#include "hdspc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdspc/chart.hpp"
#include "hdspc/distributions.hpp"
#include "hdspc/errors.hpp"
#include "hdspc/io.hpp"
#include "hdspc/moments.hpp"
#include "hdspc/rmdp.hpp"
#include "hdspc/simlab.hpp"

namespace hdspc::cli {

namespace {

using nlohmann::json;

json to_json_vector(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json one_based(const std::vector<Index>& idx) {
    json out = json::array();
    for (Index i : idx) out.push_back(i + 1);
    return out;
}

Vector vector_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
        fail(ErrorKind::InputFormat, std::string("params: missing array '") + key + "'");
    }
    Vector v(static_cast<Index>(j[key].size()));
    for (Index i = 0; i < v.size(); ++i) {
        const json& e = j[key][static_cast<std::size_t>(i)];
        if (!e.is_number()) fail(ErrorKind::InputFormat, std::string("params: non-numeric entry in '") + key + "'");
        v(i) = e.get<double>();
    }
    return v;
}

double number_field(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(ErrorKind::InputFormat, std::string("params: missing number '") + key + "'");
    }
    if (!j[key].is_number()) fail(ErrorKind::InputFormat, std::string("params: '") + key + "' is not a number");
    return j[key].get<double>();
}

struct Manifest {
    RunManifest m;
    std::uint64_t digest = 0xcbf29ce484222325ULL;
    bool any_input = false;

    Manifest(std::string command, std::uint64_t seed) {
        m.command = std::move(command);
        m.seed = seed;
        m.version = library_version();
        m.started_at = utc_timestamp();
    }
    std::string read(const std::string& path) {
        std::string text = read_file(path);
        digest = fnv1a64(text, digest);
        any_input = true;
        return text;
    }
    json finish(json config) {
        m.config = std::move(config);
        m.input_digest = any_input ? hex64(digest) : "";
        m.finished_at = utc_timestamp();
        return m.to_json();
    }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file(path, text);
    }
}

void emit_sidecar(const std::string& path, const json& manifest) {
    if (path.empty() || path == "-") return;
    write_file(path + ".manifest.json", dump_json(manifest) + "\n");
}

// ----------------------------------------------------------------- estimate

struct EstimateOptions {
    std::string input;
    std::string output;
    std::string method = "rmdp";
    double alpha = 0.05;
    double gamma = -1.0;
    std::uint64_t seed = 1;
    int starts = 500;
    bool no_header = false;
    bool no_cf = false;
};

int cmd_estimate(const EstimateOptions& o, bool gamma_set, std::ostream& out) {
    Manifest man("estimate", o.seed);
    const CsvTable table = parse_csv(man.read(o.input), {!o.no_header});
    const PhaseISample x(table.values);

    json j;
    j["method"] = o.method;
    j["m"] = x.m();
    j["p"] = x.p();
    j["alpha"] = o.alpha;
    j["use_cf"] = !o.no_cf;
    j["index_base"] = 1;
    if (!table.columns.empty()) j["columns"] = table.columns;

    if (o.method == "classical") {
        const MomentEstimates est = classical_estimates(x);
        ChartParams params{est.mu_hat, est.d_hat, est.tr2_hat, est.tr3_hat, est.c_pm, o.alpha, !o.no_cf};
        const ChartResult chart = z_chart(x.data(), params);
        j["mu"] = to_json_vector(est.mu_hat);
        j["d"] = to_json_vector(est.d_hat);
        j["tr2"] = est.tr2_hat;
        j["tr3"] = est.tr3_hat;
        j["c"] = est.c_pm;
        j["flagged"] = one_based(chart.flagged_indices());
    } else {
        MdpConfig cfg;
        cfg.alpha = o.alpha;
        if (gamma_set) cfg.gamma = o.gamma;
        cfg.n_starts = o.starts;
        cfg.seed = o.seed;
        cfg.use_cf = !o.no_cf;
        const RmdpResult res = reweighted_mdp(x, cfg);
        const RobustEstimates& est = res.estimates;
        j["mu"] = to_json_vector(est.mu);
        j["d"] = to_json_vector(est.d);
        j["tr2"] = est.tr2;
        j["tr3"] = est.tr3;
        j["c"] = est.c;
        j["weights"] = est.weights;
        j["flagged"] = one_based(res.chart.flagged_indices());
        j["step3_flagged"] = one_based(res.step3.flagged_indices());
        j["refine_factor"] = res.refine_factor;
        j["mdp"] = {{"mu", to_json_vector(res.raw.mu)},
                    {"d", to_json_vector(res.raw.d)},
                    {"tr2", res.raw.tr2},
                    {"tr3", res.raw.tr3},
                    {"c", res.raw.c},
                    {"h", static_cast<Index>(res.raw.subset.size())},
                    {"subset", one_based(res.raw.subset)},
                    {"d_scale", res.raw.d_scale},
                    {"objective", res.raw.objective}};
    }
    json config = {{"input", o.input}, {"method", o.method}, {"alpha", o.alpha},
                   {"header", !o.no_header}, {"use_cf", !o.no_cf}};
    if (o.method == "rmdp") {
        config["starts"] = o.starts;
        config["gamma"] = gamma_set ? json(o.gamma) : json(nullptr);
    }
    j["manifest"] = man.finish(std::move(config));
    emit(o.output, dump_json(j) + "\n", out);
    return Ok;
}

// -------------------------------------------------------------------- chart

struct ChartOptions {
    std::string input;
    std::string params;
    std::string output;
    double alpha = 0.05;
    bool no_header = false;
    bool no_cf = false;
};

int cmd_chart(const ChartOptions& o, bool alpha_set, std::ostream& out) {
    Manifest man("chart", 0);
    const CsvTable table = parse_csv(man.read(o.input), {!o.no_header});
    json pj;
    try {
        pj = json::parse(man.read(o.params));
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InputFormat, std::string("params: ") + e.what());
    }
    ChartParams params;
    params.mu = vector_field(pj, "mu");
    params.d = vector_field(pj, "d");
    params.tr2 = number_field(pj, "tr2");
    params.tr3 = number_field(pj, "tr3");
    params.c = number_field(pj, "c", 1.0);
    params.alpha = alpha_set ? o.alpha : number_field(pj, "alpha", o.alpha);
    params.use_cf = !o.no_cf;
    if (params.mu.size() != table.values.cols()) {
        fail(ErrorKind::DimensionMismatch, "params have p=" + std::to_string(params.mu.size()) +
                                               " but the input has " +
                                               std::to_string(table.values.cols()) + " columns");
    }
    const ChartResult chart = z_chart(table.values, params);

    std::ostringstream csv;
    csv << "index,M2,U,Z,threshold,flag\n";
    for (Index i = 0; i < table.values.rows(); ++i) {
        csv << (i + 1) << ',' << format_number(chart.m2(i)) << ',' << format_number(chart.u(i)) << ','
            << format_number(chart.stats(i)) << ',' << format_number(chart.threshold) << ','
            << (chart.flags[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
    }
    emit(o.output, csv.str(), out);
    emit_sidecar(o.output, man.finish({{"input", o.input}, {"params", o.params},
                                       {"alpha", params.alpha}, {"use_cf", params.use_cf},
                                       {"header", !o.no_header}}));
    return Ok;
}

// ----------------------------------------------------------- transform-ecdf

struct EcdfOptions {
    std::string input;
    std::string reference;
    std::string output;
    bool no_header = false;
};

int cmd_transform_ecdf(const EcdfOptions& o, std::ostream& out) {
    Manifest man("transform-ecdf", 0);
    const CsvTable target = parse_csv(man.read(o.input), {!o.no_header});
    const CsvTable ref = parse_csv(man.read(o.reference), {!o.no_header});
    const Index p = target.values.cols();
    if (ref.values.cols() != p) {
        fail(ErrorKind::DimensionMismatch, "reference has " + std::to_string(ref.values.cols()) +
                                               " columns, input has " + std::to_string(p));
    }
    const Index n = ref.values.rows();
    Matrix z(target.values.rows(), p);
    for (Index j = 0; j < p; ++j) {
        std::vector<double> col(ref.values.col(j).data(), ref.values.col(j).data() + n);
        std::sort(col.begin(), col.end());
        if (col.front() == col.back()) {
            fail(ErrorKind::DegenerateVariance, "reference column " + std::to_string(j + 1) + " is constant");
        }
        for (Index i = 0; i < z.rows(); ++i) {
            const auto rank = std::upper_bound(col.begin(), col.end(), target.values(i, j)) - col.begin();
            const double u = static_cast<double>(std::max<std::ptrdiff_t>(rank, 1)) /
                             static_cast<double>(n + 1);
            z(i, j) = normal_quantile(u);
        }
    }
    std::ostringstream csv;
    if (!target.columns.empty()) {
        for (std::size_t j = 0; j < target.columns.size(); ++j) csv << (j ? "," : "") << target.columns[j];
        csv << '\n';
    }
    for (Index i = 0; i < z.rows(); ++i) {
        for (Index j = 0; j < p; ++j) csv << (j ? "," : "") << format_number(z(i, j));
        csv << '\n';
    }
    emit(o.output, csv.str(), out);
    emit_sidecar(o.output, man.finish({{"input", o.input}, {"reference", o.reference},
                                       {"header", !o.no_header}, {"rank_rule", "rank/(n+1)"}}));
    return Ok;
}

// ----------------------------------------------------------------- simulate

struct SimOptions {
    std::string out_dir = ".";
    std::string scenario = "identity";
    double a = 0.5;
    std::vector<Index> p{30};
    std::vector<Index> m{200};
    double alpha = 0.05;
    bool no_cf = false;
    bool compare = false;
    int reps = 2000;
    std::uint64_t seed = 1;
    int threads = 1;
    int starts = 500;
    int calibration_reps = 0;
    std::vector<double> rate{0.0};
    std::vector<double> delta{0.0};
    double shifted_fraction = 1.0;
    std::vector<double> a_grid{0.1, 0.3, 0.5, 0.7, 0.9};
    Index draws = 10000;
    int points = 5000;
    Index m_min = 20, m_max = 400, p_min = 10, p_max = 200;
    double upper_fraction = 0.05;
    bool unbiased_variances = false;
};

struct SeriesRow {
    std::string series;
    double x = 0.0;
    double y = 0.0;
    std::optional<double> se;
};

int resolved_threads(int t) {
    if (t > 0) return t;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ScenarioSpec make_scenario(const SimOptions& o, Index p) {
    if (o.scenario == "identity") return ScenarioSpec::identity(p);
    if (o.scenario == "ar1") return ScenarioSpec::ar1(p, o.a);
    fail(ErrorKind::InvalidArgument, "unknown scenario '" + o.scenario + "'");
}

ExperimentConfig make_config(const SimOptions& o, Index p, Index m) {
    ExperimentConfig cfg;
    cfg.scenario = make_scenario(o, p);
    cfg.m = m;
    cfg.alpha = o.alpha;
    cfg.use_cf = !o.no_cf;
    cfg.reps = o.reps;
    cfg.seed = o.seed;
    cfg.threads = resolved_threads(o.threads);
    cfg.mdp.n_starts = o.starts;
    cfg.calibration_reps = o.calibration_reps;
    cfg.contamination.shifted_fraction = o.shifted_fraction;
    return cfg;
}

json sim_config(const std::string& sub, const SimOptions& o) {
    return {{"subcommand", sub},        {"scenario", o.scenario},   {"a", o.a},
            {"p", o.p},                 {"m", o.m},                 {"alpha", o.alpha},
            {"use_cf", !o.no_cf},       {"compare", o.compare},     {"reps", o.reps},
            {"starts", o.starts},       {"calibration_reps", o.calibration_reps},
            {"rate", o.rate},           {"delta", o.delta},         {"shifted_fraction", o.shifted_fraction},
            {"a_grid", o.a_grid},       {"draws", o.draws},         {"points", o.points},
            {"m_range", {o.m_min, o.m_max}}, {"p_range", {o.p_min, o.p_max}},
            {"upper_fraction", o.upper_fraction}, {"unbiased_variances", o.unbiased_variances}};
}

void write_simulation(const std::string& sub, const SimOptions& o, Manifest& man, json results,
                      const std::vector<SeriesRow>& series, std::ostream& out) {
    std::filesystem::create_directories(o.out_dir);
    const std::filesystem::path dir(o.out_dir);
    std::ostringstream csv;
    csv << "series,x,y,mc_se\n";
    for (const auto& r : series) {
        csv << r.series << ',' << format_number(r.x) << ',' << format_number(r.y) << ','
            << (r.se ? format_number(*r.se) : "") << '\n';
    }
    write_file((dir / "series.csv").string(), csv.str());
    json report = {{"kind", sub}, {"results", std::move(results)}};
    report["manifest"] = man.finish(sim_config(sub, o));
    write_file((dir / "report.json").string(), dump_json(report) + "\n");
    out << sub << ": " << series.size() << " series points written to " << o.out_dir << "\n";
}

int cmd_simulate(const std::string& sub, const SimOptions& o, std::ostream& out) {
    Manifest man("simulate " + sub, o.seed);
    json results = json::array();
    std::vector<SeriesRow> series;
    if (sub == "falsealarm") {
        for (Index p : o.p) {
            for (Index m : o.m) {
                const ExperimentConfig cfg = make_config(o, p, m);
                const std::string suffix = o.m.size() > 1 ? ",m=" + std::to_string(m) : "";
                if (o.compare) {
                    const FalseAlarmComparison r = false_alarm_comparison(cfg);
                    results.push_back(r.with_cf.to_json());
                    results.push_back(r.without_cf.to_json());
                    series.push_back({"with_cf" + suffix, double(p), r.with_cf.estimate, r.with_cf.mc_se});
                    series.push_back({"without_cf" + suffix, double(p), r.without_cf.estimate, r.without_cf.mc_se});
                } else {
                    const ExperimentReport r = false_alarm_experiment(cfg);
                    results.push_back(r.to_json());
                    series.push_back({(o.no_cf ? "without_cf" : "with_cf") + suffix, double(p), r.estimate, r.mc_se});
                }
            }
        }
    } else if (sub == "power") {
        for (double rate : o.rate) {
            for (double delta : o.delta) {
                ExperimentConfig cfg = make_config(o, o.p.front(), o.m.front());
                cfg.contamination.rate = rate;
                cfg.contamination.delta = delta;
                const ExperimentReport r = power_experiment(cfg);
                results.push_back(r.to_json());
                series.push_back({"r=" + format_number(rate), delta, r.estimate, r.mc_se});
            }
        }
    } else if (sub == "cdf") {
        for (Index p : o.p) {
            const CdfAccuracy acc = cdf_accuracy(make_scenario(o, p), o.draws, mix_seed(o.seed, static_cast<std::uint64_t>(p)));
            results.push_back({{"p", p}, {"ks_u", acc.ks_u}, {"ks_z", acc.ks_z}, {"draws", o.draws}});
            series.push_back({"U", double(p), acc.ks_u, std::nullopt});
            series.push_back({"Z", double(p), acc.ks_z, std::nullopt});
        }
    } else if (sub == "traceratio") {
        for (Index p : o.p) {
            ExperimentConfig cfg = make_config(o, p, o.m.front());
            cfg.contamination.rate = o.rate.front();
            cfg.contamination.delta = o.delta.front();
            const TraceRatioSummary s = trace_ratio_diagnostic(cfg);
            json r = s.to_json();
            r["p"] = p;
            r["m"] = cfg.m;
            results.push_back(std::move(r));
            series.push_back({"median", double(p), s.median, std::nullopt});
            series.push_back({"q1", double(p), s.q1, std::nullopt});
            series.push_back({"q3", double(p), s.q3, std::nullopt});
        }
    } else if (sub == "sensitivity") {
        MdpConfig mdp;
        mdp.n_starts = o.starts;
        const auto cells = correlation_sensitivity(o.p.front(), o.alpha, o.a_grid, o.m, o.reps, o.seed,
                                                   resolved_threads(o.threads), mdp);
        for (const auto& c : cells) {
            results.push_back({{"a", c.a}, {"m", c.m}, {"far", c.far}, {"mc_se", c.mc_se}});
            series.push_back({"a=" + format_number(c.a), double(c.m), c.far, c.mc_se});
        }
    } else if (sub == "calibrate-k") {
        CalibrationGrid grid;
        if (o.scenario == "identity") {
            grid.kind = CovarianceKind::Identity;
        } else if (o.scenario == "ar1") {
            grid.kind = CovarianceKind::Ar1;
        } else if (o.scenario == "diagonal") {
            grid.kind = CovarianceKind::Custom;
        } else {
            fail(ErrorKind::InvalidArgument, "unknown scenario '" + o.scenario + "'");
        }
        grid.a = o.a;
        grid.m_min = o.m_min;
        grid.m_max = o.m_max;
        grid.p_min = o.p_min;
        grid.p_max = o.p_max;
        grid.n_points = o.points;
        grid.draws = o.draws;
        grid.upper_fraction = o.upper_fraction;
        grid.mle_variances = !o.unbiased_variances;
        grid.seed = o.seed;
        grid.threads = resolved_threads(o.threads);
        const KFit fit = calibrate_k(grid);
        json r = fit.to_json();
        r["grid"] = grid.to_json();
        results.push_back(std::move(r));
        for (const auto& pt : fit.points) series.push_back({"points", pt.x, pt.y, std::nullopt});
    }
    write_simulation(sub, o, man, std::move(results), series, out);
    return Ok;
}

void add_sim_options(CLI::App* app, SimOptions& o, const std::string& sub) {
    app->add_option("--out-dir", o.out_dir, "Directory for report.json and series.csv")->capture_default_str();
    app->add_option("--scenario", o.scenario, "identity | ar1" + std::string(sub == "calibrate-k" ? " | diagonal" : ""))
        ->capture_default_str();
    app->add_option("--a", o.a, "AR(1) parameter")->capture_default_str()->check(CLI::Range(0.0, 0.999999));
    app->add_option("--seed", o.seed, "Base seed")->envname("HDSPC_SEED")->capture_default_str();
    app->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->capture_default_str();
    if (sub == "calibrate-k") {
        app->add_option("--points", o.points, "Number of (m, p) pairs")->capture_default_str();
        app->add_option("--draws", o.draws, "Draws per pair")->capture_default_str();
        app->add_option("--m-min", o.m_min)->capture_default_str();
        app->add_option("--m-max", o.m_max)->capture_default_str();
        app->add_option("--p-min", o.p_min)->capture_default_str();
        app->add_option("--p-max", o.p_max)->capture_default_str();
        app->add_option("--upper-fraction", o.upper_fraction)->capture_default_str();
        app->add_flag("--unbiased-variances", o.unbiased_variances,
                      "Phase I variances with divisor m - 1 instead of m");
        return;
    }
    app->add_option("--p", o.p, "Dimension(s), comma separated")->delimiter(',')->capture_default_str();
    if (sub == "cdf") {
        app->add_option("--draws", o.draws, "In-control draws per dimension")->capture_default_str();
        return;
    }
    app->add_option("--m", o.m, "Phase I sample size(s)")->delimiter(',')->capture_default_str();
    app->add_option("--alpha", o.alpha)->capture_default_str();
    app->add_option("--reps", o.reps, "Replications")->capture_default_str();
    app->add_option("--starts", o.starts, "Random starts for the subset search")->capture_default_str();
    if (sub == "sensitivity") {
        app->add_option("--a-grid", o.a_grid, "AR(1) parameters")->delimiter(',')->capture_default_str();
        return;
    }
    app->add_flag("--no-cf", o.no_cf, "Drop the Cornish-Fisher terms");
    app->add_option("--calibration-reps", o.calibration_reps,
                    "Small-sample scaling calibration runs (0 = asymptotic factor)")
        ->capture_default_str();
    app->add_option("--shifted-fraction", o.shifted_fraction)->capture_default_str();
    app->add_option("--rate", o.rate, "Contamination rate(s)")->delimiter(',')->capture_default_str();
    app->add_option("--delta", o.delta, "Shift(s) of contaminated rows")->delimiter(',')->capture_default_str();
    if (sub == "falsealarm") app->add_flag("--compare", o.compare, "Run with and without CF on the same data");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust high-dimensional Phase I analysis", "hdspc"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    EstimateOptions est;
    CLI::App* estimate = app.add_subcommand("estimate", "Classical or RMDP estimates of a Phase I sample");
    estimate->add_option("input", est.input, "CSV, one observation per row")->required();
    estimate->add_option("-o,--output", est.output, "Output JSON (default stdout)");
    estimate->add_option("--method", est.method)->check(CLI::IsMember({"classical", "rmdp"}))->capture_default_str();
    estimate->add_option("--alpha", est.alpha)->capture_default_str();
    CLI::Option* gamma_opt = estimate->add_option("--gamma", est.gamma, "Breakdown fraction (default h = m/2 + 1)");
    estimate->add_option("--seed", est.seed)->envname("HDSPC_SEED")->capture_default_str();
    estimate->add_option("--starts", est.starts)->capture_default_str();
    estimate->add_flag("--no-header", est.no_header);
    estimate->add_flag("--no-cf", est.no_cf, "Drop the Cornish-Fisher terms");

    ChartOptions ch;
    CLI::App* chart = app.add_subcommand("chart", "Chart rows against fixed parameters");
    chart->add_option("input", ch.input)->required();
    chart->add_option("params", ch.params, "JSON with mu, d, tr2, tr3 and optionally c, alpha")->required();
    chart->add_option("-o,--output", ch.output, "Output CSV (default stdout)");
    CLI::Option* alpha_opt = chart->add_option("--alpha", ch.alpha);
    chart->add_flag("--no-header", ch.no_header);
    chart->add_flag("--no-cf", ch.no_cf);

    EcdfOptions ec;
    CLI::App* ecdf = app.add_subcommand("transform-ecdf", "Marginal normal scores against a reference sample");
    ecdf->add_option("input", ec.input)->required();
    ecdf->add_option("reference", ec.reference)->required();
    ecdf->add_option("-o,--output", ec.output, "Output CSV (default stdout)");
    ecdf->add_flag("--no-header", ec.no_header);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
    simulate->require_subcommand(1);
    const std::vector<std::string> subs{"falsealarm", "power", "cdf", "traceratio", "sensitivity", "calibrate-k"};
    std::map<std::string, SimOptions> sim_opts;
    std::map<std::string, CLI::App*> sim_apps;
    for (const auto& s : subs) {
        SimOptions& o = sim_opts[s];
        if (s == "power") {
            o.scenario = "ar1";
            o.m = {200};
            o.reps = 1000;
            o.rate = {0.1};
            o.delta = {0.0, 0.4, 1.0, 2.0};
        } else if (s == "traceratio") {
            o.p = {100};
            o.m = {100};
            o.reps = 500;
            o.delta = {1.0};
            o.shifted_fraction = 0.5;
        } else if (s == "cdf") {
            o.p = {10, 30, 50, 100, 150, 200};
        } else if (s == "sensitivity") {
            o.m = {50, 100, 200, 400};
            o.reps = 500;
        } else if (s == "calibrate-k") {
            o.scenario = "ar1";
            o.draws = 5000;
        }
        sim_apps[s] = simulate->add_subcommand(s);
        add_sim_options(sim_apps[s], o, s);
    }

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : InputFailure;
    }

    try {
        if (*estimate) return cmd_estimate(est, gamma_opt->count() > 0, out);
        if (*chart) return cmd_chart(ch, alpha_opt->count() > 0, out);
        if (*ecdf) return cmd_transform_ecdf(ec, out);
        for (const auto& s : subs) {
            if (*sim_apps[s]) return cmd_simulate(s, sim_opts[s], out);
        }
    } catch (const Error& e) {
        err << "hdspc: " << e.what() << "\n";
        return e.is_input_error() ? InputFailure : NumericFailure;
    } catch (const json::exception& e) {
        err << "hdspc: " << e.what() << "\n";
        return InputFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "hdspc: " << e.what() << "\n";
        return InputFailure;
    }
    return InputFailure;
}

}  // namespace hdspc::cli
