#include "hdspc/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "hdspc/chart.hpp"
#include "hdspc/distributions.hpp"
#include "hdspc/errors.hpp"
#include "hdspc/moments.hpp"
#include "hdspc/parallel.hpp"

namespace hdspc {

namespace {

const char* kind_name(CovarianceKind kind) {
    switch (kind) {
        case CovarianceKind::Identity: return "identity";
        case CovarianceKind::Ar1: return "ar1";
        case CovarianceKind::Custom: return "custom";
    }
    return "unknown";
}

double binomial_se(double estimate, int reps) {
    const double e = std::clamp(estimate, 0.0, 1.0);
    return std::sqrt(e * (1.0 - e) / static_cast<double>(reps));
}

TracePowers ar1_traces(Index p, double a) {
    Matrix rho(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) rho(i, j) = std::pow(a, static_cast<double>(std::abs(i - j)));
    }
    return trace_powers(SymMatrix(rho));
}

// Scaling table for one (p, m, h) cell, or null when calibration is off.
std::shared_ptr<const ScalingTable> calibration_for(const ExperimentConfig& cfg) {
    if (cfg.calibration_reps <= 0) return nullptr;
    const Index h = cfg.mdp.subset_size(cfg.m);
    const double gamma = 1.0 - static_cast<double>(h) / static_cast<double>(cfg.m);
    MdpConfig base = cfg.mdp;
    const double factor = calibrate_scaling(gamma, cfg.scenario.p, cfg.m, cfg.calibration_reps,
                                            mix_seed(cfg.seed, 0xca11b4a7ULL), base);
    auto table = std::make_shared<ScalingTable>();
    table->set(cfg.scenario.p, cfg.m, h, factor);
    return table;
}

struct Replicate {
    PhaseISample sample;
    IndexSet planted;
    MdpConfig mdp;
};

Replicate make_replicate(const ExperimentConfig& cfg, std::size_t rep,
                         const std::shared_ptr<const ScalingTable>& table) {
    const std::uint64_t rep_seed = mix_seed(cfg.seed, rep);
    PhaseISample sample = sample_mvn(cfg.scenario, cfg.m, rep_seed);
    Contaminated c = contaminate(sample, cfg.contamination, mix_seed(rep_seed, 1));
    MdpConfig mdp = cfg.mdp;
    mdp.alpha = cfg.alpha;
    mdp.use_cf = cfg.use_cf;
    mdp.seed = mix_seed(rep_seed, 2);
    mdp.calibration = table;
    return {std::move(c.sample), std::move(c.planted), std::move(mdp)};
}

void require_far_reps(const ExperimentConfig& cfg) {
    if (cfg.reps < 100) fail(ErrorKind::InvalidArgument, "false-alarm experiments need at least 100 replications");
}

// Fraction of flagged rows inside (planted = true) or outside the planted set.
double flagged_fraction(const ChartResult& chart, const IndexSet& planted, bool inside) {
    std::vector<bool> is_planted(chart.flags.size(), false);
    for (Index i : planted) is_planted[static_cast<std::size_t>(i)] = true;
    std::size_t count = 0;
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < chart.flags.size(); ++i) {
        if (is_planted[i] != inside) continue;
        ++count;
        if (chart.flags[i]) ++flagged;
    }
    return count == 0 ? 0.0 : static_cast<double>(flagged) / static_cast<double>(count);
}

ExperimentReport summarize(std::string kind, std::vector<double> per_rep, nlohmann::json config) {
    ExperimentReport report;
    report.kind = std::move(kind);
    report.replications = static_cast<int>(per_rep.size());
    report.estimate = per_rep.empty() ? 0.0
                                      : std::accumulate(per_rep.begin(), per_rep.end(), 0.0) /
                                            static_cast<double>(per_rep.size());
    report.mc_se = binomial_se(report.estimate, std::max(report.replications, 1));
    report.per_rep = std::move(per_rep);
    report.config = std::move(config);
    return report;
}

}  // namespace

// ---------------------------------------------------------------- scenarios

ScenarioSpec ScenarioSpec::identity(Index p) {
    ScenarioSpec s;
    s.p = p;
    s.kind = CovarianceKind::Identity;
    return s;
}

ScenarioSpec ScenarioSpec::ar1(Index p, double a) {
    ScenarioSpec s;
    s.p = p;
    s.kind = CovarianceKind::Ar1;
    s.a = a;
    return s;
}

ScenarioSpec ScenarioSpec::custom_covariance(Matrix sigma) {
    ScenarioSpec s;
    s.p = sigma.rows();
    s.kind = CovarianceKind::Custom;
    s.custom = std::move(sigma);
    return s;
}

ScenarioSpec ScenarioSpec::diagonal_dominant(Index p, std::uint64_t seed) {
    Rng rng(seed);
    Matrix sigma(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            sigma(i, j) = std::exp(-static_cast<double>(i + 1) - static_cast<double>(j + 1));
        }
    }
    for (Index i = 0; i < p; ++i) sigma(i, i) = rng.uniform(2.0, 3.0);
    return custom_covariance(std::move(sigma));
}

void ScenarioSpec::validate() const {
    if (p < 1) fail(ErrorKind::InvalidArgument, "scenario dimension must be positive");
    if (mu.size() != 0 && mu.size() != p) {
        fail(ErrorKind::DimensionMismatch, "scenario mean length does not match p");
    }
    if (kind == CovarianceKind::Ar1 && !(a >= 0.0 && a < 1.0)) {
        fail(ErrorKind::InvalidArgument, "AR(1) parameter must lie in [0, 1)");
    }
    if (kind == CovarianceKind::Custom) {
        if (custom.rows() != p || custom.cols() != p) {
            fail(ErrorKind::DimensionMismatch, "custom covariance must be p x p");
        }
        (void)cholesky(SymMatrix(custom));
    }
}

Vector ScenarioSpec::mean() const { return mu.size() == 0 ? Vector::Zero(p) : mu; }

Matrix ScenarioSpec::covariance() const {
    switch (kind) {
        case CovarianceKind::Identity: return Matrix::Identity(p, p);
        case CovarianceKind::Ar1: {
            Matrix s(p, p);
            for (Index i = 0; i < p; ++i) {
                for (Index j = 0; j < p; ++j) s(i, j) = std::pow(a, static_cast<double>(std::abs(i - j)));
            }
            return s;
        }
        case CovarianceKind::Custom: return custom;
    }
    return {};
}

SymMatrix ScenarioSpec::correlation() const { return hdspc::correlation(SymMatrix(covariance())); }

TracePowers ScenarioSpec::true_traces() const {
    switch (kind) {
        case CovarianceKind::Identity: {
            const double pd = static_cast<double>(p);
            return {pd, pd};
        }
        case CovarianceKind::Ar1: return ar1_traces(p, a);
        case CovarianceKind::Custom: return trace_powers(correlation());
    }
    return {};
}

std::string ScenarioSpec::label() const {
    std::string out = kind_name(kind);
    if (kind == CovarianceKind::Ar1) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "(%g)", a);
        out += buf;
    }
    return out;
}

MvnSampler::MvnSampler(const ScenarioSpec& spec)
    : p_(spec.p), kind_(spec.kind), a_(spec.a), innovation_sd_(std::sqrt(1.0 - spec.a * spec.a)),
      mu_(spec.mean()) {
    spec.validate();
    if (kind_ == CovarianceKind::Custom) chol_ = cholesky(SymMatrix(spec.custom));
}

void MvnSampler::draw_row(Rng& rng, Eigen::Ref<Vector> out) const {
    switch (kind_) {
        case CovarianceKind::Identity:
            for (Index j = 0; j < p_; ++j) out(j) = rng.normal();
            break;
        case CovarianceKind::Ar1:
            // Row j of the AR(1) Cholesky factor is a^{j-k} sqrt(1-a^2) for
            // 0 < k <= j (a^j for k = 0), which this recursion reproduces.
            out(0) = rng.normal();
            for (Index j = 1; j < p_; ++j) out(j) = a_ * out(j - 1) + innovation_sd_ * rng.normal();
            break;
        case CovarianceKind::Custom: {
            Vector z(p_);
            for (Index j = 0; j < p_; ++j) z(j) = rng.normal();
            out = chol_.triangularView<Eigen::Lower>() * z;
            break;
        }
    }
    out += mu_;
}

Matrix MvnSampler::draw(Index n, Rng& rng) const {
    // Row-major scratch keeps each draw contiguous.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(n, p_);
    Vector row(p_);
    for (Index i = 0; i < n; ++i) {
        draw_row(rng, row);
        rows.row(i) = row.transpose();
    }
    return rows;
}

PhaseISample sample_mvn(const ScenarioSpec& spec, Index m, std::uint64_t seed) {
    Rng rng(seed);
    return PhaseISample(MvnSampler(spec).draw(m, rng));
}

// ------------------------------------------------------------ contamination

void ContaminationSpec::validate() const {
    if (!(rate >= 0.0 && rate <= 0.5)) fail(ErrorKind::InvalidArgument, "contamination rate must lie in [0, 0.5]");
    if (!(shifted_fraction > 0.0 && shifted_fraction <= 1.0)) {
        fail(ErrorKind::InvalidArgument, "shifted fraction must lie in (0, 1]");
    }
    if (!std::isfinite(delta)) fail(ErrorKind::InvalidArgument, "shift must be finite");
}

Index ContaminationSpec::contaminated_rows(Index m) const {
    return static_cast<Index>(std::floor(static_cast<double>(m) * rate + 1e-9));
}

Index ContaminationSpec::shifted_coordinates(Index p) const {
    return std::min<Index>(p, static_cast<Index>(std::ceil(static_cast<double>(p) * shifted_fraction - 1e-9)));
}

Contaminated contaminate(const PhaseISample& x, const ContaminationSpec& spec, std::uint64_t seed) {
    spec.validate();
    const Index k = spec.contaminated_rows(x.m());
    if (k == 0) return {x, {}};
    Rng rng(seed);
    std::vector<std::size_t> rows =
        rng.sample_without_replacement(static_cast<std::size_t>(x.m()), static_cast<std::size_t>(k));
    IndexSet planted(rows.begin(), rows.end());
    std::sort(planted.begin(), planted.end());
    Matrix data = x.data();
    const Index q = spec.shifted_coordinates(x.p());
    for (Index i : planted) data.row(i).head(q).array() += spec.delta;
    return {PhaseISample(std::move(data)), std::move(planted)};
}

// -------------------------------------------------------------- experiments

void ExperimentConfig::validate() const {
    scenario.validate();
    contamination.validate();
    if (reps < 1) fail(ErrorKind::InvalidArgument, "reps must be positive");
    if (!(alpha > 0.0 && alpha < 0.5)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 0.5)");
    MdpConfig probe = mdp;
    probe.alpha = alpha;
    probe.validate(m);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario.label();
    j["p"] = scenario.p;
    j["m"] = m;
    j["alpha"] = alpha;
    j["use_cf"] = use_cf;
    j["reps"] = reps;
    j["seed"] = seed;
    j["contamination"] = {{"rate", contamination.rate},
                          {"delta", contamination.delta},
                          {"shifted_fraction", contamination.shifted_fraction}};
    j["n_starts"] = mdp.n_starts;
    j["refine_top"] = mdp.refine_top;
    j["max_csteps"] = mdp.max_csteps;
    j["h"] = mdp.subset_size(m);
    j["calibration_reps"] = calibration_reps;
    return j;
}

nlohmann::json ExperimentReport::to_json(bool include_per_rep) const {
    nlohmann::json j;
    j["kind"] = kind;
    j["estimate"] = estimate;
    j["mc_se"] = mc_se;
    j["replications"] = replications;
    j["config"] = config;
    if (include_per_rep) j["per_rep"] = per_rep;
    return j;
}

ExperimentReport false_alarm_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    require_far_reps(cfg);
    const auto table = calibration_for(cfg);
    std::vector<double> rates(static_cast<std::size_t>(cfg.reps));
    parallel_for(rates.size(), cfg.threads, [&](std::size_t r) {
        const Replicate rep = make_replicate(cfg, r, table);
        const RmdpResult res = reweighted_mdp(rep.sample, rep.mdp);
        rates[r] = flagged_fraction(res.chart, rep.planted, false);
    });
    return summarize("false_alarm", std::move(rates), cfg.to_json());
}

FalseAlarmComparison false_alarm_comparison(const ExperimentConfig& cfg) {
    cfg.validate();
    require_far_reps(cfg);
    const auto table = calibration_for(cfg);
    std::vector<double> with(static_cast<std::size_t>(cfg.reps));
    std::vector<double> without(with.size());
    parallel_for(with.size(), cfg.threads, [&](std::size_t r) {
        Replicate rep = make_replicate(cfg, r, table);
        rep.mdp.use_cf = true;
        const RobustEstimates raw = raw_mdp(rep.sample, rep.mdp);
        with[r] = flagged_fraction(reweight_from_raw(rep.sample, raw, rep.mdp).chart, rep.planted, false);
        rep.mdp.use_cf = false;
        without[r] =
            flagged_fraction(reweight_from_raw(rep.sample, raw, rep.mdp).chart, rep.planted, false);
    });
    ExperimentConfig with_cfg = cfg;
    with_cfg.use_cf = true;
    ExperimentConfig without_cfg = cfg;
    without_cfg.use_cf = false;
    return {summarize("false_alarm", std::move(with), with_cfg.to_json()),
            summarize("false_alarm", std::move(without), without_cfg.to_json())};
}

ExperimentReport power_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.contamination.contaminated_rows(cfg.m) == 0) {
        fail(ErrorKind::InvalidArgument, "power experiment needs at least one contaminated row");
    }
    const auto table = calibration_for(cfg);
    std::vector<double> power(static_cast<std::size_t>(cfg.reps));
    parallel_for(power.size(), cfg.threads, [&](std::size_t r) {
        const Replicate rep = make_replicate(cfg, r, table);
        const RmdpResult res = reweighted_mdp(rep.sample, rep.mdp);
        power[r] = flagged_fraction(res.chart, rep.planted, true);
    });
    return summarize("power", std::move(power), cfg.to_json());
}

// ------------------------------------------------------------ CDF accuracy

double invert_cf(double u, double skew) {
    if (skew == 0.0) return u;
    // skew z^2 + z - (skew + u) = 0; take the root on the increasing branch.
    const double disc = 1.0 + 4.0 * skew * (skew + u);
    if (disc <= 0.0) return -1.0 / (2.0 * skew);
    return (-1.0 + std::sqrt(disc)) / (2.0 * skew);
}

double ks_distance_to_normal(std::vector<double> sample) {
    if (sample.empty()) fail(ErrorKind::InvalidArgument, "KS distance of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = normal_cdf(sample[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

CdfAccuracy cdf_accuracy(const ScenarioSpec& scenario, Index n_draws, std::uint64_t seed) {
    if (n_draws < 1) fail(ErrorKind::InvalidArgument, "cdf_accuracy needs draws");
    const MvnSampler sampler(scenario);
    const TracePowers tr = scenario.true_traces();
    const Vector mu = scenario.mean();
    const Vector d = scenario.covariance().diagonal();
    // Skew coefficient of the CF map omega(z) = z + skew (z^2 - 1).
    const double skew = cf_coefficient(tr.tr2, tr.tr3);
    Rng rng(seed);
    std::vector<double> u(static_cast<std::size_t>(n_draws));
    std::vector<double> z(u.size());
    Vector row(scenario.p);
    for (std::size_t i = 0; i < u.size(); ++i) {
        sampler.draw_row(rng, row);
        u[i] = u_statistic(m2_distance(row, mu, d), scenario.p, tr.tr2, 1.0);
        z[i] = invert_cf(u[i], skew);
    }
    return {ks_distance_to_normal(std::move(u)), ks_distance_to_normal(std::move(z))};
}

CdfAccuracy cdf_accuracy(Index p, Index n_draws, std::uint64_t seed) {
    return cdf_accuracy(ScenarioSpec::identity(p), n_draws, seed);
}

// ------------------------------------------------------------- trace ratio

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) fail(ErrorKind::InvalidArgument, "quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

nlohmann::json TraceRatioSummary::to_json(bool include_ratios) const {
    nlohmann::json j = {{"median", median}, {"q1", q1}, {"q3", q3}, {"iqr", iqr},
                        {"true_tr3", true_tr3}, {"replications", ratios.size()}};
    if (include_ratios) j["ratios"] = ratios;
    return j;
}

TraceRatioSummary trace_ratio_diagnostic(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto table = calibration_for(cfg);
    TraceRatioSummary out;
    out.true_tr3 = cfg.scenario.true_traces().tr3;
    out.ratios.resize(static_cast<std::size_t>(cfg.reps));
    parallel_for(out.ratios.size(), cfg.threads, [&](std::size_t r) {
        const Replicate rep = make_replicate(cfg, r, table);
        out.ratios[r] = reweighted_mdp(rep.sample, rep.mdp).estimates.tr3 / out.true_tr3;
    });
    out.median = quantile(out.ratios, 0.5);
    out.q1 = quantile(out.ratios, 0.25);
    out.q3 = quantile(out.ratios, 0.75);
    out.iqr = out.q3 - out.q1;
    return out;
}

// ------------------------------------------------------------- k calibration

void CalibrationGrid::validate() const {
    if (m_min < 4 || m_max < m_min) fail(ErrorKind::InvalidArgument, "invalid m range");
    if (p_min < 2 || p_max < p_min) fail(ErrorKind::InvalidArgument, "invalid p range");
    if (n_points < 3) fail(ErrorKind::InvalidArgument, "regression needs at least 3 points");
    if (draws < 20) fail(ErrorKind::InvalidArgument, "too few draws per point");
    if (!(upper_fraction > 0.0 && upper_fraction < 0.5)) {
        fail(ErrorKind::InvalidArgument, "upper fraction must lie in (0, 0.5)");
    }
    if (kind == CovarianceKind::Ar1 && !(a >= 0.0 && a < 1.0)) {
        fail(ErrorKind::InvalidArgument, "AR(1) parameter must lie in [0, 1)");
    }
}

nlohmann::json CalibrationGrid::to_json() const {
    return {{"scenario", kind_name(kind)}, {"a", a},           {"m_min", m_min},
            {"m_max", m_max},             {"p_min", p_min},   {"p_max", p_max},
            {"n_points", n_points},       {"draws", draws},   {"upper_fraction", upper_fraction},
            {"mle_variances", mle_variances}, {"seed", seed}};
}

nlohmann::json KFit::to_json(bool include_points) const {
    nlohmann::json j = {{"slope", slope}, {"intercept", intercept}, {"r_squared", r_squared},
                        {"points", points.size()}};
    if (include_points) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& pt : points) pts.push_back({{"m", pt.m}, {"p", pt.p}, {"x", pt.x}, {"y", pt.y}});
        j["data"] = std::move(pts);
    }
    return j;
}

CalibrationPoint calibration_point(const ScenarioSpec& scenario, Index m, Index draws,
                                   double upper_fraction, bool mle_variances, Rng& rng) {
    const Index p = scenario.p;
    const MvnSampler sampler(scenario);
    const TracePowers truth = scenario.true_traces();

    // Steps 1-2: a Phase I sample and its classical estimates.
    const Matrix phase1 = sampler.draw(m, rng);
    const Vector mu_hat = sample_mean(phase1);
    const SymMatrix s = sample_covariance(phase1);
    const double md = static_cast<double>(m);
    const Vector d_hat = mle_variances ? Vector(s.diagonal() * ((md - 1.0) / md)) : s.diagonal();
    const double tr2_hat = est_tr_rho2(correlation(s), m);

    // Step 3: U from estimated parameters on fresh draws.
    std::vector<double> a1(static_cast<std::size_t>(draws));
    Vector row(p);
    for (auto& u : a1) {
        sampler.draw_row(rng, row);
        u = u_statistic(m2_distance(row, mu_hat, d_hat), p, truth.tr2, 1.0);
    }
    // Step 4: CF-adjusted standard normal draws.
    const double skew = cf_coefficient(truth.tr2, truth.tr3);
    std::vector<double> a2(a1.size());
    for (auto& v : a2) {
        const double z = rng.normal();
        v = z + skew * (z * z - 1.0);
    }
    std::sort(a1.begin(), a1.end());
    std::sort(a2.begin(), a2.end());

    // Step 5: average of the ratio over the upper tail of the sorted vectors.
    const auto first = static_cast<std::size_t>(
        std::ceil((1.0 - upper_fraction) * static_cast<double>(draws) - 1e-9));
    double sum = 0.0;
    for (std::size_t i = first; i < a1.size(); ++i) sum += a1[i] / a2[i];
    const double c = sum / static_cast<double>(a1.size() - first);

    return {m, p, static_cast<double>(p) / (md * std::sqrt(2.0 * tr2_hat)), c - 1.0};
}

KFit calibrate_k(const CalibrationGrid& grid) {
    grid.validate();
    KFit fit;
    fit.points.resize(static_cast<std::size_t>(grid.n_points));
    parallel_for(fit.points.size(), grid.threads, [&](std::size_t k) {
        Rng rng = Rng::stream(grid.seed, k);
        const Index m = rng.between(grid.m_min, grid.m_max);
        const Index p = rng.between(grid.p_min, grid.p_max);
        ScenarioSpec scenario;
        switch (grid.kind) {
            case CovarianceKind::Identity: scenario = ScenarioSpec::identity(p); break;
            case CovarianceKind::Ar1: scenario = ScenarioSpec::ar1(p, grid.a); break;
            case CovarianceKind::Custom:
                scenario = ScenarioSpec::diagonal_dominant(p, mix_seed(grid.seed, k + 0x3c6ef372ULL));
                break;
        }
        fit.points[k] = calibration_point(scenario, m, grid.draws, grid.upper_fraction, grid.mle_variances, rng);
    });

    const double n = static_cast<double>(fit.points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& pt : fit.points) {
        mx += pt.x;
        my += pt.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& pt : fit.points) {
        sxx += (pt.x - mx) * (pt.x - mx);
        sxy += (pt.x - mx) * (pt.y - my);
        syy += (pt.y - my) * (pt.y - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return fit;
}

std::vector<SensitivityCell> correlation_sensitivity(Index p, double alpha,
                                                     const std::vector<double>& a_grid,
                                                     const std::vector<Index>& m_grid, int reps,
                                                     std::uint64_t seed, int threads,
                                                     const MdpConfig& mdp) {
    std::vector<SensitivityCell> cells;
    std::uint64_t cell = 0;
    for (double a : a_grid) {
        for (Index m : m_grid) {
            ExperimentConfig cfg;
            cfg.scenario = a == 0.0 ? ScenarioSpec::identity(p) : ScenarioSpec::ar1(p, a);
            cfg.m = m;
            cfg.alpha = alpha;
            cfg.reps = reps;
            cfg.seed = mix_seed(seed, cell++);
            cfg.threads = threads;
            cfg.mdp = mdp;
            const ExperimentReport r = false_alarm_experiment(cfg);
            cells.push_back({a, m, r.estimate, r.mc_se});
        }
    }
    return cells;
}

}  // namespace hdspc
