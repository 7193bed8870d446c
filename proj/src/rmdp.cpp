#include "hdspc/rmdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hdspc/distributions.hpp"
#include "hdspc/errors.hpp"
#include "hdspc/moments.hpp"
#include "hdspc/random.hpp"

namespace hdspc {

namespace {

struct SubsetMoments {
    Vector mean;
    Vector var;
};

SubsetMoments subset_moments(const Matrix& x, const IndexSet& subset) {
    const Matrix sub = x(subset, Eigen::all);
    SubsetMoments out;
    out.mean = sub.colwise().mean().transpose();
    out.var = ((sub.rowwise() - out.mean.transpose()).array().square().colwise().sum() /
               static_cast<double>(sub.rows() - 1))
                  .transpose();
    return out;
}

bool has_zero_variance(const Vector& var) { return !(var.array() > 0.0).all(); }

[[noreturn]] void degenerate_subset(const Vector& var, Index size) {
    Index j = 0;
    while (j < var.size() && var(j) > 0.0) ++j;
    fail(ErrorKind::DegenerateVariance, "column " + std::to_string(j + 1) +
                                            " is constant on a subset of " +
                                            std::to_string(size) + " rows");
}

double log_diag_product(const Vector& var) { return var.array().log().sum(); }

struct SubsetTraces {
    Vector mean;
    Vector var;
    TracePowers traces;
};

// Mean, variances and tr(R^k) for the rows in `subset`.
SubsetTraces subset_traces(const Matrix& x, const IndexSet& subset) {
    const Matrix sub = x(subset, Eigen::all);
    const double n = static_cast<double>(sub.rows());
    SubsetTraces out;
    out.mean = sub.colwise().mean().transpose();
    Matrix centered = sub.rowwise() - out.mean.transpose();
    out.var = (centered.array().square().colwise().sum() / (n - 1.0)).transpose();
    if (has_zero_variance(out.var)) degenerate_subset(out.var, sub.rows());
    centered.array().rowwise() /= out.var.cwiseSqrt().transpose().array();
    Matrix r = centered.transpose() * centered / (n - 1.0);
    r.diagonal().setOnes();
    out.traces = trace_powers(SymMatrix(r));
    return out;
}

IndexSet weights_to_subset(const std::vector<int>& weights) {
    IndexSet out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0) out.push_back(static_cast<Index>(i));
    }
    return out;
}

// Divisor applied to M^2(mu~, D~) so that the trimmed variances are brought
// back to the in-control scale.
double refinement_factor(double alpha, Index p, double tr2) {
    const double z = upper_quantile(alpha / 2.0);
    return 1.0 + normal_pdf(z) / static_cast<double>(p) / (1.0 - alpha / 2.0) *
                     std::sqrt(2.0 * tr2);
}

struct Start {
    IndexSet subset;
    double objective = 0.0;
    std::size_t rank = 0;
};

}  // namespace

void ScalingTable::set(Index p, Index m, Index h, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        fail(ErrorKind::InvalidArgument, "scaling factor must be positive and finite");
    }
    entries_[{p, m, h}] = factor;
}

std::optional<double> ScalingTable::find(Index p, Index m, Index h) const {
    const auto it = entries_.find({p, m, h});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

const char* to_string(EstimateStage stage) noexcept {
    return stage == EstimateStage::RawMdp ? "raw-MDP" : "reweighted";
}

Index MdpConfig::subset_size(Index m) const {
    if (!gamma) return m / 2 + 1;
    return static_cast<Index>(std::floor(static_cast<double>(m) * (1.0 - *gamma) + 1e-9));
}

void MdpConfig::validate(Index m) const {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        fail(ErrorKind::InvalidArgument, "alpha must lie strictly inside (0, 0.5)");
    }
    if (gamma && !(*gamma >= 0.0 && *gamma <= 0.5)) {
        fail(ErrorKind::InvalidArgument, "gamma must lie in [0, 0.5]");
    }
    if (n_starts < 1) fail(ErrorKind::InvalidArgument, "n_starts must be positive");
    if (max_csteps < 1) fail(ErrorKind::InvalidArgument, "max_csteps must be positive");
    if (refine_top < 0) fail(ErrorKind::InvalidArgument, "refine_top must be >= 0");
    const Index h = subset_size(m);
    if (h < 3 || h > m) {
        fail(ErrorKind::InvalidArgument, "subset size h=" + std::to_string(h) +
                                             " must satisfy 3 <= h <= m=" + std::to_string(m));
    }
}

Index RobustEstimates::weight_sum() const {
    return std::accumulate(weights.begin(), weights.end(), Index{0});
}

double mdp_objective(const Matrix& x, const IndexSet& subset) {
    if (subset.size() < 3) fail(ErrorKind::InvalidArgument, "MDP subset needs at least 3 rows");
    const SubsetMoments mom = subset_moments(x, subset);
    if (has_zero_variance(mom.var)) degenerate_subset(mom.var, static_cast<Index>(subset.size()));
    return log_diag_product(mom.var);
}

IndexSet c_step(const Matrix& x, const Vector& mu, const Vector& d, Index h) {
    const Index m = x.rows();
    if (h < 1 || h > m) fail(ErrorKind::InvalidArgument, "c_step needs 1 <= h <= m");
    const Vector dist = m2_distances(x, mu, d);
    IndexSet order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    auto closer = [&](Index a, Index b) {
        return dist(a) < dist(b) || (dist(a) == dist(b) && a < b);
    };
    std::nth_element(order.begin(), order.begin() + (h - 1), order.end(), closer);
    order.resize(static_cast<std::size_t>(h));
    std::sort(order.begin(), order.end());
    return order;
}

ConcentrationPath concentrate(const Matrix& x, IndexSet start, Index h, int max_steps) {
    ConcentrationPath path;
    std::sort(start.begin(), start.end());
    SubsetMoments mom = subset_moments(x, start);
    if (has_zero_variance(mom.var)) degenerate_subset(mom.var, static_cast<Index>(start.size()));
    path.subset = std::move(start);
    path.objective = log_diag_product(mom.var);
    path.objectives.push_back(path.objective);
    while (path.steps < max_steps) {
        IndexSet next = c_step(x, mom.mean, mom.var, h);
        ++path.steps;
        if (next == path.subset) break;
        mom = subset_moments(x, next);
        if (has_zero_variance(mom.var)) degenerate_subset(mom.var, h);
        path.subset = std::move(next);
        path.objective = log_diag_product(mom.var);
        path.objectives.push_back(path.objective);
    }
    return path;
}

double scaling_factor(double gamma, Index p, Index m, const ScalingTable* calibration) {
    if (!(gamma >= 0.0 && gamma <= 0.5)) {
        fail(ErrorKind::InvalidArgument, "gamma must lie in [0, 0.5]");
    }
    if (p < 1 || m < 1) fail(ErrorKind::InvalidArgument, "scaling factor needs p, m >= 1");
    const double coverage = 1.0 - gamma;
    double factor = 1.0;
    if (coverage < 1.0) {
        const double pd = static_cast<double>(p);
        const double q = chi_squared_quantile(coverage, pd);
        factor = coverage / chi_squared_cdf(q, pd + 2.0);
    }
    if (calibration != nullptr) {
        const auto h = static_cast<Index>(std::floor(static_cast<double>(m) * coverage + 1e-9));
        factor *= calibration->lookup(p, m, h);
    }
    return factor;
}

RobustEstimates raw_mdp(const PhaseISample& sample, const MdpConfig& cfg) {
    const Matrix& x = sample.data();
    const Index m = sample.m();
    const Index p = sample.p();
    cfg.validate(m);
    const Index h = cfg.subset_size(m);
    constexpr int initial_steps = 2;

    std::vector<Start> starts(static_cast<std::size_t>(cfg.n_starts));
    for (int s = 0; s < cfg.n_starts; ++s) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(s));
        // Elemental start: 3 rows, grown one random row at a time while some
        // column is still constant on it.
        std::vector<std::size_t> draw =
            rng.sample_without_replacement(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
        IndexSet elemental(draw.begin(), draw.begin() + 3);
        SubsetMoments mom = subset_moments(x, elemental);
        std::size_t next = 3;
        while (has_zero_variance(mom.var) && next < draw.size()) {
            elemental.push_back(static_cast<Index>(draw[next++]));
            mom = subset_moments(x, elemental);
        }
        if (has_zero_variance(mom.var)) degenerate_subset(mom.var, m);
        IndexSet expanded = c_step(x, mom.mean, mom.var, h);
        const int steps = cfg.refine_top == 0 ? cfg.max_csteps : initial_steps;
        ConcentrationPath path = concentrate(x, std::move(expanded), h, steps);
        starts[static_cast<std::size_t>(s)] = {std::move(path.subset), path.objective,
                                               static_cast<std::size_t>(s)};
    }

    auto better = [](const Start& a, const Start& b) {
        return a.objective < b.objective || (a.objective == b.objective && a.rank < b.rank);
    };
    std::sort(starts.begin(), starts.end(), better);
    if (cfg.refine_top > 0) {
        const std::size_t keep = std::min(starts.size(), static_cast<std::size_t>(cfg.refine_top));
        starts.resize(keep);
        for (Start& st : starts) {
            ConcentrationPath path = concentrate(x, st.subset, h, cfg.max_csteps);
            st.subset = std::move(path.subset);
            st.objective = path.objective;
        }
        std::sort(starts.begin(), starts.end(), better);
    }
    const Start& best = starts.front();

    RobustEstimates est;
    est.stage = EstimateStage::RawMdp;
    est.subset = best.subset;
    est.objective = best.objective;
    est.weights.assign(static_cast<std::size_t>(m), 0);
    for (Index i : est.subset) est.weights[static_cast<std::size_t>(i)] = 1;

    const SubsetTraces st = subset_traces(x, est.subset);
    const double gamma_eff = 1.0 - static_cast<double>(h) / static_cast<double>(m);
    est.d_scale = scaling_factor(gamma_eff, p, m, cfg.calibration.get());
    est.mu = st.mean;
    est.d = st.var * est.d_scale;
    const double hd = static_cast<double>(h);
    est.tr2 = est_tr_rho2_from(st.traces.tr2, p, hd);
    est.tr3 = est_tr_rho3_from(st.traces.tr2, st.traces.tr3, p, hd);
    est.c = correction_c(p, static_cast<double>(m), est.tr2);
    return est;
}

RmdpResult reweight_from_raw(const PhaseISample& sample, const RobustEstimates& raw,
                             const MdpConfig& cfg) {
    const Matrix& x = sample.data();
    const Index m = sample.m();
    const Index p = sample.p();
    cfg.validate(m);
    const double md = static_cast<double>(m);
    const double z_half = upper_quantile(cfg.alpha / 2.0);
    const double z_full = upper_quantile(cfg.alpha);

    RmdpResult out;
    out.raw = raw;

    // Step 3: flag against the raw estimates at level alpha/2.
    out.step3 = chart_from_distances(m2_distances(x, raw.mu, raw.d), p, raw.tr2, raw.tr3, raw.c,
                                     z_half, cfg.use_cf, ChartKind::RmdpStep3);

    // Step 4: weights and the estimates of the retained rows.
    std::vector<int> weights(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) weights[static_cast<std::size_t>(i)] = out.step3.flags[i] ? 0 : 1;
    IndexSet kept = weights_to_subset(weights);
    if (kept.size() < 2) {
        fail(ErrorKind::AllRowsFlagged, std::to_string(m - static_cast<Index>(kept.size())) +
                                            " of " + std::to_string(m) +
                                            " rows flagged at the first reweighting stage");
    }
    const SubsetTraces first = subset_traces(x, kept);
    const double n1 = static_cast<double>(kept.size());

    // Step 5: reweighted traces, refined distances, final rule at level alpha.
    const double tr2_1 = est_tr_rho2_from(first.traces.tr2, p, n1);
    const double tr3_1 = est_tr_rho3_from(first.traces.tr2, first.traces.tr3, p, n1);
    out.refine_factor = refinement_factor(cfg.alpha, p, tr2_1);
    const Vector d_refined = first.var * out.refine_factor;
    const double c_tilde = correction_c(p, md, tr2_1);
    out.chart = chart_from_distances(m2_distances(x, first.mean, d_refined), p, tr2_1, tr3_1,
                                     c_tilde, z_full, cfg.use_cf, ChartKind::RmdpStep5);

    // Step 6: final weights and estimates.
    RobustEstimates& est = out.estimates;
    est.stage = EstimateStage::Reweighted;
    est.weights.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) est.weights[static_cast<std::size_t>(i)] = out.chart.flags[i] ? 0 : 1;
    est.subset = weights_to_subset(est.weights);
    if (est.subset.size() < 2) {
        fail(ErrorKind::AllRowsFlagged, std::to_string(m - static_cast<Index>(est.subset.size())) +
                                            " of " + std::to_string(m) +
                                            " rows flagged at the final stage");
    }
    const SubsetTraces last = subset_traces(x, est.subset);
    const double n2 = static_cast<double>(est.subset.size());
    est.mu = last.mean;
    est.tr2 = est_tr_rho2_from(last.traces.tr2, p, n2);
    est.tr3 = est_tr_rho3_from(last.traces.tr2, last.traces.tr3, p, n2);
    est.d_scale = refinement_factor(cfg.alpha, p, est.tr2);
    est.d = last.var * est.d_scale;
    est.c = correction_c(p, md, est.tr2);
    return out;
}

RmdpResult reweighted_mdp(const PhaseISample& x, const MdpConfig& cfg) {
    return reweight_from_raw(x, raw_mdp(x, cfg), cfg);
}

double calibrate_scaling(double gamma, Index p, Index m, int reps, std::uint64_t seed,
                         const MdpConfig& base) {
    if (reps < 200) fail(ErrorKind::InvalidArgument, "calibration needs at least 200 replications");
    MdpConfig cfg = base;
    cfg.gamma = gamma;
    cfg.calibration.reset();
    cfg.validate(m);
    std::vector<double> ratios(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));
        Matrix data(m, p);
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j < p; ++j) data(i, j) = rng.normal();
        }
        cfg.seed = mix_seed(seed, static_cast<std::uint64_t>(r) + 0x5bd1e995ULL);
        const RobustEstimates est = raw_mdp(PhaseISample(std::move(data)), cfg);
        ratios[static_cast<std::size_t>(r)] = est.d.mean();
    }
    const auto mid = ratios.begin() + static_cast<std::ptrdiff_t>(ratios.size() / 2);
    std::nth_element(ratios.begin(), mid, ratios.end());
    double median = *mid;
    if (ratios.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(ratios.begin(), mid));
    }
    return 1.0 / median;
}

}  // namespace hdspc
