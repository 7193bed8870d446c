#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "hdspc/errors.hpp"
#include "hdspc/oracle.hpp"
#include "hdspc/rmdp.hpp"
#include "hdspc/simlab.hpp"

using namespace hdspc;
using hdspc::test::gaussian;

namespace {

MdpConfig config(std::uint64_t seed, int starts = 500) {
    MdpConfig cfg;
    cfg.seed = seed;
    cfg.n_starts = starts;
    return cfg;
}

bool disjoint(const IndexSet& a, const IndexSet& b) {
    for (Index i : a) {
        if (std::find(b.begin(), b.end(), i) != b.end()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("mdp_objective hand cases") {
    Matrix x(3, 2);
    const double r2 = std::sqrt(2.0), rh = std::sqrt(0.5);
    x << 0, 0, r2, rh, 2 * r2, 2 * rh;
    CHECK(std::abs(mdp_objective(x, {0, 1, 2})) < 1e-12);

    Matrix one(3, 1);
    one << 0, 1, 2;
    CHECK(std::abs(mdp_objective(one, {0, 1, 2})) < 1e-15);

    CHECK_THROWS_AS(mdp_objective(x, {0, 1}), Error);
    Matrix flat(4, 2);
    flat << 1, 5, 2, 5, 3, 5, 4, 6;
    try {
        mdp_objective(flat, {0, 1, 2});
        FAIL("constant subset column accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateVariance);
    }
}

TEST_CASE("c_step keeps the closest rows") {
    Matrix x = gaussian(20, 4, 200);
    x.row(13).setConstant(50.0);
    for (Index h = 3; h < 20; ++h) {
        const IndexSet s = c_step(x, Vector::Zero(4), Vector::Ones(4), h);
        CHECK(static_cast<Index>(s.size()) == h);
        CHECK(std::is_sorted(s.begin(), s.end()));
        CHECK(std::find(s.begin(), s.end(), 13) == s.end());
    }
    IndexSet all(20);
    std::iota(all.begin(), all.end(), Index{0});
    CHECK(c_step(x, Vector::Zero(4), Vector::Ones(4), 20) == all);

    // equal distances resolve to lower row indices
    const Matrix ties = Matrix::Ones(6, 2);
    CHECK(c_step(ties, Vector::Zero(2), Vector::Ones(2), 3) == IndexSet{0, 1, 2});
}

TEST_CASE("exhaustive optimum is a C-step fixed point") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Matrix x = gaussian(12, 3, mix_seed(201, seed));
        const oracle::ExhaustiveMdp best = oracle::exhaustive_mdp(x, 7);
        const ConcentrationPath path = concentrate(x, best.subset, 7, 50);
        CHECK(path.subset == best.subset);
        CHECK(path.steps == 1);
    }
}

TEST_CASE("C-steps never increase the objective") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matrix x = gaussian(40, 6, mix_seed(202, seed));
        Rng rng(seed);
        auto draw = rng.sample_without_replacement(40, 21);
        const ConcentrationPath path = concentrate(x, IndexSet(draw.begin(), draw.end()), 21, 50);
        CHECK(path.steps <= 50);
        for (std::size_t k = 1; k < path.objectives.size(); ++k) {
            CHECK(path.objectives[k] <= path.objectives[k - 1] + 1e-12);
        }
        CHECK(path.objective == doctest::Approx(mdp_objective(x, path.subset)).epsilon(1e-12));
    }
}

TEST_CASE("raw_mdp matches the exhaustive optimum on small problems") {
    int same = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matrix x = gaussian(12, 3, mix_seed(203, seed));
        const MdpConfig cfg = config(seed);
        const RobustEstimates est = raw_mdp(PhaseISample(x), cfg);
        const oracle::ExhaustiveMdp best = oracle::exhaustive_mdp(x, 7);
        CHECK(est.subset.size() == 7);
        CHECK(est.objective >= best.objective - 1e-12);
        if (est.subset == best.subset) ++same;
    }
    CHECK(same >= 95);
}

TEST_CASE("raw_mdp on clean identity data") {
    const PhaseISample x(gaussian(100, 30, 204));
    const RobustEstimates est = raw_mdp(x, config(1));
    CHECK(est.stage == EstimateStage::RawMdp);
    CHECK(est.subset.size() == 51);
    CHECK(est.weight_sum() == 51);
    // subset means of N(0, 1) columns, 4 standard errors at h = 51
    CHECK(est.mu.cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(51.0));
    CHECK((est.d.array() > 0.0).all());
    CHECK(est.tr2 > 0.0);
    CHECK(est.c > 1.0);
}

TEST_CASE("raw_mdp subset avoids strongly shifted rows") {
    const PhaseISample clean(gaussian(100, 30, 205));
    const Contaminated c = contaminate(clean, {0.2, 5.0, 1.0}, 206);
    CHECK(c.planted.size() == 20);
    const RobustEstimates est = raw_mdp(c.sample, config(2));
    CHECK(disjoint(est.subset, c.planted));
}

TEST_CASE("raw_mdp survives 30 percent gross outliers") {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Matrix x = gaussian(50, 10, mix_seed(207, seed));
        Rng rng(mix_seed(208, seed));
        auto rows = rng.sample_without_replacement(50, 15);
        for (auto r : rows) x.row(static_cast<Index>(r)).array() += 1e6;
        const RobustEstimates est = raw_mdp(PhaseISample(x), config(seed, 100));
        IndexSet planted(rows.begin(), rows.end());
        if (disjoint(est.subset, planted)) ++ok;
    }
    CHECK(ok == 100);
}

TEST_CASE("scaling_factor") {
    CHECK(scaling_factor(0.0, 1, 100) == 1.0);
    CHECK(scaling_factor(0.0, 30, 100) == 1.0);
    CHECK(scaling_factor(0.5, 1, 100) == doctest::Approx(7.0100745397032522).epsilon(1e-9));
    CHECK(scaling_factor(0.25, 1, 100) == doctest::Approx(2.7135271017755191).epsilon(1e-9));
    CHECK(scaling_factor(0.5, 30, 100) == doctest::Approx(1.256453787949577).epsilon(1e-9));
    ScalingTable table;
    table.set(30, 100, 50, 1.1);
    CHECK(scaling_factor(0.5, 30, 100, &table) == doctest::Approx(1.1 * 1.256453787949577).epsilon(1e-9));
    CHECK(scaling_factor(0.5, 30, 200, &table) == doctest::Approx(1.256453787949577).epsilon(1e-9));
    CHECK_THROWS_AS(scaling_factor(0.6, 3, 10), Error);
    CHECK_THROWS_AS(table.set(1, 2, 3, -1.0), Error);
}

TEST_CASE("calibrated scaling centres the trimmed variances") {
    const Index m = 100, p = 30;
    MdpConfig base = config(0, 100);
    const double gamma = 1.0 - double(base.subset_size(m)) / double(m);
    const double factor = calibrate_scaling(gamma, p, m, 200, 209, base);
    CHECK(factor > 0.8);
    CHECK(factor < 1.25);
    auto table = std::make_shared<ScalingTable>();
    table->set(p, m, base.subset_size(m), factor);
    std::vector<double> ratios;
    for (std::uint64_t r = 0; r < 1000; ++r) {
        MdpConfig cfg = config(mix_seed(210, r), 100);
        cfg.calibration = table;
        ratios.push_back(raw_mdp(PhaseISample(gaussian(m, p, mix_seed(211, r))), cfg).d.mean());
    }
    const double med = quantile(ratios, 0.5);
    CHECK(med >= 0.95);
    CHECK(med <= 1.05);
}

TEST_CASE("reweighted_mdp removes strongly shifted rows") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PhaseISample clean(gaussian(100, 30, mix_seed(212, seed)));
        const Contaminated c = contaminate(clean, {0.2, 5.0, 1.0}, mix_seed(213, seed));
        const RmdpResult res = reweighted_mdp(c.sample, config(seed));
        for (Index i : c.planted) CHECK(res.estimates.weights[static_cast<std::size_t>(i)] == 0);
        int clean_flagged = 0;
        for (Index i = 0; i < 100; ++i) {
            const bool planted = std::binary_search(c.planted.begin(), c.planted.end(), i);
            if (!planted && res.chart.flags[static_cast<std::size_t>(i)]) ++clean_flagged;
        }
        CHECK(clean_flagged / 80.0 <= 0.05 + 0.03);
        CHECK(res.estimates.stage == EstimateStage::Reweighted);
        CHECK(res.chart.kind == ChartKind::RmdpStep5);
        CHECK(res.step3.kind == ChartKind::RmdpStep3);
        CHECK(res.refine_factor > 1.0);
        CHECK(res.estimates.d_scale > 1.0);
    }
}

TEST_CASE("reweighted_mdp is deterministic and thread-free") {
    const PhaseISample x(gaussian(60, 20, 214));
    const RmdpResult a = reweighted_mdp(x, config(5));
    const RmdpResult b = reweighted_mdp(x, config(5));
    CHECK(a.raw.subset == b.raw.subset);
    CHECK(a.estimates.weights == b.estimates.weights);
    CHECK(a.estimates.mu == b.estimates.mu);
    CHECK(a.estimates.d == b.estimates.d);
    CHECK(a.chart.stats == b.chart.stats);
}

TEST_CASE("row permutation permutes the weights") {
    Matrix x = gaussian(40, 5, 215);
    x.row(3).array() += 6.0;
    x.row(29).array() += 6.0;
    const RmdpResult base = reweighted_mdp(PhaseISample(x), config(6));

    std::vector<Index> perm(40);
    std::iota(perm.begin(), perm.end(), Index{0});
    Rng rng(216);
    for (Index i = 39; i > 0; --i) std::swap(perm[i], perm[static_cast<Index>(rng.below(i + 1))]);
    Matrix y(40, 5);
    for (Index i = 0; i < 40; ++i) y.row(i) = x.row(perm[i]);
    const RmdpResult moved = reweighted_mdp(PhaseISample(y), config(6));

    for (Index i = 0; i < 40; ++i) {
        CHECK(moved.estimates.weights[i] == base.estimates.weights[perm[i]]);
        CHECK(moved.raw.weights[i] == base.raw.weights[perm[i]]);
    }
    // Sums run in row order, so agreement is to rounding only.
    CHECK((moved.estimates.mu - base.estimates.mu).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((moved.estimates.d - base.estimates.d).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(moved.estimates.tr2 - base.estimates.tr2) < 1e-10);
    CHECK(std::abs(moved.estimates.tr3 - base.estimates.tr3) < 1e-9);
}

TEST_CASE("column scaling is equivariant") {
    Matrix x = gaussian(60, 8, 217);
    x.row(10).array() += 5.0;
    const RmdpResult base = reweighted_mdp(PhaseISample(x), config(7));
    Vector c(8);
    c << 1e-3, 2, 3, 0.5, 10, 1, 7, 100;
    const RmdpResult scaled = reweighted_mdp(PhaseISample(x * c.asDiagonal()), config(7));
    CHECK(scaled.raw.subset == base.raw.subset);
    CHECK(scaled.estimates.weights == base.estimates.weights);
    CHECK(scaled.chart.flags == base.chart.flags);
    for (Index j = 0; j < 8; ++j) {
        CHECK(std::abs(scaled.estimates.mu(j) - c(j) * base.estimates.mu(j)) <= 1e-9 * c(j));
        CHECK(hdspc::test::rel_err(scaled.estimates.d(j), c(j) * c(j) * base.estimates.d(j)) < 1e-9);
    }
    CHECK(hdspc::test::rel_err(scaled.estimates.tr2, base.estimates.tr2) < 1e-9);
    CHECK(std::abs(scaled.estimates.tr3 - base.estimates.tr3) < 1e-9 * std::max(1.0, std::abs(base.estimates.tr3)));
}

TEST_CASE("MdpConfig validation") {
    MdpConfig cfg;
    CHECK(cfg.subset_size(100) == 51);
    CHECK(cfg.subset_size(24) == 13);
    cfg.gamma = 0.25;
    CHECK(cfg.subset_size(100) == 75);
    cfg.gamma = 0.7;
    CHECK_THROWS_AS(cfg.validate(100), Error);
    cfg.gamma.reset();
    CHECK_NOTHROW(cfg.validate(4));
    CHECK_THROWS_AS(cfg.validate(3), Error);
    cfg.alpha = 0.6;
    CHECK_THROWS_AS(cfg.validate(100), Error);
}
