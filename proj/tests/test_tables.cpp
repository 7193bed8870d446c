// Table cells outside the acceptance grid. 2000 replications each, slow.
#include <doctest.h>

#include <cmath>

#include "hdspc/simlab.hpp"

using namespace hdspc;

namespace {

FalseAlarmComparison run_cell(const ScenarioSpec& spec, double alpha, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.scenario = spec;
    cfg.m = 200;
    cfg.alpha = alpha;
    cfg.reps = 2000;
    cfg.seed = seed;
    return false_alarm_comparison(cfg);
}

}  // namespace

TEST_CASE("identity p=30 alpha=0.01 with CF") {
    const auto r = run_cell(ScenarioSpec::identity(30), 0.01, 11);
    CHECK(std::abs(r.with_cf.estimate - 0.010) <= 0.004);
}

TEST_CASE("ar1 p=100 alpha=0.05 with CF") {
    const auto r = run_cell(ScenarioSpec::ar1(100, 0.5), 0.05, 12);
    CHECK(std::abs(r.with_cf.estimate - 0.053) <= 0.01);
}

TEST_CASE("identity p=50 alpha=0.05 without CF") {
    const auto r = run_cell(ScenarioSpec::identity(50), 0.05, 13);
    CHECK(std::abs(r.without_cf.estimate - 0.065) <= 0.01);
}

TEST_CASE("identity p=100 alpha=0.05 both columns") {
    const auto r = run_cell(ScenarioSpec::identity(100), 0.05, 14);
    CHECK(std::abs(r.with_cf.estimate - 0.047) <= 0.01);
    CHECK(std::abs(r.without_cf.estimate - 0.057) <= 0.01);
    CHECK(r.without_cf.estimate > r.with_cf.estimate);
}

TEST_CASE("k calibration on identity covariance") {
    CalibrationGrid grid;
    grid.kind = CovarianceKind::Identity;
    grid.seed = 15;
    const KFit fit = calibrate_k(grid);
    CHECK(fit.slope >= 2.4);
    CHECK(fit.slope <= 3.1);
}

TEST_CASE("false alarms under strong correlation converge more slowly") {
    const auto cells = correlation_sensitivity(30, 0.05, {0.3, 0.9}, {400}, 500, 16);
    REQUIRE(cells.size() == 2);
    CHECK(std::abs(cells[0].far - 0.05) <= 0.01);
    CHECK(std::abs(cells[1].far - 0.05) > std::abs(cells[0].far - 0.05));
}
