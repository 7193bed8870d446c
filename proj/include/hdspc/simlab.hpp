#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdspc/matrixcore.hpp"
#include "hdspc/random.hpp"
#include "hdspc/rmdp.hpp"

namespace hdspc {

enum class CovarianceKind { Identity, Ar1, Custom };

/// Data-generating model N_p(mu, Sigma). Scenario 1 is identity(p),
/// Scenario 2 is ar1(p, 0.5).
struct ScenarioSpec {
    Index p = 0;
    CovarianceKind kind = CovarianceKind::Identity;
    double a = 0.0;  ///< AR(1) parameter, sigma_ij = a^|i-j|
    Matrix custom;   ///< used when kind == Custom
    Vector mu;       ///< empty means the zero vector

    static ScenarioSpec identity(Index p);
    static ScenarioSpec ar1(Index p, double a);
    static ScenarioSpec custom_covariance(Matrix sigma);
    /// sigma_ii ~ Unif(2, 3), sigma_ij = exp(-i-j) with 1-based i, j.
    static ScenarioSpec diagonal_dominant(Index p, std::uint64_t seed);

    void validate() const;
    Vector mean() const;
    Matrix covariance() const;
    SymMatrix correlation() const;
    /// tr(rho^2), tr(rho^3) of the population correlation.
    TracePowers true_traces() const;
    std::string label() const;
};

/// Draws rows from a scenario. Identity and AR(1) use closed forms that
/// coincide with multiplying by the Cholesky factor; custom covariances go
/// through cholesky().
class MvnSampler {
public:
    explicit MvnSampler(const ScenarioSpec& spec);

    Index dim() const noexcept { return p_; }
    void draw_row(Rng& rng, Eigen::Ref<Vector> out) const;
    Matrix draw(Index n, Rng& rng) const;

private:
    Index p_;
    CovarianceKind kind_;
    double a_;
    double innovation_sd_;
    Vector mu_;
    Matrix chol_;
};

PhaseISample sample_mvn(const ScenarioSpec& spec, Index m, std::uint64_t seed);

struct ContaminationSpec {
    double rate = 0.0;
    double delta = 0.0;
    double shifted_fraction = 1.0;

    void validate() const;
    Index contaminated_rows(Index m) const;
    Index shifted_coordinates(Index p) const;
};

struct Contaminated {
    PhaseISample sample;
    IndexSet planted;  ///< ascending
};

/// Shifts floor(m * rate) rows, chosen without replacement, by +delta on the
/// first ceil(shifted_fraction * p) coordinates.
Contaminated contaminate(const PhaseISample& x, const ContaminationSpec& spec, std::uint64_t seed);

struct ExperimentConfig {
    ScenarioSpec scenario;
    Index m = 200;
    double alpha = 0.05;
    bool use_cf = true;
    int reps = 2000;
    std::uint64_t seed = 1;
    int threads = 1;
    ContaminationSpec contamination;
    /// Search settings for the subset search; alpha, use_cf and seed are
    /// overridden per replication.
    MdpConfig mdp;
    /// Replications for a small-sample scaling calibration run before the
    /// experiment; 0 uses the asymptotic factor alone.
    int calibration_reps = 0;

    void validate() const;
    nlohmann::json to_json() const;
};

struct ExperimentReport {
    std::string kind;
    double estimate = 0.0;
    double mc_se = 0.0;
    int replications = 0;
    std::vector<double> per_rep;
    nlohmann::json config;

    nlohmann::json to_json(bool include_per_rep = false) const;
};

struct FalseAlarmComparison {
    ExperimentReport with_cf;
    ExperimentReport without_cf;
};

/// Mean over replications of the fraction of in-control rows flagged by
/// reweighted_mdp.
ExperimentReport false_alarm_experiment(const ExperimentConfig& cfg);

/// Same data and subset searches evaluated with and without the CF terms.
FalseAlarmComparison false_alarm_comparison(const ExperimentConfig& cfg);

/// Mean over replications of the fraction of planted rows flagged.
ExperimentReport power_experiment(const ExperimentConfig& cfg);

struct CdfAccuracy {
    double ks_u = 0.0;
    double ks_z = 0.0;
};

/// Kolmogorov-Smirnov distance to Phi of U and of its Cornish-Fisher
/// adjusted counterpart, from true-parameter in-control draws.
CdfAccuracy cdf_accuracy(const ScenarioSpec& scenario, Index n_draws, std::uint64_t seed);
CdfAccuracy cdf_accuracy(Index p, Index n_draws, std::uint64_t seed);

/// Smallest supremum distance between the empirical CDF of `sample` and Phi.
double ks_distance_to_normal(std::vector<double> sample);

/// z such that z + skew (z^2 - 1) = u, with skew = cf_coefficient(tr2, tr3).
/// Values of u below the parabola's minimum map to its vertex.
double invert_cf(double u, double skew);

struct TraceRatioSummary {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double true_tr3 = 0.0;
    std::vector<double> ratios;

    nlohmann::json to_json(bool include_ratios = false) const;
};

/// Distribution of tr3_RMDP / tr(rho^3) over replications.
TraceRatioSummary trace_ratio_diagnostic(const ExperimentConfig& cfg);

struct CalibrationGrid {
    CovarianceKind kind = CovarianceKind::Ar1;
    double a = 0.5;
    Index m_min = 20;
    Index m_max = 400;
    Index p_min = 10;
    Index p_max = 200;
    int n_points = 5000;
    Index draws = 5000;  ///< L
    double upper_fraction = 0.05;
    /// Phase I variances with divisor m (true) or m - 1.
    bool mle_variances = true;
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
    nlohmann::json to_json() const;
};

struct CalibrationPoint {
    Index m = 0;
    Index p = 0;
    double x = 0.0;
    double y = 0.0;
};

struct KFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<CalibrationPoint> points;

    nlohmann::json to_json(bool include_points = false) const;
};

/// One (x, y) pair of the correction-coefficient regression.
CalibrationPoint calibration_point(const ScenarioSpec& scenario, Index m, Index draws,
                                   double upper_fraction, bool mle_variances, Rng& rng);

/// Least-squares fit of y = c_{p,m} - 1 on x = p / (m sqrt(2 tr2_hat)) over
/// random (m, p) pairs.
KFit calibrate_k(const CalibrationGrid& grid);

struct SensitivityCell {
    double a = 0.0;
    Index m = 0;
    double far = 0.0;
    double mc_se = 0.0;
};

/// False-alarm rate over an (a, m) grid for sigma_ij = a^|i-j|.
std::vector<SensitivityCell> correlation_sensitivity(Index p, double alpha,
                                                     const std::vector<double>& a_grid,
                                                     const std::vector<Index>& m_grid, int reps,
                                                     std::uint64_t seed, int threads = 1,
                                                     const MdpConfig& mdp = {});

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double prob);

}  // namespace hdspc
