#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "hdspc/chart.hpp"
#include "hdspc/matrixcore.hpp"

namespace hdspc {

using IndexSet = std::vector<Index>;

/// Small-sample multipliers for the MDP variance scaling, keyed by
/// (p, m, h). Missing entries mean "no correction" (factor 1).
class ScalingTable {
public:
    void set(Index p, Index m, Index h, double factor);
    std::optional<double> find(Index p, Index m, Index h) const;
    double lookup(Index p, Index m, Index h) const { return find(p, m, h).value_or(1.0); }
    std::size_t size() const noexcept { return entries_.size(); }

    const std::map<std::tuple<Index, Index, Index>, double>& entries() const noexcept {
        return entries_;
    }

private:
    std::map<std::tuple<Index, Index, Index>, double> entries_;
};

struct MdpConfig {
    double alpha = 0.05;
    /// Breakdown fraction; unset selects h = floor(m/2) + 1.
    std::optional<double> gamma;
    int n_starts = 500;
    int max_csteps = 50;
    /// Number of best starts iterated to convergence after the initial
    /// C-steps. Zero iterates every start.
    int refine_top = 10;
    std::uint64_t seed = 0;
    bool use_cf = true;
    std::shared_ptr<const ScalingTable> calibration;

    Index subset_size(Index m) const;
    void validate(Index m) const;
};

enum class EstimateStage { RawMdp, Reweighted };

const char* to_string(EstimateStage stage) noexcept;

struct RobustEstimates {
    Vector mu;
    Vector d;
    double tr2 = 0.0;
    double tr3 = 0.0;
    /// Finite-sample correction evaluated with m in the denominator.
    double c = 1.0;
    /// 1 for observations contributing to the estimates, else 0.
    std::vector<int> weights;
    /// Raw stage: the h-subset. Reweighted stage: rows with weight 1.
    IndexSet subset;
    EstimateStage stage = EstimateStage::RawMdp;
    /// Multiplier applied to the subset variances to obtain d.
    double d_scale = 1.0;
    /// Log of the diagonal product of the raw subset (raw stage only).
    double objective = 0.0;

    Index weight_sum() const;
};

/// Sum_j log(var_j(H)): log of det(diag(Sigma_hat(H))).
double mdp_objective(const Matrix& x, const IndexSet& subset);

/// The h rows with the smallest M^2(x_i; mu, d), ascending index order.
/// Ties resolve towards the lower row index.
IndexSet c_step(const Matrix& x, const Vector& mu, const Vector& d, Index h);

struct ConcentrationPath {
    IndexSet subset;
    double objective = 0.0;
    int steps = 0;
    std::vector<double> objectives;  ///< objective after every step, starting point first
};

/// Applies C-steps from `start` until the subset repeats or `max_steps`.
ConcentrationPath concentrate(const Matrix& x, IndexSet start, Index h, int max_steps);

/// Consistency factor for the MDP variances: asymptotic truncation constant
/// c = (1 - gamma) / F_{chi2(p+2)}(chi2_p^{-1}(1 - gamma)) times the
/// small-sample multiplier from `calibration` when it holds (p, m, h).
double scaling_factor(double gamma, Index p, Index m, const ScalingTable* calibration = nullptr);

/// Raw MDP search (FastMCD-style elemental starts plus C-steps), with the
/// trace estimates computed from the h-subset correlation matrix.
RobustEstimates raw_mdp(const PhaseISample& x, const MdpConfig& cfg);

struct RmdpResult {
    RobustEstimates raw;
    ChartResult step3;
    RobustEstimates estimates;
    ChartResult chart;  ///< final (Step 5) rule that defines the weights
    double refine_factor = 1.0;  ///< distance refinement divisor used at Step 5
};

/// Full reweighted MDP with Cornish-Fisher thresholds.
RmdpResult reweighted_mdp(const PhaseISample& x, const MdpConfig& cfg);

/// Steps 3 to 6 starting from an existing raw MDP result. Lets callers reuse
/// one subset search for several threshold settings.
RmdpResult reweight_from_raw(const PhaseISample& x, const RobustEstimates& raw,
                             const MdpConfig& cfg);

/// Monte Carlo small-sample multiplier: 1 / median over `reps` outlier-free
/// N(0, I_p) datasets of mean_j(d_j) from raw_mdp, using the asymptotic factor
/// only. Starts per replication follow `base` (its calibration is ignored).
double calibrate_scaling(double gamma, Index p, Index m, int reps, std::uint64_t seed,
                         const MdpConfig& base = {});

}  // namespace hdspc
