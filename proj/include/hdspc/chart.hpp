#pragma once

#include <vector>

#include "hdspc/matrixcore.hpp"

namespace hdspc {

/// In-control parameters driving a chart. `c` is the finite-sample
/// correction (1 disables it); `use_cf` switches the Cornish-Fisher shift.
struct ChartParams {
    Vector mu;
    Vector d;
    double tr2 = 0.0;
    double tr3 = 0.0;
    double c = 1.0;
    double alpha = 0.05;
    bool use_cf = true;

    void validate() const;
};

enum class ChartKind { U, Z, RmdpStep3, RmdpStep5 };

const char* to_string(ChartKind kind) noexcept;

/// Per-observation chart values. flags[i] == (stats[i] > threshold).
struct ChartResult {
    ChartKind kind = ChartKind::Z;
    Vector m2;     ///< distances the statistic was built from
    Vector u;      ///< standardized distances before the CF shift
    Vector stats;  ///< charted values
    double threshold = 0.0;
    std::vector<bool> flags;

    Index flagged_count() const;
    std::vector<Index> flagged_indices() const;
};

/// Sum_j (x_j - mu_j)^2 / d_j.
double m2_distance(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& mu,
                   const Eigen::Ref<const Vector>& d);

/// M^2 for every row of `rows`.
Vector m2_distances(const Matrix& rows, const Vector& mu, const Vector& d);

/// (m2 - p) / sqrt(2 c tr2).
double u_statistic(double m2, Index p, double tr2, double c);

/// Cornish-Fisher shift 4 tr3 (z^2 - 1) / (3 (2 tr2)^{3/2}).
double cf_term(double tr2, double tr3, double z);

/// The z-independent factor of cf_term: 4 tr3 / (3 (2 tr2)^{3/2}).
double cf_coefficient(double tr2, double tr3);

/// Chart built from precomputed distances against the upper quantile z.
/// The statistic is u_statistic(m2) minus cf_term (when use_cf).
ChartResult chart_from_distances(Vector m2, Index p, double tr2, double tr3, double c, double z,
                                 bool use_cf, ChartKind kind);

/// Z_i = U_i - cf_term(tr2, tr3, z_alpha), flagged when Z_i > z_alpha.
ChartResult z_chart(const Matrix& rows, const ChartParams& params);

/// 1 - Phi(z_alpha - delta' D^{-1} delta / sqrt(2 tr2)).
double asymptotic_power(const Vector& delta, const Vector& d, double tr2, double alpha);

/// Limit of P(U <= z_alpha) under the shift: Phi(z_alpha - delta' D^{-1} delta / sqrt(2 tr2)).
double asymptotic_type2_error(const Vector& delta, const Vector& d, double tr2, double alpha);

}  // namespace hdspc
