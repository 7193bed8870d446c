#include "hdspc/chart.hpp"

#include <cmath>
#include <string>

#include "hdspc/distributions.hpp"
#include "hdspc/errors.hpp"

namespace hdspc {

namespace {

void require_positive_variances(const Eigen::Ref<const Vector>& d) {
    if (!(d.array() > 0.0).all()) {
        fail(ErrorKind::InvalidArgument, "variances must be strictly positive");
    }
}

}  // namespace

const char* to_string(ChartKind kind) noexcept {
    switch (kind) {
        case ChartKind::U: return "U";
        case ChartKind::Z: return "Z";
        case ChartKind::RmdpStep3: return "RMDP-step3";
        case ChartKind::RmdpStep5: return "RMDP-step5";
    }
    return "unknown";
}

void ChartParams::validate() const {
    if (mu.size() != d.size() || mu.size() == 0) {
        fail(ErrorKind::DimensionMismatch, "mu and d must have the same nonzero length");
    }
    require_positive_variances(d);
    if (!(tr2 > 0.0)) fail(ErrorKind::NonpositiveTraceEstimate, "chart needs tr2 > 0");
    if (!(c >= 1.0)) fail(ErrorKind::InvalidArgument, "correction c must be >= 1");
    if (!(alpha > 0.0 && alpha < 0.5)) {
        fail(ErrorKind::InvalidArgument, "alpha must lie strictly inside (0, 0.5)");
    }
}

Index ChartResult::flagged_count() const {
    Index n = 0;
    for (bool f : flags) n += f ? 1 : 0;
    return n;
}

std::vector<Index> ChartResult::flagged_indices() const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i]) out.push_back(static_cast<Index>(i));
    }
    return out;
}

double m2_distance(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& mu,
                   const Eigen::Ref<const Vector>& d) {
    if (x.size() != mu.size() || x.size() != d.size()) {
        fail(ErrorKind::DimensionMismatch,
             "m2_distance: lengths " + std::to_string(x.size()) + ", " +
                 std::to_string(mu.size()) + ", " + std::to_string(d.size()));
    }
    require_positive_variances(d);
    return ((x - mu).array().square() / d.array()).sum();
}

Vector m2_distances(const Matrix& rows, const Vector& mu, const Vector& d) {
    if (rows.cols() != mu.size() || rows.cols() != d.size()) {
        fail(ErrorKind::DimensionMismatch, "m2_distances: row length does not match parameters");
    }
    require_positive_variances(d);
    const Eigen::RowVectorXd inv_d = d.cwiseInverse().transpose();
    return ((rows.rowwise() - mu.transpose()).array().square().rowwise() * inv_d.array())
        .rowwise()
        .sum();
}

double u_statistic(double m2, Index p, double tr2, double c) {
    if (!(tr2 > 0.0)) fail(ErrorKind::NonpositiveTraceEstimate, "U statistic needs tr2 > 0");
    if (!(c > 0.0)) fail(ErrorKind::InvalidArgument, "U statistic needs c > 0");
    return (m2 - static_cast<double>(p)) / std::sqrt(2.0 * c * tr2);
}

double cf_coefficient(double tr2, double tr3) {
    if (!(tr2 > 0.0)) fail(ErrorKind::NonpositiveTraceEstimate, "CF term needs tr2 > 0");
    return 4.0 * tr3 / (3.0 * std::pow(2.0 * tr2, 1.5));
}

double cf_term(double tr2, double tr3, double z) { return cf_coefficient(tr2, tr3) * (z * z - 1.0); }

ChartResult chart_from_distances(Vector m2, Index p, double tr2, double tr3, double c, double z,
                                 bool use_cf, ChartKind kind) {
    if (!(tr2 > 0.0)) fail(ErrorKind::NonpositiveTraceEstimate, "chart needs tr2 > 0");
    ChartResult out;
    out.kind = kind;
    const double scale = std::sqrt(2.0 * c * tr2);
    out.u = (m2.array() - static_cast<double>(p)) / scale;
    const double shift = use_cf ? cf_term(tr2, tr3, z) : 0.0;
    out.stats = out.u.array() - shift;
    out.threshold = z;
    out.flags.resize(static_cast<std::size_t>(m2.size()));
    for (Index i = 0; i < m2.size(); ++i) out.flags[static_cast<std::size_t>(i)] = out.stats(i) > z;
    out.m2 = std::move(m2);
    return out;
}

ChartResult z_chart(const Matrix& rows, const ChartParams& params) {
    params.validate();
    const double z = upper_quantile(params.alpha);
    return chart_from_distances(m2_distances(rows, params.mu, params.d), params.mu.size(),
                                params.tr2, params.tr3, params.c, z, params.use_cf,
                                params.use_cf ? ChartKind::Z : ChartKind::U);
}

namespace {

double power_argument(const Vector& delta, const Vector& d, double tr2, double alpha) {
    if (delta.size() != d.size()) fail(ErrorKind::DimensionMismatch, "delta and d lengths differ");
    require_positive_variances(d);
    if (!(tr2 > 0.0)) fail(ErrorKind::NonpositiveTraceEstimate, "power needs tr2 > 0");
    const double noncentrality = (delta.array().square() / d.array()).sum();
    return upper_quantile(alpha) - noncentrality / std::sqrt(2.0 * tr2);
}

}  // namespace

double asymptotic_power(const Vector& delta, const Vector& d, double tr2, double alpha) {
    return normal_sf(power_argument(delta, d, tr2, alpha));
}

double asymptotic_type2_error(const Vector& delta, const Vector& d, double tr2, double alpha) {
    return normal_cdf(power_argument(delta, d, tr2, alpha));
}

}  // namespace hdspc
