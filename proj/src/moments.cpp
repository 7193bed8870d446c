#include "hdspc/moments.hpp"

#include <cmath>
#include <string>

#include "hdspc/errors.hpp"

namespace hdspc {

namespace {

void require_count(double m_eff) {
    if (!(m_eff >= 2.0)) {
        fail(ErrorKind::InvalidArgument, "effective sample count must be at least 2");
    }
}

}  // namespace

double est_tr_rho2_from(double tr_r2, Index p, double m_eff) {
    require_count(m_eff);
    const double pd = static_cast<double>(p);
    const double value = tr_r2 - pd * pd / m_eff;
    if (!(value > 0.0)) {
        fail(ErrorKind::NonpositiveTraceEstimate,
             "tr(rho^2) estimate is " + std::to_string(value) + " (p=" + std::to_string(p) +
                 ", m=" + std::to_string(m_eff) + ")");
    }
    return value;
}

double est_tr_rho3_from(double tr_r2, double tr_r3, Index p, double m_eff) {
    require_count(m_eff);
    const double pd = static_cast<double>(p);
    return tr_r3 - 3.0 * pd / m_eff * tr_r2 + 2.0 * pd * pd * pd / (m_eff * m_eff);
}

double est_tr_rho2(const SymMatrix& r, Index m_eff) {
    return est_tr_rho2_from(trace_power(r, 2), r.dim(), static_cast<double>(m_eff));
}

double est_tr_rho3(const SymMatrix& r, Index m_eff) {
    const TracePowers t = trace_powers(r);
    return est_tr_rho3_from(t.tr2, t.tr3, r.dim(), static_cast<double>(m_eff));
}

double correction_c(Index p, double m_eff, double tr2_hat) {
    if (!(tr2_hat > 0.0)) {
        fail(ErrorKind::NonpositiveTraceEstimate, "correction needs a positive tr(rho^2) estimate");
    }
    if (!(m_eff > 0.0)) fail(ErrorKind::InvalidArgument, "correction needs a positive count");
    return 1.0 + 2.0 * static_cast<double>(p) / (m_eff * std::sqrt(tr2_hat));
}

MomentEstimates classical_estimates(const PhaseISample& x) {
    MomentEstimates est;
    const SymMatrix s = sample_covariance(x);
    est.mu_hat = sample_mean(x);
    est.d_hat = s.diagonal();
    est.r = correlation(s);
    est.m_eff = x.m();
    const TracePowers t = trace_powers(est.r);
    const double m = static_cast<double>(x.m());
    est.tr2_hat = est_tr_rho2_from(t.tr2, x.p(), m);
    est.tr3_hat = est_tr_rho3_from(t.tr2, t.tr3, x.p(), m);
    est.c_pm = correction_c(x.p(), m, est.tr2_hat);
    return est;
}

}  // namespace hdspc
