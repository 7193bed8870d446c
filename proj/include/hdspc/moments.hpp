#pragma once

#include "hdspc/matrixcore.hpp"

namespace hdspc {

/// Classical (non-robust) Phase I estimates. Trace estimates are the
/// un-normalized ones used by the charting formulas.
struct MomentEstimates {
    Vector mu_hat;
    Vector d_hat;  ///< diagonal of S (variances)
    SymMatrix r;
    double tr2_hat = 0.0;
    double tr3_hat = 0.0;
    double c_pm = 1.0;
    Index m_eff = 0;
};

/// Consistent estimate of tr(rho^2): tr(R^2) - p^2 / m_eff.
/// Throws NonpositiveTraceEstimate when the result is not positive.
double est_tr_rho2(const SymMatrix& r, Index m_eff);

/// Consistent estimate of tr(rho^3):
/// tr(R^3) - (3p / m_eff) tr(R^2) + 2 p^3 / m_eff^2.
double est_tr_rho3(const SymMatrix& r, Index m_eff);

/// Both estimates from precomputed traces of R (avoids recomputing products).
double est_tr_rho2_from(double tr_r2, Index p, double m_eff);
double est_tr_rho3_from(double tr_r2, double tr_r3, Index p, double m_eff);

/// Finite-sample correction c = 1 + 2p / (m_eff sqrt(tr2_hat)).
double correction_c(Index p, double m_eff, double tr2_hat);

MomentEstimates classical_estimates(const PhaseISample& x);

}  // namespace hdspc
