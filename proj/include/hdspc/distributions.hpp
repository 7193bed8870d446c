#pragma once

namespace hdspc {

double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x) noexcept;

/// Inverse standard normal CDF for p in (0, 1). Acklam's rational
/// approximation polished by one Halley step against erfc, giving close to
/// full double accuracy.
double normal_quantile(double p);

/// Upper-tail quantile z_alpha = Phi^{-1}(1 - alpha).
double upper_quantile(double alpha);

double chi_squared_cdf(double x, double dof);
double chi_squared_quantile(double p, double dof);

}  // namespace hdspc
