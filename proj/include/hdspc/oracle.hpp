#pragma once

#include <cstdint>
#include <vector>

#include "hdspc/matrixcore.hpp"

// Brute-force reference implementations. Deliberately slow and written
// without calling into the other modules, so they can validate them.
namespace hdspc::oracle {

struct ExhaustiveMdp {
    std::vector<Index> subset;
    double objective = 0.0;
};

/// Global minimum of sum_j log var_j(H) over all h-subsets, enumerated in
/// lexicographic order; the first minimizer wins ties. Throws TooLarge when
/// C(m, h) exceeds one million.
ExhaustiveMdp exhaustive_mdp(const Matrix& x, Index h);

/// tr(A^2) = sum_ij A_ij^2 and tr(A^3) = sum_ijk A_ij A_jk A_ki by loops.
double trace_elementwise(const Matrix& a, int k);

struct M2Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Empirical mean and variance of M^2(X; mu, diag(sigma)) over n draws of
/// X ~ N(mu, sigma).
M2Moments mc_m2_moments(const Vector& mu, const Matrix& sigma, Index n, std::uint64_t seed);

}  // namespace hdspc::oracle
