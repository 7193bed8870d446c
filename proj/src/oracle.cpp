#include "hdspc/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hdspc/errors.hpp"

namespace hdspc::oracle {

namespace {

double binomial(Index n, Index k) {
    double out = 1.0;
    for (Index i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    return out;
}

double log_diag_product(const Matrix& x, const std::vector<Index>& rows) {
    const double n = static_cast<double>(rows.size());
    double total = 0.0;
    for (Index j = 0; j < x.cols(); ++j) {
        double mean = 0.0;
        for (Index i : rows) mean += x(i, j);
        mean /= n;
        double ss = 0.0;
        for (Index i : rows) ss += (x(i, j) - mean) * (x(i, j) - mean);
        if (ss <= 0.0) return -std::numeric_limits<double>::infinity();
        total += std::log(ss / (n - 1.0));
    }
    return total;
}

}  // namespace

ExhaustiveMdp exhaustive_mdp(const Matrix& x, Index h) {
    const Index m = x.rows();
    if (h < 2 || h > m) fail(ErrorKind::InvalidArgument, "exhaustive_mdp needs 2 <= h <= m");
    if (binomial(m, h) > 1e6) {
        fail(ErrorKind::TooLarge, "C(" + std::to_string(m) + ", " + std::to_string(h) +
                                      ") subsets exceed the enumeration limit");
    }
    std::vector<Index> comb(static_cast<std::size_t>(h));
    for (Index i = 0; i < h; ++i) comb[static_cast<std::size_t>(i)] = i;
    ExhaustiveMdp best;
    best.objective = std::numeric_limits<double>::infinity();
    for (;;) {
        const double obj = log_diag_product(x, comb);
        if (obj < best.objective) {
            best.objective = obj;
            best.subset = comb;
        }
        // Next combination in lexicographic order.
        Index i = h - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == m - h + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (Index j = i + 1; j < h; ++j) {
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

double trace_elementwise(const Matrix& a, int k) {
    const Index p = a.rows();
    if (a.cols() != p) fail(ErrorKind::DimensionMismatch, "trace needs a square matrix");
    if (k == 2) {
        double s = 0.0;
        for (Index i = 0; i < p; ++i) {
            for (Index j = 0; j < p; ++j) s += a(i, j) * a(i, j);
        }
        return s;
    }
    if (k == 3) {
        if (p > 300) fail(ErrorKind::TooLarge, "elementwise tr(A^3) is limited to p <= 300");
        double s = 0.0;
        for (Index i = 0; i < p; ++i) {
            for (Index j = 0; j < p; ++j) {
                for (Index l = 0; l < p; ++l) s += a(i, j) * a(j, l) * a(l, i);
            }
        }
        return s;
    }
    fail(ErrorKind::InvalidArgument, "trace_elementwise supports k = 2 or 3");
}

M2Moments mc_m2_moments(const Vector& mu, const Matrix& sigma, Index n, std::uint64_t seed) {
    const Index p = mu.size();
    if (sigma.rows() != p || sigma.cols() != p) {
        fail(ErrorKind::DimensionMismatch, "sigma must be p x p");
    }
    if (n < 2) fail(ErrorKind::InvalidArgument, "need at least 2 draws");
    // Cholesky-Banachiewicz.
    Matrix l = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j <= i; ++j) {
            double s = sigma(i, j);
            for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) fail(ErrorKind::NotPositiveDefinite, "sigma is not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(static_cast<std::size_t>(p));
    double mean = 0.0;
    double m2sum = 0.0;
    for (Index draw = 0; draw < n; ++draw) {
        for (auto& v : z) v = normal(engine);
        double dist = 0.0;
        for (Index i = 0; i < p; ++i) {
            double xi = 0.0;
            for (Index k = 0; k <= i; ++k) xi += l(i, k) * z[static_cast<std::size_t>(k)];
            dist += xi * xi / sigma(i, i);
        }
        // Welford update.
        const double delta = dist - mean;
        mean += delta / static_cast<double>(draw + 1);
        m2sum += delta * (dist - mean);
    }
    return {mean, m2sum / static_cast<double>(n - 1)};
}

}  // namespace hdspc::oracle
