#pragma once

#include <Eigen/Dense>

namespace hdspc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Construction mirrors the input as (A + A')/2 so
/// that rounding left over from products never breaks exact symmetry.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(const Matrix& a);

    static SymMatrix identity(Index p);

    Index dim() const noexcept { return m_.rows(); }
    double operator()(Index i, Index j) const { return m_(i, j); }
    const Matrix& dense() const noexcept { return m_; }
    Vector diagonal() const { return m_.diagonal(); }

private:
    Matrix m_;
};

/// The m x p Phase I reference sample, one observation per row.
///
/// Rejected at construction: m < 3, p < 2, non-finite cells, and columns
/// without spread (a constant column has no usable variance).
class PhaseISample {
public:
    explicit PhaseISample(Matrix data);

    Index m() const noexcept { return data_.rows(); }
    Index p() const noexcept { return data_.cols(); }
    const Matrix& data() const noexcept { return data_; }

private:
    Matrix data_;
};

Vector sample_mean(const Matrix& x);
Vector sample_mean(const PhaseISample& x);

/// Column variances with divisor m - 1.
Vector column_variances(const Matrix& x);

/// Sample covariance with divisor m - 1. Throws DegenerateVariance naming the
/// first constant column (1-based).
SymMatrix sample_covariance(const Matrix& x);
SymMatrix sample_covariance(const PhaseISample& x);

/// R = D_S^{-1/2} S D_S^{-1/2}.
SymMatrix correlation(const SymMatrix& s);

/// tr(A^k) for k in {2, 3}, computed through dense products.
double trace_power(const SymMatrix& a, int k);

struct TracePowers {
    double tr2 = 0.0;
    double tr3 = 0.0;
};

/// tr(A^2) and tr(A^3) sharing one product.
TracePowers trace_powers(const SymMatrix& a);

/// Lower-triangular L with L L' = sigma. Throws NotPositiveDefinite.
Matrix cholesky(const SymMatrix& sigma);

}  // namespace hdspc
