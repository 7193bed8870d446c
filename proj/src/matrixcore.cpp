#include "hdspc/matrixcore.hpp"

#include <cmath>
#include <string>

#include "hdspc/errors.hpp"

namespace hdspc {

namespace {

void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " has NaN/Inf entries");
}

// Index of the first column whose entries are all equal, or -1.
Index first_constant_column(const Matrix& x) {
    for (Index j = 0; j < x.cols(); ++j) {
        if (x.col(j).maxCoeff() == x.col(j).minCoeff()) return j;
    }
    return -1;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
    if (a.rows() != a.cols()) {
        fail(ErrorKind::DimensionMismatch, "symmetric matrix must be square, got " +
                                               std::to_string(a.rows()) + "x" +
                                               std::to_string(a.cols()));
    }
    if (a.rows() == 0) fail(ErrorKind::InvalidArgument, "symmetric matrix must be non-empty");
    require_finite(a, "symmetric matrix");
    m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(Index p) { return SymMatrix(Matrix::Identity(p, p)); }

PhaseISample::PhaseISample(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 3) {
        fail(ErrorKind::InvalidArgument,
             "Phase I sample needs at least 3 observations, got " + std::to_string(data_.rows()));
    }
    if (data_.cols() < 2) {
        fail(ErrorKind::InvalidArgument,
             "Phase I sample needs at least 2 variables, got " + std::to_string(data_.cols()));
    }
    require_finite(data_, "Phase I sample");
    if (const Index j = first_constant_column(data_); j >= 0) {
        fail(ErrorKind::DegenerateVariance,
             "column " + std::to_string(j + 1) + " has zero sample variance");
    }
}

Vector sample_mean(const Matrix& x) {
    if (x.rows() == 0) fail(ErrorKind::InvalidArgument, "mean of an empty sample");
    return x.colwise().mean().transpose();
}

Vector sample_mean(const PhaseISample& x) { return sample_mean(x.data()); }

Vector column_variances(const Matrix& x) {
    if (x.rows() < 2) fail(ErrorKind::InvalidArgument, "variance needs at least 2 observations");
    const Eigen::RowVectorXd mean = x.colwise().mean();
    return ((x.rowwise() - mean).array().square().colwise().sum() /
            static_cast<double>(x.rows() - 1))
        .transpose();
}

SymMatrix sample_covariance(const Matrix& x) {
    if (x.rows() < 2) fail(ErrorKind::InvalidArgument, "covariance needs at least 2 observations");
    require_finite(x, "sample");
    if (const Index j = first_constant_column(x); j >= 0) {
        fail(ErrorKind::DegenerateVariance,
             "column " + std::to_string(j + 1) + " has zero sample variance");
    }
    const Matrix centered = x.rowwise() - x.colwise().mean();
    return SymMatrix(centered.transpose() * centered / static_cast<double>(x.rows() - 1));
}

SymMatrix sample_covariance(const PhaseISample& x) { return sample_covariance(x.data()); }

SymMatrix correlation(const SymMatrix& s) {
    const Vector d = s.diagonal();
    for (Index j = 0; j < d.size(); ++j) {
        if (!(d(j) > 0.0)) {
            fail(ErrorKind::DegenerateVariance,
                 "variable " + std::to_string(j + 1) + " has nonpositive variance");
        }
    }
    const Vector inv_sd = d.cwiseSqrt().cwiseInverse();
    Matrix r = inv_sd.asDiagonal() * s.dense() * inv_sd.asDiagonal();
    r.diagonal().setOnes();
    return SymMatrix(r);
}

double trace_power(const SymMatrix& a, int k) {
    if (k == 2) {
        return (a.dense() * a.dense()).trace();
    }
    if (k == 3) return trace_powers(a).tr3;
    fail(ErrorKind::InvalidArgument, "trace_power supports k = 2 or 3, got " + std::to_string(k));
}

TracePowers trace_powers(const SymMatrix& a) {
    const Matrix& m = a.dense();
    const Matrix sq = m * m;
    // tr(A^2 A) = sum_ij (A^2)_ij A_ji, and A is symmetric.
    return {sq.trace(), sq.cwiseProduct(m).sum()};
}

Matrix cholesky(const SymMatrix& sigma) {
    Eigen::LLT<Matrix> llt(sigma.dense());
    if (llt.info() != Eigen::Success) {
        fail(ErrorKind::NotPositiveDefinite, "covariance matrix is not positive definite");
    }
    Matrix l = llt.matrixL();
    if (!(l.diagonal().array() > 0.0).all()) {
        fail(ErrorKind::NotPositiveDefinite, "covariance matrix is not positive definite");
    }
    return l;
}

}  // namespace hdspc
