#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "gazeclf/errors.hpp"

namespace gazeclf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Feature rows plus binary labels (1 = trainee) and row identifiers.
struct FeatureTable {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> ids;
    std::vector<std::string> column_names;

    Eigen::Index rows() const { return features.rows(); }
    Eigen::Index cols() const { return features.cols(); }
};

inline Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

inline std::vector<int> select(const std::vector<int>& v, const std::vector<std::size_t>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

/// Pairwise squared Euclidean distances between the rows of a and b.
inline Matrix squared_distances(const Matrix& a, const Matrix& b) {
    const Vector an = a.rowwise().squaredNorm();
    const Vector bn = b.rowwise().squaredNorm();
    Matrix d = -2.0 * (a * b.transpose());
    d.colwise() += an;
    d.rowwise() += bn.transpose();
    return d.cwiseMax(0.0);
}

struct SymmetricEigen {
    Vector values;   // descending
    Matrix vectors;  // column j pairs with values(j)
};

/// Eigendecomposition of a symmetric matrix (Eigen's tridiagonal QR
/// solver). Eigenvalues come back sorted descending; each eigenvector is
/// sign-normalised so that its largest-magnitude entry is non-negative.
inline SymmetricEigen symmetric_eigen(const Matrix& input) {
    require(input.rows() == input.cols(), ErrorKind::DimensionMismatch, "symmetric_eigen needs a square matrix");
    const Eigen::Index n = input.rows();
    const Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (input + input.transpose()));
    require(solver.info() == Eigen::Success, ErrorKind::DegenerateData, "symmetric eigensolver did not converge");

    // Eigen returns ascending order.
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = n - 1 - j;
        out.values(j) = solver.eigenvalues()(src);
        Vector col = solver.eigenvectors().col(src);
        Eigen::Index arg = 0;
        col.cwiseAbs().maxCoeff(&arg);
        if (col(arg) < 0.0) col = -col;
        out.vectors.col(j) = col;
    }
    return out;
}

}  // namespace gazeclf
