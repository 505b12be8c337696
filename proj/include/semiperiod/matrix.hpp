#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

namespace semiperiod {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Elementwise maximum absolute difference.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Largest deviation of any row sum from 1.
inline double row_sum_error(const Matrix& m) {
    return (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

inline Matrix zeros(std::size_t n) {
    auto dim = static_cast<Eigen::Index>(n);
    return Matrix::Zero(dim, dim);
}

inline Matrix identity(std::size_t n) {
    auto dim = static_cast<Eigen::Index>(n);
    return Matrix::Identity(dim, dim);
}

}  // namespace semiperiod
