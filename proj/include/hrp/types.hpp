#pragma once

#include <Eigen/Dense>

#include <optional>

namespace hrp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// N x L matrix of codes, one code vector per column.
using SparseCodeMatrix = Matrix;

/// N x L sample collection, one sample per column. A missing mask means
/// every entry is observed.
struct DataMatrix {
    Matrix values;
    std::optional<Mask> mask;

    DataMatrix() = default;
    explicit DataMatrix(Matrix v, std::optional<Mask> m = std::nullopt)
        : values(std::move(v)), mask(std::move(m)) {}

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    bool fully_observed() const { return !mask.has_value() || mask->all(); }
};

}  // namespace hrp
