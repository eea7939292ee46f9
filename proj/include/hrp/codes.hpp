#pragma once

#include "hrp/manifold.hpp"
#include "hrp/types.hpp"

namespace hrp {

/// Maximum number of nonzeros per code vector, 1 <= t0 <= N.
class SparsityBudget {
public:
    /// Throws InvalidInput unless 1 <= t0 <= n.
    SparsityBudget(Eigen::Index t0, Eigen::Index n);

    Eigen::Index t0() const { return t0_; }

private:
    Eigen::Index t0_;
};

/// X = DᵀY.
SparseCodeMatrix direct_codes(const OrthoDict& d, const DataMatrix& y);

/// Keeps the t0 largest-magnitude entries of v and zeroes the rest. Equal
/// magnitudes are resolved in favour of the lower index.
Vector hard_threshold(const Vector& v, const SparsityBudget& b);

/// Columnwise hard_threshold of DᵀY.
SparseCodeMatrix sparse_codes(const OrthoDict& d, const DataMatrix& y, const SparsityBudget& b);

/// Y = D X. The result is fully observed.
DataMatrix reconstruct(const OrthoDict& d, const SparseCodeMatrix& x);

}  // namespace hrp
