#include "hrp/codes.hpp"

#include "hrp/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace hrp {

SparsityBudget::SparsityBudget(Eigen::Index t0, Eigen::Index n) : t0_(t0)
{
    if (t0 < 1 || t0 > n) {
        throw InvalidInput("sparsity budget T0 = " + std::to_string(t0) + " must lie in [1, "
                           + std::to_string(n) + "]");
    }
}

SparseCodeMatrix direct_codes(const OrthoDict& d, const DataMatrix& y)
{
    if (y.rows() != d.n()) {
        throw DimensionMismatch("direct_codes: data has " + std::to_string(y.rows())
                                + " rows, dictionary dimension is " + std::to_string(d.n()));
    }
    return d.matrix().transpose() * y.values;
}

Vector hard_threshold(const Vector& v, const SparsityBudget& b)
{
    const Eigen::Index n = v.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&v](Eigen::Index a, Eigen::Index c) {
        return std::abs(v[a]) > std::abs(v[c]);
    });
    Vector out = Vector::Zero(n);
    const Eigen::Index keep = std::min(b.t0(), n);
    for (Eigen::Index k = 0; k < keep; ++k) {
        const Eigen::Index i = order[static_cast<std::size_t>(k)];
        out[i] = v[i];
    }
    return out;
}

SparseCodeMatrix sparse_codes(const OrthoDict& d, const DataMatrix& y, const SparsityBudget& b)
{
    SparseCodeMatrix x = direct_codes(d, y);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        x.col(j) = hard_threshold(x.col(j), b);
    }
    return x;
}

DataMatrix reconstruct(const OrthoDict& d, const SparseCodeMatrix& x)
{
    if (x.rows() != d.n()) {
        throw DimensionMismatch("reconstruct: codes have " + std::to_string(x.rows())
                                + " rows, dictionary dimension is " + std::to_string(d.n()));
    }
    return DataMatrix(d.matrix() * x);
}

}  // namespace hrp
