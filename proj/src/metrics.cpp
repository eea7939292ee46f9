#include "hrp/metrics.hpp"

#include "hrp/assignment.hpp"
#include "hrp/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hrp {

SignPermutation SignPermutation::identity(Eigen::Index n)
{
    SignPermutation j;
    j.perm.resize(static_cast<std::size_t>(n));
    std::iota(j.perm.begin(), j.perm.end(), Eigen::Index{0});
    j.signs.assign(static_cast<std::size_t>(n), 1);
    return j;
}

Matrix SignPermutation::apply(const Matrix& d) const
{
    Matrix out(d.rows(), static_cast<Eigen::Index>(perm.size()));
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = signs[i] * d.col(perm[i]);
    }
    return out;
}

SignPermRmse sign_perm_rmse(const Matrix& dhat, const Matrix& dstar)
{
    if (dhat.rows() != dstar.rows() || dhat.cols() != dstar.cols()
        || dhat.rows() != dhat.cols()) {
        throw DimensionMismatch("sign_perm_rmse: dictionaries must be square and the same size");
    }
    const Eigen::Index n = dhat.cols();
    const Matrix inner = dstar.transpose() * dhat;  // (k, i) = ⟨D*ₖ, D̂ᵢ⟩

    // Rows of the cost are D̂ columns, columns are D* columns.
    const Matrix cost = -inner.transpose().cwiseAbs();
    const std::vector<Eigen::Index> match = solve_assignment(cost);

    SignPermRmse out;
    out.best.perm = match;
    out.best.signs.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out.best.signs[static_cast<std::size_t>(i)] =
            inner(match[static_cast<std::size_t>(i)], i) < 0.0 ? -1 : 1;
    }
    const Matrix aligned = out.best.apply(dstar);
    const double denom = aligned.norm();
    if (!(denom > 0.0)) {
        throw DegenerateInput("sign_perm_rmse: reference dictionary is zero");
    }
    out.rmse = (dhat - aligned).norm() / denom;
    return out;
}

SignPermRmse sign_perm_rmse(const OrthoDict& dhat, const OrthoDict& dstar)
{
    return sign_perm_rmse(dhat.matrix(), dstar.matrix());
}

Matrix normalize_columns(const Matrix& d)
{
    Matrix out = d;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double norm = out.col(j).norm();
        if (norm > 0.0) {
            out.col(j) /= norm;
        }
    }
    return out;
}

double atom_error(const UnitVector& dhat, const OrthoDict& dstar)
{
    if (dhat.size() != dstar.n()) {
        throw DimensionMismatch("atom_error: atom length differs from dictionary dimension");
    }
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < dstar.n(); ++k) {
        const auto atom = dstar.col(k);
        const double norm = atom.norm();
        for (const double s : {1.0, -1.0}) {
            best = std::min(best, (dhat.vector() - s * atom).norm() / norm);
        }
    }
    return best;
}

double success_rate(std::span<const double> errors, double threshold)
{
    if (errors.empty()) {
        throw InvalidInput("success_rate: empty error list");
    }
    std::size_t hits = 0;
    for (const double e : errors) {
        if (e < threshold) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(errors.size());
}

double masked_rmse(const Matrix& yhat, const Matrix& y, const Mask& mask)
{
    if (yhat.rows() != y.rows() || yhat.cols() != y.cols() || mask.rows() != y.rows()
        || mask.cols() != y.cols()) {
        throw DimensionMismatch("masked_rmse: shapes of estimate, reference and mask differ");
    }
    double err = 0.0;
    double energy = 0.0;
    bool any = false;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            if (!mask(i, j)) {
                continue;
            }
            any = true;
            const double diff = yhat(i, j) - y(i, j);
            err += diff * diff;
            energy += y(i, j) * y(i, j);
        }
    }
    if (!any) {
        throw InvalidInput("masked_rmse: mask selects no entries");
    }
    if (!(energy > 0.0)) {
        throw DegenerateInput("masked_rmse: observed reference entries carry zero energy");
    }
    return std::sqrt(err / energy);
}

Eigen::Index compression_ratio(Eigen::Index n, const SparsityBudget& b)
{
    return n / b.t0();
}

}  // namespace hrp
