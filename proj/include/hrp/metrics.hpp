#pragma once

#include "hrp/codes.hpp"
#include "hrp/manifold.hpp"
#include "hrp/types.hpp"

#include <span>
#include <vector>

namespace hrp {

/// Column relabeling J = ΣΠ: column i of D*J is signs[i] * D*(:, perm[i]).
struct SignPermutation {
    std::vector<Eigen::Index> perm;
    std::vector<int> signs;

    static SignPermutation identity(Eigen::Index n);
    /// D J as an explicit matrix.
    Matrix apply(const Matrix& d) const;
};

struct SignPermRmse {
    double rmse = 0.0;
    SignPermutation best;
};

/// min over sign-permutations J of ‖D̂ - D*J‖_F / ‖D*J‖_F.
///
/// For column i matched to D* column k with sign s,
///   ‖D̂ᵢ - s D*ₖ‖² = ‖D̂ᵢ‖² + ‖D*ₖ‖² - 2 s (D*ᵀD̂)ₖᵢ.
/// Summed over a permutation the squared-norm terms are constant, so the
/// minimum is reached by s = sign((D*ᵀD̂)ₖᵢ) and the permutation maximizing
/// Σᵢ |(D*ᵀD̂)_{π(i),i}|: a linear assignment on |D*ᵀD̂|. For unit columns
/// this gives min_J ‖D̂ - D*J‖²_F = 2N - 2·maxassign(|D*ᵀD̂|). The returned
/// value is then evaluated directly from the optimal J to keep precision
/// near zero.
SignPermRmse sign_perm_rmse(const Matrix& dhat, const Matrix& dstar);
SignPermRmse sign_perm_rmse(const OrthoDict& dhat, const OrthoDict& dstar);

/// Scales every column to unit norm (zero columns are left untouched).
Matrix normalize_columns(const Matrix& d);

/// min over n and s ∈ {±1} of ‖d̂ - s D*(:, n)‖ / ‖D*(:, n)‖.
double atom_error(const UnitVector& dhat, const OrthoDict& dstar);

/// Fraction of entries strictly below `threshold`. Throws InvalidInput on an empty list.
double success_rate(std::span<const double> errors, double threshold = 1e-3);

/// √(Σ_Λ (ŷ - y)² / Σ_Λ y²) over observed positions Λ.
double masked_rmse(const Matrix& yhat, const Matrix& y, const Mask& mask);

/// ⌊N / T0⌋.
Eigen::Index compression_ratio(Eigen::Index n, const SparsityBudget& b);

}  // namespace hrp
