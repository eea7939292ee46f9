#pragma once

#include "hrp/codes.hpp"
#include "hrp/manifold.hpp"
#include "hrp/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hrp {

/// Solver knobs shared by both stages, the sphere variant and the baselines.
struct HrpConfig {
    double stage1_tol = 1e-8;     // ‖D⁺ - D‖_F / √N stopping threshold
    int stage1_max_iters = 500;
    double tau0 = 0.1;            // Stage-Two initial step
    double eta = 0.8;             // geometric step decay
    double stage2_min_step = 1e-12;
    int stage2_max_iters = 200;
    int restarts = 1;             // sphere variant only
    std::uint64_t seed = 0;

    /// Throws InvalidInput on out-of-range values.
    void validate() const;
};

struct RecoveryReport {
    std::vector<double> objective_trace;  // Stage-One objective, initial point first
    int stage1_iters = 0;
    int stage2_iters = 0;
    bool stage1_converged = false;
    double wall_time_seconds = 0.0;
    std::vector<double> restart_objectives;
    std::vector<std::string> warnings;
};

/// Called with (iteration, iterate) after every update, iterate 0 being the start point.
using IterateObserver = std::function<void(int, const Matrix&)>;

// Objectives and (sub)gradients. All take the dictionary as a plain matrix so
// they can be evaluated off the manifold; the averaging is over the L columns.

/// -(1/L) Σᵢ ‖Dᵀyᵢ‖³₃
double l3_objective(const Matrix& d, const DataMatrix& y);
double l3_objective(const OrthoDict& d, const DataMatrix& y);

/// (1/L) Y (|DᵀY| ⊙ DᵀY)ᵀ. This is one third of the gradient of -l3_objective;
/// the factor is dropped because the polar step ignores positive scaling.
Matrix l3_gradient(const Matrix& d, const DataMatrix& y);
Matrix l3_gradient(const OrthoDict& d, const DataMatrix& y);

/// -(1/L) Σᵢ ‖Dᵀyᵢ‖⁴₄
double l4_objective(const Matrix& d, const DataMatrix& y);

/// (1/L) Y ((DᵀY)^∘3)ᵀ, one quarter of the gradient of -l4_objective.
Matrix l4_gradient(const Matrix& d, const DataMatrix& y);

/// (1/L) Σᵢ ‖Dᵀyᵢ‖₁
double l1_objective(const Matrix& d, const DataMatrix& y);

/// (1/L) Y sign(DᵀY)ᵀ with sign(0) = 0.
Matrix l1_subgradient(const Matrix& d, const DataMatrix& y);

/// Generalized power iterations D ← Polar(l3_gradient(D)) from `init`.
/// Throws DegenerateInput if Y is identically zero.
std::pair<OrthoDict, RecoveryReport> gpm_stage_one(const DataMatrix& y, const HrpConfig& cfg,
                                                   const OrthoDict& init,
                                                   const IterateObserver& observer = {});

/// Projected subgradient descent on (1/L)Σ‖Dᵀyᵢ‖₁ over {D : RᵀD + DᵀR = 2I},
/// starting at R, with steps τ₀ηᵗ along tangent directions at the fixed anchor R.
std::pair<Matrix, RecoveryReport> rpg_stage_two(const DataMatrix& y, const OrthoDict& r,
                                                const HrpConfig& cfg,
                                                const IterateObserver& observer = {});

/// Full two-stage solver: seeded random orthogonal start, Stage One, Stage Two,
/// then projection back onto the orthogonal group.
std::pair<OrthoDict, RecoveryReport> hrp_learn(const DataMatrix& y, const HrpConfig& cfg);
std::pair<OrthoDict, RecoveryReport> hrp_learn(const DataMatrix& y, const HrpConfig& cfg,
                                               const OrthoDict& init);

/// Stage One alone from a seeded random start (the "stage1-only" baseline).
std::pair<OrthoDict, RecoveryReport> stage_one_learn(const DataMatrix& y, const HrpConfig& cfg);

/// Single-atom recovery on the sphere with `cfg.restarts` uniform random starts.
/// Returns the refined atom with the largest (1/L)Σ|dᵀyᵢ|³.
std::pair<UnitVector, RecoveryReport> hrp_learn_atom(const DataMatrix& y, const HrpConfig& cfg);

/// (1/L)Σ|dᵀyᵢ|³ for a single atom.
double atom_l3_score(const Vector& d, const DataMatrix& y);

/// ℓ4 matching-stretching-projection baseline: D ← Polar((1/L) Y ((DᵀY)^∘3)ᵀ).
/// Its objective_trace records l4_objective.
std::pair<OrthoDict, RecoveryReport> msp_l4_learn(const DataMatrix& y, const HrpConfig& cfg);
std::pair<OrthoDict, RecoveryReport> msp_l4_learn(const DataMatrix& y, const HrpConfig& cfg,
                                                  const OrthoDict& init);

/// Whitens Y: ((1/L) Y Yᵀ)^{-1/2} Y. Throws ConditioningError when the smallest
/// covariance eigenvalue is not above 1e-12 times the largest.
DataMatrix precondition(const DataMatrix& y);

/// Y Xᵀ (X Xᵀ)⁻¹. Throws ConditioningError when X Xᵀ is numerically singular.
Matrix least_squares_dictionary(const Matrix& y, const Matrix& x);

struct CompleteDictResult {
    Matrix dictionary;       // general complete N x N dictionary
    SparseCodeMatrix codes;  // satisfies dictionary * codes ≈ Y
    OrthoDict whitened_dictionary;
    RecoveryReport report;
};

/// Complete (square, invertible, not necessarily orthogonal) dictionary
/// learning: whiten, learn an orthogonal dictionary, read off intermediate
/// codes, recover the dictionary by least squares. With a budget the returned
/// codes are hard-thresholded columnwise.
CompleteDictResult complete_dict_learn(const DataMatrix& y, const HrpConfig& cfg,
                                       std::optional<SparsityBudget> budget = std::nullopt);

}  // namespace hrp
