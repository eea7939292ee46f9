#pragma once

#include "hrp/types.hpp"

#include <cstddef>

namespace hrp {

/// Square matrix with certified orthogonality: max|DᵀD - I| <= tolerance.
///
/// The only ways to obtain one are `OrthoDict::certify`, which checks an
/// arbitrary matrix, and the polar factor routines below, which produce an
/// orthogonal matrix by construction and certify it on the way out.
class OrthoDict {
public:
    static constexpr double kDefaultTolerance = 1e-10;

    /// Throws InvalidInput if `m` is not square, not finite, or fails the check.
    static OrthoDict certify(Matrix m, double tolerance = kDefaultTolerance);

    static OrthoDict identity(Eigen::Index n);

    const Matrix& matrix() const { return data_; }
    Eigen::Index n() const { return data_.rows(); }
    double tolerance() const { return tolerance_; }

    /// max-abs entry of DᵀD - I.
    double ortho_residual() const;

    auto col(Eigen::Index j) const { return data_.col(j); }

private:
    OrthoDict(Matrix m, double tol) : data_(std::move(m)), tolerance_(tol) {}

    Matrix data_;
    double tolerance_;
};

/// max-abs entry of MᵀM - I.
double orthogonality_residual(const Matrix& m);

/// Real vector with |‖d‖ - 1| <= 1e-12.
class UnitVector {
public:
    static constexpr double kTolerance = 1e-12;

    /// Throws InvalidInput unless `v` already has unit norm.
    static UnitVector certify(Vector v);

    const Vector& vector() const { return data_; }
    Eigen::Index size() const { return data_.size(); }
    double operator[](Eigen::Index i) const { return data_[i]; }

private:
    explicit UnitVector(Vector v) : data_(std::move(v)) {}
    friend UnitVector normalize_to_sphere(const Vector& d);

    Vector data_;
};

enum class Sign { Positive, Negative };

struct GoodSubsetQuery {
    std::size_t atom_index;  // zero-based
    Sign sign;
    double zeta;
};

/// Orthogonal factor U Vᵀ of C = U Σ Vᵀ. Maximizes ⟨S, C⟩ over the orthogonal
/// group. Rank-deficient inputs are accepted; the result is whichever
/// maximizer the factorization yields, deterministic per input.
OrthoDict polar(const Matrix& c);

/// Nearest orthogonal matrix in Frobenius norm; same as `polar`.
OrthoDict project_orthogonal(const Matrix& d);

/// ½(A - R Aᵀ R): projection onto the tangent space of the orthogonal group at R.
Matrix tangent_project(const OrthoDict& r, const Matrix& a);

/// (I - r rᵀ) a.
Vector sphere_tangent_project(const UnitVector& r, const Vector& a);

/// d / ‖d‖. Throws DegenerateInput if ‖d‖ <= 1e-300 or d is not finite.
UnitVector normalize_to_sphere(const Vector& d);

/// Coordinate `atom_index` carries the queried sign and dominates every other
/// coordinate: d_n² / ‖d_{-n}‖²_∞ >= 1 + ζ. A zero remainder counts as an
/// infinite ratio.
bool in_good_subset(const UnitVector& d, const GoodSubsetQuery& q);

}  // namespace hrp
