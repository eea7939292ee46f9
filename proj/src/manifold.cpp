#include "hrp/manifold.hpp"

#include "hrp/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace hrp {

double orthogonality_residual(const Matrix& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    const Matrix gram = m.transpose() * m;
    return (gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

OrthoDict OrthoDict::certify(Matrix m, double tolerance)
{
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw InvalidInput("orthogonal dictionary must be a non-empty square matrix, got "
                           + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
        throw InvalidInput("orthogonal dictionary has non-finite entries");
    }
    if (!(tolerance >= 0.0)) {
        throw InvalidInput("orthogonality tolerance must be nonnegative");
    }
    const double residual = orthogonality_residual(m);
    if (residual > tolerance) {
        throw InvalidInput("matrix is not orthogonal: max|DᵀD - I| = " + std::to_string(residual));
    }
    return OrthoDict(std::move(m), tolerance);
}

OrthoDict OrthoDict::identity(Eigen::Index n)
{
    return certify(Matrix::Identity(n, n));
}

double OrthoDict::ortho_residual() const
{
    return orthogonality_residual(data_);
}

UnitVector UnitVector::certify(Vector v)
{
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > kTolerance) {
        throw InvalidInput("vector is not unit norm");
    }
    return UnitVector(std::move(v));
}

OrthoDict polar(const Matrix& c)
{
    if (c.rows() != c.cols() || c.rows() < 1) {
        throw InvalidInput("polar: expected a non-empty square matrix");
    }
    if (!c.allFinite()) {
        throw InvalidInput("polar: input has non-finite entries");
    }
    // Jacobi SVD is deterministic and accurate for the small dense N the
    // solvers use; singular directions of a rank-deficient C are still
    // completed to an orthonormal basis.
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix q = svd.matrixU() * svd.matrixV().transpose();
    return OrthoDict::certify(std::move(q));
}

OrthoDict project_orthogonal(const Matrix& d)
{
    return polar(d);
}

Matrix tangent_project(const OrthoDict& r, const Matrix& a)
{
    if (a.rows() != r.n() || a.cols() != r.n()) {
        throw DimensionMismatch("tangent_project: A must be " + std::to_string(r.n()) + "x"
                                + std::to_string(r.n()));
    }
    const Matrix& rm = r.matrix();
    return 0.5 * (a - rm * a.transpose() * rm);
}

Vector sphere_tangent_project(const UnitVector& r, const Vector& a)
{
    if (a.size() != r.size()) {
        throw DimensionMismatch("sphere_tangent_project: dimension mismatch");
    }
    const Vector& rv = r.vector();
    return a - rv * rv.dot(a);
}

UnitVector normalize_to_sphere(const Vector& d)
{
    if (!d.allFinite()) {
        throw DegenerateInput("normalize_to_sphere: non-finite vector");
    }
    const double norm = d.norm();
    if (!(norm > 1e-300)) {
        throw DegenerateInput("normalize_to_sphere: zero vector has no direction");
    }
    return UnitVector(d / norm);
}

bool in_good_subset(const UnitVector& d, const GoodSubsetQuery& q)
{
    const auto n = static_cast<Eigen::Index>(q.atom_index);
    if (n >= d.size()) {
        throw InvalidInput("in_good_subset: atom index " + std::to_string(q.atom_index)
                           + " out of range for dimension " + std::to_string(d.size()));
    }
    if (!(q.zeta > 0.0)) {
        throw InvalidInput("in_good_subset: zeta must be positive");
    }
    const double dn = d[n];
    const bool sign_ok = q.sign == Sign::Positive ? dn > 0.0 : dn < 0.0;
    if (!sign_ok) {
        return false;
    }
    double rest = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (i != n) {
            rest = std::max(rest, std::abs(d[i]));
        }
    }
    if (rest == 0.0) {
        return true;
    }
    return (dn * dn) / (rest * rest) >= 1.0 + q.zeta;
}

}  // namespace hrp
