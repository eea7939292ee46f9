#include "hrp/synth.hpp"

#include "hrp/error.hpp"

#include <boost/random/normal_distribution.hpp>

#include <Eigen/QR>

#include <string>

namespace hrp {

void BgParams::validate() const
{
    if (n < 1 || l < 1) {
        throw InvalidInput("Bernoulli-Gaussian parameters need n >= 1 and l >= 1");
    }
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw InvalidInput("Bernoulli rate must lie in [0, 1], got " + std::to_string(theta));
    }
}

Matrix gen_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Xoshiro256& rng)
{
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = normal(rng);
        }
    }
    return m;
}

SparseCodeMatrix gen_bernoulli_gaussian(const BgParams& p)
{
    p.validate();
    Xoshiro256 rng(p.seed);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    SparseCodeMatrix x(p.n, p.l);
    for (Eigen::Index j = 0; j < p.l; ++j) {
        for (Eigen::Index i = 0; i < p.n; ++i) {
            // Both draws are always taken so the stream layout does not depend on θ.
            const bool on = rng.uniform01() < p.theta;
            const double g = normal(rng);
            x(i, j) = on ? g : 0.0;
        }
    }
    return x;
}

OrthoDict gen_random_orthogonal(Eigen::Index n, std::uint64_t seed)
{
    if (n < 1) {
        throw InvalidInput("gen_random_orthogonal: n must be >= 1");
    }
    Xoshiro256 rng(seed);
    const Matrix g = gen_gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) = -q.col(j);
        }
    }
    return OrthoDict::certify(std::move(q));
}

UnitVector gen_random_unit_vector(Eigen::Index n, std::uint64_t seed)
{
    if (n < 1) {
        throw InvalidInput("gen_random_unit_vector: n must be >= 1");
    }
    Xoshiro256 rng(seed);
    return normalize_to_sphere(gen_gaussian_matrix(n, 1, rng).col(0));
}

DataMatrix gen_observations(const OrthoDict& d, const SparseCodeMatrix& x)
{
    if (x.rows() != d.n()) {
        throw DimensionMismatch("gen_observations: code matrix has " + std::to_string(x.rows())
                                + " rows, dictionary is " + std::to_string(d.n()) + "x"
                                + std::to_string(d.n()));
    }
    return DataMatrix(d.matrix() * x);
}

}  // namespace hrp
