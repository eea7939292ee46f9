#pragma once

#include "hrp/manifold.hpp"
#include "hrp/random.hpp"
#include "hrp/types.hpp"

#include <cstdint>

namespace hrp {

struct BgParams {
    Eigen::Index n = 1;
    Eigen::Index l = 1;
    double theta = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Entries b·g with b ~ Ber(θ), g ~ N(0, 1), independent, fully determined by the seed.
SparseCodeMatrix gen_bernoulli_gaussian(const BgParams& p);

/// Haar-distributed orthogonal matrix: QR of an i.i.d. standard normal matrix
/// with each column of Q flipped so the matching diagonal entry of R is positive.
OrthoDict gen_random_orthogonal(Eigen::Index n, std::uint64_t seed);

/// Uniformly distributed point on the unit sphere.
UnitVector gen_random_unit_vector(Eigen::Index n, std::uint64_t seed);

/// Y = D X, every entry observed.
DataMatrix gen_observations(const OrthoDict& d, const SparseCodeMatrix& x);

/// Matrix of i.i.d. standard normal entries.
Matrix gen_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Xoshiro256& rng);

}  // namespace hrp
