#pragma once

#include "hrp/types.hpp"

#include <vector>

namespace hrp {

/// Optimal linear assignment on a square cost matrix (Hungarian method with
/// potentials, O(N³)). Returns `col_of_row` with col_of_row[i] the column
/// assigned to row i, minimizing Σᵢ cost(i, col_of_row[i]).
std::vector<Eigen::Index> solve_assignment(const Matrix& cost);

}  // namespace hrp
