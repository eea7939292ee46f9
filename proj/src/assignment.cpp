#include "hrp/assignment.hpp"

#include "hrp/error.hpp"

#include <limits>

namespace hrp {

std::vector<Eigen::Index> solve_assignment(const Matrix& cost)
{
    if (cost.rows() != cost.cols()) {
        throw DimensionMismatch("solve_assignment: cost matrix must be square");
    }
    if (!cost.allFinite()) {
        throw InvalidInput("solve_assignment: cost matrix has non-finite entries");
    }
    const Eigen::Index n = cost.rows();
    const double inf = std::numeric_limits<double>::infinity();

    // One-based potentials; row 0 / column 0 are the virtual start.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<Eigen::Index> row_of_col(n + 1, 0), way(n + 1, 0);

    for (Eigen::Index i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        Eigen::Index j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const Eigen::Index i0 = row_of_col[j0];
            double delta = inf;
            Eigen::Index j1 = 0;
            for (Eigen::Index j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (Eigen::Index j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const Eigen::Index j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<Eigen::Index> col_of_row(n, 0);
    for (Eigen::Index j = 1; j <= n; ++j) {
        col_of_row[row_of_col[j] - 1] = j - 1;
    }
    return col_of_row;
}

}  // namespace hrp
