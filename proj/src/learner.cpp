#include "hrp/learner.hpp"

#include "hrp/error.hpp"
#include "hrp/random.hpp"
#include "hrp/synth.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

namespace hrp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kInitStream = 0x1A17;
constexpr std::uint64_t kRestartStream = 0x5E57;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_square_against(const Matrix& d, const DataMatrix& y, const char* what)
{
    if (d.rows() != d.cols() || d.rows() != y.rows()) {
        std::ostringstream msg;
        msg << what << ": dictionary is " << d.rows() << "x" << d.cols() << " but data has "
            << y.rows() << " rows";
        throw DimensionMismatch(msg.str());
    }
}

double inv_count(const DataMatrix& y)
{
    return y.cols() > 0 ? 1.0 / static_cast<double>(y.cols()) : 0.0;
}

void require_nonzero(const DataMatrix& y, const char* what)
{
    if (y.cols() == 0 || y.rows() == 0) {
        throw DegenerateInput(std::string(what) + ": empty data matrix");
    }
    if (!y.values.allFinite()) {
        throw InvalidInput(std::string(what) + ": data has non-finite entries");
    }
    if ((y.values.array() == 0.0).all()) {
        throw DegenerateInput(std::string(what) + ": data is identically zero, gradient vanishes");
    }
}

OrthoDict random_init(Eigen::Index n, std::uint64_t seed)
{
    return gen_random_orthogonal(n, derive_seed(seed, kInitStream));
}

// Shared loop for polar-of-gradient iterations on a concave objective. Each
// step maximizes the linearization over the orthogonal group, which cannot
// increase the objective.
template <class Gradient, class Objective>
std::pair<OrthoDict, RecoveryReport> power_iterate(const DataMatrix& y, const HrpConfig& cfg,
                                                   const OrthoDict& init, Gradient&& gradient,
                                                   Objective&& objective,
                                                   const IterateObserver& observer)
{
    const auto start = Clock::now();
    RecoveryReport report;
    const double scale = std::sqrt(static_cast<double>(init.n()));

    OrthoDict d = init;
    report.objective_trace.push_back(objective(d.matrix(), y));
    if (observer) {
        observer(0, d.matrix());
    }
    for (int t = 0; t < cfg.stage1_max_iters; ++t) {
        OrthoDict next = polar(gradient(d.matrix(), y));
        const double change = (next.matrix() - d.matrix()).norm() / scale;
        d = std::move(next);
        ++report.stage1_iters;
        report.objective_trace.push_back(objective(d.matrix(), y));
        if (observer) {
            observer(report.stage1_iters, d.matrix());
        }
        if (change < cfg.stage1_tol) {
            report.stage1_converged = true;
            break;
        }
    }
    report.wall_time_seconds = seconds_since(start);
    return {std::move(d), std::move(report)};
}

void warn_if_short(const DataMatrix& y, RecoveryReport& report)
{
    if (y.cols() < y.rows()) {
        report.warnings.push_back("fewer samples than dimensions (L = " + std::to_string(y.cols())
                                  + " < N = " + std::to_string(y.rows())
                                  + "); recovery is unlikely");
    }
}

}  // namespace

void HrpConfig::validate() const
{
    if (!(stage1_tol > 0.0) || !(stage2_min_step > 0.0)) {
        throw InvalidInput("tolerances must be positive");
    }
    if (stage1_max_iters < 0 || stage2_max_iters < 0) {
        throw InvalidInput("iteration caps must be nonnegative");
    }
    if (!(tau0 > 0.0)) {
        throw InvalidInput("tau0 must be positive");
    }
    if (!(eta > 0.0 && eta < 1.0)) {
        throw InvalidInput("eta must lie in (0, 1)");
    }
    if (restarts < 1) {
        throw InvalidInput("restarts must be at least 1");
    }
}

double l3_objective(const Matrix& d, const DataMatrix& y)
{
    check_square_against(d, y, "l3_objective");
    const Matrix z = d.transpose() * y.values;
    return -inv_count(y) * z.array().abs().cube().sum();
}

double l3_objective(const OrthoDict& d, const DataMatrix& y)
{
    return l3_objective(d.matrix(), y);
}

Matrix l3_gradient(const Matrix& d, const DataMatrix& y)
{
    check_square_against(d, y, "l3_gradient");
    const Matrix z = d.transpose() * y.values;
    const Matrix weighted = (z.array().abs() * z.array()).matrix();
    return inv_count(y) * (y.values * weighted.transpose());
}

Matrix l3_gradient(const OrthoDict& d, const DataMatrix& y)
{
    return l3_gradient(d.matrix(), y);
}

double l4_objective(const Matrix& d, const DataMatrix& y)
{
    check_square_against(d, y, "l4_objective");
    const Matrix z = d.transpose() * y.values;
    return -inv_count(y) * z.array().square().square().sum();
}

Matrix l4_gradient(const Matrix& d, const DataMatrix& y)
{
    check_square_against(d, y, "l4_gradient");
    const Matrix z = d.transpose() * y.values;
    return inv_count(y) * (y.values * z.array().cube().matrix().transpose());
}

double l1_objective(const Matrix& d, const DataMatrix& y)
{
    check_square_against(d, y, "l1_objective");
    return inv_count(y) * (d.transpose() * y.values).array().abs().sum();
}

Matrix l1_subgradient(const Matrix& d, const DataMatrix& y)
{
    check_square_against(d, y, "l1_subgradient");
    // Eigen's sign() maps 0 to 0.
    const Matrix s = (d.transpose() * y.values).array().sign().matrix();
    return inv_count(y) * (y.values * s.transpose());
}

std::pair<OrthoDict, RecoveryReport> gpm_stage_one(const DataMatrix& y, const HrpConfig& cfg,
                                                   const OrthoDict& init,
                                                   const IterateObserver& observer)
{
    cfg.validate();
    check_square_against(init.matrix(), y, "gpm_stage_one");
    require_nonzero(y, "gpm_stage_one");
    return power_iterate(
        y, cfg, init, [](const Matrix& d, const DataMatrix& yy) { return l3_gradient(d, yy); },
        [](const Matrix& d, const DataMatrix& yy) { return l3_objective(d, yy); }, observer);
}

std::pair<Matrix, RecoveryReport> rpg_stage_two(const DataMatrix& y, const OrthoDict& r,
                                                const HrpConfig& cfg,
                                                const IterateObserver& observer)
{
    cfg.validate();
    check_square_against(r.matrix(), y, "rpg_stage_two");
    const auto start = Clock::now();
    RecoveryReport report;

    Matrix d = r.matrix();
    if (observer) {
        observer(0, d);
    }
    double tau = cfg.tau0;
    for (int t = 0; t < cfg.stage2_max_iters && tau >= cfg.stage2_min_step; ++t) {
        d -= tau * tangent_project(r, l1_subgradient(d, y));
        tau *= cfg.eta;
        ++report.stage2_iters;
        if (observer) {
            observer(report.stage2_iters, d);
        }
    }
    report.wall_time_seconds = seconds_since(start);
    return {std::move(d), std::move(report)};
}

std::pair<OrthoDict, RecoveryReport> hrp_learn(const DataMatrix& y, const HrpConfig& cfg)
{
    cfg.validate();
    if (y.rows() < 1) {
        throw DegenerateInput("hrp_learn: empty data matrix");
    }
    return hrp_learn(y, cfg, random_init(y.rows(), cfg.seed));
}

std::pair<OrthoDict, RecoveryReport> hrp_learn(const DataMatrix& y, const HrpConfig& cfg,
                                               const OrthoDict& init)
{
    const auto start = Clock::now();
    auto [r, report] = gpm_stage_one(y, cfg, init);
    auto [refined, stage2] = rpg_stage_two(y, r, cfg);
    OrthoDict result = project_orthogonal(refined);
    report.stage2_iters = stage2.stage2_iters;
    warn_if_short(y, report);
    report.wall_time_seconds = seconds_since(start);
    return {std::move(result), std::move(report)};
}

std::pair<OrthoDict, RecoveryReport> stage_one_learn(const DataMatrix& y, const HrpConfig& cfg)
{
    cfg.validate();
    if (y.rows() < 1) {
        throw DegenerateInput("stage_one_learn: empty data matrix");
    }
    const auto start = Clock::now();
    auto result = gpm_stage_one(y, cfg, random_init(y.rows(), cfg.seed));
    warn_if_short(y, result.second);
    result.second.wall_time_seconds = seconds_since(start);
    return result;
}

double atom_l3_score(const Vector& d, const DataMatrix& y)
{
    if (d.size() != y.rows()) {
        throw DimensionMismatch("atom_l3_score: dimension mismatch");
    }
    return inv_count(y) * (y.values.transpose() * d).array().abs().cube().sum();
}

std::pair<UnitVector, RecoveryReport> hrp_learn_atom(const DataMatrix& y, const HrpConfig& cfg)
{
    cfg.validate();
    require_nonzero(y, "hrp_learn_atom");
    const auto start = Clock::now();
    const double inv_l = inv_count(y);
    const Matrix& ym = y.values;

    RecoveryReport report;
    std::optional<UnitVector> best;
    double best_score = -1.0;

    for (int k = 0; k < cfg.restarts; ++k) {
        const std::uint64_t restart_seed =
            derive_seed(cfg.seed, kRestartStream + static_cast<std::uint64_t>(k));
        UnitVector d = gen_random_unit_vector(y.rows(), restart_seed);

        // Stage One: the polar factor of a vector is its normalization.
        int iters1 = 0;
        for (int t = 0; t < cfg.stage1_max_iters; ++t) {
            const Vector z = ym.transpose() * d.vector();
            const Vector grad = inv_l * (ym * (z.array().abs() * z.array()).matrix());
            UnitVector next = normalize_to_sphere(grad);
            const double change = (next.vector() - d.vector()).norm();
            d = std::move(next);
            ++iters1;
            if (change < cfg.stage1_tol) {
                break;
            }
        }

        // Stage Two: subgradient steps restricted to the tangent plane at r.
        const UnitVector r = d;
        Vector refined = r.vector();
        double tau = cfg.tau0;
        int iters2 = 0;
        for (int t = 0; t < cfg.stage2_max_iters && tau >= cfg.stage2_min_step; ++t) {
            const Vector sub = inv_l * (ym * (ym.transpose() * refined).array().sign().matrix());
            refined -= tau * sphere_tangent_project(r, sub);
            tau *= cfg.eta;
            ++iters2;
        }
        UnitVector atom = normalize_to_sphere(refined);

        const double score = atom_l3_score(atom.vector(), y);
        report.restart_objectives.push_back(score);
        report.stage1_iters += iters1;
        report.stage2_iters += iters2;
        if (!best || score > best_score) {
            best_score = score;
            best = std::move(atom);
        }
    }
    warn_if_short(y, report);
    report.wall_time_seconds = seconds_since(start);
    return {std::move(*best), std::move(report)};
}

std::pair<OrthoDict, RecoveryReport> msp_l4_learn(const DataMatrix& y, const HrpConfig& cfg)
{
    cfg.validate();
    if (y.rows() < 1) {
        throw DegenerateInput("msp_l4_learn: empty data matrix");
    }
    return msp_l4_learn(y, cfg, random_init(y.rows(), cfg.seed));
}

std::pair<OrthoDict, RecoveryReport> msp_l4_learn(const DataMatrix& y, const HrpConfig& cfg,
                                                  const OrthoDict& init)
{
    cfg.validate();
    check_square_against(init.matrix(), y, "msp_l4_learn");
    require_nonzero(y, "msp_l4_learn");
    auto result = power_iterate(
        y, cfg, init, [](const Matrix& d, const DataMatrix& yy) { return l4_gradient(d, yy); },
        [](const Matrix& d, const DataMatrix& yy) { return l4_objective(d, yy); }, {});
    warn_if_short(y, result.second);
    return result;
}

DataMatrix precondition(const DataMatrix& y)
{
    if (y.rows() < 1 || y.cols() < 1) {
        throw DegenerateInput("precondition: empty data matrix");
    }
    if (!y.values.allFinite()) {
        throw InvalidInput("precondition: data has non-finite entries");
    }
    const Matrix cov = inv_count(y) * (y.values * y.values.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    const Vector& lambda = eig.eigenvalues();  // ascending
    const double lo = lambda[0];
    const double hi = lambda[lambda.size() - 1];
    if (!(hi > 0.0) || !(lo > 1e-12 * hi)) {
        std::ostringstream msg;
        msg << "precondition: covariance is numerically rank deficient (smallest/largest "
               "eigenvalue ratio = "
            << (hi > 0.0 ? lo / hi : 0.0) << ", need > 1e-12)";
        throw ConditioningError(msg.str());
    }
    const Matrix& v = eig.eigenvectors();
    const Matrix inv_sqrt = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
    return DataMatrix(inv_sqrt * y.values, y.mask);
}

Matrix least_squares_dictionary(const Matrix& y, const Matrix& x)
{
    if (y.cols() != x.cols()) {
        throw DimensionMismatch("least_squares_dictionary: sample counts differ");
    }
    const Matrix gram = x * x.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const Vector& lambda = eig.eigenvalues();
    if (lambda.size() == 0 || !(lambda[0] > 1e-12 * lambda[lambda.size() - 1])) {
        throw ConditioningError("least_squares_dictionary: code Gram matrix X Xᵀ is singular");
    }
    // D = Y Xᵀ G⁻¹  <=>  G Dᵀ = X Yᵀ.
    return gram.ldlt().solve(x * y.transpose()).transpose();
}

CompleteDictResult complete_dict_learn(const DataMatrix& y, const HrpConfig& cfg,
                                       std::optional<SparsityBudget> budget)
{
    const auto start = Clock::now();
    const DataMatrix whitened = precondition(y);
    auto [dbar, report] = hrp_learn(whitened, cfg);
    SparseCodeMatrix xbar = direct_codes(dbar, whitened);
    Matrix dictionary = least_squares_dictionary(y.values, xbar);
    if (budget) {
        for (Eigen::Index j = 0; j < xbar.cols(); ++j) {
            xbar.col(j) = hard_threshold(xbar.col(j), *budget);
        }
    }
    report.wall_time_seconds = seconds_since(start);
    return CompleteDictResult{std::move(dictionary), std::move(xbar), std::move(dbar),
                              std::move(report)};
}

}  // namespace hrp
