// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "hrp/codes.hpp"
#include "hrp/experiments.hpp"
#include "hrp/ingest.hpp"
#include "hrp/learner.hpp"
#include "hrp/manifold.hpp"
#include "hrp/metrics.hpp"
#include "hrp/synth.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

using namespace hrp;
using hrp::testing::random_matrix;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail)
{
    std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int jobs()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

HrpConfig seeded(std::uint64_t s)
{
    HrpConfig cfg;
    cfg.seed = s;
    return cfg;
}

double max_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void phase_transition()
{
    PhaseOptions opts;
    opts.n_list = {10, 20};
    opts.l_exponents = {0.5, 2.0};
    opts.thetas = {0.2};
    opts.trials = 10;
    opts.jobs = jobs();
    const auto cells = run_phase(opts);
    bool ok = true;
    std::string detail;
    for (const auto& c : cells) {
        const bool high = c.exponent == 2.0;
        ok = ok && (high ? c.success_rate >= 0.9 : c.success_rate <= 0.1);
        detail += "N=" + std::to_string(c.n) + " L=" + std::to_string(c.l) + ": "
                  + fmt("%.1f", c.success_rate) + "; ";
    }
    detail.resize(detail.size() - 2);
    report(1, ok, "phase transition", detail);
}

void sphere_recovery()
{
    const Eigen::Index n = 10;
    int ok = 0;
    for (std::uint64_t t = 0; t < 10; ++t) {
        const Trial trial = make_trial(n, 10 * n * n, 0.2, 2, t, DictionaryMode::Resampled);
        HrpConfig cfg = seeded(trial.solver_seed);
        cfg.restarts = default_restarts(n);
        const auto [atom, rep] = hrp_learn_atom(trial.observations, cfg);
        ok += atom_error(atom, trial.truth) < 1e-6;
    }
    report(2, ok >= 9, "sphere exact recovery", fmt("%.0f/10 trials with atom error < 1e-6", ok));
}

void refinement_helps()
{
    BenchOptions opts;
    opts.n = 20;
    opts.thetas = {0.3};
    opts.ls = {5000};
    opts.trials = 20;
    opts.seed = 3;
    opts.jobs = jobs();
    const auto rows = run_bench(opts);
    const double hrp = rows[0].median_rmse;
    const double s1 = rows[1].median_rmse;
    const double msp = rows[2].median_rmse;
    report(3, hrp <= s1 && hrp <= msp, "refinement helps at finite samples",
           fmt("median rmse hrp %.2e, stage1-only %.2e, l4-msp %.2e", hrp, s1, msp));
}

void monotone_descent()
{
    int bad = 0;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 19);
        const double theta = 0.1 + 0.1 * static_cast<double>(s % 4);
        const Trial t = make_trial(n, 5 * n * n, theta, 4, s, DictionaryMode::Resampled);
        for (const auto& rep : {stage_one_learn(t.observations, seeded(s)).second,
                                msp_l4_learn(t.observations, seeded(s)).second}) {
            for (std::size_t k = 1; k < rep.objective_trace.size(); ++k) {
                const double rise = rep.objective_trace[k] - rep.objective_trace[k - 1];
                worst = std::max(worst, rise);
                bad += rise > 1e-12;
            }
        }
    }
    report(4, bad == 0, "GPM and l4-MSP monotone descent",
           fmt("%.0f violations, largest rise %.1e", bad, worst));
}

void manifold_invariants()
{
    double polar_res = 0.0;
    double tangent_res = 0.0;
    double stage2_res = 0.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 15);
        Matrix c = random_matrix(n, n, 50000 + s);
        if (s % 5 == 0) {
            c.col(0) = c.col(n - 1);
        }
        polar_res = std::max(polar_res, polar(c).ortho_residual());

        const OrthoDict r = gen_random_orthogonal(n, 60000 + s);
        const Matrix p = tangent_project(r, random_matrix(n, n, 70000 + s));
        tangent_res = std::max(tangent_res,
                               max_entry(r.matrix().transpose() * p + p.transpose() * r.matrix()));

        const Eigen::Index m = 2 + static_cast<Eigen::Index>(s % 7);
        const Trial t = make_trial(m, 5 * m * m, 0.3, 5, s, DictionaryMode::Resampled);
        const OrthoDict anchor = gen_random_orthogonal(m, 80000 + s);
        const Matrix two = 2.0 * Matrix::Identity(m, m);
        rpg_stage_two(t.observations, anchor, HrpConfig{}, [&](int, const Matrix& d) {
            const Matrix con = anchor.matrix().transpose() * d + d.transpose() * anchor.matrix();
            stage2_res = std::max(stage2_res, max_entry(con - two));
        });
    }
    const bool ok = polar_res <= 1e-10 && tangent_res <= 1e-12 && stage2_res <= 1e-10;
    report(5, ok, "manifold invariants",
           fmt("polar %.1e, tangent %.1e, stage-two %.1e", polar_res, tangent_res, stage2_res));
}

void metric_oracle()
{
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s % 3);
        const Matrix dstar = gen_random_orthogonal(n, 90000 + s).matrix();
        const Matrix dhat = s % 2 ? gen_random_orthogonal(n, 91000 + s).matrix()
                                  : project_orthogonal(dstar + 0.1 * random_matrix(n, n, s)).matrix();
        worst = std::max(worst, std::abs(sign_perm_rmse(dhat, dstar).rmse
                                         - hrp::testing::brute_force_sign_perm_rmse(dhat, dstar)));
    }
    report(6, worst <= 1e-12, "metric oracle equivalence", fmt("max deviation %.1e", worst));
}

void thresholding()
{
    Xoshiro256 rng(7);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 8);
        const Eigen::Index t0 = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n));
        const Vector v = gen_gaussian_matrix(n, 1, rng).col(0);
        const double ours = (v - hard_threshold(v, SparsityBudget(t0, n))).squaredNorm();
        worst = std::max(worst, std::abs(ours - hrp::testing::best_sparse_error(v, t0)));
    }
    report(7, worst <= 1e-12, "thresholding optimality", fmt("max deviation %.1e", worst));
}

void gradients()
{
    double l3_dev = 0.0;
    double l1_dev = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Matrix d = random_matrix(5, 5, 100000 + s);
        const DataMatrix y(random_matrix(5, 7, 110000 + s));
        const Matrix fd3 = hrp::testing::finite_difference(
            [&](const Matrix& m) { return l3_objective(m, y); }, d);
        l3_dev = std::max(l3_dev, max_entry(fd3 + 3.0 * l3_gradient(d, y))
                                      / (1.0 + max_entry(fd3)));
        const Matrix fd1 = hrp::testing::finite_difference(
            [&](const Matrix& m) { return l1_objective(m, y); }, d);
        l1_dev = std::max(l1_dev, max_entry(fd1 - l1_subgradient(d, y)));
    }
    report(8, l3_dev <= 1e-5 && l1_dev <= 1e-5, "gradient correctness",
           fmt("l3 relative %.1e, l1 %.1e", l3_dev, l1_dev));
}

void compression()
{
    bool ok = true;
    double worst_full = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        Xoshiro256 rng(120000 + s);
        const Eigen::Index n = 4 + static_cast<Eigen::Index>(4 * s);
        SensorTable t;
        t.values = gen_gaussian_matrix(n, 20 * n, rng);
        t.mask = Mask::Constant(n, 20 * n, true);
        for (int h = 0; h < 10; ++h) {
            t.mask(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n)),
                   static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(20 * n))) = false;
        }
        std::vector<Eigen::Index> budgets;
        for (Eigen::Index k = 1; k <= n; ++k) {
            budgets.push_back(k);
        }
        const CompressReport rep = run_compress(t, budgets, seeded(s));
        worst_full = std::max(worst_full, rep.rows.back().masked_rmse);
        for (std::size_t k = 1; k < rep.rows.size(); ++k) {
            ok = ok && rep.rows[k].masked_rmse <= rep.rows[k - 1].masked_rmse;
        }
    }
    const Eigen::Index r5 = compression_ratio(56, SparsityBudget(5, 56));
    const Eigen::Index r28 = compression_ratio(56, SparsityBudget(28, 56));
    ok = ok && worst_full <= 1e-10 && r5 == 11 && r28 == 2;
    report(9, ok, "compression round trip",
           fmt("full-budget rmse %.1e, ratios %.0f and %.0f", worst_full, static_cast<double>(r5),
               static_cast<double>(r28)));
}

void complete_dictionary()
{
    const Eigen::Index n = 10;
    int ok = 0;
    std::vector<double> errs;
    for (std::uint64_t t = 0; t < 10; ++t) {
        const Trial trial = make_trial(n, 10 * n * n, 0.2, 10, t, DictionaryMode::Resampled);
        Matrix a = trial.truth.matrix();
        for (Eigen::Index j = 0; j < n; ++j) {
            a.col(j) *= 1.0 + static_cast<double>(j) / static_cast<double>(n - 1);
        }
        const CompleteDictResult res =
            complete_dict_learn(DataMatrix(a * trial.codes), seeded(trial.solver_seed));
        const double e = sign_perm_rmse(normalize_columns(res.dictionary), normalize_columns(a)).rmse;
        errs.push_back(e);
        ok += e < 5e-2;
    }
    report(10, ok >= 8, "complete-dictionary pipeline",
           fmt("%.0f/10 under 5e-2, median %.3f", ok, median(errs)));
}

void timing()
{
    BenchOptions opts;
    opts.methods = {Method::Hrp, Method::StageOneOnly};
    opts.n = 20;
    opts.thetas = {0.2};
    opts.ls = {1000};
    opts.trials = 5;
    opts.seed = 11;
    const auto rows = run_bench(opts);
    const double hrp = rows[0].mean_seconds;
    const double s1 = rows[1].mean_seconds;
    report(11, s1 < hrp && hrp < 100.0 * s1, "timing sanity",
           fmt("stage1-only %.4fs, hrp %.4fs, ratio %.1f", s1, hrp, hrp / s1));
}

}  // namespace

int main()
{
    const std::vector<std::function<void()>> criteria{
        phase_transition, sphere_recovery, refinement_helps, monotone_descent,
        manifold_invariants, metric_oracle, thresholding, gradients, compression,
        complete_dictionary, timing};
    for (const auto& c : criteria) {
        c();
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
