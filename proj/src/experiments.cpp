#include "hrp/experiments.hpp"

#include "hrp/error.hpp"
#include "hrp/random.hpp"
#include "hrp/synth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace hrp {

namespace {

constexpr std::uint64_t kDictionaryStream = 0xD1C7;
constexpr std::uint64_t kCodeStream = 0xC0DE;
constexpr std::uint64_t kSolverStream = 0x501F;

// Runs body(i) for i in [0, count) on up to `jobs` threads. Results are
// written by index, so output never depends on scheduling.
template <class Body>
void parallel_for(std::size_t count, int jobs, Body&& body)
{
    const auto workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

double mean(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double median(std::vector<double> v)
{
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::Hrp:
        return "hrp";
    case Method::StageOneOnly:
        return "stage1-only";
    case Method::L4Msp:
        return "l4-msp";
    }
    return "unknown";
}

Method parse_method(const std::string& name)
{
    if (name == "hrp") {
        return Method::Hrp;
    }
    if (name == "stage1-only") {
        return Method::StageOneOnly;
    }
    if (name == "l4-msp") {
        return Method::L4Msp;
    }
    throw InvalidInput("unknown method '" + name + "' (expected hrp, stage1-only or l4-msp)");
}

std::string to_string(DictionaryMode m)
{
    return m == DictionaryMode::Fixed ? "fixed" : "resampled";
}

DictionaryMode parse_dictionary_mode(const std::string& name)
{
    if (name == "fixed") {
        return DictionaryMode::Fixed;
    }
    if (name == "resampled") {
        return DictionaryMode::Resampled;
    }
    throw InvalidInput("unknown dictionary mode '" + name + "' (expected fixed or resampled)");
}

std::string to_string(Variant v)
{
    return v == Variant::Orthogonal ? "orthogonal" : "sphere";
}

Variant parse_variant(const std::string& name)
{
    if (name == "orthogonal") {
        return Variant::Orthogonal;
    }
    if (name == "sphere") {
        return Variant::Sphere;
    }
    throw InvalidInput("unknown variant '" + name + "' (expected orthogonal or sphere)");
}

Trial make_trial(Eigen::Index n, Eigen::Index l, double theta, std::uint64_t base_seed,
                 std::uint64_t trial, DictionaryMode mode)
{
    const std::uint64_t seed = trial_seed(base_seed, trial);
    const std::uint64_t dict_seed = mode == DictionaryMode::Fixed
                                        ? derive_seed(base_seed, kDictionaryStream)
                                        : derive_seed(seed, kDictionaryStream);
    OrthoDict truth = gen_random_orthogonal(n, dict_seed);
    SparseCodeMatrix codes = gen_bernoulli_gaussian({n, l, theta, derive_seed(seed, kCodeStream)});
    DataMatrix y = gen_observations(truth, codes);
    return Trial{std::move(truth), std::move(codes), std::move(y), derive_seed(seed, kSolverStream)};
}

Eigen::Index sample_count(Eigen::Index n, double exponent)
{
    const double l = std::round(10.0 * std::pow(static_cast<double>(n), exponent));
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(l));
}

int default_restarts(Eigen::Index n)
{
    return std::max(1, static_cast<int>(std::ceil(5.0 * std::log(static_cast<double>(n)))));
}

void PhaseOptions::validate() const
{
    if (n_list.empty() || l_exponents.empty() || thetas.empty()) {
        throw InvalidInput("phase: dimension, exponent and theta lists must be non-empty");
    }
    for (const auto n : n_list) {
        if (n < 1) {
            throw InvalidInput("phase: dimensions must be >= 1");
        }
    }
    for (const double th : thetas) {
        if (!(th >= 0.0 && th <= 1.0)) {
            throw InvalidInput("phase: theta must lie in [0, 1]");
        }
    }
    if (trials < 1) {
        throw InvalidInput("phase: trials must be >= 1");
    }
    if (!(threshold > 0.0)) {
        throw InvalidInput("phase: threshold must be positive");
    }
    config.validate();
}

std::vector<PhaseCell> run_phase(const PhaseOptions& opts)
{
    opts.validate();
    std::vector<PhaseCell> cells;
    for (const auto n : opts.n_list) {
        for (const double theta : opts.thetas) {
            for (const double exponent : opts.l_exponents) {
                PhaseCell cell;
                cell.n = n;
                cell.theta = theta;
                cell.exponent = exponent;
                cell.l = sample_count(n, exponent);
                cell.trials = opts.trials;
                cells.push_back(cell);
            }
        }
    }
    for (auto& cell : cells) {
        cell.errors.assign(static_cast<std::size_t>(cell.trials), 0.0);
        parallel_for(cell.errors.size(), opts.jobs, [&](std::size_t t) {
            const Trial trial = make_trial(cell.n, cell.l, cell.theta, opts.seed, t, opts.dictionary);
            HrpConfig cfg = opts.config;
            cfg.seed = trial.solver_seed;
            double err = 2.0;
            try {
                if (opts.variant == Variant::Orthogonal) {
                    err = sign_perm_rmse(hrp_learn(trial.observations, cfg).first, trial.truth).rmse;
                } else {
                    if (opts.auto_restarts) {
                        cfg.restarts = default_restarts(cell.n);
                    }
                    err = atom_error(hrp_learn_atom(trial.observations, cfg).first, trial.truth);
                }
            } catch (const DegenerateInput&) {
                // All-zero draws (tiny L or θ) are counted as failures.
            }
            cell.errors[t] = err;
        });
        cell.successes = static_cast<int>(
            std::count_if(cell.errors.begin(), cell.errors.end(),
                          [&](double e) { return e < opts.threshold; }));
        cell.success_rate = success_rate(cell.errors, opts.threshold);
    }
    return cells;
}

void BenchOptions::validate() const
{
    if (methods.empty() || thetas.empty() || ls.empty()) {
        throw InvalidInput("bench: method, theta and sample-size lists must be non-empty");
    }
    if (n < 1) {
        throw InvalidInput("bench: n must be >= 1");
    }
    for (const double th : thetas) {
        if (!(th >= 0.0 && th <= 1.0)) {
            throw InvalidInput("bench: theta must lie in [0, 1]");
        }
    }
    for (const auto l : ls) {
        if (l < 1) {
            throw InvalidInput("bench: sample sizes must be >= 1");
        }
    }
    if (trials < 1) {
        throw InvalidInput("bench: trials must be >= 1");
    }
    config.validate();
}

std::vector<BenchRow> run_bench(const BenchOptions& opts)
{
    opts.validate();
    std::vector<BenchRow> rows;
    const std::size_t nm = opts.methods.size();
    for (const double theta : opts.thetas) {
        for (const auto l : opts.ls) {
            const std::size_t first = rows.size();
            for (const Method m : opts.methods) {
                BenchRow row;
                row.method = m;
                row.n = opts.n;
                row.theta = theta;
                row.l = l;
                row.trials = opts.trials;
                row.rmse.assign(static_cast<std::size_t>(opts.trials), 0.0);
                row.seconds.assign(static_cast<std::size_t>(opts.trials), 0.0);
                rows.push_back(std::move(row));
            }
            parallel_for(static_cast<std::size_t>(opts.trials), opts.jobs, [&](std::size_t t) {
                const Trial trial = make_trial(opts.n, l, theta, opts.seed, t, opts.dictionary);
                HrpConfig cfg = opts.config;
                cfg.seed = trial.solver_seed;
                for (std::size_t k = 0; k < nm; ++k) {
                    BenchRow& row = rows[first + k];
                    std::pair<OrthoDict, RecoveryReport> result = [&] {
                        switch (row.method) {
                        case Method::Hrp:
                            return hrp_learn(trial.observations, cfg);
                        case Method::StageOneOnly:
                            return stage_one_learn(trial.observations, cfg);
                        case Method::L4Msp:
                            return msp_l4_learn(trial.observations, cfg);
                        }
                        throw InvalidInput("unknown method");
                    }();
                    row.rmse[t] = sign_perm_rmse(result.first, trial.truth).rmse;
                    row.seconds[t] = result.second.wall_time_seconds;
                }
            });
            for (std::size_t k = 0; k < nm; ++k) {
                BenchRow& row = rows[first + k];
                row.mean_rmse = mean(row.rmse);
                row.median_rmse = median(row.rmse);
                row.mean_seconds = mean(row.seconds);
            }
        }
    }
    return rows;
}

CompressReport run_compress(const SensorTable& table, const std::vector<Eigen::Index>& t0s,
                            const HrpConfig& cfg)
{
    const Eigen::Index n = table.sensors();
    std::vector<SparsityBudget> budgets;
    for (const auto t0 : t0s) {
        budgets.emplace_back(t0, n);
    }
    const DataMatrix filled = mean_fill(table);

    CompressReport report;
    report.n = n;
    report.l = table.slots();
    auto [dict, learn] = hrp_learn(filled, cfg);
    report.learn_seconds = learn.wall_time_seconds;
    report.learn = std::move(learn);

    for (const auto& b : budgets) {
        const auto start = std::chrono::steady_clock::now();
        const SparseCodeMatrix codes = sparse_codes(dict, filled, b);
        const DataMatrix approx = reconstruct(dict, codes);
        CompressRow row;
        row.coding_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.t0 = b.t0();
        row.ratio = compression_ratio(n, b);
        row.masked_rmse = masked_rmse(approx.values, table.values, table.mask);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace hrp
