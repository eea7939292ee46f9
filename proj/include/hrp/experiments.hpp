#pragma once

#include "hrp/ingest.hpp"
#include "hrp/learner.hpp"
#include "hrp/metrics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hrp {

/// Whether Monte-Carlo trials share one ground-truth dictionary per dimension
/// or draw a fresh one per trial.
enum class DictionaryMode { Fixed, Resampled };

enum class Variant { Orthogonal, Sphere };

enum class Method { Hrp, StageOneOnly, L4Msp };

std::string to_string(Method m);
Method parse_method(const std::string& name);  // throws InvalidInput
std::string to_string(DictionaryMode m);
DictionaryMode parse_dictionary_mode(const std::string& name);
std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Seed for trial `trial` under base seed `seed`: seed ⊕ trial.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return seed ^ trial; }

/// One synthetic problem Y = D*X* plus the seed the solver should use.
struct Trial {
    OrthoDict truth;
    SparseCodeMatrix codes;
    DataMatrix observations;
    std::uint64_t solver_seed;
};

Trial make_trial(Eigen::Index n, Eigen::Index l, double theta, std::uint64_t base_seed,
                 std::uint64_t trial, DictionaryMode mode);

/// round(10 · n^exponent), at least 1.
Eigen::Index sample_count(Eigen::Index n, double exponent);

/// ⌈5 ln n⌉, at least 1.
int default_restarts(Eigen::Index n);

struct PhaseOptions {
    std::vector<Eigen::Index> n_list{10};
    std::vector<double> l_exponents{0.5, 1.0, 1.5, 2.0, 2.5};
    std::vector<double> thetas{0.2};
    int trials = 10;
    std::uint64_t seed = 0;
    double threshold = 1e-3;
    DictionaryMode dictionary = DictionaryMode::Fixed;
    Variant variant = Variant::Orthogonal;
    HrpConfig config;
    bool auto_restarts = true;  // sphere: ⌈5 ln N⌉ restarts unless overridden
    int jobs = 1;

    void validate() const;
};

struct PhaseCell {
    Eigen::Index n = 0;
    double theta = 0.0;
    double exponent = 0.0;
    Eigen::Index l = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    std::vector<double> errors;
};

/// Success rate per (N, θ, exponent) cell, cells ordered n → θ → exponent.
std::vector<PhaseCell> run_phase(const PhaseOptions& opts);

struct BenchOptions {
    std::vector<Method> methods{Method::Hrp, Method::StageOneOnly, Method::L4Msp};
    Eigen::Index n = 20;
    std::vector<double> thetas{0.2};
    std::vector<Eigen::Index> ls{1000};
    int trials = 10;
    std::uint64_t seed = 0;
    DictionaryMode dictionary = DictionaryMode::Resampled;
    HrpConfig config;
    int jobs = 1;

    void validate() const;
};

struct BenchRow {
    Method method = Method::Hrp;
    Eigen::Index n = 0;
    double theta = 0.0;
    Eigen::Index l = 0;
    int trials = 0;
    double mean_rmse = 0.0;
    double median_rmse = 0.0;
    double mean_seconds = 0.0;
    std::vector<double> rmse;
    std::vector<double> seconds;
};

/// Paired comparison: in each trial every method sees the same data and the
/// same random start. Rows ordered θ → L → method.
std::vector<BenchRow> run_bench(const BenchOptions& opts);

struct CompressRow {
    Eigen::Index t0 = 0;
    Eigen::Index ratio = 0;
    double masked_rmse = 0.0;
    double coding_seconds = 0.0;
};

struct CompressReport {
    Eigen::Index n = 0;
    Eigen::Index l = 0;
    double learn_seconds = 0.0;
    RecoveryReport learn;
    std::vector<CompressRow> rows;
};

/// Mean-fills the table, learns one dictionary, then codes at each budget and
/// scores reconstruction on observed cells only. Throws InvalidInput if any
/// t0 is outside [1, N].
CompressReport run_compress(const SensorTable& table, const std::vector<Eigen::Index>& t0s,
                            const HrpConfig& cfg);

double median(std::vector<double> v);

}  // namespace hrp
