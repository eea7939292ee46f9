#include "hrp/cli.hpp"

#include "hrp/dictionary_io.hpp"
#include "hrp/error.hpp"
#include "hrp/experiments.hpp"
#include "hrp/ingest.hpp"
#include "hrp/learner.hpp"
#include "hrp/metrics.hpp"
#include "hrp/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hrp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Flag values that pass parsing but are invalid for the data at hand.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverFlags {
    double tol = 1e-8;
    int max_iters = 500;
    double tau0 = 0.1;
    double eta = 0.8;
    double min_step = 1e-12;
    int stage2_max_iters = 200;
    int restarts = 0;  // 0: command default
    std::uint64_t seed = 0;

    void attach(CLI::App& app)
    {
        app.add_option("--seed", seed, "RNG seed")->capture_default_str();
        app.add_option("--tol", tol, "Stage-One relative change tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app.add_option("--max-iters", max_iters, "Stage-One iteration cap")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        app.add_option("--tau0", tau0, "Stage-Two initial step")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app.add_option("--eta", eta, "Stage-Two step decay in (0, 1)")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app.add_option("--min-step", min_step, "Stage-Two step floor")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app.add_option("--stage2-max-iters", stage2_max_iters, "Stage-Two iteration cap")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        app.add_option("--restarts", restarts, "Random restarts for the sphere variant")
            ->check(CLI::PositiveNumber);
    }

    HrpConfig config() const
    {
        HrpConfig cfg;
        cfg.stage1_tol = tol;
        cfg.stage1_max_iters = max_iters;
        cfg.tau0 = tau0;
        cfg.eta = eta;
        cfg.stage2_min_step = min_step;
        cfg.stage2_max_iters = stage2_max_iters;
        cfg.restarts = restarts > 0 ? restarts : 1;
        cfg.seed = seed;
        try {
            cfg.validate();
        } catch (const InvalidInput& e) {
            throw UsageError(e.what());
        }
        return cfg;
    }
};

struct TableFlags {
    std::string input;
    bool transpose = false;
    bool header = false;
    bool row_labels = false;
    std::string delimiter;
    std::vector<std::string> missing_tokens;
    std::optional<double> missing_sentinel;

    void attach(CLI::App& app)
    {
        app.add_option("--input", input, "Delimited text table (rows = sensors, columns = time)")
            ->required();
        app.add_flag("--transpose", transpose, "File rows are time slots instead of sensors");
        app.add_flag("--header", header, "First row holds column labels");
        app.add_flag("--row-labels", row_labels, "First column holds row labels");
        app.add_option("--delimiter", delimiter, "Field separator: ',' or 'tab' (default: auto)");
        app.add_option("--missing-token", missing_tokens,
                       "Cell text marking a missing value (repeatable; default: empty, NaN, nan)");
        app.add_option("--missing-sentinel", missing_sentinel,
                       "Numeric value marking a missing reading, e.g. -10");
    }

    LoadOptions options() const
    {
        LoadOptions opts;
        if (delimiter == "tab" || delimiter == "\\t") {
            opts.delimiter = '\t';
        } else if (delimiter.size() == 1) {
            opts.delimiter = delimiter[0];
        } else if (!delimiter.empty()) {
            throw UsageError("--delimiter must be a single character or 'tab'");
        }
        opts.has_header = header;
        opts.has_row_labels = row_labels;
        opts.transpose = transpose;
        if (!missing_tokens.empty()) {
            opts.missing_tokens = missing_tokens;
            opts.missing_tokens.push_back("");
        }
        opts.missing_sentinel = missing_sentinel;
        return opts;
    }
};

json report_to_json(const RecoveryReport& r)
{
    return {{"stage1_iters", r.stage1_iters},
            {"stage2_iters", r.stage2_iters},
            {"stage1_converged", r.stage1_converged},
            {"wall_time_seconds", r.wall_time_seconds},
            {"objective_trace", r.objective_trace},
            {"restart_objectives", r.restart_objectives},
            {"warnings", r.warnings}};
}

std::string now_iso8601()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error("cannot create output directory '" + dir.string() + "'");
    }
}

/// Writes to `path`, or to `out` when the path is empty.
template <class Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write)
{
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write(file);
    if (!file) {
        throw Error("failed writing '" + path + "'");
    }
}

std::string fmt(double v)
{
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------- synth

struct SynthCommand {
    Eigen::Index n = 10;
    Eigen::Index l = 1000;
    double theta = 0.2;
    std::uint64_t seed = 0;
    std::string output;

    void attach(CLI::App& app)
    {
        app.add_option("--n", n, "Dimension N")->check(CLI::PositiveNumber)->capture_default_str();
        app.add_option("--l", l, "Sample count L")->check(CLI::PositiveNumber)->capture_default_str();
        app.add_option("--theta", theta, "Bernoulli rate")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app.add_option("--seed", seed, "RNG seed")->capture_default_str();
        app.add_option("--output", output, "Output directory")->required();
    }

    int run(std::ostream& out) const
    {
        const fs::path dir(output);
        ensure_directory(dir);
        const Trial trial = make_trial(n, l, theta, seed, 0, DictionaryMode::Resampled);
        write_matrix_csv(dir / "Y.csv", trial.observations.values);
        write_matrix_csv(dir / "X_true.csv", trial.codes);
        write_dictionary(dir / "D_true.json", trial.truth);
        write_json(dir / "manifest.json",
                   {{"command", "synth"},
                    {"n", n},
                    {"l", l},
                    {"theta", theta},
                    {"seed", seed},
                    {"rng", "xoshiro256** (SplitMix64 seeding) + boost::random::normal_distribution"},
                    {"files", {{"data", "Y.csv"}, {"dictionary", "D_true.json"}, {"codes", "X_true.csv"}}},
                    {"generated_at", now_iso8601()}});
        out << "wrote " << (dir / "Y.csv").string() << ", D_true.json, X_true.csv, manifest.json\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- learn

struct LearnCommand {
    TableFlags table;
    SolverFlags solver;
    std::optional<Eigen::Index> t0;
    std::string output;
    std::string truth;

    void attach(CLI::App& app)
    {
        table.attach(app);
        solver.attach(app);
        app.add_option("--t0", t0, "Keep at most T0 nonzeros per code column (default: dense codes)");
        app.add_option("--output", output, "Output directory")->required();
        app.add_option("--truth", truth, "Ground-truth dictionary JSON; adds an rmse field");
    }

    int run(std::ostream& out) const
    {
        if (t0 && *t0 < 1) {
            throw UsageError("--t0 must be >= 1");
        }
        const HrpConfig cfg = solver.config();
        const SensorTable t = load_table(table.input, table.options());
        if (t0 && *t0 > t.sensors()) {
            throw UsageError("--t0 " + std::to_string(*t0) + " exceeds N = " + std::to_string(t.sensors()));
        }
        std::optional<OrthoDict> reference;
        if (!truth.empty()) {
            reference = read_dictionary(truth);
        }
        const DataMatrix y = mean_fill(t);

        auto [dict, report] = hrp_learn(y, cfg);
        const SparseCodeMatrix codes =
            t0 ? sparse_codes(dict, y, SparsityBudget(*t0, t.sensors())) : direct_codes(dict, y);

        const fs::path dir(output);
        ensure_directory(dir);
        write_dictionary(dir / "dictionary.json", dict);
        write_matrix_csv(dir / "codes.csv", codes);
        json j = report_to_json(report);
        j["n"] = t.sensors();
        j["l"] = t.slots();
        j["ortho_residual"] = dict.ortho_residual();
        if (t0) {
            j["t0"] = *t0;
        }
        if (reference) {
            j["rmse"] = sign_perm_rmse(dict, *reference).rmse;
        }
        write_json(dir / "report.json", j);
        out << "learned " << t.sensors() << "x" << t.sensors() << " dictionary from " << t.slots()
            << " samples in " << report.wall_time_seconds << " s";
        if (reference) {
            out << ", rmse " << j["rmse"].get<double>();
        }
        out << '\n';
        return kExitOk;
    }
};

// ---------------------------------------------------------------- phase

struct PhaseCommand {
    std::vector<Eigen::Index> n_list{10};
    std::vector<double> exponents{0.5, 1.0, 1.5, 2.0, 2.5};
    std::vector<double> thetas{0.2};
    int trials = 10;
    double threshold = 1e-3;
    std::string dictionary = "fixed";
    std::string variant = "orthogonal";
    int jobs = 1;
    std::string output;
    SolverFlags solver;

    void attach(CLI::App& app)
    {
        app.add_option("--n", n_list, "Dimensions (comma list)")->delimiter(',')->capture_default_str();
        app.add_option("--l-exponent", exponents, "Sample-size exponents e, L = 10 N^e")
            ->delimiter(',')
            ->capture_default_str();
        app.add_option("--theta", thetas, "Bernoulli rates")->delimiter(',')->capture_default_str();
        app.add_option("--trials", trials, "Trials per cell")->capture_default_str();
        app.add_option("--threshold", threshold, "Success threshold")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app.add_option("--dictionary", dictionary, "fixed | resampled")
            ->check(CLI::IsMember({"fixed", "resampled"}))
            ->capture_default_str();
        app.add_option("--variant", variant, "orthogonal | sphere")
            ->check(CLI::IsMember({"orthogonal", "sphere"}))
            ->capture_default_str();
        app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
        app.add_option("--output", output, "CSV output path (default: stdout)");
        solver.attach(app);
    }

    int run(std::ostream& out) const
    {
        if (trials < 1) {
            throw UsageError("--trials must be >= 1");
        }
        PhaseOptions opts;
        opts.n_list = n_list;
        opts.l_exponents = exponents;
        opts.thetas = thetas;
        opts.trials = trials;
        opts.seed = solver.seed;
        opts.threshold = threshold;
        opts.dictionary = parse_dictionary_mode(dictionary);
        opts.variant = parse_variant(variant);
        opts.config = solver.config();
        opts.auto_restarts = solver.restarts == 0;
        opts.jobs = jobs;
        try {
            opts.validate();
        } catch (const InvalidInput& e) {
            throw UsageError(e.what());
        }
        const auto cells = run_phase(opts);
        emit(output, out, [&](std::ostream& os) {
            os << "variant,n,theta,exponent,l,trials,successes,success_rate\n";
            for (const auto& c : cells) {
                os << variant << ',' << c.n << ',' << fmt(c.theta) << ',' << fmt(c.exponent) << ','
                   << c.l << ',' << c.trials << ',' << c.successes << ',' << fmt(c.success_rate)
                   << '\n';
            }
        });
        return kExitOk;
    }
};

// ---------------------------------------------------------------- bench

struct BenchCommand {
    std::vector<std::string> methods{"hrp", "stage1-only", "l4-msp"};
    Eigen::Index n = 20;
    std::vector<double> thetas{0.2};
    std::vector<Eigen::Index> ls{1000};
    int trials = 10;
    std::string dictionary = "resampled";
    int jobs = 1;
    std::string output;
    SolverFlags solver;

    void attach(CLI::App& app)
    {
        app.add_option("--method", methods, "Methods: hrp, stage1-only, l4-msp")
            ->delimiter(',')
            ->capture_default_str();
        app.add_option("--n", n, "Dimension N")->check(CLI::PositiveNumber)->capture_default_str();
        app.add_option("--theta", thetas, "Bernoulli rates")->delimiter(',')->capture_default_str();
        app.add_option("--l", ls, "Sample sizes")->delimiter(',')->capture_default_str();
        app.add_option("--trials", trials, "Trials per cell")->capture_default_str();
        app.add_option("--dictionary", dictionary, "fixed | resampled")
            ->check(CLI::IsMember({"fixed", "resampled"}))
            ->capture_default_str();
        app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
        app.add_option("--output", output, "CSV output path (default: stdout)");
        solver.attach(app);
    }

    int run(std::ostream& out) const
    {
        BenchOptions opts;
        opts.methods.clear();
        for (const auto& m : methods) {
            try {
                opts.methods.push_back(parse_method(m));
            } catch (const InvalidInput& e) {
                throw UsageError(e.what());
            }
        }
        opts.n = n;
        opts.thetas = thetas;
        opts.ls = ls;
        opts.trials = trials;
        opts.seed = solver.seed;
        opts.dictionary = parse_dictionary_mode(dictionary);
        opts.config = solver.config();
        opts.jobs = jobs;
        try {
            opts.validate();
        } catch (const InvalidInput& e) {
            throw UsageError(e.what());
        }
        const auto rows = run_bench(opts);
        emit(output, out, [&](std::ostream& os) {
            os << "method,n,theta,l,trials,mean_rmse,median_rmse,mean_time_s\n";
            for (const auto& r : rows) {
                os << to_string(r.method) << ',' << r.n << ',' << fmt(r.theta) << ',' << r.l << ','
                   << r.trials << ',' << fmt(r.mean_rmse) << ',' << fmt(r.median_rmse) << ','
                   << fmt(r.mean_seconds) << '\n';
            }
        });
        return kExitOk;
    }
};

// ---------------------------------------------------------------- compress

struct CompressCommand {
    TableFlags table;
    SolverFlags solver;
    std::vector<Eigen::Index> t0s;
    std::string output;
    std::string report;

    void attach(CLI::App& app)
    {
        table.attach(app);
        solver.attach(app);
        app.add_option("--t0", t0s, "Sparsity budgets (comma list)")->delimiter(',')->required();
        app.add_option("--output", output, "CSV output path (default: stdout)");
        app.add_option("--report", report, "JSON report path");
    }

    int run(std::ostream& out) const
    {
        for (const auto t0 : t0s) {
            if (t0 < 1) {
                throw UsageError("--t0 values must be >= 1");
            }
        }
        const HrpConfig cfg = solver.config();
        const SensorTable t = load_table(table.input, table.options());
        for (const auto t0 : t0s) {
            if (t0 > t.sensors()) {
                throw UsageError("--t0 " + std::to_string(t0) + " exceeds N = "
                                 + std::to_string(t.sensors()));
            }
        }
        const CompressReport r = run_compress(t, t0s, cfg);
        emit(output, out, [&](std::ostream& os) {
            os << "t0,compression_ratio,masked_rmse,coding_time_s,learn_time_s\n";
            for (const auto& row : r.rows) {
                os << row.t0 << ',' << row.ratio << ',' << fmt(row.masked_rmse) << ','
                   << fmt(row.coding_seconds) << ',' << fmt(r.learn_seconds) << '\n';
            }
        });
        if (!report.empty()) {
            json rows = json::array();
            for (const auto& row : r.rows) {
                rows.push_back({{"t0", row.t0},
                                {"compression_ratio", row.ratio},
                                {"masked_rmse", row.masked_rmse},
                                {"coding_time_s", row.coding_seconds}});
            }
            json j = {{"n", r.n},
                      {"l", r.l},
                      {"observed_fraction",
                       static_cast<double>(t.mask.count()) / static_cast<double>(t.mask.size())},
                      {"learn", report_to_json(r.learn)},
                      {"rows", rows}};
            write_json(report, j);
        }
        return kExitOk;
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hierarchical Riemannian pursuit dictionary learning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hrp 1.0.0");

    SynthCommand synth;
    LearnCommand learn;
    PhaseCommand phase;
    BenchCommand bench;
    CompressCommand compress;

    auto* synth_app = app.add_subcommand("synth", "Generate Y = D*X* with ground truth files");
    synth.attach(*synth_app);
    auto* learn_app = app.add_subcommand("learn", "Learn an orthogonal dictionary and codes");
    learn.attach(*learn_app);
    auto* phase_app = app.add_subcommand("phase", "Success rate over (N, theta, L = 10 N^e) grid");
    phase.attach(*phase_app);
    auto* bench_app = app.add_subcommand("bench", "RMSE and wall time per method over a grid");
    bench.attach(*bench_app);
    auto* compress_app = app.add_subcommand("compress", "Sensor-table compression at several budgets");
    compress.attach(*compress_app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        err << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (synth_app->parsed()) {
            return synth.run(out);
        }
        if (learn_app->parsed()) {
            return learn.run(out);
        }
        if (phase_app->parsed()) {
            return phase.run(out);
        }
        if (bench_app->parsed()) {
            return bench.run(out);
        }
        if (compress_app->parsed()) {
            return compress.run(out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace hrp::cli
