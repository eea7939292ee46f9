#pragma once

#include "hrp/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hrp {

/// Sensor readings, one row per sensor and one column per time slot.
/// Values at unobserved cells are unspecified; read them only through mean_fill.
struct SensorTable {
    Matrix values;
    Mask mask;
    std::vector<std::string> sensor_ids;
    std::vector<std::string> timestamps;

    Eigen::Index sensors() const { return values.rows(); }
    Eigen::Index slots() const { return values.cols(); }
};

struct LoadOptions {
    std::optional<char> delimiter;  // auto-detected (tab, else comma) when unset
    bool has_header = false;        // first row holds column labels
    bool has_row_labels = false;    // first column holds row labels
    bool transpose = false;         // file rows are time slots, not sensors
    std::vector<std::string> missing_tokens{"", "NaN", "nan"};
    std::optional<double> missing_sentinel;  // e.g. -10
};

/// Throws ParseError (naming line/column) on ragged rows or non-numeric cells,
/// and Error if the file cannot be read.
SensorTable load_table(const std::filesystem::path& path, const LoadOptions& options = {});
SensorTable parse_table(std::istream& in, const LoadOptions& options = {});

/// Replaces each missing cell by the mean of the observed cells of its column
/// (time slot); a column with no observations falls back to the global mean.
/// Observed cells are untouched and the mask is carried through.
/// Throws DegenerateInput when nothing at all is observed.
DataMatrix mean_fill(const SensorTable& t);

/// Writes `m` as comma-separated rows with round-trip precision.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Reads a fully numeric comma/tab separated matrix (no labels, no missing cells).
Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace hrp
