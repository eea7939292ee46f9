#include "hrp/ingest.hpp"

#include "hrp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

namespace hrp {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delim)
{
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        const auto pos = line.find(delim, begin);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(begin));
            return out;
        }
        out.push_back(line.substr(begin, pos - begin));
        begin = pos + 1;
    }
}

std::optional<double> parse_number(std::string_view cell)
{
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (ec != std::errc() || ptr != end || cell.empty()) {
        return std::nullopt;
    }
    return value;
}

void check_unique(const std::vector<std::string>& labels, const char* what)
{
    std::set<std::string> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) {
            throw ParseError(std::string("duplicate ") + what + " label '" + label + "'");
        }
    }
}

}  // namespace

SensorTable parse_table(std::istream& in, const LoadOptions& options)
{
    std::vector<std::string> lines;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        lines.push_back(line);
        line_numbers.push_back(lineno);
    }
    if (lines.empty()) {
        throw ParseError("table is empty");
    }

    const char delim =
        options.delimiter.value_or(lines.front().find('\t') != std::string::npos ? '\t' : ',');

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (options.has_header) {
        for (auto cell : split(lines.front(), delim)) {
            header.emplace_back(trim(cell));
        }
        first_data = 1;
    }
    if (first_data >= lines.size()) {
        throw ParseError("table has a header but no data rows");
    }

    const std::size_t width = split(lines[first_data], delim).size();
    const std::size_t label_cols = options.has_row_labels ? 1 : 0;
    if (width <= label_cols) {
        throw ParseError("line " + std::to_string(line_numbers[first_data]) + ": no data columns");
    }
    const std::size_t ncols = width - label_cols;
    const std::size_t nrows = lines.size() - first_data;

    Matrix values = Matrix::Zero(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
    Mask mask = Mask::Constant(values.rows(), values.cols(), true);
    std::vector<std::string> row_labels;

    for (std::size_t r = 0; r < nrows; ++r) {
        const std::size_t src = first_data + r;
        const auto cells = split(lines[src], delim);
        if (cells.size() != width) {
            throw ParseError("line " + std::to_string(line_numbers[src]) + ": expected "
                             + std::to_string(width) + " fields, found "
                             + std::to_string(cells.size()));
        }
        if (options.has_row_labels) {
            row_labels.emplace_back(trim(cells[0]));
        }
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::string_view cell = trim(cells[c + label_cols]);
            const auto i = static_cast<Eigen::Index>(r);
            const auto j = static_cast<Eigen::Index>(c);
            if (std::find(options.missing_tokens.begin(), options.missing_tokens.end(), cell)
                != options.missing_tokens.end()) {
                mask(i, j) = false;
                continue;
            }
            const auto value = parse_number(cell);
            if (!value) {
                throw ParseError("line " + std::to_string(line_numbers[src]) + ", column "
                                 + std::to_string(c + label_cols + 1) + ": non-numeric cell '"
                                 + std::string(cell) + "'");
            }
            if (!std::isfinite(*value)
                || (options.missing_sentinel && *value == *options.missing_sentinel)) {
                mask(i, j) = false;
                continue;
            }
            values(i, j) = *value;
        }
    }

    std::vector<std::string> col_labels;
    if (options.has_header) {
        if (header.size() == width) {
            col_labels.assign(header.begin() + static_cast<std::ptrdiff_t>(label_cols), header.end());
        } else if (header.size() == ncols) {
            col_labels = header;
        } else {
            throw ParseError("line " + std::to_string(line_numbers[0]) + ": header has "
                             + std::to_string(header.size()) + " fields, rows have "
                             + std::to_string(width));
        }
    }
    if (row_labels.empty()) {
        for (std::size_t r = 0; r < nrows; ++r) {
            row_labels.push_back("r" + std::to_string(r));
        }
    }
    if (col_labels.empty()) {
        for (std::size_t c = 0; c < ncols; ++c) {
            col_labels.push_back("c" + std::to_string(c));
        }
    }

    SensorTable t;
    if (options.transpose) {
        t.values = values.transpose();
        t.mask = mask.transpose();
        t.sensor_ids = std::move(col_labels);
        t.timestamps = std::move(row_labels);
    } else {
        t.values = std::move(values);
        t.mask = std::move(mask);
        t.sensor_ids = std::move(row_labels);
        t.timestamps = std::move(col_labels);
    }
    check_unique(t.sensor_ids, "sensor");
    check_unique(t.timestamps, "timestamp");
    return t;
}

SensorTable load_table(const std::filesystem::path& path, const LoadOptions& options)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "' for reading");
    }
    try {
        return parse_table(in, options);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

DataMatrix mean_fill(const SensorTable& t)
{
    double global_sum = 0.0;
    std::size_t global_count = 0;
    for (Eigen::Index j = 0; j < t.slots(); ++j) {
        for (Eigen::Index i = 0; i < t.sensors(); ++i) {
            if (t.mask(i, j)) {
                global_sum += t.values(i, j);
                ++global_count;
            }
        }
    }
    if (global_count == 0) {
        throw DegenerateInput("mean_fill: table has no observed entries");
    }
    const double global_mean = global_sum / static_cast<double>(global_count);

    Matrix filled = t.values;
    for (Eigen::Index j = 0; j < t.slots(); ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (Eigen::Index i = 0; i < t.sensors(); ++i) {
            if (t.mask(i, j)) {
                sum += t.values(i, j);
                ++count;
            }
        }
        const double fill = count > 0 ? sum / static_cast<double>(count) : global_mean;
        for (Eigen::Index i = 0; i < t.sensors(); ++i) {
            if (!t.mask(i, j)) {
                filled(i, j) = fill;
            }
        }
    }
    return DataMatrix(std::move(filled), t.mask);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(i, j));
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

Matrix read_matrix_csv(const std::filesystem::path& path)
{
    LoadOptions opts;
    opts.missing_tokens.clear();
    SensorTable t = load_table(path, opts);
    if (!t.mask.all()) {
        throw ParseError(path.string() + ": matrix file contains non-finite cells");
    }
    return std::move(t.values);
}

}  // namespace hrp
