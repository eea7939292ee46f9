#include "hrp/dictionary_io.hpp"

#include "hrp/error.hpp"

#include <fstream>

namespace hrp {

nlohmann::json dictionary_to_json(const OrthoDict& d)
{
    const Matrix& m = d.matrix();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            values.push_back(m(i, j));
        }
    }
    return {{"format", "hrp-dictionary"},
            {"version", 1},
            {"n", d.n()},
            {"values", std::move(values)},
            {"ortho_residual", d.ortho_residual()}};
}

OrthoDict dictionary_from_json(const nlohmann::json& j)
{
    try {
        if (j.contains("format") && j.at("format") != "hrp-dictionary") {
            throw InvalidInput("dictionary JSON: unexpected format tag");
        }
        const auto n = j.at("n").get<Eigen::Index>();
        const auto values = j.at("values").get<std::vector<double>>();
        if (n < 1 || static_cast<Eigen::Index>(values.size()) != n * n) {
            throw InvalidInput("dictionary JSON: expected " + std::to_string(n * n) + " values, found "
                               + std::to_string(values.size()));
        }
        Matrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < n; ++k) {
                m(i, k) = values[static_cast<std::size_t>(i * n + k)];
            }
        }
        return OrthoDict::certify(std::move(m));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("dictionary JSON: ") + e.what());
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw Error("failed writing '" + path.string() + "'");
    }
}

void write_dictionary(const std::filesystem::path& path, const OrthoDict& d)
{
    write_json(path, dictionary_to_json(d));
}

OrthoDict read_dictionary(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "' for reading");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return dictionary_from_json(j);
}

}  // namespace hrp
