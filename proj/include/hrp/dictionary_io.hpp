#pragma once

#include "hrp/manifold.hpp"

#include <filesystem>

#include <json.hpp>

namespace hrp {

/// {"format": "hrp-dictionary", "version": 1, "n": N,
///  "values": [row-major N*N numbers], "ortho_residual": max|DᵀD - I|}
nlohmann::json dictionary_to_json(const OrthoDict& d);

/// Validates shape and certifies orthogonality (tolerance 1e-10).
OrthoDict dictionary_from_json(const nlohmann::json& j);

void write_dictionary(const std::filesystem::path& path, const OrthoDict& d);
OrthoDict read_dictionary(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace hrp
