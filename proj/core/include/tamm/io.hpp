#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "tamm/algorithm.hpp"

namespace tamm {

// Algorithm file format: one JSON document, coefficients as canonical
// "num" / "num/den" strings, triples sorted row-major. Serialization is
// deterministic, so equal algorithms produce byte-identical files.
std::string to_json(const BilinearAlgorithm& alg);
std::string to_json(const DecomposedAlgorithm& alg);

BilinearAlgorithm bilinear_from_json(const std::string& text);
DecomposedAlgorithm decomposed_from_json(const std::string& text);

using LoadedAlgorithm = std::variant<BilinearAlgorithm, DecomposedAlgorithm>;

// Dispatches on the presence of a "phi" field.
LoadedAlgorithm algorithm_from_json(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

void save_algorithm(const std::filesystem::path& path, const BilinearAlgorithm& alg);
void save_algorithm(const std::filesystem::path& path, const DecomposedAlgorithm& alg);
LoadedAlgorithm load_algorithm(const std::filesystem::path& path);

}  // namespace tamm
