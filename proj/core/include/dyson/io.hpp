#pragma once

// Text serialization. Floats are written with 17 significant digits so that
// every value round-trips bit-exactly through CSV.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyson/core.hpp"

namespace dyson {

inline constexpr int kFormatVersion = 1;

/// Shortest-safe decimal rendering: 17 significant digits, '%g' style.
std::string format_double(double v);
/// Parses a decimal double; throws DomainError on malformed input.
double parse_double(std::string_view text);

/// One point per row, header `x` or `x,y`.
std::string to_csv(const Configuration& xi);
Configuration configuration_from_csv(std::string_view text);

/// JSON array: `[x, ...]` in 1D, `[[x, y], ...]` in 2D.
nlohmann::json to_json(const Configuration& xi);
Configuration configuration_from_json(const nlohmann::json& j, int dim);

/// Ensemble of samples in long format: `sample,x` or `sample,x,y`.
std::string samples_to_csv(const std::vector<Configuration>& samples);
std::vector<Configuration> samples_from_csv(std::string_view text);

/// Splits CSV text into rows of fields; skips empty lines.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace dyson
