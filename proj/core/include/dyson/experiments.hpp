#pragma once

// Named end-to-end checks. Each returns a pass/fail verdict with the measured
// numbers; the acceptance test binary and the `experiment` CLI subcommand run them.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dyson {

struct ExperimentOptions {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Multiplies sample and path counts (1 = the full-size run).
  double size = 1.0;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string summary;  ///< one line with the decisive numbers
  nlohmann::json data;
  double seconds = 0.0;
};

/// "AC1" ... "AC12".
std::vector<std::string> criterion_ids();
/// Throws DomainError for an unknown id.
CriterionResult run_criterion(const std::string& id, const ExperimentOptions& opts = {});

nlohmann::json to_json(const CriterionResult& r);

}  // namespace dyson
