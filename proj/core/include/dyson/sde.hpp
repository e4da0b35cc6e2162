#pragma once

// Euler-Maruyama integration of the drift models with dyadic step halving near
// singularities, and the bulk-to-edge rescaling map.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyson/core.hpp"
#include "dyson/drift.hpp"

namespace dyson {

enum class Scheme { euler_maruyama };

struct IntegratorConfig {
  double dt = 1e-3;  ///< base step; shrunk so that horizon is a whole number of steps
  int max_halvings = 40;
  double horizon = 1.0;
  Scheme scheme = Scheme::euler_maruyama;
  std::uint64_t seed = 1;
  std::size_t record_stride = 1;  ///< record every this many base steps (and at the horizon)
};

void validate(const IntegratorConfig& cfg);

struct PathDiagnostics {
  double min_gap = kUnboundedWindow;           ///< smallest pair distance over accepted states
  std::vector<std::uint64_t> substep_histogram;  ///< accepted steps per halving level
  std::uint64_t rejections = 0;
};

struct PathRecord {
  std::vector<double> times;
  std::vector<LabeledState> states;
  PathDiagnostics diagnostics;
  std::uint64_t seed = 0;  ///< seed of the RNG stream actually used
};

/// dX = drift(X) dt + dB over [0, horizon].
///
/// A step of size h is rejected and retried at h/2 with fresh Gaussian
/// increments when |drift_j| h exceeds half the distance from particle j to its
/// nearest neighbour (or to 0 for the Bessel model) at the current or at the
/// proposed state, when the proposed state
/// breaks 1D ordering, crosses a frozen environment point, leaves (0, inf) for
/// the Bessel model, or has two particles closer than kCollisionTolerance.
/// After an accepted step the size doubles again when it is aligned to the
/// coarser grid. Throws IntegrationError after max_halvings consecutive halvings.
/// Path `index` draws from stream_seed(cfg.seed, index).
PathRecord integrate(const LabeledState& x0, const DriftModel& model, const IntegratorConfig& cfg,
                     std::uint64_t index = 0);

/// One path per initial state, in parallel; path i uses stream index i.
std::vector<PathRecord> integrate_ensemble(const std::vector<LabeledState>& x0, const DriftModel& model,
                                           const IntegratorConfig& cfg, unsigned threads = 0);

/// Rows "t,x1,...,xN" (or "t,x1,y1,..." in 2D).
std::string to_csv(const PathRecord& path);
nlohmann::json summary_json(const PathRecord& path, const IntegratorConfig& cfg);

/// y_j = N^{1/6} (x_j - 2 sqrt(N)).
LabeledState edge_rescale(const LabeledState& x, std::size_t n);
LabeledState edge_unscale(const LabeledState& y, std::size_t n);

struct StationarityStat {
  std::string name;
  double run_mean = 0.0, run_se = 0.0;
  double ref_mean = 0.0, ref_se = 0.0;
  double z = 0.0;
};

struct StationarityReport {
  std::vector<StationarityStat> stats;  ///< sum_sq, max, mean_gap, var_sum_sq
  std::size_t paths = 0;
};

/// Runs the OU Dyson model from each initial state to cfg.horizon (no
/// integration when the horizon is 0) and compares the time-horizon statistics
/// with the reference sample.
StationarityReport stationarity_run(std::size_t n, double beta, const IntegratorConfig& cfg,
                                    const std::vector<LabeledState>& initial,
                                    const std::vector<LabeledState>& reference, unsigned threads = 0);
/// Starts from the reference sample itself.
StationarityReport stationarity_run(std::size_t n, double beta, const IntegratorConfig& cfg,
                                    const std::vector<LabeledState>& reference, unsigned threads = 0);

nlohmann::json to_json(const StationarityReport& report);

}  // namespace dyson
