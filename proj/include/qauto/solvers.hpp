#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qauto/assoc.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (track, measurement)
  std::vector<int> missed;
  std::vector<int> false_alarms;
  double objective = 0.0;
};

/// Globally optimal assignment with miss/false-alarm augmentation: the
/// (N+M)^2 square problem with c_ij in the assignment block, c_miss and
/// c_fa on the slack diagonals, a zero slack-slack block, and big-M for
/// gated-out pairs.
Assignment hungarian_solve(const CostMatrix& cost);

/// Greedy nearest neighbour: gated pairs ascending by cost, accepted while
/// row and column are free and c_ij < c_miss + c_fa.
Assignment gnn_solve(const CostMatrix& cost);

struct BruteForceResult {
  std::vector<int> argmin;
  double energy = 0.0;
};

/// Exhaustive QUBO minimum for n_var <= 24, deterministic tie-break by
/// lowest configuration value.
BruteForceResult brute_force_qubo(const QuboInstance& q);

struct DecodedSolution {
  std::uint64_t bits = 0;
  std::vector<int> y;
  double energy = 0.0;
  /// best_energy / reference_optimum, defined when both are negative
  std::optional<double> quality_pct;
  double gap = 0.0;  // best_energy - reference_optimum
};

/// Evaluates the k most frequent bitstrings and returns the best. The
/// quality percentage follows the convention quality = best / optimum when
/// both energies are negative.
DecodedSolution decode_topk(const Histogram& counts, const QuboInstance& q,
                            int k = 10,
                            std::optional<double> reference_optimum =
                                std::nullopt);

}  // namespace qauto
