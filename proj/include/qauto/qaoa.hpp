#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qauto/assoc.hpp"
#include "qauto/optim.hpp"
#include "qauto/rng.hpp"
#include "qauto/solvers.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

enum class ScheduleBasis { polynomial, trigonometric };

/// Fixed-parameter-count angle schedule: gamma(t) and beta(t) are smooth
/// functions with k coefficients each, sampled at layer midpoints
/// t_l = (l - 1/2) / p, so the parameter count 2k is independent of the
/// depth p.
struct FpcSchedule {
  Eigen::VectorXd gamma_coeffs;
  Eigen::VectorXd beta_coeffs;
  ScheduleBasis basis = ScheduleBasis::polynomial;
  int depth = 1;
};

/// Linear gamma ramp with constant mixer: gamma(t) = pi t, beta(t) = pi/4,
/// zero-padded to k coefficients per family.
FpcSchedule warm_start_schedule(int k, int depth,
                                ScheduleBasis basis = ScheduleBasis::polynomial);

std::vector<std::pair<double, double>> evaluate_schedule(const FpcSchedule& s);

/// |+>^n, then per layer Rz(2 gamma h_i), Rzz(2 gamma J_ij), Rx(2 beta).
Circuit build_qaoa_circuit(const IsingInstance& ising,
                           const std::vector<std::pair<double, double>>& angles);

/// Exact statevector expectation of the cost Hamiltonian.
double expectation(const IsingInstance& ising,
                   const std::vector<std::pair<double, double>>& angles);

double sampled_expectation(const IsingInstance& ising, const Histogram& counts);

struct QaoaOptimizerConfig {
  int max_evaluations = 200;
  std::int64_t shots = 4096;
  int decode_top_k = 10;
};

struct QaoaResult {
  FpcSchedule schedule;
  double initial_expectation = 0.0;
  double expectation = 0.0;
  int optimizer_evaluations = 0;
  Histogram counts;
  DecodedSolution decoded;
  bool feasible = false;
};

/// Warm-started derivative-free optimization of the 2k schedule
/// coefficients, then sampling and top-k decoding at the best parameters.
QaoaResult optimize_fpc(const QuboInstance& qubo, int k, int depth,
                        const QaoaOptimizerConfig& cfg, Rng& rng,
                        ScheduleBasis basis = ScheduleBasis::polynomial,
                        std::optional<double> reference_optimum = std::nullopt);

/// Replays a schedule without re-optimizing (warm-start transfer study):
/// samples under the given noise and decodes.
QaoaResult replay_schedule(const QuboInstance& qubo, const FpcSchedule& s,
                           const QaoaOptimizerConfig& cfg,
                           const struct NoiseModel& noise, Rng& rng,
                           std::optional<double> reference_optimum =
                               std::nullopt);

struct FpcSweepRow {
  int k = 0;
  int p = 0;
  int n_params = 0;
  double mean_objective = 0.0;
  double feasibility_pct = 0.0;
};

std::vector<FpcSweepRow> fpc_sensitivity_sweep(
    const QuboInstance& qubo, const std::vector<int>& ks,
    const std::vector<int>& ps, const std::vector<std::uint64_t>& seeds,
    const QaoaOptimizerConfig& cfg);

}  // namespace qauto
