#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qauto/assoc.hpp"
#include "qauto/biqae.hpp"
#include "qauto/table.hpp"

namespace qauto {

struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const char* artifact_version() { return "0.1.0"; }

struct CommonConfig {
  std::uint64_t seed = 42;
  std::int64_t shots = 4096;
  double noise_p2q = 0.0;
  double noise_p1q = 0.0;
};

struct TigerParams {
  CommonConfig common;
  std::vector<int> obs{0, 0, 0, 0};
  int horizon = 1;
  int biqae_iterations = 4;
  std::int64_t biqae_shots = 300;
  std::string to_json() const;
};

struct GroverParams {
  CommonConfig common;
  double prior_left = 0.97;  // Tiger-oracle mode
  int target_obs = 1;
  int k_max = 5;
  std::optional<double> amplitude;  // plain Ry-oracle mode when set
  std::string to_json() const;
};

struct BiqaeParams {
  CommonConfig common;
  std::vector<double> amplitudes{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  int runs_per_amplitude = 100;
  int iterations = 6;
  std::int64_t shots_per_iteration = 300;
  int oracle_qubits = 1;  // 1 or 2
  std::optional<GaussianPrior> prior;
  std::string to_json() const;
};

struct QaoaParams {
  CommonConfig common;
  int n_tracks = 2;
  int n_meas = 3;
  std::vector<int> ks{2, 3};
  std::vector<int> ps{1, 2, 4, 8};
  int n_seeds = 5;
  int optimizer_evaluations = 200;
  bool transfer = false;  // replay simulator-optimized schedules under noise
  std::string to_json() const;
};

struct MtdaParams {
  CommonConfig common;
  bool table_mode = true;  // sweep the seven (N, M) rows
  int n_tracks = 2;
  int n_meas = 3;
  std::string to_json() const;
};

struct TrackParams {
  CommonConfig common;
  std::string scenario = "crossing";  // crossing | clutter | swarm | all
  std::string solver = "hungarian";   // hungarian | gnn
  int n_steps = 30;
  std::optional<std::string> trace_path;
  std::string to_json() const;
};

struct ZneParams {
  CommonConfig common;
  std::string mode = "bell";  // bell | deep
  std::vector<int> scale_factors{1, 3, 5};
  int n_seeds = 20;
  int deep_two_qubit_gates = 61;
  std::string to_json() const;
};

ResultTable run_tiger(const TigerParams& p);
ResultTable run_grover(const GroverParams& p);
ResultTable run_biqae(const BiqaeParams& p);
ResultTable run_qaoa(const QaoaParams& p);
ResultTable run_mtda(const MtdaParams& p);
ResultTable run_track(const TrackParams& p);
ResultTable run_zne(const ZneParams& p);

/// Random planar scenario: tracks with random states, measurements around
/// a subset of the predicted positions plus uniform extras.
AssociationScenario random_association_scenario(int n_tracks, int n_meas,
                                                Rng& rng, double region = 10.0);

/// Dense synthetic cost matrix with Gaussian costs (mean -5, sd 2), full
/// gate and default miss/false-alarm pricing. Benchmark instances for the
/// QAOA studies; negative optimum by construction.
CostMatrix random_cost_matrix(int n_tracks, int n_meas, Rng& rng);

}  // namespace qauto
