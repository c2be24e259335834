#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qauto/assoc.hpp"
#include "qauto/rng.hpp"
#include "qauto/solvers.hpp"

namespace qauto {

enum class ScenarioKind { crossing, clutter, swarm };

/// Multi-target ground-truth scenario: straight-line or patrol targets,
/// detection dropouts and Poisson clutter over a square region.
struct Scenario {
  ScenarioKind kind = ScenarioKind::crossing;
  int n_targets = 5;
  double p_detect = 0.97;
  double clutter_rate = 0.5;   // false measurements per frame
  double meas_noise_std = 0.05;
  int n_steps = 30;
  std::uint64_t seed = 42;
  double region = 10.0;        // surveillance square side

  static Scenario crossing();
  static Scenario clutter();
  static Scenario swarm();
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// True target states at step t; deterministic in (scenario, t).
std::vector<Eigen::Vector4d> ground_truth(const Scenario& s, int t);

/// Detections plus clutter for one frame. Consumes the frame's RNG stream.
std::vector<Measurement> generate_frame(const Scenario& s, int t, Rng& rng);

using AssignmentSolver = std::function<Assignment(const CostMatrix&)>;

struct TrackRecord {
  Track kf;
  int id = 0;
  int consecutive_hits = 0;
  int consecutive_misses = 0;
  bool confirmed = false;
};

struct StepEvents {
  int t = 0;
  int n_measurements = 0;
  int n_assigned = 0;
  int md_events = 0;
  int fa_events = 0;
  double objective = 0.0;
};

struct TrackerState {
  std::vector<TrackRecord> tracks;
  long md_total = 0;
  long fa_total = 0;
  std::vector<StepEvents> history;

  int confirmed_count() const;
};

/// Tracker seeded from the scenario's initial target states.
TrackerState make_tracker(const Scenario& s);

/// Predicted-track gated cost matrix for the current frame.
CostMatrix build_frame_cost(const TrackerState& tracker,
                            const std::vector<Measurement>& measurements);

/// Predict, associate with the pluggable solver, update, and apply the
/// confirmation logic (confirm after 3 consecutive hits; confirmed tracks
/// coast through up to 2 missed frames).
StepEvents step(TrackerState& tracker, const std::vector<Measurement>& meas,
                const AssignmentSolver& solver, int t);

struct ScenarioResult {
  int confirmed_tracks = 0;
  int n_targets = 0;
  long md = 0;
  long fa = 0;
  double mean_step_ms = 0.0;
  std::vector<StepEvents> steps;
};

ScenarioResult run_scenario(const Scenario& s, const AssignmentSolver& solver);

}  // namespace qauto
