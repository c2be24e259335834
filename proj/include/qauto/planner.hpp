#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qauto/pomdp.hpp"
#include "qauto/rng.hpp"

namespace qauto {

struct PlannerConfig {
  int horizon = 1;
  int rollouts_per_leaf = 64;
  std::uint64_t seed = 42;

  void validate() const {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (rollouts_per_leaf < 1)
      throw std::invalid_argument("rollouts_per_leaf must be >= 1");
  }
};

/// Pluggable root-level belief update. The classical provider is Bayes'
/// rule; the quantum provider runs a belief circuit and post-selects.
using BeliefUpdateProvider = std::function<BeliefUpdate(
    const PomdpModel&, const Belief&, int action, int obs)>;

BeliefUpdateProvider classical_update_provider();

/// One-step lookahead with Monte-Carlo leaf values:
/// argmax_a [ R(b,a) + gamma * sum_o P(o|b,a) * V(B(b,a,o)) ],
/// V estimated by random-policy rollouts of depth horizon-1.
/// Ties break toward the lowest action index.
int qbrl_plan(const PomdpModel& m, const Belief& b0, const PlannerConfig& cfg,
              const BeliefUpdateProvider& root_update);

int qbrl_plan(const PomdpModel& m, const Belief& b0, const PlannerConfig& cfg);

struct ClosedLoopStep {
  int t = 0;
  Belief prior;
  int action = 0;
  int obs = 0;
  Belief posterior;
  double evidence = 0.0;
  double hellinger_vs_exact = 0.0;
};

/// Plan-then-update loop over a fixed observation sequence. Door-style
/// actions reset the belief through the model's own transition kernel;
/// each step records the provider posterior against the exact Bayes chain.
std::vector<ClosedLoopStep> run_closed_loop(
    const PomdpModel& m, const std::vector<int>& obs_sequence,
    const PlannerConfig& cfg, const BeliefUpdateProvider& provider);

}  // namespace qauto
