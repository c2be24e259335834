#include "qauto/planner.hpp"

#include <cmath>
#include <limits>

namespace qauto {

BeliefUpdateProvider classical_update_provider() {
  return [](const PomdpModel& m, const Belief& b, int a, int o) {
    return belief_update(m, b, a, o);
  };
}

namespace {

int sample_index(const Eigen::VectorXd& probs, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng) * probs.sum();
  double acc = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}

/// Mean discounted return of uniform-random rollouts of the given depth,
/// starting from a state drawn from the belief.
double rollout_value(const PomdpModel& m, const Belief& b, int depth,
                     int n_rollouts, Rng& rng) {
  if (depth <= 0) return 0.0;
  std::uniform_int_distribution<int> pick_action(0, m.n_actions - 1);
  double total = 0;
  for (int r = 0; r < n_rollouts; ++r) {
    int s = sample_index(b, rng);
    double ret = 0, discount = 1.0;
    for (int d = 0; d < depth; ++d) {
      const int a = pick_action(rng);
      ret += discount * m.R(s, a);
      discount *= m.gamma;
      s = sample_index(m.T[static_cast<std::size_t>(a)].row(s), rng);
    }
    total += ret;
  }
  return total / n_rollouts;
}

}  // namespace

int qbrl_plan(const PomdpModel& m, const Belief& b0, const PlannerConfig& cfg,
              const BeliefUpdateProvider& root_update) {
  cfg.validate();
  int best_action = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < m.n_actions; ++a) {
    double q = m.belief_reward(b0, a);
    if (cfg.horizon > 1) {
      double future = 0;
      for (int o = 0; o < m.n_obs; ++o) {
        const double pe = evidence_probability(m, b0, a, o);
        if (pe < 1e-12) continue;
        const BeliefUpdate up = root_update(m, b0, a, o);
        // leaf RNG keyed by (a, o) so reward shifts move all Q-values equally
        Rng leaf_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(
                                              a * m.n_obs + o));
        future += pe * rollout_value(m, up.posterior, cfg.horizon - 1,
                                     cfg.rollouts_per_leaf, leaf_rng);
      }
      q += m.gamma * future;
    }
    if (q > best_q) {
      best_q = q;
      best_action = a;
    }
  }
  return best_action;
}

int qbrl_plan(const PomdpModel& m, const Belief& b0,
              const PlannerConfig& cfg) {
  return qbrl_plan(m, b0, cfg, classical_update_provider());
}

std::vector<ClosedLoopStep> run_closed_loop(
    const PomdpModel& m, const std::vector<int>& obs_sequence,
    const PlannerConfig& cfg, const BeliefUpdateProvider& provider) {
  std::vector<ClosedLoopStep> trace;
  Belief prior = m.uniform_belief();
  for (std::size_t t = 0; t < obs_sequence.size(); ++t) {
    ClosedLoopStep step;
    step.t = static_cast<int>(t);
    step.prior = prior;
    step.obs = obs_sequence[t];
    step.action = qbrl_plan(m, prior, cfg, provider);
    const BeliefUpdate up = provider(m, prior, step.action, step.obs);
    // per-step reference: exact Bayes from the same carried prior
    const BeliefUpdate exact = belief_update(m, prior, step.action, step.obs);
    step.posterior = up.posterior;
    step.evidence = up.evidence;
    step.hellinger_vs_exact = hellinger(up.posterior, exact.posterior);
    trace.push_back(step);
    prior = up.posterior;
  }
  return trace;
}

}  // namespace qauto
