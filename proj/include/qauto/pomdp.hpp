#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qauto {

/// Probability vector over hidden states.
using Belief = Eigen::VectorXd;

/// Finite POMDP (S, A, T, Omega, O, R, gamma).
///   T[a](s, s')  transition probability
///   O[a](s', o)  observation probability
///   R(s, a)      immediate reward
struct PomdpModel {
  int n_states = 0;
  int n_actions = 0;
  int n_obs = 0;
  std::vector<Eigen::MatrixXd> T;
  std::vector<Eigen::MatrixXd> O;
  Eigen::MatrixXd R;
  double gamma = 0.95;
  std::vector<std::string> state_names;
  std::vector<std::string> action_names;
  std::vector<std::string> obs_names;

  void validate(double tol = 1e-10) const;

  Belief uniform_belief() const {
    return Belief::Constant(n_states, 1.0 / n_states);
  }

  double belief_reward(const Belief& b, int a) const {
    return b.dot(R.col(a));
  }

  /// Predicted belief after action a, before conditioning on an observation.
  Belief predict(const Belief& b, int a) const {
    return T[static_cast<std::size_t>(a)].transpose() * b;
  }
};

struct BeliefUpdate {
  Belief posterior;
  double evidence = 0.0;
};

double evidence_probability(const PomdpModel& m, const Belief& b, int a,
                            int o);

/// Bayes update: posterior(s') = O(o|s',a) * sum_s T(s'|s,a) b(s) / P(e).
/// Throws when the observation is impossible under (b, a).
BeliefUpdate belief_update(const PomdpModel& m, const Belief& b, int a, int o);

double hellinger(const Eigen::VectorXd& p, const Eigen::VectorXd& q);
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Canonical 2-state Tiger: listen accuracy 0.85, rewards listen -1,
/// correct door +10, wrong door -100, gamma 0.95. Actions are ordered
/// [listen, open-left, open-right]; observations [hear-left, hear-right].
PomdpModel tiger2();

/// 4-state Corridor Tiger: states [far-left, near-left, near-right,
/// far-right], hear-left likelihoods [0.85, 0.70, 0.30, 0.15], identity
/// transitions under listen, door actions re-randomize the tiger.
PomdpModel tiger4();

/// w x h grid navigation: 4-connected moves plus stay, move success 0.9,
/// sensor reports the true cell with probability 0.7, goal cell at
/// (w-1, h-1) is absorbing with reward +10, every other step costs -1.
PomdpModel grid_world(int width, int height);

PomdpModel load_pomdp(const std::string& path);
void save_pomdp(const PomdpModel& m, const std::string& path);

}  // namespace qauto
