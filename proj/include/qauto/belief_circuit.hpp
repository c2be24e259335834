#pragma once

#include <functional>
#include <vector>

#include "qauto/measure.hpp"
#include "qauto/pomdp.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

/// Register accounting for the full belief-update circuit: current state,
/// next state, observation, amplitude workspace, action, compute ancillae
/// and the single amplification flag.
struct BeliefCircuitLayout {
  int state_bits = 0;
  int next_state_bits = 0;
  int obs_bits = 0;
  int amplitude_bits = 0;
  int action_bits = 0;
  int compute_ancillae = 0;
  int flag_ancillae = 1;

  int total_qubits() const {
    return state_bits + next_state_bits + obs_bits + amplitude_bits +
           action_bits + compute_ancillae + flag_ancillae;
  }

  static BeliefCircuitLayout for_model(int n_states, int n_actions, int n_obs);
};

inline int bits_for(int count) {
  int b = 0;
  while ((1 << b) < count) ++b;
  return b;
}

/// Appends Ry gates preparing sqrt(probs) amplitudes on `targets`
/// (recursive conditional splitting; probs has length 2^targets).
void append_amplitude_loader(Circuit& c, const std::vector<int>& targets,
                             const Eigen::VectorXd& probs);

/// As above but uniformly controlled: dist(v) is the target distribution
/// when the control register reads v.
void append_controlled_loader(
    Circuit& c, const std::vector<int>& controls,
    const std::vector<int>& targets,
    const std::function<Eigen::VectorXd(std::uint64_t)>& dist);

/// Compact register map used by the verifiable full belief circuit:
/// [state][next state][observation][reward tag], lowest qubits first.
struct FullBeliefRegisters {
  int n_state = 0;
  int n_obs = 0;
  int n_reward = 0;

  std::vector<int> state_qubits() const;
  std::vector<int> next_state_qubits() const;
  std::vector<int> obs_qubits() const;
  std::vector<int> reward_qubits() const;
  int total() const { return 2 * n_state + n_obs + n_reward; }

  void unpack(std::uint64_t basis, int& s, int& sp, int& o) const;
};

struct FullBeliefCircuit {
  Circuit circuit;
  FullBeliefRegisters regs;
};

/// Prepares sum_{s,s',o} sqrt(b(s) T(s'|s,a) O(o|s',a)) |s>|s'>|o>|r(s,a)>.
/// State and observation counts must be powers of two unless padding with
/// zero-probability states is allowed.
FullBeliefCircuit build_full_belief_circuit(const PomdpModel& m,
                                            const Belief& b, int action,
                                            bool allow_padding = false,
                                            int reward_bits = 4);

/// 2-qubit Tiger direct encoding (qubit 0: state, qubit 1: observation):
/// Ry prior load plus two conditional Ry gates writing the 0.85 sensor.
Circuit build_minimal_tiger_circuit(const Belief& b);

/// 3-qubit Corridor Tiger encoding (qubits 0-1: state, qubit 2:
/// observation) with hear-left likelihoods [0.85, 0.70, 0.30, 0.15].
Circuit build_corridor4_circuit(const Belief& prior);

/// Generic small-register direct encoding: loads `prior` on the state
/// register and one uniformly controlled Ry per observation bit writing
/// obs_given_state(s, o). State count must be a power of two.
Circuit build_direct_encoding_circuit(const Belief& prior,
                                      const Eigen::MatrixXd& obs_given_state);

/// Posterior over states after post-selecting the direct-encoding circuit
/// on the given observation. Returns (posterior, branch probability).
std::pair<Belief, double> direct_encoding_posterior(const Circuit& c,
                                                    int n_state_bits,
                                                    int n_states, int obs);

/// Root-level quantum update for |S| in {2, 4}: predicts through T, runs
/// the direct-encoding circuit and post-selects on the observation.
/// Exact Bayes in noiseless simulation.
BeliefUpdate quantum_belief_update(const PomdpModel& m, const Belief& b,
                                   int action, int obs);

}  // namespace qauto
