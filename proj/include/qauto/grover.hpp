#pragma once

#include <utility>
#include <vector>

#include "qauto/belief_circuit.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

/// Grover iterate G = A S0 A^dag Se over a preparation circuit A, with the
/// good subspace defined by a register reading a target pattern. Se phase-
/// flips good states; S0 reflects about |0...0>.
struct GroverSetup {
  Circuit prep;
  std::vector<int> marked_qubits;
  std::uint64_t marked_pattern = 0;

  Gate oracle() const { return gate::phase_flip(marked_qubits, marked_pattern); }

  Gate zero_reflection() const {
    std::vector<int> all(static_cast<std::size_t>(prep.n_qubits));
    for (int i = 0; i < prep.n_qubits; ++i) all[static_cast<std::size_t>(i)] = i;
    return gate::phase_flip(all, 0);
  }

  /// A, followed by k Grover iterates, as a single runnable circuit.
  Circuit amplified_circuit(int k) const;
};

enum class IterationRule {
  exact,      // floor(pi / (4 asin sqrt(P)) - 1/2)
  sqrt_bound  // floor((pi/4) sqrt(1/P))
};

/// Optimal iteration count for evidence probability in (0,1); never
/// negative.
int optimal_iterations(double evidence,
                       IterationRule rule = IterationRule::exact);

/// Success probability of the marked subspace after k iterations, by the
/// sine law: sin^2((2k+1) asin sqrt(a)).
double amplified_probability(double a, int k);

/// Runs A then k Grover iterates on the noiseless simulator.
StateVectord grover_amplify(const GroverSetup& setup, int k);

/// Probability mass currently on the marked subspace.
double marked_probability(const GroverSetup& setup, const StateVectord& st);

struct AmplifiedPosterior {
  Belief posterior;
  double branch_probability = 0.0;
};

/// Amplifies the target observation of the Tiger (|S|=2) or corridor
/// (|S|=4) direct-encoding circuit, post-selects and marginalizes.
/// Noiselessly the posterior matches classical Bayes for every k.
AmplifiedPosterior amplified_posterior(const Belief& b, int target_obs, int k);

}  // namespace qauto
