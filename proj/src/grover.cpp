#include "qauto/grover.hpp"

#include <cmath>
#include <stdexcept>

namespace qauto {

Circuit GroverSetup::amplified_circuit(int k) const {
  if (k < 0) throw std::invalid_argument("iteration count must be >= 0");
  Circuit c = prep;
  const Circuit prep_inv = inverse(prep);
  for (int i = 0; i < k; ++i) {
    c.append(oracle());
    c.append(prep_inv);
    c.append(zero_reflection());
    c.append(prep);
  }
  return c;
}

int optimal_iterations(double evidence, IterationRule rule) {
  if (!(evidence > 0.0) || !(evidence < 1.0))
    throw std::invalid_argument("evidence must lie in (0, 1)");
  // epsilon guard: amplitudes like 0.25 land the formula exactly on an
  // integer, which bare floor() misses by one ulp
  double k;
  if (rule == IterationRule::exact)
    k = std::floor(M_PI / (4.0 * std::asin(std::sqrt(evidence))) - 0.5 + 1e-9);
  else
    k = std::floor(M_PI / 4.0 * std::sqrt(1.0 / evidence) + 1e-9);
  return std::max(0, static_cast<int>(k));
}

double amplified_probability(double a, int k) {
  const double theta = std::asin(std::sqrt(a));
  const double s = std::sin((2.0 * k + 1.0) * theta);
  return s * s;
}

StateVectord grover_amplify(const GroverSetup& setup, int k) {
  return run(setup.amplified_circuit(k));
}

double marked_probability(const GroverSetup& setup, const StateVectord& st) {
  double p = 0;
  const std::int64_t dim = st.dim();
  for (std::int64_t i = 0; i < dim; ++i)
    if (detail::controls_match(static_cast<std::uint64_t>(i),
                               setup.marked_qubits, setup.marked_pattern))
      p += std::norm(st.amps[i]);
  return p;
}

AmplifiedPosterior amplified_posterior(const Belief& b, int target_obs,
                                       int k) {
  Circuit prep;
  int n_state_bits;
  if (b.size() == 2) {
    prep = build_minimal_tiger_circuit(b);
    n_state_bits = 1;
  } else if (b.size() == 4) {
    prep = build_corridor4_circuit(b);
    n_state_bits = 2;
  } else {
    throw std::invalid_argument("amplified_posterior needs |S| in {2, 4}");
  }
  GroverSetup setup{prep, {n_state_bits}, static_cast<std::uint64_t>(target_obs)};
  const StateVectord st = grover_amplify(setup, k);
  auto [selected, p] = post_select(st, n_state_bits, target_obs);
  std::vector<int> state_qs(static_cast<std::size_t>(n_state_bits));
  for (int i = 0; i < n_state_bits; ++i) state_qs[static_cast<std::size_t>(i)] = i;
  const Eigen::VectorXd marg = marginal_probabilities(selected, state_qs);
  return {marg.head(b.size()), p};
}

}  // namespace qauto
