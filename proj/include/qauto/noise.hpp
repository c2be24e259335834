#pragma once

#include <stdexcept>

#include "qauto/measure.hpp"
#include "qauto/rng.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

/// Stochastic depolarizing model: after each gate, every touched qubit picks
/// up a uniformly random non-identity Pauli with the per-gate-class
/// probability. p1q applies to single-qubit gates, p2q to gates touching two
/// or more qubits.
struct NoiseModel {
  double p1q = 0.0;
  double p2q = 0.0;

  bool is_noiseless() const { return p1q == 0.0 && p2q == 0.0; }

  void validate() const {
    if (p1q < 0 || p1q > 1 || p2q < 0 || p2q > 1)
      throw std::invalid_argument("noise probabilities must lie in [0,1]");
  }
};

namespace detail {

template <typename Scalar>
void apply_pauli(StateVector<Scalar>& st, int q, int which) {
  using Complex = std::complex<Scalar>;
  const std::int64_t bit = 1ll << q;
  const std::int64_t dim = st.dim();
  switch (which) {
    case 0:  // X
      for (std::int64_t i = 0; i < dim; ++i)
        if (!(i & bit)) std::swap(st.amps[i], st.amps[i | bit]);
      break;
    case 1:  // Y
      for (std::int64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const Complex a0 = st.amps[i];
        const Complex a1 = st.amps[i | bit];
        st.amps[i] = Complex(0, -1) * a1;
        st.amps[i | bit] = Complex(0, 1) * a0;
      }
      break;
    default:  // Z
      for (std::int64_t i = 0; i < dim; ++i)
        if (i & bit) st.amps[i] = -st.amps[i];
      break;
  }
}

}  // namespace detail

/// Monte-Carlo Pauli-trajectory sampling: one statevector evolution per shot,
/// with random Pauli insertions after each gate. A zero noise model delegates
/// to exact sampling of the final state so noiseless trajectories match ideal
/// sampling for the same RNG stream.
template <typename Scalar = double>
Histogram run_noisy(const Circuit& c, const NoiseModel& noise,
                    std::int64_t shots, Rng& rng) {
  noise.validate();
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (noise.is_noiseless()) {
    StateVector<Scalar> st(c.n_qubits);
    apply(st, c);
    return sample_counts(st, shots, rng);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> pauli(0, 2);
  Histogram hist;
  for (std::int64_t s = 0; s < shots; ++s) {
    StateVector<Scalar> st(c.n_qubits);
    for (const Gate& g : c.gates) {
      apply(st, g);
      const auto qs = g.touched();
      const double p = qs.size() >= 2 ? noise.p2q : noise.p1q;
      if (p <= 0.0) continue;
      for (int q : qs)
        if (unif(rng) < p) detail::apply_pauli(st, q, pauli(rng));
    }
    ++hist[sample_one(st, rng)];
  }
  return hist;
}

}  // namespace qauto
