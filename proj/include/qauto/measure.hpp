#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qauto/rng.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

struct zero_probability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Multinomial draw of `shots` computational-basis samples from |amps|^2.
/// Deterministic for a fixed RNG state.
template <typename Scalar>
Histogram sample_counts(const StateVector<Scalar>& st, std::int64_t shots,
                        Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  const auto probs = st.probabilities();
  std::vector<Scalar> cdf(static_cast<std::size_t>(probs.size()));
  Scalar acc = 0;
  for (std::int64_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  std::uniform_real_distribution<Scalar> unif(Scalar(0), Scalar(1));
  Histogram hist;
  for (std::int64_t s = 0; s < shots; ++s) {
    const Scalar u = unif(rng) * acc;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t idx = static_cast<std::uint64_t>(it - cdf.begin());
    if (idx >= static_cast<std::uint64_t>(probs.size()))
      idx = static_cast<std::uint64_t>(probs.size()) - 1;
    ++hist[idx];
  }
  return hist;
}

/// Single computational-basis sample.
template <typename Scalar>
std::uint64_t sample_one(const StateVector<Scalar>& st, Rng& rng) {
  std::uniform_real_distribution<Scalar> unif(Scalar(0), Scalar(1));
  Scalar u = unif(rng) * st.norm_sq();
  Scalar acc = 0;
  const std::int64_t dim = st.dim();
  for (std::int64_t i = 0; i < dim; ++i) {
    acc += std::norm(st.amps[i]);
    if (u < acc) return static_cast<std::uint64_t>(i);
  }
  return static_cast<std::uint64_t>(dim - 1);
}

/// Projects onto qubit==outcome and renormalizes. Returns the conditional
/// state and the pre-collapse probability of the outcome.
template <typename Scalar>
std::pair<StateVector<Scalar>, Scalar> post_select(
    const StateVector<Scalar>& st, int qubit, int outcome) {
  if (qubit < 0 || qubit >= st.n_qubits)
    throw std::invalid_argument("post_select qubit out of range");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("outcome must be 0 or 1");
  const std::int64_t bit = 1ll << qubit;
  Scalar p = 0;
  const std::int64_t dim = st.dim();
  for (std::int64_t i = 0; i < dim; ++i)
    if (bool(i & bit) == bool(outcome)) p += std::norm(st.amps[i]);
  if (p < Scalar(1e-12))
    throw zero_probability_error("post_select on zero-probability branch");
  StateVector<Scalar> out = st;
  const Scalar scale = Scalar(1) / std::sqrt(p);
  for (std::int64_t i = 0; i < dim; ++i) {
    if (bool(i & bit) == bool(outcome))
      out.amps[i] *= scale;
    else
      out.amps[i] = std::complex<Scalar>(0);
  }
  return {std::move(out), p};
}

/// Marginal distribution over the listed qubits (qubits[k] is bit k of the
/// marginal outcome index).
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> marginal_probabilities(
    const StateVector<Scalar>& st, const std::vector<int>& qubits) {
  Eigen::Vector<Scalar, Eigen::Dynamic> out =
      Eigen::Vector<Scalar, Eigen::Dynamic>::Zero(1ll << qubits.size());
  const std::int64_t dim = st.dim();
  for (std::int64_t i = 0; i < dim; ++i) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k)
      v |= ((static_cast<std::uint64_t>(i) >> qubits[k]) & 1ull) << k;
    out[static_cast<std::int64_t>(v)] += std::norm(st.amps[i]);
  }
  return out;
}

/// Mean of a diagonal observable over a shot histogram.
inline double histogram_expectation(
    const Histogram& hist, const std::function<double(std::uint64_t)>& value) {
  double num = 0;
  std::int64_t total = 0;
  for (const auto& [x, c] : hist) {
    num += value(x) * static_cast<double>(c);
    total += c;
  }
  if (total == 0) throw std::invalid_argument("empty histogram");
  return num / static_cast<double>(total);
}

/// <Z_a Z_b> estimated from counts.
inline double zz_expectation(const Histogram& hist, int a, int b) {
  return histogram_expectation(hist, [&](std::uint64_t x) {
    const int za = ((x >> a) & 1ull) ? -1 : 1;
    const int zb = ((x >> b) & 1ull) ? -1 : 1;
    return double(za * zb);
  });
}

}  // namespace qauto
