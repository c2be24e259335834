#pragma once

#include <complex>
#include <random>

#include "qauto/rng.hpp"
#include "qauto/statevector.hpp"

namespace test_util {

inline qauto::StateVectord random_state(int n_qubits, qauto::Rng& rng) {
  qauto::StateVectord st(n_qubits);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::int64_t i = 0; i < st.dim(); ++i)
    st.amps[i] = std::complex<double>(gauss(rng), gauss(rng));
  st.amps /= std::sqrt(st.norm_sq());
  return st;
}

inline Eigen::VectorXd random_simplex(int n, qauto::Rng& rng) {
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = unif(rng);
  return v / v.sum();
}

inline double max_unitary_deviation(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd delta =
      u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return delta.cwiseAbs().maxCoeff();
}

}  // namespace test_util
