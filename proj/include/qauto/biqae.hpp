#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "qauto/grover.hpp"
#include "qauto/noise.hpp"
#include "qauto/rng.hpp"

namespace qauto {

struct posterior_underflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid posterior over the amplitude angle theta in (0, pi/2). Weights are
/// point masses summing to 1; the amplitude is a = sin^2(theta).
struct AmplitudePosterior {
  Eigen::VectorXd theta;
  Eigen::VectorXd density;

  double amplitude_mean() const {
    return density.dot(theta.array().sin().square().matrix());
  }
};

struct GaussianPrior {
  double mean = 0.5;  // on the amplitude a
  double std = 0.1;
};

AmplitudePosterior uniform_amplitude_prior(int grid_points = 2048);
AmplitudePosterior gaussian_amplitude_prior(const GaussianPrior& prior,
                                            int grid_points = 2048);

/// Binomial Bayes update: multiply by sin^2((2k+1)theta)^m
/// (1-sin^2)^(n-m) and renormalize. Accumulates in log space; throws
/// posterior_underflow_error if every grid point is annihilated.
AmplitudePosterior update_posterior(const AmplitudePosterior& post, int k,
                                    std::int64_t successes, std::int64_t shots);

struct HpdInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool multimodal = false;  // set when the HPD set is a union of intervals

  double width() const { return hi - lo; }
};

/// Interval membership with a floating-point guard for amplitudes landing
/// exactly on a grid-cell boundary.
inline bool covers(const HpdInterval& ci, double a) {
  constexpr double tol = 1e-12;
  return ci.lo - tol <= a && a <= ci.hi + tol;
}

/// Smallest credible interval on the a = sin^2(theta) axis holding at
/// least `mass`, via a threshold sweep on the grid weights. A multimodal
/// HPD set is reported as its bounding interval with the flag set.
HpdInterval hpd_interval(const AmplitudePosterior& post, double mass = 0.95);

struct BiqaeConfig {
  int max_iterations = 6;
  std::int64_t shots = 300;
  int schedule_base = 3;
  double epsilon = 1e-3;        // target HPD width on the a axis
  double credible_mass = 0.95;
  int grid_points = 2048;
  std::optional<GaussianPrior> prior;  // uniform when unset
  // a k=0 calibration round is prepended under the uniform prior
  bool calibration_round = true;

  void validate() const;
};

/// Amplitude-preparing circuit plus its marked outcome.
struct AmplitudeOracle {
  Circuit prep;
  std::vector<int> marked_qubits;
  std::uint64_t marked_pattern = 0;

  GroverSetup grover() const { return {prep, marked_qubits, marked_pattern}; }
};

/// 1-qubit Ry oracle with marked outcome |1>: P(marked) = a.
AmplitudeOracle ry_oracle(double a);

/// 2-qubit separable Ry(x)Ry(y) oracle marked on |11>: P(marked) = a when
/// the factor amplitudes multiply to a (equal split here).
AmplitudeOracle ry_product_oracle(double a);

struct BiqaeResult {
  double a_hat = 0.0;
  HpdInterval interval;
  int iterations = 0;
  std::int64_t oracle_queries = 0;
  AmplitudePosterior posterior;
  std::vector<int> schedule;
};

/// The estimation loop: k_t = base^t Grover iterations per round, binomial
/// posterior updates, HPD-width termination. Oracle queries count
/// (2k_t + 1) * shots per round.
BiqaeResult estimate(const AmplitudeOracle& oracle, const BiqaeConfig& cfg,
                     const NoiseModel& noise, Rng& rng);

}  // namespace qauto
