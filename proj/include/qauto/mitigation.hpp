#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "qauto/measure.hpp"
#include "qauto/statevector.hpp"

namespace qauto {

/// Gate folding: each gate G becomes G (G^dag G)^((lambda-1)/2), so the
/// gate count scales by the odd factor lambda while the noiseless circuit
/// is unchanged.
Circuit fold(const Circuit& c, int lambda);

/// Least-squares polynomial fit through (lambda, value) points, evaluated
/// at lambda = 0.
double richardson_extrapolate(
    const std::vector<std::pair<double, double>>& points, int order = 1);

struct ReadoutCorrection {
  Eigen::VectorXd quasi;   // corrected distribution, clipped and renormalized
  double clipped_mass = 0; // total negative mass removed
  bool clipped = false;
};

/// Solves A p = empirical frequencies for a column-stochastic assignment
/// matrix A, clips negatives and renormalizes.
ReadoutCorrection readout_mitigate(const Histogram& counts,
                                   const Eigen::MatrixXd& assignment);

/// Per-qubit flip probabilities tensored into a full assignment matrix
/// (A(i,j) = P(read i | prepared j), qubit 0 least significant).
Eigen::MatrixXd tensor_assignment_matrix(
    const std::vector<std::pair<double, double>>& flip_probs);

struct ZneStage {
  std::vector<int> scale_factors{1, 3, 5};
  int order = 1;
};

struct ReadoutStage {
  Eigen::MatrixXd assignment;
};

using MitigationStage = std::variant<ReadoutStage, ZneStage>;

/// Count transformations applied in declared order. Readout stages correct
/// each execution's counts; a ZNE stage (at most one, last) expands the
/// run across folded circuits and Richardson-extrapolates the observable.
struct MitigationPipeline {
  std::vector<MitigationStage> stages;

  void validate() const;
  bool has_zne() const;
};

using DiagObservable = std::function<double(std::uint64_t)>;
using CircuitRunner = std::function<Histogram(const Circuit&)>;

struct MitigatedExpectation {
  double value = 0.0;      // after the full pipeline
  double raw_value = 0.0;  // scale-1, no correction
  std::vector<std::pair<double, double>> scale_points;
  double clipped_mass = 0.0;
};

/// Executes the circuit through the pipeline and evaluates the observable.
/// An empty pipeline reproduces the raw expectation exactly.
MitigatedExpectation run_pipeline(const Circuit& c,
                                  const DiagObservable& observable,
                                  const MitigationPipeline& pipeline,
                                  const CircuitRunner& runner);

}  // namespace qauto
