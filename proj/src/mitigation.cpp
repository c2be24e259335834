#include "qauto/mitigation.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace qauto {

Circuit fold(const Circuit& c, int lambda) {
  if (lambda < 1 || lambda % 2 == 0)
    throw std::invalid_argument("fold factor must be an odd integer >= 1");
  Circuit out(c.n_qubits);
  const int repeats = (lambda - 1) / 2;
  for (const Gate& g : c.gates) {
    out.append(g);
    const Gate inv = inverse(g);
    for (int r = 0; r < repeats; ++r) {
      out.append(inv);
      out.append(g);
    }
  }
  return out;
}

double richardson_extrapolate(
    const std::vector<std::pair<double, double>>& points, int order) {
  if (points.size() < 2)
    throw std::invalid_argument("extrapolation needs at least 2 points");
  if (order < 1 || order >= static_cast<int>(points.size()))
    throw std::invalid_argument("fit order must lie in [1, points-1]");
  std::set<double> lambdas;
  for (const auto& [l, v] : points) lambdas.insert(l);
  if (lambdas.size() != points.size())
    throw std::invalid_argument("duplicate scale factors");

  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd a(n, order + 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int j = 0; j <= order; ++j) {
      a(i, j) = pw;
      pw *= points[static_cast<std::size_t>(i)].first;
    }
    y[i] = points[static_cast<std::size_t>(i)].second;
  }
  const Eigen::VectorXd coeffs =
      a.colPivHouseholderQr().solve(y);
  return coeffs[0];  // value at lambda = 0
}

ReadoutCorrection readout_mitigate(const Histogram& counts,
                                   const Eigen::MatrixXd& assignment) {
  const Eigen::Index dim = assignment.rows();
  if (assignment.cols() != dim)
    throw std::invalid_argument("assignment matrix must be square");
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (std::abs(assignment.col(j).sum() - 1.0) > 1e-9)
      throw std::invalid_argument("assignment matrix must be column-stochastic");
  }
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(dim);
  double total = 0;
  for (const auto& [x, c] : counts) {
    if (static_cast<Eigen::Index>(x) >= dim)
      throw std::invalid_argument("histogram outcome exceeds matrix dimension");
    freq[static_cast<Eigen::Index>(x)] += static_cast<double>(c);
    total += static_cast<double>(c);
  }
  if (total <= 0) throw std::invalid_argument("empty histogram");
  freq /= total;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(assignment);
  if (!lu.isInvertible())
    throw std::invalid_argument("singular assignment matrix");
  Eigen::VectorXd p = lu.solve(freq);

  ReadoutCorrection out;
  out.clipped_mass = -p.cwiseMin(0.0).sum();
  out.clipped = out.clipped_mass > 1e-12;
  p = p.cwiseMax(0.0);
  const double mass = p.sum();
  if (mass <= 0)
    throw std::runtime_error("readout correction clipped everything");
  out.quasi = p / mass;
  return out;
}

Eigen::MatrixXd tensor_assignment_matrix(
    const std::vector<std::pair<double, double>>& flip_probs) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(1, 1);
  // qubit 0 is the least significant bit: kron later qubits on the left
  for (const auto& [p01, p10] : flip_probs) {
    Eigen::MatrixXd q(2, 2);
    q << 1.0 - p01, p10,
        p01, 1.0 - p10;
    Eigen::MatrixXd next(a.rows() * 2, a.cols() * 2);
    next.block(0, 0, a.rows(), a.cols()) = q(0, 0) * a;
    next.block(0, a.cols(), a.rows(), a.cols()) = q(0, 1) * a;
    next.block(a.rows(), 0, a.rows(), a.cols()) = q(1, 0) * a;
    next.block(a.rows(), a.cols(), a.rows(), a.cols()) = q(1, 1) * a;
    a = next;
  }
  return a;
}

void MitigationPipeline::validate() const {
  bool saw_zne = false;
  for (const auto& stage : stages) {
    if (saw_zne)
      throw std::invalid_argument(
          "a ZNE stage consumes the run; no stage may follow it");
    if (std::holds_alternative<ZneStage>(stage)) {
      const auto& z = std::get<ZneStage>(stage);
      if (z.scale_factors.empty())
        throw std::invalid_argument("ZNE needs at least one scale factor");
      for (int s : z.scale_factors)
        if (s < 1 || s % 2 == 0)
          throw std::invalid_argument("ZNE scale factors must be odd");
      saw_zne = true;
    }
  }
}

bool MitigationPipeline::has_zne() const {
  for (const auto& stage : stages)
    if (std::holds_alternative<ZneStage>(stage)) return true;
  return false;
}

namespace {

double expectation_of_counts(const Histogram& counts,
                             const DiagObservable& observable,
                             const MitigationPipeline& pipeline, int n_qubits,
                             double& clipped_mass) {
  bool corrected = false;
  Eigen::VectorXd quasi;
  for (const auto& stage : pipeline.stages) {
    if (!std::holds_alternative<ReadoutStage>(stage)) continue;
    const auto& readout = std::get<ReadoutStage>(stage);
    if (!corrected) {
      const ReadoutCorrection rc = readout_mitigate(counts, readout.assignment);
      quasi = rc.quasi;
      clipped_mass += rc.clipped_mass;
      corrected = true;
    } else {
      // chain further corrections on the quasi-distribution
      Eigen::FullPivLU<Eigen::MatrixXd> lu(readout.assignment);
      if (!lu.isInvertible())
        throw std::invalid_argument("singular assignment matrix");
      Eigen::VectorXd p = lu.solve(quasi);
      clipped_mass += -p.cwiseMin(0.0).sum();
      p = p.cwiseMax(0.0);
      quasi = p / p.sum();
    }
  }
  if (!corrected) return histogram_expectation(counts, observable);
  double e = 0;
  for (Eigen::Index x = 0; x < quasi.size(); ++x)
    if (quasi[x] != 0.0) e += quasi[x] * observable(static_cast<std::uint64_t>(x));
  (void)n_qubits;
  return e;
}

}  // namespace

MitigatedExpectation run_pipeline(const Circuit& c,
                                  const DiagObservable& observable,
                                  const MitigationPipeline& pipeline,
                                  const CircuitRunner& runner) {
  pipeline.validate();
  MitigatedExpectation out;

  const ZneStage* zne = nullptr;
  for (const auto& stage : pipeline.stages)
    if (std::holds_alternative<ZneStage>(stage))
      zne = &std::get<ZneStage>(stage);

  std::vector<int> scales = zne ? zne->scale_factors : std::vector<int>{1};
  bool have_raw = false;
  for (int s : scales) {
    const Circuit folded = (s == 1) ? c : fold(c, s);
    const Histogram counts = runner(folded);
    const double e = expectation_of_counts(counts, observable, pipeline,
                                           c.n_qubits, out.clipped_mass);
    out.scale_points.emplace_back(static_cast<double>(s), e);
    if (s == 1) {
      out.raw_value = histogram_expectation(counts, observable);
      have_raw = true;
    }
  }
  if (!have_raw && !out.scale_points.empty())
    out.raw_value = out.scale_points.front().second;

  if (zne && out.scale_points.size() >= 2)
    out.value = richardson_extrapolate(out.scale_points, zne->order);
  else
    out.value = out.scale_points.front().second;
  return out;
}

}  // namespace qauto
