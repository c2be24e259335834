#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qauto {

/// Kalman track: planar position/velocity state with SPD covariance.
struct Track {
  Eigen::Vector4d x = Eigen::Vector4d::Zero();  // [px, py, vx, vy]
  Eigen::Matrix4d P = Eigen::Matrix4d::Identity();
};

struct Measurement {
  Eigen::Vector2d z = Eigen::Vector2d::Zero();
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
};

/// Constant-velocity motion model with unit time step.
Eigen::Matrix4d constant_velocity_f(double dt = 1.0);

/// Process noise on the velocity block, q * diag.
Eigen::Matrix4d velocity_process_noise(double q = 0.01);

/// Position-selector observation model.
Eigen::Matrix<double, 2, 4> position_observation_h();

Track kalman_predict(const Track& t, const Eigen::Matrix4d& F,
                     const Eigen::Matrix4d& Q_proc);

Track kalman_update(const Track& t, const Measurement& m,
                    const Eigen::Matrix<double, 2, 4>& H);

struct AssociationCost {
  double d2 = 0.0;  // squared Mahalanobis distance
  double cost = 0.0;  // 0.5 * (d2 + ln det(2 pi S)), in nats
  Eigen::Matrix2d S = Eigen::Matrix2d::Identity();
};

AssociationCost association_cost(const Track& t, const Measurement& m,
                                 const Eigen::Matrix<double, 2, 4>& H);

/// Chi-squared gate at 2 dof, 99%.
constexpr double kDefaultGate = 9.21;

struct CostMatrix {
  Eigen::MatrixXd cost;                          // N x M, defined where gated
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> gate;  // N x M mask
  double c_miss = 0.0;
  double c_fa = 0.0;

  int n_tracks() const { return static_cast<int>(cost.rows()); }
  int n_meas() const { return static_cast<int>(cost.cols()); }
  double max_abs_gated_cost() const;
};

/// Gated negative-log-likelihood cost matrix. Miss/false-alarm costs
/// default to 0.7 * max gated |c_ij| when unset.
CostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                             const std::vector<Measurement>& measurements,
                             double gate_threshold = kDefaultGate,
                             std::optional<double> c_miss = std::nullopt,
                             std::optional<double> c_fa = std::nullopt);

/// Flat variable indexing for the QUBO: gated-out pairs are eliminated.
struct QuboVariableMap {
  Eigen::MatrixXi x_index;  // N x M, -1 for gated-out pairs
  Eigen::VectorXi m_index;  // per track
  Eigen::VectorXi f_index;  // per measurement

  int n_tracks() const { return static_cast<int>(x_index.rows()); }
  int n_meas() const { return static_cast<int>(x_index.cols()); }
};

struct QuboInstance {
  int n_var = 0;
  Eigen::MatrixXd Q;  // upper triangle + diagonal
  double offset = 0.0;
  double lambda = 0.0;
  QuboVariableMap vars;
};

/// Assembles the assignment QUBO with row/column equality penalties and
/// miss/false-alarm sentinels. lambda defaults to 1.5 * max gated |c_ij|.
QuboInstance build_qubo(const CostMatrix& cost,
                        std::optional<double> lambda = std::nullopt);

double qubo_energy(const QuboInstance& q, const std::vector<int>& y);

/// Objective part only (costs and sentinels, no penalties).
double qubo_objective_part(const QuboInstance& q, const CostMatrix& cost,
                           const std::vector<int>& y);

/// Row/column equality constraints all satisfied.
bool qubo_feasible(const QuboInstance& q, const std::vector<int>& y);

struct IsingInstance {
  Eigen::VectorXd h;
  Eigen::MatrixXd J;  // upper triangle
  double offset = 0.0;

  int n_var() const { return static_cast<int>(h.size()); }
};

/// Change of variables x = (1 - z) / 2; energies match the QUBO exactly.
IsingInstance to_ising(const QuboInstance& q);

double ising_energy(const IsingInstance& ising, std::uint64_t bits);

/// Count of structurally nonzero entries in the stored upper triangle
/// plus diagonal.
int structural_nonzeros(const QuboInstance& q);

/// Symmetric-matrix nonzero count (diagonal plus both mirror images of
/// each coupling).
int symmetric_nonzeros(const QuboInstance& q);

/// Closed-form count used in the resource analysis: n + 2 C(M,2) N +
/// 2 C(N,2) M; omits the slack-cross couplings.
long appendix_nonzero_formula(int n_tracks, int n_meas);

/// The same count with the 2 N M slack-cross pairs reported on top.
long appendix_nonzero_formula_with_slack(int n_tracks, int n_meas);

/// "i j value" sparse triplets with an "n_var offset" header line.
void write_qubo(const QuboInstance& q, const std::string& path);
QuboInstance load_qubo(const std::string& path);

struct AssociationScenario {
  std::vector<Track> tracks;
  std::vector<Measurement> measurements;
};

AssociationScenario load_association_scenario(const std::string& path);
void save_association_scenario(const AssociationScenario& s,
                               const std::string& path);

}  // namespace qauto
