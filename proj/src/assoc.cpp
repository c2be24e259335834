#include "qauto/assoc.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qauto {

Eigen::Matrix4d constant_velocity_f(double dt) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  return f;
}

Eigen::Matrix4d velocity_process_noise(double q) {
  Eigen::Matrix4d n = Eigen::Matrix4d::Zero();
  n(2, 2) = q;
  n(3, 3) = q;
  return n;
}

Eigen::Matrix<double, 2, 4> position_observation_h() {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

namespace {

Eigen::Matrix4d symmetrized(const Eigen::Matrix4d& p) {
  return 0.5 * (p + p.transpose());
}

void require_spd(const Eigen::Matrix4d& p, const char* what) {
  Eigen::LLT<Eigen::Matrix4d> llt(p);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) +
                             ": covariance is not positive-definite");
}

}  // namespace

Track kalman_predict(const Track& t, const Eigen::Matrix4d& F,
                     const Eigen::Matrix4d& Q_proc) {
  Track out;
  out.x = F * t.x;
  out.P = symmetrized(F * t.P * F.transpose() + Q_proc);
  require_spd(out.P, "kalman_predict");
  return out;
}

Track kalman_update(const Track& t, const Measurement& m,
                    const Eigen::Matrix<double, 2, 4>& H) {
  const Eigen::Matrix2d S = H * t.P * H.transpose() + m.R;
  const Eigen::Matrix<double, 4, 2> K =
      t.P * H.transpose() * S.inverse();
  Track out;
  out.x = t.x + K * (m.z - H * t.x);
  out.P = symmetrized((Eigen::Matrix4d::Identity() - K * H) * t.P);
  require_spd(out.P, "kalman_update");
  return out;
}

AssociationCost association_cost(const Track& t, const Measurement& m,
                                 const Eigen::Matrix<double, 2, 4>& H) {
  AssociationCost out;
  out.S = H * t.P * H.transpose() + m.R;
  const double det = out.S.determinant();
  if (det <= 0 || !std::isfinite(det))
    throw std::runtime_error("association_cost: singular innovation covariance");
  const Eigen::Vector2d nu = m.z - H * t.x;
  out.d2 = nu.dot(out.S.inverse() * nu);
  out.cost = 0.5 * (out.d2 + std::log(4.0 * M_PI * M_PI * det));
  return out;
}

double CostMatrix::max_abs_gated_cost() const {
  double m = 0.0;
  for (int i = 0; i < n_tracks(); ++i)
    for (int j = 0; j < n_meas(); ++j)
      if (gate(i, j)) m = std::max(m, std::abs(cost(i, j)));
  return m;
}

CostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                             const std::vector<Measurement>& measurements,
                             double gate_threshold,
                             std::optional<double> c_miss,
                             std::optional<double> c_fa) {
  const int n = static_cast<int>(tracks.size());
  const int m = static_cast<int>(measurements.size());
  CostMatrix out;
  out.cost = Eigen::MatrixXd::Zero(n, m);
  out.gate.resize(n, m);
  out.gate.setConstant(false);
  const auto H = position_observation_h();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const AssociationCost c = association_cost(
          tracks[static_cast<std::size_t>(i)],
          measurements[static_cast<std::size_t>(j)], H);
      if (c.d2 <= gate_threshold) {
        out.gate(i, j) = true;
        out.cost(i, j) = c.cost;
      }
    }
  }
  const double scale = out.max_abs_gated_cost();
  out.c_miss = c_miss.value_or(0.7 * scale);
  out.c_fa = c_fa.value_or(0.7 * scale);
  return out;
}

namespace {

void add_coupling(Eigen::MatrixXd& q, int a, int b, double value) {
  if (a == b) {
    q(a, a) += value;
    return;
  }
  q(std::min(a, b), std::max(a, b)) += value;
}

}  // namespace

QuboInstance build_qubo(const CostMatrix& cost, std::optional<double> lambda) {
  const int n = cost.n_tracks();
  const int m = cost.n_meas();
  QuboInstance q;
  q.vars.x_index = Eigen::MatrixXi::Constant(n, m, -1);
  q.vars.m_index.resize(n);
  q.vars.f_index.resize(m);

  int next = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (cost.gate(i, j)) q.vars.x_index(i, j) = next++;
  for (int i = 0; i < n; ++i) q.vars.m_index[i] = next++;
  for (int j = 0; j < m; ++j) q.vars.f_index[j] = next++;
  q.n_var = next;

  q.lambda = lambda.value_or(1.5 * cost.max_abs_gated_cost());
  const double lam = q.lambda;
  q.Q = Eigen::MatrixXd::Zero(q.n_var, q.n_var);

  // objective diagonal
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (cost.gate(i, j))
        q.Q(q.vars.x_index(i, j), q.vars.x_index(i, j)) += cost.cost(i, j);
  for (int i = 0; i < n; ++i)
    q.Q(q.vars.m_index[i], q.vars.m_index[i]) += cost.c_miss;
  for (int j = 0; j < m; ++j)
    q.Q(q.vars.f_index[j], q.vars.f_index[j]) += cost.c_fa;

  // row constraints: (sum_j x_ij + m_i - 1)^2
  for (int i = 0; i < n; ++i) {
    std::vector<int> members;
    for (int j = 0; j < m; ++j)
      if (cost.gate(i, j)) members.push_back(q.vars.x_index(i, j));
    members.push_back(q.vars.m_index[i]);
    for (std::size_t a = 0; a < members.size(); ++a) {
      add_coupling(q.Q, members[a], members[a], -lam);
      for (std::size_t b = a + 1; b < members.size(); ++b)
        add_coupling(q.Q, members[a], members[b], 2.0 * lam);
    }
    q.offset += lam;
  }

  // column constraints: (sum_i x_ij + f_j - 1)^2
  for (int j = 0; j < m; ++j) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (cost.gate(i, j)) members.push_back(q.vars.x_index(i, j));
    members.push_back(q.vars.f_index[j]);
    for (std::size_t a = 0; a < members.size(); ++a) {
      add_coupling(q.Q, members[a], members[a], -lam);
      for (std::size_t b = a + 1; b < members.size(); ++b)
        add_coupling(q.Q, members[a], members[b], 2.0 * lam);
    }
    q.offset += lam;
  }
  return q;
}

double qubo_energy(const QuboInstance& q, const std::vector<int>& y) {
  if (static_cast<int>(y.size()) != q.n_var)
    throw std::invalid_argument("qubo_energy: configuration length mismatch");
  double e = q.offset;
  for (int a = 0; a < q.n_var; ++a) {
    if (!y[static_cast<std::size_t>(a)]) continue;
    e += q.Q(a, a);
    for (int b = a + 1; b < q.n_var; ++b)
      if (y[static_cast<std::size_t>(b)]) e += q.Q(a, b);
  }
  return e;
}

double qubo_objective_part(const QuboInstance& q, const CostMatrix& cost,
                           const std::vector<int>& y) {
  double e = 0;
  const int n = cost.n_tracks(), m = cost.n_meas();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (cost.gate(i, j) && y[static_cast<std::size_t>(q.vars.x_index(i, j))])
        e += cost.cost(i, j);
  for (int i = 0; i < n; ++i)
    if (y[static_cast<std::size_t>(q.vars.m_index[i])]) e += cost.c_miss;
  for (int j = 0; j < m; ++j)
    if (y[static_cast<std::size_t>(q.vars.f_index[j])]) e += cost.c_fa;
  return e;
}

bool qubo_feasible(const QuboInstance& q, const std::vector<int>& y) {
  const int n = q.vars.n_tracks(), m = q.vars.n_meas();
  for (int i = 0; i < n; ++i) {
    int total = y[static_cast<std::size_t>(q.vars.m_index[i])];
    for (int j = 0; j < m; ++j)
      if (q.vars.x_index(i, j) >= 0)
        total += y[static_cast<std::size_t>(q.vars.x_index(i, j))];
    if (total != 1) return false;
  }
  for (int j = 0; j < m; ++j) {
    int total = y[static_cast<std::size_t>(q.vars.f_index[j])];
    for (int i = 0; i < n; ++i)
      if (q.vars.x_index(i, j) >= 0)
        total += y[static_cast<std::size_t>(q.vars.x_index(i, j))];
    if (total != 1) return false;
  }
  return true;
}

IsingInstance to_ising(const QuboInstance& q) {
  IsingInstance out;
  const int n = q.n_var;
  out.h = Eigen::VectorXd::Zero(n);
  out.J = Eigen::MatrixXd::Zero(n, n);
  out.offset = q.offset;
  for (int a = 0; a < n; ++a) {
    out.h[a] -= q.Q(a, a) / 2.0;
    out.offset += q.Q(a, a) / 2.0;
    for (int b = a + 1; b < n; ++b) {
      const double w = q.Q(a, b);
      if (w == 0.0) continue;
      out.J(a, b) += w / 4.0;
      out.h[a] -= w / 4.0;
      out.h[b] -= w / 4.0;
      out.offset += w / 4.0;
    }
  }
  return out;
}

double ising_energy(const IsingInstance& ising, std::uint64_t bits) {
  const int n = ising.n_var();
  double e = ising.offset;
  for (int a = 0; a < n; ++a) {
    const double za = ((bits >> a) & 1ull) ? -1.0 : 1.0;
    e += ising.h[a] * za;
    for (int b = a + 1; b < n; ++b) {
      if (ising.J(a, b) == 0.0) continue;
      const double zb = ((bits >> b) & 1ull) ? -1.0 : 1.0;
      e += ising.J(a, b) * za * zb;
    }
  }
  return e;
}

int structural_nonzeros(const QuboInstance& q) {
  int count = 0;
  for (int a = 0; a < q.n_var; ++a)
    for (int b = a; b < q.n_var; ++b)
      if (q.Q(a, b) != 0.0) ++count;
  return count;
}

int symmetric_nonzeros(const QuboInstance& q) {
  int count = 0;
  for (int a = 0; a < q.n_var; ++a)
    for (int b = a; b < q.n_var; ++b)
      if (q.Q(a, b) != 0.0) count += (a == b) ? 1 : 2;
  return count;
}

long appendix_nonzero_formula(int n_tracks, int n_meas) {
  const long n = static_cast<long>(n_tracks);
  const long m = static_cast<long>(n_meas);
  const long n_var = n * m + n + m;
  return n_var + 2 * (m * (m - 1) / 2) * n + 2 * (n * (n - 1) / 2) * m;
}

long appendix_nonzero_formula_with_slack(int n_tracks, int n_meas) {
  return appendix_nonzero_formula(n_tracks, n_meas) +
         2l * n_tracks * n_meas;
}

void write_qubo(const QuboInstance& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write qubo file: " + path);
  out.precision(17);
  out << q.n_var << " " << q.offset << "\n";
  for (int a = 0; a < q.n_var; ++a)
    for (int b = a; b < q.n_var; ++b)
      if (q.Q(a, b) != 0.0) out << a << " " << b << " " << q.Q(a, b) << "\n";
}

QuboInstance load_qubo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open qubo file: " + path);
  QuboInstance q;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty qubo file: " + path);
  {
    std::istringstream head(line);
    if (!(head >> q.n_var >> q.offset))
      throw std::runtime_error("malformed qubo header: " + path);
  }
  q.Q = Eigen::MatrixXd::Zero(q.n_var, q.n_var);
  int a, b;
  double v;
  while (in >> a >> b >> v) {
    if (a < 0 || b < 0 || a >= q.n_var || b >= q.n_var || a > b)
      throw std::runtime_error("malformed qubo triplet in " + path);
    q.Q(a, b) = v;
  }
  return q;
}

AssociationScenario load_association_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  AssociationScenario s;
  for (const auto& t : j.at("tracks")) {
    Track track;
    const auto x = t.at("x").get<std::vector<double>>();
    if (x.size() != 4) throw std::runtime_error("track state must have 4 entries");
    for (int i = 0; i < 4; ++i) track.x[i] = x[static_cast<std::size_t>(i)];
    const auto p = t.at("P");
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        track.P(r, c) = p.at(static_cast<std::size_t>(r))
                            .at(static_cast<std::size_t>(c))
                            .get<double>();
    s.tracks.push_back(track);
  }
  for (const auto& mj : j.at("measurements")) {
    Measurement m;
    const auto z = mj.at("z").get<std::vector<double>>();
    if (z.size() != 2) throw std::runtime_error("measurement must have 2 entries");
    m.z << z[0], z[1];
    const auto r = mj.at("R");
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        m.R(a, b) = r.at(static_cast<std::size_t>(a))
                        .at(static_cast<std::size_t>(b))
                        .get<double>();
    s.measurements.push_back(m);
  }
  return s;
}

void save_association_scenario(const AssociationScenario& s,
                               const std::string& path) {
  nlohmann::json j;
  j["tracks"] = nlohmann::json::array();
  for (const auto& t : s.tracks) {
    nlohmann::json tj;
    tj["x"] = {t.x[0], t.x[1], t.x[2], t.x[3]};
    nlohmann::json p = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < 4; ++c) row.push_back(t.P(r, c));
      p.push_back(row);
    }
    tj["P"] = p;
    j["tracks"].push_back(tj);
  }
  j["measurements"] = nlohmann::json::array();
  for (const auto& m : s.measurements) {
    nlohmann::json mj;
    mj["z"] = {m.z[0], m.z[1]};
    mj["R"] = {{m.R(0, 0), m.R(0, 1)}, {m.R(1, 0), m.R(1, 1)}};
    j["measurements"].push_back(mj);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qauto
