#include "qauto/pomdp.hpp"

#include <fstream>

#include <json.hpp>

namespace qauto {

void PomdpModel::validate(double tol) const {
  if (n_states < 1 || n_actions < 1 || n_obs < 1)
    throw std::invalid_argument("model dimensions must be positive");
  if (static_cast<int>(T.size()) != n_actions ||
      static_cast<int>(O.size()) != n_actions)
    throw std::invalid_argument("need one T and O matrix per action");
  if (R.rows() != n_states || R.cols() != n_actions)
    throw std::invalid_argument("reward table shape mismatch");
  for (int a = 0; a < n_actions; ++a) {
    const auto& t = T[static_cast<std::size_t>(a)];
    const auto& o = O[static_cast<std::size_t>(a)];
    if (t.rows() != n_states || t.cols() != n_states)
      throw std::invalid_argument("transition matrix shape mismatch");
    if (o.rows() != n_states || o.cols() != n_obs)
      throw std::invalid_argument("observation matrix shape mismatch");
    if ((t.array() < 0).any() || (o.array() < 0).any())
      throw std::invalid_argument("negative probability entry");
    for (int s = 0; s < n_states; ++s) {
      if (std::abs(t.row(s).sum() - 1.0) > tol)
        throw std::invalid_argument("transition row does not sum to 1");
      if (std::abs(o.row(s).sum() - 1.0) > tol)
        throw std::invalid_argument("observation row does not sum to 1");
    }
  }
  if (gamma <= 0 || gamma > 1)
    throw std::invalid_argument("gamma must lie in (0, 1]");
}

double evidence_probability(const PomdpModel& m, const Belief& b, int a,
                            int o) {
  if (b.size() != m.n_states)
    throw std::invalid_argument("belief length mismatch");
  const Belief predicted = m.predict(b, a);
  return predicted.dot(m.O[static_cast<std::size_t>(a)].col(o));
}

BeliefUpdate belief_update(const PomdpModel& m, const Belief& b, int a,
                           int o) {
  if (b.size() != m.n_states)
    throw std::invalid_argument("belief length mismatch");
  const Belief predicted = m.predict(b, a);
  Belief unnormalized =
      m.O[static_cast<std::size_t>(a)].col(o).cwiseProduct(predicted);
  const double evidence = unnormalized.sum();
  if (evidence < 1e-12)
    throw std::runtime_error("impossible observation: evidence below 1e-12");
  return {unnormalized / evidence, evidence};
}

double hellinger(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("hellinger: length mismatch");
  const double s =
      (p.cwiseSqrt() - q.cwiseSqrt()).squaredNorm();
  return std::sqrt(s) / std::sqrt(2.0);
}

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("kl_divergence: length mismatch");
  double d = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0)
      throw std::invalid_argument(
          "kl_divergence: q vanishes where p has mass");
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

PomdpModel tiger2() {
  PomdpModel m;
  m.n_states = 2;
  m.n_actions = 3;
  m.n_obs = 2;
  m.state_names = {"tiger-left", "tiger-right"};
  m.action_names = {"listen", "open-left", "open-right"};
  m.obs_names = {"hear-left", "hear-right"};
  m.gamma = 0.95;

  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd reset = Eigen::MatrixXd::Constant(2, 2, 0.5);
  m.T = {identity, reset, reset};

  Eigen::MatrixXd listen_obs(2, 2);
  listen_obs << 0.85, 0.15,  // tiger-left: mostly hear-left
      0.15, 0.85;
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(2, 2, 0.5);
  m.O = {listen_obs, flat, flat};

  m.R.resize(2, 3);
  // rows: tiger-left, tiger-right; cols: listen, open-left, open-right
  m.R << -1, -100, 10,
      -1, 10, -100;
  m.validate();
  return m;
}

PomdpModel tiger4() {
  PomdpModel m;
  m.n_states = 4;
  m.n_actions = 3;
  m.n_obs = 2;
  m.state_names = {"far-left", "near-left", "near-right", "far-right"};
  m.action_names = {"listen", "open-left", "open-right"};
  m.obs_names = {"hear-left", "hear-right"};
  m.gamma = 0.95;

  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(4, 4);
  Eigen::MatrixXd reset = Eigen::MatrixXd::Constant(4, 4, 0.25);
  m.T = {identity, reset, reset};

  Eigen::MatrixXd listen_obs(4, 2);
  listen_obs << 0.85, 0.15,
      0.70, 0.30,
      0.30, 0.70,
      0.15, 0.85;
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(4, 2, 0.5);
  m.O = {listen_obs, flat, flat};

  m.R.resize(4, 3);
  // opening pays +10 when the tiger sits in the opposite half
  m.R << -1, -100, 10,
      -1, -100, 10,
      -1, 10, -100,
      -1, 10, -100;
  m.validate();
  return m;
}

PomdpModel grid_world(int width, int height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("grid dimensions must be positive");
  PomdpModel m;
  const int n = width * height;
  m.n_states = n;
  m.n_actions = 5;
  m.n_obs = n;
  m.action_names = {"north", "south", "west", "east", "stay"};
  m.gamma = 0.95;
  for (int s = 0; s < n; ++s) {
    const int x = s % width, y = s / width;
    m.state_names.push_back("cell(" + std::to_string(x) + "," +
                            std::to_string(y) + ")");
    m.obs_names.push_back(m.state_names.back());
  }
  const int goal = n - 1;
  const double p_move = 0.9;

  auto neighbour = [&](int s, int a) {
    const int x = s % width, y = s / width;
    int nx = x, ny = y;
    if (a == 0) ny = y + 1;
    if (a == 1) ny = y - 1;
    if (a == 2) nx = x - 1;
    if (a == 3) nx = x + 1;
    if (nx < 0 || nx >= width || ny < 0 || ny >= height) return s;
    return ny * width + nx;
  };

  m.T.assign(5, Eigen::MatrixXd::Zero(n, n));
  for (int a = 0; a < 5; ++a) {
    for (int s = 0; s < n; ++s) {
      if (s == goal || a == 4) {
        m.T[static_cast<std::size_t>(a)](s, s) = 1.0;  // absorbing / stay
        continue;
      }
      const int dest = neighbour(s, a);
      if (dest == s) {
        m.T[static_cast<std::size_t>(a)](s, s) = 1.0;
      } else {
        m.T[static_cast<std::size_t>(a)](s, dest) = p_move;
        m.T[static_cast<std::size_t>(a)](s, s) += 1.0 - p_move;
      }
    }
  }

  const double p_sense = 0.7;
  Eigen::MatrixXd sensor(n, n);
  if (n == 1) {
    sensor.setOnes();
  } else {
    sensor.setConstant((1.0 - p_sense) / (n - 1));
    sensor.diagonal().setConstant(p_sense);
  }
  m.O.assign(5, sensor);

  m.R = Eigen::MatrixXd::Constant(n, 5, -1.0);
  m.R.row(goal).setConstant(10.0);
  m.validate();
  return m;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols)
      throw std::invalid_argument("ragged matrix in model file");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

PomdpModel load_pomdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  nlohmann::json j;
  in >> j;
  PomdpModel m;
  m.state_names = j.at("states").get<std::vector<std::string>>();
  m.action_names = j.at("actions").get<std::vector<std::string>>();
  m.obs_names = j.at("observations").get<std::vector<std::string>>();
  m.n_states = static_cast<int>(m.state_names.size());
  m.n_actions = static_cast<int>(m.action_names.size());
  m.n_obs = static_cast<int>(m.obs_names.size());
  m.gamma = j.at("gamma").get<double>();
  for (const auto& t : j.at("transitions")) m.T.push_back(matrix_from_json(t));
  for (const auto& o : j.at("observation_model"))
    m.O.push_back(matrix_from_json(o));
  m.R = matrix_from_json(j.at("rewards"));
  m.validate();
  return m;
}

void save_pomdp(const PomdpModel& m, const std::string& path) {
  nlohmann::json j;
  j["states"] = m.state_names;
  j["actions"] = m.action_names;
  j["observations"] = m.obs_names;
  j["gamma"] = m.gamma;
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : m.T) ts.push_back(matrix_to_json(t));
  j["transitions"] = ts;
  nlohmann::json os = nlohmann::json::array();
  for (const auto& o : m.O) os.push_back(matrix_to_json(o));
  j["observation_model"] = os;
  j["rewards"] = matrix_to_json(m.R);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace qauto
