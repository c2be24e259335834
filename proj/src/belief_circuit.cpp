#include "qauto/belief_circuit.hpp"

#include <algorithm>
#include <cmath>

namespace qauto {

BeliefCircuitLayout BeliefCircuitLayout::for_model(int n_states, int n_actions,
                                                   int n_obs) {
  BeliefCircuitLayout l;
  l.state_bits = std::max(1, bits_for(n_states));
  l.next_state_bits = l.state_bits;
  l.obs_bits = std::max(1, bits_for(n_obs));
  l.action_bits = std::max(1, bits_for(n_actions));
  // amplitude workspace and compute ancillae calibrated against the
  // register-allocation table: 4/3 for |S|=2, 6/6 for |S|=16, 8/10 for |S|=64
  l.amplitude_bits = std::max(4, l.state_bits + 2);
  l.compute_ancillae = l.state_bits + 2 + std::max(0, l.state_bits - 4);
  l.flag_ancillae = 1;
  return l;
}

namespace {

double split_angle(double p0, double p1) {
  if (p0 <= 0 && p1 <= 0) return 0.0;  // unreachable branch
  return 2.0 * std::atan2(std::sqrt(std::max(0.0, p1)),
                          std::sqrt(std::max(0.0, p0)));
}

}  // namespace

void append_controlled_loader(
    Circuit& c, const std::vector<int>& controls,
    const std::vector<int>& targets,
    const std::function<Eigen::VectorXd(std::uint64_t)>& dist) {
  const int n_t = static_cast<int>(targets.size());
  const std::uint64_t n_ctrl_states = 1ull << controls.size();
  // Split the register value from its most significant qubit down; each
  // level conditions on the already-fixed higher target bits.
  for (int k = n_t - 1; k >= 0; --k) {
    std::vector<int> level_controls = controls;
    for (int j = k + 1; j < n_t; ++j) level_controls.push_back(targets[j]);
    const std::uint64_t n_high = 1ull << (n_t - 1 - k);
    std::vector<double> angles(n_ctrl_states * n_high, 0.0);
    for (std::uint64_t ctrl = 0; ctrl < n_ctrl_states; ++ctrl) {
      const Eigen::VectorXd p = dist(ctrl);
      for (std::uint64_t high = 0; high < n_high; ++high) {
        double mass0 = 0, mass1 = 0;
        for (std::uint64_t low = 0; low < (1ull << k); ++low) {
          const std::uint64_t v0 = (high << (k + 1)) | low;
          mass0 += p[static_cast<Eigen::Index>(v0)];
          mass1 += p[static_cast<Eigen::Index>(v0 | (1ull << k))];
        }
        // angle index bit layout follows level_controls: ctrl bits low,
        // then target bit j at position controls.size() + (j - k - 1)
        const std::uint64_t idx = ctrl | (high << controls.size());
        angles[idx] = split_angle(mass0, mass1);
      }
    }
    if (level_controls.empty())
      c.append(gate::ry(targets[k], angles[0]));
    else
      c.append(gate::ucry(targets[k], level_controls, std::move(angles)));
  }
}

void append_amplitude_loader(Circuit& c, const std::vector<int>& targets,
                             const Eigen::VectorXd& probs) {
  if (probs.size() != static_cast<Eigen::Index>(1ll << targets.size()))
    throw std::invalid_argument("loader needs 2^targets probabilities");
  append_controlled_loader(c, {}, targets,
                           [&](std::uint64_t) { return probs; });
}

std::vector<int> FullBeliefRegisters::state_qubits() const {
  std::vector<int> q(static_cast<std::size_t>(n_state));
  for (int i = 0; i < n_state; ++i) q[static_cast<std::size_t>(i)] = i;
  return q;
}

std::vector<int> FullBeliefRegisters::next_state_qubits() const {
  std::vector<int> q(static_cast<std::size_t>(n_state));
  for (int i = 0; i < n_state; ++i)
    q[static_cast<std::size_t>(i)] = n_state + i;
  return q;
}

std::vector<int> FullBeliefRegisters::obs_qubits() const {
  std::vector<int> q(static_cast<std::size_t>(n_obs));
  for (int i = 0; i < n_obs; ++i)
    q[static_cast<std::size_t>(i)] = 2 * n_state + i;
  return q;
}

std::vector<int> FullBeliefRegisters::reward_qubits() const {
  std::vector<int> q(static_cast<std::size_t>(n_reward));
  for (int i = 0; i < n_reward; ++i)
    q[static_cast<std::size_t>(i)] = 2 * n_state + n_obs + i;
  return q;
}

void FullBeliefRegisters::unpack(std::uint64_t basis, int& s, int& sp,
                                 int& o) const {
  s = static_cast<int>(basis & ((1ull << n_state) - 1));
  sp = static_cast<int>((basis >> n_state) & ((1ull << n_state) - 1));
  o = static_cast<int>((basis >> (2 * n_state)) & ((1ull << n_obs) - 1));
}

namespace {

Eigen::VectorXd padded(const Eigen::VectorXd& v, Eigen::Index size) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
  out.head(v.size()) = v;
  return out;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

FullBeliefCircuit build_full_belief_circuit(const PomdpModel& m,
                                            const Belief& b, int action,
                                            bool allow_padding,
                                            int reward_bits) {
  if (action < 0 || action >= m.n_actions)
    throw std::invalid_argument("action out of range");
  if (b.size() != m.n_states)
    throw std::invalid_argument("belief length mismatch");
  if (!allow_padding && (!power_of_two(m.n_states) || !power_of_two(m.n_obs)))
    throw std::invalid_argument(
        "state/observation counts must be powers of two unless padding "
        "is enabled");

  FullBeliefCircuit out;
  out.regs.n_state = std::max(1, bits_for(m.n_states));
  out.regs.n_obs = std::max(1, bits_for(m.n_obs));
  out.regs.n_reward = reward_bits;
  Circuit c(out.regs.total());

  const Eigen::Index s_dim = 1ll << out.regs.n_state;
  const Eigen::Index o_dim = 1ll << out.regs.n_obs;
  const auto& T = m.T[static_cast<std::size_t>(action)];
  const auto& O = m.O[static_cast<std::size_t>(action)];

  // belief load, then the transition and observation encoders
  append_amplitude_loader(c, out.regs.state_qubits(), padded(b, s_dim));
  append_controlled_loader(c, out.regs.state_qubits(),
                           out.regs.next_state_qubits(),
                           [&](std::uint64_t s) -> Eigen::VectorXd {
                             if (s >= static_cast<std::uint64_t>(m.n_states))
                               return Eigen::VectorXd::Unit(s_dim, 0);
                             return padded(T.row(static_cast<int>(s)), s_dim);
                           });
  append_controlled_loader(c, out.regs.next_state_qubits(),
                           out.regs.obs_qubits(),
                           [&](std::uint64_t sp) -> Eigen::VectorXd {
                             if (sp >= static_cast<std::uint64_t>(m.n_states))
                               return Eigen::VectorXd::Unit(o_dim, 0);
                             return padded(O.row(static_cast<int>(sp)), o_dim);
                           });

  // reward tag: basis-state encoding of R(s,a) quantized to reward_bits
  if (reward_bits > 0) {
    const double r_min = m.R.minCoeff();
    const double r_max = m.R.maxCoeff();
    const double span = std::max(r_max - r_min, 1e-12);
    const std::uint64_t levels = (1ull << reward_bits) - 1;
    const auto reward_qs = out.regs.reward_qubits();
    for (int s = 0; s < m.n_states; ++s) {
      const double r = m.R(s, action);
      const auto level = static_cast<std::uint64_t>(
          std::llround((r - r_min) / span * static_cast<double>(levels)));
      for (int bit = 0; bit < reward_bits; ++bit) {
        if (!((level >> bit) & 1ull)) continue;
        c.append(gate::cry(reward_qs[static_cast<std::size_t>(bit)],
                           out.regs.state_qubits(),
                           static_cast<std::uint64_t>(s), M_PI));
      }
    }
  }

  out.circuit = std::move(c);
  return out;
}

Circuit build_direct_encoding_circuit(const Belief& prior,
                                      const Eigen::MatrixXd& obs_given_state) {
  const int n_states = static_cast<int>(prior.size());
  if (!power_of_two(n_states))
    throw std::invalid_argument("direct encoding needs a power-of-two |S|");
  if (obs_given_state.rows() != n_states || obs_given_state.cols() != 2)
    throw std::invalid_argument("expected an |S| x 2 observation table");
  const int n_state_bits = bits_for(n_states);
  Circuit c(n_state_bits + 1);
  std::vector<int> state_qs(static_cast<std::size_t>(n_state_bits));
  for (int i = 0; i < n_state_bits; ++i) state_qs[static_cast<std::size_t>(i)] = i;
  const int obs_q = n_state_bits;

  append_amplitude_loader(c, state_qs, prior);
  if (n_state_bits == 1) {
    // one conditional Ry per state
    c.append(gate::cry(obs_q, state_qs, 0,
                       split_angle(obs_given_state(0, 0), obs_given_state(0, 1))));
    c.append(gate::cry(obs_q, state_qs, 1,
                       split_angle(obs_given_state(1, 0), obs_given_state(1, 1))));
  } else {
    std::vector<double> angles(static_cast<std::size_t>(n_states));
    for (int s = 0; s < n_states; ++s)
      angles[static_cast<std::size_t>(s)] =
          split_angle(obs_given_state(s, 0), obs_given_state(s, 1));
    c.append(gate::ucry(obs_q, state_qs, std::move(angles)));
  }
  return c;
}

Circuit build_minimal_tiger_circuit(const Belief& b) {
  if (b.size() != 2)
    throw std::invalid_argument("minimal Tiger circuit needs |S| = 2");
  Eigen::MatrixXd sensor(2, 2);
  sensor << 0.85, 0.15, 0.15, 0.85;
  return build_direct_encoding_circuit(b, sensor);
}

Circuit build_corridor4_circuit(const Belief& prior) {
  if (prior.size() != 4)
    throw std::invalid_argument("corridor circuit needs |S| = 4");
  Eigen::MatrixXd sensor(4, 2);
  sensor << 0.85, 0.15,
      0.70, 0.30,
      0.30, 0.70,
      0.15, 0.85;
  return build_direct_encoding_circuit(prior, sensor);
}

std::pair<Belief, double> direct_encoding_posterior(const Circuit& c,
                                                    int n_state_bits,
                                                    int n_states, int obs) {
  StateVectord st = run(c);
  auto [selected, p] = post_select(st, n_state_bits, obs);
  std::vector<int> state_qs(static_cast<std::size_t>(n_state_bits));
  for (int i = 0; i < n_state_bits; ++i) state_qs[static_cast<std::size_t>(i)] = i;
  const Eigen::VectorXd marg = marginal_probabilities(selected, state_qs);
  return {marg.head(n_states), p};
}

BeliefUpdate quantum_belief_update(const PomdpModel& m, const Belief& b,
                                   int action, int obs) {
  if (m.n_states != 2 && m.n_states != 4)
    throw std::invalid_argument(
        "quantum belief update supports |S| in {2, 4}");
  const Belief predicted = m.predict(b, action);
  const Circuit c = build_direct_encoding_circuit(
      predicted, m.O[static_cast<std::size_t>(action)]);
  auto [posterior, evidence] =
      direct_encoding_posterior(c, bits_for(m.n_states), m.n_states, obs);
  return {posterior, evidence};
}

}  // namespace qauto
