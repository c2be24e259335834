#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qauto {

/// Shot histogram keyed by basis-state index (qubit 0 is the least
/// significant bit of the index).
using Histogram = std::map<std::uint64_t, std::int64_t>;

inline std::string to_bitstring(std::uint64_t x, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((x >> q) & 1ull) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  return s;
}

inline std::uint64_t from_bitstring(const std::string& s) {
  std::uint64_t x = 0;
  const int n = static_cast<int>(s.size());
  for (int i = 0; i < n; ++i)
    if (s[static_cast<std::size_t>(i)] == '1') x |= 1ull << (n - 1 - i);
  return x;
}

/// Dense n-qubit statevector. Qubit 0 is the least significant bit of the
/// basis-state index; rendered bitstrings put the most significant qubit
/// first.
template <typename Scalar = double>
struct StateVector {
  using Complex = std::complex<Scalar>;
  using Vector = Eigen::Vector<Complex, Eigen::Dynamic>;

  int n_qubits = 0;
  Vector amps;

  StateVector() = default;

  explicit StateVector(int n) : n_qubits(n), amps(Vector::Zero(1ll << n)) {
    amps[0] = Complex(1);
  }

  std::int64_t dim() const { return amps.size(); }

  Scalar norm_sq() const { return amps.squaredNorm(); }

  Scalar probability(std::uint64_t basis) const {
    return std::norm(amps[static_cast<std::int64_t>(basis)]);
  }

  Eigen::Vector<Scalar, Eigen::Dynamic> probabilities() const {
    return amps.cwiseAbs2();
  }
};

using StateVectord = StateVector<double>;

enum class GateKind {
  H,
  X,
  Z,
  CZ,
  Rx,
  Ry,
  Rz,
  Rzz,
  CRy,        // Ry on target, conditioned on a control set matching a pattern
  UCRy,       // uniformly controlled Ry: one angle per control assignment
  PhaseFlip,  // -1 phase on basis states whose listed qubits match a pattern
};

struct Gate {
  GateKind kind;
  std::vector<int> targets;
  std::vector<int> controls;
  std::uint64_t control_pattern = 0;
  std::vector<double> angles;

  std::vector<int> touched() const {
    std::vector<int> qs = targets;
    qs.insert(qs.end(), controls.begin(), controls.end());
    return qs;
  }
};

namespace detail {

inline void require_distinct(const std::vector<int>& qs) {
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i + 1; j < qs.size(); ++j)
      if (qs[i] == qs[j])
        throw std::invalid_argument("duplicate qubit index in gate");
}

}  // namespace detail

namespace gate {

inline Gate h(int q) { return Gate{GateKind::H, {q}, {}, 0, {}}; }
inline Gate x(int q) { return Gate{GateKind::X, {q}, {}, 0, {}}; }
inline Gate z(int q) { return Gate{GateKind::Z, {q}, {}, 0, {}}; }

inline Gate cz(int a, int b) {
  Gate g{GateKind::CZ, {a, b}, {}, 0, {}};
  detail::require_distinct(g.targets);
  return g;
}

inline Gate rx(int q, double theta) {
  return Gate{GateKind::Rx, {q}, {}, 0, {theta}};
}
inline Gate ry(int q, double theta) {
  return Gate{GateKind::Ry, {q}, {}, 0, {theta}};
}
inline Gate rz(int q, double theta) {
  return Gate{GateKind::Rz, {q}, {}, 0, {theta}};
}

inline Gate rzz(int a, int b, double theta) {
  Gate g{GateKind::Rzz, {a, b}, {}, 0, {theta}};
  detail::require_distinct(g.targets);
  return g;
}

inline Gate cry(int target, std::vector<int> controls,
                std::uint64_t control_pattern, double theta) {
  Gate g{GateKind::CRy, {target}, std::move(controls), control_pattern,
         {theta}};
  detail::require_distinct(g.touched());
  return g;
}

/// Uniformly controlled Ry over `controls`: angles[v] is applied to the
/// target when the control register reads v (controls[k] is bit k of v).
inline Gate ucry(int target, std::vector<int> controls,
                 std::vector<double> angles) {
  if (angles.size() != (1ull << controls.size()))
    throw std::invalid_argument("ucry needs exactly 2^c angles");
  Gate g{GateKind::UCRy, {target}, std::move(controls), 0, std::move(angles)};
  detail::require_distinct(g.touched());
  return g;
}

inline Gate phase_flip(std::vector<int> qubits, std::uint64_t pattern) {
  Gate g{GateKind::PhaseFlip, std::move(qubits), {}, pattern, {}};
  detail::require_distinct(g.targets);
  return g;
}

}  // namespace gate

inline Gate inverse(const Gate& g) {
  Gate inv = g;
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::CZ:
    case GateKind::PhaseFlip:
      break;
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
    case GateKind::Rzz:
    case GateKind::CRy:
    case GateKind::UCRy:
      for (double& a : inv.angles) a = -a;
      break;
  }
  return inv;
}

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  Circuit& append(Gate g) {
    for (int q : g.touched())
      if (q < 0 || q >= n_qubits)
        throw std::invalid_argument("gate qubit index out of range");
    gates.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.n_qubits > n_qubits)
      throw std::invalid_argument("appended circuit is wider");
    for (const Gate& g : other.gates) gates.push_back(g);
    return *this;
  }
};

inline Circuit inverse(const Circuit& c) {
  Circuit inv(c.n_qubits);
  inv.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
    inv.gates.push_back(inverse(*it));
  return inv;
}

namespace detail {

template <typename Scalar>
void apply_1q(StateVector<Scalar>& st, int q,
              const Eigen::Matrix2<std::complex<Scalar>>& u) {
  const std::int64_t step = 1ll << q;
  const std::int64_t dim = st.dim();
  for (std::int64_t base = 0; base < dim; base += 2 * step) {
    for (std::int64_t i = base; i < base + step; ++i) {
      const auto a0 = st.amps[i];
      const auto a1 = st.amps[i + step];
      st.amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
      st.amps[i + step] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

template <typename Scalar>
Eigen::Matrix2<std::complex<Scalar>> ry_matrix(Scalar theta) {
  Eigen::Matrix2<std::complex<Scalar>> u;
  const Scalar c = std::cos(theta / 2), s = std::sin(theta / 2);
  u << c, -s, s, c;
  return u;
}

inline bool controls_match(std::uint64_t x, const std::vector<int>& controls,
                           std::uint64_t pattern) {
  for (std::size_t k = 0; k < controls.size(); ++k) {
    if (((x >> controls[k]) & 1ull) != ((pattern >> k) & 1ull)) return false;
  }
  return true;
}

inline std::uint64_t control_value(std::uint64_t x,
                                   const std::vector<int>& controls) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < controls.size(); ++k)
    v |= ((x >> controls[k]) & 1ull) << k;
  return v;
}

}  // namespace detail

template <typename Scalar>
void apply(StateVector<Scalar>& st, const Gate& g) {
  using Complex = std::complex<Scalar>;
  using Mat2 = Eigen::Matrix2<Complex>;
  for (int q : g.touched())
    if (q < 0 || q >= st.n_qubits)
      throw std::invalid_argument("gate qubit index out of range");
  detail::require_distinct(g.touched());

  const std::int64_t dim = st.dim();
  switch (g.kind) {
    case GateKind::H: {
      Mat2 u;
      const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
      u << r, r, r, -r;
      detail::apply_1q(st, g.targets[0], u);
      break;
    }
    case GateKind::X: {
      Mat2 u;
      u << Complex(0), Complex(1), Complex(1), Complex(0);
      detail::apply_1q(st, g.targets[0], u);
      break;
    }
    case GateKind::Z: {
      const std::int64_t bit = 1ll << g.targets[0];
      for (std::int64_t i = 0; i < dim; ++i)
        if (i & bit) st.amps[i] = -st.amps[i];
      break;
    }
    case GateKind::CZ: {
      const std::int64_t m = (1ll << g.targets[0]) | (1ll << g.targets[1]);
      for (std::int64_t i = 0; i < dim; ++i)
        if ((i & m) == m) st.amps[i] = -st.amps[i];
      break;
    }
    case GateKind::Rx: {
      const Scalar t = static_cast<Scalar>(g.angles[0]);
      Mat2 u;
      const Scalar c = std::cos(t / 2), s = std::sin(t / 2);
      u << Complex(c), Complex(0, -s), Complex(0, -s), Complex(c);
      detail::apply_1q(st, g.targets[0], u);
      break;
    }
    case GateKind::Ry:
      detail::apply_1q(st, g.targets[0],
                       detail::ry_matrix(static_cast<Scalar>(g.angles[0])));
      break;
    case GateKind::Rz: {
      const Scalar t = static_cast<Scalar>(g.angles[0]);
      const Complex e0 = std::polar(Scalar(1), -t / 2);
      const Complex e1 = std::polar(Scalar(1), t / 2);
      const std::int64_t bit = 1ll << g.targets[0];
      for (std::int64_t i = 0; i < dim; ++i)
        st.amps[i] *= (i & bit) ? e1 : e0;
      break;
    }
    case GateKind::Rzz: {
      const Scalar t = static_cast<Scalar>(g.angles[0]);
      const Complex even = std::polar(Scalar(1), -t / 2);
      const Complex odd = std::polar(Scalar(1), t / 2);
      const std::int64_t b0 = 1ll << g.targets[0], b1 = 1ll << g.targets[1];
      for (std::int64_t i = 0; i < dim; ++i) {
        const bool parity = (bool(i & b0) != bool(i & b1));
        st.amps[i] *= parity ? odd : even;
      }
      break;
    }
    case GateKind::CRy: {
      const auto u = detail::ry_matrix(static_cast<Scalar>(g.angles[0]));
      const std::int64_t step = 1ll << g.targets[0];
      for (std::int64_t i = 0; i < dim; ++i) {
        if (i & step) continue;
        if (!detail::controls_match(static_cast<std::uint64_t>(i), g.controls,
                                    g.control_pattern))
          continue;
        const auto a0 = st.amps[i];
        const auto a1 = st.amps[i + step];
        st.amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
        st.amps[i + step] = u(1, 0) * a0 + u(1, 1) * a1;
      }
      break;
    }
    case GateKind::UCRy: {
      const std::int64_t step = 1ll << g.targets[0];
      for (std::int64_t i = 0; i < dim; ++i) {
        if (i & step) continue;
        const std::uint64_t v =
            detail::control_value(static_cast<std::uint64_t>(i), g.controls);
        const auto u = detail::ry_matrix(static_cast<Scalar>(g.angles[v]));
        const auto a0 = st.amps[i];
        const auto a1 = st.amps[i + step];
        st.amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
        st.amps[i + step] = u(1, 0) * a0 + u(1, 1) * a1;
      }
      break;
    }
    case GateKind::PhaseFlip: {
      for (std::int64_t i = 0; i < dim; ++i)
        if (detail::controls_match(static_cast<std::uint64_t>(i), g.targets,
                                   g.control_pattern))
          st.amps[i] = -st.amps[i];
      break;
    }
  }
}

template <typename Scalar>
void apply(StateVector<Scalar>& st, const Circuit& c) {
  if (c.n_qubits != st.n_qubits)
    throw std::invalid_argument("circuit/state width mismatch");
  for (const Gate& g : c.gates) apply(st, g);
}

template <typename Scalar = double>
StateVector<Scalar> run(const Circuit& c) {
  StateVector<Scalar> st(c.n_qubits);
  apply(st, c);
  return st;
}

/// Builds the dense unitary of a circuit by applying it to each basis state.
/// Intended for small registers (verification, oracles, diffuser checks).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
dense_unitary(const Circuit& c) {
  const std::int64_t dim = 1ll << c.n_qubits;
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> u(dim,
                                                                        dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    StateVector<Scalar> st(c.n_qubits);
    st.amps.setZero();
    st.amps[col] = std::complex<Scalar>(1);
    apply(st, c);
    u.col(col) = st.amps;
  }
  return u;
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>
dense_unitary(const Gate& g, int n_qubits) {
  Circuit c(n_qubits);
  c.append(g);
  return dense_unitary<Scalar>(c);
}

}  // namespace qauto
