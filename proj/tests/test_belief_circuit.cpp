#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qauto/belief_circuit.hpp"
#include "qauto/grover.hpp"
#include "qauto/pomdp.hpp"
#include "test_util.hpp"

using namespace qauto;

TEST_CASE("register accounting matches the resource table") {
  const auto tiger = BeliefCircuitLayout::for_model(2, 3, 2);
  CHECK(tiger.state_bits == 1);
  CHECK(tiger.action_bits == 2);
  CHECK(tiger.amplitude_bits == 4);
  CHECK(tiger.compute_ancillae == 3);
  CHECK(tiger.total_qubits() == 13);

  const auto grid4 = BeliefCircuitLayout::for_model(16, 5, 16);
  CHECK(grid4.state_bits == 4);
  CHECK(grid4.amplitude_bits == 6);
  CHECK(grid4.compute_ancillae == 6);
  CHECK(grid4.total_qubits() == 28);

  const auto grid8 = BeliefCircuitLayout::for_model(64, 5, 64);
  CHECK(grid8.total_qubits() == 40);
}

TEST_CASE("amplitude loader prepares sqrt(p) amplitudes") {
  Rng rng = make_rng(4);
  for (int rep = 0; rep < 25; ++rep) {
    const Eigen::VectorXd probs = test_util::random_simplex(8, rng);
    Circuit c(3);
    append_amplitude_loader(c, {0, 1, 2}, probs);
    const StateVectord st = run(c);
    for (int v = 0; v < 8; ++v) {
      CHECK(st.probability(static_cast<std::uint64_t>(v)) ==
            doctest::Approx(probs[v]).epsilon(1e-10));
      CHECK(st.amps[v].imag() == doctest::Approx(0.0));
      CHECK(st.amps[v].real() >= -1e-12);
    }
  }
}

TEST_CASE("full belief circuit carries the joint amplitude law") {
  const PomdpModel m = tiger2();
  Rng rng = make_rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    const Belief b = test_util::random_simplex(2, rng);
    for (int a = 0; a < m.n_actions; ++a) {
      const FullBeliefCircuit fc = build_full_belief_circuit(m, b, a);
      const StateVectord st = run(fc.circuit);
      Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(4, 2);  // (s, s') x o
      for (std::int64_t x = 0; x < st.dim(); ++x) {
        int s, sp, o;
        fc.regs.unpack(static_cast<std::uint64_t>(x), s, sp, o);
        seen(s * 2 + sp, o) += st.probability(static_cast<std::uint64_t>(x));
      }
      for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp)
          for (int o = 0; o < 2; ++o) {
            const double expected = b[s] *
                                    m.T[static_cast<std::size_t>(a)](s, sp) *
                                    m.O[static_cast<std::size_t>(a)](sp, o);
            CHECK(seen(s * 2 + sp, o) == doctest::Approx(expected).epsilon(1e-9));
          }
    }
  }
}

TEST_CASE("full circuit: uniform prior gives even observation odds") {
  const PomdpModel m = tiger2();
  const FullBeliefCircuit fc =
      build_full_belief_circuit(m, m.uniform_belief(), 0);
  const StateVectord st = run(fc.circuit);
  const Eigen::VectorXd obs_marginal =
      marginal_probabilities(st, fc.regs.obs_qubits());
  CHECK(obs_marginal[0] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("full circuit: rare-evidence observation probability") {
  const PomdpModel m = tiger2();
  Belief b(2);
  b << 0.97, 0.03;
  const FullBeliefCircuit fc = build_full_belief_circuit(m, b, 0);
  const StateVectord st = run(fc.circuit);
  const Eigen::VectorXd obs_marginal =
      marginal_probabilities(st, fc.regs.obs_qubits());
  CHECK(obs_marginal[1] == doctest::Approx(0.171).epsilon(1e-10));
}

TEST_CASE("full circuit post-selection equals exact Bayes") {
  Rng rng = make_rng(13);
  // both tiger models, random beliefs, all actions and observations
  for (const PomdpModel& m : {tiger2(), tiger4()}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Belief b = test_util::random_simplex(m.n_states, rng);
      for (int a = 0; a < m.n_actions; ++a) {
        const FullBeliefCircuit fc = build_full_belief_circuit(m, b, a);
        const StateVectord st = run(fc.circuit);
        for (int o = 0; o < m.n_obs; ++o) {
          const double pe = evidence_probability(m, b, a, o);
          if (pe < 1e-9) continue;
          auto [collapsed, p] = post_select(st, fc.regs.obs_qubits()[0], o);
          const Eigen::VectorXd marg =
              marginal_probabilities(collapsed, fc.regs.next_state_qubits());
          const BeliefUpdate exact = belief_update(m, b, a, o);
          CHECK(p == doctest::Approx(pe).epsilon(1e-9));
          CHECK((marg.head(m.n_states) - exact.posterior).cwiseAbs().maxCoeff() <
                1e-9);
        }
      }
    }
  }
}

TEST_CASE("padding states stay unpopulated for non-power-of-two models") {
  // 3-state chain model padded to 4 basis states
  PomdpModel m;
  m.n_states = 3;
  m.n_actions = 1;
  m.n_obs = 2;
  m.gamma = 0.9;
  Eigen::MatrixXd t(3, 3);
  t << 0.6, 0.4, 0.0,
      0.1, 0.8, 0.1,
      0.0, 0.3, 0.7;
  Eigen::MatrixXd o(3, 2);
  o << 0.9, 0.1,
      0.4, 0.6,
      0.2, 0.8;
  m.T = {t};
  m.O = {o};
  m.R = Eigen::MatrixXd::Zero(3, 1);
  m.state_names = {"a", "b", "c"};
  m.action_names = {"go"};
  m.obs_names = {"lo", "hi"};
  m.validate();

  CHECK_THROWS_AS(build_full_belief_circuit(m, m.uniform_belief(), 0, false),
                  std::invalid_argument);

  const FullBeliefCircuit fc =
      build_full_belief_circuit(m, m.uniform_belief(), 0, true);
  const StateVectord st = run(fc.circuit);
  double padding_mass = 0;
  for (std::int64_t x = 0; x < st.dim(); ++x) {
    int s, sp, o;
    fc.regs.unpack(static_cast<std::uint64_t>(x), s, sp, o);
    if (s == 3 || sp == 3) padding_mass += st.probability(static_cast<std::uint64_t>(x));
  }
  CHECK(padding_mass == doctest::Approx(0.0));

  // and the padded joint still reproduces Bayes
  auto [collapsed, p] = post_select(st, fc.regs.obs_qubits()[0], 1);
  const BeliefUpdate exact = belief_update(m, m.uniform_belief(), 0, 1);
  const Eigen::VectorXd marg =
      marginal_probabilities(collapsed, fc.regs.next_state_qubits());
  CHECK(p == doctest::Approx(exact.evidence).epsilon(1e-9));
  CHECK((marg.head(3) - exact.posterior).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("minimal tiger circuit") {
  SUBCASE("uniform prior, hear-left") {
    const Circuit c = build_minimal_tiger_circuit(Eigen::Vector2d(0.5, 0.5));
    auto [posterior, p] = direct_encoding_posterior(c, 1, 2, 0);
    CHECK(p == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(posterior[0] == doctest::Approx(0.85).epsilon(1e-9));
  }
  SUBCASE("rare branch keeps the exact posterior") {
    const Circuit c = build_minimal_tiger_circuit(Eigen::Vector2d(0.97, 0.03));
    auto [posterior, p] = direct_encoding_posterior(c, 1, 2, 1);
    CHECK(p == doctest::Approx(0.171).epsilon(1e-9));
    CHECK(posterior[0] == doctest::Approx(0.8509).epsilon(1e-3));
    CHECK(posterior[1] == doctest::Approx(0.1491).epsilon(1e-3));
  }
  SUBCASE("degenerate prior") {
    const Circuit c = build_minimal_tiger_circuit(Eigen::Vector2d(1.0, 0.0));
    auto [posterior, p] = direct_encoding_posterior(c, 1, 2, 0);
    CHECK(p == doctest::Approx(0.85).epsilon(1e-9));
    CHECK(posterior[0] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("corridor circuit reproduces the 4-state posteriors") {
  const Belief uniform = Eigen::Vector4d::Constant(0.25);
  SUBCASE("hear-left") {
    auto [posterior, p] =
        direct_encoding_posterior(build_corridor4_circuit(uniform), 2, 4, 0);
    const Eigen::Vector4d expected(0.425, 0.350, 0.150, 0.075);
    CHECK(p == doctest::Approx(0.5).epsilon(1e-9));
    CHECK((posterior - expected).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("hear-right") {
    auto [posterior, p] =
        direct_encoding_posterior(build_corridor4_circuit(uniform), 2, 4, 1);
    const Eigen::Vector4d expected(0.075, 0.150, 0.350, 0.425);
    CHECK((posterior - expected).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("point prior passes through") {
    Eigen::Vector4d point(1.0, 0.0, 0.0, 0.0);
    auto [posterior, p] =
        direct_encoding_posterior(build_corridor4_circuit(point), 2, 4, 0);
    CHECK(p == doctest::Approx(0.85).epsilon(1e-9));
    CHECK(posterior[0] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("optimal iteration count") {
  CHECK(optimal_iterations(0.171) == 1);
  CHECK(optimal_iterations(0.25) == 1);
  CHECK(optimal_iterations(0.9) == 0);
  CHECK(optimal_iterations(0.05) == 2);
  CHECK(optimal_iterations(0.05, IterationRule::sqrt_bound) == 3);
  CHECK_THROWS_AS(optimal_iterations(0.0), std::invalid_argument);
  CHECK_THROWS_AS(optimal_iterations(1.0), std::invalid_argument);
}

TEST_CASE("grover sine law on the tiger oracle") {
  Belief b(2);
  b << 0.97, 0.03;
  GroverSetup setup{build_minimal_tiger_circuit(b), {1}, 1};
  const double a = marked_probability(setup, run(setup.prep));
  CHECK(a == doctest::Approx(0.171).epsilon(1e-12));
  for (int k = 0; k <= 5; ++k) {
    const StateVectord st = grover_amplify(setup, k);
    CHECK(marked_probability(setup, st) ==
          doctest::Approx(amplified_probability(a, k)).epsilon(1e-9));
  }
  // the k=1 hardware-demo point: 0.171 -> 0.9171, factor 5.36
  const double boosted = marked_probability(setup, grover_amplify(setup, 1));
  CHECK(boosted == doctest::Approx(0.9171).epsilon(2e-4));
  CHECK(boosted / a == doctest::Approx(5.36).epsilon(1e-3));
}

TEST_CASE("oracle and diffuser reflections are involutions") {
  Belief b(2);
  b << 0.7, 0.3;
  GroverSetup setup{build_minimal_tiger_circuit(b), {1}, 1};
  const Eigen::MatrixXcd se = dense_unitary(setup.oracle(), 2);
  const Eigen::MatrixXcd s0 = dense_unitary(setup.zero_reflection(), 2);
  CHECK((se * se - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK((s0 * s0 - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("posterior preservation under amplification") {
  const PomdpModel m2 = tiger2();
  Rng rng = make_rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const Belief b = test_util::random_simplex(2, rng);
    for (int o = 0; o < 2; ++o) {
      const BeliefUpdate exact = belief_update(m2, b, 0, o);
      for (int k = 0; k <= 3; ++k) {
        const AmplifiedPosterior ap = amplified_posterior(b, o, k);
        CHECK((ap.posterior - exact.posterior).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(ap.branch_probability ==
              doctest::Approx(amplified_probability(exact.evidence, k))
                  .epsilon(1e-9));
      }
    }
  }
  // 4-state corridor spot checks
  const PomdpModel m4 = tiger4();
  for (int rep = 0; rep < 20; ++rep) {
    const Belief b = test_util::random_simplex(4, rng);
    for (int o = 0; o < 2; ++o) {
      const BeliefUpdate exact = belief_update(m4, b, 0, o);
      for (int k = 0; k <= 2; ++k) {
        const AmplifiedPosterior ap = amplified_posterior(b, o, k);
        CHECK((ap.posterior - exact.posterior).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }
}

TEST_CASE("perfect rotation reaches unit branch probability") {
  // a = 0.25: theta = pi/6, so k = 1 gives sin^2(pi/2) = 1 exactly
  Belief b(2);
  // pick the prior whose hear-right evidence is 0.25: 0.85 - 0.7 b0 = 0.25
  b << 6.0 / 7.0, 1.0 / 7.0;
  const PomdpModel m = tiger2();
  const double pe = evidence_probability(m, b, 0, 1);
  REQUIRE(pe == doctest::Approx(0.25).epsilon(1e-12));
  const AmplifiedPosterior ap = amplified_posterior(b, 1, 1);
  CHECK(ap.branch_probability == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sine-law sweep is maximal at the k* prediction") {
  const double a = 0.05;
  double best = -1;
  int best_k = -1;
  for (int k = 0; k <= 5; ++k) {
    const double p = amplified_probability(a, k);
    if (p > best) {
      best = p;
      best_k = k;
    }
  }
  CHECK(best_k == 3);
  CHECK(best == doctest::Approx(std::pow(std::sin(7 * std::asin(std::sqrt(0.05))), 2))
                    .epsilon(1e-12));
  CHECK(best > 0.9999);
  // the k* rules bracket the sweep's argmax
  CHECK(std::abs(best_k - optimal_iterations(a)) <= 1);
  CHECK(std::abs(best_k - optimal_iterations(a, IterationRule::sqrt_bound)) <= 1);
}

TEST_CASE("quantum belief update provider equals Bayes on both tiger models") {
  Rng rng = make_rng(77);
  for (const PomdpModel& m : {tiger2(), tiger4()}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Belief b = test_util::random_simplex(m.n_states, rng);
      for (int a = 0; a < m.n_actions; ++a) {
        for (int o = 0; o < m.n_obs; ++o) {
          const BeliefUpdate exact = belief_update(m, b, a, o);
          const BeliefUpdate q = quantum_belief_update(m, b, a, o);
          CHECK((q.posterior - exact.posterior).cwiseAbs().maxCoeff() < 1e-9);
          CHECK(q.evidence == doctest::Approx(exact.evidence).epsilon(1e-9));
        }
      }
    }
  }
}
