#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qauto/measure.hpp"
#include "qauto/noise.hpp"
#include "qauto/statevector.hpp"
#include "test_util.hpp"

using namespace qauto;

TEST_CASE("hadamard on |0> gives the uniform superposition") {
  StateVectord st(1);
  apply(st, gate::h(0));
  CHECK(st.probability(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(st.probability(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Ry loads the rare-evidence amplitude") {
  StateVectord st(1);
  apply(st, gate::ry(0, 2.0 * std::asin(std::sqrt(0.171))));
  CHECK(st.probability(1) == doctest::Approx(0.171).epsilon(1e-12));
}

TEST_CASE("uniformly controlled Ry matches the dense block-diagonal build") {
  const double theta0 = 0.734, theta1 = -1.21;
  Circuit c(2);
  c.append(gate::h(0));
  c.append(gate::ucry(1, {0}, {theta0, theta1}));
  const StateVectord st = run(c);

  // dense oracle: block-diag(Ry(theta0), Ry(theta1)) acting on (|+>esp |0>)
  auto ry = [](double t) {
    Eigen::Matrix2cd m;
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
  };
  // basis order (q1 q0): |00>, |01>, |10>, |11>; control is q0, target q1
  Eigen::Vector4cd in;
  in << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 0;
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  const auto r0 = ry(theta0), r1 = ry(theta1);
  // control q0=0 applies Ry(theta0) on q1: entries (q1,q1') at q0=0
  u(0, 0) = r0(0, 0); u(0 + 2, 0) = r0(1, 0);
  u(0, 0 + 2) = r0(0, 1); u(2, 2) = r0(1, 1);
  u(1, 1) = r1(0, 0); u(3, 1) = r1(1, 0);
  u(1, 3) = r1(0, 1); u(3, 3) = r1(1, 1);
  const Eigen::Vector4cd expected = u * in;
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(st.amps[i] - expected[i]) < 1e-12);
}

TEST_CASE("gate matrices are unitary for random angles") {
  Rng rng = make_rng(11);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int rep = 0; rep < 20; ++rep) {
    const double t = angle(rng);
    for (const Gate& g :
         {gate::h(0), gate::x(1), gate::z(0), gate::cz(0, 2),
          gate::rx(1, t), gate::ry(2, t), gate::rz(0, t), gate::rzz(0, 1, t),
          gate::cry(2, {0, 1}, 2, t),
          gate::ucry(0, {1, 2}, {t, -t, 0.5 * t, 2 * t}),
          gate::phase_flip({0, 2}, 1)}) {
      CHECK(test_util::max_unitary_deviation(dense_unitary(g, 3)) < 1e-10);
    }
  }
}

TEST_CASE("circuit inversion restores random states") {
  Rng rng = make_rng(12);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int rep = 0; rep < 100; ++rep) {
    Circuit c(3);
    c.append(gate::h(0));
    c.append(gate::ry(1, angle(rng)));
    c.append(gate::ucry(2, {0, 1}, {angle(rng), angle(rng), angle(rng), angle(rng)}));
    c.append(gate::cz(0, 2));
    c.append(gate::rzz(1, 2, angle(rng)));
    c.append(gate::rx(0, angle(rng)));
    c.append(gate::rz(2, angle(rng)));
    c.append(gate::phase_flip({0, 1, 2}, 0));

    StateVectord st = test_util::random_state(3, rng);
    const StateVectord original = st;
    apply(st, c);
    CHECK(st.norm_sq() == doctest::Approx(1.0).epsilon(1e-9));
    apply(st, inverse(c));
    CHECK((st.amps - original.amps).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("gate validation rejects bad indices") {
  StateVectord st(2);
  CHECK_THROWS_AS(apply(st, gate::ry(2, 0.5)), std::invalid_argument);
  CHECK_THROWS_AS(gate::cz(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gate::cry(0, {0}, 0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(gate::ucry(0, {1}, {0.1}), std::invalid_argument);
  Circuit c(1);
  CHECK_THROWS_AS(c.append(gate::h(1)), std::invalid_argument);
}

TEST_CASE("sample_counts is a seeded multinomial over |amps|^2") {
  StateVectord st(1);
  apply(st, gate::h(0));

  SUBCASE("law of large numbers at 1e6 shots") {
    Rng rng = make_rng(42);
    const Histogram hist = sample_counts(st, 1000000, rng);
    const double p1 = static_cast<double>(hist.at(1)) / 1e6;
    CHECK(std::abs(p1 - 0.5) < 0.002);  // 4 sigma
  }

  SUBCASE("basis states sample deterministically") {
    StateVectord basis(2);
    apply(basis, gate::x(0));  // |01> rendered msb-first
    Rng rng = make_rng(1);
    const Histogram hist = sample_counts(basis, 256, rng);
    CHECK(hist.size() == 1);
    CHECK(hist.at(1) == 256);
    CHECK(to_bitstring(1, 2) == "01");
  }

  SUBCASE("rare amplitude frequency within binomial 4 sigma") {
    StateVectord rare(1);
    apply(rare, gate::ry(0, 2.0 * std::asin(std::sqrt(0.171))));
    Rng rng = make_rng(42);
    const Histogram hist = sample_counts(rare, 8192, rng);
    const double f = static_cast<double>(hist.at(1)) / 8192.0;
    CHECK(std::abs(f - 0.171) < 0.017);  // 4 sqrt(p(1-p)/n)
  }

  SUBCASE("identical seeds reproduce identical histograms") {
    Rng a = make_rng(7), b = make_rng(7);
    CHECK(sample_counts(st, 5000, a) == sample_counts(st, 5000, b));
  }

  SUBCASE("zero shots rejected") {
    Rng rng = make_rng(0);
    CHECK_THROWS_AS(sample_counts(st, 0, rng), std::invalid_argument);
  }
}

TEST_CASE("post_select") {
  SUBCASE("Bell state collapses to |00> with probability 1/2") {
    Circuit bell(2);
    bell.append(gate::h(0));
    bell.append(gate::h(1));
    bell.append(gate::cz(0, 1));
    bell.append(gate::h(1));
    const StateVectord st = run(bell);
    const auto [collapsed, p] = post_select(st, 0, 0);
    CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(collapsed.probability(0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("zero-probability branch throws") {
    Rng rng = make_rng(3);
    StateVectord st(2);
    // q0 fixed to |0>, q1 arbitrary
    apply(st, gate::ry(1, 1.234));
    CHECK_THROWS_AS(post_select(st, 0, 1), zero_probability_error);
  }
}

TEST_CASE("noise model validation and trajectories") {
  SUBCASE("probabilities outside [0,1] rejected") {
    Rng rng = make_rng(0);
    Circuit c(1);
    c.append(gate::h(0));
    CHECK_THROWS_AS(run_noisy(c, NoiseModel{-0.1, 0.0}, 10, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_noisy(c, NoiseModel{0.0, 1.5}, 10, rng),
                    std::invalid_argument);
  }

  SUBCASE("noiseless trajectories equal ideal sampling for the same stream") {
    Circuit bell(2);
    bell.append(gate::h(0));
    bell.append(gate::h(1));
    bell.append(gate::cz(0, 1));
    bell.append(gate::h(1));
    Rng a = make_rng(5), b = make_rng(5);
    const Histogram noisy = run_noisy(bell, NoiseModel{}, 2000, a);
    const Histogram ideal = sample_counts(run(bell), 2000, b);
    CHECK(noisy == ideal);
  }

  SUBCASE("empty circuit stays on the all-zeros string under any noise") {
    Circuit c(3);
    Rng rng = make_rng(9);
    const Histogram hist = run_noisy(c, NoiseModel{0.5, 0.5}, 500, rng);
    CHECK(hist.size() == 1);
    CHECK(hist.at(0) == 500);
  }

  SUBCASE("Bell <ZZ> degrades monotonically with p2q") {
    Circuit bell(2);
    bell.append(gate::h(0));
    bell.append(gate::h(1));
    bell.append(gate::cz(0, 1));
    bell.append(gate::h(1));
    double prev = 1.0;
    for (double p2q : {0.01, 0.05, 0.1}) {
      Rng rng = make_rng(42);
      const Histogram hist = run_noisy(bell, NoiseModel{0.0, p2q}, 100000, rng);
      const double zz = zz_expectation(hist, 0, 1);
      CHECK(zz < prev);
      prev = zz;
    }
    CHECK(prev < 1.0);
  }

  SUBCASE("identical configuration reproduces identical histograms") {
    Circuit c(2);
    c.append(gate::h(0));
    c.append(gate::cz(0, 1));
    Rng a = make_rng(17), b = make_rng(17);
    CHECK(run_noisy(c, NoiseModel{0.01, 0.05}, 3000, a) ==
          run_noisy(c, NoiseModel{0.01, 0.05}, 3000, b));
  }
}

TEST_CASE("norm preserved through long random gate sequences") {
  Rng rng = make_rng(23);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_int_distribution<int> qubit(0, 3);
  StateVectord st(4);
  apply(st, gate::h(0));
  for (int i = 0; i < 200; ++i) {
    const int q = qubit(rng);
    const int r = (q + 1 + qubit(rng) % 3) % 4;
    switch (i % 5) {
      case 0: apply(st, gate::ry(q, angle(rng))); break;
      case 1: apply(st, gate::rzz(q, r, angle(rng))); break;
      case 2: apply(st, gate::h(q)); break;
      case 3: apply(st, gate::cry(q, {r}, 1, angle(rng))); break;
      default: apply(st, gate::rx(q, angle(rng))); break;
    }
  }
  CHECK(std::abs(st.norm_sq() - 1.0) < 1e-9);
}

TEST_CASE("bitstring rendering puts the most significant qubit first") {
  CHECK(to_bitstring(0b1101, 4) == "1101");
  CHECK(from_bitstring("1101") == 0b1101);
  CHECK(from_bitstring(to_bitstring(37, 6)) == 37);
}
