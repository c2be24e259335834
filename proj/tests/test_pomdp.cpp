#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qauto/planner.hpp"
#include "qauto/pomdp.hpp"
#include "test_util.hpp"

using namespace qauto;

namespace {

PomdpModel random_model(int n_states, int n_actions, int n_obs, Rng& rng) {
  PomdpModel m;
  m.n_states = n_states;
  m.n_actions = n_actions;
  m.n_obs = n_obs;
  m.gamma = 0.9;
  for (int a = 0; a < n_actions; ++a) {
    Eigen::MatrixXd t(n_states, n_states), o(n_states, n_obs);
    for (int s = 0; s < n_states; ++s) {
      t.row(s) = test_util::random_simplex(n_states, rng).transpose();
      o.row(s) = test_util::random_simplex(n_obs, rng).transpose();
    }
    m.T.push_back(t);
    m.O.push_back(o);
  }
  m.R = Eigen::MatrixXd::Random(n_states, n_actions);
  for (int s = 0; s < n_states; ++s) m.state_names.push_back("s" + std::to_string(s));
  for (int a = 0; a < n_actions; ++a) m.action_names.push_back("a" + std::to_string(a));
  for (int o = 0; o < n_obs; ++o) m.obs_names.push_back("o" + std::to_string(o));
  m.validate();
  return m;
}

}  // namespace

TEST_CASE("tiger belief update reproduces the rare-evidence posterior") {
  const PomdpModel m = tiger2();
  Belief b(2);
  b << 0.97, 0.03;
  const BeliefUpdate up = belief_update(m, b, 0, 1);  // listen, hear-right
  CHECK(up.evidence == doctest::Approx(0.171).epsilon(1e-12));
  CHECK(up.posterior[0] == doctest::Approx(0.8509).epsilon(1e-3));
  CHECK(up.posterior[1] == doctest::Approx(0.1491).epsilon(1e-3));
}

TEST_CASE("tiger belief update from the uniform prior") {
  const PomdpModel m = tiger2();
  const BeliefUpdate up = belief_update(m, m.uniform_belief(), 0, 0);
  CHECK(up.evidence == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(up.posterior[0] == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(up.posterior[1] == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("corridor tiger posterior from the uniform prior") {
  const PomdpModel m = tiger4();
  const BeliefUpdate up = belief_update(m, m.uniform_belief(), 0, 0);
  const Eigen::Vector4d expected(0.425, 0.350, 0.150, 0.075);
  CHECK((up.posterior - expected).cwiseAbs().maxCoeff() < 1e-12);
  const BeliefUpdate right = belief_update(m, m.uniform_belief(), 0, 1);
  const Eigen::Vector4d expected_right(0.075, 0.150, 0.350, 0.425);
  CHECK((right.posterior - expected_right).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("evidence probability") {
  const PomdpModel m = tiger2();
  Belief b(2);
  b << 0.97, 0.03;
  CHECK(evidence_probability(m, b, 0, 1) == doctest::Approx(0.171).epsilon(1e-12));
  Belief c(2);
  c << 0.85, 0.15;
  CHECK(evidence_probability(m, c, 0, 0) == doctest::Approx(0.745).epsilon(1e-12));
}

TEST_CASE("impossible observation raises") {
  Rng rng = make_rng(5);
  PomdpModel m = tiger2();
  m.O[0] << 1.0, 0.0, 1.0, 0.0;  // observation 1 never happens under listen
  Belief b = m.uniform_belief();
  CHECK_THROWS_AS(belief_update(m, b, 0, 1), std::runtime_error);
  (void)rng;
}

TEST_CASE("random-model properties: normalization, completeness, Bayes consistency") {
  Rng rng = make_rng(99);
  std::uniform_int_distribution<int> dim(2, 5);
  int checked = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const PomdpModel m = random_model(dim(rng), dim(rng), dim(rng), rng);
    const Belief b = test_util::random_simplex(m.n_states, rng);
    std::uniform_int_distribution<int> pick_a(0, m.n_actions - 1);
    const int a = pick_a(rng);

    double evidence_sum = 0;
    for (int o = 0; o < m.n_obs; ++o)
      evidence_sum += evidence_probability(m, b, a, o);
    CHECK(evidence_sum == doctest::Approx(1.0).epsilon(1e-10));

    std::uniform_int_distribution<int> pick_o(0, m.n_obs - 1);
    const int o = pick_o(rng);
    const double pe = evidence_probability(m, b, a, o);
    if (pe <= 1e-6) continue;
    ++checked;
    const BeliefUpdate up = belief_update(m, b, a, o);
    CHECK(up.posterior.sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((up.posterior.array() >= 0).all());
    // evidence * posterior equals O(o|s',a) .* (T' b) elementwise
    const Eigen::VectorXd unnorm =
        m.O[static_cast<std::size_t>(a)].col(o).cwiseProduct(m.predict(b, a));
    CHECK((up.evidence * up.posterior - unnorm).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(checked > 900);
}

TEST_CASE("hellinger distance") {
  Eigen::Vector2d p(0.5, 0.5);
  CHECK(hellinger(p, p) == doctest::Approx(0.0));
  Eigen::Vector2d hw(0.850877, 0.149123);   // post-selected hardware counts
  Eigen::Vector2d exact(0.849374, 0.150626);
  CHECK(hellinger(hw, exact) == doctest::Approx(0.0015).epsilon(0.07));
  CHECK(std::abs(hellinger(hw, exact) - 0.0015) < 1e-4);
  Eigen::Vector2d left(1.0, 0.0), right(0.0, 1.0);
  CHECK(hellinger(left, right) == doctest::Approx(1.0));
  Eigen::Vector3d bad(0.2, 0.3, 0.5);
  CHECK_THROWS_AS(hellinger(p, bad), std::invalid_argument);
}

TEST_CASE("kl divergence") {
  Eigen::Vector2d p(0.5, 0.5), q(0.75, 0.25);
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-12));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.1438).epsilon(1e-3));
  Eigen::Vector2d degenerate(1.0, 0.0), uniform(0.5, 0.5);
  CHECK(kl_divergence(degenerate, uniform) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(kl_divergence(uniform, degenerate), std::invalid_argument);
}

TEST_CASE("planner H=1 decisions match the closed-loop traces") {
  const PomdpModel m = tiger2();
  PlannerConfig cfg;

  Belief confident_left(2);
  confident_left << 0.972, 0.028;
  CHECK(qbrl_plan(m, confident_left, cfg) == 2);  // open-right

  CHECK(qbrl_plan(m, m.uniform_belief(), cfg) == 0);  // listen

  Belief confident_right(2);
  confident_right << 0.043, 0.957;
  CHECK(qbrl_plan(m, confident_right, cfg) == 1);  // open-left
}

TEST_CASE("planner argmax is invariant to uniform reward shifts") {
  Rng rng = make_rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    PomdpModel m = random_model(3, 3, 2, rng);
    const Belief b = test_util::random_simplex(3, rng);
    PlannerConfig cfg;
    cfg.horizon = 3;
    cfg.rollouts_per_leaf = 16;
    cfg.seed = 1000 + rep;
    const int before = qbrl_plan(m, b, cfg);
    m.R.array() += 57.3;
    CHECK(qbrl_plan(m, b, cfg) == before);
  }
}

TEST_CASE("deeper horizons still pick a sensible tiger action") {
  const PomdpModel m = tiger2();
  PlannerConfig cfg;
  cfg.horizon = 3;
  cfg.rollouts_per_leaf = 64;
  CHECK(qbrl_plan(m, m.uniform_belief(), cfg) == 0);  // listening stays best
}

TEST_CASE("closed loop: T=4 all-hear-left protocol") {
  const PomdpModel m = tiger2();
  PlannerConfig cfg;
  const auto trace =
      run_closed_loop(m, {0, 0, 0, 0}, cfg, classical_update_provider());
  REQUIRE(trace.size() == 4);
  const std::vector<double> expected_right{0.15, 0.0302013422818792, 0.5, 0.15};
  for (int t = 0; t < 4; ++t)
    CHECK(trace[static_cast<std::size_t>(t)].posterior[1] ==
          doctest::Approx(expected_right[static_cast<std::size_t>(t)]).epsilon(1e-9));
  CHECK(trace[2].action == 2);  // open-right fires at t=2
  CHECK(trace[0].action == 0);
  CHECK(trace[1].action == 0);
  CHECK(trace[3].action == 0);
}

TEST_CASE("closed loop: T=8 fires both door actions with belief resets") {
  const PomdpModel m = tiger2();
  PlannerConfig cfg;
  const auto trace = run_closed_loop(m, {0, 0, 0, 1, 1, 1, 0, 0}, cfg,
                                     classical_update_provider());
  REQUIRE(trace.size() == 8);
  CHECK(trace[2].action == 2);  // open-right
  CHECK(trace[5].action == 1);  // open-left
  for (int t : {0, 1, 3, 4, 6, 7}) CHECK(trace[static_cast<std::size_t>(t)].action == 0);
  // door actions reset the belief to uniform
  CHECK(trace[2].posterior[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(trace[5].posterior[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(trace[3].prior[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(trace[6].prior[0] == doctest::Approx(0.5).epsilon(1e-12));
  for (const auto& step : trace) CHECK(step.hellinger_vs_exact < 1e-12);
}

TEST_CASE("closed loop: empty observation sequence gives an empty trace") {
  const PomdpModel m = tiger2();
  PlannerConfig cfg;
  CHECK(run_closed_loop(m, {}, cfg, classical_update_provider()).empty());
}

TEST_CASE("grid world structure") {
  const PomdpModel g = grid_world(4, 4);
  CHECK(g.n_states == 16);
  CHECK(g.n_actions == 5);
  CHECK(g.n_obs == 16);
  // each row has at most 2 successors here (move target or stay)
  for (const auto& t : g.T)
    for (int s = 0; s < 16; ++s)
      CHECK((t.row(s).array() > 0).count() <= 5);
  // sensor reports the true cell with probability 0.7
  CHECK(g.O[0](5, 5) == doctest::Approx(0.7));
  // goal is absorbing with reward +10
  CHECK(g.T[3](15, 15) == doctest::Approx(1.0));
  CHECK(g.R(15, 0) == doctest::Approx(10.0));
  CHECK(g.R(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("model file round trip") {
  namespace fs = std::filesystem;
  const PomdpModel m = tiger4();
  const std::string path =
      (fs::temp_directory_path() / "qauto_tiger4_model.json").string();
  save_pomdp(m, path);
  const PomdpModel loaded = load_pomdp(path);
  CHECK(loaded.n_states == m.n_states);
  CHECK(loaded.action_names == m.action_names);
  for (int a = 0; a < m.n_actions; ++a) {
    CHECK((loaded.T[static_cast<std::size_t>(a)] - m.T[static_cast<std::size_t>(a)])
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    CHECK((loaded.O[static_cast<std::size_t>(a)] - m.O[static_cast<std::size_t>(a)])
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }
  CHECK((loaded.R - m.R).cwiseAbs().maxCoeff() < 1e-15);
  fs::remove(path);
}

TEST_CASE("model validation rejects broken tables") {
  PomdpModel m = tiger2();
  m.T[0](0, 0) = 0.9;  // row no longer sums to one
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
