#include "qauto/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qauto/belief_circuit.hpp"
#include "qauto/grover.hpp"
#include "qauto/mitigation.hpp"
#include "qauto/planner.hpp"
#include "qauto/pomdp.hpp"
#include "qauto/qaoa.hpp"
#include "qauto/tracking.hpp"

namespace qauto {

namespace {

nlohmann::json common_json(const CommonConfig& c) {
  return {{"seed", c.seed},
          {"shots", c.shots},
          {"noise_p2q", c.noise_p2q},
          {"noise_p1q", c.noise_p1q}};
}

void stamp(ResultTable& table, const std::string& experiment,
           const std::string& config_json, double wall_ms) {
  table.metadata["experiment"] = experiment;
  table.metadata["artifact_version"] = artifact_version();
  table.metadata["config"] = config_json;
  table.metadata["config_hash"] = std::to_string(fnv1a(config_json));
  table.metadata["wall_ms"] = format_double(wall_ms, 6);
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

/// Minimal-circuit belief update, exact or shot-sampled under noise.
BeliefUpdate circuit_belief_update(const PomdpModel& m, const Belief& b,
                                   int action, int obs,
                                   const NoiseModel& noise, std::int64_t shots,
                                   Rng& rng) {
  if (noise.is_noiseless()) return quantum_belief_update(m, b, action, obs);
  const Belief predicted = m.predict(b, action);
  const Circuit c = build_direct_encoding_circuit(
      predicted, m.O[static_cast<std::size_t>(action)]);
  const int n_state_bits = bits_for(m.n_states);
  const Histogram counts = run_noisy(c, noise, shots, rng);
  Eigen::VectorXd selected = Eigen::VectorXd::Zero(m.n_states);
  std::int64_t kept = 0, total = 0;
  for (const auto& [x, n] : counts) {
    total += n;
    if (static_cast<int>((x >> n_state_bits) & 1ull) != obs) continue;
    const int s = static_cast<int>(x & ((1ull << n_state_bits) - 1));
    if (s < m.n_states) selected[s] += static_cast<double>(n);
    kept += n;
  }
  if (kept == 0)
    throw zero_probability_error("no shots survived post-selection");
  return {selected / static_cast<double>(kept),
          static_cast<double>(kept) / static_cast<double>(total)};
}

}  // namespace

std::string TigerParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "tiger";
  j["obs"] = obs;
  j["horizon"] = horizon;
  j["biqae_iterations"] = biqae_iterations;
  j["biqae_shots"] = biqae_shots;
  return j.dump();
}

ResultTable run_tiger(const TigerParams& p) {
  for (int o : p.obs)
    if (o != 0 && o != 1)
      throw validation_error("tiger observations must be 0 or 1");
  if (p.horizon < 1) throw validation_error("horizon must be >= 1");

  Stopwatch watch;
  const PomdpModel model = tiger2();
  const NoiseModel noise{p.common.noise_p1q, p.common.noise_p2q};
  PlannerConfig cfg;
  cfg.horizon = p.horizon;
  cfg.seed = p.common.seed;

  Rng circuit_rng = make_rng(p.common.seed, 1);
  Rng biqae_rng = make_rng(p.common.seed, 2);

  ResultTable table;
  table.columns = {"t",          "prior_left",    "prior_right", "action",
                   "obs",        "post_left",     "post_right",  "evidence",
                   "biqae_a_hat", "biqae_abs_err", "hellinger"};

  Belief prior = model.uniform_belief();
  for (std::size_t t = 0; t < p.obs.size(); ++t) {
    const int obs = p.obs[t];
    const int action = qbrl_plan(model, prior, cfg);
    const BeliefUpdate exact = belief_update(model, prior, action, obs);
    const BeliefUpdate quantum = circuit_belief_update(
        model, prior, action, obs, noise, p.common.shots, circuit_rng);

    // BIQAE evidence readout on the same circuit family
    const Belief predicted = model.predict(prior, action);
    AmplitudeOracle oracle{
        build_direct_encoding_circuit(
            predicted, model.O[static_cast<std::size_t>(action)]),
        {bits_for(model.n_states)},
        static_cast<std::uint64_t>(obs)};
    BiqaeConfig bq;
    bq.max_iterations = p.biqae_iterations;
    bq.shots = p.biqae_shots;
    const BiqaeResult est = estimate(oracle, bq, noise, biqae_rng);

    table.add_row({std::to_string(t), format_double(prior[0]),
                   format_double(prior[1]),
                   model.action_names[static_cast<std::size_t>(action)],
                   std::to_string(obs), format_double(quantum.posterior[0]),
                   format_double(quantum.posterior[1]),
                   format_double(quantum.evidence), format_double(est.a_hat),
                   format_double(std::abs(est.a_hat - exact.evidence)),
                   format_double(hellinger(quantum.posterior,
                                           exact.posterior))});
    prior = quantum.posterior;
  }
  stamp(table, "tiger", p.to_json(), watch.ms());
  return table;
}

std::string GroverParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "grover";
  j["prior_left"] = prior_left;
  j["target_obs"] = target_obs;
  j["k_max"] = k_max;
  if (amplitude) j["amplitude"] = *amplitude;
  return j.dump();
}

ResultTable run_grover(const GroverParams& p) {
  if (p.k_max < 0) throw validation_error("k_max must be >= 0");
  if (!p.amplitude && !(p.prior_left > 0.0 && p.prior_left < 1.0))
    throw validation_error("prior must lie in (0, 1)");
  if (p.amplitude && !(*p.amplitude > 0.0 && *p.amplitude < 1.0))
    throw validation_error("amplitude must lie in (0, 1)");

  Stopwatch watch;
  const NoiseModel noise{p.common.noise_p1q, p.common.noise_p2q};
  Rng rng = make_rng(p.common.seed);

  GroverSetup setup;
  Belief prior;
  double evidence;
  if (p.amplitude) {
    const AmplitudeOracle oracle = ry_oracle(*p.amplitude);
    setup = oracle.grover();
    evidence = *p.amplitude;
  } else {
    prior = Belief(2);
    prior << p.prior_left, 1.0 - p.prior_left;
    setup = GroverSetup{build_minimal_tiger_circuit(prior), {1},
                        static_cast<std::uint64_t>(p.target_obs)};
    evidence = marked_probability(setup, run(setup.prep));
  }

  ResultTable table;
  table.columns = {"k",        "p_theory",   "p_noiseless", "p_noisy",
                   "amplification", "posterior_hellinger"};
  const Belief exact_posterior =
      p.amplitude ? Belief()
                  : belief_update(tiger2(), prior, 0, p.target_obs).posterior;
  for (int k = 0; k <= p.k_max; ++k) {
    const double theory = amplified_probability(evidence, k);
    const StateVectord amplified = grover_amplify(setup, k);
    const double noiseless = marked_probability(setup, amplified);
    double noisy = noiseless;
    if (!noise.is_noiseless()) {
      const Histogram counts =
          run_noisy(setup.amplified_circuit(k), noise, p.common.shots, rng);
      std::int64_t marked = 0, total = 0;
      for (const auto& [x, c] : counts) {
        total += c;
        if (detail::controls_match(x, setup.marked_qubits,
                                   setup.marked_pattern))
          marked += c;
      }
      noisy = static_cast<double>(marked) / static_cast<double>(total);
    }
    double post_hell = 0.0;
    if (!p.amplitude) {
      const AmplifiedPosterior ap =
          amplified_posterior(prior, p.target_obs, k);
      post_hell = hellinger(ap.posterior, exact_posterior);
    }
    table.add_row({std::to_string(k), format_double(theory),
                   format_double(noiseless), format_double(noisy),
                   format_double(noiseless / evidence),
                   format_double(post_hell)});
  }
  table.metadata["evidence"] = format_double(evidence);
  table.metadata["k_star"] =
      std::to_string(optimal_iterations(evidence, IterationRule::exact));
  table.metadata["k_star_sqrt_rule"] =
      std::to_string(optimal_iterations(evidence, IterationRule::sqrt_bound));
  stamp(table, "grover", p.to_json(), watch.ms());
  return table;
}

std::string BiqaeParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "biqae";
  j["amplitudes"] = amplitudes;
  j["runs_per_amplitude"] = runs_per_amplitude;
  j["iterations"] = iterations;
  j["shots_per_iteration"] = shots_per_iteration;
  j["oracle_qubits"] = oracle_qubits;
  if (prior) j["prior"] = {{"mean", prior->mean}, {"std", prior->std}};
  return j.dump();
}

ResultTable run_biqae(const BiqaeParams& p) {
  if (p.oracle_qubits != 1 && p.oracle_qubits != 2)
    throw validation_error("oracle_qubits must be 1 or 2");
  if (p.runs_per_amplitude < 1)
    throw validation_error("runs_per_amplitude must be >= 1");
  for (double a : p.amplitudes)
    if (!(a > 0.0 && a < 1.0))
      throw validation_error("amplitudes must lie in (0, 1)");

  Stopwatch watch;
  const NoiseModel noise{p.common.noise_p1q, p.common.noise_p2q};
  ResultTable table;
  table.columns = {"a_true", "a_hat",   "abs_error",      "ci_lo",
                   "ci_hi",  "covered", "oracle_queries", "seed"};
  BiqaeConfig cfg;
  cfg.max_iterations = p.iterations;
  cfg.shots = p.shots_per_iteration;
  cfg.prior = p.prior;

  std::uint64_t replica = 0;
  for (double a : p.amplitudes) {
    const AmplitudeOracle oracle =
        p.oracle_qubits == 1 ? ry_oracle(a) : ry_product_oracle(a);
    for (int run_idx = 0; run_idx < p.runs_per_amplitude; ++run_idx) {
      Rng rng = make_rng(p.common.seed, replica);
      const BiqaeResult r = estimate(oracle, cfg, noise, rng);
      const bool covered = covers(r.interval, a);
      table.add_row({format_double(a), format_double(r.a_hat),
                     format_double(std::abs(r.a_hat - a)),
                     format_double(r.interval.lo),
                     format_double(r.interval.hi), covered ? "1" : "0",
                     std::to_string(r.oracle_queries),
                     std::to_string(replica)});
      ++replica;
    }
  }
  stamp(table, "biqae", p.to_json(), watch.ms());
  return table;
}

AssociationScenario random_association_scenario(int n_tracks, int n_meas,
                                                Rng& rng, double region) {
  std::uniform_real_distribution<double> pos(0.1 * region, 0.9 * region);
  std::uniform_real_distribution<double> vel(-0.3, 0.3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  AssociationScenario s;
  const double sigma = 0.02 * region;
  for (int i = 0; i < n_tracks; ++i) {
    Track t;
    t.x << pos(rng), pos(rng), vel(rng), vel(rng);
    t.P = Eigen::Vector4d(0.05, 0.05, 0.02, 0.02).asDiagonal();
    s.tracks.push_back(t);
  }
  const auto F = constant_velocity_f();
  for (int j = 0; j < n_meas; ++j) {
    Measurement m;
    if (j < n_tracks) {
      const Eigen::Vector4d predicted = F * s.tracks[static_cast<std::size_t>(j)].x;
      m.z << predicted[0] + sigma * gauss(rng), predicted[1] + sigma * gauss(rng);
    } else {
      m.z << pos(rng), pos(rng);
    }
    m.R = sigma * sigma * Eigen::Matrix2d::Identity();
    s.measurements.push_back(m);
  }
  return s;
}

CostMatrix random_cost_matrix(int n_tracks, int n_meas, Rng& rng) {
  std::normal_distribution<double> gauss(-5.0, 2.0);
  CostMatrix cost;
  cost.cost = Eigen::MatrixXd::Zero(n_tracks, n_meas);
  cost.gate.resize(n_tracks, n_meas);
  cost.gate.setConstant(true);
  for (int i = 0; i < n_tracks; ++i)
    for (int j = 0; j < n_meas; ++j) cost.cost(i, j) = gauss(rng);
  const double scale = cost.max_abs_gated_cost();
  cost.c_miss = 0.7 * scale;
  cost.c_fa = 0.7 * scale;
  return cost;
}

std::string QaoaParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "qaoa";
  j["n_tracks"] = n_tracks;
  j["n_meas"] = n_meas;
  j["ks"] = ks;
  j["ps"] = ps;
  j["n_seeds"] = n_seeds;
  j["optimizer_evaluations"] = optimizer_evaluations;
  j["transfer"] = transfer;
  return j.dump();
}

ResultTable run_qaoa(const QaoaParams& p) {
  if (p.n_tracks < 1 || p.n_meas < 1)
    throw validation_error("instance dimensions must be positive");
  const long n_var = static_cast<long>(p.n_tracks) * p.n_meas + p.n_tracks +
                     p.n_meas;
  if (n_var > 16)
    throw validation_error(
        "statevector sweep capped at 16 QUBO variables");
  for (int k : p.ks)
    if (k < 1) throw validation_error("k must be >= 1");
  for (int depth : p.ps)
    if (depth < 1) throw validation_error("p must be >= 1");

  Stopwatch watch;
  QaoaOptimizerConfig cfg;
  cfg.max_evaluations = p.optimizer_evaluations;
  cfg.shots = p.common.shots;

  ResultTable table;
  if (!p.transfer) {
    table.columns = {"k",         "p",           "n_params", "seed",
                     "objective", "quality_pct", "feasible"};
    for (int k : p.ks) {
      for (int depth : p.ps) {
        for (int s = 0; s < p.n_seeds; ++s) {
          Rng instance_rng = make_rng(p.common.seed, static_cast<std::uint64_t>(s));
          const CostMatrix cost =
              random_cost_matrix(p.n_tracks, p.n_meas, instance_rng);
          const QuboInstance qubo = build_qubo(cost);
          Rng rng = make_rng(p.common.seed, 1000 + static_cast<std::uint64_t>(s));
          const QaoaResult r = optimize_fpc(qubo, k, depth, cfg, rng);
          table.add_row(
              {std::to_string(k), std::to_string(depth),
               std::to_string(2 * k), std::to_string(s),
               format_double(r.decoded.energy),
               r.decoded.quality_pct ? format_double(*r.decoded.quality_pct)
                                     : "",
               r.feasible ? "1" : "0"});
        }
      }
    }
  } else {
    // warm-start transfer study: optimize noiselessly, replay under noise
    table.columns = {"k",           "p",           "seed",
                     "sim_quality", "hw_quality",  "noise_p2q"};
    const NoiseModel noise{p.common.noise_p1q, p.common.noise_p2q};
    for (int k : p.ks) {
      for (int depth : p.ps) {
        for (int s = 0; s < p.n_seeds; ++s) {
          Rng instance_rng = make_rng(p.common.seed, static_cast<std::uint64_t>(s));
          const CostMatrix cost =
              random_cost_matrix(p.n_tracks, p.n_meas, instance_rng);
          const QuboInstance qubo = build_qubo(cost);
          Rng rng = make_rng(p.common.seed, 1000 + static_cast<std::uint64_t>(s));
          const QaoaResult sim = optimize_fpc(qubo, k, depth, cfg, rng);
          Rng replay_rng =
              make_rng(p.common.seed, 2000 + static_cast<std::uint64_t>(s));
          const QaoaResult hw = replay_schedule(qubo, sim.schedule, cfg, noise,
                                                replay_rng);
          table.add_row(
              {std::to_string(k), std::to_string(depth), std::to_string(s),
               sim.decoded.quality_pct ? format_double(*sim.decoded.quality_pct)
                                       : "",
               hw.decoded.quality_pct ? format_double(*hw.decoded.quality_pct)
                                      : "",
               format_double(p.common.noise_p2q)});
        }
      }
    }
  }
  stamp(table, p.transfer ? "qaoa-transfer" : "qaoa", p.to_json(), watch.ms());
  return table;
}

std::string MtdaParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "mtda";
  j["table_mode"] = table_mode;
  j["n_tracks"] = n_tracks;
  j["n_meas"] = n_meas;
  return j.dump();
}

ResultTable run_mtda(const MtdaParams& p) {
  Stopwatch watch;
  ResultTable table;
  table.columns = {"N",          "M",           "n_var",
                   "nnz_formula", "nnz_with_slack", "build_ms",
                   "hungarian_ms", "gnn_ms"};

  std::vector<std::pair<int, int>> sizes;
  if (p.table_mode) {
    sizes = {{2, 3}, {3, 5}, {5, 8}, {8, 12}, {10, 15}, {15, 23}, {20, 30}};
  } else {
    if (p.n_tracks < 1 || p.n_meas < 1)
      throw validation_error("instance dimensions must be positive");
    sizes = {{p.n_tracks, p.n_meas}};
  }

  std::uint64_t replica = 0;
  for (const auto& [n, m] : sizes) {
    Rng rng = make_rng(p.common.seed, replica++);
    const AssociationScenario scenario =
        random_association_scenario(n, m, rng);
    // ungated build so n_var carries the full NM + N + M variables
    const Stopwatch build_watch;
    const CostMatrix cost =
        build_cost_matrix(scenario.tracks, scenario.measurements,
                          std::numeric_limits<double>::infinity());
    const QuboInstance qubo = build_qubo(cost);
    const double build_ms = build_watch.ms();

    const Stopwatch hungarian_watch;
    const Assignment hung = hungarian_solve(cost);
    const double hungarian_ms = hungarian_watch.ms();

    const Stopwatch gnn_watch;
    const Assignment gnn = gnn_solve(cost);
    const double gnn_ms = gnn_watch.ms();
    (void)hung;
    (void)gnn;

    table.add_row({std::to_string(n), std::to_string(m),
                   std::to_string(qubo.n_var),
                   std::to_string(appendix_nonzero_formula(n, m)),
                   std::to_string(appendix_nonzero_formula_with_slack(n, m)),
                   format_double(build_ms, 6), format_double(hungarian_ms, 6),
                   format_double(gnn_ms, 6)});
  }
  stamp(table, "mtda", p.to_json(), watch.ms());
  return table;
}

std::string TrackParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "track";
  j["scenario"] = scenario;
  j["solver"] = solver;
  j["n_steps"] = n_steps;
  if (trace_path) j["trace_path"] = *trace_path;
  return j.dump();
}

ResultTable run_track(const TrackParams& p) {
  if (p.n_steps < 1) throw validation_error("n_steps must be >= 1");
  AssignmentSolver solver;
  if (p.solver == "hungarian")
    solver = [](const CostMatrix& c) { return hungarian_solve(c); };
  else if (p.solver == "gnn")
    solver = [](const CostMatrix& c) { return gnn_solve(c); };
  else
    throw validation_error("solver must be hungarian or gnn");

  std::vector<Scenario> scenarios;
  auto pick = [&](const std::string& name) -> Scenario {
    if (name == "crossing") return Scenario::crossing();
    if (name == "clutter") return Scenario::clutter();
    if (name == "swarm") return Scenario::swarm();
    throw validation_error("scenario must be crossing, clutter, swarm or all");
  };
  if (p.scenario == "all") {
    scenarios = {Scenario::crossing(), Scenario::clutter(), Scenario::swarm()};
  } else {
    scenarios = {pick(p.scenario)};
  }

  Stopwatch watch;
  ResultTable table;
  table.columns = {"scenario", "solver", "confirmed", "n_targets",
                   "MD",       "FA",     "mean_step_ms"};
  ResultTable trace;
  trace.columns = {"t", "n_meas", "n_assigned", "MD_event", "FA_event"};

  for (Scenario s : scenarios) {
    s.n_steps = p.n_steps;
    s.seed = p.common.seed;
    const ScenarioResult r = run_scenario(s, solver);
    const char* name = s.kind == ScenarioKind::crossing
                           ? "crossing"
                           : (s.kind == ScenarioKind::clutter ? "clutter"
                                                              : "swarm");
    table.add_row({name, p.solver, std::to_string(r.confirmed_tracks),
                   std::to_string(r.n_targets), std::to_string(r.md),
                   std::to_string(r.fa), format_double(r.mean_step_ms, 6)});
    for (const StepEvents& ev : r.steps)
      trace.add_row({std::to_string(ev.t), std::to_string(ev.n_measurements),
                     std::to_string(ev.n_assigned),
                     std::to_string(ev.md_events),
                     std::to_string(ev.fa_events)});
  }
  if (p.trace_path) {
    std::ofstream out(*p.trace_path);
    if (!out)
      throw std::runtime_error("cannot write trace file: " + *p.trace_path);
    trace.write_csv(out);
  }
  stamp(table, "track", p.to_json(), watch.ms());
  return table;
}

std::string ZneParams::to_json() const {
  nlohmann::json j = common_json(common);
  j["experiment"] = "zne";
  j["mode"] = mode;
  j["scale_factors"] = scale_factors;
  j["n_seeds"] = n_seeds;
  j["deep_two_qubit_gates"] = deep_two_qubit_gates;
  return j.dump();
}

namespace {

Circuit bell_circuit() {
  Circuit c(2);
  c.append(gate::h(0));
  c.append(gate::h(1));
  c.append(gate::cz(0, 1));
  c.append(gate::h(1));
  return c;
}

/// Bell pair padded with an odd run of CZ gates; noiseless <ZZ> stays 1.
Circuit deep_bell_circuit(int n_two_qubit_gates) {
  if (n_two_qubit_gates % 2 == 0) ++n_two_qubit_gates;
  Circuit c(2);
  c.append(gate::h(0));
  c.append(gate::h(1));
  for (int i = 0; i < n_two_qubit_gates; ++i) c.append(gate::cz(0, 1));
  c.append(gate::h(1));
  return c;
}

}  // namespace

ResultTable run_zne(const ZneParams& p) {
  if (p.mode != "bell" && p.mode != "deep")
    throw validation_error("zne mode must be bell or deep");
  if (p.n_seeds < 1) throw validation_error("n_seeds must be >= 1");

  Stopwatch watch;
  const Circuit circuit = p.mode == "bell"
                              ? bell_circuit()
                              : deep_bell_circuit(p.deep_two_qubit_gates);
  const double p2q = p.common.noise_p2q > 0
                         ? p.common.noise_p2q
                         : (p.mode == "bell" ? 0.02 : 0.05);
  const NoiseModel noise{p.common.noise_p1q, p2q};

  MitigationPipeline pipeline;
  ZneStage zne;
  zne.scale_factors = p.scale_factors;
  pipeline.stages.push_back(zne);

  ResultTable table;
  table.columns = {"seed", "p2q", "raw_zz", "zne_zz", "raw_err",
                   "zne_err", "zne_beats_raw"};
  const DiagObservable observable = [](std::uint64_t x) {
    const int z0 = (x & 1ull) ? -1 : 1;
    const int z1 = (x & 2ull) ? -1 : 1;
    return static_cast<double>(z0 * z1);
  };
  for (int s = 0; s < p.n_seeds; ++s) {
    Rng rng = make_rng(p.common.seed, static_cast<std::uint64_t>(s));
    const CircuitRunner runner = [&](const Circuit& c) {
      return run_noisy(c, noise, p.common.shots, rng);
    };
    const MitigatedExpectation r =
        run_pipeline(circuit, observable, pipeline, runner);
    const double raw_err = std::abs(r.raw_value - 1.0);
    const double zne_err = std::abs(r.value - 1.0);
    table.add_row({std::to_string(s), format_double(p2q),
                   format_double(r.raw_value), format_double(r.value),
                   format_double(raw_err), format_double(zne_err),
                   zne_err < raw_err ? "1" : "0"});
  }
  stamp(table, "zne", p.to_json(), watch.ms());
  return table;
}

}  // namespace qauto
