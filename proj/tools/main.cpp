// Benchmark CLI: one subcommand per experiment family, CSV/JSON output,
// deterministic seed management.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qauto/bench.hpp"

namespace {

struct OutputOptions {
  std::string out_path;  // empty = stdout
  std::string format = "csv";
};

void add_common(CLI::App* cmd, qauto::CommonConfig& common, OutputOptions& out,
                std::string& config_path) {
  cmd->add_option("--seed", common.seed, "Master seed (default 42)");
  cmd->add_option("--shots", common.shots, "Shots per circuit");
  cmd->add_option("--noise-p2q", common.noise_p2q,
                  "Two-qubit depolarizing probability");
  cmd->add_option("--noise-p1q", common.noise_p1q,
                  "One-qubit depolarizing probability");
  cmd->add_option("--out", out.out_path, "Output file (default stdout)");
  cmd->add_option("--format", out.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", config_path,
                  "JSON config file; overrides command-line flags");
}

void apply_common_config(const nlohmann::json& j, qauto::CommonConfig& c) {
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("shots")) c.shots = j["shots"].get<std::int64_t>();
  if (j.contains("noise_p2q")) c.noise_p2q = j["noise_p2q"].get<double>();
  if (j.contains("noise_p1q")) c.noise_p1q = j["noise_p1q"].get<double>();
}

nlohmann::json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qauto::validation_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void emit(const qauto::ResultTable& table, const OutputOptions& out) {
  if (out.out_path.empty() || out.out_path == "-") {
    if (out.format == "json")
      table.write_json(std::cout);
    else
      table.write_csv(std::cout);
    return;
  }
  std::ofstream os(out.out_path);
  if (!os)
    throw std::runtime_error("cannot write output file: " + out.out_path);
  if (out.format == "json")
    table.write_json(os);
  else
    table.write_csv(os);
}

std::vector<int> parse_obs(const std::string& spec) {
  std::vector<int> obs;
  for (char c : spec) {
    if (c == ',' || c == ' ') continue;
    if (c == '0')
      obs.push_back(0);
    else if (c == '1')
      obs.push_back(1);
    else
      throw qauto::validation_error("invalid observation symbol in sequence");
  }
  return obs;
}

int error_exit(const char* category, const std::exception& e) {
  nlohmann::json j{{"error", category}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
  return category == std::string("validation") ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-classical autonomy benchmark suite"};
  app.require_subcommand(1);

  OutputOptions out;
  std::string config_path;

  // tiger
  qauto::TigerParams tiger;
  std::string tiger_obs = "0,0,0,0";
  auto* cmd_tiger = app.add_subcommand(
      "tiger", "Closed-loop Tiger belief updates with planner actions");
  add_common(cmd_tiger, tiger.common, out, config_path);
  cmd_tiger->add_option("--obs", tiger_obs,
                        "Observation sequence, e.g. 0,0,0,1,1,1,0,0");
  cmd_tiger->add_option("--horizon", tiger.horizon, "Planning horizon");
  cmd_tiger->add_option("--biqae-iterations", tiger.biqae_iterations,
                        "Evidence-estimation rounds per step");
  cmd_tiger->add_option("--biqae-shots", tiger.biqae_shots,
                        "Shots per estimation round");

  // grover
  qauto::GroverParams grover;
  double grover_amplitude = -1.0;
  auto* cmd_grover = app.add_subcommand(
      "grover", "Amplitude amplification sweep on the Tiger evidence oracle");
  add_common(cmd_grover, grover.common, out, config_path);
  cmd_grover->add_option("--prior-left", grover.prior_left,
                         "Tiger prior P(tiger-left)");
  cmd_grover->add_option("--target-obs", grover.target_obs,
                         "Observation to amplify (0 or 1)");
  cmd_grover->add_option("--k-max", grover.k_max, "Largest iteration count");
  cmd_grover->add_option("--amplitude", grover_amplitude,
                         "Use a plain Ry oracle at this amplitude instead");

  // biqae
  qauto::BiqaeParams biqae;
  std::vector<double> biqae_amps;
  double prior_mean = -1.0, prior_std = 0.05;
  auto* cmd_biqae = app.add_subcommand(
      "biqae", "Amplitude-estimation sweep with credible intervals");
  add_common(cmd_biqae, biqae.common, out, config_path);
  cmd_biqae->add_option("--amplitudes", biqae_amps, "Amplitudes to sweep");
  cmd_biqae->add_option("--runs", biqae.runs_per_amplitude,
                        "Replicas per amplitude");
  cmd_biqae->add_option("--iterations", biqae.iterations, "Schedule rounds");
  cmd_biqae->add_option("--iter-shots", biqae.shots_per_iteration,
                        "Shots per round");
  cmd_biqae->add_option("--oracle-qubits", biqae.oracle_qubits,
                        "1-qubit Ry or 2-qubit product oracle");
  cmd_biqae->add_option("--prior-mean", prior_mean,
                        "Gaussian prior mean on the amplitude");
  cmd_biqae->add_option("--prior-std", prior_std, "Gaussian prior std");

  // qaoa
  qauto::QaoaParams qaoa;
  auto* cmd_qaoa = app.add_subcommand(
      "qaoa", "Fixed-parameter-count QAOA sensitivity sweep");
  add_common(cmd_qaoa, qaoa.common, out, config_path);
  cmd_qaoa->add_option("--N", qaoa.n_tracks, "Tracks in the instance");
  cmd_qaoa->add_option("--M", qaoa.n_meas, "Measurements in the instance");
  cmd_qaoa->add_option("--k", qaoa.ks, "Schedule coefficient counts");
  cmd_qaoa->add_option("--p", qaoa.ps, "Circuit depths");
  cmd_qaoa->add_option("--sweep-seeds", qaoa.n_seeds, "Replicas per cell");
  cmd_qaoa->add_option("--opt-evals", qaoa.optimizer_evaluations,
                       "Optimizer evaluation budget");
  cmd_qaoa->add_flag("--transfer", qaoa.transfer,
                     "Replay simulator-optimized schedules under noise");

  // mtda
  qauto::MtdaParams mtda;
  bool mtda_single = false;
  auto* cmd_mtda = app.add_subcommand(
      "mtda", "QUBO construction scaling and classical solver timing");
  add_common(cmd_mtda, mtda.common, out, config_path);
  cmd_mtda->add_flag("--single", mtda_single,
                     "One instance instead of the scaling table");
  cmd_mtda->add_option("--N", mtda.n_tracks, "Tracks (with --single)");
  cmd_mtda->add_option("--M", mtda.n_meas, "Measurements (with --single)");

  // track
  qauto::TrackParams track;
  std::string trace_path;
  auto* cmd_track = app.add_subcommand(
      "track", "End-to-end tracking scenarios with pluggable association");
  add_common(cmd_track, track.common, out, config_path);
  cmd_track->add_option("--scenario", track.scenario,
                        "crossing, clutter, swarm or all");
  cmd_track->add_option("--solver", track.solver, "hungarian or gnn");
  cmd_track->add_option("--steps", track.n_steps, "Frames per run");
  cmd_track->add_option("--trace", trace_path, "Per-step trace CSV path");

  // zne
  qauto::ZneParams zne;
  auto* cmd_zne = app.add_subcommand(
      "zne", "Zero-noise extrapolation studies (Bell and deep circuits)");
  add_common(cmd_zne, zne.common, out, config_path);
  cmd_zne->add_option("--mode", zne.mode, "bell or deep");
  cmd_zne->add_option("--scales", zne.scale_factors, "Odd fold factors");
  cmd_zne->add_option("--zne-seeds", zne.n_seeds, "Replicas");
  cmd_zne->add_option("--deep-gates", zne.deep_two_qubit_gates,
                      "Two-qubit gates in the deep circuit");

  // repro
  std::string repro_dir = "repro-out";
  auto* cmd_repro = app.add_subcommand(
      "repro", "Run the full reproduction matrix and write a manifest");
  cmd_repro->add_option("--out-dir", repro_dir, "Output directory");
  std::uint64_t repro_seed = 42;
  cmd_repro->add_option("--seed", repro_seed, "Master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<nlohmann::json> cfg;
    if (!config_path.empty()) cfg = load_config(config_path);

    if (cmd_tiger->parsed()) {
      tiger.obs = parse_obs(tiger_obs);
      if (cfg) {
        apply_common_config(*cfg, tiger.common);
        if (cfg->contains("obs")) tiger.obs = (*cfg)["obs"].get<std::vector<int>>();
        if (cfg->contains("horizon")) tiger.horizon = (*cfg)["horizon"].get<int>();
      }
      emit(qauto::run_tiger(tiger), out);
    } else if (cmd_grover->parsed()) {
      if (grover_amplitude > 0) grover.amplitude = grover_amplitude;
      if (cfg) {
        apply_common_config(*cfg, grover.common);
        if (cfg->contains("amplitude"))
          grover.amplitude = (*cfg)["amplitude"].get<double>();
        if (cfg->contains("prior_left"))
          grover.prior_left = (*cfg)["prior_left"].get<double>();
        if (cfg->contains("k_max")) grover.k_max = (*cfg)["k_max"].get<int>();
      }
      emit(qauto::run_grover(grover), out);
    } else if (cmd_biqae->parsed()) {
      if (!biqae_amps.empty()) biqae.amplitudes = biqae_amps;
      if (prior_mean > 0) biqae.prior = qauto::GaussianPrior{prior_mean, prior_std};
      if (cfg) {
        apply_common_config(*cfg, biqae.common);
        if (cfg->contains("amplitudes"))
          biqae.amplitudes = (*cfg)["amplitudes"].get<std::vector<double>>();
        if (cfg->contains("runs_per_amplitude"))
          biqae.runs_per_amplitude = (*cfg)["runs_per_amplitude"].get<int>();
        if (cfg->contains("iterations"))
          biqae.iterations = (*cfg)["iterations"].get<int>();
      }
      emit(qauto::run_biqae(biqae), out);
    } else if (cmd_qaoa->parsed()) {
      if (cfg) {
        apply_common_config(*cfg, qaoa.common);
        if (cfg->contains("ks")) qaoa.ks = (*cfg)["ks"].get<std::vector<int>>();
        if (cfg->contains("ps")) qaoa.ps = (*cfg)["ps"].get<std::vector<int>>();
        if (cfg->contains("n_seeds")) qaoa.n_seeds = (*cfg)["n_seeds"].get<int>();
      }
      emit(qauto::run_qaoa(qaoa), out);
    } else if (cmd_mtda->parsed()) {
      mtda.table_mode = !mtda_single;
      if (cfg) apply_common_config(*cfg, mtda.common);
      emit(qauto::run_mtda(mtda), out);
    } else if (cmd_track->parsed()) {
      if (!trace_path.empty()) track.trace_path = trace_path;
      if (cfg) {
        apply_common_config(*cfg, track.common);
        if (cfg->contains("scenario"))
          track.scenario = (*cfg)["scenario"].get<std::string>();
        if (cfg->contains("solver"))
          track.solver = (*cfg)["solver"].get<std::string>();
        if (cfg->contains("n_steps")) track.n_steps = (*cfg)["n_steps"].get<int>();
      }
      emit(qauto::run_track(track), out);
    } else if (cmd_zne->parsed()) {
      if (cfg) {
        apply_common_config(*cfg, zne.common);
        if (cfg->contains("mode")) zne.mode = (*cfg)["mode"].get<std::string>();
        if (cfg->contains("scale_factors"))
          zne.scale_factors = (*cfg)["scale_factors"].get<std::vector<int>>();
      }
      emit(qauto::run_zne(zne), out);
    } else if (cmd_repro->parsed()) {
      namespace fs = std::filesystem;
      fs::create_directories(repro_dir);
      nlohmann::json manifest;
      auto save = [&](const std::string& name, const qauto::ResultTable& t) {
        const std::string path = repro_dir + "/" + name + ".csv";
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        t.write_csv(os);
        manifest[name] = {{"file", path},
                          {"config_hash", t.metadata.at("config_hash")}};
        std::cerr << "wrote " << path << "\n";
      };

      qauto::TigerParams t4;
      t4.common.seed = repro_seed;
      save("tiger-t4", qauto::run_tiger(t4));

      qauto::TigerParams t8;
      t8.common.seed = repro_seed;
      t8.obs = {0, 0, 0, 1, 1, 1, 0, 0};
      save("tiger-t8", qauto::run_tiger(t8));

      qauto::GroverParams g;
      g.common.seed = repro_seed;
      save("grover-tiger", qauto::run_grover(g));

      qauto::GroverParams gs;
      gs.common.seed = repro_seed;
      gs.amplitude = 0.05;
      save("grover-amplitude-sweep", qauto::run_grover(gs));

      qauto::BiqaeParams b;
      b.common.seed = repro_seed;
      b.runs_per_amplitude = 25;
      save("biqae-sweep", qauto::run_biqae(b));

      qauto::QaoaParams q;
      q.common.seed = repro_seed;
      q.n_seeds = 3;
      q.ps = {1, 2, 4, 8};
      save("qaoa-sweep", qauto::run_qaoa(q));

      qauto::MtdaParams m;
      m.common.seed = repro_seed;
      save("mtda-scaling", qauto::run_mtda(m));

      qauto::TrackParams tr;
      tr.common.seed = repro_seed;
      tr.scenario = "all";
      save("tracking", qauto::run_track(tr));

      qauto::ZneParams z;
      z.common.seed = repro_seed;
      z.common.shots = 100000;
      save("zne-bell", qauto::run_zne(z));

      qauto::ZneParams zd;
      zd.common.seed = repro_seed;
      zd.mode = "deep";
      zd.common.shots = 20000;
      zd.n_seeds = 10;
      save("zne-deep", qauto::run_zne(zd));

      std::ofstream mf(repro_dir + "/manifest.json");
      mf << manifest.dump(2) << "\n";
      std::cerr << "wrote " << repro_dir << "/manifest.json\n";
    }
  } catch (const qauto::validation_error& e) {
    return error_exit("validation", e);
  } catch (const std::exception& e) {
    return error_exit("runtime", e);
  }
  return 0;
}
