#include "qauto/tracking.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qauto {

Scenario Scenario::crossing() {
  Scenario s;
  s.kind = ScenarioKind::crossing;
  s.n_targets = 5;
  s.p_detect = 0.985;
  s.clutter_rate = 0.15;
  return s;
}

Scenario Scenario::clutter() {
  Scenario s;
  s.kind = ScenarioKind::clutter;
  s.n_targets = 3;
  s.p_detect = 0.99;
  s.clutter_rate = 0.5;
  return s;
}

Scenario Scenario::swarm() {
  Scenario s;
  s.kind = ScenarioKind::swarm;
  s.n_targets = 5;
  s.p_detect = 0.98;
  s.clutter_rate = 0.25;
  return s;
}

namespace {

const char* kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::crossing: return "crossing";
    case ScenarioKind::clutter: return "clutter";
    case ScenarioKind::swarm: return "swarm";
  }
  return "crossing";
}

ScenarioKind kind_from_name(const std::string& name) {
  if (name == "crossing") return ScenarioKind::crossing;
  if (name == "clutter") return ScenarioKind::clutter;
  if (name == "swarm") return ScenarioKind::swarm;
  throw std::invalid_argument("unknown scenario kind: " + name);
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario config: " + path);
  nlohmann::json j;
  in >> j;
  Scenario base = kind_from_name(j.at("kind").get<std::string>()) ==
                          ScenarioKind::crossing
                      ? Scenario::crossing()
                      : (kind_from_name(j.at("kind").get<std::string>()) ==
                                 ScenarioKind::clutter
                             ? Scenario::clutter()
                             : Scenario::swarm());
  if (j.contains("n_targets")) base.n_targets = j["n_targets"].get<int>();
  if (j.contains("p_detect")) base.p_detect = j["p_detect"].get<double>();
  if (j.contains("clutter_rate"))
    base.clutter_rate = j["clutter_rate"].get<double>();
  if (j.contains("meas_noise_std"))
    base.meas_noise_std = j["meas_noise_std"].get<double>();
  if (j.contains("n_steps")) base.n_steps = j["n_steps"].get<int>();
  if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("region")) base.region = j["region"].get<double>();
  return base;
}

void save_scenario(const Scenario& s, const std::string& path) {
  nlohmann::json j;
  j["kind"] = kind_name(s.kind);
  j["n_targets"] = s.n_targets;
  j["p_detect"] = s.p_detect;
  j["clutter_rate"] = s.clutter_rate;
  j["meas_noise_std"] = s.meas_noise_std;
  j["n_steps"] = s.n_steps;
  j["seed"] = s.seed;
  j["region"] = s.region;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario config: " + path);
  out << j.dump(2) << "\n";
}

std::vector<Eigen::Vector4d> ground_truth(const Scenario& s, int t) {
  std::vector<Eigen::Vector4d> truth;
  const double td = static_cast<double>(t);
  switch (s.kind) {
    case ScenarioKind::crossing: {
      // targets 0 and 1 share vx and converge so their paths intersect at
      // t = 14.5; the rest run on parallel lanes
      const double vx = 0.28;
      const double vy0 = 0.07;
      const double vy1 = vy0 - 2.0 / 14.5;
      std::vector<Eigen::Vector4d> seeds = {
          {1.0, 3.5, vx, vy0},
          {1.0, 5.5, vx, vy1},
          {0.8, 1.2, vx, 0.0},
          {1.0, 7.8, vx, 0.0},
          {1.2, 9.0, vx, 0.0},
      };
      for (int i = 0; i < s.n_targets; ++i) {
        Eigen::Vector4d x = seeds[static_cast<std::size_t>(i % 5)];
        if (i >= 5) x[1] = 0.6 + 0.5 * i;  // extra lanes beyond the default 5
        x[0] += x[2] * td;
        x[1] += x[3] * td;
        truth.push_back(x);
      }
      break;
    }
    case ScenarioKind::clutter: {
      const double vx = 0.28;
      for (int i = 0; i < s.n_targets; ++i) {
        const double y = s.region * (i + 1) / (s.n_targets + 1);
        truth.push_back({0.9 + vx * td, y, vx, 0.0});
      }
      break;
    }
    case ScenarioKind::swarm: {
      const double radius = 0.3 * s.region;
      const double omega = 0.08;
      const double cx = 0.5 * s.region, cy = 0.5 * s.region;
      for (int i = 0; i < s.n_targets; ++i) {
        const double phase = 2.0 * M_PI * i / s.n_targets + omega * td;
        truth.push_back({cx + radius * std::cos(phase),
                         cy + radius * std::sin(phase),
                         -radius * omega * std::sin(phase),
                         radius * omega * std::cos(phase)});
      }
      break;
    }
  }
  return truth;
}

std::vector<Measurement> generate_frame(const Scenario& s, int t, Rng& rng) {
  if (t >= s.n_steps) throw std::invalid_argument("frame index beyond scenario");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::poisson_distribution<int> poisson(s.clutter_rate);

  const Eigen::Matrix2d r =
      s.meas_noise_std * s.meas_noise_std * Eigen::Matrix2d::Identity();
  std::vector<Measurement> meas;
  for (const Eigen::Vector4d& x : ground_truth(s, t)) {
    const bool detected = unif(rng) < s.p_detect;
    const double nx = gauss(rng), ny = gauss(rng);
    if (!detected) continue;
    Measurement m;
    m.z << x[0] + s.meas_noise_std * nx, x[1] + s.meas_noise_std * ny;
    m.R = r;
    meas.push_back(m);
  }
  const int n_clutter = s.clutter_rate > 0 ? poisson(rng) : 0;
  for (int i = 0; i < n_clutter; ++i) {
    Measurement m;
    m.z << s.region * unif(rng), s.region * unif(rng);
    m.R = r;
    meas.push_back(m);
  }
  return meas;
}

int TrackerState::confirmed_count() const {
  int c = 0;
  for (const auto& t : tracks)
    if (t.confirmed) ++c;
  return c;
}

TrackerState make_tracker(const Scenario& s) {
  TrackerState tracker;
  int id = 0;
  for (const Eigen::Vector4d& x : ground_truth(s, 0)) {
    TrackRecord rec;
    rec.kf.x = x;
    rec.kf.P = Eigen::Vector4d(0.1, 0.1, 0.05, 0.05).asDiagonal();
    rec.id = id++;
    tracker.tracks.push_back(rec);
  }
  return tracker;
}

CostMatrix build_frame_cost(const TrackerState& tracker,
                            const std::vector<Measurement>& measurements) {
  std::vector<Track> predicted;
  predicted.reserve(tracker.tracks.size());
  const auto F = constant_velocity_f();
  const auto Q = velocity_process_noise();
  for (const auto& rec : tracker.tracks)
    predicted.push_back(kalman_predict(rec.kf, F, Q));
  return build_cost_matrix(predicted, measurements);
}

StepEvents step(TrackerState& tracker, const std::vector<Measurement>& meas,
                const AssignmentSolver& solver, int t) {
  const auto F = constant_velocity_f();
  const auto Q = velocity_process_noise();
  const auto H = position_observation_h();

  for (auto& rec : tracker.tracks) rec.kf = kalman_predict(rec.kf, F, Q);

  std::vector<Track> predicted;
  predicted.reserve(tracker.tracks.size());
  for (const auto& rec : tracker.tracks) predicted.push_back(rec.kf);
  const CostMatrix cost = build_cost_matrix(predicted, meas);
  const Assignment assignment = solver(cost);

  StepEvents ev;
  ev.t = t;
  ev.n_measurements = static_cast<int>(meas.size());
  ev.n_assigned = static_cast<int>(assignment.pairs.size());
  ev.objective = assignment.objective;

  std::vector<char> hit(tracker.tracks.size(), 0);
  for (const auto& [i, j] : assignment.pairs) {
    auto& rec = tracker.tracks[static_cast<std::size_t>(i)];
    rec.kf = kalman_update(rec.kf, meas[static_cast<std::size_t>(j)], H);
    rec.consecutive_misses = 0;
    if (++rec.consecutive_hits >= 3) rec.confirmed = true;
    hit[static_cast<std::size_t>(i)] = 1;
  }

  std::vector<TrackRecord> survivors;
  for (std::size_t i = 0; i < tracker.tracks.size(); ++i) {
    auto& rec = tracker.tracks[i];
    if (hit[i]) {
      survivors.push_back(rec);
      continue;
    }
    ++ev.md_events;
    rec.consecutive_hits = 0;
    // coast a confirmed track through up to 2 missed frames
    if (++rec.consecutive_misses <= 2) survivors.push_back(rec);
  }
  tracker.tracks = std::move(survivors);

  ev.fa_events = static_cast<int>(assignment.false_alarms.size());
  tracker.md_total += ev.md_events;
  tracker.fa_total += ev.fa_events;
  tracker.history.push_back(ev);
  return ev;
}

ScenarioResult run_scenario(const Scenario& s, const AssignmentSolver& solver) {
  TrackerState tracker = make_tracker(s);
  ScenarioResult result;
  result.n_targets = s.n_targets;
  double total_ms = 0;
  for (int t = 0; t < s.n_steps; ++t) {
    Rng frame_rng = make_rng(s.seed, static_cast<std::uint64_t>(t));
    const auto meas = generate_frame(s, t, frame_rng);
    const auto start = std::chrono::steady_clock::now();
    result.steps.push_back(step(tracker, meas, solver, t));
    const auto stop = std::chrono::steady_clock::now();
    total_ms += std::chrono::duration<double, std::milli>(stop - start).count();
  }
  result.confirmed_tracks = tracker.confirmed_count();
  result.md = tracker.md_total;
  result.fa = tracker.fa_total;
  result.mean_step_ms = s.n_steps > 0 ? total_ms / s.n_steps : 0.0;
  return result;
}

}  // namespace qauto
