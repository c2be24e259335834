#include "qauto/qaoa.hpp"

#include <cmath>

#include "qauto/measure.hpp"
#include "qauto/noise.hpp"

namespace qauto {

namespace {

double basis_function(ScheduleBasis basis, int m, double t) {
  if (basis == ScheduleBasis::polynomial) return std::pow(t, m);
  // constant plus sine harmonics
  if (m == 0) return 1.0;
  return std::sin(m * M_PI * t);
}

double eval_series(ScheduleBasis basis, const Eigen::VectorXd& coeffs,
                   double t) {
  double v = 0;
  for (int m = 0; m < coeffs.size(); ++m)
    v += coeffs[m] * basis_function(basis, m, t);
  return v;
}

}  // namespace

FpcSchedule warm_start_schedule(int k, int depth, ScheduleBasis basis) {
  if (k < 1) throw std::invalid_argument("schedule needs k >= 1 coefficients");
  FpcSchedule s;
  s.basis = basis;
  s.depth = depth;
  s.gamma_coeffs = Eigen::VectorXd::Zero(k);
  s.beta_coeffs = Eigen::VectorXd::Zero(k);
  if (basis == ScheduleBasis::polynomial) {
    if (k >= 2)
      s.gamma_coeffs[1] = M_PI;  // gamma(t) = pi t
    else
      s.gamma_coeffs[0] = M_PI / 2.0;  // best constant stand-in
    s.beta_coeffs[0] = M_PI / 4.0;
  } else {
    // sin(pi t) arch approximates the ramp's scale on (0,1)
    if (k >= 2)
      s.gamma_coeffs[1] = M_PI / 2.0;
    else
      s.gamma_coeffs[0] = M_PI / 2.0;
    s.beta_coeffs[0] = M_PI / 4.0;
  }
  return s;
}

std::vector<std::pair<double, double>> evaluate_schedule(const FpcSchedule& s) {
  if (s.depth < 1) throw std::invalid_argument("depth must be >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(s.depth));
  for (int l = 1; l <= s.depth; ++l) {
    const double t = (l - 0.5) / s.depth;  // midpoint sampling
    out.emplace_back(eval_series(s.basis, s.gamma_coeffs, t),
                     eval_series(s.basis, s.beta_coeffs, t));
  }
  return out;
}

Circuit build_qaoa_circuit(
    const IsingInstance& ising,
    const std::vector<std::pair<double, double>>& angles) {
  if (angles.empty()) throw std::invalid_argument("need at least one layer");
  const int n = ising.n_var();
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.append(gate::h(q));
  for (const auto& [gamma, beta] : angles) {
    for (int q = 0; q < n; ++q)
      if (ising.h[q] != 0.0) c.append(gate::rz(q, 2.0 * gamma * ising.h[q]));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (ising.J(a, b) != 0.0)
          c.append(gate::rzz(a, b, 2.0 * gamma * ising.J(a, b)));
    for (int q = 0; q < n; ++q) c.append(gate::rx(q, 2.0 * beta));
  }
  return c;
}

double expectation(const IsingInstance& ising,
                   const std::vector<std::pair<double, double>>& angles) {
  const StateVectord st = run(build_qaoa_circuit(ising, angles));
  const Eigen::VectorXd probs = st.probabilities();
  double e = 0;
  for (Eigen::Index x = 0; x < probs.size(); ++x)
    if (probs[x] > 0)
      e += probs[x] * ising_energy(ising, static_cast<std::uint64_t>(x));
  return e;
}

double sampled_expectation(const IsingInstance& ising,
                           const Histogram& counts) {
  return histogram_expectation(
      counts, [&](std::uint64_t x) { return ising_energy(ising, x); });
}

namespace {

FpcSchedule schedule_from_vector(const Eigen::VectorXd& v, int k, int depth,
                                 ScheduleBasis basis) {
  FpcSchedule s;
  s.basis = basis;
  s.depth = depth;
  s.gamma_coeffs = v.head(k);
  s.beta_coeffs = v.tail(k);
  return s;
}

}  // namespace

QaoaResult optimize_fpc(const QuboInstance& qubo, int k, int depth,
                        const QaoaOptimizerConfig& cfg, Rng& rng,
                        ScheduleBasis basis,
                        std::optional<double> reference_optimum) {
  const IsingInstance ising = to_ising(qubo);
  const FpcSchedule start = warm_start_schedule(k, depth, basis);
  Eigen::VectorXd x0(2 * k);
  x0.head(k) = start.gamma_coeffs;
  x0.tail(k) = start.beta_coeffs;

  auto objective = [&](const Eigen::VectorXd& v) {
    return expectation(ising,
                       evaluate_schedule(schedule_from_vector(v, k, depth, basis)));
  };

  QaoaResult result;
  result.initial_expectation = objective(x0);

  NelderMeadOptions opts;
  opts.max_evaluations = cfg.max_evaluations;
  const NelderMeadResult best = nelder_mead(objective, x0, opts);

  result.schedule = schedule_from_vector(best.x, k, depth, basis);
  result.expectation = best.value;
  result.optimizer_evaluations = best.evaluations;

  const Circuit circuit =
      build_qaoa_circuit(ising, evaluate_schedule(result.schedule));
  const StateVectord st = run(circuit);
  result.counts = sample_counts(st, cfg.shots, rng);

  std::optional<double> reference = reference_optimum;
  if (!reference && qubo.n_var <= 24)
    reference = brute_force_qubo(qubo).energy;
  result.decoded = decode_topk(result.counts, qubo, cfg.decode_top_k, reference);
  result.feasible = qubo_feasible(qubo, result.decoded.y);
  return result;
}

QaoaResult replay_schedule(const QuboInstance& qubo, const FpcSchedule& s,
                           const QaoaOptimizerConfig& cfg,
                           const NoiseModel& noise, Rng& rng,
                           std::optional<double> reference_optimum) {
  const IsingInstance ising = to_ising(qubo);
  const auto angles = evaluate_schedule(s);
  const Circuit circuit = build_qaoa_circuit(ising, angles);

  QaoaResult result;
  result.schedule = s;
  result.initial_expectation = expectation(ising, angles);
  result.counts = run_noisy(circuit, noise, cfg.shots, rng);
  result.expectation = sampled_expectation(ising, result.counts);
  result.optimizer_evaluations = 0;

  std::optional<double> reference = reference_optimum;
  if (!reference && qubo.n_var <= 24)
    reference = brute_force_qubo(qubo).energy;
  result.decoded = decode_topk(result.counts, qubo, cfg.decode_top_k, reference);
  result.feasible = qubo_feasible(qubo, result.decoded.y);
  return result;
}

std::vector<FpcSweepRow> fpc_sensitivity_sweep(
    const QuboInstance& qubo, const std::vector<int>& ks,
    const std::vector<int>& ps, const std::vector<std::uint64_t>& seeds,
    const QaoaOptimizerConfig& cfg) {
  std::vector<FpcSweepRow> rows;
  for (int k : ks) {
    for (int p : ps) {
      FpcSweepRow row;
      row.k = k;
      row.p = p;
      row.n_params = 2 * k;
      double obj = 0;
      int feasible = 0;
      for (std::uint64_t seed : seeds) {
        Rng rng = make_rng(seed);
        const QaoaResult r = optimize_fpc(qubo, k, p, cfg, rng);
        obj += r.decoded.energy;
        if (r.feasible) ++feasible;
      }
      row.mean_objective = obj / static_cast<double>(seeds.size());
      row.feasibility_pct =
          100.0 * feasible / static_cast<double>(seeds.size());
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace qauto
