#include "qauto/biqae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qauto {

namespace {

Eigen::VectorXd theta_grid(int n) {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  // strictly inside (0, pi/2) so sin^2 stays in (0, 1)
  Eigen::VectorXd g(n);
  const double step = (M_PI / 2.0) / (n + 1);
  for (int i = 0; i < n; ++i) g[i] = step * (i + 1);
  return g;
}

}  // namespace

AmplitudePosterior uniform_amplitude_prior(int grid_points) {
  AmplitudePosterior p;
  p.theta = theta_grid(grid_points);
  p.density = Eigen::VectorXd::Constant(grid_points, 1.0 / grid_points);
  return p;
}

AmplitudePosterior gaussian_amplitude_prior(const GaussianPrior& prior,
                                            int grid_points) {
  if (prior.std <= 0) throw std::invalid_argument("prior std must be > 0");
  AmplitudePosterior p;
  p.theta = theta_grid(grid_points);
  p.density.resize(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double a = std::sin(p.theta[i]) * std::sin(p.theta[i]);
    const double z = (a - prior.mean) / prior.std;
    p.density[i] = std::exp(-0.5 * z * z);
  }
  const double total = p.density.sum();
  if (total <= 0) throw std::invalid_argument("degenerate Gaussian prior");
  p.density /= total;
  return p;
}

AmplitudePosterior update_posterior(const AmplitudePosterior& post, int k,
                                    std::int64_t successes,
                                    std::int64_t shots) {
  if (successes < 0 || shots < 1 || successes > shots)
    throw std::invalid_argument("need 0 <= successes <= shots, shots >= 1");
  const Eigen::Index n = post.theta.size();
  Eigen::VectorXd log_w(n);
  const double m = static_cast<double>(successes);
  const double rest = static_cast<double>(shots - successes);
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = std::sin((2.0 * k + 1.0) * post.theta[i]);
    const double s2 = std::min(1.0, s * s);
    const double prior_w = post.density[i];
    if (prior_w <= 0) {
      log_w[i] = neg_inf;
      continue;
    }
    double lw = std::log(prior_w);
    if (m > 0) lw += (s2 > 0) ? m * std::log(s2) : neg_inf;
    if (rest > 0) lw += (s2 < 1) ? rest * std::log1p(-s2) : neg_inf;
    log_w[i] = lw;
  }
  const double peak = log_w.maxCoeff();
  if (!std::isfinite(peak))
    throw posterior_underflow_error(
        "posterior vanished on the whole grid; widen the grid or prior");
  AmplitudePosterior out;
  out.theta = post.theta;
  out.density = (log_w.array() - peak).exp();
  out.density /= out.density.sum();
  return out;
}

HpdInterval hpd_interval(const AmplitudePosterior& post, double mass) {
  if (!(mass > 0.0 && mass < 1.0))
    throw std::invalid_argument("credible mass must lie in (0, 1)");
  const Eigen::Index n = post.density.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return post.density[a] > post.density[b];
                   });
  std::vector<char> included(static_cast<std::size_t>(n), 0);
  double acc = 0;
  Eigen::Index lo_idx = n, hi_idx = -1;
  for (Eigen::Index idx : order) {
    included[static_cast<std::size_t>(idx)] = 1;
    acc += post.density[idx];
    lo_idx = std::min(lo_idx, idx);
    hi_idx = std::max(hi_idx, idx);
    if (acc >= mass) break;
  }
  bool contiguous = true;
  for (Eigen::Index i = lo_idx; i <= hi_idx; ++i)
    if (!included[static_cast<std::size_t>(i)]) {
      contiguous = false;
      break;
    }
  HpdInterval out;
  // each grid point stands for a theta cell of one grid step
  const double half_step =
      post.theta.size() > 1 ? 0.5 * (post.theta[1] - post.theta[0]) : 0.0;
  const auto a_of = [](double theta) {
    const double s = std::sin(std::clamp(theta, 0.0, M_PI / 2.0));
    return s * s;
  };
  out.lo = a_of(post.theta[lo_idx] - half_step);
  out.hi = a_of(post.theta[hi_idx] + half_step);
  out.multimodal = !contiguous;
  return out;
}

void BiqaeConfig::validate() const {
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (schedule_base < 1)
    throw std::invalid_argument("schedule base must be >= 1");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(credible_mass > 0 && credible_mass < 1))
    throw std::invalid_argument("credible mass must lie in (0, 1)");
  if (grid_points < 16)
    throw std::invalid_argument("grid too coarse");
}

AmplitudeOracle ry_oracle(double a) {
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("amplitude must lie in [0, 1]");
  Circuit c(1);
  c.append(gate::ry(0, 2.0 * std::asin(std::sqrt(a))));
  return {c, {0}, 1};
}

AmplitudeOracle ry_product_oracle(double a) {
  if (!(a >= 0.0 && a <= 1.0))
    throw std::invalid_argument("amplitude must lie in [0, 1]");
  const double factor = std::sqrt(a);
  Circuit c(2);
  c.append(gate::ry(0, 2.0 * std::asin(std::sqrt(factor))));
  c.append(gate::ry(1, 2.0 * std::asin(std::sqrt(factor))));
  return {c, {0, 1}, 3};
}

BiqaeResult estimate(const AmplitudeOracle& oracle, const BiqaeConfig& cfg,
                     const NoiseModel& noise, Rng& rng) {
  cfg.validate();
  BiqaeResult result;
  result.posterior = cfg.prior
                         ? gaussian_amplitude_prior(*cfg.prior, cfg.grid_points)
                         : uniform_amplitude_prior(cfg.grid_points);

  std::vector<int> schedule;
  if (!cfg.prior && cfg.calibration_round) schedule.push_back(0);
  int k = 1;
  for (int t = 0; t < cfg.max_iterations; ++t) {
    schedule.push_back(k);
    k *= cfg.schedule_base;
  }

  const GroverSetup grover = oracle.grover();
  for (int kt : schedule) {
    const Circuit circuit = grover.amplified_circuit(kt);
    std::int64_t marked = 0;
    if (noise.is_noiseless()) {
      const double p = marked_probability(grover, run(circuit));
      std::binomial_distribution<std::int64_t> bin(cfg.shots,
                                                   std::clamp(p, 0.0, 1.0));
      marked = bin(rng);
    } else {
      const Histogram counts = run_noisy(circuit, noise, cfg.shots, rng);
      for (const auto& [x, c] : counts)
        if (detail::controls_match(x, oracle.marked_qubits,
                                   oracle.marked_pattern))
          marked += c;
    }
    result.posterior = update_posterior(result.posterior, kt, marked,
                                        cfg.shots);
    result.oracle_queries += (2ll * kt + 1ll) * cfg.shots;
    ++result.iterations;
    result.schedule.push_back(kt);
    const HpdInterval ci = hpd_interval(result.posterior, cfg.credible_mass);
    if (ci.hi - ci.lo < cfg.epsilon) break;
  }
  result.interval = hpd_interval(result.posterior, cfg.credible_mass);
  result.a_hat = result.posterior.amplitude_mean();
  return result;
}

}  // namespace qauto
