#include "qauto/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qauto {

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };

  std::vector<Eigen::VectorXd> pts;
  std::vector<double> vals;
  pts.push_back(x0);
  vals.push_back(eval(x0));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd p = x0;
    p[i] += (x0[i] != 0.0) ? opts.initial_step * std::abs(x0[i])
                           : opts.initial_step;
    pts.push_back(p);
    vals.push_back(eval(p));
  }

  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  auto sort_simplex = [&]() {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[static_cast<std::size_t>(a)] <
                                                vals[static_cast<std::size_t>(b)]; });
  };
  sort_simplex();

  while (evals < opts.max_evaluations) {
    const int best = order[0];
    const int worst = order[static_cast<std::size_t>(n)];
    const int second_worst = order[static_cast<std::size_t>(n - 1)];

    if (std::abs(vals[static_cast<std::size_t>(worst)] -
                 vals[static_cast<std::size_t>(best)]) < opts.ftol)
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (order[static_cast<std::size_t>(i)] != worst)
        centroid += pts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    centroid /= n;

    double spread = 0;
    for (int i = 1; i <= n; ++i)
      spread = std::max(
          spread, (pts[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] -
                   pts[static_cast<std::size_t>(best)])
                      .cwiseAbs()
                      .maxCoeff());
    if (spread < opts.xtol) break;

    const Eigen::VectorXd reflected =
        centroid + alpha * (centroid - pts[static_cast<std::size_t>(worst)]);
    const double fr = eval(reflected);

    if (fr < vals[static_cast<std::size_t>(best)]) {
      const Eigen::VectorXd expanded =
          centroid + gamma * (reflected - centroid);
      const double fe =
          (evals < opts.max_evaluations) ? eval(expanded) : fr + 1.0;
      if (fe < fr) {
        pts[static_cast<std::size_t>(worst)] = expanded;
        vals[static_cast<std::size_t>(worst)] = fe;
      } else {
        pts[static_cast<std::size_t>(worst)] = reflected;
        vals[static_cast<std::size_t>(worst)] = fr;
      }
    } else if (fr < vals[static_cast<std::size_t>(second_worst)]) {
      pts[static_cast<std::size_t>(worst)] = reflected;
      vals[static_cast<std::size_t>(worst)] = fr;
    } else {
      const Eigen::VectorXd contracted =
          centroid + rho * (pts[static_cast<std::size_t>(worst)] - centroid);
      const double fc =
          (evals < opts.max_evaluations)
              ? eval(contracted)
              : vals[static_cast<std::size_t>(worst)] + 1.0;
      if (fc < vals[static_cast<std::size_t>(worst)]) {
        pts[static_cast<std::size_t>(worst)] = contracted;
        vals[static_cast<std::size_t>(worst)] = fc;
      } else {
        // shrink toward the best vertex
        for (int i = 1; i <= n && evals < opts.max_evaluations; ++i) {
          const int idx = order[static_cast<std::size_t>(i)];
          pts[static_cast<std::size_t>(idx)] =
              pts[static_cast<std::size_t>(best)] +
              sigma * (pts[static_cast<std::size_t>(idx)] -
                       pts[static_cast<std::size_t>(best)]);
          vals[static_cast<std::size_t>(idx)] =
              eval(pts[static_cast<std::size_t>(idx)]);
        }
      }
    }
    sort_simplex();
  }

  sort_simplex();
  NelderMeadResult out;
  out.x = pts[static_cast<std::size_t>(order[0])];
  out.value = vals[static_cast<std::size_t>(order[0])];
  out.evaluations = evals;
  return out;
}

}  // namespace qauto
