#pragma once

#include <Eigen/Dense>
#include <functional>

namespace qauto {

struct NelderMeadOptions {
  int max_evaluations = 200;
  double initial_step = 0.25;
  double xtol = 1e-8;
  double ftol = 1e-10;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

/// Bounded-budget Nelder-Mead simplex minimization. Gradient-free and
/// deterministic for a fixed starting point; never returns a point worse
/// than the start.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const NelderMeadOptions& opts = {});

}  // namespace qauto
