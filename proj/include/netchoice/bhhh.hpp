#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace netchoice {

struct OptimOptions {
  double grad_tol = 1e-6;
  double ll_rel_tol = 1e-9;
  int max_iter = 200;
  double separation_threshold = 50.0;
};

// One objective evaluation. `opg` is the outer product of per-observation
// score vectors, the BHHH curvature proxy; it is only needed when
// `need_scores` was set.
struct ObjectiveEval {
  double ll = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd opg;
};

using Objective = std::function<ObjectiveEval(const Eigen::VectorXd&, bool need_scores)>;

struct BhhhResult {
  Eigen::VectorXd x;
  double ll = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd opg;
  int n_iterations = 0;
  bool converged = false;
  std::string message;
};

// BHHH ascent with backtracking (halving) line search, Armijo constant 1e-4.
// Falls back to the gradient direction when the BHHH direction is not an
// ascent direction. Stops non-converged when any coordinate magnitude crosses
// `separation_threshold` (perfect-separation guard) or after max_iter.
BhhhResult maximize_bhhh(const Objective& fn, const Eigen::VectorXd& x0,
                         const OptimOptions& opts);

// Inverse of the OPG matrix at the optimum, the BHHH covariance estimate.
// Throws std::runtime_error with a condition-number diagnostic when the OPG
// is numerically singular.
Eigen::MatrixXd bhhh_covariance(const Eigen::MatrixXd& opg);

}  // namespace netchoice
