#include "netchoice/bhhh.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace netchoice {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;

bool exceeds(const Eigen::VectorXd& x, double threshold) {
  return x.cwiseAbs().maxCoeff() > threshold;
}

}  // namespace

BhhhResult maximize_bhhh(const Objective& fn, const Eigen::VectorXd& x0,
                         const OptimOptions& opts) {
  BhhhResult res;
  res.x = x0;
  ObjectiveEval cur = fn(res.x, true);
  res.ll = cur.ll;
  if (!std::isfinite(cur.ll)) throw std::runtime_error("objective not finite at start");

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    res.n_iterations = iter;
    if (cur.grad.cwiseAbs().maxCoeff() < opts.grad_tol) {
      res.converged = true;
      res.message = "gradient tolerance reached";
      break;
    }
    if (exceeds(res.x, opts.separation_threshold)) {
      res.converged = false;
      res.message = "coefficient magnitude exceeded " +
                    std::to_string(opts.separation_threshold) +
                    " (possible perfect separation)";
      break;
    }

    // BHHH direction; gradient ascent if the OPG solve is unusable.
    Eigen::VectorXd dir;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cur.opg);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive())
      dir = ldlt.solve(cur.grad);
    if (dir.size() == 0 || !dir.allFinite() || dir.dot(cur.grad) <= 0.0) dir = cur.grad;

    const double slope = dir.dot(cur.grad);
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double ll_new = 0.0;
    while (step > kMinStep) {
      x_new = res.x + step * dir;
      ll_new = fn(x_new, false).ll;
      if (std::isfinite(ll_new) && ll_new >= cur.ll + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = false;
      res.message = "line search failed";
      break;
    }

    const double improvement = ll_new - cur.ll;
    res.x = x_new;
    cur = fn(res.x, true);
    res.ll = cur.ll;
    res.n_iterations = iter + 1;

    if (improvement < opts.ll_rel_tol * (std::abs(cur.ll) + 1.0)) {
      res.converged = true;
      res.message = "log-likelihood improvement below tolerance";
      break;
    }
    if (iter + 1 == opts.max_iter) {
      res.converged = false;
      res.message = "max iterations reached";
    }
  }
  if (res.message.empty()) {
    // Loop never entered a stopping branch (max_iter == 0 edge case).
    res.converged = cur.grad.size() > 0 && cur.grad.cwiseAbs().maxCoeff() < opts.grad_tol;
    res.message = res.converged ? "gradient tolerance reached" : "max iterations reached";
  }
  res.grad = cur.grad;
  res.opg = cur.opg;
  return res;
}

Eigen::MatrixXd bhhh_covariance(const Eigen::MatrixXd& opg) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(opg, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(smin > 0.0) || cond > 1e12)
    throw std::runtime_error(
        "outer-product matrix is numerically singular (condition number " +
        std::to_string(cond) + ")");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(opg);
  return ldlt.solve(Eigen::MatrixXd::Identity(opg.rows(), opg.cols()));
}

}  // namespace netchoice
