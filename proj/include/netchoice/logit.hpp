#pragma once

#include <Eigen/Core>

#include "netchoice/bhhh.hpp"
#include "netchoice/choice_data.hpp"
#include "netchoice/fit_result.hpp"

namespace netchoice {

// Softmax choice probabilities for one situation, max-subtracted for overflow
// safety. Rows of x are alternatives.
Eigen::VectorXd choice_prob(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta);

// Public-contract variant on the domain type; checks inputs.
Eigen::VectorXd mnl_choice_prob(const Eigen::VectorXd& beta, const ChoiceSituation& situation);

// log P(chosen) for one situation. The score overload also accumulates the
// per-situation score x_chosen - sum_j P_j x_j into `score`.
double situation_log_prob(const Eigen::MatrixXd& x, int chosen, const Eigen::VectorXd& beta);
double situation_log_prob_score(const Eigen::MatrixXd& x, int chosen,
                                const Eigen::VectorXd& beta, Eigen::VectorXd& score);

struct LogLikEval {
  double ll = 0.0;
  Eigen::VectorXd grad;
};

// Exact MNL log-likelihood and analytic gradient. Parallel over sequences with
// a fixed-order reduction: results are bitwise identical at any thread count.
LogLikEval mnl_log_likelihood(const Eigen::VectorXd& beta, const Dataset& data);
LogLikEval mnl_log_likelihood(const Eigen::VectorXd& beta, const DatasetView& view);

// Analytic Hessian (negative semidefinite everywhere).
Eigen::MatrixXd mnl_hessian(const Eigen::VectorXd& beta, const DatasetView& view);

// BHHH maximization from `init` (zero vector by default). The OPG uses
// per-situation scores.
FitResult fit_mnl(const Dataset& data, const Eigen::VectorXd& init,
                  const OptimOptions& opts = {});
FitResult fit_mnl(const Dataset& data, const OptimOptions& opts = {});

namespace reference {
// Serial straight-loop implementation kept as the parallel kernel's oracle.
LogLikEval mnl_log_likelihood(const Eigen::VectorXd& beta, const DatasetView& view);
}  // namespace reference

}  // namespace netchoice
