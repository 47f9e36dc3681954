#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "netchoice/mixing.hpp"

namespace netchoice {

// Estimates plus full inference output from either estimator. For the mixed
// logit, `spec` and `theta` carry the structured view of `estimates`;
// std_errors are the square roots of the covariance diagonal and p-values are
// two-sided asymptotic z-tests.
struct FitResult {
  std::vector<std::string> param_names;
  std::vector<std::string> characteristics;
  Eigen::VectorXd estimates;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd p_values;
  double log_likelihood = 0.0;
  int n_iterations = 0;
  bool converged = false;
  int n_draws = 0;  // 0 for the multinomial logit
  std::size_t n_observations = 0;
  std::string message;

  std::optional<MixingSpec> spec;
  std::optional<ThetaVector> theta;

  int n_parameters() const { return static_cast<int>(estimates.size()); }
};

}  // namespace netchoice
