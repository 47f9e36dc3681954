#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "netchoice/bhhh.hpp"
#include "netchoice/choice_data.hpp"
#include "netchoice/fit_result.hpp"
#include "netchoice/logit.hpp"
#include "netchoice/random.hpp"

namespace netchoice {

// Conditional choice probabilities at a fixed coefficient draw. Same kernel as
// the MNL probabilities; the two agree bitwise for identical inputs.
Eigen::VectorXd rc_conditional_prob(const Eigen::VectorXd& beta_n,
                                    const ChoiceSituation& situation);

// Probability of a whole sequence at a fixed draw: the product over situations
// of the chosen-alternative probabilities. Computed in log space.
double sequence_log_prob(const Eigen::VectorXd& beta_n, const ChoiceSequence& seq);
double sequence_prob(const Eigen::VectorXd& beta_n, const ChoiceSequence& seq);

// Monte-Carlo estimate of the unconditional sequence probability: the mean of
// the conditional probability over the rows of `draws`.
double simulated_seq_prob(const MixingSpec& spec, const ThetaVector& theta,
                          const ChoiceSequence& seq, const DrawMatrix& draws);

struct RcOptions {
  int n_draws = 100;
  DrawScheme scheme = DrawScheme::Pseudo;
  std::uint64_t seed = 0;
  int halton_skip = 100;
  OptimOptions optim;
};

// Simulated log-likelihood sum_n ln P_n(theta) with per-sequence draw streams
// derived from (seed, chooser ordinal). Deterministic at any thread count.
double rc_simulated_loglik(const Dataset& data, const MixingSpec& spec,
                           const ThetaVector& theta, const RcOptions& opts);

// Maximum simulated likelihood. Base draws are fixed per sequence for the
// whole optimization (common random numbers); theta enters only through the
// coefficient transform, so the objective is smooth and deterministic. Means
// warm-start from an MNL fit unless `init` is given.
FitResult fit_rc(const Dataset& data, const MixingSpec& spec, const RcOptions& opts = {},
                 const std::optional<ThetaVector>& init = std::nullopt);

namespace reference {
// Serial straight-loop simulated log-likelihood, the parallel path's oracle.
double rc_simulated_loglik(const Dataset& data, const MixingSpec& spec,
                           const ThetaVector& theta, const RcOptions& opts);
}  // namespace reference

}  // namespace netchoice
