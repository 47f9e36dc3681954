#include "netchoice/mixed_logit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "netchoice/math_util.hpp"

namespace netchoice {

Eigen::VectorXd rc_conditional_prob(const Eigen::VectorXd& beta_n,
                                    const ChoiceSituation& situation) {
  return mnl_choice_prob(beta_n, situation);
}

double sequence_log_prob(const Eigen::VectorXd& beta_n, const ChoiceSequence& seq) {
  if (seq.situations.empty()) throw std::invalid_argument("sequence_log_prob: empty sequence");
  double ll = 0.0;
  for (const auto& sit : seq.situations) {
    const int j = static_cast<int>(sit.alternatives.size());
    Eigen::MatrixXd x(j, beta_n.size());
    for (int a = 0; a < j; ++a)
      for (Eigen::Index c = 0; c < beta_n.size(); ++c)
        x(a, c) = sit.alternatives[a].covariates[c];
    ll += situation_log_prob(x, sit.chosen_index, beta_n);
  }
  return ll;
}

double sequence_prob(const Eigen::VectorXd& beta_n, const ChoiceSequence& seq) {
  return std::exp(sequence_log_prob(beta_n, seq));
}

double simulated_seq_prob(const MixingSpec& spec, const ThetaVector& theta,
                          const ChoiceSequence& seq, const DrawMatrix& draws) {
  theta.check_dimensions(spec);
  if (draws.draws.cols() != spec.n_coefficients())
    throw std::invalid_argument("simulated_seq_prob: draw matrix has wrong width");
  const int r = static_cast<int>(draws.draws.rows());
  std::vector<double> logs(r);
  for (int i = 0; i < r; ++i)
    logs[i] = sequence_log_prob(draws.draws.row(i).transpose(), seq);
  return std::exp(log_mean_exp(logs));
}

namespace {

// Packed-theta layout: [means | scales | corr factors].
struct ParamLayout {
  int n_coefs = 0;
  int n_scales = 0;

  int mean(int coef) const { return coef; }
  int scale(int scale_idx) const { return n_coefs + scale_idx; }
  int corr(int offset) const { return n_coefs + n_scales + offset; }
};

struct RcSeqEval {
  double ll = 0.0;
  Eigen::VectorXd grad;
};

// Simulated log-probability of one sequence and, when requested, its gradient
// in packed theta. `base` holds the sequence's fixed base draws (R x K).
RcSeqEval rc_sequence_eval(const SequenceView& seq, const Eigen::MatrixXd& base,
                           const MixingSpec& spec, const ThetaVector& theta,
                           bool need_score) {
  const int r = static_cast<int>(base.rows());
  const int k = spec.n_coefficients();
  const ParamLayout layout{k, spec.n_scales()};
  const int p = spec.n_parameters();
  const auto block = spec.normal_block_coefs();

  const Eigen::MatrixXd coef = transform_draws(spec, theta, base);

  std::vector<double> logs(r);
  Eigen::MatrixXd beta_scores;  // K x R, filled only when scoring
  if (need_score) beta_scores = Eigen::MatrixXd::Zero(k, r);

  Eigen::VectorXd beta(k), score(k);
  for (int d = 0; d < r; ++d) {
    beta = coef.row(d).transpose();
    double ls = 0.0;
    if (need_score) {
      score.setZero();
      for (const auto& sit : seq.situations)
        ls += situation_log_prob_score(sit.x, sit.chosen, beta, score);
      beta_scores.col(d) = score;
    } else {
      for (const auto& sit : seq.situations)
        ls += situation_log_prob(sit.x, sit.chosen, beta);
    }
    logs[d] = ls;
  }

  // log of the draw mean, and softmax weights over draws for the gradient.
  const double m = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - m);

  RcSeqEval out;
  out.ll = m + std::log(sum / static_cast<double>(r));
  if (!need_score) return out;

  out.grad = Eigen::VectorXd::Zero(p);
  for (int d = 0; d < r; ++d) {
    const double w = std::exp(logs[d] - m) / sum;
    for (int c = 0; c < k; ++c) {
      const double sb = w * beta_scores(c, d);
      const Family f = spec.coefficients[c].family;
      switch (f) {
        case Family::Fixed:
          out.grad[layout.mean(c)] += sb;
          break;
        case Family::Normal:
        case Family::LogNormal: {
          const double fac = f == Family::LogNormal ? coef(d, c) : 1.0;
          out.grad[layout.mean(c)] += sb * fac;
          const int b = spec.normal_block_index(c);
          out.grad[layout.scale(spec.scale_index(c))] += sb * fac * base(d, block[b]);
          if (spec.correlated)
            for (int col = 0; col < b; ++col)
              out.grad[layout.corr(corr_factor_offset(b, col))] +=
                  sb * fac * base(d, block[col]);
          break;
        }
        case Family::Uniform:
          out.grad[layout.mean(c)] += sb;
          out.grad[layout.scale(spec.scale_index(c))] += sb * (2.0 * base(d, c) - 1.0);
          break;
        case Family::Triangular:
          out.grad[layout.mean(c)] += sb;
          out.grad[layout.scale(spec.scale_index(c))] += sb * triangular_icdf(base(d, c));
          break;
      }
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> make_base_draws(const MixingSpec& spec, int n_sequences,
                                             const RcOptions& opts) {
  std::vector<Eigen::MatrixXd> base(n_sequences);
  const RandomStream master(opts.seed);
  for (int n = 0; n < n_sequences; ++n) {
    if (opts.scheme == DrawScheme::Pseudo)
      base[n] = base_draws_pseudo(spec, opts.n_draws, master.derive(n));
    else
      base[n] = base_draws_halton(spec, opts.n_draws, n * opts.n_draws, opts.halton_skip);
  }
  return base;
}

struct RcEvalFull {
  double ll = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd opg;
};

RcEvalFull rc_eval(const DatasetView& view, const std::vector<Eigen::MatrixXd>& base,
                   const MixingSpec& spec, const ThetaVector& theta, bool need_scores,
                   const Dataset* data_for_ids) {
  const int n = static_cast<int>(view.sequences.size());
  const int p = spec.n_parameters();
  std::vector<double> lls(n);
  Eigen::MatrixXd grads;
  if (need_scores) grads.resize(n, p);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    RcSeqEval e = rc_sequence_eval(view.sequences[i], base[i], spec, theta, need_scores);
    lls[i] = e.ll;
    if (need_scores) grads.row(i) = e.grad.transpose();
  }

  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(lls[i])) {
      const std::string id =
          data_for_ids ? data_for_ids->sequences[i].chooser_id : std::to_string(i);
      throw std::runtime_error("simulated probability underflowed to 0 for sequence " + id);
    }
  }

  RcEvalFull out;
  out.ll = pairwise_sum(lls);
  if (need_scores) {
    Eigen::VectorXd g(p);
    std::vector<double> col(n);
    for (int c = 0; c < p; ++c) {
      for (int i = 0; i < n; ++i) col[i] = grads(i, c);
      g[c] = pairwise_sum(col);
    }
    out.grad = g;
    out.opg = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < n; ++i)
      out.opg.noalias() += grads.row(i).transpose() * grads.row(i);
  }
  return out;
}

ThetaVector default_init(const Dataset& data, const MixingSpec& spec) {
  const FitResult mnl = fit_mnl(data);
  ThetaVector init;
  init.means.resize(spec.n_coefficients());
  for (int c = 0; c < spec.n_coefficients(); ++c) {
    const double b = mnl.estimates[c];
    init.means[c] = spec.coefficients[c].family == Family::LogNormal
                        ? std::log(std::max(b, 0.01))
                        : b;
  }
  init.scales.assign(spec.n_scales(), 0.1);
  init.corr_factors.assign(spec.n_corr_factors(), 0.0);
  return init;
}

}  // namespace

double rc_simulated_loglik(const Dataset& data, const MixingSpec& spec,
                           const ThetaVector& theta, const RcOptions& opts) {
  theta.check_dimensions(spec);
  const DatasetView view = DatasetView::build(data);
  const auto base = make_base_draws(spec, static_cast<int>(view.sequences.size()), opts);
  return rc_eval(view, base, spec, theta, false, &data).ll;
}

FitResult fit_rc(const Dataset& data, const MixingSpec& spec, const RcOptions& opts,
                 const std::optional<ThetaVector>& init) {
  spec.check();
  if (spec.n_coefficients() != data.n_characteristics())
    throw std::invalid_argument("fit_rc: spec and dataset characteristic counts differ");
  if (opts.n_draws < 1) throw std::invalid_argument("fit_rc: n_draws >= 1");

  const DatasetView view = DatasetView::build(data);
  const int n = static_cast<int>(view.sequences.size());
  const auto base = make_base_draws(spec, n, opts);

  const ThetaVector start = init ? *init : default_init(data, spec);
  start.check_dimensions(spec);

  const Objective fn = [&](const Eigen::VectorXd& x, bool need_scores) {
    const ThetaVector theta = ThetaVector::unpack(x, spec);
    RcEvalFull e = rc_eval(view, base, spec, theta, need_scores, &data);
    return ObjectiveEval{e.ll, std::move(e.grad), std::move(e.opg)};
  };
  const BhhhResult opt = maximize_bhhh(fn, start.pack(), opts.optim);

  FitResult fit;
  fit.estimates = opt.x;
  fit.log_likelihood = opt.ll;
  fit.n_iterations = opt.n_iterations;
  fit.converged = opt.converged;
  fit.message = opt.message;
  fit.n_draws = opts.n_draws;
  fit.n_observations = data.sequences.size();
  fit.param_names = parameter_names(spec);
  fit.characteristics = parameter_characteristics(spec);
  fit.spec = spec;
  fit.theta = ThetaVector::unpack(opt.x, spec);

  const Eigen::Index p = opt.x.size();
  fit.covariance = Eigen::MatrixXd::Zero(p, p);
  fit.std_errors = Eigen::VectorXd::Zero(p);
  fit.p_values = Eigen::VectorXd::Ones(p);
  try {
    fit.covariance = bhhh_covariance(opt.opg);
    for (Eigen::Index i = 0; i < p; ++i) {
      fit.std_errors[i] = std::sqrt(std::max(0.0, fit.covariance(i, i)));
      fit.p_values[i] =
          fit.std_errors[i] > 0.0 ? two_sided_p(fit.estimates[i] / fit.std_errors[i]) : 1.0;
    }
  } catch (const std::runtime_error& e) {
    if (opt.converged) throw;
    fit.message += "; covariance unavailable: " + std::string(e.what());
  }
  return fit;
}

namespace reference {

double rc_simulated_loglik(const Dataset& data, const MixingSpec& spec,
                           const ThetaVector& theta, const RcOptions& opts) {
  theta.check_dimensions(spec);
  const RandomStream master(opts.seed);
  double total = 0.0;
  for (std::size_t n = 0; n < data.sequences.size(); ++n) {
    Eigen::MatrixXd base =
        opts.scheme == DrawScheme::Pseudo
            ? base_draws_pseudo(spec, opts.n_draws, master.derive(n))
            : base_draws_halton(spec, opts.n_draws, static_cast<int>(n) * opts.n_draws,
                                opts.halton_skip);
    const Eigen::MatrixXd coef = transform_draws(spec, theta, base);
    std::vector<double> logs(opts.n_draws);
    for (int d = 0; d < opts.n_draws; ++d)
      logs[d] = sequence_log_prob(coef.row(d).transpose(), data.sequences[n]);
    total += log_mean_exp(logs);
  }
  return total;
}

}  // namespace reference

}  // namespace netchoice
