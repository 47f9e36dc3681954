#include "netchoice/logit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "netchoice/math_util.hpp"

namespace netchoice {

Eigen::VectorXd choice_prob(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
  Eigen::VectorXd u = x * beta;
  const double m = u.maxCoeff();
  Eigen::VectorXd p = (u.array() - m).exp();
  return p / p.sum();
}

Eigen::VectorXd mnl_choice_prob(const Eigen::VectorXd& beta, const ChoiceSituation& situation) {
  if (!beta.allFinite()) throw std::invalid_argument("mnl_choice_prob: beta must be finite");
  const int j = static_cast<int>(situation.alternatives.size());
  if (j == 0) throw std::invalid_argument("mnl_choice_prob: empty alternative set");
  Eigen::MatrixXd x(j, beta.size());
  for (int a = 0; a < j; ++a) {
    const auto& cov = situation.alternatives[a].covariates;
    if (static_cast<Eigen::Index>(cov.size()) != beta.size())
      throw std::invalid_argument("mnl_choice_prob: covariate length mismatch");
    for (Eigen::Index c = 0; c < beta.size(); ++c) {
      if (!std::isfinite(cov[c]))
        throw std::invalid_argument("mnl_choice_prob: non-finite covariate");
      x(a, c) = cov[c];
    }
  }
  return choice_prob(x, beta);
}

// Both kernel variants accumulate the denominator with the same scalar loop so
// they agree bit-for-bit; the all-Fixed mixed logit must reproduce the MNL
// log-likelihood exactly.
double situation_log_prob(const Eigen::MatrixXd& x, int chosen, const Eigen::VectorXd& beta) {
  Eigen::VectorXd u = x * beta;
  const double m = u.maxCoeff();
  double denom = 0.0;
  for (Eigen::Index a = 0; a < u.size(); ++a) denom += std::exp(u[a] - m);
  return u[chosen] - m - std::log(denom);
}

double situation_log_prob_score(const Eigen::MatrixXd& x, int chosen,
                                const Eigen::VectorXd& beta, Eigen::VectorXd& score) {
  Eigen::VectorXd u = x * beta;
  const double m = u.maxCoeff();
  Eigen::VectorXd e(u.size());
  double denom = 0.0;
  for (Eigen::Index a = 0; a < u.size(); ++a) {
    e[a] = std::exp(u[a] - m);
    denom += e[a];
  }
  score.noalias() += x.row(chosen).transpose();
  score.noalias() -= x.transpose() * (e / denom);
  return u[chosen] - m - std::log(denom);
}

namespace {

// Per-sequence contribution: log-likelihood, gradient, and the per-situation
// outer-product partial sum (the MNL observation unit is the situation).
struct SeqContribution {
  double ll = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd opg;
};

SeqContribution mnl_sequence_eval(const SequenceView& seq, const Eigen::VectorXd& beta,
                                  bool need_opg) {
  const Eigen::Index p = beta.size();
  SeqContribution out;
  out.grad = Eigen::VectorXd::Zero(p);
  if (need_opg) out.opg = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd g_t(p);
  for (const auto& sit : seq.situations) {
    g_t.setZero();
    out.ll += situation_log_prob_score(sit.x, sit.chosen, beta, g_t);
    out.grad += g_t;
    if (need_opg) out.opg.noalias() += g_t * g_t.transpose();
  }
  return out;
}

Eigen::VectorXd pairwise_sum_rows(const Eigen::MatrixXd& rows) {
  Eigen::VectorXd out(rows.cols());
  std::vector<double> col(rows.rows());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) col[r] = rows(r, c);
    out[c] = pairwise_sum(col);
  }
  return out;
}

struct MnlEvalFull {
  double ll = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd opg;
};

MnlEvalFull mnl_eval(const Eigen::VectorXd& beta, const DatasetView& view, bool need_opg) {
  const int n = static_cast<int>(view.sequences.size());
  const Eigen::Index p = beta.size();
  std::vector<double> lls(n);
  Eigen::MatrixXd grads(n, p);
  std::vector<Eigen::MatrixXd> opgs;
  if (need_opg) opgs.resize(n);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    SeqContribution c = mnl_sequence_eval(view.sequences[i], beta, need_opg);
    lls[i] = c.ll;
    grads.row(i) = c.grad.transpose();
    if (need_opg) opgs[i] = std::move(c.opg);
  }

  MnlEvalFull out;
  out.ll = pairwise_sum(lls);
  out.grad = pairwise_sum_rows(grads);
  if (need_opg) {
    out.opg = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < n; ++i) out.opg += opgs[i];
  }
  return out;
}

}  // namespace

LogLikEval mnl_log_likelihood(const Eigen::VectorXd& beta, const DatasetView& view) {
  MnlEvalFull e = mnl_eval(beta, view, false);
  return {e.ll, std::move(e.grad)};
}

LogLikEval mnl_log_likelihood(const Eigen::VectorXd& beta, const Dataset& data) {
  return mnl_log_likelihood(beta, DatasetView::build(data));
}

Eigen::MatrixXd mnl_hessian(const Eigen::VectorXd& beta, const DatasetView& view) {
  const Eigen::Index p = beta.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
  for (const auto& seq : view.sequences) {
    for (const auto& sit : seq.situations) {
      const Eigen::VectorXd prob = choice_prob(sit.x, beta);
      const Eigen::VectorXd xbar = sit.x.transpose() * prob;
      h.noalias() -= sit.x.transpose() * prob.asDiagonal() * sit.x;
      h.noalias() += xbar * xbar.transpose();
    }
  }
  return h;
}

FitResult fit_mnl(const Dataset& data, const Eigen::VectorXd& init, const OptimOptions& opts) {
  if (!init.allFinite()) throw std::invalid_argument("fit_mnl: init must be finite");
  const DatasetView view = DatasetView::build(data);
  if (init.size() != view.n_characteristics)
    throw std::invalid_argument("fit_mnl: init length must match characteristic count");

  const Objective fn = [&](const Eigen::VectorXd& beta, bool need_scores) {
    MnlEvalFull e = mnl_eval(beta, view, need_scores);
    return ObjectiveEval{e.ll, std::move(e.grad), std::move(e.opg)};
  };
  const BhhhResult opt = maximize_bhhh(fn, init, opts);

  FitResult fit;
  fit.estimates = opt.x;
  fit.log_likelihood = opt.ll;
  fit.n_iterations = opt.n_iterations;
  fit.converged = opt.converged;
  fit.message = opt.message;
  fit.n_draws = 0;
  fit.n_observations = data.total_situations();
  for (int c = 0; c < view.n_characteristics; ++c) {
    fit.param_names.push_back("beta_" + std::to_string(c + 1));
    fit.characteristics.push_back(c < data.n_characteristics() ? data.characteristic_names[c]
                                                               : "");
  }
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
    if (opt.converged) throw;  // singular OPG at a proper optimum is an error
    fit.message += "; covariance unavailable: " + std::string(e.what());
  }
  return fit;
}

FitResult fit_mnl(const Dataset& data, const OptimOptions& opts) {
  const Eigen::VectorXd init = Eigen::VectorXd::Zero(data.n_characteristics());
  return fit_mnl(data, init, opts);
}

namespace reference {

LogLikEval mnl_log_likelihood(const Eigen::VectorXd& beta, const DatasetView& view) {
  LogLikEval out;
  out.grad = Eigen::VectorXd::Zero(beta.size());
  for (const auto& seq : view.sequences) {
    for (const auto& sit : seq.situations) {
      const Eigen::Index j = sit.x.rows();
      std::vector<double> util(j);
      double umax = -std::numeric_limits<double>::infinity();
      for (Eigen::Index a = 0; a < j; ++a) {
        double u = 0.0;
        for (Eigen::Index c = 0; c < beta.size(); ++c) u += beta[c] * sit.x(a, c);
        util[a] = u;
        umax = std::max(umax, u);
      }
      double denom = 0.0;
      for (Eigen::Index a = 0; a < j; ++a) denom += std::exp(util[a] - umax);
      out.ll += util[sit.chosen] - umax - std::log(denom);
      for (Eigen::Index c = 0; c < beta.size(); ++c) {
        double xbar = 0.0;
        for (Eigen::Index a = 0; a < j; ++a)
          xbar += std::exp(util[a] - umax) / denom * sit.x(a, c);
        out.grad[c] += sit.x(sit.chosen, c) - xbar;
      }
    }
  }
  return out;
}

}  // namespace reference

}  // namespace netchoice
