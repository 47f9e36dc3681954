#include "netchoice/inference.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "netchoice/math_util.hpp"
#include "netchoice/random.hpp"

namespace netchoice {

double coefficient_median(Family family, double m, double s) {
  (void)s;
  return family == Family::LogNormal ? std::exp(m) : m;
}

double substitution_rate(double numerator_median, double denominator_median) {
  if (denominator_median == 0.0)
    throw std::invalid_argument("substitution_rate: zero denominator median");
  return numerator_median / denominator_median;
}

double family_cdf(Family family, double m, double s, double x) {
  const double a = std::abs(s);
  switch (family) {
    case Family::Fixed:
      return x < m ? 0.0 : 1.0;
    case Family::Normal:
      return a == 0.0 ? (x < m ? 0.0 : 1.0) : norm_cdf((x - m) / a);
    case Family::LogNormal:
      if (x <= 0.0) return 0.0;
      return a == 0.0 ? (x < std::exp(m) ? 0.0 : 1.0) : norm_cdf((std::log(x) - m) / a);
    case Family::Uniform: {
      if (a == 0.0) return x < m ? 0.0 : 1.0;
      const double z = (x - (m - a)) / (2.0 * a);
      return std::min(1.0, std::max(0.0, z));
    }
    case Family::Triangular: {
      if (a == 0.0) return x < m ? 0.0 : 1.0;
      const double z = (x - m) / a;  // support [-1, 1] after standardizing
      if (z <= -1.0) return 0.0;
      if (z >= 1.0) return 1.0;
      return z < 0.0 ? 0.5 * (1.0 + z) * (1.0 + z) : 1.0 - 0.5 * (1.0 - z) * (1.0 - z);
    }
  }
  return 0.0;
}

double family_pdf(Family family, double m, double s, double x) {
  const double a = std::abs(s);
  switch (family) {
    case Family::Fixed:
      return 0.0;
    case Family::Normal: {
      const double z = (x - m) / a;
      return std::exp(-0.5 * z * z) / (a * std::sqrt(2.0 * M_PI));
    }
    case Family::LogNormal: {
      if (x <= 0.0) return 0.0;
      const double z = (std::log(x) - m) / a;
      return std::exp(-0.5 * z * z) / (x * a * std::sqrt(2.0 * M_PI));
    }
    case Family::Uniform: {
      return (x >= m - a && x <= m + a) ? 1.0 / (2.0 * a) : 0.0;
    }
    case Family::Triangular: {
      const double z = (x - m) / a;
      if (z <= -1.0 || z >= 1.0) return 0.0;
      return (1.0 - std::abs(z)) / a;
    }
  }
  return 0.0;
}

namespace {

double family_quantile(Family family, double m, double s, double p) {
  const double a = std::abs(s);
  switch (family) {
    case Family::Fixed:
      return m;
    case Family::Normal:
      return m + a * norm_quantile(p);
    case Family::LogNormal:
      return std::exp(m + a * norm_quantile(p));
    case Family::Uniform:
      return m + a * (2.0 * p - 1.0);
    case Family::Triangular:
      return m + a * triangular_icdf(p);
  }
  return m;
}

}  // namespace

std::pair<double, double> probability_interval(Family family, double m, double s,
                                               double mass) {
  if (!(mass > 0.0 && mass < 1.0))
    throw std::invalid_argument("probability_interval: mass must be in (0,1)");
  if (family == Family::Fixed) return {m, m};
  const double tail = (1.0 - mass) / 2.0;
  return {family_quantile(family, m, s, tail), family_quantile(family, m, s, 1.0 - tail)};
}

double interval_mass(Family family, double m, double s, double lo, double hi) {
  return family_cdf(family, m, s, hi) - family_cdf(family, m, s, lo);
}

TestResult wald_test(const FitResult& fit, const Eigen::MatrixXd& restr,
                     const Eigen::VectorXd& q) {
  if (restr.cols() != fit.estimates.size())
    throw std::invalid_argument("wald_test: restriction width mismatch");
  if (restr.rows() != q.size())
    throw std::invalid_argument("wald_test: restriction/target size mismatch");
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(restr);
  const int rank = static_cast<int>(lu.rank());
  if (rank < restr.rows())
    throw std::invalid_argument("wald_test: restriction rows are linearly dependent");

  const Eigen::VectorXd diff = restr * fit.estimates - q;
  const Eigen::MatrixXd rvr = restr * fit.covariance * restr.transpose();
  const Eigen::FullPivLU<Eigen::MatrixXd> solver(rvr);
  if (!solver.isInvertible())
    throw std::runtime_error("wald_test: restricted covariance is singular");
  TestResult out;
  out.statistic = diff.dot(solver.solve(diff));
  out.dof = rank;
  out.p_value = chisq_sf(out.statistic, out.dof);
  return out;
}

TestResult wald_test_single(const FitResult& fit, int param_index, double value) {
  Eigen::MatrixXd restr = Eigen::MatrixXd::Zero(1, fit.estimates.size());
  restr(0, param_index) = 1.0;
  Eigen::VectorXd q(1);
  q[0] = value;
  return wald_test(fit, restr, q);
}

TestResult lr_test(const FitResult& fit_full, const FitResult& fit_restricted) {
  if (!fit_full.converged || !fit_restricted.converged)
    throw std::invalid_argument("lr_test: both fits must be converged");
  const int dof = fit_full.n_parameters() - fit_restricted.n_parameters();
  if (dof < 0) throw std::invalid_argument("lr_test: models are not nested by parameter count");
  double lr = 2.0 * (fit_full.log_likelihood - fit_restricted.log_likelihood);
  if (lr < -1e-6)
    throw std::runtime_error(
        "lr_test: log-likelihood decreased in the full model (not nested, or optimizer "
        "failure)");
  lr = std::max(0.0, lr);
  TestResult out;
  out.statistic = lr;
  out.dof = dof;
  out.p_value = dof == 0 ? 1.0 : chisq_sf(lr, dof);
  return out;
}

RandomnessDiagnostic randomness_diagnostic(const FitResult& fit) {
  if (!fit.spec)
    throw std::invalid_argument("randomness_diagnostic: fit has no mixing spec");
  RandomnessDiagnostic diag;
  const MixingSpec& spec = *fit.spec;
  const int k = spec.n_coefficients();
  for (int c = 0; c < k; ++c) {
    if (!has_scale(spec.coefficients[c].family)) continue;
    const int idx = k + spec.scale_index(c);
    const double s = fit.estimates[idx];
    const double se = fit.std_errors[idx];
    RandomnessVerdict v;
    v.param = fit.param_names[idx];
    v.characteristic = spec.coefficients[c].name;
    v.scale = s;
    v.p_value = se > 0.0 ? two_sided_p(s / se) : (s == 0.0 ? 1.0 : 0.0);
    v.likely_deterministic = v.p_value > 0.10;
    diag.verdicts.push_back(std::move(v));
  }
  return diag;
}

std::string significance_stars(double p) {
  if (p <= 0.001) return "***";
  if (p <= 0.01) return "**";
  if (p <= 0.05) return "*";
  if (p <= 0.1) return "•";
  return "";
}

namespace {

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
  return buf;
}

bool is_scale_param(const std::string& name) { return name.rfind("s_", 0) == 0; }

}  // namespace

std::string render_fit_table(const FitResult& fit) {
  std::ostringstream os;
  os << "Parameter      Characteristic   Coefficient   Standard Error   p-value\n";
  os << "---------------------------------------------------------------------\n";
  for (int i = 0; i < fit.n_parameters(); ++i) {
    const double est =
        is_scale_param(fit.param_names[i]) ? std::abs(fit.estimates[i]) : fit.estimates[i];
    char line[256];
    std::snprintf(line, sizeof(line), "%-14s %-16s %11s   %14s   %s%s\n",
                  fit.param_names[i].c_str(),
                  i < static_cast<int>(fit.characteristics.size())
                      ? fit.characteristics[i].c_str()
                      : "",
                  fmt(est).c_str(), fmt(fit.std_errors[i]).c_str(),
                  fmt(fit.p_values[i]).c_str(), significance_stars(fit.p_values[i]).c_str());
    os << line;
  }
  os << "log-likelihood: " << fmt(fit.log_likelihood, 4) << "   iterations: " << fit.n_iterations
     << "   converged: " << (fit.converged ? "yes" : "no") << "\n";
  if (fit.spec && fit.spec->correlated && fit.theta) {
    for (const auto& c : implied_correlations(*fit.spec, *fit.theta))
      os << "cor_" << c.coef_i + 1 << c.coef_j + 1 << " = " << fmt(c.value) << "\n";
  }
  return os.str();
}

InferenceSummary summarize_coefficients(const FitResult& fit, double interval_mass_target) {
  if (!fit.spec || !fit.theta)
    throw std::invalid_argument("summarize_coefficients: fit has no mixing spec");
  const MixingSpec& spec = *fit.spec;
  const ThetaVector& theta = *fit.theta;
  InferenceSummary s;
  s.interval_mass_target = interval_mass_target;
  for (int c = 0; c < spec.n_coefficients(); ++c) {
    const double m = theta.means[c];
    const double sd = has_scale(spec.coefficients[c].family)
                          ? theta.scales[spec.scale_index(c)]
                          : 0.0;
    s.names.push_back(spec.coefficients[c].name);
    s.medians.push_back(coefficient_median(spec.coefficients[c].family, m, sd));
    s.intervals.push_back(
        probability_interval(spec.coefficients[c].family, m, sd, interval_mass_target));
  }
  for (std::size_t i = 0; i < s.medians.size(); ++i)
    s.substitution_vs_first.push_back(
        s.medians[0] != 0.0 ? s.medians[i] / s.medians[0]
                            : std::numeric_limits<double>::quiet_NaN());
  return s;
}

std::string render_inference_summary(const InferenceSummary& s) {
  std::ostringstream os;
  os << "Characteristic   Median       Subst. vs " << (s.names.empty() ? "-" : s.names[0])
     << "   " << fmt(100.0 * s.interval_mass_target, 0) << "% interval\n";
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %-12s %-18s (%s, %s)\n", s.names[i].c_str(),
                  fmt(s.medians[i]).c_str(), fmt(s.substitution_vs_first[i]).c_str(),
                  fmt(s.intervals[i].first).c_str(), fmt(s.intervals[i].second).c_str());
    os << line;
  }
  return os.str();
}

}  // namespace netchoice
