#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netchoice/fit_result.hpp"
#include "netchoice/mixing.hpp"

namespace netchoice {

// Median of a coefficient distribution. Scale-free for every family here
// (the LogNormal median is exp(m) regardless of s).
double coefficient_median(Family family, double m, double s);

// Ratio of two coefficient medians; how much of the numerator characteristic
// compensates for one unit of the denominator one.
double substitution_rate(double numerator_median, double denominator_median);

// CDF and density of a coefficient distribution.
double family_cdf(Family family, double m, double s, double x);
double family_pdf(Family family, double m, double s, double x);

// Equal-tail interval containing `mass` of the coefficient distribution.
std::pair<double, double> probability_interval(Family family, double m, double s, double mass);

// Probability mass the distribution places on (lo, hi).
double interval_mass(Family family, double m, double s, double lo, double hi);

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Wald test of the linear restrictions R theta = q against the fitted
// covariance; chi-square with dof = rank(R).
TestResult wald_test(const FitResult& fit, const Eigen::MatrixXd& restr,
                     const Eigen::VectorXd& q);

// Convenience single restriction theta_k = value.
TestResult wald_test_single(const FitResult& fit, int param_index, double value);

// Likelihood-ratio test of a restricted model nested in a full one. Both fits
// must be converged, on the same data with the same draw seed.
TestResult lr_test(const FitResult& fit_full, const FitResult& fit_restricted);

// Heuristic random-vs-deterministic verdict per scale parameter: two-sided
// z-test of s_i = 0, likely-deterministic when p > 0.10.
struct RandomnessVerdict {
  std::string param;
  std::string characteristic;
  double scale = 0.0;
  double p_value = 1.0;
  bool likely_deterministic = false;
};

struct RandomnessDiagnostic {
  std::vector<RandomnessVerdict> verdicts;
  // Carried verbatim into every rendering of the diagnostic.
  std::string caveat = "heuristic — not a formal test";
};

RandomnessDiagnostic randomness_diagnostic(const FitResult& fit);

// Stars at the cutpoints 0.001 / 0.01 / 0.05 / 0.1.
std::string significance_stars(double p);

// Text table with the Parameter / Characteristic / Coefficient /
// Standard Error / p-value layout. Scales are shown as |s_i|.
std::string render_fit_table(const FitResult& fit);

// Medians, substitution rates against a base coefficient, and a probability
// interval per coefficient, as used by the study reports.
struct InferenceSummary {
  std::vector<std::string> names;
  std::vector<double> medians;
  std::vector<double> substitution_vs_first;  // median_i / median_0
  std::vector<std::pair<double, double>> intervals;
  double interval_mass_target = 0.9;
};

InferenceSummary summarize_coefficients(const FitResult& fit, double interval_mass_target);
std::string render_inference_summary(const InferenceSummary& s);

}  // namespace netchoice
