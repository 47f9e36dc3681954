#pragma once

#include <span>

namespace netchoice {

// log(sum_i exp(x_i)) with max subtraction; -inf for an empty span.
double log_sum_exp(std::span<const double> xs);

// log((1/n) sum_i exp(x_i)), computed as max + log(sum/n). When all entries
// are equal this returns the common value bit-exactly, which the all-Fixed
// mixed-logit path relies on.
double log_mean_exp(std::span<const double> xs);

// Fixed-order pairwise summation. Independent of thread count because it is
// always applied to a fully materialized buffer.
double pairwise_sum(std::span<const double> xs);

// Standard normal CDF, quantile, and the chi-square upper tail.
double norm_cdf(double z);
double norm_quantile(double p);
double chisq_sf(double x, double dof);

// Two-sided p-value of an asymptotic z statistic.
double two_sided_p(double z);

}  // namespace netchoice
