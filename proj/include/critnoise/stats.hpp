#pragma once

// Small statistical toolbox shared by tests, estimators and the CLI.

#include <cstdint>
#include <vector>

namespace critnoise {

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);  // Bessel-corrected
double median(std::vector<double> v);                  // by copy
double quantile(std::vector<double> v, double q);      // nearest-rank style

// Two-sample Kolmogorov-Smirnov statistic, ties handled via jump points.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic rejection threshold at level alpha:
//   c(alpha) * sqrt((na+nb)/(na*nb)),  c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_threshold(std::size_t na, std::size_t nb, double alpha);

// Chi-square goodness of fit p-value: observed counts vs expected counts,
// bins with expected < min_expected merged into their neighbour.
double chi_square_gof_pvalue(const std::vector<std::uint64_t>& observed,
                             const std::vector<double>& expected,
                             double min_expected = 5.0);

// Delete-one jackknife standard error for a statistic given its leave-one-out
// values and the full-sample value.
double jackknife_stderr(const std::vector<double>& leave_one_out);

// 3-sigma half-width of a frequency estimate p over `trials` samples.
double binomial_3sigma(double p, std::uint64_t trials);

}  // namespace critnoise
