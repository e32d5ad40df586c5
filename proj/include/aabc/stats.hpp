#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace aabc {

double mean(std::span<const double> values);

// Sample variance with the n-1 denominator; requires at least 2 values.
double sample_variance(std::span<const double> values);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

// Two-sample Kolmogorov-Smirnov statistic, sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// One-sample version against a reference CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Asymptotic p-value for the two-sample statistic (Kolmogorov tail with the
// small-sample correction of Stephens).
double ks_pvalue(double d, std::size_t n1, std::size_t n2);
double ks_pvalue(double d, std::size_t n);

// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda);

// Upper-tail probability of the chi-square distribution.
double chi_square_sf(double statistic, double degrees_of_freedom);

struct ChiSquareResult {
    double statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 0.0;
};

// Goodness-of-fit of observed counts against cell probabilities.
ChiSquareResult chi_square_gof(std::span<const double> observed_counts,
                               std::span<const double> probabilities);

// Spearman rank correlation with average ranks for ties.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace aabc
