#include "aabc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace aabc {

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean: empty input");
    }
    double s = 0.0;
    for (const double v : values) {
        s += v;
    }
    return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("sample_variance: need at least 2 values");
    }
    const double m = mean(values);
    double ss = 0.0;
    for (const double v : values) {
        const double d = v - m;
        ss += d * d;
    }
    return ss / static_cast<double>(values.size() - 1);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("quantile: empty input");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("quantile: q must be in [0,1]");
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto idx = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(idx);
    if (idx + 1 < values.size()) {
        return values[idx] * (1.0 - frac) + values[idx + 1] * frac;
    }
    return values[idx];
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) {
            ++i;
        }
        while (j < b.size() && b[j] <= x) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) {
        throw std::invalid_argument("ks_statistic: empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                                 f - static_cast<double>(i) / n));
    }
    return d;
}

double kolmogorov_sf(double lambda) {
    if (lambda < 0.18) {  // survival probability is 1 to ~1e-16 below this
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 101; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(double d, std::size_t n1, std::size_t n2) {
    const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                      (static_cast<double>(n1) + static_cast<double>(n2));
    const double sqrt_ne = std::sqrt(ne);
    return kolmogorov_sf((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d);
}

double ks_pvalue(double d, std::size_t n) {
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    return kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d);
}

double chi_square_sf(double statistic, double degrees_of_freedom) {
    if (statistic < 0.0 || degrees_of_freedom <= 0.0) {
        throw std::invalid_argument("chi_square_sf: invalid arguments");
    }
    return boost::math::gamma_q(degrees_of_freedom / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_gof(std::span<const double> observed_counts,
                               std::span<const double> probabilities) {
    if (observed_counts.size() != probabilities.size() || observed_counts.size() < 2) {
        throw std::invalid_argument("chi_square_gof: need matching cells, at least 2");
    }
    const double total = std::accumulate(observed_counts.begin(), observed_counts.end(), 0.0);
    if (!(total > 0.0)) {
        throw std::invalid_argument("chi_square_gof: no observations");
    }
    double statistic = 0.0;
    for (std::size_t i = 0; i < observed_counts.size(); ++i) {
        const double expected = total * probabilities[i];
        if (!(expected > 0.0)) {
            throw std::invalid_argument("chi_square_gof: cell with zero expected count");
        }
        const double diff = observed_counts[i] - expected;
        statistic += diff * diff / expected;
    }
    ChiSquareResult result;
    result.statistic = statistic;
    result.degrees_of_freedom = static_cast<double>(observed_counts.size() - 1);
    result.p_value = chi_square_sf(statistic, result.degrees_of_freedom);
    return result;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("spearman_rho: need matching inputs, at least 2");
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::invalid_argument("spearman_rho: constant input");
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace aabc
