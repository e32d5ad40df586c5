#include "aabc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aabc {

RngStream::RngStream(SeedSpec spec)
    : spec_(spec), engine_(mix64(spec.root_seed ^ mix64(spec.stream_id ^ 0x5bf0'3635'dcf5'75abULL))) {}

double RngStream::uniform(double lo, double hi) {
    if (!(lo < hi)) {
        throw std::invalid_argument("uniform: require lo < hi");
    }
    double v = lo + uniform01() * (hi - lo);
    if (v >= hi) {  // rounding can land exactly on hi for wide intervals
        v = std::nextafter(hi, lo);
    }
    return v;
}

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_index: bound must be positive");
    }
    // Lemire's multiply-and-reject; unbiased.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        const std::uint64_t threshold = -bound % bound;
        while (lo < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::normal() {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * f;
    has_spare_normal_ = true;
    return u * f;
}

double RngStream::gamma(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("gamma: shape must be positive");
    }
    if (alpha < 1.0) {
        // Boost the shape by one, then scale by U^{1/alpha}.
        double u = uniform01();
        while (u == 0.0) {
            u = uniform01();
        }
        return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    // Marsaglia-Tsang squeeze.
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RngStream::log_gamma(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("log_gamma: shape must be positive");
    }
    if (alpha < 1.0) {
        double u = uniform01();
        while (u == 0.0) {
            u = uniform01();
        }
        return std::log(gamma(alpha + 1.0)) + std::log(u) / alpha;
    }
    return std::log(gamma(alpha));
}

void RngStream::dirichlet(std::span<const double> alphas, std::span<double> out) {
    if (alphas.size() < 2) {
        throw std::invalid_argument("dirichlet: need at least 2 shape parameters");
    }
    if (out.size() != alphas.size()) {
        throw std::invalid_argument("dirichlet: output size mismatch");
    }
    bool small_shape = false;
    for (const double a : alphas) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("dirichlet: shapes must be positive");
        }
        if (a < 1.0) {
            small_shape = true;
        }
    }
    if (!small_shape) {
        double sum = 0.0;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            out[i] = gamma(alphas[i]);
            sum += out[i];
        }
        for (double& v : out) {
            v /= sum;
        }
        return;
    }
    // Small shapes underflow as raw gamma draws; normalize in log space so the
    // largest component is always exact.
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        out[i] = log_gamma(alphas[i]);
        max_log = std::max(max_log, out[i]);
    }
    double sum = 0.0;
    for (double& v : out) {
        v = std::exp(v - max_log);
        sum += v;
    }
    for (double& v : out) {
        v /= sum;
    }
}

std::vector<double> RngStream::dirichlet(std::span<const double> alphas) {
    std::vector<double> out(alphas.size());
    dirichlet(alphas, out);
    return out;
}

void RngStream::categorical(std::span<const double> weights, std::span<std::uint32_t> out) {
    if (weights.empty()) {
        throw std::invalid_argument("categorical: weights must be non-empty");
    }
    std::vector<double> cumulative(weights.size());
    double total = 0.0;
    std::size_t last_positive = weights.size();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (!(w >= 0.0)) {
            throw std::invalid_argument("categorical: weights must be nonnegative");
        }
        total += w;
        cumulative[i] = total;
        if (w > 0.0) {
            last_positive = i;
        }
    }
    if (!(total > 0.0) || last_positive == weights.size()) {
        throw std::invalid_argument("categorical: weights must have positive total");
    }
    for (auto& idx : out) {
        const double u = uniform01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
        if (k > last_positive) {  // rounding edge: u == total
            k = last_positive;
        }
        idx = static_cast<std::uint32_t>(k);
    }
}

std::vector<std::uint32_t> RngStream::categorical(std::span<const double> weights, std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("categorical: count must be positive");
    }
    std::vector<std::uint32_t> out(count);
    categorical(weights, out);
    return out;
}

}  // namespace aabc
