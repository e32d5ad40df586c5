#include "aabc/admixture.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aabc {

AdmixConfig AdmixConfig::from_json(const nlohmann::json& j) {
    AdmixConfig c;
    c.N = j.value("N", c.N);
    c.t = j.value("t", c.t);
    c.n = j.value("n", c.n);
    c.validate();
    return c;
}

nlohmann::json AdmixConfig::to_json() const { return {{"N", N}, {"t", t}, {"n", n}}; }

void AdmixConfig::validate() const {
    if (N < 2) {
        throw std::invalid_argument("admix: N must be >= 2");
    }
    if (t < 1) {
        throw std::invalid_argument("admix: t must be >= 1");
    }
    if (n < 1 || n > N) {
        throw std::invalid_argument("admix: require 1 <= n <= N");
    }
}

AdmixturePopulation found_population(int N, RngStream& stream) {
    if (N < 2) {
        throw std::invalid_argument("found_population: N must be >= 2");
    }
    AdmixturePopulation pop;
    pop.fractions.resize(static_cast<std::size_t>(N));
    pop.generation = 1;
    for (double& f : pop.fractions) {
        const double a = stream.uniform01() < 0.5 ? 1.0 : 0.0;
        const double b = stream.uniform01() < 0.5 ? 1.0 : 0.0;
        f = 0.5 * (a + b);
    }
    return pop;
}

namespace {

inline double draw_parent(const std::vector<double>& previous, const std::array<double, 3>& p,
                          RngStream& stream) {
    const double u = stream.uniform01();
    if (u < p[0]) {
        return 1.0;  // source A
    }
    if (u < p[0] + p[1]) {
        return 0.0;  // source B
    }
    return previous[stream.uniform_index(previous.size())];
}

}  // namespace

AdmixturePopulation step_generation(const AdmixturePopulation& pop,
                                    const std::array<double, 3>& params, RngStream& stream) {
    if (pop.fractions.empty()) {
        throw std::invalid_argument("step_generation: empty population");
    }
    AdmixturePopulation next;
    next.fractions.resize(pop.fractions.size());
    next.generation = pop.generation + 1;
    for (double& child : next.fractions) {
        const double a = draw_parent(pop.fractions, params, stream);
        const double b = draw_parent(pop.fractions, params, stream);
        child = 0.5 * (a + b);
    }
    return next;
}

DataSet simulate_admixture(const std::array<double, 3>& params, const AdmixConfig& config, int n,
                           RngStream& stream) {
    config.validate();
    if (n < 1 || n > config.N) {
        throw std::invalid_argument("simulate_admixture: require 1 <= n <= N");
    }
    AdmixturePopulation pop = found_population(config.N, stream);
    for (int g = 1; g < config.t; ++g) {
        pop = step_generation(pop, params, stream);
    }
    // Uniform sample of n individuals without replacement (partial
    // Fisher-Yates over the final generation).
    std::vector<double>& pool = pop.fractions;
    DataSet data(n, 1);
    for (int i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) + stream.uniform_index(pool.size() - static_cast<std::size_t>(i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        data.row(i)[0] = pool[static_cast<std::size_t>(i)];
    }
    return data;
}

SummaryVector admixture_moments(const DataSet& data) {
    if (data.obs_dim() != 1) {
        throw std::invalid_argument("admixture_moments: expected scalar observations");
    }
    if (data.n() < 2) {
        throw std::invalid_argument("admixture_moments: need at least 2 observations");
    }
    const auto& x = data.values();
    for (const double v : x) {
        if (!std::isfinite(v)) {
            throw std::domain_error("admixture_moments: non-finite observation");
        }
    }
    const double n = static_cast<double>(x.size());
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : x) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double variance = m2 / (n - 1.0);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    if (variance >= 1e-12) {
        skewness = m3 / std::pow(m2, 1.5);
        excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return {m, variance, skewness, excess_kurtosis};
}

AdmixtureModel::AdmixtureModel(AdmixConfig config) : config_(config) {
    config_.validate();
    spec_ = ModelSpec{"admix", config_.to_json()};
}

ParameterVector AdmixtureModel::sample_prior(RngStream& stream) const {
    static const std::vector<double> ones{1.0, 1.0, 1.0};
    return stream.dirichlet(ones);
}

DataSet AdmixtureModel::simulate(const ParameterVector& params, int n, RngStream& stream) const {
    validate_params(params);
    return simulate_admixture({params[0], params[1], params[2]}, config_, n, stream);
}

SummaryVector AdmixtureModel::summarize(const DataSet& data) const { return admixture_moments(data); }

void AdmixtureModel::validate_params(const ParameterVector& params) const {
    if (params.size() != 3) {
        throw std::domain_error("admix: expected 3 parameters (p_A, p_B, p_H)");
    }
    double sum = 0.0;
    for (const double p : params) {
        if (!(p >= 0.0)) {
            throw std::domain_error("admix: contribution probabilities must be >= 0");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::domain_error("admix: contribution probabilities must sum to 1");
    }
}

}  // namespace aabc
