#include "aabc/balancing_selection.hpp"

#include <cmath>
#include <stdexcept>

namespace aabc {

BalSelConfig BalSelConfig::from_json(const nlohmann::json& j) {
    BalSelConfig c;
    c.K = j.value("K", c.K);
    c.loci = j.value("loci", c.loci);
    c.sigma_lo = j.value("sigma_lo", c.sigma_lo);
    c.sigma_hi = j.value("sigma_hi", c.sigma_hi);
    c.mu_lo = j.value("mu_lo", c.mu_lo);
    c.mu_hi = j.value("mu_hi", c.mu_hi);
    c.validate();
    return c;
}

nlohmann::json BalSelConfig::to_json() const {
    return {{"K", K},           {"loci", loci},       {"sigma_lo", sigma_lo},
            {"sigma_hi", sigma_hi}, {"mu_lo", mu_lo}, {"mu_hi", mu_hi}};
}

void BalSelConfig::validate() const {
    if (K < 2) {
        throw std::invalid_argument("balsel: K must be >= 2");
    }
    if (loci < 1) {
        throw std::invalid_argument("balsel: loci must be >= 1");
    }
    if (!(sigma_lo < sigma_hi) || sigma_lo < 0.0) {
        throw std::invalid_argument("balsel: invalid sigma prior bounds");
    }
    if (!(mu_lo < mu_hi) || !(mu_lo > 0.0)) {
        throw std::invalid_argument("balsel: invalid mu prior bounds");
    }
}

std::vector<double> sample_stationary(double sigma, double mu, int K, RngStream& stream,
                                      RejectionStats* stats) {
    if (!(sigma >= 0.0)) {
        throw std::domain_error("sample_stationary: sigma must be >= 0");
    }
    if (!(mu > 0.0)) {
        throw std::domain_error("sample_stationary: mu must be > 0");
    }
    if (K < 2) {
        throw std::domain_error("sample_stationary: K must be >= 2");
    }
    const std::vector<double> shapes(static_cast<std::size_t>(K), mu / K);
    const double inv_k = 1.0 / K;
    std::vector<double> a(static_cast<std::size_t>(K));
    for (;;) {
        stream.dirichlet(shapes, a);
        bool positive = true;
        double sum_sq = 0.0;
        for (const double v : a) {
            positive = positive && v > 0.0;
            sum_sq += v * v;
        }
        if (!positive) {
            continue;  // underflowed component; a.s. impossible under the target
        }
        if (stats != nullptr) {
            ++stats->proposals;
        }
        const double accept_prob = std::exp(-sigma * (sum_sq - inv_k));
        if (stream.uniform01() < accept_prob) {
            if (stats != nullptr) {
                ++stats->accepted;
            }
            return a;
        }
    }
}

BalancingSelectionModel::BalancingSelectionModel(BalSelConfig config) : config_(config) {
    config_.validate();
    spec_ = ModelSpec{"balsel", config_.to_json()};
}

ParameterVector BalancingSelectionModel::sample_prior(RngStream& stream) const {
    return {stream.uniform(config_.sigma_lo, config_.sigma_hi),
            stream.uniform(config_.mu_lo, config_.mu_hi)};
}

DataSet BalancingSelectionModel::simulate(const ParameterVector& params, int n, RngStream& stream) const {
    validate_params(params);
    if (n < 1) {
        throw std::invalid_argument("balsel simulate: n must be >= 1");
    }
    const double sigma = params[0];
    const double mu = params[1];
    DataSet data(n, obs_dim());
    for (int i = 0; i < n; ++i) {
        auto row = data.row(i);
        for (int locus = 0; locus < config_.loci; ++locus) {
            const auto freqs = sample_stationary(sigma, mu, config_.K, stream);
            std::copy(freqs.begin(), freqs.end(), row.begin() + static_cast<std::size_t>(locus) * config_.K);
        }
    }
    return data;
}

SummaryVector BalancingSelectionModel::summarize(const DataSet& data) const {
    if (data.obs_dim() != obs_dim()) {
        throw std::invalid_argument("balsel summarize: observation dimension mismatch");
    }
    // Per locus: sum of squared frequencies and negative log product; both
    // averaged over the n * loci locus draws so the scale is n-invariant.
    double sum_sq_total = 0.0;
    double neg_log_total = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        const auto row = data.row(i);
        for (const double a : row) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw std::domain_error("balsel summarize: allele frequency must be positive and finite");
            }
            sum_sq_total += a * a;
            neg_log_total -= std::log(a);
        }
    }
    const double draws = static_cast<double>(data.n()) * config_.loci;
    return {sum_sq_total / draws, neg_log_total / draws};
}

void BalancingSelectionModel::validate_params(const ParameterVector& params) const {
    if (params.size() != 2) {
        throw std::domain_error("balsel: expected 2 parameters (sigma, mu)");
    }
    const double sigma = params[0];
    const double mu = params[1];
    if (!(sigma >= config_.sigma_lo && sigma <= config_.sigma_hi)) {
        throw std::domain_error("balsel: sigma outside prior support");
    }
    if (!(mu >= config_.mu_lo && mu <= config_.mu_hi)) {
        throw std::domain_error("balsel: mu outside prior support");
    }
}

std::vector<double> BalancingSelectionModel::prior_scale() const {
    return {config_.sigma_hi - config_.sigma_lo, config_.mu_hi - config_.mu_lo};
}

}  // namespace aabc
