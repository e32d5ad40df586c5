#include "aabc/aabc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aabc/parallel.hpp"

namespace aabc {

namespace {

NearestMatch nearest_parameter_impl(std::span<const double> query, const ReferenceSet& pool,
                                    const double* scales) {
    if (pool.size() == 0) {
        throw std::invalid_argument("nearest_parameter: empty pool");
    }
    const auto dim = static_cast<std::size_t>(pool.param_dim);
    if (query.size() != dim) {
        throw std::invalid_argument("nearest_parameter: query dimension mismatch");
    }
    // Exact linear scan; strict `<` keeps the lowest index on ties.
    std::size_t best = 0;
    double best_sq = std::numeric_limits<double>::infinity();
    const double* p = pool.params.data();
    for (std::size_t i = 0; i < pool.size(); ++i, p += dim) {
        double sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            double d = query[c] - p[c];
            if (scales != nullptr) {
                d /= scales[c];
            }
            sq += d * d;
        }
        if (sq < best_sq) {
            best_sq = sq;
            best = i;
        }
    }
    const auto theta = pool.theta(best);
    return NearestMatch{best, ParameterVector(theta.begin(), theta.end()), std::sqrt(best_sq)};
}

}  // namespace

NearestMatch nearest_parameter(std::span<const double> query, const ReferenceSet& pool) {
    return nearest_parameter_impl(query, pool, nullptr);
}

NearestMatch nearest_parameter(std::span<const double> query, const ReferenceSet& pool,
                               std::span<const double> scales) {
    if (scales.size() != static_cast<std::size_t>(pool.param_dim)) {
        throw std::invalid_argument("nearest_parameter: scales dimension mismatch");
    }
    for (const double s : scales) {
        if (!(s > 0.0)) {
            throw std::invalid_argument("nearest_parameter: scales must be positive");
        }
    }
    return nearest_parameter_impl(query, pool, scales.data());
}

DataSet resample_dataset(const NearestMatch& match, const ReferenceSet& pool, RngStream& stream) {
    if (match.index >= pool.size()) {
        throw std::invalid_argument("resample_dataset: match index beyond pool");
    }
    const int n = pool.n;
    const auto obs_dim = static_cast<std::size_t>(pool.obs_dim);
    const auto source = pool.dataset_values(match.index);
    DataSet out(n, pool.obs_dim);
    if (n == 1) {
        std::copy(source.begin(), source.end(), out.values().begin());
        return out;
    }
    const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    const std::vector<double> phi = stream.dirichlet(ones);
    const auto picks = stream.categorical(phi, static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto src = source.subspan(static_cast<std::size_t>(picks[static_cast<std::size_t>(j)]) * obs_dim, obs_dim);
        std::copy(src.begin(), src.end(), out.row(j).begin());
    }
    return out;
}

namespace {

using SimulateSurrogate =
    std::function<DataSet(const NearestMatch& match, RngStream& stream)>;

PosteriorSample run_aabc_impl(MethodTag method, const Model& model, const SummaryVector& s_obs,
                              const ReferenceSet& pool, std::size_t proposals,
                              const AcceptanceRule& rule, SeedSpec seed, const AabcOptions& options,
                              const SimulateSurrogate& surrogate) {
    if (proposals < 1) {
        throw std::invalid_argument("run_aabc: need at least one proposal");
    }
    if (pool.size() == 0) {
        throw std::invalid_argument("run_aabc: empty pool");
    }
    require_pool_matches_model(pool, model);
    if (s_obs.size() != static_cast<std::size_t>(model.summary_dim())) {
        throw std::invalid_argument("run_aabc: observed summary dimension mismatch");
    }
    const auto param_dim = static_cast<std::size_t>(model.param_dim());
    const auto summary_dim = static_cast<std::size_t>(model.summary_dim());
    const std::vector<double> scales = options.scale_parameter_distance
                                           ? model.prior_scale()
                                           : std::vector<double>{};
    std::vector<double> params(proposals * param_dim);
    std::vector<double> summaries(proposals * summary_dim);
    parallel_for(proposals, options.workers, [&](std::size_t i) {
        RngStream stream(derive_stream(seed, kProposal, i));
        const ParameterVector theta_star = model.sample_prior(stream);
        const NearestMatch match = scales.empty() ? nearest_parameter(theta_star, pool)
                                                  : nearest_parameter(theta_star, pool, scales);
        const DataSet data = surrogate(match, stream);
        const SummaryVector s = model.summarize(data);
        std::copy(theta_star.begin(), theta_star.end(),
                  params.begin() + static_cast<std::ptrdiff_t>(i * param_dim));
        std::copy(s.begin(), s.end(), summaries.begin() + static_cast<std::ptrdiff_t>(i * summary_dim));
    });
    return select_posterior(method, rule, params, param_dim, summaries, summary_dim, s_obs);
}

}  // namespace

PosteriorSample run_aabc(const Model& model, const SummaryVector& s_obs, const ReferenceSet& pool,
                         std::size_t proposals, const AcceptanceRule& rule, SeedSpec seed,
                         const AabcOptions& options) {
    return run_aabc_impl(MethodTag::aabc, model, s_obs, pool, proposals, rule, seed, options,
                         [&](const NearestMatch& match, RngStream& stream) {
                             return resample_dataset(match, pool, stream);
                         });
}

PosteriorSample run_aabc_param_only(const Model& model, const SummaryVector& s_obs,
                                    const ReferenceSet& pool, std::size_t proposals,
                                    const AcceptanceRule& rule, int n, SeedSpec seed,
                                    const AabcOptions& options) {
    if (n < 1) {
        throw std::invalid_argument("run_aabc_param_only: n must be >= 1");
    }
    return run_aabc_impl(MethodTag::aabc_param_only, model, s_obs, pool, proposals, rule, seed,
                         options, [&](const NearestMatch& match, RngStream& stream) {
                             return model.simulate(match.theta_tilde, n, stream);
                         });
}

}  // namespace aabc
