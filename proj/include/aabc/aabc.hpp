#pragma once

#include "aabc/abc.hpp"
#include "aabc/reference_set.hpp"

namespace aabc {

// Closest pool entry to a query parameter, by Euclidean distance, ties
// resolved to the lowest index.
struct NearestMatch {
    std::size_t index = 0;
    ParameterVector theta_tilde;
    double distance = 0.0;
};

NearestMatch nearest_parameter(std::span<const double> query, const ReferenceSet& pool);
// Scaled variant for priors whose component ranges differ.
NearestMatch nearest_parameter(std::span<const double> query, const ReferenceSet& pool,
                               std::span<const double> scales);

// One surrogate data set: a single weight vector phi ~ Dirichlet(1,...,1)
// over the n slots of the matched data set, then n iid draws from those
// slots with probabilities phi. Every output observation is a value that
// occurs in the matched data set.
DataSet resample_dataset(const NearestMatch& match, const ReferenceSet& pool, RngStream& stream);

struct AabcOptions {
    int workers = 1;
    // Divide parameter-space distances by the model's prior scale during
    // nearest-parameter matching. Off by default (plain Euclidean matching).
    bool scale_parameter_distance = false;
};

// AABC by rejection: per proposal, theta* from the prior, theta~ by nearest
// match in the pool, a surrogate data set resampled from the matched data,
// then the usual summary-distance acceptance. Under the top_percentile rule
// the accepted count is exact for any pool size m >= 1.
PosteriorSample run_aabc(const Model& model, const SummaryVector& s_obs, const ReferenceSet& pool,
                         std::size_t proposals, const AcceptanceRule& rule, SeedSpec seed,
                         const AabcOptions& options = {});

// Parameter-space-only variant: data sets are simulated from the mechanistic
// model at theta~ instead of resampled, isolating the nearest-match error
// from the resampling error.
PosteriorSample run_aabc_param_only(const Model& model, const SummaryVector& s_obs,
                                    const ReferenceSet& pool, std::size_t proposals,
                                    const AcceptanceRule& rule, int n, SeedSpec seed,
                                    const AabcOptions& options = {});

}  // namespace aabc
