#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "aabc/model.hpp"
#include "aabc/rng.hpp"
#include "aabc/types.hpp"

namespace aabc {

// Pool of realizations (theta_i, x_i) simulated from the joint distribution
// of parameters and data. Immutable after construction; engines share it
// read-only.
struct ReferenceSet {
    ModelSpec model;
    int n = 0;          // observations per data set
    int param_dim = 0;
    int obs_dim = 0;
    SeedSpec seed;      // provenance of the build

    std::vector<double> params;  // size() x param_dim, row-major
    std::vector<double> data;    // size() x (n * obs_dim), row-major

    std::size_t size() const {
        return param_dim == 0 ? 0 : params.size() / static_cast<std::size_t>(param_dim);
    }

    std::span<const double> theta(std::size_t i) const {
        return {params.data() + i * static_cast<std::size_t>(param_dim),
                static_cast<std::size_t>(param_dim)};
    }

    std::span<const double> dataset_values(std::size_t i) const {
        const std::size_t stride = static_cast<std::size_t>(n) * obs_dim;
        return {data.data() + i * stride, stride};
    }

    DataSet dataset(std::size_t i) const {
        const auto v = dataset_values(i);
        return DataSet(n, obs_dim, std::vector<double>(v.begin(), v.end()));
    }

    friend bool operator==(const ReferenceSet&, const ReferenceSet&) = default;
};

// Simulates m realizations: theta_i from the prior, x_i of n observations
// from the model at theta_i. Realization i uses its own derived stream, so
// the result is identical for any worker count.
ReferenceSet build_reference_set(const Model& model, std::size_t m, int n, SeedSpec seed,
                                 int workers = 1);

// Single-file format: one JSON header line, then the raw binary payload
// (per realization: param_dim doubles followed by n*obs_dim doubles).
void save_reference_set(const ReferenceSet& set, const std::filesystem::path& path);
ReferenceSet load_reference_set(const std::filesystem::path& path);

// Inspection export: theta_1..theta_p, then the flattened observations.
void export_reference_set_csv(const ReferenceSet& set, const std::filesystem::path& path);

// k distinct indices drawn uniformly from [0, population) without replacement.
std::vector<std::size_t> sample_indices_without_replacement(std::size_t population, std::size_t k,
                                                            RngStream& stream);

ReferenceSet subsample(const ReferenceSet& set, std::span<const std::size_t> indices);

// Throws unless the pool was built for exactly this model configuration.
void require_pool_matches_model(const ReferenceSet& set, const Model& model);

}  // namespace aabc
