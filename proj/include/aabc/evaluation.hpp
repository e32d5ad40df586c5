#pragma once

#include <optional>

#include "aabc/aabc.hpp"
#include "aabc/abc.hpp"

namespace aabc {

// Standardized root sum of squared errors of an accepted sample against the
// known truth:
//   RSSE = (1/r) * sqrt( sum_j (a_j - truth)^2 / Var(a) )
// with Var the sample variance (n-1 denominator). Undefined (nullopt) for
// fewer than 2 values or zero variance; callers count exclusions instead of
// imputing.
std::optional<double> rsse(std::span<const double> accepted, double truth);

struct RmseResult {
    double value = 0.0;
    std::size_t contributing = 0;  // RSSE values that were defined
};

// Mean of the defined RSSE values; throws when none are defined.
RmseResult rmse(std::span<const std::optional<double>> rsse_values);

// 100 * |rmse_method - rmse_abc| / rmse_abc.
double percent_excess(double rmse_method, double rmse_abc);

// Two-sample Kolmogorov-Smirnov statistic between one component's marginal
// accepted values. Empirical convergence diagnostic between posteriors.
double posterior_distance(const PosteriorSample& a, const PosteriorSample& b, int component);

// Replicate test-set study: build one reference set of `reference_size`
// realizations, draw `test_sets` (data, truth) pairs from it without
// replacement, rebuild pools of each size in `m_grid` by subsampling without
// replacement (the full set when m equals the reference size), and run every
// requested method on every test set. The budget-limited ABC method scores
// the pool realizations themselves; the AABC methods propose
// `reference_size` fresh parameters per run.
struct StudyConfig {
    std::size_t reference_size = 0;
    std::size_t test_sets = 0;
    std::vector<std::size_t> m_grid;
    int n = 0;  // observations per simulated data set
    AcceptanceRule rule;
    std::vector<MethodTag> methods;

    void validate() const;
    nlohmann::json to_json() const;
    static StudyConfig from_json(const nlohmann::json& j);
};

// One (method, pool size, test set) run.
struct StudyCell {
    MethodTag method = MethodTag::abc;
    std::size_t m = 0;
    std::size_t test_index = 0;  // position in the drawn test-set list
    std::size_t accepted = 0;
    std::vector<double> rsse_by_component;      // NaN where undefined
    std::vector<double> variance_by_component;  // NaN where undefined
};

struct AccuracyRow {
    MethodTag method = MethodTag::abc;
    std::size_t m = 0;
    int component = 0;
    double rmse = 0.0;  // NaN when no test set contributed
    std::size_t n_contributing = 0;
    std::optional<double> percent_excess;  // vs ABC at m == reference_size
};

struct StudyResult {
    StudyConfig config;
    std::vector<AccuracyRow> rows;
    std::vector<StudyCell> cells;
};

StudyResult run_study(const Model& model, const StudyConfig& config, SeedSpec seed, int workers = 1);

}  // namespace aabc
