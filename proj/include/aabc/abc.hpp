#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "aabc/model.hpp"
#include "aabc/rng.hpp"
#include "aabc/types.hpp"

#include <json.hpp>

namespace aabc {

enum class MethodTag { abc, aabc, aabc_param_only };

std::string to_string(MethodTag tag);
MethodTag method_tag_from_string(const std::string& name);

// Acceptance rule for proposals, by summary-statistic distance to the
// observed summaries. `epsilon` accepts every distance strictly below the
// cutoff (possibly none); `top_percentile` accepts exactly
// ceil(fraction * proposals), ties broken toward the lower proposal index.
struct AcceptanceRule {
    enum class Kind { epsilon, top_percentile };

    Kind kind = Kind::top_percentile;
    double epsilon = 0.0;
    double fraction = 0.01;
    // Divide each summary component by its standard deviation over the
    // proposal pool before taking the Euclidean distance. Off by default:
    // the plain Euclidean form is the reference behavior.
    bool standardize = false;

    static AcceptanceRule with_epsilon(double eps, bool standardize = false);
    static AcceptanceRule top_fraction(double fraction, bool standardize = false);

    std::size_t accepted_count(std::size_t proposals) const;
    void validate() const;

    nlohmann::json to_json() const;
    static AcceptanceRule from_json(const nlohmann::json& j);

    friend bool operator==(const AcceptanceRule&, const AcceptanceRule&) = default;
};

// Accepted parameter draws with their distances, ascending.
struct PosteriorSample {
    MethodTag method = MethodTag::abc;
    AcceptanceRule rule;
    std::size_t proposals_total = 0;
    int param_dim = 0;

    std::vector<double> params;     // accepted x param_dim, row-major
    std::vector<double> distances;  // one per accepted row

    std::size_t size() const { return distances.size(); }
    std::span<const double> theta(std::size_t i) const {
        return {params.data() + i * static_cast<std::size_t>(param_dim),
                static_cast<std::size_t>(param_dim)};
    }
    // Marginal of one parameter component over the accepted draws.
    std::vector<double> component(int c) const;
};

// Euclidean distance between summary vectors; with `scales`, components are
// divided by the scales first. Scales must be positive.
double summary_distance(std::span<const double> a, std::span<const double> b);
double summary_distance(std::span<const double> a, std::span<const double> b,
                        std::span<const double> scales);

// Indices satisfying the rule, ascending. Input distances must be finite.
std::vector<std::size_t> select_accepted(std::span<const double> distances,
                                         const AcceptanceRule& rule);

// Per-component standard deviation over `rows` summary vectors stored
// row-major; zero-variance components get scale 1 (they carry no signal).
std::vector<double> standardization_scales(std::span<const double> summaries, std::size_t rows,
                                           std::size_t dim);

// Applies the rule to a block of proposal parameters/summaries and packages
// the accepted rows. Shared by the rejection engines and the study harness.
PosteriorSample select_posterior(MethodTag method, const AcceptanceRule& rule,
                                 std::span<const double> params, std::size_t param_dim,
                                 std::span<const double> summaries, std::size_t summary_dim,
                                 std::span<const double> s_obs);

// Rejection-sampling ABC: proposals_total parameter draws from the prior,
// each simulated mechanistically with n observations, accepted by summary
// distance to s_obs.
PosteriorSample run_abc(const Model& model, const SummaryVector& s_obs, std::size_t proposals,
                        const AcceptanceRule& rule, int n, SeedSpec seed, int workers = 1);

}  // namespace aabc
