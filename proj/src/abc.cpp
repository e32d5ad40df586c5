#include "aabc/abc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aabc/parallel.hpp"

namespace aabc {

std::string to_string(MethodTag tag) {
    switch (tag) {
        case MethodTag::abc:
            return "abc";
        case MethodTag::aabc:
            return "aabc";
        case MethodTag::aabc_param_only:
            return "aabc_param_only";
    }
    throw std::logic_error("unreachable method tag");
}

MethodTag method_tag_from_string(const std::string& name) {
    if (name == "abc") {
        return MethodTag::abc;
    }
    if (name == "aabc") {
        return MethodTag::aabc;
    }
    if (name == "aabc_param_only") {
        return MethodTag::aabc_param_only;
    }
    throw std::invalid_argument("unknown method: " + name);
}

AcceptanceRule AcceptanceRule::with_epsilon(double eps, bool standardize) {
    AcceptanceRule rule;
    rule.kind = Kind::epsilon;
    rule.epsilon = eps;
    rule.standardize = standardize;
    rule.validate();
    return rule;
}

AcceptanceRule AcceptanceRule::top_fraction(double fraction, bool standardize) {
    AcceptanceRule rule;
    rule.kind = Kind::top_percentile;
    rule.fraction = fraction;
    rule.standardize = standardize;
    rule.validate();
    return rule;
}

std::size_t AcceptanceRule::accepted_count(std::size_t proposals) const {
    if (kind != Kind::top_percentile) {
        throw std::logic_error("accepted_count is defined for the top_percentile rule only");
    }
    const double exact = fraction * static_cast<double>(proposals);
    auto count = static_cast<std::size_t>(std::ceil(exact));
    return std::min(std::max<std::size_t>(count, 1), proposals);
}

void AcceptanceRule::validate() const {
    if (kind == Kind::epsilon) {
        if (!(epsilon >= 0.0)) {
            throw std::invalid_argument("acceptance rule: epsilon must be >= 0");
        }
    } else {
        if (!(fraction > 0.0 && fraction <= 1.0)) {
            throw std::invalid_argument("acceptance rule: fraction must be in (0,1]");
        }
    }
}

nlohmann::json AcceptanceRule::to_json() const {
    nlohmann::json j{{"standardize", standardize}};
    if (kind == Kind::epsilon) {
        j["kind"] = "epsilon";
        j["epsilon"] = epsilon;
    } else {
        j["kind"] = "top_percentile";
        j["fraction"] = fraction;
    }
    return j;
}

AcceptanceRule AcceptanceRule::from_json(const nlohmann::json& j) {
    AcceptanceRule rule;
    const std::string kind = j.at("kind").get<std::string>();
    rule.standardize = j.value("standardize", false);
    if (kind == "epsilon") {
        rule.kind = Kind::epsilon;
        rule.epsilon = j.at("epsilon").get<double>();
    } else if (kind == "top_percentile") {
        rule.kind = Kind::top_percentile;
        rule.fraction = j.at("fraction").get<double>();
    } else {
        throw std::invalid_argument("acceptance rule: unknown kind '" + kind + "'");
    }
    rule.validate();
    return rule;
}

std::vector<double> PosteriorSample::component(int c) const {
    if (c < 0 || c >= param_dim) {
        throw std::out_of_range("PosteriorSample::component: index out of range");
    }
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out[i] = params[i * static_cast<std::size_t>(param_dim) + static_cast<std::size_t>(c)];
    }
    return out;
}

double summary_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("summary_distance: length mismatch");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double summary_distance(std::span<const double> a, std::span<const double> b,
                        std::span<const double> scales) {
    if (a.size() != b.size() || a.size() != scales.size()) {
        throw std::invalid_argument("summary_distance: length mismatch");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(scales[i] > 0.0)) {
            throw std::invalid_argument("summary_distance: scales must be positive");
        }
        const double d = (a[i] - b[i]) / scales[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

std::vector<std::size_t> select_accepted(std::span<const double> distances,
                                         const AcceptanceRule& rule) {
    if (distances.empty()) {
        throw std::invalid_argument("select_accepted: empty distances");
    }
    for (const double d : distances) {
        if (!std::isfinite(d)) {
            throw std::invalid_argument("select_accepted: distances must be finite");
        }
    }
    rule.validate();
    std::vector<std::size_t> accepted;
    if (rule.kind == AcceptanceRule::Kind::epsilon) {
        for (std::size_t i = 0; i < distances.size(); ++i) {
            if (distances[i] < rule.epsilon) {
                accepted.push_back(i);
            }
        }
        return accepted;  // may legitimately be empty
    }
    const std::size_t count = rule.accepted_count(distances.size());
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // (distance, index) ordering keeps ties at the cutoff deterministic.
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count - 1), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
                     });
    accepted.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

std::vector<double> standardization_scales(std::span<const double> summaries, std::size_t rows,
                                           std::size_t dim) {
    if (rows < 1 || summaries.size() != rows * dim) {
        throw std::invalid_argument("standardization_scales: shape mismatch");
    }
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
            mean[c] += summaries[i * dim + c];
        }
    }
    for (double& v : mean) {
        v /= static_cast<double>(rows);
    }
    std::vector<double> scales(dim, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double d = summaries[i * dim + c] - mean[c];
            scales[c] += d * d;
        }
    }
    for (double& v : scales) {
        v = rows > 1 ? std::sqrt(v / static_cast<double>(rows - 1)) : 0.0;
        if (!(v > 0.0)) {
            v = 1.0;
        }
    }
    return scales;
}

PosteriorSample select_posterior(MethodTag method, const AcceptanceRule& rule,
                                 std::span<const double> params, std::size_t param_dim,
                                 std::span<const double> summaries, std::size_t summary_dim,
                                 std::span<const double> s_obs) {
    if (param_dim == 0 || summary_dim == 0) {
        throw std::invalid_argument("select_posterior: zero dimension");
    }
    if (s_obs.size() != summary_dim) {
        throw std::invalid_argument("select_posterior: observed summary dimension mismatch");
    }
    const std::size_t rows = summaries.size() / summary_dim;
    if (rows == 0 || summaries.size() != rows * summary_dim || params.size() != rows * param_dim) {
        throw std::invalid_argument("select_posterior: shape mismatch");
    }

    std::vector<double> distances(rows);
    if (rule.standardize) {
        const auto scales = standardization_scales(summaries, rows, summary_dim);
        for (std::size_t i = 0; i < rows; ++i) {
            distances[i] =
                summary_distance(summaries.subspan(i * summary_dim, summary_dim), s_obs, scales);
        }
    } else {
        for (std::size_t i = 0; i < rows; ++i) {
            distances[i] = summary_distance(summaries.subspan(i * summary_dim, summary_dim), s_obs);
        }
    }

    const auto accepted = select_accepted(distances, rule);
    std::vector<std::size_t> order(accepted);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
    });

    PosteriorSample sample;
    sample.method = method;
    sample.rule = rule;
    sample.proposals_total = rows;
    sample.param_dim = static_cast<int>(param_dim);
    sample.params.reserve(order.size() * param_dim);
    sample.distances.reserve(order.size());
    for (const std::size_t i : order) {
        const auto theta = params.subspan(i * param_dim, param_dim);
        sample.params.insert(sample.params.end(), theta.begin(), theta.end());
        sample.distances.push_back(distances[i]);
    }
    return sample;
}

PosteriorSample run_abc(const Model& model, const SummaryVector& s_obs, std::size_t proposals,
                        const AcceptanceRule& rule, int n, SeedSpec seed, int workers) {
    if (proposals < 1) {
        throw std::invalid_argument("run_abc: need at least one proposal");
    }
    if (s_obs.size() != static_cast<std::size_t>(model.summary_dim())) {
        throw std::invalid_argument("run_abc: observed summary dimension mismatch");
    }
    const auto param_dim = static_cast<std::size_t>(model.param_dim());
    const auto summary_dim = static_cast<std::size_t>(model.summary_dim());
    std::vector<double> params(proposals * param_dim);
    std::vector<double> summaries(proposals * summary_dim);
    parallel_for(proposals, workers, [&](std::size_t i) {
        RngStream stream(derive_stream(seed, kProposal, i));
        const ParameterVector theta = model.sample_prior(stream);
        const DataSet data = model.simulate(theta, n, stream);
        const SummaryVector s = model.summarize(data);
        std::copy(theta.begin(), theta.end(), params.begin() + static_cast<std::ptrdiff_t>(i * param_dim));
        std::copy(s.begin(), s.end(), summaries.begin() + static_cast<std::ptrdiff_t>(i * summary_dim));
    });
    return select_posterior(MethodTag::abc, rule, params, param_dim, summaries, summary_dim, s_obs);
}

}  // namespace aabc
