#include "aabc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aabc/parallel.hpp"
#include "aabc/stats.hpp"

namespace aabc {

std::optional<double> rsse(std::span<const double> accepted, double truth) {
    const std::size_t r = accepted.size();
    if (r < 2) {
        return std::nullopt;
    }
    const double variance = sample_variance(accepted);
    if (!(variance > 0.0)) {
        return std::nullopt;
    }
    double ss = 0.0;
    for (const double a : accepted) {
        const double d = a - truth;
        ss += d * d;
    }
    return std::sqrt(ss / variance) / static_cast<double>(r);
}

RmseResult rmse(std::span<const std::optional<double>> rsse_values) {
    if (rsse_values.empty()) {
        throw std::invalid_argument("rmse: empty input");
    }
    RmseResult result;
    double sum = 0.0;
    for (const auto& v : rsse_values) {
        if (v.has_value()) {
            sum += *v;
            ++result.contributing;
        }
    }
    if (result.contributing == 0) {
        throw std::invalid_argument("rmse: every RSSE value is undefined");
    }
    result.value = sum / static_cast<double>(result.contributing);
    return result;
}

double percent_excess(double rmse_method, double rmse_abc) {
    if (!(rmse_abc > 0.0)) {
        throw std::invalid_argument("percent_excess: baseline RMSE must be positive");
    }
    return 100.0 * std::abs(rmse_method - rmse_abc) / rmse_abc;
}

double posterior_distance(const PosteriorSample& a, const PosteriorSample& b, int component) {
    if (a.size() == 0 || b.size() == 0) {
        throw std::invalid_argument("posterior_distance: empty posterior sample");
    }
    return ks_statistic(a.component(component), b.component(component));
}

void StudyConfig::validate() const {
    if (reference_size < 1) {
        throw std::invalid_argument("study: reference_size must be >= 1");
    }
    if (test_sets < 1 || test_sets > reference_size) {
        throw std::invalid_argument("study: require 1 <= test_sets <= reference_size");
    }
    if (m_grid.empty()) {
        throw std::invalid_argument("study: m_grid must be non-empty");
    }
    for (const std::size_t m : m_grid) {
        if (m < 1 || m > reference_size) {
            throw std::invalid_argument("study: every m must satisfy 1 <= m <= reference_size");
        }
    }
    if (n < 1) {
        throw std::invalid_argument("study: n must be >= 1");
    }
    if (methods.empty()) {
        throw std::invalid_argument("study: methods must be non-empty");
    }
    rule.validate();
}

nlohmann::json StudyConfig::to_json() const {
    nlohmann::json methods_json = nlohmann::json::array();
    for (const MethodTag m : methods) {
        methods_json.push_back(to_string(m));
    }
    return {{"reference_size", reference_size}, {"test_sets", test_sets}, {"m_grid", m_grid},
            {"n", n},                           {"rule", rule.to_json()}, {"methods", methods_json}};
}

StudyConfig StudyConfig::from_json(const nlohmann::json& j) {
    StudyConfig config;
    config.reference_size = j.at("reference_size").get<std::size_t>();
    config.test_sets = j.at("test_sets").get<std::size_t>();
    config.m_grid = j.at("m_grid").get<std::vector<std::size_t>>();
    config.n = j.at("n").get<int>();
    config.rule = AcceptanceRule::from_json(j.at("rule"));
    for (const auto& name : j.at("methods")) {
        config.methods.push_back(method_tag_from_string(name.get<std::string>()));
    }
    config.validate();
    return config;
}

namespace {

constexpr std::uint64_t kStudyRunPoolSize = 101;
constexpr std::uint64_t kStudyRunTest = 102;

StudyCell make_cell(MethodTag method, std::size_t m, std::size_t test_index,
                    const PosteriorSample& posterior, std::span<const double> truth) {
    StudyCell cell;
    cell.method = method;
    cell.m = m;
    cell.test_index = test_index;
    cell.accepted = posterior.size();
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    for (int c = 0; c < posterior.param_dim; ++c) {
        const auto marginal = posterior.component(c);
        const auto value = rsse(marginal, truth[static_cast<std::size_t>(c)]);
        cell.rsse_by_component.push_back(value.value_or(nan));
        cell.variance_by_component.push_back(marginal.size() >= 2 ? sample_variance(marginal) : nan);
    }
    return cell;
}

}  // namespace

StudyResult run_study(const Model& model, const StudyConfig& config, SeedSpec seed, int workers) {
    config.validate();
    const std::size_t M = config.reference_size;
    const auto param_dim = static_cast<std::size_t>(model.param_dim());
    const auto summary_dim = static_cast<std::size_t>(model.summary_dim());

    const ReferenceSet reference =
        build_reference_set(model, M, config.n, derive_stream(seed, kStudyReference, 0), workers);

    RngStream test_select(derive_stream(seed, kStudyTestSelect, 0));
    const auto test_indices = sample_indices_without_replacement(M, config.test_sets, test_select);

    // Observed summaries and truths come straight from the drawn realizations.
    std::vector<double> observed_summaries(config.test_sets * summary_dim);
    parallel_for(config.test_sets, workers, [&](std::size_t t) {
        const SummaryVector s = model.summarize(reference.dataset(test_indices[t]));
        std::copy(s.begin(), s.end(),
                  observed_summaries.begin() + static_cast<std::ptrdiff_t>(t * summary_dim));
    });

    StudyResult result;
    result.config = config;

    const bool wants_abc = std::find(config.methods.begin(), config.methods.end(), MethodTag::abc) !=
                           config.methods.end();

    for (const std::size_t m : config.m_grid) {
        ReferenceSet pool;
        if (m == M) {
            pool = reference;
        } else {
            RngStream sub_stream(derive_stream(seed, kStudyPoolSubsample, m));
            pool = subsample(reference, sample_indices_without_replacement(M, m, sub_stream));
        }

        std::vector<double> pool_summaries;
        if (wants_abc) {
            pool_summaries.resize(m * summary_dim);
            parallel_for(m, workers, [&](std::size_t i) {
                const SummaryVector s = model.summarize(pool.dataset(i));
                std::copy(s.begin(), s.end(),
                          pool_summaries.begin() + static_cast<std::ptrdiff_t>(i * summary_dim));
            });
        }

        for (const MethodTag method : config.methods) {
            const SeedSpec method_seed = derive_stream(
                derive_stream(seed, kStudyRun, static_cast<std::uint64_t>(method)), kStudyRunPoolSize, m);
            std::vector<StudyCell> cells(config.test_sets);
            // The budget-limited ABC cells are deterministic re-scorings of the
            // pool, so the loop over test sets parallelizes directly; the AABC
            // engines parallelize internally instead.
            if (method == MethodTag::abc) {
                parallel_for(config.test_sets, workers, [&](std::size_t t) {
                    const auto s_obs = std::span<const double>(observed_summaries)
                                           .subspan(t * summary_dim, summary_dim);
                    const PosteriorSample posterior =
                        select_posterior(MethodTag::abc, config.rule, pool.params, param_dim,
                                         pool_summaries, summary_dim, s_obs);
                    cells[t] = make_cell(method, m, t, posterior, reference.theta(test_indices[t]));
                });
            } else {
                for (std::size_t t = 0; t < config.test_sets; ++t) {
                    const auto s_obs_span = std::span<const double>(observed_summaries)
                                                .subspan(t * summary_dim, summary_dim);
                    const SummaryVector s_obs(s_obs_span.begin(), s_obs_span.end());
                    const SeedSpec run_seed = derive_stream(method_seed, kStudyRunTest, t);
                    AabcOptions options;
                    options.workers = workers;
                    const PosteriorSample posterior =
                        method == MethodTag::aabc
                            ? run_aabc(model, s_obs, pool, M, config.rule, run_seed, options)
                            : run_aabc_param_only(model, s_obs, pool, M, config.rule, config.n,
                                                  run_seed, options);
                    cells[t] = make_cell(method, m, t, posterior, reference.theta(test_indices[t]));
                }
            }
            result.cells.insert(result.cells.end(), cells.begin(), cells.end());
        }
    }

    // Aggregate RSSE -> RMSE per (method, m, component).
    for (const std::size_t m : config.m_grid) {
        for (const MethodTag method : config.methods) {
            for (int c = 0; c < model.param_dim(); ++c) {
                AccuracyRow row;
                row.method = method;
                row.m = m;
                row.component = c;
                double sum = 0.0;
                for (const StudyCell& cell : result.cells) {
                    if (cell.method != method || cell.m != m) {
                        continue;
                    }
                    const double v = cell.rsse_by_component[static_cast<std::size_t>(c)];
                    if (!std::isnan(v)) {
                        sum += v;
                        ++row.n_contributing;
                    }
                }
                row.rmse = row.n_contributing > 0 ? sum / static_cast<double>(row.n_contributing)
                                                  : std::numeric_limits<double>::quiet_NaN();
                result.rows.push_back(row);
            }
        }
    }

    // Percent excess against the full-budget ABC baseline, when present.
    const bool has_baseline = wants_abc && std::find(config.m_grid.begin(), config.m_grid.end(), M) !=
                                               config.m_grid.end();
    if (has_baseline) {
        std::vector<double> baseline(static_cast<std::size_t>(model.param_dim()),
                                     std::numeric_limits<double>::quiet_NaN());
        for (const AccuracyRow& row : result.rows) {
            if (row.method == MethodTag::abc && row.m == M && row.n_contributing > 0) {
                baseline[static_cast<std::size_t>(row.component)] = row.rmse;
            }
        }
        for (AccuracyRow& row : result.rows) {
            const double base = baseline[static_cast<std::size_t>(row.component)];
            if (!std::isnan(base) && base > 0.0 && row.n_contributing > 0) {
                row.percent_excess = percent_excess(row.rmse, base);
            }
        }
    }
    return result;
}

}  // namespace aabc
