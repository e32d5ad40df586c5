#include "aabc/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>

#include "aabc/aabc.hpp"
#include "aabc/abc.hpp"
#include "aabc/evaluation.hpp"
#include "aabc/io.hpp"
#include "aabc/model.hpp"
#include "aabc/reference_set.hpp"

namespace aabc::cli {

namespace {

using nlohmann::json;

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Resolved {
    json config;
    std::unique_ptr<Model> model;
    SeedSpec seed;
    std::filesystem::path out;
    int workers = 1;
};

Resolved resolve_common(const json& config) {
    Resolved r;
    r.config = config;
    if (!config.contains("model") || !config["model"].contains("id")) {
        throw ConfigError("config: missing model.id");
    }
    const std::string id = config["model"]["id"].get<std::string>();
    const json model_config = config["model"].value("config", json::object());
    try {
        r.model = make_model(id, model_config);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    // Persist the fully-resolved model config so manifests re-run identically
    // even when the input relied on defaults.
    r.config["model"] = {{"id", id}, {"config", r.model->spec().config}};
    r.seed = SeedSpec{config.value("seed", std::uint64_t{0}), 0};
    r.config["seed"] = r.seed.root_seed;
    if (!config.contains("out")) {
        throw ConfigError("config: missing output directory ('out')");
    }
    r.out = config["out"].get<std::string>();
    r.workers = config.value("workers", 1);
    if (r.workers < 1) {
        throw ConfigError("config: workers must be >= 1");
    }
    r.config["workers"] = r.workers;
    std::filesystem::create_directories(r.out);
    return r;
}

int resolve_sample_size(const json& section, const Model& model, const char* what) {
    if (section.contains("n")) {
        return section["n"].get<int>();
    }
    if (model.spec().config.contains("n")) {
        return model.spec().config["n"].get<int>();
    }
    throw ConfigError(std::string("config: ") + what + " needs 'n' (observations per data set)");
}

void write_manifest(const std::filesystem::path& out, const std::string& command,
                    const json& resolved_config, const json& outputs, const json& summary) {
    json manifest{{"format", "aabc-manifest"}, {"version", 1},       {"command", command},
                  {"config", resolved_config}, {"outputs", outputs}, {"summary", summary}};
    std::ofstream f(out / "manifest.json");
    if (!f) {
        throw std::runtime_error("cannot write manifest in " + out.string());
    }
    f << manifest.dump(2) << '\n';
}

DataSet load_observed_csv(const std::filesystem::path& path, int obs_dim) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open observed-data file: " + path.string());
    }
    std::vector<double> values;
    std::string line;
    std::size_t rows = 0;
    bool maybe_header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<double> row;
        bool numeric = true;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size() && numeric; ++i) {
            if (i == line.size() || line[i] == ',') {
                try {
                    row.push_back(std::stod(std::string(line.substr(start, i - start))));
                } catch (...) {
                    numeric = false;
                }
                start = i + 1;
            }
        }
        if (!numeric) {
            if (maybe_header) {
                maybe_header = false;  // tolerate one column-header line
                continue;
            }
            throw std::runtime_error("observed-data file has non-numeric row: " + path.string());
        }
        maybe_header = false;
        if (row.size() != static_cast<std::size_t>(obs_dim)) {
            throw std::runtime_error("observed-data row has " + std::to_string(row.size()) +
                                     " columns, expected " + std::to_string(obs_dim));
        }
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) {
        throw std::runtime_error("observed-data file is empty: " + path.string());
    }
    return DataSet(static_cast<int>(rows), obs_dim, std::move(values));
}

void write_observed_csv(const DataSet& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write observed data: " + path.string());
    }
    out << "# format=aabc-observed v1\n";
    for (int i = 0; i < data.n(); ++i) {
        const auto row = data.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << format_double(row[c]) << (c + 1 == row.size() ? '\n' : ',');
        }
    }
}

// Observed data is either loaded from disk or synthesized from a stated (or
// prior-drawn) truth; exactly one of the two must be configured.
DataSet resolve_observed(const json& config, const Resolved& r, json& resolved_observed,
                         bool& synthesized) {
    if (!config.contains("observed")) {
        throw ConfigError("config: missing 'observed' (path or truth spec)");
    }
    const json& obs = config["observed"];
    const bool has_path = obs.contains("path");
    const bool has_truth = obs.contains("truth");
    if (has_path == has_truth) {
        throw ConfigError("config: 'observed' needs exactly one of 'path' or 'truth'");
    }
    if (has_path) {
        resolved_observed = obs;
        synthesized = false;
        return load_observed_csv(obs["path"].get<std::string>(), r.model->obs_dim());
    }
    const int n_obs = obs.contains("n") ? obs["n"].get<int>()
                                        : resolve_sample_size(json::object(), *r.model, "observed");
    RngStream stream(derive_stream(r.seed, kObservedSynthesis, 0));
    ParameterVector truth;
    if (obs["truth"].is_string() && obs["truth"].get<std::string>() == "prior") {
        truth = r.model->sample_prior(stream);
    } else if (obs["truth"].is_array()) {
        truth = obs["truth"].get<ParameterVector>();
    } else {
        throw ConfigError("config: observed.truth must be \"prior\" or a parameter array");
    }
    synthesized = true;
    resolved_observed = {{"truth", obs["truth"]}, {"n", n_obs}};
    return r.model->simulate(truth, n_obs, stream);
}

}  // namespace

json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    if (j.is_object() && j.value("format", "") == "aabc-manifest") {
        if (!j.contains("config")) {
            throw ConfigError("manifest has no embedded config: " + path.string());
        }
        return j["config"];
    }
    return j;
}

json apply_overrides(json config, const Overrides& overrides) {
    if (overrides.seed) {
        config["seed"] = *overrides.seed;
    }
    if (overrides.out) {
        config["out"] = *overrides.out;
    }
    if (overrides.workers) {
        config["workers"] = *overrides.workers;
    }
    return config;
}

int run_build_pool(const json& config, std::ostream& log) {
    Stopwatch timer;
    Resolved r = resolve_common(config);
    if (!config.contains("pool")) {
        throw ConfigError("config: build-pool needs a 'pool' section");
    }
    const json& pool_cfg = config["pool"];
    if (!pool_cfg.contains("m")) {
        throw ConfigError("config: pool.m (number of realizations) is required");
    }
    const auto m = pool_cfg["m"].get<std::size_t>();
    const int n = resolve_sample_size(pool_cfg, *r.model, "pool");
    r.config["pool"] = {{"m", m}, {"n", n}};
    if (pool_cfg.value("csv", false)) {
        r.config["pool"]["csv"] = true;
    }

    const ReferenceSet pool =
        build_reference_set(*r.model, m, n, derive_stream(r.seed, kPoolBuild, 0), r.workers);
    save_reference_set(pool, r.out / "pool.bin");
    json outputs{{"pool", "pool.bin"}};
    if (pool_cfg.value("csv", false)) {
        export_reference_set_csv(pool, r.out / "pool.csv");
        outputs["csv"] = "pool.csv";
    }
    write_manifest(r.out, "build-pool", r.config, outputs, {{"m", m}, {"n", n}});
    log << "pool: m=" << m << " n=" << n << " model=" << r.model->spec().id
        << " elapsed=" << timer.seconds() << "s\n";
    return kExitOk;
}

int run_infer(const json& config, std::ostream& log) {
    Stopwatch timer;
    Resolved r = resolve_common(config);
    if (!config.contains("method")) {
        throw ConfigError("config: missing 'method'");
    }
    MethodTag method;
    try {
        method = method_tag_from_string(config["method"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!config.contains("proposals")) {
        throw ConfigError("config: missing 'proposals'");
    }
    const auto proposals = config["proposals"].get<std::size_t>();
    if (proposals < 1) {
        throw ConfigError("config: proposals must be >= 1");
    }
    AcceptanceRule rule;
    try {
        rule = AcceptanceRule::from_json(config.at("rule"));
    } catch (const json::exception& e) {
        throw ConfigError("config: bad 'rule': " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    r.config["rule"] = rule.to_json();

    json resolved_observed;
    bool synthesized = false;
    const DataSet observed = resolve_observed(config, r, resolved_observed, synthesized);
    r.config["observed"] = resolved_observed;
    const SummaryVector s_obs = r.model->summarize(observed);

    json outputs{{"posterior", "posterior.csv"}};
    if (synthesized) {
        write_observed_csv(observed, r.out / "observed.csv");
        outputs["observed"] = "observed.csv";
    }

    const bool needs_pool = method != MethodTag::abc;
    ReferenceSet pool;
    if (needs_pool) {
        if (!config.contains("pool")) {
            throw ConfigError("config: AABC methods need a 'pool' section (path, or m to build)");
        }
        const json& pool_cfg = config["pool"];
        const bool has_path = pool_cfg.contains("path");
        const bool has_m = pool_cfg.contains("m");
        if (has_path == has_m) {
            throw ConfigError("config: pool needs exactly one of 'path' or 'm'");
        }
        if (has_path) {
            pool = load_reference_set(pool_cfg["path"].get<std::string>());
            try {
                require_pool_matches_model(pool, *r.model);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        } else {
            const auto m = pool_cfg["m"].get<std::size_t>();
            const int pool_n = resolve_sample_size(pool_cfg, *r.model, "pool");
            pool = build_reference_set(*r.model, m, pool_n, derive_stream(r.seed, kPoolBuild, 0),
                                       r.workers);
            save_reference_set(pool, r.out / "pool.bin");
            outputs["pool"] = "pool.bin";
            r.config["pool"] = {{"m", m}, {"n", pool_n}};
        }
    } else if (config.contains("pool")) {
        throw ConfigError("config: method 'abc' does not use a pool");
    }

    const SeedSpec engine_seed = derive_stream(r.seed, kProposal, 0);
    PosteriorSample posterior;
    if (method == MethodTag::abc) {
        const int n = config.contains("n") ? config["n"].get<int>() : observed.n();
        r.config["n"] = n;
        posterior = run_abc(*r.model, s_obs, proposals, rule, n, engine_seed, r.workers);
    } else {
        AabcOptions options;
        options.workers = r.workers;
        options.scale_parameter_distance = config.value("scale_parameter_distance", false);
        r.config["scale_parameter_distance"] = options.scale_parameter_distance;
        if (method == MethodTag::aabc) {
            posterior = run_aabc(*r.model, s_obs, pool, proposals, rule, engine_seed, options);
        } else {
            const int n = config.contains("n") ? config["n"].get<int>() : pool.n;
            r.config["n"] = n;
            posterior =
                run_aabc_param_only(*r.model, s_obs, pool, proposals, rule, n, engine_seed, options);
        }
    }

    write_posterior_csv(posterior, r.model->spec(), r.seed, r.out / "posterior.csv");
    write_manifest(r.out, "infer", r.config, outputs,
                   {{"method", to_string(method)},
                    {"proposals", posterior.proposals_total},
                    {"accepted", posterior.size()}});
    log << "infer: method=" << to_string(method) << " proposals=" << posterior.proposals_total
        << " accepted=" << posterior.size() << " elapsed=" << timer.seconds() << "s\n";
    if (posterior.size() == 0) {
        log << "no proposals satisfied the epsilon rule; posterior is empty\n";
        return kExitEmptyPosterior;
    }
    return kExitOk;
}

int run_study(const json& config, std::ostream& log) {
    Stopwatch timer;
    Resolved r = resolve_common(config);
    if (!config.contains("study")) {
        throw ConfigError("config: missing 'study' section");
    }
    json study_cfg = config["study"];
    if (!study_cfg.contains("n")) {
        study_cfg["n"] = resolve_sample_size(study_cfg, *r.model, "study");
    }
    if (!study_cfg.contains("methods")) {
        study_cfg["methods"] = {"abc", "aabc", "aabc_param_only"};
    }
    StudyConfig study;
    try {
        study = StudyConfig::from_json(study_cfg);
    } catch (const json::exception& e) {
        throw ConfigError("config: bad 'study': " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    r.config["study"] = study.to_json();

    const StudyResult result =
        aabc::run_study(*r.model, study, derive_stream(r.seed, kStudyReference, 1), r.workers);

    std::vector<ReportRow> rows;
    rows.reserve(result.rows.size());
    for (const AccuracyRow& row : result.rows) {
        ReportRow out_row;
        out_row.method = to_string(row.method);
        out_row.m = row.m;
        out_row.component = row.component;
        out_row.rmse = row.rmse;
        out_row.n_contributing = row.n_contributing;
        out_row.percent_excess =
            row.percent_excess.value_or(std::numeric_limits<double>::quiet_NaN());
        rows.push_back(out_row);
    }
    write_report_csv(rows, r.out / "report.csv");
    write_manifest(r.out, "study", r.config, {{"report", "report.csv"}},
                   {{"cells", result.cells.size()}, {"rows", result.rows.size()}});
    log << "study: cells=" << result.cells.size() << " rows=" << result.rows.size()
        << " elapsed=" << timer.seconds() << "s\n";
    return kExitOk;
}

int run_export_plotdata(const std::filesystem::path& input, const std::filesystem::path& out_file,
                        int bins, std::ostream& log) {
    Stopwatch timer;
    if (bins < 1) {
        throw ConfigError("export-plotdata: bins must be >= 1");
    }
    const std::string format = detect_csv_format(input);
    if (format == "aabc-posterior") {
        write_plotdata_from_posterior(read_posterior_csv(input), bins, out_file);
    } else if (format == "aabc-report") {
        write_plotdata_from_report(read_report_csv(input), out_file);
    } else {
        throw ConfigError("export-plotdata: unsupported input format '" + format + "'");
    }
    log << "plotdata: input=" << input.string() << " out=" << out_file.string()
        << " elapsed=" << timer.seconds() << "s\n";
    return kExitOk;
}

int guarded(const std::function<int()>& fn, std::ostream& log) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const nlohmann::json::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::domain_error& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        log << "i/o error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::exception& e) {
        log << "i/o error: " << e.what() << '\n';
        return kExitIoError;
    }
}

}  // namespace aabc::cli
