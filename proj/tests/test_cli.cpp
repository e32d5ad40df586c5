#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aabc/cli.hpp"
#include "aabc/io.hpp"
#include "aabc/reference_set.hpp"

using namespace aabc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "aabc_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

nlohmann::json toy_model_json() {
    return {{"id", "admix"}, {"config", {{"N", 120}, {"t", 3}, {"n", 30}}}};
}

nlohmann::json infer_config(const fs::path& out, const std::string& method) {
    nlohmann::json config{
        {"model", toy_model_json()},
        {"method", method},
        {"proposals", 200},
        {"rule", {{"kind", "top_percentile"}, {"fraction", 0.05}}},
        {"observed", {{"truth", {0.3, 0.2, 0.5}}, {"n", 30}}},
        {"seed", 11},
        {"out", out.string()},
    };
    if (method != "abc") {
        config["pool"] = {{"m", 40}};
    }
    return config;
}

}  // namespace

TEST_CASE("build-pool writes a loadable pool and manifest") {
    const auto out = fresh_dir("build_pool");
    nlohmann::json config{{"model", toy_model_json()},
                          {"pool", {{"m", 25}}},
                          {"seed", 5},
                          {"out", out.string()}};
    std::ostringstream log;
    CHECK(cli::run_build_pool(config, log) == cli::kExitOk);
    const auto pool = load_reference_set(out / "pool.bin");
    CHECK(pool.size() == 25);
    CHECK(pool.n == 30);  // n defaulted from the model config
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["command"] == "build-pool");
    CHECK(manifest["config"]["pool"]["n"] == 30);
}

TEST_CASE("build-pool reruns are byte-identical") {
    const auto out1 = fresh_dir("pool_rerun_1");
    const auto out2 = fresh_dir("pool_rerun_2");
    nlohmann::json config{{"model", toy_model_json()},
                          {"pool", {{"m", 15}}},
                          {"seed", 9},
                          {"out", out1.string()}};
    std::ostringstream log;
    REQUIRE(cli::run_build_pool(config, log) == cli::kExitOk);
    config["out"] = out2.string();
    REQUIRE(cli::run_build_pool(config, log) == cli::kExitOk);
    CHECK(slurp(out1 / "pool.bin") == slurp(out2 / "pool.bin"));
}

TEST_CASE("infer with each method produces the expected row count") {
    for (const std::string method : {"abc", "aabc", "aabc_param_only"}) {
        const auto out = fresh_dir("infer_" + method);
        std::ostringstream log;
        CHECK(cli::run_infer(infer_config(out, method), log) == cli::kExitOk);
        const auto posterior = read_posterior_csv(out / "posterior.csv");
        CHECK(posterior.rows() == 10);  // ceil(0.05 * 200)
        CHECK(posterior.param_dim == 3);
        CHECK(posterior.metadata.at("method") == method);
        CHECK(fs::exists(out / "observed.csv"));
    }
}

TEST_CASE("manifest round-trips into an identical rerun") {
    const auto out1 = fresh_dir("manifest_roundtrip_1");
    std::ostringstream log;
    REQUIRE(cli::run_infer(infer_config(out1, "aabc"), log) == cli::kExitOk);
    // Re-run from the manifest exactly as `--config manifest.json` would.
    const auto rerun_config = cli::load_config(out1 / "manifest.json");
    const auto out2 = fresh_dir("manifest_roundtrip_2");
    const auto overridden = cli::apply_overrides(rerun_config, {{}, out2.string(), {}});
    REQUIRE(cli::run_infer(overridden, log) == cli::kExitOk);
    CHECK(slurp(out1 / "posterior.csv") == slurp(out2 / "posterior.csv"));
    CHECK(slurp(out1 / "observed.csv") == slurp(out2 / "observed.csv"));
}

TEST_CASE("config validation failures exit with the config code") {
    std::ostringstream log;
    SUBCASE("missing model") {
        CHECK(cli::guarded([&] { return cli::run_infer(nlohmann::json{{"out", "x"}}, log); }, log) ==
              cli::kExitConfigError);
    }
    SUBCASE("pool given both path and m") {
        auto config = infer_config(fresh_dir("bad_pool"), "aabc");
        config["pool"] = {{"path", "nope.bin"}, {"m", 10}};
        CHECK(cli::guarded([&] { return cli::run_infer(config, log); }, log) ==
              cli::kExitConfigError);
    }
    SUBCASE("observed given both path and truth") {
        auto config = infer_config(fresh_dir("bad_observed"), "abc");
        config["observed"] = {{"path", "obs.csv"}, {"truth", {0.3, 0.2, 0.5}}};
        CHECK(cli::guarded([&] { return cli::run_infer(config, log); }, log) ==
              cli::kExitConfigError);
    }
    SUBCASE("abc with a pool section") {
        auto config = infer_config(fresh_dir("abc_pool"), "abc");
        config["pool"] = {{"m", 10}};
        CHECK(cli::guarded([&] { return cli::run_infer(config, log); }, log) ==
              cli::kExitConfigError);
    }
    SUBCASE("unknown model id") {
        auto config = infer_config(fresh_dir("bad_model"), "abc");
        config["model"] = {{"id", "mystery"}};
        CHECK(cli::guarded([&] { return cli::run_infer(config, log); }, log) ==
              cli::kExitConfigError);
    }
}

TEST_CASE("missing pool file exits with the i/o code") {
    std::ostringstream log;
    auto config = infer_config(fresh_dir("missing_pool"), "aabc");
    config["pool"] = {{"path", "/nonexistent/pool.bin"}};
    CHECK(cli::guarded([&] { return cli::run_infer(config, log); }, log) == cli::kExitIoError);
}

TEST_CASE("an epsilon rule that accepts nothing exits with its own status") {
    std::ostringstream log;
    const auto out = fresh_dir("empty_posterior");
    auto config = infer_config(out, "abc");
    config["rule"] = {{"kind", "epsilon"}, {"epsilon", 1e-12}};
    CHECK(cli::guarded([&] { return cli::run_infer(config, log); }, log) ==
          cli::kExitEmptyPosterior);
    const auto posterior = read_posterior_csv(out / "posterior.csv");
    CHECK(posterior.rows() == 0);  // valid header, no rows
}

TEST_CASE("study command writes the report") {
    const auto out = fresh_dir("study_cmd");
    nlohmann::json config{
        {"model", toy_model_json()},
        {"study",
         {{"reference_size", 120},
          {"test_sets", 4},
          {"m_grid", {30, 120}},
          {"rule", {{"kind", "top_percentile"}, {"fraction", 0.05}}},
          {"methods", {"abc", "aabc"}}}},
        {"seed", 21},
        {"out", out.string()},
    };
    std::ostringstream log;
    CHECK(cli::run_study(config, log) == cli::kExitOk);
    const auto rows = read_report_csv(out / "report.csv");
    CHECK(rows.size() == 2 * 2 * 3);
}

TEST_CASE("plotdata bins conserve the accepted count") {
    const auto out = fresh_dir("plotdata");
    std::ostringstream log;
    REQUIRE(cli::run_infer(infer_config(out, "aabc"), log) == cli::kExitOk);
    REQUIRE(cli::run_export_plotdata(out / "posterior.csv", out / "plot.csv", 40, log) ==
            cli::kExitOk);
    std::ifstream in(out / "plot.csv");
    std::string line;
    std::size_t total = 0;
    std::size_t rows = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!saw_header) {
            CHECK(line == "component,bin,lo,hi,count");
            saw_header = true;
            continue;
        }
        ++rows;
        const auto last_comma = line.rfind(',');
        total += static_cast<std::size_t>(std::stoul(line.substr(last_comma + 1)));
    }
    CHECK(rows == 3 * 40);
    CHECK(total == 3 * 10);  // bins per component sum to the accepted rows
}

TEST_CASE("plotdata from a report reshapes the rmse series") {
    const auto out = fresh_dir("plotdata_report");
    std::vector<ReportRow> rows;
    for (const std::size_t m : {10, 100}) {
        ReportRow row;
        row.method = "aabc";
        row.m = m;
        row.component = 0;
        row.rmse = 0.5;
        row.n_contributing = 4;
        row.percent_excess = 1.0;
        rows.push_back(row);
    }
    write_report_csv(rows, out / "report.csv");
    std::ostringstream log;
    REQUIRE(cli::run_export_plotdata(out / "report.csv", out / "plot.csv", 40, log) == cli::kExitOk);
    const auto text = slurp(out / "plot.csv");
    CHECK(text.find("method,component,m,rmse") != std::string::npos);
    CHECK(text.find("aabc,0,10,0.5") != std::string::npos);
    CHECK(text.find("aabc,0,100,0.5") != std::string::npos);
}

TEST_CASE("empty posterior still yields a valid plotdata header") {
    const auto out = fresh_dir("plotdata_empty");
    PosteriorSample empty;
    empty.param_dim = 2;
    empty.rule = AcceptanceRule::with_epsilon(1e-12);
    write_posterior_csv(empty, ModelSpec{"admix", {}}, SeedSpec{1, 0}, out / "posterior.csv");
    std::ostringstream log;
    REQUIRE(cli::run_export_plotdata(out / "posterior.csv", out / "plot.csv", 40, log) ==
            cli::kExitOk);
    const auto text = slurp(out / "plot.csv");
    CHECK(text.find("component,bin,lo,hi,count") != std::string::npos);
}
