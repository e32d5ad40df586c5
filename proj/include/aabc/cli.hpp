#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace aabc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitEmptyPosterior = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reads a config file; a manifest written by a previous run is accepted too
// (its embedded config is extracted), so any output directory can be re-run.
nlohmann::json load_config(const std::filesystem::path& path);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> workers;
};

nlohmann::json apply_overrides(nlohmann::json config, const Overrides& overrides);

// Each command is a pure function of (config, seed) to output bytes; logs go
// to `log`, never into output files.
int run_build_pool(const nlohmann::json& config, std::ostream& log);
int run_infer(const nlohmann::json& config, std::ostream& log);
int run_study(const nlohmann::json& config, std::ostream& log);
int run_export_plotdata(const std::filesystem::path& input, const std::filesystem::path& out_file,
                        int bins, std::ostream& log);

// Maps exceptions from the run_* functions onto exit codes.
int guarded(const std::function<int()>& fn, std::ostream& log);

}  // namespace aabc::cli
