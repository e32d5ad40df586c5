#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aabc/abc.hpp"
#include "aabc/model.hpp"

namespace aabc {

// Shortest decimal text that round-trips the exact double.
std::string format_double(double value);

// theta_1..theta_p,distance rows, preceded by `#` metadata lines recording
// method, rule, proposal count and seed.
void write_posterior_csv(const PosteriorSample& sample, const ModelSpec& model, SeedSpec seed,
                         const std::filesystem::path& path);

struct PosteriorCsv {
    std::map<std::string, std::string> metadata;
    int param_dim = 0;
    std::vector<double> params;     // rows x param_dim
    std::vector<double> distances;  // one per row
    std::size_t rows() const {
        return param_dim == 0 ? 0 : params.size() / static_cast<std::size_t>(param_dim);
    }
};

PosteriorCsv read_posterior_csv(const std::filesystem::path& path);

struct ReportRow {
    std::string method;
    std::size_t m = 0;
    int component = 0;
    double rmse = 0.0;
    std::size_t n_contributing = 0;
    double percent_excess = 0.0;  // NaN when no baseline exists
};

void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& path);
std::vector<ReportRow> read_report_csv(const std::filesystem::path& path);

// Long-format data for external plotting. Posteriors become per-component
// histogram bins; reports become rmse-vs-m series.
void write_plotdata_from_posterior(const PosteriorCsv& posterior, int bins,
                                   const std::filesystem::path& path);
void write_plotdata_from_report(const std::vector<ReportRow>& rows,
                                const std::filesystem::path& path);

// First `# format=...` tag of a CSV written by this toolkit.
std::string detect_csv_format(const std::filesystem::path& path);

}  // namespace aabc
