#include "aabc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aabc {

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buffer, ptr);
}

namespace {

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::runtime_error("invalid numeric field: '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path.string());
    }
    return in;
}

}  // namespace

void write_posterior_csv(const PosteriorSample& sample, const ModelSpec& model, SeedSpec seed,
                         const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# format=aabc-posterior v1\n";
    out << "# method=" << to_string(sample.method) << '\n';
    out << "# rule=" << sample.rule.to_json().dump() << '\n';
    out << "# proposals=" << sample.proposals_total << '\n';
    out << "# model=" << model.id << '\n';
    out << "# root_seed=" << seed.root_seed << " stream_id=" << seed.stream_id << '\n';
    for (int c = 1; c <= sample.param_dim; ++c) {
        out << "theta_" << c << ',';
    }
    out << "distance\n";
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto theta = sample.theta(i);
        for (const double v : theta) {
            out << format_double(v) << ',';
        }
        out << format_double(sample.distances[i]) << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed while writing: " + path.string());
    }
}

PosteriorCsv read_posterior_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    PosteriorCsv csv;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const auto content_start = line.find_first_not_of("# ");
            if (content_start == std::string::npos) {
                continue;
            }
            const auto body = std::string_view(line).substr(content_start);
            const auto eq = body.find('=');
            if (eq != std::string_view::npos) {
                csv.metadata.emplace(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
            }
            continue;
        }
        const auto fields = split_csv(line);
        if (!saw_header) {
            if (fields.empty() || fields.back() != "distance") {
                throw std::runtime_error("posterior csv: malformed column header in " + path.string());
            }
            csv.param_dim = static_cast<int>(fields.size()) - 1;
            saw_header = true;
            continue;
        }
        if (fields.size() != static_cast<std::size_t>(csv.param_dim) + 1) {
            throw std::runtime_error("posterior csv: wrong field count in " + path.string());
        }
        for (int c = 0; c < csv.param_dim; ++c) {
            csv.params.push_back(parse_double(fields[static_cast<std::size_t>(c)]));
        }
        csv.distances.push_back(parse_double(fields.back()));
    }
    if (!saw_header) {
        throw std::runtime_error("posterior csv: missing column header in " + path.string());
    }
    return csv;
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# format=aabc-report v1\n";
    out << "method,m,component,rmse,n_contributing,percent_excess\n";
    for (const ReportRow& row : rows) {
        out << row.method << ',' << row.m << ',' << row.component << ',' << format_double(row.rmse)
            << ',' << row.n_contributing << ',' << format_double(row.percent_excess) << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed while writing: " + path.string());
    }
}

std::vector<ReportRow> read_report_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<ReportRow> rows;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!saw_header) {
            saw_header = true;  // column header
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 6) {
            throw std::runtime_error("report csv: wrong field count in " + path.string());
        }
        ReportRow row;
        row.method = std::string(fields[0]);
        row.m = static_cast<std::size_t>(parse_double(fields[1]));
        row.component = static_cast<int>(parse_double(fields[2]));
        row.rmse = parse_double(fields[3]);
        row.n_contributing = static_cast<std::size_t>(parse_double(fields[4]));
        row.percent_excess = parse_double(fields[5]);
        rows.push_back(row);
    }
    if (!saw_header) {
        throw std::runtime_error("report csv: missing column header in " + path.string());
    }
    return rows;
}

void write_plotdata_from_posterior(const PosteriorCsv& posterior, int bins,
                                   const std::filesystem::path& path) {
    if (bins < 1) {
        throw std::invalid_argument("plotdata: bins must be >= 1");
    }
    auto out = open_out(path);
    out << "# format=aabc-plotdata v1\n";
    out << "# source=posterior bins=" << bins << '\n';
    out << "component,bin,lo,hi,count\n";
    const std::size_t rows = posterior.rows();
    if (rows == 0) {
        return;
    }
    for (int c = 0; c < posterior.param_dim; ++c) {
        std::vector<double> values(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            values[i] = posterior.params[i * static_cast<std::size_t>(posterior.param_dim) +
                                         static_cast<std::size_t>(c)];
        }
        const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
        const double lo = *min_it;
        const double hi = *max_it;
        std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
        const double width = hi > lo ? (hi - lo) / bins : 1.0;
        for (const double v : values) {
            auto b = hi > lo ? static_cast<std::size_t>((v - lo) / width) : std::size_t{0};
            b = std::min(b, static_cast<std::size_t>(bins) - 1);
            ++counts[b];
        }
        for (int b = 0; b < bins; ++b) {
            out << c << ',' << b << ',' << format_double(lo + b * width) << ','
                << format_double(lo + (b + 1) * width) << ',' << counts[static_cast<std::size_t>(b)]
                << '\n';
        }
    }
    if (!out) {
        throw std::runtime_error("failed while writing: " + path.string());
    }
}

void write_plotdata_from_report(const std::vector<ReportRow>& rows,
                                const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# format=aabc-plotdata v1\n";
    out << "# source=report series=rmse-vs-m\n";
    out << "method,component,m,rmse\n";
    for (const ReportRow& row : rows) {
        out << row.method << ',' << row.component << ',' << row.m << ',' << format_double(row.rmse)
            << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed while writing: " + path.string());
    }
}

std::string detect_csv_format(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("# format=", 0) == 0) {
            const auto rest = line.substr(9);
            const auto space = rest.find(' ');
            return rest.substr(0, space);
        }
        if (!line.empty() && line[0] != '#') {
            break;
        }
    }
    throw std::runtime_error("no format tag found in " + path.string());
}

}  // namespace aabc
