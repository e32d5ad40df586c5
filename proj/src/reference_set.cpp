#include "aabc/reference_set.hpp"

#include <fstream>
#include <stdexcept>

#include "aabc/io.hpp"
#include "aabc/parallel.hpp"

namespace aabc {

ReferenceSet build_reference_set(const Model& model, std::size_t m, int n, SeedSpec seed, int workers) {
    if (m < 1) {
        throw std::invalid_argument("build_reference_set: m must be >= 1");
    }
    if (n < 1) {
        throw std::invalid_argument("build_reference_set: n must be >= 1");
    }
    ReferenceSet set;
    set.model = model.spec();
    set.n = n;
    set.param_dim = model.param_dim();
    set.obs_dim = model.obs_dim();
    set.seed = seed;
    set.params.resize(m * static_cast<std::size_t>(set.param_dim));
    set.data.resize(m * static_cast<std::size_t>(n) * set.obs_dim);

    const std::size_t data_stride = static_cast<std::size_t>(n) * set.obs_dim;
    parallel_for(m, workers, [&](std::size_t i) {
        RngStream stream(derive_stream(seed, kPoolRealization, i));
        const ParameterVector theta = model.sample_prior(stream);
        const DataSet data = model.simulate(theta, n, stream);
        std::copy(theta.begin(), theta.end(),
                  set.params.begin() + static_cast<std::ptrdiff_t>(i * set.param_dim));
        std::copy(data.values().begin(), data.values().end(),
                  set.data.begin() + static_cast<std::ptrdiff_t>(i * data_stride));
    });
    return set;
}

namespace {

nlohmann::json pool_header(const ReferenceSet& set) {
    return {{"format", "aabc-pool"},
            {"version", 1},
            {"model_id", set.model.id},
            {"model_config", set.model.config},
            {"param_dim", set.param_dim},
            {"obs_dim", set.obs_dim},
            {"n", set.n},
            {"m", set.size()},
            {"root_seed", set.seed.root_seed},
            {"stream_id", set.seed.stream_id}};
}

}  // namespace

void save_reference_set(const ReferenceSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open pool file for writing: " + path.string());
    }
    out << pool_header(set).dump() << '\n';
    const std::size_t data_stride = static_cast<std::size_t>(set.n) * set.obs_dim;
    for (std::size_t i = 0; i < set.size(); ++i) {
        out.write(reinterpret_cast<const char*>(set.params.data() + i * set.param_dim),
                  static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(set.param_dim)));
        out.write(reinterpret_cast<const char*>(set.data.data() + i * data_stride),
                  static_cast<std::streamsize>(sizeof(double) * data_stride));
    }
    if (!out) {
        throw std::runtime_error("failed while writing pool file: " + path.string());
    }
}

ReferenceSet load_reference_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open pool file: " + path.string());
    }
    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw std::runtime_error("pool file has no header: " + path.string());
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("pool header is not valid JSON: " + std::string(e.what()));
    }
    if (header.value("format", "") != "aabc-pool" || header.value("version", 0) != 1) {
        throw std::runtime_error("unrecognized pool format in " + path.string());
    }

    ReferenceSet set;
    set.model.id = header.at("model_id").get<std::string>();
    if (!is_known_model(set.model.id)) {
        throw std::runtime_error("pool references unknown model id: " + set.model.id);
    }
    set.model.config = header.at("model_config");
    set.param_dim = header.at("param_dim").get<int>();
    set.obs_dim = header.at("obs_dim").get<int>();
    set.n = header.at("n").get<int>();
    set.seed.root_seed = header.at("root_seed").get<std::uint64_t>();
    set.seed.stream_id = header.at("stream_id").get<std::uint64_t>();
    const auto m = header.at("m").get<std::size_t>();
    if (set.param_dim < 1 || set.obs_dim < 1 || set.n < 1 || m < 1) {
        throw std::runtime_error("pool header has invalid dimensions: " + path.string());
    }

    set.params.resize(m * static_cast<std::size_t>(set.param_dim));
    set.data.resize(m * static_cast<std::size_t>(set.n) * set.obs_dim);
    const std::size_t data_stride = static_cast<std::size_t>(set.n) * set.obs_dim;
    for (std::size_t i = 0; i < m; ++i) {
        in.read(reinterpret_cast<char*>(set.params.data() + i * set.param_dim),
                static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(set.param_dim)));
        in.read(reinterpret_cast<char*>(set.data.data() + i * data_stride),
                static_cast<std::streamsize>(sizeof(double) * data_stride));
        if (!in) {
            throw std::runtime_error("pool payload truncated: header records m=" + std::to_string(m) +
                                     " but row " + std::to_string(i) + " is incomplete");
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw std::runtime_error("pool payload has trailing bytes beyond m=" + std::to_string(m) +
                                 " records");
    }
    return set;
}

void export_reference_set_csv(const ReferenceSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open csv file for writing: " + path.string());
    }
    out << "# format=aabc-pool-csv v1\n";
    out << "# " << pool_header(set).dump() << '\n';
    for (int c = 1; c <= set.param_dim; ++c) {
        out << "theta_" << c << ',';
    }
    const std::size_t flat = static_cast<std::size_t>(set.n) * set.obs_dim;
    for (std::size_t c = 1; c <= flat; ++c) {
        out << 'x' << c << (c == flat ? '\n' : ',');
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto theta = set.theta(i);
        for (const double v : theta) {
            out << format_double(v) << ',';
        }
        const auto values = set.dataset_values(i);
        for (std::size_t c = 0; c < values.size(); ++c) {
            out << format_double(values[c]) << (c + 1 == values.size() ? '\n' : ',');
        }
    }
    if (!out) {
        throw std::runtime_error("failed while writing csv file: " + path.string());
    }
}

std::vector<std::size_t> sample_indices_without_replacement(std::size_t population, std::size_t k,
                                                            RngStream& stream) {
    if (k > population) {
        throw std::invalid_argument("sample_indices_without_replacement: k exceeds population");
    }
    std::vector<std::size_t> indices(population);
    for (std::size_t i = 0; i < population; ++i) {
        indices[i] = i;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + stream.uniform_index(population - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

ReferenceSet subsample(const ReferenceSet& set, std::span<const std::size_t> indices) {
    if (indices.empty()) {
        throw std::invalid_argument("subsample: need at least one index");
    }
    ReferenceSet out;
    out.model = set.model;
    out.n = set.n;
    out.param_dim = set.param_dim;
    out.obs_dim = set.obs_dim;
    out.seed = set.seed;
    out.params.reserve(indices.size() * static_cast<std::size_t>(set.param_dim));
    out.data.reserve(indices.size() * static_cast<std::size_t>(set.n) * set.obs_dim);
    for (const std::size_t i : indices) {
        if (i >= set.size()) {
            throw std::out_of_range("subsample: index beyond pool size");
        }
        const auto theta = set.theta(i);
        out.params.insert(out.params.end(), theta.begin(), theta.end());
        const auto values = set.dataset_values(i);
        out.data.insert(out.data.end(), values.begin(), values.end());
    }
    return out;
}

void require_pool_matches_model(const ReferenceSet& set, const Model& model) {
    if (!(set.model == model.spec())) {
        throw std::invalid_argument("pool was built for model '" + set.model.id + "' with config " +
                                    set.model.config.dump() + ", not for the configured model '" +
                                    model.spec().id + "' with config " + model.spec().config.dump());
    }
}

}  // namespace aabc
