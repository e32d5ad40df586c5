#include "aabc/model.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "aabc/admixture.hpp"
#include "aabc/balancing_selection.hpp"

namespace aabc {

std::vector<double> Model::prior_scale() const {
    return std::vector<double>(static_cast<std::size_t>(param_dim()), 1.0);
}

namespace {

std::map<std::string, ModelFactory>& registry() {
    static std::map<std::string, ModelFactory> models = [] {
        std::map<std::string, ModelFactory> m;
        m["balsel"] = [](const nlohmann::json& config) -> std::unique_ptr<Model> {
            return std::make_unique<BalancingSelectionModel>(BalSelConfig::from_json(config));
        };
        m["admix"] = [](const nlohmann::json& config) -> std::unique_ptr<Model> {
            return std::make_unique<AdmixtureModel>(AdmixConfig::from_json(config));
        };
        return m;
    }();
    return models;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void register_model(const std::string& id, ModelFactory factory) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[id] = std::move(factory);
}

bool is_known_model(const std::string& id) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    return registry().count(id) > 0;
}

std::unique_ptr<Model> make_model(const std::string& id, const nlohmann::json& config) {
    ModelFactory factory;
    {
        std::lock_guard<std::mutex> lock(registry_mutex());
        auto it = registry().find(id);
        if (it == registry().end()) {
            throw std::invalid_argument("unknown model id: " + id);
        }
        factory = it->second;
    }
    return factory(config);
}

std::unique_ptr<Model> make_model(const ModelSpec& spec) { return make_model(spec.id, spec.config); }

}  // namespace aabc
