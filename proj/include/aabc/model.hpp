#pragma once

#include <functional>
#include <memory>
#include <string>

#include "aabc/rng.hpp"
#include "aabc/types.hpp"

#include <json.hpp>

namespace aabc {

// Identifies a model implementation together with its fixed hyperparameters.
// Data pools are only meaningful for one configuration, so the full spec is
// persisted with them and compared on reuse.
struct ModelSpec {
    std::string id;
    nlohmann::json config;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Generative model: prior over parameters, simulator, summary statistics.
class Model {
  public:
    virtual ~Model() = default;

    virtual const ModelSpec& spec() const = 0;
    virtual int param_dim() const = 0;
    virtual int obs_dim() const = 0;
    virtual int summary_dim() const = 0;

    virtual ParameterVector sample_prior(RngStream& stream) const = 0;

    // n iid observations under params; throws std::domain_error when params
    // fall outside the prior support.
    virtual DataSet simulate(const ParameterVector& params, int n, RngStream& stream) const = 0;

    // Pure function of the data.
    virtual SummaryVector summarize(const DataSet& data) const = 0;

    virtual void validate_params(const ParameterVector& params) const = 0;

    // Componentwise scale of the prior support, for optional scaled
    // parameter-space distances. Defaults to 1 per component.
    virtual std::vector<double> prior_scale() const;
};

using ModelFactory = std::function<std::unique_ptr<Model>(const nlohmann::json& config)>;

// String-id registry. The built-in models ("balsel", "admix") are always
// present; additional models may be registered before use.
void register_model(const std::string& id, ModelFactory factory);
bool is_known_model(const std::string& id);
std::unique_ptr<Model> make_model(const std::string& id, const nlohmann::json& config);
std::unique_ptr<Model> make_model(const ModelSpec& spec);

}  // namespace aabc
