#pragma once

#include <array>

#include "aabc/model.hpp"
#include "aabc/rng.hpp"
#include "aabc/types.hpp"

namespace aabc {

// Finite-population admixture-fraction propagation. A hybrid population of
// constant size N is founded from two sources (fractions 1 and 0) and evolved
// for t generations; each child is the mean of two parents picked
// independently from source A, source B, or the previous hybrid generation
// with probabilities (p_A, p_B, p_H).
struct AdmixConfig {
    int N = 10000;
    int t = 771;
    int n = 604;  // default sample size drawn from the final generation

    static AdmixConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct AdmixturePopulation {
    std::vector<double> fractions;
    int generation = 0;
};

// Founding generation: p_H = 0 and both sources contribute with probability
// 1/2, so each fraction is (b1 + b2)/2 with iid fair Bernoulli parents.
AdmixturePopulation found_population(int N, RngStream& stream);

AdmixturePopulation step_generation(const AdmixturePopulation& pop,
                                    const std::array<double, 3>& params, RngStream& stream);

// Full run: founding generation, then t-1 propagation steps, then a uniform
// without-replacement sample of n individuals (one scalar fraction each).
DataSet simulate_admixture(const std::array<double, 3>& params, const AdmixConfig& config, int n,
                           RngStream& stream);

// Sample mean, sample variance (n-1), skewness and excess kurtosis of the
// fractions; skewness/kurtosis are defined as 0 when the variance is below
// 1e-12 (constant samples are legitimate at corners of the prior).
SummaryVector admixture_moments(const DataSet& data);

class AdmixtureModel final : public Model {
  public:
    explicit AdmixtureModel(AdmixConfig config);

    const ModelSpec& spec() const override { return spec_; }
    const AdmixConfig& config() const { return config_; }
    int param_dim() const override { return 3; }  // (p_A, p_B, p_H)
    int obs_dim() const override { return 1; }
    int summary_dim() const override { return 4; }

    ParameterVector sample_prior(RngStream& stream) const override;
    DataSet simulate(const ParameterVector& params, int n, RngStream& stream) const override;
    SummaryVector summarize(const DataSet& data) const override;
    void validate_params(const ParameterVector& params) const override;

  private:
    AdmixConfig config_;
    ModelSpec spec_;
};

}  // namespace aabc
