#pragma once

#include <cstdint>

#include "aabc/model.hpp"
#include "aabc/rng.hpp"
#include "aabc/types.hpp"

namespace aabc {

// Multi-locus K-allele model at stationarity under symmetric balancing
// selection (strength sigma) and symmetric mutation (rate mu). One locus is a
// point on the K-simplex with density proportional to
//   exp(-sigma * sum_i a_i^2) * prod_i a_i^{mu/K - 1}.
struct BalSelConfig {
    int K = 4;
    int loci = 100;
    double sigma_lo = 0.0;
    double sigma_hi = 50.0;
    double mu_lo = 0.1;
    double mu_hi = 10.0;

    static BalSelConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct RejectionStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
};

// Exact draw of one locus from the stationary density, by rejection from
// Dirichlet(mu/K,...,mu/K) with acceptance probability
// exp(-sigma * (sum a_i^2 - 1/K)), which is <= 1 because sum a_i^2 >= 1/K on
// the simplex. All returned frequencies are strictly positive.
std::vector<double> sample_stationary(double sigma, double mu, int K, RngStream& stream,
                                      RejectionStats* stats = nullptr);

class BalancingSelectionModel final : public Model {
  public:
    explicit BalancingSelectionModel(BalSelConfig config);

    const ModelSpec& spec() const override { return spec_; }
    const BalSelConfig& config() const { return config_; }
    int param_dim() const override { return 2; }  // (sigma, mu)
    int obs_dim() const override { return config_.loci * config_.K; }
    int summary_dim() const override { return 2; }

    ParameterVector sample_prior(RngStream& stream) const override;
    DataSet simulate(const ParameterVector& params, int n, RngStream& stream) const override;
    SummaryVector summarize(const DataSet& data) const override;
    void validate_params(const ParameterVector& params) const override;
    std::vector<double> prior_scale() const override;

  private:
    BalSelConfig config_;
    ModelSpec spec_;
};

}  // namespace aabc
