#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace aabc {

// A point in parameter space.
using ParameterVector = std::vector<double>;

// Low-dimensional statistic computed from a data set.
using SummaryVector = std::vector<double>;

// n iid observations, each a fixed-dimension real vector, stored row-major.
class DataSet {
  public:
    DataSet(int n, int obs_dim)
        : n_(n), obs_dim_(obs_dim), values_(static_cast<std::size_t>(n) * obs_dim, 0.0) {
        if (n < 1 || obs_dim < 1) {
            throw std::invalid_argument("DataSet: n and obs_dim must be positive");
        }
    }

    DataSet(int n, int obs_dim, std::vector<double> values) : n_(n), obs_dim_(obs_dim), values_(std::move(values)) {
        if (n < 1 || obs_dim < 1) {
            throw std::invalid_argument("DataSet: n and obs_dim must be positive");
        }
        if (values_.size() != static_cast<std::size_t>(n) * obs_dim) {
            throw std::invalid_argument("DataSet: values size mismatch");
        }
    }

    int n() const { return n_; }
    int obs_dim() const { return obs_dim_; }

    std::span<double> row(int i) {
        return {values_.data() + static_cast<std::size_t>(i) * obs_dim_, static_cast<std::size_t>(obs_dim_)};
    }
    std::span<const double> row(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * obs_dim_, static_cast<std::size_t>(obs_dim_)};
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const DataSet&, const DataSet&) = default;

  private:
    int n_;
    int obs_dim_;
    std::vector<double> values_;
};

}  // namespace aabc
