#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace aabc {

// Identifies one deterministic draw sequence. Equal specs replay the exact
// same sequence; specs derived with different (kind, index) pairs are
// statistically independent, which is what makes per-task streams safe to
// hand out to parallel workers.
struct SeedSpec {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_id = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

// splitmix64 finalizer; bijective on u64.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the stream for a subtask. `kind` namespaces the task type so that
// e.g. proposal i and pool realization i never share a stream.
constexpr SeedSpec derive_stream(const SeedSpec& parent, std::uint64_t kind, std::uint64_t index) {
    const std::uint64_t h = mix64(mix64(parent.stream_id ^ mix64(kind)) ^ mix64(index));
    return SeedSpec{parent.root_seed, h};
}

// Stream kinds used across the toolkit. Values are part of the reproducibility
// contract: changing them changes every derived sequence.
enum StreamKind : std::uint64_t {
    kPoolRealization = 1,
    kProposal = 2,
    kStudyReference = 3,
    kStudyTestSelect = 4,
    kStudyPoolSubsample = 5,
    kStudyRun = 6,
    kObservedSynthesis = 7,
    kPoolBuild = 8,
};

// Value-type random stream. The engine is std::mt19937_64 (bit-exact by the
// standard); all variate transforms are implemented here so sequences do not
// depend on the standard library's unspecified distribution algorithms.
class RngStream {
  public:
    explicit RngStream(SeedSpec spec);

    const SeedSpec& spec() const { return spec_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi); throws std::invalid_argument unless lo < hi.
    double uniform(double lo, double hi);

    // Exact uniform integer on [0, bound); bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

    // Standard normal (Marsaglia polar, with spare caching).
    double normal();

    // Gamma(alpha, 1) for any alpha > 0.
    double gamma(double alpha);

    // log of a Gamma(alpha, 1) draw; stays finite for small alpha where the
    // draw itself would underflow.
    double log_gamma(double alpha);

    // Dirichlet draw; components are >= 0 and sum to 1 within rounding.
    // Small shapes are handled in log space. Requires >= 2 shapes, all > 0.
    std::vector<double> dirichlet(std::span<const double> alphas);
    void dirichlet(std::span<const double> alphas, std::span<double> out);

    // `count` iid category indices with the given nonnegative weights.
    std::vector<std::uint32_t> categorical(std::span<const double> weights, std::size_t count);
    void categorical(std::span<const double> weights, std::span<std::uint32_t> out);

  private:
    SeedSpec spec_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_normal_ = false;
};

}  // namespace aabc
