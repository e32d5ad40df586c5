#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>

#include "aabc/rng.hpp"
#include "aabc/stats.hpp"

using namespace aabc;

TEST_CASE("identical seed specs replay identical sequences") {
    RngStream a(SeedSpec{42, 0});
    RngStream b(SeedSpec{42, 0});
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    RngStream c(SeedSpec{42, 0});
    RngStream d(SeedSpec{42, 0});
    for (int i = 0; i < 100; ++i) {
        CHECK(c.uniform(0.1, 10.0) == d.uniform(0.1, 10.0));
        CHECK(c.gamma(0.7) == d.gamma(0.7));
    }
}

TEST_CASE("distinct stream ids from one root differ") {
    RngStream a(derive_stream(SeedSpec{42, 0}, kProposal, 0));
    RngStream b(derive_stream(SeedSpec{42, 0}, kProposal, 1));
    RngStream c(derive_stream(SeedSpec{42, 0}, kPoolRealization, 0));
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        equal_ab += va == b.next_u64();
        equal_ac += va == c.next_u64();
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("uniform stays inside its interval") {
    RngStream stream(SeedSpec{7, 7});
    for (int i = 0; i < 10000; ++i) {
        const double u = stream.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = stream.uniform(0.1, 10.0);
        CHECK(v >= 0.1);
        CHECK(v < 10.0);
    }
    CHECK_THROWS_AS(stream.uniform(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(stream.uniform(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("uniform_index is unbiased across a small range") {
    RngStream stream(SeedSpec{11, 1});
    const std::uint64_t bound = 7;
    std::vector<double> counts(bound, 0.0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        ++counts[stream.uniform_index(bound)];
    }
    const std::vector<double> probs(bound, 1.0 / static_cast<double>(bound));
    CHECK(chi_square_gof(counts, probs).p_value > 0.001);
    CHECK_THROWS_AS(stream.uniform_index(0), std::invalid_argument);
}

TEST_CASE("dirichlet draws live on the simplex") {
    RngStream stream(SeedSpec{3, 5});
    SUBCASE("symmetric (1,1,1): mean 1/3 per component") {
        const std::vector<double> alphas{1.0, 1.0, 1.0};
        const int draws = 100000;
        std::vector<double> mean(3, 0.0);
        for (int i = 0; i < draws; ++i) {
            const auto x = stream.dirichlet(alphas);
            double sum = 0.0;
            for (int c = 0; c < 3; ++c) {
                CHECK(x[c] >= 0.0);
                sum += x[c];
                mean[c] += x[c];
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
        for (int c = 0; c < 3; ++c) {
            CHECK(mean[c] / draws == doctest::Approx(1.0 / 3.0).epsilon(0.03));
        }
    }
    SUBCASE("(1000,1): first component concentrates at 1000/1001") {
        // Beta marginal mean alpha_1 / (alpha_1 + alpha_2).
        const std::vector<double> alphas{1000.0, 1.0};
        double mean = 0.0;
        const int draws = 20000;
        for (int i = 0; i < draws; ++i) {
            mean += stream.dirichlet(alphas)[0];
        }
        CHECK(mean / draws == doctest::Approx(1000.0 / 1001.0).epsilon(1e-3));
    }
    SUBCASE("small shapes stay normalized") {
        const std::vector<double> alphas{0.025, 0.025, 0.025, 0.025};
        for (int i = 0; i < 20000; ++i) {
            const auto x = stream.dirichlet(alphas);
            const double sum = std::accumulate(x.begin(), x.end(), 0.0);
            CHECK(std::abs(sum - 1.0) <= 1e-12);
            for (const double v : x) {
                CHECK(v >= 0.0);
            }
        }
    }
    SUBCASE("invalid shapes rejected") {
        CHECK_THROWS_AS(stream.dirichlet(std::vector<double>{1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(stream.dirichlet(std::vector<double>{1.0, -2.0}), std::invalid_argument);
        CHECK_THROWS_AS(stream.dirichlet(std::vector<double>{1.0}), std::invalid_argument);
    }
}

TEST_CASE("gamma matches its first two moments") {
    RngStream stream(SeedSpec{9, 2});
    for (const double alpha : {0.3, 1.0, 2.5, 8.0}) {
        double sum = 0.0, sum_sq = 0.0;
        const int draws = 200000;
        for (int i = 0; i < draws; ++i) {
            const double g = stream.gamma(alpha);
            CHECK(g >= 0.0);
            sum += g;
            sum_sq += g * g;
        }
        const double mean = sum / draws;
        const double var = sum_sq / draws - mean * mean;
        CHECK(mean == doctest::Approx(alpha).epsilon(0.02));
        CHECK(var == doctest::Approx(alpha).epsilon(0.05));
    }
    CHECK_THROWS_AS(stream.gamma(0.0), std::invalid_argument);
}

TEST_CASE("categorical follows its weights") {
    RngStream stream(SeedSpec{13, 4});
    SUBCASE("degenerate mass") {
        const std::vector<double> w{1.0, 0.0, 0.0};
        for (const auto idx : stream.categorical(w, 5)) {
            CHECK(idx == 0);
        }
    }
    SUBCASE("two equal weights") {
        const std::vector<double> w{0.5, 0.5};
        const auto picks = stream.categorical(w, 100000);
        double zeros = 0.0;
        for (const auto idx : picks) {
            zeros += idx == 0;
        }
        CHECK(zeros / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
    }
    SUBCASE("chi-square against (0.2, 0.3, 0.5)") {
        const std::vector<double> w{0.2, 0.3, 0.5};
        std::vector<double> counts(3, 0.0);
        for (const auto idx : stream.categorical(w, 100000)) {
            ++counts[idx];
        }
        CHECK(chi_square_gof(counts, w).p_value > 0.001);
        for (int c = 0; c < 3; ++c) {
            CHECK(counts[static_cast<std::size_t>(c)] / 100000.0 ==
                  doctest::Approx(w[static_cast<std::size_t>(c)]).epsilon(0.05));
        }
    }
    SUBCASE("invalid weights rejected") {
        CHECK_THROWS_AS(stream.categorical(std::vector<double>{}, 1), std::invalid_argument);
        CHECK_THROWS_AS(stream.categorical(std::vector<double>{0.0, 0.0}, 1), std::invalid_argument);
        CHECK_THROWS_AS(stream.categorical(std::vector<double>{-1.0, 2.0}, 1), std::invalid_argument);
    }
}
