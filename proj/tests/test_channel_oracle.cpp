#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fano_ext/bounds.hpp"
#include "fano_ext/channel_oracle.hpp"

using namespace fano_ext;

TEST(DmcSpec, Validation) {
    EXPECT_THROW(DmcSpec({{0.9, 0.2}, {0.5, 0.5}}), DomainError);
    EXPECT_THROW(DmcSpec({{1.1, -0.1}, {0.5, 0.5}}), DomainError);
    EXPECT_THROW(DmcSpec({{1.0}}), DomainError);
    EXPECT_THROW(DmcSpec({{1.0, 0.0}, {0.5}}), DomainError);
    EXPECT_NO_THROW(DmcSpec({{0.9, 0.1}, {0.2, 0.8}}));
}

TEST(QscSpec, Examples) {
    const auto id = qsc_spec(2, 0.0);
    EXPECT_EQ(id(0, 0), 1.0);
    EXPECT_EQ(id(0, 1), 0.0);
    EXPECT_EQ(id(1, 1), 1.0);

    const auto bsc = qsc_spec(2, 0.1);
    EXPECT_DOUBLE_EQ(bsc(0, 0), 0.9);
    EXPECT_DOUBLE_EQ(bsc(1, 0), 0.1);

    const auto s7 = qsc_spec(7, 0.001);
    for (std::uint32_t x = 0; x < 7; ++x) {
        double row = 0.0;
        for (std::uint32_t y = 0; y < 7; ++y) {
            EXPECT_DOUBLE_EQ(s7(x, y), x == y ? 0.994 : 0.001);
            row += s7(x, y);
        }
        EXPECT_NEAR(row, 1.0, 1e-12);
    }
    EXPECT_THROW(qsc_spec(3, 0.7), DomainError);
}

TEST(ParseDmc, PlainTextMatrix) {
    std::istringstream in("3\n0.8 0.1 0.1\n0.0 1.0 0.0\n0.25 0.25 0.5\n");
    const auto spec = parse_dmc(in);
    EXPECT_EQ(spec.q(), 3U);
    EXPECT_DOUBLE_EQ(spec(2, 2), 0.5);
    EXPECT_DOUBLE_EQ(spec(0, 1), 0.1);
}

TEST(ParseDmc, Errors) {
    std::istringstream short_in("2\n0.5 0.5\n0.5\n");
    EXPECT_THROW(parse_dmc(short_in), DomainError);
    std::istringstream trailing("2\n0.5 0.5\n0.5 0.5 7\n");
    EXPECT_THROW(parse_dmc(trailing), DomainError);
    std::istringstream bad_rows("2\n0.5 0.6\n0.5 0.5\n");
    EXPECT_THROW(parse_dmc(bad_rows), DomainError);
    std::istringstream no_q("x");
    EXPECT_THROW(parse_dmc(no_q), DomainError);
    EXPECT_THROW(load_dmc("/nonexistent/matrix.txt"), IoError);
}

TEST(Budget, RefusesLargeInstances) {
    EXPECT_EQ(required_pairs(3, 4, {}), 6561U);
    try {
        (void)exact_conditional_entropy(qsc_spec(7, 0.001), 30);
        FAIL() << "expected BudgetExceeded";
    } catch (const BudgetExceeded& e) {
        EXPECT_NE(std::string(e.what()).find("1e50"), std::string::npos) << e.what();
    }
    EXPECT_THROW((void)exact_conditional_entropy(qsc_spec(2, 0.1), 4, EnumerationBudget{255}),
                 BudgetExceeded);
    EXPECT_NO_THROW((void)exact_conditional_entropy(qsc_spec(2, 0.1), 4, EnumerationBudget{256}));
}

TEST(ExactConditionalEntropy, Examples) {
    for (std::uint32_t n : {1U, 2U, 4U}) {
        EXPECT_EQ(exact_conditional_entropy(qsc_spec(3, 0.0), n), 0.0);
    }
    // H_b(0.1)
    EXPECT_NEAR(exact_conditional_entropy(qsc_spec(2, 0.1), 1), 0.4689955935892812, 1e-14);
    EXPECT_NEAR(exact_conditional_entropy(qsc_spec(3, 0.05), 3),
                qsc_exact_conditional_entropy(3, 3, 0.05), 1e-9);
}

TEST(ExactConditionalEntropy, MemorylessFactorization) {
    const std::vector<DmcSpec> specs{qsc_spec(2, 0.1), qsc_spec(3, 0.05),
                                     DmcSpec({{0.9, 0.1}, {0.2, 0.8}}),
                                     DmcSpec({{0.7, 0.2, 0.1}, {0.0, 1.0, 0.0}, {0.3, 0.3, 0.4}})};
    for (const auto& spec : specs) {
        const double single = exact_conditional_entropy(spec, 1);
        for (std::uint32_t n = 2; n <= 5; ++n) {
            if (std::pow(spec.q(), 2 * n) > 1e6) {
                break;
            }
            EXPECT_NEAR(exact_conditional_entropy(spec, n), n * single, 1e-9) << "n=" << n;
        }
    }
}

TEST(ExactMutualInfo, Examples) {
    EXPECT_NEAR(exact_mutual_info(qsc_spec(3, 0.0), 3), 3 * std::log2(3.0), 1e-14);
    EXPECT_NEAR(exact_mutual_info(qsc_spec(2, 0.5), 2), 0.0, 1e-14);
    EXPECT_NEAR(exact_mutual_info(qsc_spec(7, 0.001), 2), 2 * qsc_capacity_per_symbol(7, 0.001),
                1e-9);
}

TEST(HammingDistanceDistribution, Examples) {
    const auto id = hamming_distance_distribution(qsc_spec(2, 0.0), 3);
    EXPECT_EQ(id[0], 1.0);
    EXPECT_EQ(id[3], 0.0);

    const auto bsc = hamming_distance_distribution(qsc_spec(2, 0.1), 2);
    EXPECT_NEAR(bsc[0], 0.81, 1e-15);
    EXPECT_NEAR(bsc[1], 0.18, 1e-15);
    EXPECT_NEAR(bsc[2], 0.01, 1e-15);

    // Hand enumeration of the 16 pairs with uniform input: per symbol the
    // crossover is (0.1 + 0.2) / 2 = 0.15, so Binomial(2, 0.15).
    const auto asym = hamming_distance_distribution(DmcSpec({{0.9, 0.1}, {0.2, 0.8}}), 2);
    EXPECT_NEAR(asym[0], 0.7225, 1e-15);
    EXPECT_NEAR(asym[1], 0.255, 1e-15);
    EXPECT_NEAR(asym[2], 0.0225, 1e-15);
}

TEST(HammingDistanceDistribution, AgreesWithQscFormula) {
    for (std::uint32_t q : {2U, 3U}) {
        for (double eps : {0.0, 0.01, 0.05, 0.1, 0.2, 1.0 / (q - 1)}) {
            for (std::uint32_t n = 1; n <= 4; ++n) {
                const auto oracle_law = hamming_distance_distribution(qsc_spec(q, eps), n);
                const auto formula = qsc_error_distribution(n, q, eps);
                for (std::size_t k = 0; k <= n; ++k) {
                    EXPECT_NEAR(oracle_law[k], formula[k], 1e-12);
                }
            }
        }
    }
}

TEST(Tightness, EqualForQscStrictForAsymmetricChannel) {
    for (std::uint32_t q : {2U, 3U}) {
        for (std::uint32_t n = 1; n <= 4; ++n) {
            const auto exact = enumerate_product_channel(qsc_spec(q, 0.1), n);
            EXPECT_NEAR(exact.conditional_entropy, ext_fano_ub(exact.distance, q), 1e-9);
        }
    }
    const DmcSpec z_like({{0.9, 0.1}, {0.2, 0.8}});
    for (std::uint32_t n = 1; n <= 4; ++n) {
        const auto exact = enumerate_product_channel(z_like, n);
        EXPECT_GT(ext_fano_ub(exact.distance, 2) - exact.conditional_entropy, 1e-6) << "n=" << n;
    }
}

TEST(Enumeration, IndependentOfThreadCount) {
    const DmcSpec spec({{0.7, 0.2, 0.1}, {0.05, 0.9, 0.05}, {0.3, 0.3, 0.4}});
    const auto one = enumerate_product_channel(spec, 5, {}, 1);
    for (unsigned threads : {2U, 3U, 8U}) {
        const auto many = enumerate_product_channel(spec, 5, {}, threads);
        EXPECT_EQ(one.conditional_entropy, many.conditional_entropy);
        EXPECT_EQ(one.distance.probs(), many.distance.probs());
    }
}

TEST(MonteCarlo, IdentityChannelPutsAllMassAtZero) {
    for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefULL}) {
        const auto hist = monte_carlo_error_histogram(qsc_spec(5, 0.0), 7, 1000, seed);
        EXPECT_EQ(hist[0], 1000U);
    }
}

TEST(MonteCarlo, SeedDeterminismAcrossThreadCounts) {
    const auto spec = qsc_spec(3, 0.1);
    const auto a = monte_carlo_error_histogram(spec, 6, 200'000, 77, 1);
    const auto b = monte_carlo_error_histogram(spec, 6, 200'000, 77, 4);
    const auto c = monte_carlo_error_histogram(spec, 6, 200'000, 78, 4);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    std::uint64_t total = 0;
    for (auto v : a) {
        total += v;
    }
    EXPECT_EQ(total, 200'000U);
}

TEST(MonteCarlo, BscBinsWithinThreeSigma) {
    constexpr std::uint64_t trials = 1'000'000;
    const auto hist = monte_carlo_error_histogram(qsc_spec(2, 0.1), 2, trials, 42);
    const std::vector<double> expect{0.81, 0.18, 0.01};
    for (std::size_t k = 0; k < 3; ++k) {
        const double freq = static_cast<double>(hist[k]) / trials;
        EXPECT_LE(std::abs(freq - expect[k]), 3 * std::sqrt(expect[k] * (1 - expect[k]) / trials));
    }
}

TEST(MonteCarlo, RejectsZeroTrials) {
    EXPECT_THROW(monte_carlo_error_histogram(qsc_spec(2, 0.1), 2, 0, 1), DomainError);
}
