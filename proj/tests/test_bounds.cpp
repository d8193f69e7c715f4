#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fano_ext/bounds.hpp"
#include "fano_ext/channel_oracle.hpp"
#include "oracles.hpp"

using namespace fano_ext;

namespace {

double hb(double x) {
    double h = 0.0;
    if (x > 0.0) {
        h -= x * std::log2(x);
    }
    if (x < 1.0) {
        h -= (1 - x) * std::log2(1 - x);
    }
    return h;
}

ErrorDistribution error_free(std::uint32_t n) {
    std::vector<double> p(n + 1, 0.0);
    p[0] = 1.0;
    return {n, ProbVector(p)};
}

} // namespace

// ---------------------------------------------------------------------------
// Classical bounds
// ---------------------------------------------------------------------------

TEST(FanoConditionalEntropy, Examples) {
    EXPECT_EQ(fano_conditional_entropy_ub(0.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(fano_conditional_entropy_ub(0.5, 1.0), 1.0);
    // mpmath: H_b(0.19) + 0.19 log2 3 = 1.0026143350209171
    EXPECT_NEAR(fano_conditional_entropy_ub(0.19, 2.0), 1.0026143350209171, 1e-14);
    EXPECT_THROW(fano_conditional_entropy_ub(0.1, 0.5), DomainError);
    EXPECT_THROW(fano_conditional_entropy_ub(1.1, 2.0), DomainError);
}

TEST(FanoConditionalEntropy, LargeAlphabetWithoutOverflow) {
    // M = 7^1000 has no double representation; log2(M - 1) = log2 M to
    // double precision.
    const double log2_m = 1000 * std::log2(7.0);
    EXPECT_NEAR(fano_conditional_entropy_ub(0.25, log2_m), hb(0.25) + 0.25 * log2_m, 1e-9);
}

TEST(FanoMutualInfo, Examples) {
    EXPECT_NEAR(fano_mutual_info_lb(0.0, 3 * std::log2(5.0)), 3 * std::log2(5.0), 1e-15);
    EXPECT_EQ(fano_mutual_info_lb(1.0, 7.0), 0.0);
    // mpmath: 0.81 * 2 - H_b(0.19) = 0.91852854011610258
    EXPECT_NEAR(fano_mutual_info_lb(0.19, 2.0), 0.9185285401161026, 1e-14);
    EXPECT_LT(fano_mutual_info_lb(0.95, 1.0), 0.0);
    EXPECT_THROW(fano_mutual_info_lb(0.1, 0.0), DomainError);
}

TEST(FanoCodebook, Examples) {
    EXPECT_NEAR(fano_codebook_ub(10 * std::log2(7.0), 0.0), 10 * std::log2(7.0), 1e-15);
    EXPECT_DOUBLE_EQ(fano_codebook_ub(0.0, 0.5), 2.0);
    EXPECT_THROW(fano_codebook_ub(1.0, 1.0), DomainError);
    EXPECT_THROW(fano_codebook_ub(-1.0, 0.1), DomainError);
}

TEST(FanoCodebook, ComparisonProtocolAtThirty) {
    // Independent evaluation: eps_f = P_b / 2 with P_b = 1 - 0.994^30 and
    // sup I = 30 * (log2 7 + 0.994 log2 0.994 + 0.006 log2 0.001).
    const double cap = std::log2(7.0) + 0.994 * std::log2(0.994) + 0.006 * std::log2(0.001);
    const double eps_f = (1 - std::pow(0.994, 30)) / 2;
    const double independent = (30 * cap + hb(eps_f)) / (1 - eps_f);
    // mpmath: 90.013472813953820
    EXPECT_NEAR(independent, 90.01347281395382, 1e-11);
    EXPECT_NEAR(qsc_codebook_fano_ub(30, QscChannel(7, 0.001)), independent, 1e-11);
}

// ---------------------------------------------------------------------------
// Hamming-distance bounds
// ---------------------------------------------------------------------------

TEST(ExtFano, ErrorFreeIsZero) {
    for (std::uint32_t n : {1U, 2U, 10U, 1000U}) {
        for (std::uint32_t q : {2U, 3U, 7U}) {
            EXPECT_EQ(ext_fano_ub(error_free(n), q), 0.0);
        }
    }
}

TEST(ExtFano, SingleSymbolIsClassicalFano) {
    for (std::uint32_t q : {2U, 3U, 5U, 7U, 16U, 256U}) {
        for (double pe : {0.0, 1e-6, 0.01, 0.3, 0.5, 0.99, 1.0}) {
            const ErrorDistribution d(1, ProbVector({1.0 - pe, pe}));
            const double classical = hb(pe) + pe * std::log2(q - 1.0);
            EXPECT_NEAR(ext_fano_ub(d, q), classical, 1e-15);
            EXPECT_NEAR(ext_fano_ub(d, q), fano_conditional_entropy_ub(pe, std::log2(double(q))), 1e-14);
        }
    }
}

TEST(ExtFano, BinaryTwoSymbolExampleIsTight) {
    const auto d = qsc_error_distribution(2, 2, 0.1);
    // 0.75799... + 0.18 * log2 2 + 0.01 * log2 1 = 2 H_b(0.1)
    EXPECT_NEAR(ext_fano_ub(d, 2), 0.9379911871785624, 1e-14);
    EXPECT_NEAR(ext_fano_ub(d, 2), exact_conditional_entropy(qsc_spec(2, 0.1), 2), 1e-12);
    EXPECT_LT(ext_fano_ub(d, 2), fano_conditional_entropy_ub(0.19, 2.0));
}

TEST(ExtFano, RejectsUnaryAlphabet) {
    EXPECT_THROW(ext_fano_ub(error_free(2), 1), DomainError);
    EXPECT_THROW(ext_fano_relative_form(error_free(2), 1), DomainError);
    EXPECT_THROW(ext_fano_cor1(error_free(2), 1), DomainError);
}

TEST(ExtFanoRelativeForm, Examples) {
    EXPECT_NEAR(ext_fano_relative_form(error_free(2), 7), 0.0, 1e-14);
    EXPECT_NEAR(ext_fano_relative_form(qsc_error_distribution(2, 2, 0.1), 2), 0.9379911871785624,
                1e-14);
}

TEST(ExtFanoCor1, Examples) {
    EXPECT_NEAR(ext_fano_cor1(error_free(3), 2), 0.0, 1e-14);
    for (std::uint32_t q : {2U, 3U, 7U}) {
        for (double pe : {0.0, 0.05, 0.5, 0.8}) {
            const ErrorDistribution d(1, ProbVector({1.0 - pe, pe}));
            const double ps = symbol_error_probability(d);
            EXPECT_LE(ext_fano_cor1(d, q), 1.0 + ps * std::log2(q - 1.0) + 1e-12);
        }
    }
}

TEST(ExtFano, IdentityChainOnRandomDistributions) {
    std::mt19937_64 gen(4242);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::uint32_t n = 1 + gen() % 50;
        const std::uint32_t q = 2 + gen() % 15;
        const ErrorDistribution d(n, ProbVector(oracle::random_distribution(gen, n + 1)));
        const double ext = ext_fano_ub(d, q);
        EXPECT_NEAR(ext, ext_fano_relative_form(d, q), 1e-9) << "n=" << n << " q=" << q;
        EXPECT_NEAR(ext, ext_fano_cor1(d, q), 1e-9) << "n=" << n << " q=" << q;
        EXPECT_NEAR(ext_mutual_info_lb(d, q), ext_mutual_info_relative_lb(d, q), 1e-9);
        EXPECT_GE(ext, -1e-12);
        EXPECT_LE(ext, n * std::log2(double(q)) + 1e-9);
    }
}

TEST(ExtMutualInfo, Examples) {
    EXPECT_NEAR(ext_mutual_info_lb(error_free(4), 3), 4 * std::log2(3.0), 1e-14);
    const auto ref = reference_distribution(ReferenceKind::Q, 6, 5);
    EXPECT_NEAR(ext_mutual_info_lb(ErrorDistribution(6, ref.probs), 5), 0.0, 1e-12);
    // 2 - 2 H_b(0.1); mpmath: 1.0620088128214376
    const auto d = qsc_error_distribution(2, 2, 0.1);
    EXPECT_NEAR(ext_mutual_info_lb(d, 2), 1.0620088128214376, 1e-14);
    EXPECT_NEAR(ext_mutual_info_lb(d, 2), exact_mutual_info(qsc_spec(2, 0.1), 2), 1e-12);
}

TEST(ExtCodebook, Examples) {
    for (std::uint32_t q : {2U, 3U, 7U}) {
        const std::uint32_t n = 5;
        EXPECT_NEAR(ext_codebook_ub(n * std::log2(double(q)), error_free(n), q),
                    n * std::log2(double(q)), 1e-12);
    }
    EXPECT_NEAR(ext_codebook_ub(4.0, error_free(4), 2), 4.0, 1e-14);
    EXPECT_THROW(ext_codebook_ub(-0.5, error_free(4), 2), DomainError);
}

TEST(ExtCodebook, QscProtocolTwoPaths) {
    // Closed form of the bound at a code whose error law is the QSC law at
    // symbol error pe' = fraction * p_e:
    //   n log q - n H(row) - sum d_k [k log pe' + (n-k) log(1-pe')] + n pe' log(q-1)
    for (std::uint32_t q : {2U, 3U, 7U}) {
        for (double eps : {0.001, 0.01, 0.05}) {
            for (std::uint32_t n : {1U, 2U, 10U, 30U, 60U}) {
                for (double fraction : {0.5, 0.25, 1.0}) {
                    const double pe = (q - 1) * eps;
                    const double row = -(1 - pe) * std::log2(1 - pe) - (q - 1) * eps * std::log2(eps);
                    const double pe_c = fraction * pe;
                    const auto law = oracle::binomial_law(n, pe_c);
                    double sum = 0.0;
                    for (std::uint32_t k = 0; k <= n; ++k) {
                        sum += law[k] * (k * std::log2(pe_c) + (n - k) * std::log2(1 - pe_c));
                    }
                    const double closed = n * std::log2(double(q)) - n * row - sum +
                                          n * pe_c * std::log2(q - 1.0);
                    EXPECT_NEAR(qsc_codebook_ext_ub(n, QscChannel(q, eps), {fraction}), closed, 1e-9)
                        << "q=" << q << " eps=" << eps << " n=" << n << " f=" << fraction;
                }
            }
        }
    }
    // mpmath: 83.284470181665457
    EXPECT_NEAR(qsc_codebook_ext_ub(30, QscChannel(7, 0.001)), 83.28447018166546, 1e-10);
}

TEST(ExtCodebook, ProtocolFractionValidated) {
    EXPECT_THROW(qsc_codebook_ext_ub(3, QscChannel(2, 0.1), {0.0}), DomainError);
    EXPECT_THROW(qsc_codebook_fano_ub(3, QscChannel(2, 0.1), {1.5}), DomainError);
}

// ---------------------------------------------------------------------------
// QSC closed forms
// ---------------------------------------------------------------------------

TEST(QscCapacity, Examples) {
    for (std::uint32_t q : {2U, 3U, 7U, 16U}) {
        EXPECT_NEAR(qsc_capacity_per_symbol(q, 0.0), std::log2(double(q)), 1e-15);
    }
    EXPECT_NEAR(qsc_capacity_per_symbol(2, 0.5), 0.0, 1e-15);
    // mpmath: 2.7389300667084295
    EXPECT_NEAR(qsc_capacity_per_symbol(7, 0.001), 2.7389300667084295, 1e-14);
    EXPECT_NEAR(qsc_capacity_per_symbol(7, 0.001), exact_mutual_info(qsc_spec(7, 0.001), 1), 1e-12);
    EXPECT_THROW(qsc_capacity_per_symbol(7, 0.2), DomainError);
}

TEST(QscExactConditionalEntropy, Examples) {
    EXPECT_EQ(qsc_exact_conditional_entropy(5, 3, 0.0), 0.0);
    EXPECT_NEAR(qsc_exact_conditional_entropy(2, 2, 0.1), 0.9379911871785624, 1e-14);
    EXPECT_NEAR(qsc_exact_conditional_entropy(3, 3, 0.05),
                exact_conditional_entropy(qsc_spec(3, 0.05), 3), 1e-9);
    EXPECT_THROW(qsc_exact_conditional_entropy(3, 3, 0.6), DomainError);
}

TEST(QscBounds, TightnessAndDominance) {
    for (std::uint32_t q : {2U, 3U, 7U}) {
        const double cap = 1.0 / (q - 1);
        for (double frac : {0.0, 0.001, 0.01, 0.1, 0.3, 0.5, 0.8, 1.0}) {
            const double eps = frac * cap;
            const QscChannel ch(q, eps);
            for (std::uint32_t n = 1; n <= 20; ++n) {
                const auto d = qsc_error_distribution(n, ch);
                const double ext = ext_fano_ub(d, q);
                EXPECT_NEAR(ext, qsc_exact_conditional_entropy(n, ch), 1e-9)
                    << "q=" << q << " eps=" << eps << " n=" << n;
                EXPECT_LE(ext, fano_conditional_entropy_ub(block_error_probability(d),
                                                           n * std::log2(double(q))) + 1e-9)
                    << "q=" << q << " eps=" << eps << " n=" << n;
            }
        }
    }
}

TEST(QscBounds, SandwichAgainstEnumeration) {
    for (std::uint32_t q : {2U, 3U}) {
        for (double eps : {0.0, 0.05, 0.1, 0.2, 1.0 / (q - 1)}) {
            for (std::uint32_t n = 1; n <= 4; ++n) {
                const auto r = qsc_bound_report(n, q, eps);
                const auto exact = enumerate_product_channel(qsc_spec(q, eps), n);
                EXPECT_LE(exact.conditional_entropy, std::min(r.h_ext_ub, r.h_fano_ub) + 1e-9);
                EXPECT_GE(exact.mutual_info, r.i_ext_lb - 1e-9);
                EXPECT_GE(exact.mutual_info, r.i_fano_lb - 1e-9);
            }
        }
    }
}

TEST(BoundReport, InvariantsHoldAndViolationsAreReported) {
    auto r = qsc_bound_report(30, 7, 0.001);
    EXPECT_TRUE(check_invariants(r).empty());
    EXPECT_NEAR(*r.h_exact, r.h_ext_ub, 1e-9);
    EXPECT_GT(r.h_fano_ub, r.h_ext_ub);
    EXPECT_NEAR(r.i_cor4_lb, r.i_ext_lb, 1e-9);

    r.h_cor1_ub += 1e-6;
    r.i_exact = r.i_ext_lb - 1.0;
    const auto bad = check_invariants(r);
    ASSERT_EQ(bad.size(), 2U);
    EXPECT_EQ(bad[0], "h_ext_ub != h_cor1_ub");
    EXPECT_EQ(bad[1], "i_exact < i_ext_lb");
}

TEST(BoundReport, SingleSymbolAndPerfectChannel) {
    const auto one = qsc_bound_report(1, 7, 0.001);
    EXPECT_NEAR(one.h_ext_ub, one.h_fano_ub, 1e-15);

    const auto perfect = qsc_bound_report(10, 2, 0.0);
    EXPECT_EQ(perfect.h_ext_ub, 0.0);
    EXPECT_EQ(perfect.h_fano_ub, 0.0);
    EXPECT_EQ(*perfect.h_exact, 0.0);
    EXPECT_NEAR(perfect.h_rel_form, 0.0, 1e-12);
    EXPECT_NEAR(perfect.h_cor1_ub, 0.0, 1e-12);
    EXPECT_NEAR(perfect.logm_ext_ub, 10.0, 1e-12);
    EXPECT_NEAR(perfect.logm_fano_ub, 10.0, 1e-12);
}
