#pragma once

// Hamming-distance error distributions p = (p_0, ..., p_n), the two
// reference laws used by the relative-entropy forms of the bound, and the
// block / symbol error probabilities derived from p.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fano_ext/numerics.hpp"

namespace fano_ext {

/// Slack allowed when checking (q-1) * eps <= 1, so that eps = 1/(q-1)
/// survives floating-point rounding.
inline constexpr double kCrossoverSlack = 1e-12;

/// A q-ary symmetric channel: a symbol is kept with probability 1 - (q-1) eps
/// and replaced by each of the other q-1 letters with probability eps.
/// The total symbol error p_e = (q-1) eps is computed once here.
class QscChannel {
public:
    QscChannel(std::uint32_t q, double eps) : q_(q), eps_(eps) {
        if (q < 2) {
            throw DomainError("QSC: alphabet size q = " + std::to_string(q) + " must be >= 2");
        }
        if (!(eps >= 0.0)) {
            throw DomainError("QSC: crossover eps = " + std::to_string(eps) + " must be >= 0");
        }
        const double pe = static_cast<double>(q - 1) * eps;
        if (pe > 1.0 + kCrossoverSlack) {
            throw DomainError("QSC: (q-1)*eps = " + std::to_string(pe) + " exceeds 1");
        }
        symbol_error_ = std::min(pe, 1.0);
    }

    [[nodiscard]] std::uint32_t q() const noexcept { return q_; }
    [[nodiscard]] double eps() const noexcept { return eps_; }
    /// p_e = (q-1) eps.
    [[nodiscard]] double symbol_error() const noexcept { return symbol_error_; }

private:
    std::uint32_t q_;
    double eps_;
    double symbol_error_ = 0.0;
};

/// Law of the Hamming distance between the sent and received words of
/// length n: probs[k] = Pr(H_d(X, Y) = k).
class ErrorDistribution {
public:
    ErrorDistribution(std::uint32_t n, ProbVector probs, std::optional<double> symbol_error = {})
        : n_(n), probs_(std::move(probs)), symbol_error_(symbol_error) {
        if (n == 0) {
            throw DomainError("ErrorDistribution: blocklength must be >= 1");
        }
        if (probs_.size() != static_cast<std::size_t>(n) + 1) {
            throw DomainError("ErrorDistribution: expected " + std::to_string(n + 1) +
                              " entries, got " + std::to_string(probs_.size()));
        }
    }

    [[nodiscard]] std::uint32_t n() const noexcept { return n_; }
    [[nodiscard]] const ProbVector& probs() const noexcept { return probs_; }
    [[nodiscard]] double operator[](std::size_t k) const { return probs_[k]; }
    /// Per-symbol error p_e of the generating QSC, when there is one.
    [[nodiscard]] std::optional<double> qsc_symbol_error() const noexcept { return symbol_error_; }

private:
    std::uint32_t n_;
    ProbVector probs_;
    std::optional<double> symbol_error_;
};

enum class ReferenceKind {
    Q, ///< q_k = C(n,k) (q-1)^k / q^n, the law of H_d for an output independent of the input
    W  ///< w_k = C(n,k) / 2^n, binomial(n, 1/2)
};

/// One of the two comparison laws. log2_probs is authoritative; probs is its
/// exponentiation and may underflow to 0 for large n.
struct ReferenceDistribution {
    ReferenceKind kind;
    std::uint32_t n;
    std::uint32_t q; ///< 0 for kind W
    ProbVector probs;
    std::vector<double> log2_probs;
};

namespace detail {

// Binomial(n, r) law in log domain; r in {0, 1} handled as point masses.
inline std::vector<double> log2_binomial_pmf(std::uint32_t n, double r) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (std::uint32_t k = 0; k <= n; ++k) {
        out[k] = fano_ext::log2_binomial_pmf(n, k, r);
    }
    return out;
}

inline std::vector<double> exp2_all(std::span<const double> log2_values) {
    std::vector<double> out(log2_values.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::exp2(log2_values[i]);
    }
    return out;
}

} // namespace detail

/// p_k = C(n,k) p_e^k (1-p_e)^(n-k) with p_e = (q-1) eps.
inline ErrorDistribution qsc_error_distribution(std::uint32_t n, const QscChannel& channel) {
    if (n == 0) {
        throw DomainError("qsc_error_distribution: blocklength must be >= 1");
    }
    const double pe = channel.symbol_error();
    return {n, ProbVector(detail::exp2_all(detail::log2_binomial_pmf(n, pe))), pe};
}

inline ErrorDistribution qsc_error_distribution(std::uint32_t n, std::uint32_t q, double eps) {
    return qsc_error_distribution(n, QscChannel(q, eps));
}

/// P_b = Pr(X != Y) = 1 - p_0.
inline double block_error_probability(const ErrorDistribution& d) {
    double pb = 0.0;
    for (std::size_t k = 1; k < d.probs().size(); ++k) {
        pb += d[k];
    }
    // Summing the tail keeps tiny P_b exact; 1 - p_0 would cancel.
    return std::clamp(pb, 0.0, 1.0);
}

/// P_s = (1/n) sum k p_k.
inline double symbol_error_probability(const ErrorDistribution& d) {
    double acc = 0.0;
    for (std::size_t k = 1; k < d.probs().size(); ++k) {
        acc += static_cast<double>(k) * d[k];
    }
    return std::clamp(acc / d.n(), 0.0, 1.0);
}

inline ReferenceDistribution reference_distribution(ReferenceKind kind, std::uint32_t n,
                                                    std::uint32_t q = 0) {
    if (n == 0) {
        throw DomainError("reference_distribution: blocklength must be >= 1");
    }
    std::vector<double> log2_probs;
    if (kind == ReferenceKind::Q) {
        if (q < 2) {
            throw DomainError("reference_distribution: kind Q requires q >= 2, got " +
                              std::to_string(q));
        }
        // Binomial(n, (q-1)/q).
        log2_probs = detail::log2_binomial_pmf(n, static_cast<double>(q - 1) / q);
    } else {
        q = 0;
        log2_probs = detail::log2_binomial_pmf(n, 0.5);
    }
    auto probs = ProbVector(detail::exp2_all(log2_probs));
    return {kind, n, q, std::move(probs), std::move(log2_probs)};
}

/// Normalizes a histogram of Hamming distances 0..n into an ErrorDistribution.
inline ErrorDistribution empirical_error_distribution(std::span<const std::uint64_t> hamming_counts,
                                                      std::uint32_t n) {
    if (hamming_counts.size() != static_cast<std::size_t>(n) + 1) {
        throw DomainError("empirical_error_distribution: histogram has " +
                          std::to_string(hamming_counts.size()) + " bins, expected " +
                          std::to_string(n + 1));
    }
    std::uint64_t total = 0;
    for (auto c : hamming_counts) {
        total += c;
    }
    if (total == 0) {
        throw DomainError("empirical_error_distribution: histogram is empty");
    }
    std::vector<double> probs(hamming_counts.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        probs[k] = static_cast<double>(hamming_counts[k]) / static_cast<double>(total);
    }
    return {n, ProbVector(std::move(probs))};
}

} // namespace fano_ext
