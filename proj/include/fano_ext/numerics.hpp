#pragma once

// Log-domain scalar kernels. Every logarithm here is base 2 and every
// entropy is reported in bits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fano_ext {

/// Raised whenever an argument falls outside the domain of a formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Tolerance applied to the sum of a probability vector at construction.
inline constexpr double kProbSumTolerance = 1e-12;

/// A probability vector validated once at construction: every entry lies in
/// [0,1] and the entries sum to 1 within kProbSumTolerance. Inputs that fail
/// are rejected, never renormalized.
class ProbVector {
public:
    ProbVector() = default;

    explicit ProbVector(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw DomainError("ProbVector: empty probability vector");
        }
        double sum = 0.0;
        double carry = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const double v = values_[i];
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DomainError("ProbVector: entry " + std::to_string(i) + " = " +
                                  std::to_string(v) + " is outside [0,1]");
            }
            // Kahan summation so that long vectors do not drift.
            const double y = v - carry;
            const double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        if (std::abs(sum - 1.0) > kProbSumTolerance) {
            throw DomainError("ProbVector: entries sum to " + std::to_string(sum) +
                              ", expected 1 within 1e-12");
        }
    }

    ProbVector(std::initializer_list<double> values) : ProbVector(std::vector<double>(values)) {}

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] auto begin() const noexcept { return values_.begin(); }
    [[nodiscard]] auto end() const noexcept { return values_.end(); }

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

private:
    std::vector<double> values_;
};

namespace detail {

// x * log2(x) with the 0 log 0 = 0 convention taken as an explicit branch.
inline double xlog2x(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return x * std::log2(x);
}

// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling remainder (natural log).
inline double stirling_error(double n) {
    constexpr double s0 = 1.0 / 12.0;
    constexpr double s1 = 1.0 / 360.0;
    constexpr double s2 = 1.0 / 1260.0;
    constexpr double s3 = 1.0 / 1680.0;
    constexpr double s4 = 1.0 / 1188.0;
    if (n <= 15.0) {
        // glibc's lgamma writes the global signgam; the reentrant form does not.
#if defined(__GLIBC__)
        int sign = 0;
        const double lg = ::lgamma_r(n + 1.0, &sign);
#else
        const double lg = std::lgamma(n + 1.0);
#endif
        return lg - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    const double nn = n * n;
    if (n > 500.0) {
        return (s0 - s1 / nn) / n;
    }
    if (n > 80.0) {
        return (s0 - (s1 - s2 / nn) / nn) / n;
    }
    if (n > 35.0) {
        return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
    }
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x/m) + m - x, evaluated without cancellation when x is close to m.
inline double deviance_term(double x, double m) {
    if (std::abs(x - m) < 0.1 * (x + m)) {
        double v = (x - m) / (x + m);
        double s = (x - m) * v;
        double ej = 2.0 * x * v;
        v *= v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) {
                return s1;
            }
            s = s1;
        }
    }
    return x * std::log(x / m) + m - x;
}

} // namespace detail

/// Largest n for which binomial coefficients are evaluated exactly in
/// integer arithmetic; C(64, 32) still fits in 64 bits.
inline constexpr std::uint64_t kExactBinomialLimit = 64;

/// log2 C(n, k). Exact integer evaluation for n <= 64, Stirling series above.
inline double log2_binomial(std::uint64_t n, std::int64_t k) {
    if (k < 0 || static_cast<std::uint64_t>(k) > n) {
        throw DomainError("log2_binomial: k = " + std::to_string(k) + " outside [0, " +
                          std::to_string(n) + "]");
    }
    const auto kk = std::min<std::uint64_t>(static_cast<std::uint64_t>(k),
                                            n - static_cast<std::uint64_t>(k));
    if (kk == 0) {
        return 0.0;
    }
    if (n <= kExactBinomialLimit) {
        unsigned __int128 c = 1;
        for (std::uint64_t i = 1; i <= kk; ++i) {
            c = c * (n - kk + i) / i;
        }
        return std::log2(static_cast<double>(c));
    }
    // Stirling split: n H(k/n) carries the bulk as a sum of positive terms,
    // the remainders and the sqrt factor are small corrections.
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(kk);
    const double rest = nd - kd;
    const double bulk = kd * std::log(nd / kd) - rest * std::log1p(-kd / nd);
    const double corr = detail::stirling_error(nd) - detail::stirling_error(kd) -
                        detail::stirling_error(rest) -
                        0.5 * std::log(2.0 * std::numbers::pi * kd * rest / nd);
    return (bulk + corr) / std::numbers::ln2;
}

/// log2 of the Binomial(n, r) probability mass at k, accurate to a few ulps
/// of the mass even when the mass itself is far below the double range.
/// r = 0 and r = 1 give point masses (-infinity elsewhere).
inline double log2_binomial_pmf(std::uint64_t n, std::uint64_t k, double r) {
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    if (k > n) {
        throw DomainError("log2_binomial_pmf: k > n");
    }
    if (!(r >= 0.0 && r <= 1.0)) {
        throw DomainError("log2_binomial_pmf: rate " + std::to_string(r) + " outside [0,1]");
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    if (r == 0.0) {
        return k == 0 ? 0.0 : kNegInf;
    }
    if (r == 1.0) {
        return k == n ? 0.0 : kNegInf;
    }
    const double s = 1.0 - r;
    if (k == 0) {
        return nd * std::log1p(-r) / std::numbers::ln2;
    }
    if (k == n) {
        return nd * std::log2(r);
    }
    const double rest = nd - kd;
    const double lc = detail::stirling_error(nd) - detail::stirling_error(kd) -
                      detail::stirling_error(rest) - detail::deviance_term(kd, nd * r) -
                      detail::deviance_term(rest, nd * s);
    const double lf = std::log(2.0 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
    return (lc - 0.5 * lf) / std::numbers::ln2;
}

/// log2 C(n, k) for every k in 0..n.
inline std::vector<double> log2_binomial_row(std::uint64_t n) {
    std::vector<double> row(n + 1);
    for (std::uint64_t k = 0; k <= n; ++k) {
        row[k] = log2_binomial(n, static_cast<std::int64_t>(k));
    }
    return row;
}

/// Shannon entropy -sum p log2 p, in bits.
inline double entropy(const ProbVector& p) {
    double h = 0.0;
    for (double v : p) {
        h -= detail::xlog2x(v);
    }
    return h < 0.0 ? 0.0 : h;
}

/// Binary entropy H_b(x) = -x log2 x - (1-x) log2 (1-x); zero at both ends.
inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("binary_entropy: argument " + std::to_string(x) + " outside [0,1]");
    }
    return -detail::xlog2x(x) - detail::xlog2x(1.0 - x);
}

/// D(p || q) where q is given through its base-2 log-probabilities, so
/// reference laws far below the double range (q^-n for large n) stay exact.
/// An entry of -infinity marks q_k = 0.
inline double relative_entropy_log2(const ProbVector& p, std::span<const double> log2_q) {
    if (p.size() != log2_q.size()) {
        throw DomainError("relative_entropy: length mismatch (" + std::to_string(p.size()) +
                          " vs " + std::to_string(log2_q.size()) + ")");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double pk = p[k];
        if (pk == 0.0) {
            continue;
        }
        if (std::isinf(log2_q[k]) && log2_q[k] < 0.0) {
            throw DomainError("relative_entropy: support violation at index " + std::to_string(k) +
                              " (p_k > 0, q_k = 0)");
        }
        d += pk * (std::log2(pk) - log2_q[k]);
    }
    return d;
}

/// D(p || q) = sum p_k log2(p_k / q_k), in bits.
inline double relative_entropy(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size()) {
        throw DomainError("relative_entropy: length mismatch (" + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()) + ")");
    }
    std::vector<double> log2_q(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        log2_q[k] = q[k] == 0.0 ? -std::numeric_limits<double>::infinity() : std::log2(q[k]);
    }
    return relative_entropy_log2(p, log2_q);
}

/// log2(2^L - 1) for L >= 1, without forming 2^L when L is large.
inline double log2_pow2_minus_one(double log2_m) {
    if (!(log2_m >= 1.0)) {
        throw DomainError("log2(M-1): requires M >= 2, got log2 M = " + std::to_string(log2_m));
    }
    if (log2_m > 50.0) {
        return log2_m + std::log1p(-std::exp2(-log2_m)) / std::numbers::ln2;
    }
    return std::log2(std::exp2(log2_m) - 1.0);
}

} // namespace fano_ext
