#pragma once

// Classical Fano-type bounds and their Hamming-distance refinements, plus
// the closed forms for the q-ary symmetric channel.
//
// All quantities are in bits. Lower bounds are returned exactly as computed,
// negative values included; clamping is a presentation concern.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fano_ext/error_model.hpp"
#include "fano_ext/numerics.hpp"

namespace fano_ext {

/// Agreement tolerance for algebraically identical bound expressions.
inline constexpr double kIdentityTolerance = 1e-9;

namespace detail {

inline void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(what) + ": probability " + std::to_string(p) +
                          " outside [0,1]");
    }
}

inline void require_alphabet(std::uint32_t q, const char* what) {
    if (q < 2) {
        throw DomainError(std::string(what) + ": alphabet size q = " + std::to_string(q) +
                          " must be >= 2");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Classical bounds
// ---------------------------------------------------------------------------

/// H(X|Y) <= H_b(P_e) + P_e log2(M - 1), with M given as log2 M.
inline double fano_conditional_entropy_ub(double p_e_block, double m_size_log2) {
    detail::require_probability(p_e_block, "fano_conditional_entropy_ub");
    if (!(m_size_log2 >= 1.0)) {
        throw DomainError("fano_conditional_entropy_ub: alphabet size M must be >= 2");
    }
    const double tail = p_e_block == 0.0 ? 0.0 : p_e_block * log2_pow2_minus_one(m_size_log2);
    return binary_entropy(p_e_block) + tail;
}

/// I(X;Y) >= (1 - P_e) log2 M - H_b(P_e) when X or Y is equiprobable.
inline double fano_mutual_info_lb(double p_e_block, double m_size_log2) {
    detail::require_probability(p_e_block, "fano_mutual_info_lb");
    if (!(m_size_log2 >= 1.0)) {
        throw DomainError("fano_mutual_info_lb: alphabet size M must be >= 2");
    }
    return (1.0 - p_e_block) * m_size_log2 - binary_entropy(p_e_block);
}

/// log2 M <= (sup I + H_b(eps)) / (1 - eps) for an average-error-eps code.
inline double fano_codebook_ub(double i_sup, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw DomainError("fano_codebook_ub: error probability " + std::to_string(eps) +
                          " must lie in [0,1)");
    }
    if (!(i_sup >= 0.0)) {
        throw DomainError("fano_codebook_ub: sup I(X;Y) must be >= 0");
    }
    return (i_sup + binary_entropy(eps)) / (1.0 - eps);
}

// ---------------------------------------------------------------------------
// Hamming-distance bounds
// ---------------------------------------------------------------------------

/// H(X|Y) <= H(p) + sum_{k>=1} p_k log2(C(n,k) (q-1)^k).
inline double ext_fano_ub(const ErrorDistribution& d, std::uint32_t q) {
    detail::require_alphabet(q, "ext_fano_ub");
    const std::uint32_t n = d.n();
    const double log2_alt = std::log2(static_cast<double>(q - 1));
    double acc = entropy(d.probs());
    for (std::uint32_t k = 1; k <= n; ++k) {
        const double pk = d[k];
        if (pk == 0.0) {
            continue;
        }
        acc += pk * (log2_binomial(n, k) + k * log2_alt);
    }
    return acc;
}

/// The same bound written as n log2 q - D(p || q-reference).
inline double ext_fano_relative_form(const ErrorDistribution& d, std::uint32_t q) {
    detail::require_alphabet(q, "ext_fano_relative_form");
    const auto ref = reference_distribution(ReferenceKind::Q, d.n(), q);
    return d.n() * std::log2(static_cast<double>(q)) - relative_entropy_log2(d.probs(), ref.log2_probs);
}

/// The same bound written as n - D(p || w) + n P_s log2(q-1).
inline double ext_fano_cor1(const ErrorDistribution& d, std::uint32_t q) {
    detail::require_alphabet(q, "ext_fano_cor1");
    const auto ref = reference_distribution(ReferenceKind::W, d.n());
    const double n = d.n();
    return n - relative_entropy_log2(d.probs(), ref.log2_probs) +
           n * symbol_error_probability(d) * std::log2(static_cast<double>(q - 1));
}

/// I(X;Y) >= n log2 q - ext_fano_ub(d, q).
///
/// Valid only when X or Y is equiprobable over the q^n words. That cannot be
/// checked from d, so it is the caller's assertion.
inline double ext_mutual_info_lb(const ErrorDistribution& d, std::uint32_t q) {
    detail::require_alphabet(q, "ext_mutual_info_lb");
    return d.n() * std::log2(static_cast<double>(q)) - ext_fano_ub(d, q);
}

/// I(X;Y) >= D(p || q-reference); same hypothesis as ext_mutual_info_lb.
inline double ext_mutual_info_relative_lb(const ErrorDistribution& d, std::uint32_t q) {
    detail::require_alphabet(q, "ext_mutual_info_relative_lb");
    const auto ref = reference_distribution(ReferenceKind::Q, d.n(), q);
    return relative_entropy_log2(d.probs(), ref.log2_probs);
}

/// log2 M <= sup I - D(p || w) + n (1 + P_s log2(q-1)), with P_s taken from d.
inline double ext_codebook_ub(double i_sup, const ErrorDistribution& d, std::uint32_t q) {
    detail::require_alphabet(q, "ext_codebook_ub");
    if (!(i_sup >= 0.0)) {
        throw DomainError("ext_codebook_ub: sup I(X;Y) must be >= 0");
    }
    const auto ref = reference_distribution(ReferenceKind::W, d.n());
    const double n = d.n();
    return i_sup - relative_entropy_log2(d.probs(), ref.log2_probs) +
           n * (1.0 + symbol_error_probability(d) * std::log2(static_cast<double>(q - 1)));
}

// ---------------------------------------------------------------------------
// q-ary symmetric channel closed forms
// ---------------------------------------------------------------------------

/// Single-letter entropy H(1 - p_e, eps, ..., eps) of a QSC row.
inline double qsc_row_entropy(const QscChannel& ch) {
    const double pe = ch.symbol_error();
    return -detail::xlog2x(1.0 - pe) - (ch.q() - 1) * detail::xlog2x(ch.eps());
}

/// C = log2 q + (1-p_e) log2(1-p_e) + (q-1) eps log2 eps.
inline double qsc_capacity_per_symbol(const QscChannel& ch) {
    return std::log2(static_cast<double>(ch.q())) - qsc_row_entropy(ch);
}

inline double qsc_capacity_per_symbol(std::uint32_t q, double eps) {
    return qsc_capacity_per_symbol(QscChannel(q, eps));
}

/// Equivocation of n memoryless QSC uses: n times the row entropy.
inline double qsc_exact_conditional_entropy(std::uint32_t n, const QscChannel& ch) {
    if (n == 0) {
        throw DomainError("qsc_exact_conditional_entropy: blocklength must be >= 1");
    }
    return n * qsc_row_entropy(ch);
}

inline double qsc_exact_conditional_entropy(std::uint32_t n, std::uint32_t q, double eps) {
    return qsc_exact_conditional_entropy(n, QscChannel(q, eps));
}

/// How the error constraint of a codebook bound is derived from the channel.
/// Both codebook bounds are charged the same fraction of their own error
/// measure: P_s for the Hamming-distance bound, P_b for the classical one.
struct CodebookProtocol {
    double eps_fraction = 0.5;
};

/// Hamming-distance codebook bound for a QSC under a symbol-error constraint
/// of eps_fraction * P_s. The constraining error law is the QSC law at that
/// symbol error; sup I is n times the capacity of the actual channel.
inline double qsc_codebook_ext_ub(std::uint32_t n, const QscChannel& ch,
                                  CodebookProtocol protocol = {}) {
    if (!(protocol.eps_fraction > 0.0 && protocol.eps_fraction <= 1.0)) {
        throw DomainError("eps fraction " + std::to_string(protocol.eps_fraction) +
                          " must lie in (0,1]");
    }
    const QscChannel constrained(ch.q(), ch.eps() * protocol.eps_fraction);
    const auto d = qsc_error_distribution(n, constrained);
    return ext_codebook_ub(n * qsc_capacity_per_symbol(ch), d, ch.q());
}

/// Classical codebook bound for a QSC under a block-error constraint of
/// eps_fraction * P_b.
inline double qsc_codebook_fano_ub(std::uint32_t n, const QscChannel& ch,
                                   CodebookProtocol protocol = {}) {
    if (!(protocol.eps_fraction > 0.0 && protocol.eps_fraction <= 1.0)) {
        throw DomainError("eps fraction " + std::to_string(protocol.eps_fraction) +
                          " must lie in (0,1]");
    }
    const double pb = block_error_probability(qsc_error_distribution(n, ch));
    return fano_codebook_ub(n * qsc_capacity_per_symbol(ch), protocol.eps_fraction * pb);
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

/// Every bound for one (n, q, eps) configuration.
struct BoundReport {
    std::uint32_t n = 0;
    std::uint32_t q = 0;
    double eps = 0.0;
    double p_b = 0.0;
    double p_s = 0.0;

    double h_ext_ub = 0.0;
    double h_rel_form = 0.0;
    double h_cor1_ub = 0.0;
    double h_fano_ub = 0.0;
    std::optional<double> h_exact;

    double i_ext_lb = 0.0;
    double i_cor4_lb = 0.0;
    double i_fano_lb = 0.0;
    std::optional<double> i_exact;

    double logm_ext_ub = 0.0;
    double logm_fano_ub = 0.0;
};

inline BoundReport qsc_bound_report(std::uint32_t n, const QscChannel& ch,
                                    CodebookProtocol protocol = {}) {
    const auto d = qsc_error_distribution(n, ch);
    const std::uint32_t q = ch.q();
    const double log2_words = n * std::log2(static_cast<double>(q));

    BoundReport r;
    r.n = n;
    r.q = q;
    r.eps = ch.eps();
    r.p_b = block_error_probability(d);
    r.p_s = symbol_error_probability(d);

    r.h_ext_ub = ext_fano_ub(d, q);
    r.h_rel_form = ext_fano_relative_form(d, q);
    r.h_cor1_ub = ext_fano_cor1(d, q);
    r.h_fano_ub = fano_conditional_entropy_ub(r.p_b, log2_words);
    r.h_exact = qsc_exact_conditional_entropy(n, ch);

    r.i_ext_lb = log2_words - r.h_ext_ub;
    r.i_cor4_lb = ext_mutual_info_relative_lb(d, q);
    r.i_fano_lb = fano_mutual_info_lb(r.p_b, log2_words);
    r.i_exact = n * qsc_capacity_per_symbol(ch);

    r.logm_ext_ub = qsc_codebook_ext_ub(n, ch, protocol);
    r.logm_fano_ub = qsc_codebook_fano_ub(n, ch, protocol);
    return r;
}

inline BoundReport qsc_bound_report(std::uint32_t n, std::uint32_t q, double eps,
                                    CodebookProtocol protocol = {}) {
    return qsc_bound_report(n, QscChannel(q, eps), protocol);
}

/// Human-readable list of violated report invariants; empty when consistent.
inline std::vector<std::string> check_invariants(const BoundReport& r,
                                                 double tol = kIdentityTolerance) {
    std::vector<std::string> bad;
    auto expect = [&](bool ok, std::string what) {
        if (!ok) {
            bad.push_back(std::move(what));
        }
    };
    expect(std::abs(r.h_ext_ub - r.h_rel_form) <= tol, "h_ext_ub != h_rel_form");
    expect(std::abs(r.h_ext_ub - r.h_cor1_ub) <= tol, "h_ext_ub != h_cor1_ub");
    if (r.h_exact) {
        expect(*r.h_exact <= r.h_ext_ub + tol, "h_exact > h_ext_ub");
        expect(*r.h_exact <= r.h_fano_ub + tol, "h_exact > h_fano_ub");
    }
    if (r.i_exact) {
        expect(*r.i_exact >= r.i_ext_lb - tol, "i_exact < i_ext_lb");
    }
    expect(r.p_s <= r.p_b + tol, "p_s > p_b");
    return bad;
}

} // namespace fano_ext
