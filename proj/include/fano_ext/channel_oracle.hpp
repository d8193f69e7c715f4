#pragma once

// Ground truth for small instances: exact enumeration of the n-fold product
// of a discrete memoryless channel under a uniform input, and a seeded
// Monte Carlo sampler of Hamming-distance histograms for larger ones.
//
// Nothing in here uses the bound formulas. The enumeration walks every
// (x, y) pair of the product channel directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fano_ext/error_model.hpp"
#include "fano_ext/numerics.hpp"
#include "fano_ext/parallel.hpp"

namespace fano_ext {

/// Row-sum tolerance for transition matrices.
inline constexpr double kRowSumTolerance = 1e-12;

/// A discrete memoryless channel with the same q-letter input and output
/// alphabet; transition(x, y) = Pr(Y = y | X = x).
class DmcSpec {
public:
    DmcSpec(std::uint32_t q, std::vector<double> row_major) : q_(q), w_(std::move(row_major)) {
        if (q < 2) {
            throw DomainError("DmcSpec: alphabet size must be >= 2, got " + std::to_string(q));
        }
        if (w_.size() != static_cast<std::size_t>(q) * q) {
            throw DomainError("DmcSpec: expected " + std::to_string(q * q) + " entries, got " +
                              std::to_string(w_.size()));
        }
        for (std::uint32_t x = 0; x < q; ++x) {
            double row = 0.0;
            for (std::uint32_t y = 0; y < q; ++y) {
                const double v = (*this)(x, y);
                if (!(v >= 0.0 && v <= 1.0)) {
                    throw DomainError("DmcSpec: entry (" + std::to_string(x) + "," +
                                      std::to_string(y) + ") outside [0,1]");
                }
                row += v;
            }
            if (std::abs(row - 1.0) > kRowSumTolerance) {
                throw DomainError("DmcSpec: row " + std::to_string(x) + " sums to " +
                                  std::to_string(row));
            }
        }
    }

    DmcSpec(std::initializer_list<std::initializer_list<double>> rows)
        : DmcSpec(static_cast<std::uint32_t>(rows.size()), flatten(rows)) {}

    [[nodiscard]] std::uint32_t q() const noexcept { return q_; }
    [[nodiscard]] double operator()(std::uint32_t x, std::uint32_t y) const {
        return w_[static_cast<std::size_t>(x) * q_ + y];
    }

private:
    static std::vector<double> flatten(std::initializer_list<std::initializer_list<double>> rows) {
        std::vector<double> out;
        for (const auto& r : rows) {
            if (r.size() != rows.size()) {
                throw DomainError("DmcSpec: transition matrix must be square");
            }
            out.insert(out.end(), r.begin(), r.end());
        }
        return out;
    }

    std::uint32_t q_;
    std::vector<double> w_;
};

/// Diagonal 1 - (q-1) eps, off-diagonal eps.
inline DmcSpec qsc_spec(const QscChannel& ch) {
    const std::uint32_t q = ch.q();
    std::vector<double> w(static_cast<std::size_t>(q) * q, ch.eps());
    for (std::uint32_t x = 0; x < q; ++x) {
        w[static_cast<std::size_t>(x) * q + x] = 1.0 - ch.symbol_error();
    }
    return {q, std::move(w)};
}

inline DmcSpec qsc_spec(std::uint32_t q, double eps) { return qsc_spec(QscChannel(q, eps)); }

/// Parses "q" on the first line followed by q whitespace-separated rows.
inline DmcSpec parse_dmc(std::istream& in) {
    long long q = 0;
    if (!(in >> q) || q < 2 || q > 65536) {
        throw DomainError("matrix file: first token must be an alphabet size q >= 2");
    }
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(q * q));
    for (long long i = 0; i < q * q; ++i) {
        double v = 0.0;
        if (!(in >> v)) {
            throw DomainError("matrix file: expected " + std::to_string(q * q) +
                              " transition entries, found " + std::to_string(i));
        }
        w.push_back(v);
    }
    std::string extra;
    if (in >> extra) {
        throw DomainError("matrix file: unexpected trailing token '" + extra + "'");
    }
    return {static_cast<std::uint32_t>(q), std::move(w)};
}

/// Raised when a file cannot be opened or read.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline DmcSpec load_dmc(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open matrix file '" + path + "'");
    }
    return parse_dmc(in);
}

/// Upper limit on the number of (x, y) word pairs an enumeration may visit.
struct EnumerationBudget {
    std::uint64_t max_pairs = 100'000'000;
};

/// Raised when q^(2n) exceeds the enumeration budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint32_t q, std::uint32_t n, std::string required, std::uint64_t budget)
        : std::runtime_error("enumeration of q=" + std::to_string(q) + ", n=" + std::to_string(n) +
                             " needs " + required + " word pairs, budget is " +
                             std::to_string(budget)) {}
};

/// q^(2n) when it fits the budget, otherwise throws BudgetExceeded.
inline std::uint64_t required_pairs(std::uint32_t q, std::uint32_t n, EnumerationBudget budget) {
    if (n == 0) {
        throw DomainError("enumeration: blocklength must be >= 1");
    }
    std::uint64_t pairs = 1;
    for (std::uint32_t i = 0; i < 2 * n; ++i) {
        if (pairs > budget.max_pairs / q) {
            const double approx = 2.0 * n * std::log10(static_cast<double>(q));
            std::ostringstream req;
            req << "~1e" << static_cast<long long>(std::floor(approx));
            throw BudgetExceeded(q, n, req.str(), budget.max_pairs);
        }
        pairs *= q;
    }
    return pairs;
}

/// Everything the oracle learns from one enumeration pass.
struct ExactChannelSummary {
    std::uint32_t n = 0;
    std::uint32_t q = 0;
    double conditional_entropy = 0.0; ///< H(X|Y), bits
    double mutual_info = 0.0;         ///< I(X;Y) = n log2 q - H(X|Y), bits
    ErrorDistribution distance;       ///< law of H_d(X, Y)
};

/// Full enumeration of the n-fold product channel with X uniform on q^n
/// words. The result does not depend on `threads`: work is split into a
/// fixed set of output-word blocks that are reduced in index order.
inline ExactChannelSummary enumerate_product_channel(const DmcSpec& spec, std::uint32_t n,
                                                     EnumerationBudget budget = {},
                                                     unsigned threads = 0) {
    const std::uint32_t q = spec.q();
    (void)required_pairs(q, n, budget);
    std::uint64_t words = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        words *= q;
    }

    // digits[w * n + i] is symbol i of word w.
    std::vector<std::uint32_t> digits(words * n);
    for (std::uint64_t w = 0; w < words; ++w) {
        std::uint64_t v = w;
        for (std::uint32_t i = 0; i < n; ++i) {
            digits[w * n + i] = static_cast<std::uint32_t>(v % q);
            v /= q;
        }
    }
    const double input_prob = 1.0 / static_cast<double>(words);

    struct Partial {
        detail::CompensatedSum cond_entropy;
        std::vector<detail::CompensatedSum> distance;
    };
    constexpr std::uint64_t kBlock = 16;
    const std::uint64_t blocks = (words + kBlock - 1) / kBlock;
    std::vector<Partial> partials(blocks);

    detail::parallel_for(blocks, threads, [&](std::size_t b) {
        Partial part;
        part.distance.resize(static_cast<std::size_t>(n) + 1);
        std::vector<double> column(words);
        const std::uint64_t y_end = std::min<std::uint64_t>(words, (b + 1) * kBlock);
        for (std::uint64_t y = b * kBlock; y < y_end; ++y) {
            const std::uint32_t* ys = &digits[y * n];
            detail::CompensatedSum py;
            for (std::uint64_t x = 0; x < words; ++x) {
                const std::uint32_t* xs = &digits[x * n];
                double p = input_prob;
                std::uint32_t dist = 0;
                for (std::uint32_t i = 0; i < n; ++i) {
                    p *= spec(xs[i], ys[i]);
                    dist += xs[i] != ys[i] ? 1U : 0U;
                }
                column[x] = p;
                py.add(p);
                part.distance[dist].add(p);
            }
            const double p_y = py.value();
            if (p_y == 0.0) {
                continue;
            }
            // -sum_x P(x,y) log2 P(x|y)
            for (std::uint64_t x = 0; x < words; ++x) {
                const double p = column[x];
                if (p > 0.0) {
                    part.cond_entropy.add(-p * std::log2(p / p_y));
                }
            }
        }
        partials[b] = std::move(part);
    });

    detail::CompensatedSum h;
    std::vector<detail::CompensatedSum> dist(static_cast<std::size_t>(n) + 1);
    for (const auto& part : partials) {
        h.add(part.cond_entropy.value());
        for (std::size_t k = 0; k <= n; ++k) {
            dist[k].add(part.distance[k].value());
        }
    }
    std::vector<double> law(static_cast<std::size_t>(n) + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        law[k] = std::clamp(dist[k].value(), 0.0, 1.0);
    }
    const double cond = std::max(0.0, h.value());
    return {n, q, cond, n * std::log2(static_cast<double>(q)) - cond,
            ErrorDistribution(n, ProbVector(std::move(law)))};
}

/// H(X|Y) for n uses of the channel with uniform input, by enumeration.
inline double exact_conditional_entropy(const DmcSpec& spec, std::uint32_t n,
                                        EnumerationBudget budget = {}, unsigned threads = 0) {
    return enumerate_product_channel(spec, n, budget, threads).conditional_entropy;
}

/// I(X;Y) for n uses of the channel with uniform input, by enumeration.
inline double exact_mutual_info(const DmcSpec& spec, std::uint32_t n,
                                EnumerationBudget budget = {}, unsigned threads = 0) {
    return enumerate_product_channel(spec, n, budget, threads).mutual_info;
}

/// Exact law of H_d(X, Y) under uniform X, by enumeration.
inline ErrorDistribution hamming_distance_distribution(const DmcSpec& spec, std::uint32_t n,
                                                       EnumerationBudget budget = {},
                                                       unsigned threads = 0) {
    return enumerate_product_channel(spec, n, budget, threads).distance;
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

/// Trials are drawn in fixed blocks, each from its own generator, so the
/// histogram depends only on (spec, n, trials, seed).
inline constexpr std::uint64_t kMonteCarloBlock = 65536;

/// Generator identification written next to Monte Carlo output.
inline const std::string kMonteCarloRngAlgorithm =
    "mt19937_64 per 65536-trial block, seeded by std::seed_seq{seed_lo32, seed_hi32, block_lo32, "
    "block_hi32}; uniform = (u64 >> 11) * 2^-53";

namespace detail {

inline double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 block_generator(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

} // namespace detail

/// Histogram of H_d(X, Y) over `trials` independent uses of the n-fold
/// channel: X uniform over words, each symbol passed through its row.
inline std::vector<std::uint64_t> monte_carlo_error_histogram(const DmcSpec& spec, std::uint32_t n,
                                                              std::uint64_t trials,
                                                              std::uint64_t seed,
                                                              unsigned threads = 0) {
    if (n == 0) {
        throw DomainError("monte_carlo_error_histogram: blocklength must be >= 1");
    }
    if (trials == 0) {
        throw DomainError("monte_carlo_error_histogram: trials must be >= 1");
    }
    const std::uint32_t q = spec.q();
    std::vector<double> cdf(static_cast<std::size_t>(q) * q);
    for (std::uint32_t x = 0; x < q; ++x) {
        double run = 0.0;
        for (std::uint32_t y = 0; y < q; ++y) {
            run += spec(x, y);
            cdf[static_cast<std::size_t>(x) * q + y] = run;
        }
        cdf[static_cast<std::size_t>(x) * q + q - 1] = 1.0;
    }

    const std::uint64_t blocks = (trials + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<std::vector<std::uint64_t>> partial(blocks);
    detail::parallel_for(blocks, threads, [&](std::size_t b) {
        std::vector<std::uint64_t> hist(static_cast<std::size_t>(n) + 1, 0);
        auto gen = detail::block_generator(seed, b);
        const std::uint64_t begin = b * kMonteCarloBlock;
        const std::uint64_t end = std::min(trials, begin + kMonteCarloBlock);
        for (std::uint64_t t = begin; t < end; ++t) {
            std::uint32_t dist = 0;
            for (std::uint32_t i = 0; i < n; ++i) {
                const auto x = std::min<std::uint32_t>(
                    q - 1, static_cast<std::uint32_t>(detail::unit_uniform(gen) * q));
                const double u = detail::unit_uniform(gen);
                const double* row = &cdf[static_cast<std::size_t>(x) * q];
                std::uint32_t y = 0;
                while (u >= row[y]) {
                    ++y;
                }
                dist += y != x ? 1U : 0U;
            }
            ++hist[dist];
        }
        partial[b] = std::move(hist);
    });

    std::vector<std::uint64_t> hist(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& part : partial) {
        for (std::size_t k = 0; k <= n; ++k) {
            hist[k] += part[k];
        }
    }
    return hist;
}

} // namespace fano_ext
