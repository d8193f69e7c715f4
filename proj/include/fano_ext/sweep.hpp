#pragma once

// Sweeps of BoundReport over blocklength or crossover probability, and the
// CSV form of those sweeps.
//
// CSV layout: zero or more leading '#' metadata lines, one header row with
// the columns in kCsvColumns order, then one row per configuration. Floats
// carry 12 significant digits with '.' as the decimal separator; an absent
// optional value is an empty field.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fano_ext/bounds.hpp"
#include "fano_ext/parallel.hpp"

namespace fano_ext {

inline constexpr std::string_view kToolName = "fano-ext";
inline constexpr std::string_view kToolVersion = "1.0.0";

inline constexpr std::array<std::string_view, 13> kCsvColumns = {
    "n",        "q",         "eps",       "p_b",         "p_s",         "h_exact",      "h_ext_ub",
    "h_fano_ub", "i_exact", "i_ext_lb", "i_fano_lb", "logm_ext_ub", "logm_fano_ub"};

/// Shortest decimal form with 12 significant digits, independent of locale.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 12);
    return {buf.data(), res.ptr};
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw DomainError("csv: cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

enum class SweptVariable { Blocklength, Crossover };

struct SweepTable {
    SweptVariable swept = SweptVariable::Blocklength;
    std::vector<std::string> metadata; ///< lines without the leading "# "
    std::vector<BoundReport> rows;
};

/// The CSV cells of one report, in kCsvColumns order.
inline std::array<std::string, kCsvColumns.size()> csv_cells(const BoundReport& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    return {std::to_string(r.n),        std::to_string(r.q),         format_double(r.eps),
            format_double(r.p_b),       format_double(r.p_s),        opt(r.h_exact),
            format_double(r.h_ext_ub),  format_double(r.h_fano_ub),  opt(r.i_exact),
            format_double(r.i_ext_lb),  format_double(r.i_fano_lb),  format_double(r.logm_ext_ub),
            format_double(r.logm_fano_ub)};
}

inline void write_csv(std::ostream& out, const SweepTable& table) {
    for (const auto& line : table.metadata) {
        out << "# " << line << '\n';
    }
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
        out << (c ? "," : "") << kCsvColumns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        const auto cells = csv_cells(row);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            out << (c ? "," : "") << cells[c];
        }
        out << '\n';
    }
}

/// A parsed CSV: metadata lines and one optional value per column per row.
struct CsvData {
    std::vector<std::string> metadata;
    std::vector<std::array<std::optional<double>, kCsvColumns.size()>> rows;
};

inline CsvData read_csv(std::istream& in) {
    CsvData data;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!header_seen && !line.empty() && line.front() == '#') {
            data.metadata.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.back() == ',') {
            cells.emplace_back();
        }
        if (cells.size() != kCsvColumns.size()) {
            throw DomainError("csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(kCsvColumns.size()) + " fields, got " +
                              std::to_string(cells.size()));
        }
        if (!header_seen) {
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (cells[c] != kCsvColumns[c]) {
                    throw DomainError("csv header: column " + std::to_string(c) + " is '" +
                                      cells[c] + "', expected '" + std::string(kCsvColumns[c]) +
                                      "'");
                }
            }
            header_seen = true;
            continue;
        }
        auto& row = data.rows.emplace_back();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_double(cells[c]);
        }
    }
    if (!header_seen) {
        throw DomainError("csv: missing header row");
    }
    return data;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepOptions {
    CodebookProtocol protocol{};
    unsigned threads = 0; ///< 0 = hardware concurrency
};

namespace detail {

inline std::vector<BoundReport> evaluate_rows(std::uint32_t q, const std::vector<std::uint32_t>& ns,
                                              const std::vector<double>& epss,
                                              const SweepOptions& opts) {
    std::vector<BoundReport> rows(ns.size());
    parallel_for(ns.size(), opts.threads, [&](std::size_t i) {
        rows[i] = qsc_bound_report(ns[i], q, epss[i], opts.protocol);
    });
    return rows;
}

} // namespace detail

/// One row per n in n_min, n_min + step, ..., <= n_max.
inline SweepTable sweep_blocklength(std::uint32_t q, double eps, std::uint32_t n_min,
                                    std::uint32_t n_max, std::uint32_t step,
                                    const SweepOptions& opts = {}) {
    const QscChannel channel(q, eps);
    if (n_min < 1 || n_min > n_max) {
        throw DomainError("sweep-n: need 1 <= n_min <= n_max");
    }
    if (step < 1) {
        throw DomainError("sweep-n: step must be >= 1");
    }
    std::vector<std::uint32_t> ns;
    for (std::uint64_t n = n_min; n <= n_max; n += step) {
        ns.push_back(static_cast<std::uint32_t>(n));
    }
    SweepTable table;
    table.swept = SweptVariable::Blocklength;
    table.metadata = {
        std::string(kToolName) + " " + std::string(kToolVersion),
        "sweep: n",
        "q=" + std::to_string(q) + " eps=" + format_double(channel.eps()) +
            " n_min=" + std::to_string(n_min) + " n_max=" + std::to_string(n_max) +
            " n_step=" + std::to_string(step),
        "eps_fraction=" + format_double(opts.protocol.eps_fraction)};
    table.rows = detail::evaluate_rows(q, ns, std::vector<double>(ns.size(), eps), opts);
    return table;
}

enum class GridKind { Linear, Geometric };

/// `steps` points from eps_min to eps_max inclusive; strictly increasing.
inline std::vector<double> crossover_grid(std::uint32_t q, double eps_min, double eps_max,
                                          std::uint32_t steps, GridKind kind) {
    if (q < 2) {
        throw DomainError("grid: q must be >= 2");
    }
    const double eps_cap = 1.0 / static_cast<double>(q - 1);
    if (!(eps_min >= 0.0 && eps_min <= eps_max && eps_max <= eps_cap * (1.0 + kCrossoverSlack))) {
        throw DomainError("grid: need 0 <= eps_min <= eps_max <= 1/(q-1)");
    }
    if (steps < 1) {
        throw DomainError("grid: steps must be >= 1");
    }
    if (steps == 1) {
        if (eps_min != eps_max) {
            throw DomainError("grid: a single step needs eps_min == eps_max");
        }
        return {eps_min};
    }
    if (eps_min == eps_max) {
        throw DomainError("grid: several steps need eps_min < eps_max");
    }
    if (kind == GridKind::Geometric && eps_min <= 0.0) {
        throw DomainError("grid: a geometric grid needs eps_min > 0");
    }
    std::vector<double> grid(steps);
    for (std::uint32_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        grid[i] = kind == GridKind::Linear ? eps_min + t * (eps_max - eps_min)
                                           : eps_min * std::pow(eps_max / eps_min, t);
    }
    grid.front() = eps_min;
    grid.back() = eps_max;
    return grid;
}

inline SweepTable sweep_crossover(std::uint32_t q, std::uint32_t n, const std::vector<double>& grid,
                                  const SweepOptions& opts = {}) {
    if (n < 1) {
        throw DomainError("sweep-eps: blocklength must be >= 1");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("sweep-eps: grid must be strictly increasing");
        }
    }
    SweepTable table;
    table.swept = SweptVariable::Crossover;
    table.metadata = {std::string(kToolName) + " " + std::string(kToolVersion), "sweep: eps",
                      "q=" + std::to_string(q) + " n=" + std::to_string(n) +
                          " eps_min=" + format_double(grid.empty() ? 0.0 : grid.front()) +
                          " eps_max=" + format_double(grid.empty() ? 0.0 : grid.back()) +
                          " steps=" + std::to_string(grid.size()),
                      "eps_fraction=" + format_double(opts.protocol.eps_fraction)};
    table.rows = detail::evaluate_rows(q, std::vector<std::uint32_t>(grid.size(), n), grid, opts);
    return table;
}

} // namespace fano_ext
