#pragma once

// fano-ext command line: report, sweep-n, sweep-eps, verify.
//
// Exit codes: 0 success, 2 bad arguments, 3 verification failure,
// 4 I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fano_ext/bounds.hpp"
#include "fano_ext/channel_oracle.hpp"
#include "fano_ext/sweep.hpp"

namespace fano_ext::cli {

enum ExitCode : int {
    kSuccess = 0,
    kBadArguments = 2,
    kVerificationFailed = 3,
    kIoFailure = 4,
};

/// Tolerance for enumeration-based checks.
inline constexpr double kEnumTolerance = 1e-9;
/// Monte Carlo checks accept deviations up to this many standard errors.
inline constexpr double kMonteCarloSigmas = 3.0;

/// (name, value) pairs printed by `report`, in CSV column order followed by
/// the alternative forms that the CSV omits.
inline std::vector<std::pair<std::string, std::string>> report_fields(const BoundReport& r) {
    std::vector<std::pair<std::string, std::string>> out;
    const auto cells = csv_cells(r);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        out.emplace_back(std::string(kCsvColumns[c]), cells[c].empty() ? "NA" : cells[c]);
    }
    out.emplace_back("h_rel_form", format_double(r.h_rel_form));
    out.emplace_back("h_cor1_ub", format_double(r.h_cor1_ub));
    out.emplace_back("i_cor4_lb", format_double(r.i_cor4_lb));
    return out;
}

struct Check {
    std::string name;
    double oracle;
    double formula;
    double tolerance;
    enum class Kind { Equal, OracleAtMost, OracleAtLeast } kind = Kind::Equal;

    [[nodiscard]] double gap() const { return std::abs(oracle - formula); }
    [[nodiscard]] bool passed() const {
        switch (kind) {
        case Kind::Equal:
            return gap() <= tolerance;
        case Kind::OracleAtMost:
            return oracle <= formula + tolerance;
        case Kind::OracleAtLeast:
            return oracle >= formula - tolerance;
        }
        return false;
    }
};

inline const char* relation(Check::Kind k) {
    switch (k) {
    case Check::Kind::Equal:
        return "==";
    case Check::Kind::OracleAtMost:
        return "<=";
    case Check::Kind::OracleAtLeast:
        return ">=";
    }
    return "?";
}

inline int print_checks(std::ostream& out, std::ostream& err, const std::vector<Check>& checks) {
    bool all = true;
    double max_gap = 0.0;
    out << std::left << std::setw(28) << "check" << std::setw(4) << "rel" << std::setw(20)
        << "oracle" << std::setw(20) << "formula" << std::setw(20) << "|diff|" << std::setw(22)
        << "tolerance"
        << "result\n";
    for (const auto& c : checks) {
        const bool ok = c.passed();
        all = all && ok;
        if (c.kind == Check::Kind::Equal) {
            max_gap = std::max(max_gap, c.gap());
        }
        out << std::left << std::setw(28) << c.name << std::setw(4) << relation(c.kind)
            << std::setw(20) << format_double(c.oracle) << std::setw(20) << format_double(c.formula)
            << std::setw(20) << format_double(c.gap()) << std::setw(22)
            << format_double(c.tolerance) << (ok ? "PASS" : "FAIL") << '\n';
    }
    out << "max |diff| over equalities: " << format_double(max_gap) << '\n';
    if (all) {
        out << "PASS\n";
        return kSuccess;
    }
    out << "FAIL\n";
    err << "verification failed:";
    for (const auto& c : checks) {
        if (!c.passed()) {
            err << ' ' << c.name;
        }
    }
    err << '\n';
    return kVerificationFailed;
}

/// Per-symbol error of a DMC under uniform input: (1/q) sum_x (1 - W(x,x)).
inline double average_symbol_error(const DmcSpec& spec) {
    double acc = 0.0;
    for (std::uint32_t x = 0; x < spec.q(); ++x) {
        acc += 1.0 - spec(x, x);
    }
    return std::clamp(acc / spec.q(), 0.0, 1.0);
}

struct VerifyRequest {
    std::optional<QscChannel> qsc;
    std::optional<DmcSpec> matrix;
    std::uint32_t n = 1;
    bool monte_carlo = false;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 42;
    EnumerationBudget budget{};
    unsigned threads = 0;
};

inline std::vector<Check> full_enumeration_checks(const VerifyRequest& req) {
    const DmcSpec spec = req.qsc ? qsc_spec(*req.qsc) : *req.matrix;
    const std::uint32_t q = spec.q();
    const std::uint32_t n = req.n;
    const auto exact = enumerate_product_channel(spec, n, req.budget, req.threads);
    const double log2_words = n * std::log2(static_cast<double>(q));
    const double pb = block_error_probability(exact.distance);

    std::vector<Check> checks;
    using K = Check::Kind;
    const double ext_ub = ext_fano_ub(exact.distance, q);
    checks.push_back({"ext_ub==relative_form", ext_ub, ext_fano_relative_form(exact.distance, q),
                      kEnumTolerance});
    checks.push_back({"ext_ub==cor1_form", ext_ub, ext_fano_cor1(exact.distance, q), kEnumTolerance});
    if (req.qsc) {
        const auto& ch = *req.qsc;
        const auto formula_law = qsc_error_distribution(n, ch);
        for (std::uint32_t k = 0; k <= n; ++k) {
            checks.push_back({"p_" + std::to_string(k), exact.distance[k], formula_law[k],
                              kEnumTolerance});
        }
        checks.push_back({"H(X|Y)==ext_fano_ub", exact.conditional_entropy,
                          ext_fano_ub(formula_law, q), kEnumTolerance});
        checks.push_back({"H(X|Y)==closed_form", exact.conditional_entropy,
                          qsc_exact_conditional_entropy(n, ch), kEnumTolerance});
        checks.push_back({"I(X;Y)==n*capacity", exact.mutual_info,
                          n * qsc_capacity_per_symbol(ch), kEnumTolerance});
        checks.push_back({"I(X;Y)==ext_mi_lb", exact.mutual_info,
                          ext_mutual_info_lb(formula_law, q), kEnumTolerance});
    } else {
        checks.push_back({"H(X|Y)<=ext_fano_ub", exact.conditional_entropy, ext_ub, kEnumTolerance,
                          K::OracleAtMost});
        checks.push_back({"I(X;Y)>=ext_mi_lb", exact.mutual_info,
                          ext_mutual_info_lb(exact.distance, q), kEnumTolerance, K::OracleAtLeast});
    }
    checks.push_back({"H(X|Y)<=fano_ub", exact.conditional_entropy,
                      fano_conditional_entropy_ub(pb, log2_words), kEnumTolerance, K::OracleAtMost});
    checks.push_back({"I(X;Y)>=fano_lb", exact.mutual_info, fano_mutual_info_lb(pb, log2_words),
                      kEnumTolerance, K::OracleAtLeast});
    return checks;
}

inline std::vector<Check> monte_carlo_checks(const VerifyRequest& req) {
    const DmcSpec spec = req.qsc ? qsc_spec(*req.qsc) : *req.matrix;
    const std::uint32_t n = req.n;
    const auto hist = monte_carlo_error_histogram(spec, n, req.trials, req.seed, req.threads);
    const auto empirical = empirical_error_distribution(hist, n);
    // Symbols are independent under a uniform input, so H_d is binomial in
    // the average per-symbol error; for a QSC that rate is (q-1) eps.
    const auto law = req.qsc ? qsc_error_distribution(n, *req.qsc)
                             : ErrorDistribution(n, ProbVector(detail::exp2_all(detail::log2_binomial_pmf(
                                                        n, average_symbol_error(spec)))));
    const auto trials = static_cast<double>(req.trials);
    auto sigma = [&](double p) { return std::sqrt(p * (1.0 - p) / trials); };

    std::vector<Check> checks;
    for (std::uint32_t k = 0; k <= n; ++k) {
        checks.push_back({"p_" + std::to_string(k), empirical[k], law[k],
                          kMonteCarloSigmas * sigma(law[k])});
    }
    const double pb = block_error_probability(law);
    checks.push_back({"P_b", block_error_probability(empirical), pb, kMonteCarloSigmas * sigma(pb)});
    return checks;
}

class App {
public:
    App(std::ostream& out, std::ostream& err) : out_(out), err_(err) { build(); }

    int run(int argc, const char* const* argv) {
        try {
            app_.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            out_ << app_.help();
            return kSuccess;
        } catch (const CLI::CallForAllHelp& e) {
            out_ << app_.help("", CLI::AppFormatMode::All);
            return kSuccess;
        } catch (const CLI::CallForVersion& e) {
            out_ << kToolName << ' ' << e.what() << '\n';
            return kSuccess;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << '\n';
            return kBadArguments;
        }
        try {
            if (app_.got_subcommand("report")) {
                return cmd_report();
            }
            if (app_.got_subcommand("sweep-n")) {
                return cmd_sweep_n();
            }
            if (app_.got_subcommand("sweep-eps")) {
                return cmd_sweep_eps();
            }
            if (app_.got_subcommand("verify")) {
                return cmd_verify();
            }
        } catch (const IoError& e) {
            err_ << "error: " << e.what() << '\n';
            return kIoFailure;
        } catch (const BudgetExceeded& e) {
            err_ << "error: " << e.what() << "; use --mode monte-carlo or raise --budget\n";
            return kBadArguments;
        } catch (const DomainError& e) {
            err_ << "error: " << e.what() << '\n';
            return kBadArguments;
        }
        err_ << app_.help();
        return kBadArguments;
    }

private:
    void build() {
        app_.description("Finite-blocklength Fano-type bounds for q-ary symmetric channels.");
        app_.require_subcommand(1);
        app_.set_version_flag("--version", std::string(kToolVersion));

        auto* report = app_.add_subcommand("report", "All bounds for one (q, eps, n)");
        report->add_option("--q", q_, "Alphabet size")->required()->check(CLI::Range(2U, 1U << 20));
        report->add_option("--eps", eps_, "Crossover probability")->required();
        report->add_option("--n", n_, "Blocklength")->required()->check(CLI::PositiveNumber);
        add_common(report);

        auto* sweep_n = app_.add_subcommand("sweep-n", "Sweep the blocklength, write CSV");
        sweep_n->add_option("--q", q_, "Alphabet size")->required()->check(CLI::Range(2U, 1U << 20));
        sweep_n->add_option("--eps", eps_, "Crossover probability")->required();
        sweep_n->add_option("--n-min", n_min_, "First blocklength")->capture_default_str();
        sweep_n->add_option("--n-max", n_max_, "Last blocklength")->capture_default_str();
        sweep_n->add_option("--n-step", n_step_, "Blocklength step")->capture_default_str();
        sweep_n->add_option("--out", out_path_, "Output CSV (default: standard output)");
        add_common(sweep_n);

        auto* sweep_eps = app_.add_subcommand("sweep-eps", "Sweep the crossover, write CSV");
        sweep_eps->add_option("--q", q_, "Alphabet size")->required()->check(CLI::Range(2U, 1U << 20));
        sweep_eps->add_option("--n", n_, "Blocklength")->required()->check(CLI::PositiveNumber);
        sweep_eps->add_option("--eps-min", eps_min_, "Smallest crossover")->required();
        sweep_eps->add_option("--eps-max", eps_max_, "Largest crossover")->required();
        sweep_eps->add_option("--steps", steps_, "Number of grid points")->capture_default_str();
        sweep_eps->add_option("--grid", grid_, "Grid spacing")
            ->check(CLI::IsMember({"linear", "geometric"}))
            ->capture_default_str();
        sweep_eps->add_option("--out", out_path_, "Output CSV (default: standard output)");
        add_common(sweep_eps);

        auto* verify = app_.add_subcommand("verify", "Check formulas against an oracle");
        auto* q_opt = verify->add_option("--q", q_, "Alphabet size (QSC)")->check(CLI::Range(2U, 1U << 20));
        auto* eps_opt = verify->add_option("--eps", eps_, "Crossover probability (QSC)");
        auto* matrix_opt = verify->add_option("--matrix", matrix_path_, "Transition matrix file");
        matrix_opt->excludes(q_opt)->excludes(eps_opt);
        q_opt->needs(eps_opt);
        eps_opt->needs(q_opt);
        verify->add_option("--n", n_, "Blocklength")->required()->check(CLI::PositiveNumber);
        verify->add_option("--mode", mode_, "Oracle")
            ->check(CLI::IsMember({"full-enum", "monte-carlo"}))
            ->capture_default_str();
        verify->add_option("--trials", trials_, "Monte Carlo trials")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        verify->add_option("--seed", seed_, "Monte Carlo seed")->capture_default_str();
        verify->add_option("--budget", budget_, "Maximum word pairs to enumerate")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_common(verify);
    }

    void add_common(CLI::App* sub) {
        sub->add_option("--eps-fraction", eps_fraction_,
                        "Fraction of P_s / P_b used as the codebook error constraint")
            ->capture_default_str();
    }

    [[nodiscard]] SweepOptions sweep_options() const {
        if (!(eps_fraction_ > 0.0 && eps_fraction_ <= 1.0)) {
            throw DomainError("--eps-fraction must lie in (0,1]");
        }
        return {CodebookProtocol{eps_fraction_}, threads_from_env()};
    }

    int emit_table(const SweepTable& table) {
        if (out_path_.empty()) {
            write_csv(out_, table);
            return kSuccess;
        }
        std::ofstream file(out_path_);
        if (!file) {
            throw IoError("cannot open '" + out_path_ + "' for writing");
        }
        write_csv(file, table);
        file.flush();
        if (!file) {
            throw IoError("write to '" + out_path_ + "' failed");
        }
        err_ << "wrote " << table.rows.size() << " rows to " << out_path_ << '\n';
        return kSuccess;
    }

    int cmd_report() {
        const auto opts = sweep_options();
        const auto r = qsc_bound_report(n_, q_, eps_, opts.protocol);
        for (const auto& [name, value] : report_fields(r)) {
            out_ << std::left << std::setw(14) << name << value << '\n';
        }
        const auto problems = check_invariants(r);
        for (const auto& p : problems) {
            err_ << "warning: report invariant violated: " << p << '\n';
        }
        return kSuccess;
    }

    int cmd_sweep_n() {
        return emit_table(sweep_blocklength(q_, eps_, n_min_, n_max_, n_step_, sweep_options()));
    }

    int cmd_sweep_eps() {
        const auto kind = grid_ == "geometric" ? GridKind::Geometric : GridKind::Linear;
        const auto grid = crossover_grid(q_, eps_min_, eps_max_, steps_, kind);
        return emit_table(sweep_crossover(q_, n_, grid, sweep_options()));
    }

    int cmd_verify() {
        VerifyRequest req;
        if (!matrix_path_.empty()) {
            req.matrix = load_dmc(matrix_path_);
        } else if (q_ != 0) {
            req.qsc = QscChannel(q_, eps_);
        } else {
            throw DomainError("verify: give either --q and --eps, or --matrix");
        }
        req.n = n_;
        req.monte_carlo = mode_ == "monte-carlo";
        req.trials = trials_;
        req.seed = seed_;
        req.budget = EnumerationBudget{budget_};
        req.threads = threads_from_env();

        out_ << "# " << kToolName << ' ' << kToolVersion << '\n';
        if (req.qsc) {
            out_ << "# channel: QSC q=" << req.qsc->q() << " eps=" << format_double(req.qsc->eps())
                 << '\n';
        } else {
            out_ << "# channel: matrix " << matrix_path_ << " q=" << req.matrix->q() << '\n';
        }
        out_ << "# n=" << n_ << " mode=" << mode_ << '\n';
        if (req.monte_carlo) {
            out_ << "# trials=" << trials_ << " seed=" << seed_ << '\n';
            out_ << "# rng: " << kMonteCarloRngAlgorithm << '\n';
            return print_checks(out_, err_, monte_carlo_checks(req));
        }
        return print_checks(out_, err_, full_enumeration_checks(req));
    }

    std::ostream& out_;
    std::ostream& err_;
    CLI::App app_{"fano-ext"};

    std::uint32_t q_ = 0;
    double eps_ = 0.0;
    std::uint32_t n_ = 1;
    std::uint32_t n_min_ = 1;
    std::uint32_t n_max_ = 100;
    std::uint32_t n_step_ = 1;
    double eps_min_ = 0.0;
    double eps_max_ = 0.0;
    std::uint32_t steps_ = 1;
    std::string grid_ = "linear";
    std::string out_path_;
    std::string mode_ = "full-enum";
    std::uint64_t trials_ = 1'000'000;
    std::uint64_t seed_ = 42;
    std::uint64_t budget_ = EnumerationBudget{}.max_pairs;
    double eps_fraction_ = 0.5;
    std::string matrix_path_;
};

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    App app(out, err);
    return app.run(argc, argv);
}

} // namespace fano_ext::cli
