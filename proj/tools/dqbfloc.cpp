// Command-line front end: parse, localize, eliminate, write.

#include "dqbfloc/error.hpp"
#include "dqbfloc/io.hpp"
#include "dqbfloc/pipeline.hpp"
#include "dqbfloc/selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit : int {
    kUndecided = 0,
    kConfigError = 1,
    kBudgetExceeded = 2,
    kInternalError = 3,
    kSat = 10,
    kUnsat = 20,
};

struct Args {
    std::string input;
    std::string format;
    std::string out;
    std::optional<std::uint64_t> verify;
    bool stats = false;
    double growth_limit = 2.0;
    bool trace_localize = false;
    bool selftest = false;
    std::string selftest_filter;
    std::string audit;
    std::string split = "most";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw dqbfloc::Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const Args& a) {
    using namespace dqbfloc;
    if (a.selftest) {
        SelftestOptions so;
        so.filter = a.selftest_filter;
        const SelftestReport report = run_selftest(so);
        std::cout << report.to_string();
        return report.ok() ? 0 : kConfigError;
    }
    if (a.input.empty()) {
        std::cerr << "error: INPUT is required\n";
        return kConfigError;
    }

    std::optional<Format> format = a.format.empty() ? format_from_path(a.input) : format_from_string(a.format);
    if (!format) {
        std::cerr << "error: cannot determine the input format; use --format dqdimacs|dqcir\n";
        return kConfigError;
    }
    const PrenexDqbf input = parse(read_file(a.input), *format);

    PipelineOptions opts;
    opts.localize.split = a.split == "fewest" ? SplitHeuristic::Fewest : SplitHeuristic::Most;
    if (a.trace_localize)
        opts.localize.trace = [](const std::string& line) { std::cerr << "c localize: " << line << '\n'; };
    opts.eliminate.growth_limit = a.growth_limit;
    opts.verify_budget = a.verify;
    const PipelineResult result = run_pipeline(input, opts);

    const PrenexDqbf written = *format == Format::Dqdimacs ? to_cnf(result.output) : result.output;
    const std::string text = write(written, *format);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(a.out, std::ios::binary);
        if (!out)
            throw Error("cannot write " + a.out);
        out << text;
    }

    if (!a.audit.empty()) {
        std::ofstream audit(a.audit, std::ios::binary);
        if (!audit)
            throw Error("cannot write " + a.audit);
        for (const auto& r : result.localize_receipts)
            audit << to_json_line(r, result.localized.vars) << '\n';
        for (const auto& r : result.eliminate_receipts)
            audit << to_json_line(r, result.output.vars) << '\n';
    }

    if (result.verification) {
        const auto& v = *result.verification;
        std::cerr << "c verify: input " << (v.input_sat ? "SAT" : "UNSAT") << ", output " << (v.output_sat ? "SAT" : "UNSAT")
                  << '\n';
        if (!v.agrees()) {
            std::cerr << "error: output is not equisatisfiable with the input\n";
            return kInternalError;
        }
    }
    if (a.stats)
        std::cout << stats_json(result.stats) << '\n';

    switch (result.verdict) {
    case Verdict::Sat:
        std::cout << "s cnf SAT\n";
        return kSat;
    case Verdict::Unsat:
        std::cout << "s cnf UNSAT\n";
        return kUnsat;
    case Verdict::Undecided:
        break;
    }
    return kUndecided;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantifier localization and local elimination for DQBF"};
    Args a;
    app.add_option("INPUT", a.input, "Input formula (.dqdimacs or .dqcir)");
    app.add_option("--format", a.format, "Input and output format")->check(CLI::IsMember({"dqdimacs", "dqcir"}));
    app.add_option("--out", a.out, "Write the simplified formula to FILE instead of stdout");
    app.add_option("--verify", a.verify, "Check equisatisfiability with the oracle, enumerating at most BUDGET candidates");
    app.add_flag("--stats", a.stats, "Print statistics as one JSON line");
    app.add_option("--growth-limit", a.growth_limit, "Maximum node growth factor during elimination")
        ->check(CLI::PositiveNumber);
    app.add_flag("--trace-localize", a.trace_localize, "Trace pushes, splits and stuck quantifiers on stderr");
    app.add_flag("--selftest", a.selftest, "Run the built-in checks and exit");
    app.add_option("--selftest-filter", a.selftest_filter, "Only run self-checks whose name contains this text");
    app.add_option("--audit", a.audit, "Write rewrite receipts as JSON lines to FILE");
    app.add_option("--split-heuristic", a.split, "Split variable choice: most or fewest incoming edges")
        ->check(CLI::IsMember({"most", "fewest"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return kConfigError;
    }

    try {
        return run(a);
    } catch (const dqbfloc::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\nc universe_size 2^" << e.log2_size() << '\n';
        return kBudgetExceeded;
    } catch (const dqbfloc::WellFormednessError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    } catch (const dqbfloc::PreconditionError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
