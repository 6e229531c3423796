// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// Usage: dqbfloc_acceptance [--cli PATH] [--fixtures DIR] [--only N]

#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/formula.hpp"
#include "dqbfloc/io.hpp"
#include "dqbfloc/localizer.hpp"
#include "dqbfloc/oracle.hpp"
#include "dqbfloc/pipeline.hpp"
#include "dqbfloc/random_instance.hpp"
#include "dqbfloc/selftest.hpp"
#include "dqbfloc/well_formed.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace dqbfloc;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void fail(const std::string& why) {
        if (passed)
            detail.clear();
        passed = false;
        if (detail.size() < 600)
            detail += (detail.empty() ? "" : "; ") + why;
    }
    void note(const std::string& what) {
        if (passed)
            detail += (detail.empty() ? "" : ", ") + what;
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> body;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Selftest-backed checks share the hand-verified examples with the CLI.

Outcome selftest_subset(const std::string& filter) {
    Outcome out;
    const SelftestReport report = run_selftest({filter, false});
    for (const auto& f : report.failures())
        out.fail(f);
    if (report.checks.empty())
        out.fail("no checks matched '" + filter + "'");
    out.note(std::to_string(report.checks.size()) + " checks");
    return out;
}

Outcome skolem_candidates() {
    Outcome out = selftest_subset("skolem-example/candidates");
    const Dqbf f = skolem_example();
    const SemanticsSet s = sem_def(f);
    std::string listing = dump(s, f.vars);
    std::replace(listing.begin(), listing.end(), '\n', ' ');
    out.note("universe " + std::to_string(candidate_universe(f).size()) + ", skolem functions " + listing);
    return out;
}

Outcome semantics_cross_check() {
    Outcome out;
    if (!(sem_def(skolem_example()) == sem_rec(skolem_example())))
        out.fail("skolem example: recursive semantics disagrees");
    std::mt19937_64 rng(0xD0BF);
    std::size_t non_prenex = 0;
    std::size_t sat = 0;
    for (int i = 0; i < 500; ++i) {
        const Dqbf f = random_dqbf(rng, RandomBounds{3, 2, 2, 8, 0}, 4);
        if (has_annotations_below(f.graph, Edge{f.graph.root().target, false, {}}))
            ++non_prenex;
        const SemanticsSet def = sem_def(f);
        const SemanticsSet rec = sem_rec(f);
        if (!(def == rec))
            out.fail("instance " + std::to_string(i) + ": " + canonical_form(f));
        sat += def.candidates.empty() ? 0 : 1;
    }
    out.note("500 random formulas, " + std::to_string(non_prenex) + " non-prenex, " + std::to_string(sat) + " satisfiable");
    return out;
}

Outcome counterexamples() {
    Outcome out;
    for (const char* filter : {"satisfiability/", "witness/", "refusal/"}) {
        Outcome part = selftest_subset(filter);
        if (!part.passed)
            out.fail(part.detail);
    }
    // The guard must be what refuses the distribution rewrites: without it they fire and flip the answer.
    const SelftestReport mutated = run_selftest({"refusal/distribute", true});
    if (mutated.ok())
        out.fail("refusals still pass with the Vocc guard disabled");
    out.note("suite of " + std::to_string(counterexample_suite().size()) + " formulas, " +
             std::to_string(unsound_rewrites().size()) + " refused rewrites, mutated guard caught");
    return out;
}

Outcome vocc_sets() {
    return selftest_subset("vocc/");
}

// ---------------------------------------------------------------------------
// Running example: annotation placement at each localization stage.

using Placement = std::multiset<std::string>;

Placement placement_of(const Dqbf& f) {
    Placement out;
    auto add = [&](const Edge& e) {
        if (!e.annotation.empty())
            out.insert(format_set(e.annotation.all(), f.vars) + " over " +
                       format_set(structural_support(f.graph, e), f.vars));
    };
    add(f.graph.root());
    for (NodeId id : f.graph.postorder())
        for (const auto& c : f.graph.node(id).children)
            add(c);
    return out;
}

std::string render(const Placement& p) {
    std::string s;
    for (const auto& e : p)
        s += (s.empty() ? "" : " | ") + e;
    return s;
}

int run_cli(const std::string& cli, const std::string& args) {
    const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome running_example_pipeline(const std::string& cli, const fs::path& fixtures) {
    Outcome out;
    const PrenexDqbf input = running_example();
    const Dqbf nnf = normalize_to_nnf(input);

    const auto gates = build_macrogates(nnf.graph);
    const Node& root = nnf.graph.node(nnf.graph.root().target);
    if (gates.empty() || gates.front().root != nnf.graph.root().target || gates.front().kind != NodeKind::Or ||
        gates.front().members.size() != 3 || gates.front().macrochildren.size() != 4 || root.children.size() != 2)
        out.fail("root macrogate is not a 3-gate disjunction with 4 macrochildren");

    auto label = [](std::string vars, std::string support) { return vars + " over " + support; };
    const std::string all = "{x1, x2, y1, y2}";
    // The copy y1' is created by the distribution, so its id sorts after y2.
    const std::vector<std::pair<std::string, Placement>> stages = {
        {"all quantifiers at the root", {label(all, all)}},
        {"y1 distributed, y2 pushed",
         {label("{x1, x2}", "{x1, x2, y1, y2, y1'}"), label("{y1}", "{x1, y1}"), label("{y1'}", "{x1, y1'}"),
          label("{y2}", "{x2, y2}")}},
        {"macrogate split for x2",
         {label("{x1}", "{x1, x2, y1, y2, y1'}"), label("{x2}", "{x1, x2, y2}"), label("{y1}", "{x1, y1}"),
          label("{y1'}", "{x1, y1'}"), label("{y2}", "{x2, y2}")}},
        {"all macrogates processed",
         {label("{x1}", "{x1, x2, y1, y2, y1'}"), label("{x2}", "{x1, x2, y2}"), label("{y1}", "{y1}"),
          label("{y1'}", "{y1'}"), label("{y2}", "{x2, y2}")}},
    };

    std::size_t reached = 0;
    auto advance = [&](const Dqbf& f) {
        if (reached < stages.size() && placement_of(f) == stages[reached].second)
            ++reached;
    };
    Dqbf f = nnf;
    advance(f);
    LocalizeOptions lo;
    lo.observer = [&](const Dqbf&, const RewriteReceipt&, const Dqbf& after) { advance(after); };
    localize(f, lo);
    if (reached < stages.size())
        out.fail("stage '" + stages[reached].first + "' never reached; final placement " + render(placement_of(f)));
    else if (placement_of(f) != stages.back().second)
        out.fail("placement changed after the final stage: " + render(placement_of(f)));

    const PipelineResult r = run_pipeline(input);
    std::set<std::string> eliminated;
    for (const auto& rec : r.eliminate_receipts)
        eliminated.insert(r.localized.vars.name(rec.var));
    const std::set<std::string> expected{"x1", "x2", "y1", "y1'", "y2"};
    if (r.verdict != Verdict::Sat)
        out.fail("verdict " + std::string(to_string(r.verdict)));
    if (eliminated != expected) {
        std::string got;
        for (const auto& v : eliminated)
            got += v + " ";
        out.fail("eliminated " + got);
    }
    if (r.stats.elimination.local_eliminations != 5)
        out.fail("local eliminations " + std::to_string(r.stats.elimination.local_eliminations));

    const int code = run_cli(cli, (fixtures / "dqcir" / "running-example.dqcir").string());
    if (code != 10)
        out.fail("cli exit code " + std::to_string(code));
    out.note("4 stages matched, eliminated x1 x2 y1 y1' y2, exit " + std::to_string(code));
    return out;
}

// ---------------------------------------------------------------------------
// Soundness: end-to-end equisatisfiability and replay of every fired rewrite.

Outcome soundness_suite() {
    Outcome out;
    std::mt19937_64 rng(0x50D);
    std::size_t receipts = 0;
    std::size_t equivalence_checked = 0;
    std::size_t decided = 0;

    auto replay = [&](const Dqbf& before, const RewriteReceipt& rec, const Dqbf& after, const std::string& where) {
        ++receipts;
        Dqbf copy = before;
        RuleArgs args;
        args.children = rec.children;
        const auto outcome = apply_rule(copy, rec.position, rec.rule, rec.var, args);
        if (!fired(outcome)) {
            out.fail(where + ": replay of " + std::string(to_string(rec.rule)) + " refused");
            return;
        }
        if (canonical_form(copy) != canonical_form(after))
            out.fail(where + ": replay of " + std::string(to_string(rec.rule)) + " differs");
        if (!equisat(before, copy))
            out.fail(where + ": " + std::string(to_string(rec.rule)) + " on " + before.vars.name(rec.var) +
                     " changed satisfiability");
        if (rec.soundness == Soundness::Equivalence && rec.substitution_preserves_existentials) {
            ++equivalence_checked;
            if (!(sem_def(before) == sem_def(copy)))
                out.fail(where + ": " + std::string(to_string(rec.rule)) + " changed the Skolem function set");
        }
    };

    for (int i = 0; i < 1000; ++i) {
        const PrenexDqbf p = random_prenex(rng, RandomBounds{3, 2, 2, 8, 0});
        const std::string where = "instance " + std::to_string(i);
        PipelineOptions opts;
        opts.localize.observer = [&](const Dqbf& b, const RewriteReceipt& rec, const Dqbf& a) { replay(b, rec, a, where); };
        opts.eliminate.observer = opts.localize.observer;
        opts.verify_budget = std::uint64_t{1} << 20;
        try {
            const PipelineResult r = run_pipeline(p, opts);
            if (!r.verification || !r.verification->agrees())
                out.fail(where + ": output not equisatisfiable");
            decided += r.verdict != Verdict::Undecided ? 1 : 0;
        } catch (const std::exception& e) {
            out.fail(where + ": " + e.what());
        }
    }
    out.note("1000 instances (" + std::to_string(decided) + " decided), " + std::to_string(receipts) +
             " rewrites replayed, " + std::to_string(equivalence_checked) + " equivalence checks");
    return out;
}

// ---------------------------------------------------------------------------
// Monotonicity: replacing a positive-position subformula never turns false into true.

Outcome monotonicity() {
    Outcome out;
    std::mt19937_64 rng(0x1E3);
    std::size_t premises = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        QuantifierGraph g;
        VarTable vars;
        std::vector<VarId> vs;
        for (int i = 0; i < 4; ++i)
            vs.push_back(vars.add(VarKind::Free, "v" + std::to_string(i)));
        const Edge phi = to_nnf(g, random_matrix(g, rng, vs, 6));
        const Edge phi2 = to_nnf(g, random_matrix(g, rng, vs, 3));

        // Random path from the root edge; in NNF every edge above a terminal is a positive position.
        EdgePath path;
        Edge cursor = phi;
        while (g.node(cursor.target).is_inner() && std::bernoulli_distribution(0.6)(rng)) {
            const auto& ch = g.node(cursor.target).children;
            const auto k = std::uniform_int_distribution<std::uint32_t>(0, static_cast<std::uint32_t>(ch.size() - 1))(rng);
            path.push_back(k);
            cursor = ch[k];
        }
        const Edge phi1 = cursor;
        const Edge phi_prime = substitute_at_path(g, phi, path, phi2);

        std::vector<bool> mu(vars.size());
        for (auto&& b : mu)
            b = std::bernoulli_distribution(0.5)(rng);
        auto value = [&](const Edge& e) { return evaluate(g, e, [&](VarId v) { return static_cast<bool>(mu[v.value]); }); };
        if (value(phi) && !value(phi_prime)) {
            ++premises;
            if (!value(phi1) || value(phi2))
                out.fail("trial " + std::to_string(trial) + " at " + to_string(path));
        }
    }
    out.note("10000 trials, " + std::to_string(premises) + " with phi true and phi' false");
    return out;
}

// ---------------------------------------------------------------------------
// Formats: parse/write fixed point and Tseitin satisfiability.

Outcome round_trips(const fs::path& fixtures) {
    Outcome out;
    std::size_t files = 0;
    std::size_t tseitin_checked = 0;
    std::size_t tseitin_skipped = 0;
    std::map<Format, std::size_t> per_format;
    for (const auto& [dir, format] : {std::pair{"dqdimacs", Format::Dqdimacs}, std::pair{"dqcir", Format::Dqcir}}) {
        std::vector<fs::path> paths;
        for (const auto& entry : fs::directory_iterator(fixtures / dir))
            paths.push_back(entry.path());
        std::sort(paths.begin(), paths.end());
        for (const auto& path : paths) {
            const std::string name = path.filename().string();
            try {
                const PrenexDqbf p1 = parse(read_file(path), format);
                const std::string t1 = write(p1, format);
                const PrenexDqbf p2 = parse(t1, format);
                const std::string t2 = write(p2, format);
                if (t1 != t2)
                    out.fail(name + ": write(parse(write)) is not a fixed point");
                const bool sat = is_sat(p1);
                if (sat != is_sat(p2))
                    out.fail(name + ": round trip changed satisfiability");
                const PrenexDqbf cnf = to_cnf(p1);
                const PrenexDqbf cnf2 = parse_dqdimacs(write_dqdimacs(cnf));
                OracleOptions budget;
                budget.budget = std::uint64_t{1} << 20;
                if (candidate_layout(to_dqbf(cnf2)).universe_log2 > 20) {
                    ++tseitin_skipped;
                } else {
                    ++tseitin_checked;
                    if (is_sat(cnf2, budget) != sat)
                        out.fail(name + ": Tseitin encoding changed satisfiability");
                }
                ++files;
                ++per_format[format];
            } catch (const std::exception& e) {
                out.fail(name + ": " + e.what());
            }
        }
    }
    if (per_format[Format::Dqdimacs] < 20 || per_format[Format::Dqcir] < 20)
        out.fail("fewer than 20 fixtures per format");
    out.note(std::to_string(files) + " fixtures, Tseitin checked on " + std::to_string(tseitin_checked) + ", " +
             std::to_string(tseitin_skipped) + " over budget");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dqbfloc acceptance suite"};
    std::string cli = DQBFLOC_CLI_PATH;
    std::string fixtures = DQBFLOC_FIXTURE_DIR;
    int only = 0;
    app.add_option("--cli", cli, "Path to the dqbfloc executable");
    app.add_option("--fixtures", fixtures, "Fixture directory with dqdimacs/ and dqcir/");
    app.add_option("--only", only, "Run a single criterion");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria = {
        {1, "skolem-candidates", 1.0, skolem_candidates},
        {2, "semantics-cross-check", 300.0, semantics_cross_check},
        {3, "counterexample-regressions", 10.0, counterexamples},
        {4, "vocc-sets", 1.0, vocc_sets},
        {5, "running-example-pipeline", 1.0, [&] { return running_example_pipeline(cli, fixtures); }},
        {6, "soundness-suite", 900.0, soundness_suite},
        {7, "positive-position-monotonicity", 60.0, monotonicity},
        {8, "format-round-trips", 60.0, [&] { return round_trips(fixtures); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only)
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s)
            o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s");
        failures += o.passed ? 0 : 1;
        std::ostringstream line;
        line << (o.passed ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << std::fixed
             << std::setprecision(3) << secs << " s): " << o.detail;
        std::cout << line.str() << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
