#include "dqbfloc/selftest.hpp"

#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"
#include "dqbfloc/oracle.hpp"
#include "dqbfloc/pipeline.hpp"

#include <functional>
#include <sstream>

namespace dqbfloc {

namespace {

class Runner {
public:
    explicit Runner(const SelftestOptions& options) : options_(options) {}

    void check(const std::string& name, const std::function<std::string()>& body) {
        if (name.find(options_.filter) == std::string::npos)
            return;
        SelftestCheck c{name, false, {}};
        try {
            c.detail = body();
            c.passed = c.detail.empty();
        } catch (const std::exception& e) {
            c.detail = std::string("exception: ") + e.what();
        }
        report_.checks.push_back(std::move(c));
    }

    SelftestReport finish() {
        if (report_.checks.empty())
            report_.warnings.push_back("no check matches filter '" + options_.filter + "'");
        return std::move(report_);
    }

private:
    const SelftestOptions& options_;
    SelftestReport report_;
};

std::string expect_set(const std::string& what, const VarSet& got, const VarSet& want, const VarTable& vars) {
    if (got == want)
        return {};
    return what + " = " + format_set(got, vars) + ", expected " + format_set(want, vars);
}

VarSet names(const VarTable& vars, std::initializer_list<const char*> list) {
    VarSet out;
    for (const char* n : list)
        out.insert(*vars.find(n));
    return out;
}

} // namespace

bool SelftestReport::ok() const {
    return failures().empty();
}

std::vector<std::string> SelftestReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed)
            out.push_back(c.name + ": " + c.detail);
    return out;
}

std::string SelftestReport::to_string() const {
    std::ostringstream os;
    for (const auto& w : warnings)
        os << "warning: " << w << '\n';
    for (const auto& c : checks)
        os << (c.passed ? "ok   " : "FAIL ") << c.name << (c.passed ? "" : ": " + c.detail) << '\n';
    os << checks.size() - failures().size() << '/' << checks.size() << " checks passed\n";
    return os.str();
}

SelftestReport run_selftest(const SelftestOptions& options) {
    Runner run(options);

    run.check("skolem-example/candidates", [] {
        const Dqbf f = skolem_example();
        const auto universe = candidate_universe(f);
        if (universe.size() != 4)
            return "expected 4 candidates, got " + std::to_string(universe.size());
        const SemanticsSet s = sem_def(f);
        const std::string listing = dump(s, f.vars);
        if (s.candidates.size() != 1 || listing.find("y1(x2)=01") == std::string::npos)
            return "expected exactly y1 = x2, got " + listing;
        if (!(sem_rec(f) == s))
            return std::string("recursive semantics disagrees");
        return std::string();
    });

    for (auto& item : counterexample_suite()) {
        run.check("satisfiability/" + item.name, [&item] {
            const bool sat = is_sat(item.formula);
            if (sat == item.expected_sat)
                return std::string();
            return std::string("expected ") + (item.expected_sat ? "SAT" : "UNSAT") + ", oracle says " + (sat ? "SAT" : "UNSAT");
        });
    }

    run.check("witness/psi4", [] {
        for (auto& item : counterexample_suite()) {
            if (item.name != "psi4")
                continue;
            const auto& vars = item.formula.vars;
            const VarId x1 = *vars.find("x1");
            const VarId x2 = *vars.find("x2");
            SkolemCandidate s;
            s.functions[*vars.find("y1")] = TruthTable::from_function({x1, x2}, [](const auto& b) { return !(b[0] && b[1]); });
            s.functions[*vars.find("y2")] = TruthTable::from_function({x1, x2}, [](const auto& b) { return b[0] && b[1]; });
            return check_candidate(item.formula, s) ? std::string() : std::string("witness rejected");
        }
        return std::string("psi4 missing from the suite");
    });

    for (auto& bad : unsound_rewrites()) {
        run.check("refusal/" + bad.name, [&bad, &options] {
            Dqbf f = bad.formula;
            RuleArgs args = bad.args;
            args.check_vocc = !options.disable_vocc_guard;
            const auto outcome = apply_rule(f, bad.at, bad.rule, *f.vars.find(bad.var), args);
            if (const auto* r = std::get_if<Refusal>(&outcome)) {
                if (r->condition == bad.expected_condition)
                    return std::string();
                return "refused on '" + r->condition + "', expected '" + bad.expected_condition + "'";
            }
            const bool before = is_sat(bad.formula);
            const bool after = is_sat(f);
            return std::string("rewrite fired") + (before != after ? " and changed satisfiability" : "");
        });
    }

    run.check("vocc/same-polarity", [] {
        for (auto& item : counterexample_suite()) {
            if (item.name != "same-polarity")
                continue;
            const Dqbf& f = item.formula;
            const Node& n = f.graph.node(f.graph.root().target);
            const VarSet x = names(f.vars, {"x"});
            return expect_set("Vocc(phi1)", vocc_of(f, n.children.at(0), {}), x, f.vars) +
                   expect_set("Vocc(phi2)", vocc_of(f, n.children.at(1), {}), x, f.vars);
        }
        return std::string("missing formula");
    });

    run.check("vocc/selector", [] {
        for (auto& item : counterexample_suite()) {
            if (item.name != "selector")
                continue;
            const Dqbf& f = item.formula;
            const EdgePath at{0};
            const Node& n = f.graph.node(edge_at(f.graph, at).target);
            const VarId y = *f.vars.find("y");
            return expect_set("Vocc(phi1)", vocc_of(f, n.children.at(0), {}), names(f.vars, {"x1"}), f.vars) +
                   expect_set("Vocc(phi2)", vocc_of(f, n.children.at(1), {}), names(f.vars, {"x2"}), f.vars) +
                   expect_set("Vocc(outside)", vocc_outside(f, at, y), names(f.vars, {"x1", "x2"}), f.vars);
        }
        return std::string("missing formula");
    });

    run.check("running-example/shape", [] {
        const PrenexDqbf p = running_example();
        const GraphShape s = shape_of(p.matrix);
        if (s.inner_nodes != 9 || s.terminal_edges != 10 || s.negated_terminal_edges != 5)
            return "inner " + std::to_string(s.inner_nodes) + ", terminal edges " + std::to_string(s.terminal_edges) +
                   ", negated " + std::to_string(s.negated_terminal_edges);
        return std::string();
    });

    run.check("running-example/pipeline", [] {
        const PipelineResult r = run_pipeline(running_example());
        const auto& st = r.stats.elimination;
        if (r.verdict != Verdict::Sat)
            return "verdict " + std::string(to_string(r.verdict));
        if (!r.output.prefix.empty())
            return std::string("quantifiers left in the prefix");
        if (st.local_eliminations != 5 || st.variables_eliminated != 4)
            return "local eliminations " + std::to_string(st.local_eliminations) + ", variables eliminated " +
                   std::to_string(st.variables_eliminated);
        return std::string();
    });

    return run.finish();
}

} // namespace dqbfloc
