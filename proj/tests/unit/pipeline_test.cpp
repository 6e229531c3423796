#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/error.hpp"
#include "dqbfloc/io.hpp"
#include "dqbfloc/oracle.hpp"
#include "dqbfloc/pipeline.hpp"
#include "dqbfloc/random_instance.hpp"
#include "dqbfloc/selftest.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

namespace dqbfloc {
namespace {

TEST(Pipeline, RunningExample) {
    const PipelineResult r = run_pipeline(running_example());
    EXPECT_EQ(r.verdict, Verdict::Sat);
    EXPECT_EQ(r.stats.pushed, r.localize_receipts.size());
    EXPECT_EQ(r.stats.elimination.local_eliminations, 5U);
}

TEST(Pipeline, VerifiesAgainstOracle) {
    for (const auto& item : counterexample_suite()) {
        PrenexDqbf p;
        try {
            p = to_prenex(item.formula);
        } catch (const PreconditionError&) {
            continue;
        }
        PipelineOptions opts;
        opts.verify_budget = 1U << 16;
        const PipelineResult r = run_pipeline(p, opts);
        ASSERT_TRUE(r.verification.has_value());
        EXPECT_TRUE(r.verification->agrees()) << item.name;
        EXPECT_EQ(r.verification->input_sat, item.expected_sat) << item.name;
        if (r.verdict != Verdict::Undecided)
            EXPECT_EQ(r.verdict == Verdict::Sat, item.expected_sat) << item.name;
    }
}

TEST(Pipeline, BudgetExceeded) {
    PipelineOptions opts;
    opts.verify_budget = 2;
    EXPECT_THROW(run_pipeline(running_example(), opts), BudgetExceeded);
}

TEST(Pipeline, StatsJsonIsOneLine) {
    const PipelineResult r = run_pipeline(running_example());
    const std::string line = stats_json(r.stats);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("local_eliminations"), 5);
    EXPECT_EQ(j.at("variables_eliminated"), 4);
    EXPECT_TRUE(j.contains("wall_ms"));
    EXPECT_EQ(line.rfind("{\"pushed\":", 0), 0U);
}

TEST(Pipeline, Deterministic) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 30; ++i) {
        const PrenexDqbf p = random_prenex(rng);
        const auto a = run_pipeline(p);
        const auto b = run_pipeline(p);
        EXPECT_EQ(write_dqcir(a.output), write_dqcir(b.output));
        EXPECT_EQ(a.stats.elimination.local_eliminations, b.stats.elimination.local_eliminations);
    }
}

TEST(Pipeline, OpenFormulasStayUndecided) {
    const PrenexDqbf p = parse_dqdimacs("p cnf 3 2\na 1 0\nd 2 1 0\n1 2 0\n-1 3 0\n");
    const PipelineResult r = run_pipeline(p);
    EXPECT_EQ(r.verdict, Verdict::Undecided);
    EXPECT_EQ(is_sat(p), is_sat(r.output));
}

TEST(Selftest, AllChecksPass) {
    const SelftestReport r = run_selftest();
    EXPECT_TRUE(r.ok()) << r.to_string();
    EXPECT_GE(r.checks.size(), 20U);
}

TEST(Selftest, MutatedGuardIsCaught) {
    SelftestOptions opts;
    opts.filter = "refusal/distribute";
    opts.disable_vocc_guard = true;
    const SelftestReport r = run_selftest(opts);
    EXPECT_FALSE(r.ok());
    EXPECT_NE(r.to_string().find("changed satisfiability"), std::string::npos);
}

TEST(Selftest, EmptyFilterPassesWithWarning) {
    SelftestOptions opts;
    opts.filter = "nothing-matches-this";
    const SelftestReport r = run_selftest(opts);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.checks.empty());
    ASSERT_EQ(r.warnings.size(), 1U);
}

} // namespace
} // namespace dqbfloc
