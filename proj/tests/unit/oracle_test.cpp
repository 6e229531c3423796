#include "dqbfloc/builder.hpp"
#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/error.hpp"
#include "dqbfloc/oracle.hpp"
#include "dqbfloc/random_instance.hpp"

#include <gtest/gtest.h>

namespace dqbfloc {
namespace {

TEST(Oracle, SkolemExampleHasOneFunctionAmongFour) {
    const Dqbf f = skolem_example();
    EXPECT_EQ(candidate_universe(f).size(), 4U);
    const SemanticsSet s = sem_def(f);
    ASSERT_EQ(s.candidates.size(), 1U);
    const VarId x2 = *f.vars.find("x2");
    const VarId y1 = *f.vars.find("y1");
    const TruthTable identity = TruthTable::from_function({x2}, [](const auto& b) { return b[0]; });
    EXPECT_EQ(s.candidates.begin()->functions.at(y1), identity);
    EXPECT_EQ(sem_rec(f), s);
}

TEST(Oracle, SuiteSatisfiability) {
    for (const auto& item : counterexample_suite())
        EXPECT_EQ(is_sat(item.formula), item.expected_sat) << item.name;
}

TEST(Oracle, CheckCandidate) {
    const Dqbf f = skolem_example();
    const VarId x2 = *f.vars.find("x2");
    const VarId y1 = *f.vars.find("y1");
    SkolemCandidate good;
    good.functions[y1] = TruthTable::from_function({x2}, [](const auto& b) { return b[0]; });
    SkolemCandidate bad;
    bad.functions[y1] = TruthTable::from_function({x2}, [](const auto& b) { return !b[0]; });
    EXPECT_TRUE(check_candidate(f, good));
    EXPECT_FALSE(check_candidate(f, bad));
}

TEST(Oracle, BudgetIsEnforced) {
    OracleOptions opts;
    opts.budget = 3;
    EXPECT_THROW((void)sem_def(skolem_example(), opts), BudgetExceeded);
    try {
        (void)is_sat(skolem_example(), opts);
        FAIL();
    } catch (const BudgetExceeded& e) {
        EXPECT_EQ(e.log2_size(), 2U);
    }
}

TEST(Oracle, FreeVariablesAreConstants) {
    FormulaBuilder b;
    const VarId v = b.free_var("v");
    const Dqbf f = std::move(b).finish(b.pos(v));
    EXPECT_EQ(candidate_universe(f).size(), 2U);
    EXPECT_EQ(sem_def(f).candidates.size(), 1U);
}

TEST(Oracle, ExplicitUniverseAddsUnusedVariables) {
    FormulaBuilder b;
    const VarId v = b.free_var("v");
    const VarId w = b.free_var("w");
    const Dqbf f = std::move(b).finish(b.pos(v));
    OracleOptions opts;
    opts.universe = VarSet{v, w};
    EXPECT_EQ(sem_def(f, opts).candidates.size(), 2U);
}

TEST(Oracle, EquivalenceAndEquisat) {
    const auto suite = counterexample_suite();
    auto get = [&](const std::string& name) {
        for (const auto& i : suite)
            if (i.name == name)
                return i.formula;
        throw std::runtime_error(name);
    };
    EXPECT_TRUE(equisat(get("psi1"), get("psi4")));
    EXPECT_FALSE(equisat(get("psi1"), get("psi3")));
    EXPECT_TRUE(equivalent(get("psi1"), get("psi1")));
}

TEST(Oracle, RecursiveSemanticsAgreesOnRandomFormulas) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        const Dqbf f = random_dqbf(rng);
        EXPECT_EQ(sem_def(f), sem_rec(f)) << i;
    }
}

} // namespace
} // namespace dqbfloc
