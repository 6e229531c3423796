#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/error.hpp"
#include "dqbfloc/io.hpp"
#include "dqbfloc/oracle.hpp"

#include <gtest/gtest.h>

namespace dqbfloc {
namespace {

TEST(Format, Detection) {
    EXPECT_EQ(format_from_path("a/b.dqdimacs"), Format::Dqdimacs);
    EXPECT_EQ(format_from_path("x.cnf"), Format::Dqdimacs);
    EXPECT_EQ(format_from_path("x.qcir"), Format::Dqcir);
    EXPECT_FALSE(format_from_path("x.txt").has_value());
    EXPECT_EQ(format_from_string("dqcir"), Format::Dqcir);
    EXPECT_EQ(to_string(Format::Dqdimacs), "dqdimacs");
}

TEST(Dqdimacs, ParsesPrefixAndClauses) {
    const PrenexDqbf p = parse_dqdimacs("c comment\np cnf 4 2\na 1 2 0\ne 3 0\nd 4 2 0\n1 -3 0\n-2 4 0\n");
    ASSERT_EQ(p.prefix.size(), 4U);
    const VarId x1 = *p.vars.find("1");
    const VarId x2 = *p.vars.find("2");
    EXPECT_EQ(p.vars[*p.vars.find("3")].deps, (VarSet{x1, x2}));
    EXPECT_EQ(p.vars[*p.vars.find("4")].deps, VarSet{x2});
    EXPECT_EQ(clauses_of(p.matrix, p.matrix.root()).size(), 2U);
}

TEST(Dqdimacs, UndeclaredVariablesAreFree) {
    const PrenexDqbf p = parse_dqdimacs("p cnf 2 1\na 1 0\n1 2 0\n");
    EXPECT_EQ(p.vars[*p.vars.find("2")].kind, VarKind::Free);
}

TEST(Dqdimacs, Errors) {
    EXPECT_THROW(parse_dqdimacs("1 2 0\n"), ParseError);
    EXPECT_THROW(parse_dqdimacs("p cnf 2 2\n1 2 0\n"), ParseError);
    EXPECT_THROW(parse_dqdimacs("p cnf 2 1\n1 3 0\n"), ParseError);
    EXPECT_THROW(parse_dqdimacs("p cnf 2 1\na 1 0\na 1 0\n1 0\n"), ParseError);
    EXPECT_THROW(parse_dqdimacs("p cnf 2 1\ne 2 0\nd 1 2 0\n1 0\n"), ParseError);
    EXPECT_THROW(parse_dqdimacs("p cnf 2 1\n1 x 0\n"), ParseError);
}

TEST(Dqdimacs, WriteParseFixedPoint) {
    const std::string text = "p cnf 3 2\na 1 0\nd 2 1 0\nd 3 0\n1 -2 0\n3 0\n";
    const std::string once = write_dqdimacs(parse_dqdimacs(text));
    EXPECT_EQ(write_dqdimacs(parse_dqdimacs(once)), once);
}

TEST(Dqcir, ParsesGatesWithForwardReferences) {
    const PrenexDqbf p = parse_dqcir("#QCIR-G14\nforall(x)\ndepend(y, x)\noutput(g2)\ng2 = or(g1, -y)\ng1 = and(x, y)\n");
    EXPECT_EQ(p.prefix.size(), 2U);
    EXPECT_TRUE(is_sat(p));
}

TEST(Dqcir, NotGatesArePushedDown) {
    const PrenexDqbf p = parse_dqcir("forall(x)\nexists(y)\noutput(n)\ng = and(x, y)\nn = not(g)\n");
    const Node& root = p.matrix.node(p.matrix.root().target);
    EXPECT_FALSE(p.matrix.root().negated);
    EXPECT_EQ(root.kind, NodeKind::Or);
}

TEST(Dqcir, Errors) {
    EXPECT_THROW(parse_dqcir("forall(x)\noutput(g)\ng = and(x, h)\n"), ParseError);
    EXPECT_THROW(parse_dqcir("forall(x)\noutput(g)\ng = and(x, h)\nh = or(g, x)\n"), ParseError);
    EXPECT_THROW(parse_dqcir("forall(x)\noutput(x)\noutput(x)\n"), ParseError);
    EXPECT_THROW(parse_dqcir("forall(x)\noutput(g)\ng = xor(x, x)\n"), ParseError);
}

TEST(Dqcir, RunningExampleRoundTrip) {
    const PrenexDqbf p = running_example();
    const std::string once = write_dqcir(p);
    const PrenexDqbf q = parse_dqcir(once);
    EXPECT_EQ(write_dqcir(q), once);
    EXPECT_EQ(is_sat(p), is_sat(q));
}

TEST(Dqcir, ConstantOutput) {
    PrenexDqbf p;
    p.matrix.set_root(QuantifierGraph::constant(true));
    EXPECT_NE(write_dqcir(p).find("output(true)"), std::string::npos);
    EXPECT_TRUE(is_sat(parse_dqcir(write_dqcir(p))));
}

TEST(Tseitin, PreservesSatisfiability) {
    // forall x exists y(D): (x & y) | (!x & !y); satisfiable iff y may read x.
    for (bool dependent : {false, true}) {
        const std::string text = std::string("forall(x)\n") + (dependent ? "depend(y, x)\n" : "depend(y)\n") +
                                 "output(g)\na = and(x, y)\nb = and(-x, -y)\ng = or(a, b)\n";
        const PrenexDqbf p = parse_dqcir(text);
        const PrenexDqbf cnf = to_cnf(p);
        EXPECT_TRUE(is_cnf_shaped(cnf.matrix, cnf.matrix.root()));
        EXPECT_GT(cnf.prefix.size(), p.prefix.size());
        EXPECT_EQ(is_sat(cnf), dependent);
        EXPECT_EQ(is_sat(p), dependent);
    }
}

TEST(Tseitin, CnfInputIsUnchanged) {
    const PrenexDqbf p = parse_dqdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n");
    EXPECT_EQ(write_dqdimacs(to_cnf(p)), write_dqdimacs(p));
}

} // namespace
} // namespace dqbfloc
