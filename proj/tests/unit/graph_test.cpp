#include "dqbfloc/error.hpp"
#include "dqbfloc/graph.hpp"

#include <gtest/gtest.h>

namespace dqbfloc {
namespace {

class GraphTest : public ::testing::Test {
protected:
    VarTable vars;
    QuantifierGraph g;
    VarId a = vars.add(VarKind::Free, "a");
    VarId b = vars.add(VarKind::Free, "b");
};

TEST_F(GraphTest, ConstantsAndFlip) {
    EXPECT_EQ(g.constant_value(QuantifierGraph::constant(true)), true);
    EXPECT_EQ(flip(QuantifierGraph::constant(true)).target, QuantifierGraph::kFalse);
    const Edge la = g.literal(a);
    EXPECT_TRUE(flip(la).negated);
    EXPECT_FALSE(g.constant_value(la).has_value());
}

TEST_F(GraphTest, TerminalsAreShared) {
    EXPECT_EQ(g.terminal(a), g.terminal(a));
    EXPECT_NE(g.terminal(a), g.terminal(b));
}

TEST_F(GraphTest, MakeOpHashesAndSimplifies) {
    const Edge x = g.make_and({g.literal(a), g.literal(b)});
    EXPECT_EQ(g.make_and({g.literal(a), g.literal(b)}), x);
    EXPECT_EQ(g.make_and({g.literal(a), QuantifierGraph::constant(false)}), QuantifierGraph::constant(false));
    EXPECT_EQ(g.make_or({g.literal(a), QuantifierGraph::constant(true)}), QuantifierGraph::constant(true));
    EXPECT_EQ(g.make_and({g.literal(a), QuantifierGraph::constant(true)}), g.literal(a));
    EXPECT_EQ(g.make_or({g.literal(a), g.literal(a, true)}), QuantifierGraph::constant(true));
}

TEST_F(GraphTest, MakeOpRejectsAnnotatedChildren) {
    Edge e = g.literal(a);
    e.annotation.exists.insert(a);
    EXPECT_THROW((void)g.make_and({e, g.literal(b)}), PreconditionError);
}

TEST_F(GraphTest, OrdersAndPaths) {
    const Edge inner = g.make_or({g.literal(a), g.literal(b, true)});
    const Edge root = g.make_and({inner, g.literal(a)});
    g.set_root(root);
    const auto post = g.postorder();
    EXPECT_EQ(post.back(), root.target);
    EXPECT_EQ(g.topological_order().front(), root.target);
    EXPECT_EQ(edge_at(g, {}), root);
    EXPECT_EQ(edge_at(g, {0}).target, inner.target);
    EXPECT_THROW((void)edge_at(g, {0, 0, 0}), PreconditionError);
    EXPECT_EQ(to_string(EdgePath{0, 1}), "/0/1");
}

TEST_F(GraphTest, PrenexConversionRoundTrip) {
    PrenexDqbf p;
    const VarId x = p.vars.add(VarKind::Universal, "x");
    const VarId y = p.vars.add(VarKind::Existential, "y", {x});
    p.prefix = {x, y};
    p.matrix.set_root(p.matrix.make_or({p.matrix.literal(x), p.matrix.literal(y)}));
    const Dqbf f = to_dqbf(p);
    EXPECT_EQ(f.graph.root().annotation.foralls, VarSet{x});
    EXPECT_EQ(f.graph.root().annotation.exists, VarSet{y});
    const PrenexDqbf back = to_prenex(f);
    EXPECT_EQ(back.prefix, p.prefix);
    EXPECT_TRUE(back.matrix.root().annotation.empty());
}

} // namespace
} // namespace dqbfloc
