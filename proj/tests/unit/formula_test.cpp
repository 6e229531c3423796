#include "dqbfloc/builder.hpp"
#include "dqbfloc/counterexamples.hpp"
#include "dqbfloc/formula.hpp"

#include <gtest/gtest.h>

namespace dqbfloc {
namespace {

bool eval(const QuantifierGraph& g, const Edge& e, std::initializer_list<std::pair<VarId, bool>> mu) {
    return evaluate(g, e, [&](VarId v) {
        for (auto [w, b] : mu)
            if (w == v)
                return b;
        return false;
    });
}

TEST(Formula, PartitionSeparatesBoundAndFree) {
    FormulaBuilder b;
    const VarId x = b.universal("x");
    const VarId y = b.existential("y", {x});
    const VarId v = b.free_var("v");
    const Edge inner = b.quantify(b.any({b.pos(y), b.pos(v)}), {y});
    const Dqbf f = std::move(b).finish(b.quantify(b.all({inner, b.pos(x)}), {x}));
    const VarPartition p = var_partition(f.graph, f.graph.root());
    EXPECT_EQ(p.foralls, VarSet{x});
    EXPECT_EQ(p.exists, VarSet{y});
    EXPECT_EQ(p.free_support, VarSet{v});
    EXPECT_TRUE(has_annotations_below(f.graph, Edge{f.graph.root().target, false, {}}));
}

TEST(Formula, CofactorFixesVariable) {
    FormulaBuilder b;
    const VarId u = b.free_var("u");
    const VarId w = b.free_var("w");
    QuantifierGraph& g = b.graph();
    const Edge e = b.iff(b.pos(u), b.pos(w));
    EXPECT_EQ(cofactor(g, e, u, true), g.literal(w));
    EXPECT_EQ(cofactor(g, e, u, false), g.literal(w, true));
    EXPECT_EQ(structural_support(g, e), (VarSet{u, w}));
}

TEST(Formula, TrueSupportDropsRedundantVariables) {
    FormulaBuilder b;
    const VarId u = b.free_var("u");
    const VarId w = b.free_var("w");
    QuantifierGraph& g = b.graph();
    // (u & w) | (u & !w) == u
    const Edge e = b.any({b.all({b.pos(u), b.pos(w)}), b.all({b.pos(u), b.neg(w)})});
    EXPECT_EQ(structural_support(g, e), (VarSet{u, w}));
    EXPECT_EQ(true_support(g, e), VarSet{u});
}

TEST(Formula, NnfPushesNegations) {
    FormulaBuilder b;
    const VarId u = b.free_var("u");
    const VarId w = b.free_var("w");
    QuantifierGraph& g = b.graph();
    const Edge e = flip(g.make_and({g.literal(u), g.make_or({g.literal(w), g.literal(u, true)})}));
    const Edge n = to_nnf(g, e);
    EXPECT_FALSE(n.negated);
    for (bool bu : {false, true})
        for (bool bw : {false, true})
            EXPECT_EQ(eval(g, n, {{u, bu}, {w, bw}}), eval(g, e, {{u, bu}, {w, bw}}));
    g.set_root(n);
    for (NodeId id : g.postorder())
        for (const auto& c : g.node(id).children)
            if (c.negated)
                EXPECT_EQ(g.node(c.target).kind, NodeKind::Terminal);
}

TEST(Formula, RenameCopiesOnlyAffectedNodes) {
    FormulaBuilder b;
    const VarId u = b.free_var("u");
    const VarId w = b.free_var("w");
    const VarId z = b.free_var("z");
    QuantifierGraph& g = b.graph();
    const Edge keep = b.all({b.pos(w), b.pos(z)});
    const Edge e = b.any({keep, b.pos(u)});
    const Edge r = rename_var(g, e, u, z);
    EXPECT_EQ(structural_support(g, r), (VarSet{w, z}));
    EXPECT_EQ(g.node(r.target).children.at(0).target, keep.target);
    EXPECT_EQ(rename_var(g, keep, u, z), keep);
}

TEST(Formula, SubstituteAtPathLeavesOriginalIntact) {
    FormulaBuilder b;
    const VarId u = b.free_var("u");
    const VarId w = b.free_var("w");
    QuantifierGraph& g = b.graph();
    const Edge root = b.all({b.any({b.pos(u), b.pos(w)}), b.pos(w)});
    const std::string before = canonical_form(g, root, b.vars());
    const Edge replaced = substitute_at_path(g, root, {0, 1}, QuantifierGraph::constant(false));
    EXPECT_EQ(canonical_form(g, root, b.vars()), before);
    EXPECT_TRUE(eval(g, replaced, {{u, true}, {w, true}}));
    EXPECT_FALSE(eval(g, replaced, {{u, false}, {w, true}}));
}

TEST(Formula, RunningExampleShape) {
    const PrenexDqbf p = running_example();
    const GraphShape s = shape_of(p.matrix);
    EXPECT_EQ(s.inner_nodes, 9U);
    EXPECT_EQ(s.terminal_edges, 10U);
    EXPECT_EQ(s.negated_terminal_edges, 5U);
}

TEST(Formula, LinearizedPrefixPutsUniversalsFirst) {
    VarTable t;
    const VarId y = t.add(VarKind::Existential, "y");
    const VarId x = t.add(VarKind::Universal, "x");
    QuantAnnotation a;
    a.exists.insert(y);
    a.foralls.insert(x);
    EXPECT_EQ(linearize_prefix(a, t), (std::vector<VarId>{x, y}));
}

} // namespace
} // namespace dqbfloc
