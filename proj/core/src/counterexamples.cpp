#include "dqbfloc/counterexamples.hpp"

#include "dqbfloc/builder.hpp"

namespace dqbfloc {

namespace {

// forall x1 x2 exists y1(D): (x1 == x2) | (x1 != y1), prenex
Dqbf equality_or_mismatch(bool y_depends_on_x2) {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y1 = b.existential("y1", y_depends_on_x2 ? VarSet{x2} : VarSet{});
    const Edge matrix = b.any({b.iff(b.pos(x1), b.pos(x2)), b.exclusive_or(b.pos(x1), b.pos(y1))});
    const Edge root = b.quantify(matrix, {x1, x2, y1});
    return std::move(b).finish(root);
}

// forall x1 x2 exists y1(D1) y2(x1,x2): (y1 == !y2) & (y2 == x1 & x2), prenex
Dqbf chained_equalities(bool y1_full_deps) {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y1 = b.existential("y1", y1_full_deps ? VarSet{x1, x2} : VarSet{});
    const VarId y2 = b.existential("y2", {x1, x2});
    const Edge matrix = b.all({b.iff(b.pos(y1), b.neg(y2)), b.iff(b.pos(y2), b.all({b.pos(x1), b.pos(x2)}))});
    return std::move(b).finish(b.quantify(matrix, {x1, x2, y1, y2}));
}

Dqbf pushed_equality_or_mismatch() {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y1 = b.existential("y1");
    const Edge left = b.quantify(b.iff(b.pos(x1), b.pos(x2)), {x2});
    const Edge right = b.quantify(b.exclusive_or(b.pos(x1), b.pos(y1)), {y1});
    return std::move(b).finish(b.quantify(b.any({left, right}), {x1}));
}

Dqbf pushed_chained_equalities() {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y2 = b.existential("y2", {x1, x2});
    const VarId y1 = b.existential("y1");
    const Edge left = b.quantify(b.iff(b.pos(y1), b.neg(y2)), {y1});
    const Edge right = b.iff(b.pos(y2), b.all({b.pos(x1), b.pos(x2)}));
    return std::move(b).finish(b.quantify(b.all({left, right}), {x1, x2, y2}));
}

// forall x exists y(): (x & y) | (!x & !y)
Dqbf same_polarity() {
    FormulaBuilder b;
    const VarId x = b.universal("x");
    const VarId y = b.existential("y");
    const Edge matrix = b.any({b.all({b.pos(x), b.pos(y)}), b.all({b.neg(x), b.neg(y)})});
    return std::move(b).finish(b.quantify(matrix, {x, y}));
}

// forall x: (exists y: x & y) | (exists y': !x & !y')
Dqbf same_polarity_split() {
    FormulaBuilder b;
    const VarId x = b.universal("x");
    const VarId y = b.existential("y");
    const VarId y_copy = b.existential("y'");
    const Edge left = b.quantify(b.all({b.pos(x), b.pos(y)}), {y});
    const Edge right = b.quantify(b.all({b.neg(x), b.neg(y_copy)}), {y_copy});
    return std::move(b).finish(b.quantify(b.any({left, right}), {x}));
}

// forall x1 x2: (exists y: (x1 & y) | (x2 & !y)) | (!x1 & !x2)
Dqbf selector() {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y = b.existential("y");
    const Edge inner = b.any({b.all({b.pos(x1), b.pos(y)}), b.all({b.pos(x2), b.neg(y)})});
    const Edge matrix = b.any({b.quantify(inner, {y}), b.all({b.neg(x1), b.neg(x2)})});
    return std::move(b).finish(b.quantify(matrix, {x1, x2}));
}

// forall x1 x2: ((exists y: x1 & y) | (exists y': x2 & !y')) | (!x1 & !x2)
Dqbf selector_split() {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y = b.existential("y");
    const VarId y_copy = b.existential("y'");
    const Edge inner = b.any({b.quantify(b.all({b.pos(x1), b.pos(y)}), {y}),
                              b.quantify(b.all({b.pos(x2), b.neg(y_copy)}), {y_copy})});
    const Edge matrix = b.any({inner, b.all({b.neg(x1), b.neg(x2)})});
    return std::move(b).finish(b.quantify(matrix, {x1, x2}));
}

} // namespace

Dqbf skolem_example() {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y1 = b.existential("y1", {x2});
    const Edge right = b.quantify(b.exclusive_or(b.pos(x1), b.pos(y1)), {y1});
    const Edge matrix = b.any({b.iff(b.pos(x1), b.pos(x2)), right});
    return std::move(b).finish(b.quantify(matrix, {x1, x2}));
}

PrenexDqbf running_example() {
    FormulaBuilder b;
    const VarId x1 = b.universal("x1");
    const VarId x2 = b.universal("x2");
    const VarId y1 = b.existential("y1", {x1});
    const VarId y2 = b.existential("y2", {x2});
    const Edge n4 = b.all({b.pos(y1), b.pos(x1)});
    const Edge n5 = b.all({b.pos(x1), b.neg(x2)});
    const Edge n6 = b.all({b.neg(y1), b.neg(x1)});
    const Edge n8 = b.any({b.pos(x2), b.neg(y2)});
    const Edge n9 = b.any({b.neg(x2), b.pos(y2)});
    const Edge n7 = b.all({n8, n9});
    const Edge root = b.any({b.any({n4, n5}), b.any({n6, n7})});
    return to_prenex(std::move(b).finish(b.quantify(root, {x1, x2, y1, y2})));
}

std::vector<NamedFormula> counterexample_suite() {
    std::vector<NamedFormula> out;
    out.push_back({"psi1", equality_or_mismatch(true), true});
    out.push_back({"psi2", pushed_equality_or_mismatch(), false});
    out.push_back({"psi3", equality_or_mismatch(false), false});
    out.push_back({"psi4", chained_equalities(true), true});
    out.push_back({"psi5", pushed_chained_equalities(), false});
    out.push_back({"psi6", chained_equalities(false), false});
    out.push_back({"same-polarity", same_polarity(), false});
    out.push_back({"same-polarity-split", same_polarity_split(), true});
    out.push_back({"selector", selector(), false});
    out.push_back({"selector-split", selector_split(), true});
    out.push_back({"skolem-example", skolem_example(), true});
    return out;
}

std::vector<UnsoundRewrite> unsound_rewrites() {
    std::vector<UnsoundRewrite> out;
    out.push_back({"forall-scope-past-dependent-existential", skolem_example(), {}, RuleId::ForallOpScope, "x2",
                   RuleArgs{std::vector<std::uint32_t>{0}, true}, "x ∉ D_y for all y ∈ V∃(φ1)"});
    out.push_back({"forall-scope-blocked-by-inner-existential", chained_equalities(true), {}, RuleId::ForallAndScope,
                   "x1", RuleArgs{}, "innermost"});
    out.push_back({"distribute-overlapping-vocc", same_polarity(), {}, RuleId::ExistsOrDistribute, "y", RuleArgs{},
                   "Vocc(φ1) ∩ Vocc(φ2) = ∅"});
    out.push_back({"distribute-outside-vocc", selector(), {0}, RuleId::ExistsOrDistribute, "y", RuleArgs{},
                   "Vocc(φi) ∩ Vocc(ψ∖ψ1) = ∅ for all but one child"});
    return out;
}

} // namespace dqbfloc
