#include "dqbfloc/builder.hpp"

#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <algorithm>

namespace dqbfloc {

Edge FormulaBuilder::op(NodeKind kind, std::vector<Edge> children) {
    const bool annotated = std::any_of(children.begin(), children.end(), [](const Edge& e) { return !e.annotation.empty(); });
    if (!annotated)
        return f_.graph.make_op(kind, std::move(children));
    return Edge{f_.graph.add_node(kind, std::move(children)), false, {}};
}

Edge FormulaBuilder::all(std::vector<Edge> children) {
    return op(NodeKind::And, std::move(children));
}

Edge FormulaBuilder::any(std::vector<Edge> children) {
    return op(NodeKind::Or, std::move(children));
}

Edge FormulaBuilder::negate(const Edge& e) {
    if (!e.annotation.empty())
        throw PreconditionError("cannot negate a quantified subformula");
    return to_nnf(f_.graph, flip(e));
}

Edge FormulaBuilder::iff(const Edge& a, const Edge& b) {
    return any({all({a, b}), all({negate(a), negate(b)})});
}

Edge FormulaBuilder::exclusive_or(const Edge& a, const Edge& b) {
    return any({all({negate(a), b}), all({a, negate(b)})});
}

Edge FormulaBuilder::quantify(Edge e, const std::vector<VarId>& vars) const {
    for (VarId v : vars) {
        if (f_.vars.is_universal(v))
            e.annotation.foralls.insert(v);
        else if (f_.vars.is_existential(v))
            e.annotation.exists.insert(v);
        else
            throw PreconditionError("cannot quantify free variable " + f_.vars.name(v));
    }
    return e;
}

Dqbf FormulaBuilder::finish(Edge root) && {
    f_.graph.set_root(std::move(root));
    return std::move(f_);
}

} // namespace dqbfloc
