#pragma once

#include "dqbfloc/graph.hpp"

#include <string>
#include <vector>

namespace dqbfloc {

/// Small helper for assembling (possibly non-prenex) formulas in code.
class FormulaBuilder {
public:
    VarId universal(std::string name) { return f_.vars.add(VarKind::Universal, std::move(name)); }
    VarId existential(std::string name, VarSet deps = {}) {
        return f_.vars.add(VarKind::Existential, std::move(name), std::move(deps));
    }
    VarId free_var(std::string name) { return f_.vars.add(VarKind::Free, std::move(name)); }

    Edge pos(VarId v) { return f_.graph.literal(v, false); }
    Edge neg(VarId v) { return f_.graph.literal(v, true); }
    Edge constant(bool value) const { return QuantifierGraph::constant(value); }

    /// Conjunction/disjunction; hashed unless a child carries quantifiers.
    Edge all(std::vector<Edge> children);
    Edge any(std::vector<Edge> children);

    /// Negation pushed down to the literals. The operand must be quantifier-free.
    Edge negate(const Edge& e);
    Edge iff(const Edge& a, const Edge& b);
    Edge exclusive_or(const Edge& a, const Edge& b);

    /// Adds quantifiers to an edge according to the kinds registered for \p vars.
    Edge quantify(Edge e, const std::vector<VarId>& vars) const;

    [[nodiscard]] VarTable& vars() { return f_.vars; }
    [[nodiscard]] QuantifierGraph& graph() { return f_.graph; }

    Dqbf finish(Edge root) &&;

private:
    Edge op(NodeKind kind, std::vector<Edge> children);

    Dqbf f_;
};

} // namespace dqbfloc
