#include "dqbfloc/io.hpp"

#include <unordered_map>

namespace dqbfloc {

PrenexDqbf tseitin_encode(const PrenexDqbf& p) {
    PrenexDqbf out{p.vars, p.prefix, QuantifierGraph{}};
    const QuantifierGraph& g = p.matrix;

    VarSet universals;
    for (VarId v : p.prefix)
        if (p.vars.is_universal(v))
            universals.insert(v);

    std::vector<Clause> clauses;
    std::unordered_map<NodeId, VarId> def;
    std::size_t counter = 0;
    auto lit = [&](const Edge& e) -> std::pair<VarId, bool> {
        const Node& n = g.node(e.target);
        return {n.kind == NodeKind::Terminal ? n.var : def.at(e.target), e.negated};
    };

    const Edge& root = g.root();
    if (auto c = g.constant_value(root)) {
        if (!*c)
            clauses.push_back({});
    } else {
        for (NodeId id : g.postorder()) {
            const Node& n = g.node(id);
            if (!n.is_inner())
                continue;
            std::string name;
            do
                name = "t" + std::to_string(++counter);
            while (out.vars.find(name));
            const VarId t = out.vars.add(VarKind::Existential, name, universals);
            def.emplace(id, t);
            out.prefix.push_back(t);

            // And: t -> l_i for all i, (l_1 & ... & l_n) -> t. Or is the dual.
            const bool is_and = n.kind == NodeKind::And;
            Clause big{{t, !is_and}};
            bool constant_hit = false;
            for (const auto& c : n.children) {
                if (auto cv = g.constant_value(c)) {
                    // A constant child either forces t or is neutral.
                    if (*cv != is_and) {
                        clauses.push_back({{t, is_and}});
                        constant_hit = true;
                        break;
                    }
                    continue;
                }
                auto [v, neg] = lit(c);
                clauses.push_back({{t, is_and}, {v, is_and ? neg : !neg}});
                big.emplace_back(v, is_and ? !neg : neg);
            }
            if (!constant_hit)
                clauses.push_back(std::move(big));
        }
        clauses.push_back({lit(root)});
    }

    std::vector<Edge> conj;
    conj.reserve(clauses.size());
    for (const auto& clause : clauses) {
        std::vector<Edge> lits;
        for (auto [v, neg] : clause)
            lits.push_back(out.matrix.literal(v, neg));
        conj.push_back(out.matrix.make_or(std::move(lits)));
    }
    out.matrix.set_root(out.matrix.make_and(std::move(conj)));
    return out;
}

PrenexDqbf to_cnf(const PrenexDqbf& p) {
    if (is_cnf_shaped(p.matrix, p.matrix.root()))
        return p;
    return tseitin_encode(p);
}

} // namespace dqbfloc
