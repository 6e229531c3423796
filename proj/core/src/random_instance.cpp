#include "dqbfloc/random_instance.hpp"

#include "dqbfloc/localizer.hpp"
#include "dqbfloc/well_formed.hpp"

#include <algorithm>

namespace dqbfloc {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng) {
    return std::bernoulli_distribution(0.5)(rng);
}

} // namespace

Edge random_matrix(QuantifierGraph& g, std::mt19937_64& rng, const std::vector<VarId>& vars, std::size_t max_inner) {
    if (vars.empty())
        return QuantifierGraph::constant(coin(rng));
    std::vector<Edge> pool;
    for (VarId v : vars)
        pool.push_back(g.literal(v));
    const std::size_t gates = uniform(rng, 1, std::max<std::size_t>(1, max_inner));
    Edge last = pool.front();
    for (std::size_t k = 0; k < gates; ++k) {
        const std::size_t arity = uniform(rng, 2, 3);
        std::vector<Edge> children;
        for (std::size_t i = 0; i < arity; ++i) {
            Edge e = pool[uniform(rng, 0, pool.size() - 1)];
            if (coin(rng))
                e = flip(e);
            children.push_back(e);
        }
        last = g.make_op(coin(rng) ? NodeKind::And : NodeKind::Or, std::move(children));
        if (g.node(last.target).is_inner())
            pool.push_back(last);
    }
    return last;
}

PrenexDqbf random_prenex(std::mt19937_64& rng, const RandomBounds& bounds) {
    PrenexDqbf p;
    std::vector<VarId> universals;
    std::vector<VarId> all;
    const std::size_t nu = uniform(rng, 1, std::max<std::size_t>(1, bounds.max_universals));
    for (std::size_t i = 0; i < nu; ++i)
        universals.push_back(p.vars.add(VarKind::Universal, "x" + std::to_string(i + 1)));
    p.prefix = universals;
    all = universals;
    const std::size_t ne = uniform(rng, 1, std::max<std::size_t>(1, bounds.max_existentials));
    for (std::size_t i = 0; i < ne; ++i) {
        std::vector<VarId> pick = universals;
        std::shuffle(pick.begin(), pick.end(), rng);
        pick.resize(std::min(pick.size(), uniform(rng, 0, bounds.max_deps)));
        const VarId y = p.vars.add(VarKind::Existential, "y" + std::to_string(i + 1), VarSet(pick.begin(), pick.end()));
        p.prefix.push_back(y);
        all.push_back(y);
    }
    const std::size_t nf = bounds.max_free ? uniform(rng, 0, bounds.max_free) : 0;
    for (std::size_t i = 0; i < nf; ++i)
        all.push_back(p.vars.add(VarKind::Free, "v" + std::to_string(i + 1)));
    p.matrix.set_root(random_matrix(p.matrix, rng, all, bounds.max_inner));
    return p;
}

Dqbf random_dqbf(std::mt19937_64& rng, const RandomBounds& bounds, std::size_t rewrites) {
    Dqbf f = normalize_to_nnf(random_prenex(rng, bounds));
    static constexpr RuleId kUniversal[] = {RuleId::DropForall, RuleId::ForallAndDistribute, RuleId::ForallAndScope,
                                            RuleId::ForallOpScope};
    static constexpr RuleId kExistential[] = {RuleId::DropExists, RuleId::ExistsOrDistribute, RuleId::ExistsOpScope};
    for (std::size_t step = 0; step < rewrites; ++step) {
        std::vector<IncomingEdge> annotated;
        if (!f.graph.root().annotation.empty())
            annotated.push_back(IncomingEdge{std::nullopt, 0});
        for (NodeId id : f.graph.postorder()) {
            const auto& children = f.graph.node(id).children;
            for (std::uint32_t i = 0; i < children.size(); ++i)
                if (!children[i].annotation.empty() && f.graph.node(children[i].target).is_inner())
                    annotated.push_back(IncomingEdge{id, i});
        }
        if (annotated.empty())
            break;
        const IncomingEdge in = annotated[uniform(rng, 0, annotated.size() - 1)];
        const Edge& e = edge_of(f.graph, in);
        if (!f.graph.node(e.target).is_inner())
            continue;
        const VarSet vars = e.annotation.all();
        const VarId v = *std::next(vars.begin(), static_cast<std::ptrdiff_t>(uniform(rng, 0, vars.size() - 1)));
        const RuleId rule = f.vars.is_universal(v) ? kUniversal[uniform(rng, 0, std::size(kUniversal) - 1)]
                                                   : kExistential[uniform(rng, 0, std::size(kExistential) - 1)];
        RuleArgs args;
        const std::size_t arity = f.graph.node(e.target).children.size();
        if (coin(rng)) {
            std::vector<std::uint32_t> subset;
            for (std::uint32_t i = 0; i < arity; ++i)
                if (coin(rng))
                    subset.push_back(i);
            if (!subset.empty())
                args.children = std::move(subset);
        }
        (void)apply_rule(f, path_to(f.graph, in), rule, v, args);
    }
    require_well_formed(f, "random rewrites");
    return f;
}

} // namespace dqbfloc
