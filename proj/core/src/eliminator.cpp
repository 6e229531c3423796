#include "dqbfloc/eliminator.hpp"

#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace dqbfloc {

namespace {

Edge& edge_of_mut(QuantifierGraph& g, const IncomingEdge& in) {
    if (!in.parent)
        return g.root_mut();
    return g.node_mut(*in.parent).children.at(in.index);
}

Edge bare(Edge e) {
    e.annotation = {};
    return e;
}

bool vocc_allows_merge(const Dqbf& f, const EdgePath& at, VarId keep, const std::vector<std::uint32_t>& subset) {
    const Node& n = f.graph.node(edge_at(f.graph, at).target);
    const VarSet& dy = f.vars[keep].deps;
    std::vector<VarSet> vocc;
    for (std::uint32_t i : subset)
        vocc.push_back(vocc_of(f, n.children[i], dy));
    for (std::size_t i = 0; i < vocc.size(); ++i)
        for (std::size_t j = i + 1; j < vocc.size(); ++j)
            for (VarId x : vocc[i])
                if (vocc[j].contains(x))
                    return false;
    const VarSet outside = vocc_outside(f, at, keep, subset);
    std::size_t touching = 0;
    for (const auto& v : vocc)
        if (std::any_of(v.begin(), v.end(), [&](VarId x) { return outside.contains(x); }))
            ++touching;
    return touching <= 1;
}

class Eliminator {
public:
    Eliminator(Dqbf f, const EliminateOptions& options) : f_(std::move(f)), options_(options) {}

    EliminateResult run() {
        QuantifierGraph& g = f_.graph;
        stats_.nodes_before = g.live_count();
        limit_ = static_cast<std::size_t>(std::ceil(options_.growth_limit * static_cast<double>(stats_.nodes_before)));
        VarSet bases;
        for (VarId v : bound_variables())
            bases.insert(f_.vars.base_of(v));

        std::vector<NodeId> order;
        for (NodeId id : g.postorder())
            if (g.node(id).is_inner())
                order.push_back(id);
        for (NodeId id : order)
            process_node(id);
        eliminate_edge({});

        for (VarId v : bound_variables())
            bases.erase(f_.vars.base_of(v));
        stats_.variables_eliminated = bases.size();
        EliminateResult out{finish(), stats_, std::move(receipts_)};
        out.stats.nodes_after = out.formula.matrix.live_count();
        return out;
    }

private:
    void trace(const std::string& line) const {
        if (options_.trace)
            options_.trace(line);
    }

    VarSet bound_variables() const {
        VarSet out = f_.graph.root().annotation.all();
        for (NodeId id : f_.graph.postorder())
            for (const auto& c : f_.graph.node(id).children) {
                VarSet a = c.annotation.all();
                out.insert(a.begin(), a.end());
            }
        return out;
    }

    void process_node(NodeId id) {
        QuantifierGraph& g = f_.graph;
        const auto incoming = incoming_edges(g, id);
        if (incoming.empty())
            return;
        const std::size_t arity = g.node(id).children.size();
        bool pulled = false;
        for (std::uint32_t i = 0; i < arity; ++i) {
            if (g.node(id).children[i].annotation.empty())
                continue;
            eliminate_edge(path_to(g, IncomingEdge{id, i}));
            for (VarId v : g.node(id).children[i].annotation.all()) {
                trace("pull back " + f_.vars.name(v) + " from node " + std::to_string(id) + " child " + std::to_string(i));
                pull_back(f_, id, i, v);
                ++stats_.pulled_back;
                pulled = true;
            }
        }
        if (pulled)
            for (const auto& in : incoming_edges(g, id))
                stats_.merged += merge_duplicates(f_, path_to(g, in));
        rebuild(id);
    }

    // Replaces an annotation-free node by its simplified, hashed equivalent.
    void rebuild(NodeId id) {
        QuantifierGraph& g = f_.graph;
        const Node& n = g.node(id);
        if (std::any_of(n.children.begin(), n.children.end(), [](const Edge& c) { return !c.annotation.empty(); }))
            return;
        const Edge replacement = g.make_op(n.kind, n.children);
        if (replacement.target == id && !replacement.negated)
            return;
        for (const auto& in : incoming_edges(g, id)) {
            Edge& e = edge_of_mut(g, in);
            Edge next = e.negated ? flip(replacement) : replacement;
            next.annotation = std::move(e.annotation);
            e = std::move(next);
        }
    }

    void eliminate_edge(const EdgePath& at) {
        std::set<VarId> blocked;
        bool progress = true;
        while (progress) {
            progress = false;
            const QuantAnnotation a = edge_at(f_.graph, at).annotation;
            for (VarId y : a.exists)
                if (!blocked.contains(y) && try_eliminate(at, RuleId::ExistsCofactor, y, blocked))
                    progress = true;
            const VarSet foralls = edge_at(f_.graph, at).annotation.foralls;
            for (VarId x : foralls)
                if (!blocked.contains(x) && try_eliminate(at, RuleId::ForallCofactor, x, blocked)) {
                    progress = true;
                    break;
                }
        }
    }

    bool try_eliminate(const EdgePath& at, RuleId rule, VarId v, std::set<VarId>& blocked) {
        QuantifierGraph& g = f_.graph;
        const Edge saved = edge_at(g, at);
        std::optional<Dqbf> before;
        if (options_.observer)
            before = f_;
        auto outcome = apply_rule(f_, at, rule, v);
        if (auto* refusal = std::get_if<Refusal>(&outcome)) {
            trace("keep " + f_.vars.name(v) + ": " + refusal->condition);
            return false;
        }
        if (g.arena_size() > limit_ && g.live_count() > limit_) {
            edge_at_mut(g, at) = saved;
            blocked.insert(v);
            ++stats_.growth_rollbacks;
            trace("rollback " + std::string(to_string(rule)) + " " + f_.vars.name(v) + ": node limit " + std::to_string(limit_) +
                  " exceeded");
            return false;
        }
        trace("eliminate " + f_.vars.name(v) + " by " + std::string(to_string(rule)) + " at " + to_string(at));
        ++stats_.local_eliminations;
        auto& receipt = std::get<RewriteReceipt>(outcome);
        if (options_.observer)
            options_.observer(*before, receipt, f_);
        receipts_.push_back(std::move(receipt));
        return true;
    }

    PrenexDqbf finish() {
        const QuantifierGraph& g = f_.graph;
        for (NodeId id : g.postorder())
            for (const auto& c : g.node(id).children)
                if (!c.annotation.empty())
                    throw WellFormednessError("elimination left a quantifier below the root");
        PrenexDqbf out;
        out.vars = f_.vars;
        out.prefix = linearize_prefix(g.root().annotation, f_.vars);
        out.matrix = compact(g, g.root());
        const VarSet kept(out.prefix.begin(), out.prefix.end());
        for (std::size_t i = 0; i < out.vars.size(); ++i) {
            const VarId v{static_cast<std::uint32_t>(i)};
            if (!out.vars.is_existential(v))
                continue;
            VarSet deps;
            if (kept.contains(v))
                for (VarId x : out.vars[v].deps)
                    if (kept.contains(x))
                        deps.insert(x);
            out.vars.set_deps(v, std::move(deps));
        }
        return out;
    }

    Dqbf f_;
    const EliminateOptions& options_;
    EliminationStats stats_;
    std::vector<RewriteReceipt> receipts_;
    std::size_t limit_ = 0;
};

} // namespace

QuantifierGraph compact(const QuantifierGraph& g, const Edge& root) {
    QuantifierGraph out;
    std::unordered_map<NodeId, Edge> map;
    for (NodeId id : g.postorder(root)) {
        const Node& n = g.node(id);
        switch (n.kind) {
        case NodeKind::Const:
            map.emplace(id, QuantifierGraph::constant(n.value));
            break;
        case NodeKind::Terminal:
            map.emplace(id, out.literal(n.var));
            break;
        default: {
            std::vector<Edge> children;
            for (const auto& c : n.children) {
                const Edge& m = map.at(c.target);
                children.push_back(c.negated ? flip(m) : m);
            }
            map.emplace(id, out.make_op(n.kind, std::move(children)));
        }
        }
    }
    const Edge& m = map.at(root.target);
    out.set_root(root.negated ? flip(m) : m);
    return out;
}

void pull_back(Dqbf& f, NodeId source, std::uint32_t child, VarId v) {
    QuantifierGraph& g = f.graph;
    const auto incoming = incoming_edges(g, source);
    Edge& e = g.node_mut(source).children.at(child);
    if (!e.annotation.contains(v))
        throw PreconditionError("pull_back: " + f.vars.name(v) + " is not bound on the given edge");
    const bool universal = e.annotation.foralls.contains(v);
    e.annotation.erase(v);
    for (const auto& in : incoming) {
        Edge& target = edge_of_mut(g, in);
        (universal ? target.annotation.foralls : target.annotation.exists).insert(v);
    }
}

std::size_t merge_duplicates(Dqbf& f, const EdgePath& at) {
    QuantifierGraph& g = f.graph;
    std::size_t merged = 0;
    std::map<VarId, std::vector<VarId>> groups;
    for (VarId v : edge_at(g, at).annotation.all())
        groups[f.vars.base_of(v)].push_back(v);
    for (auto& [base, copies] : groups) {
        if (copies.size() < 2)
            continue;
        const VarId keep = copies.front();
        for (std::size_t k = 1; k < copies.size(); ++k) {
            const VarId c = copies[k];
            const Edge& e = edge_at(g, at);
            const Node& n = g.node(e.target);
            if (!n.is_inner() || e.negated)
                continue;
            const bool universal = f.vars.is_universal(c);
            if (universal && n.kind != NodeKind::And)
                continue;
            std::vector<std::uint32_t> subset;
            bool both = false;
            PartitionCache cache(g);
            for (std::uint32_t i = 0; i < n.children.size(); ++i) {
                const VarPartition p = cache.of_edge(n.children[i]);
                const bool has_keep = p.mentions(keep);
                const bool has_copy = p.mentions(c);
                both = both || (has_keep && has_copy);
                if (has_keep || has_copy)
                    subset.push_back(i);
            }
            if (both)
                continue;
            if (!universal) {
                if (n.kind != NodeKind::Or || f.vars[c].deps != f.vars[keep].deps)
                    continue;
                if (!vocc_allows_merge(f, at, keep, subset))
                    continue;
            }
            const Edge renamed = rename_var(g, bare(edge_at(g, at)), c, keep);
            Edge& target = edge_at_mut(g, at);
            target.target = renamed.target;
            target.negated = renamed.negated;
            target.annotation.erase(c);
            if (universal)
                f.vars.replace_in_deps(c, keep);
            ++merged;
        }
    }
    return merged;
}

EliminateResult eliminate(Dqbf f, const EliminateOptions& options) {
    return Eliminator(std::move(f), options).run();
}

} // namespace dqbfloc
