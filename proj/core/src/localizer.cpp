#include "dqbfloc/localizer.hpp"

#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dqbfloc {

namespace {

Edge& edge_of_mut(QuantifierGraph& g, const IncomingEdge& in) {
    if (!in.parent)
        return g.root_mut();
    return g.node_mut(*in.parent).children.at(in.index);
}

std::string list_string(const std::vector<std::uint32_t>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? ", " : "") + std::to_string(xs[i]);
    return s + "}";
}

class Pusher {
public:
    Pusher(Dqbf& f, const EdgePath& at, const LocalizeOptions& options) : f_(f), at_(at), options_(options) {}

    std::vector<RewriteReceipt> run() {
        const Node& n = f_.graph.node(edge_at(f_.graph, at_).target);
        if (!n.is_inner())
            return {};
        if (n.kind == NodeKind::And)
            conjunction();
        else
            disjunction();
        return std::move(receipts_);
    }

private:
    const QuantAnnotation& annotation() const { return edge_at(f_.graph, at_).annotation; }
    std::size_t arity() const { return f_.graph.node(edge_at(f_.graph, at_).target).children.size(); }

    void trace(const std::string& line) const {
        if (options_.trace)
            options_.trace(line);
    }

    bool fire(RuleId rule, VarId v, std::optional<std::vector<std::uint32_t>> children) {
        std::optional<Dqbf> before;
        if (options_.observer)
            before = f_;
        RuleArgs args;
        args.children = std::move(children);
        auto outcome = apply_rule(f_, at_, rule, v, args);
        if (auto* refusal = std::get_if<Refusal>(&outcome)) {
            trace("refuse " + refusal->message() + (refusal->detail.empty() ? "" : " (" + refusal->detail + ")"));
            return false;
        }
        auto& receipt = std::get<RewriteReceipt>(outcome);
        trace("push " + std::string(to_string(rule)) + " " + f_.vars.name(v) + " at " + to_string(at_) + " children " +
              list_string(receipt.children));
        if (options_.observer)
            options_.observer(*before, receipt, f_);
        receipts_.push_back(std::move(receipt));
        return true;
    }

    void stuck(VarId v, const std::string& why) {
        trace("stuck " + f_.vars.name(v) + " at " + to_string(at_) + ": " + why);
    }

    void conjunction() {
        VarSet stuck_vars;
        while (true) {
            VarSet candidates;
            for (VarId y : annotation().exists)
                if (!stuck_vars.contains(y))
                    candidates.insert(y);
            auto best = find_best_variable_conj(f_, at_, candidates);
            if (!best)
                break;
            const VarId y = *best;
            const auto c = children_with(f_, at_, y);
            bool ok = false;
            if (c.empty())
                ok = fire(RuleId::DropExists, y, std::nullopt);
            else if (c.size() < arity())
                ok = fire(RuleId::ExistsOpScope, y, c);
            else
                stuck(y, "occurs in every child");
            if (!ok)
                stuck_vars.insert(y);
        }

        stuck_vars.clear();
        while (true) {
            VarSet blocked;
            for (VarId y : annotation().exists)
                blocked.insert(f_.vars[y].deps.begin(), f_.vars[y].deps.end());
            std::optional<VarId> next;
            for (VarId x : annotation().foralls) {
                if (stuck_vars.contains(x))
                    continue;
                if (blocked.contains(x)) {
                    stuck(x, "an existential on the same edge depends on it");
                    stuck_vars.insert(x);
                    continue;
                }
                next = x;
                break;
            }
            if (!next)
                break;
            const VarId x = *next;
            const auto c = children_with(f_, at_, x);
            bool ok = false;
            if (c.empty())
                ok = fire(RuleId::DropForall, x, std::nullopt);
            else if (c.size() == 1)
                ok = fire(RuleId::ForallAndScope, x, c);
            else
                ok = fire(RuleId::ForallAndDistribute, x, c);
            if (!ok)
                stuck_vars.insert(x);
        }
    }

    void disjunction() {
        const VarSet existentials = annotation().exists;
        for (VarId y : existentials) {
            const auto c = children_with(f_, at_, y);
            if (c.empty())
                fire(RuleId::DropExists, y, std::nullopt);
            else if (c.size() == 1)
                fire(RuleId::ExistsOpScope, y, c);
            else if (is_var_pushable(f_, at_, y))
                fire(RuleId::ExistsOrDistribute, y, c);
            else
                stuck(y, "distribution would not preserve satisfiability");
        }

        VarSet stuck_vars;
        while (true) {
            VarSet candidates;
            for (VarId v : annotation().all())
                if (!stuck_vars.contains(v))
                    candidates.insert(v);
            auto best = find_best_variable_disj(f_, at_, candidates);
            if (!best)
                break;
            const VarId v = *best;
            const bool universal = f_.vars.is_universal(v);
            const auto c = children_with(f_, at_, v);
            bool ok = false;
            if (c.empty())
                ok = fire(universal ? RuleId::DropForall : RuleId::DropExists, v, std::nullopt);
            else if (c.size() < arity())
                ok = fire(universal ? RuleId::ForallOpScope : RuleId::ExistsOpScope, v, c);
            else
                stuck(v, "occurs in every child");
            if (!ok)
                stuck_vars.insert(v);
        }
    }

    Dqbf& f_;
    const EdgePath& at_;
    const LocalizeOptions& options_;
    std::vector<RewriteReceipt> receipts_;
};

std::optional<VarId> find_best(const Dqbf& f, const EdgePath& at, const VarSet& candidates) {
    std::optional<VarId> best;
    std::size_t best_count = 0;
    for (VarId v : candidates) {
        const std::size_t k = children_with(f, at, v).size();
        if (!best || k < best_count) {
            best = v;
            best_count = k;
        }
    }
    return best;
}

} // namespace

Dqbf normalize_to_nnf(const PrenexDqbf& p) {
    Dqbf f = to_dqbf(p);
    Edge root = f.graph.root();
    QuantAnnotation prefix = std::move(root.annotation);
    root.annotation = {};
    Edge nnf = to_nnf(f.graph, root);
    nnf.annotation = std::move(prefix);
    f.graph.set_root(std::move(nnf));
    return f;
}

std::vector<Macrogate> build_macrogates(const QuantifierGraph& g) {
    std::unordered_map<NodeId, std::size_t> parents;
    ++parents[g.root().target];
    for (NodeId id : g.postorder())
        for (const auto& c : g.node(id).children)
            ++parents[c.target];

    std::unordered_set<NodeId> absorbed;
    std::vector<Macrogate> out;
    for (NodeId id : g.topological_order()) {
        const Node& n = g.node(id);
        if (!n.is_inner() || absorbed.contains(id))
            continue;
        Macrogate m{id, n.kind, {id}, {}};
        // Explicit (node, next child) stack; macrochildren come out left to right.
        std::vector<std::pair<NodeId, std::size_t>> stack{{id, 0}};
        while (!stack.empty()) {
            auto& [cur, next] = stack.back();
            const Node& cn = g.node(cur);
            if (next == cn.children.size()) {
                stack.pop_back();
                continue;
            }
            const Edge& c = cn.children[next++];
            const Node& target = g.node(c.target);
            if (!c.negated && c.annotation.empty() && target.kind == n.kind && parents[c.target] == 1) {
                absorbed.insert(c.target);
                m.members.push_back(c.target);
                stack.emplace_back(c.target, 0);
            } else {
                m.macrochildren.push_back(c);
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

void flatten_macrogates(QuantifierGraph& g, const std::vector<Macrogate>& gates) {
    for (const auto& m : gates)
        if (m.members.size() > 1)
            g.node_mut(m.root).children = m.macrochildren;
}

std::vector<IncomingEdge> incoming_edges(const QuantifierGraph& g, NodeId node) {
    std::vector<IncomingEdge> out;
    if (g.root().target == node)
        out.push_back(IncomingEdge{std::nullopt, 0});
    for (NodeId id : g.postorder()) {
        const auto& children = g.node(id).children;
        for (std::uint32_t i = 0; i < children.size(); ++i)
            if (children[i].target == node)
                out.push_back(IncomingEdge{id, i});
    }
    return out;
}

const Edge& edge_of(const QuantifierGraph& g, const IncomingEdge& in) {
    if (!in.parent)
        return g.root();
    return g.node(*in.parent).children.at(in.index);
}

EdgePath path_to(const QuantifierGraph& g, const IncomingEdge& in) {
    if (!in.parent)
        return {};
    // Breadth-first search gives a shortest path to the parent.
    std::unordered_map<NodeId, std::pair<NodeId, std::uint32_t>> via;
    std::queue<NodeId> todo;
    const NodeId root = g.root().target;
    todo.push(root);
    via.emplace(root, std::pair{root, 0U});
    while (!todo.empty() && !via.contains(*in.parent)) {
        const NodeId id = todo.front();
        todo.pop();
        const auto& children = g.node(id).children;
        for (std::uint32_t i = 0; i < children.size(); ++i)
            if (via.emplace(children[i].target, std::pair{id, i}).second)
                todo.push(children[i].target);
    }
    if (!via.contains(*in.parent))
        throw PreconditionError("edge is not reachable from the root");
    EdgePath path{in.index};
    for (NodeId cur = *in.parent; cur != root; cur = via.at(cur).first)
        path.push_back(via.at(cur).second);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<std::uint32_t> children_with(const Dqbf& f, const EdgePath& at, VarId v) {
    const Node& n = f.graph.node(edge_at(f.graph, at).target);
    const bool dependents = f.vars.is_universal(v) && n.kind == NodeKind::Or;
    PartitionCache cache(f.graph);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < n.children.size(); ++i) {
        const VarPartition part = cache.of_edge(n.children[i]);
        bool hit = part.mentions(v);
        if (!hit && dependents)
            hit = std::any_of(part.exists.begin(), part.exists.end(), [&](VarId y) { return f.vars[y].deps.contains(v); });
        if (hit)
            out.push_back(i);
    }
    return out;
}

bool is_var_pushable(const Dqbf& f, const EdgePath& at, VarId y) {
    const auto c = children_with(f, at, y);
    if (c.size() <= 1)
        return true;
    const Node& n = f.graph.node(edge_at(f.graph, at).target);
    const VarSet& dy = f.vars[y].deps;
    std::vector<VarSet> vocc;
    for (std::uint32_t i : c)
        vocc.push_back(vocc_of(f, n.children[i], dy));
    for (std::size_t i = 0; i < vocc.size(); ++i)
        for (std::size_t j = i + 1; j < vocc.size(); ++j)
            for (VarId x : vocc[i])
                if (vocc[j].contains(x))
                    return false;
    const VarSet outside = vocc_outside(f, at, y, c);
    std::size_t non_disjoint = 0;
    for (const auto& v : vocc)
        if (std::any_of(v.begin(), v.end(), [&](VarId x) { return outside.contains(x); }))
            ++non_disjoint;
    return non_disjoint <= 1;
}

std::optional<VarId> find_best_variable_conj(const Dqbf& f, const EdgePath& at, const VarSet& candidates) {
    return find_best(f, at, candidates);
}

std::optional<VarId> find_best_variable_disj(const Dqbf& f, const EdgePath& at, const VarSet& candidates) {
    const QuantAnnotation& a = edge_at(f.graph, at).annotation;
    VarSet eligible;
    for (VarId v : candidates) {
        if (f.vars.is_universal(v) &&
            std::any_of(a.exists.begin(), a.exists.end(), [&](VarId y) { return f.vars[y].deps.contains(v); }))
            continue;
        eligible.insert(v);
    }
    return find_best(f, at, eligible);
}

NodeId separate_incomings(QuantifierGraph& g, NodeId node, VarId v) {
    const auto in = incoming_edges(g, node);
    std::vector<IncomingEdge> others;
    for (const auto& e : in)
        if (!edge_of(g, e).annotation.contains(v))
            others.push_back(e);
    if (others.empty() || others.size() == in.size())
        throw PreconditionError("separate_incomings: variable must occur on some but not all incoming edges");
    const Node original = g.node(node);
    const NodeId copy = g.add_node(original.kind, original.children);
    for (const auto& e : others)
        edge_of_mut(g, e).target = copy;
    return copy;
}

std::vector<RewriteReceipt> push_variables(Dqbf& f, const EdgePath& at, const LocalizeOptions& options) {
    return Pusher(f, at, options).run();
}

LocalizeResult localize(Dqbf& f, const LocalizeOptions& options) {
    LocalizeResult result;
    QuantifierGraph& g = f.graph;
    if (options.flatten) {
        const auto gates = build_macrogates(g);
        result.macrogates = gates.size();
        flatten_macrogates(g, gates);
    }

    std::vector<NodeId> list;
    for (NodeId id : g.topological_order())
        if (g.node(id).is_inner())
            list.push_back(id);

    for (std::size_t i = 0; i < list.size(); ++i) {
        const NodeId node = list[i];
        std::vector<NodeId> inserted;

        auto in = incoming_edges(g, node);
        while (in.size() > 1) {
            std::map<VarId, std::size_t> count;
            for (const auto& e : in)
                for (VarId v : edge_of(g, e).annotation.all())
                    ++count[v];
            std::optional<VarId> pick;
            for (auto [v, k] : count) {
                if (k == in.size())
                    continue;
                if (!pick || (options.split == SplitHeuristic::Most ? k > count[*pick] : k < count[*pick]))
                    pick = v;
            }
            if (!pick)
                break;
            const NodeId copy = separate_incomings(g, node, *pick);
            ++result.splits;
            inserted.push_back(copy);
            in = incoming_edges(g, node);
            if (options.trace)
                options.trace("split node " + std::to_string(node) + " on " + f.vars.name(*pick) + ": copy " +
                              std::to_string(copy) + " takes the other incoming edges");
        }

        if (in.size() == 1 && !edge_of(g, in.front()).annotation.empty()) {
            const std::size_t arena_before = g.arena_size();
            auto receipts = push_variables(f, path_to(g, in.front()), options);
            std::move(receipts.begin(), receipts.end(), std::back_inserter(result.receipts));
            for (NodeId id : g.topological_order())
                if (id >= arena_before && g.node(id).is_inner())
                    inserted.push_back(id);
        }
        list.insert(list.begin() + static_cast<std::ptrdiff_t>(i) + 1, inserted.begin(), inserted.end());
    }
    return result;
}

} // namespace dqbfloc
