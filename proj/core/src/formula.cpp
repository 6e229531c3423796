#include "dqbfloc/formula.hpp"

#include "dqbfloc/error.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace dqbfloc {

VarSet VarPartition::quantified() const {
    VarSet out = exists;
    out.insert(foralls.begin(), foralls.end());
    return out;
}

VarSet VarPartition::all() const {
    VarSet out = quantified();
    out.insert(free_support.begin(), free_support.end());
    return out;
}

const VarPartition& PartitionCache::of_node(NodeId id) {
    if (memo_.size() < g_->arena_size())
        memo_.resize(g_->arena_size());
    if (memo_[id])
        return *memo_[id];
    for (NodeId n : g_->postorder(Edge{id, false, {}})) {
        if (memo_[n])
            continue;
        const Node& node = g_->node(n);
        VarPartition p;
        if (node.kind == NodeKind::Terminal) {
            p.free_support.insert(node.var);
        } else if (node.is_inner()) {
            for (const auto& child : node.children) {
                VarPartition c = of_edge(child);
                p.exists.insert(c.exists.begin(), c.exists.end());
                p.foralls.insert(c.foralls.begin(), c.foralls.end());
                p.free_support.insert(c.free_support.begin(), c.free_support.end());
            }
        }
        memo_[n] = std::move(p);
    }
    return *memo_[id];
}

VarPartition PartitionCache::of_edge(const Edge& e) {
    VarPartition p = of_node(e.target);
    for (VarId v : e.annotation.foralls) {
        p.free_support.erase(v);
        p.foralls.insert(v);
    }
    for (VarId v : e.annotation.exists) {
        p.free_support.erase(v);
        p.exists.insert(v);
    }
    return p;
}

VarPartition var_partition(const QuantifierGraph& g, const Edge& e) {
    PartitionCache cache(g);
    return cache.of_edge(e);
}

std::vector<VarId> linearize_prefix(const QuantAnnotation& a, const VarTable&) {
    std::vector<VarId> out(a.foralls.begin(), a.foralls.end());
    out.insert(out.end(), a.exists.begin(), a.exists.end());
    return out;
}

bool has_annotations_below(const QuantifierGraph& g, const Edge& e) {
    for (NodeId id : g.postorder(e))
        for (const auto& c : g.node(id).children)
            if (!c.annotation.empty())
                return true;
    return false;
}

namespace {

Edge apply_sign(const Edge& mapped, bool negated) {
    return negated ? flip(mapped) : mapped;
}

} // namespace

Edge cofactor(QuantifierGraph& g, const Edge& e, VarId v, bool c) {
    if (has_annotations_below(g, e))
        throw PreconditionError("cofactor below a quantifier annotation");
    std::unordered_map<NodeId, Edge> map;
    for (NodeId id : g.postorder(e)) {
        const Node& n = g.node(id);
        switch (n.kind) {
        case NodeKind::Const:
            map[id] = QuantifierGraph::constant(n.value);
            break;
        case NodeKind::Terminal:
            map[id] = n.var == v ? QuantifierGraph::constant(c) : Edge{id, false, {}};
            break;
        default: {
            std::vector<Edge> children;
            children.reserve(n.children.size());
            for (const auto& ch : n.children)
                children.push_back(apply_sign(map.at(ch.target), ch.negated));
            const NodeKind kind = n.kind;
            map[id] = g.make_op(kind, std::move(children));
        }
        }
    }
    return apply_sign(map.at(e.target), e.negated);
}

VarSet structural_support(const QuantifierGraph& g, const Edge& e) {
    VarSet out;
    for (NodeId id : g.postorder(e))
        if (g.node(id).kind == NodeKind::Terminal)
            out.insert(g.node(id).var);
    return out;
}

VarSet true_support(QuantifierGraph& g, const Edge& e, std::size_t exact_limit) {
    VarSet structural = structural_support(g, e);
    VarSet out;
    if (structural.size() <= exact_limit) {
        std::vector<VarId> order(structural.begin(), structural.end());
        const std::size_t bits = std::size_t{1} << order.size();
        std::unordered_map<VarId, std::size_t> index;
        for (std::size_t i = 0; i < order.size(); ++i)
            index[order[i]] = i;
        BitTable t = evaluate_table(g, e, bits, [&](VarId v) { return BitTable::projection(index.at(v), bits); });
        for (std::size_t i = 0; i < order.size(); ++i) {
            for (std::size_t m = 0; m < bits; ++m) {
                if ((m >> i) & 1U)
                    continue;
                if (t.get(m) != t.get(m | (std::size_t{1} << i))) {
                    out.insert(order[i]);
                    break;
                }
            }
        }
        return out;
    }
    for (VarId v : structural) {
        Edge lo = cofactor(g, e, v, false);
        Edge hi = cofactor(g, e, v, true);
        if (lo.target != hi.target || lo.negated != hi.negated)
            out.insert(v);
    }
    return out;
}

BitTable evaluate_table(const QuantifierGraph& g, const Edge& e, std::size_t bits,
                        const std::function<BitTable(VarId)>& leaf) {
    std::unordered_map<NodeId, BitTable> value;
    for (NodeId id : g.postorder(e)) {
        const Node& n = g.node(id);
        switch (n.kind) {
        case NodeKind::Const:
            value[id] = BitTable(bits, n.value);
            break;
        case NodeKind::Terminal:
            value[id] = leaf(n.var);
            break;
        case NodeKind::And:
        case NodeKind::Or: {
            const bool is_and = n.kind == NodeKind::And;
            BitTable acc(bits, is_and);
            for (const auto& ch : n.children) {
                const BitTable& c = value.at(ch.target);
                if (is_and)
                    acc &= ch.negated ? ~c : c;
                else
                    acc |= ch.negated ? ~c : c;
            }
            value[id] = std::move(acc);
        }
        }
    }
    BitTable out = std::move(value.at(e.target));
    return e.negated ? ~out : out;
}

bool evaluate(const QuantifierGraph& g, const Edge& e, const std::function<bool(VarId)>& value) {
    return evaluate_table(g, e, 1, [&](VarId v) { return BitTable(1, value(v)); }).get(0);
}

Edge to_nnf(QuantifierGraph& g, const Edge& e) {
    if (has_annotations_below(g, e))
        throw PreconditionError("NNF conversion below a quantifier annotation");
    std::unordered_map<NodeId, std::pair<Edge, Edge>> map; // (positive, negative)
    for (NodeId id : g.postorder(e)) {
        const Node& n = g.node(id);
        switch (n.kind) {
        case NodeKind::Const:
            map[id] = {QuantifierGraph::constant(n.value), QuantifierGraph::constant(!n.value)};
            break;
        case NodeKind::Terminal:
            map[id] = {Edge{id, false, {}}, Edge{id, true, {}}};
            break;
        default: {
            std::vector<Edge> pos;
            std::vector<Edge> neg;
            for (const auto& ch : n.children) {
                const auto& [p, q] = map.at(ch.target);
                pos.push_back(ch.negated ? q : p);
                neg.push_back(ch.negated ? p : q);
            }
            const NodeKind kind = n.kind;
            const NodeKind dual = kind == NodeKind::And ? NodeKind::Or : NodeKind::And;
            Edge p = g.make_op(kind, std::move(pos));
            Edge q = g.make_op(dual, std::move(neg));
            map[id] = {p, q};
        }
        }
    }
    const auto& [p, q] = map.at(e.target);
    Edge out = e.negated ? q : p;
    out.annotation = e.annotation;
    return out;
}

Edge rename_var(QuantifierGraph& g, const Edge& e, VarId from, VarId to) {
    std::unordered_map<NodeId, Edge> map;
    NodeId to_terminal = g.terminal(to);
    for (NodeId id : g.postorder(e)) {
        const Node& n = g.node(id);
        if (n.kind == NodeKind::Terminal) {
            map[id] = Edge{n.var == from ? to_terminal : id, false, {}};
            continue;
        }
        if (!n.is_inner()) {
            map[id] = Edge{id, false, {}};
            continue;
        }
        bool changed = false;
        bool annotated = false;
        std::vector<Edge> children;
        children.reserve(n.children.size());
        for (const auto& ch : n.children) {
            annotated = annotated || !ch.annotation.empty();
            if (ch.annotation.contains(from)) {
                children.push_back(ch);
                continue;
            }
            const Edge& m = map.at(ch.target);
            Edge c = apply_sign(m, ch.negated);
            c.annotation = ch.annotation;
            changed = changed || c.target != ch.target || c.negated != ch.negated;
            children.push_back(std::move(c));
        }
        if (!changed) {
            map[id] = Edge{id, false, {}};
            continue;
        }
        const NodeKind kind = n.kind;
        map[id] = annotated ? Edge{g.add_node(kind, std::move(children)), false, {}}
                            : g.make_op(kind, std::move(children));
    }
    if (e.annotation.contains(from))
        return e;
    Edge out = apply_sign(map.at(e.target), e.negated);
    out.annotation = e.annotation;
    return out;
}

Edge substitute_at_path(QuantifierGraph& g, const Edge& root, const EdgePath& path, const Edge& replacement) {
    if (path.empty())
        return replacement;
    const Node& n = g.node(root.target);
    if (!n.is_inner() || path.front() >= n.children.size())
        throw PreconditionError("substitution path " + to_string(path) + " leaves the graph");
    std::vector<Edge> children = n.children;
    const NodeKind kind = n.kind;
    EdgePath rest(path.begin() + 1, path.end());
    Edge sub = substitute_at_path(g, children[path.front()], rest, replacement);
    children[path.front()] = std::move(sub);
    return Edge{g.add_node(kind, std::move(children)), root.negated, root.annotation};
}

namespace {

std::string annotation_text(const QuantAnnotation& a, const VarTable& vars) {
    if (a.empty())
        return {};
    std::string out = "[";
    for (VarId v : a.foralls)
        out += "A" + vars.name(v) + " ";
    for (VarId v : a.exists) {
        out += "E" + vars.name(v) + "(";
        bool first = true;
        for (VarId d : vars[v].deps) {
            if (!first)
                out += ",";
            first = false;
            out += vars.name(d);
        }
        out += ") ";
    }
    out.back() = ']';
    return out;
}

} // namespace

std::string canonical_form(const QuantifierGraph& g, const Edge& e, const VarTable& vars) {
    std::unordered_map<NodeId, std::size_t> label;
    std::vector<NodeId> order;
    std::deque<NodeId> queue;
    auto visit = [&](NodeId id) {
        if (!g.node(id).is_inner() || label.contains(id))
            return;
        label[id] = order.size();
        order.push_back(id);
        queue.push_back(id);
    };
    auto edge_text = [&](const Edge& x) {
        std::string out = annotation_text(x.annotation, vars);
        if (x.negated)
            out += "!";
        const Node& n = g.node(x.target);
        if (n.kind == NodeKind::Terminal)
            out += vars.name(n.var);
        else if (n.kind == NodeKind::Const)
            out += n.value ? "1" : "0";
        else
            out += "n" + std::to_string(label.at(x.target));
        return out;
    };
    visit(e.target);
    while (!queue.empty()) {
        NodeId id = queue.front();
        queue.pop_front();
        for (const auto& c : g.node(id).children)
            visit(c.target);
    }
    std::ostringstream os;
    os << "root: " << edge_text(e) << '\n';
    for (NodeId id : order) {
        const Node& n = g.node(id);
        os << 'n' << label.at(id) << " = " << to_string(n.kind) << '(';
        for (std::size_t i = 0; i < n.children.size(); ++i)
            os << (i ? ", " : "") << edge_text(n.children[i]);
        os << ")\n";
    }
    return os.str();
}

std::string canonical_form(const Dqbf& f) {
    return canonical_form(f.graph, f.graph.root(), f.vars);
}

GraphShape shape_of(const QuantifierGraph& g) {
    GraphShape s;
    auto count_edge = [&](const Edge& e) {
        if (g.node(e.target).kind == NodeKind::Terminal) {
            ++s.terminal_edges;
            if (e.negated)
                ++s.negated_terminal_edges;
        }
    };
    count_edge(g.root());
    for (NodeId id : g.postorder()) {
        const Node& n = g.node(id);
        if (!n.is_inner())
            continue;
        ++s.inner_nodes;
        for (const auto& c : n.children)
            count_edge(c);
    }
    return s;
}

} // namespace dqbfloc
