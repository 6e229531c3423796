#include "dqbfloc/graph.hpp"

#include "dqbfloc/error.hpp"
#include "dqbfloc/formula.hpp"

#include <algorithm>

namespace dqbfloc {

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::And: return "and";
    case NodeKind::Or: return "or";
    case NodeKind::Terminal: return "terminal";
    case NodeKind::Const: return "const";
    }
    return "?";
}

VarSet QuantAnnotation::all() const {
    VarSet out = foralls;
    out.insert(exists.begin(), exists.end());
    return out;
}

void QuantAnnotation::merge(const QuantAnnotation& other) {
    foralls.insert(other.foralls.begin(), other.foralls.end());
    exists.insert(other.exists.begin(), other.exists.end());
}

QuantifierGraph::QuantifierGraph() {
    nodes_.push_back(Node{NodeKind::Const, VarId{}, false, {}});
    nodes_.push_back(Node{NodeKind::Const, VarId{}, true, {}});
    root_ = constant(true);
}

NodeId QuantifierGraph::terminal(VarId v) {
    if (auto it = terminals_.find(v); it != terminals_.end())
        return it->second;
    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{NodeKind::Terminal, v, false, {}});
    terminals_.emplace(v, id);
    return id;
}

Edge QuantifierGraph::literal(VarId v, bool negated) {
    return Edge{terminal(v), negated, {}};
}

NodeId QuantifierGraph::add_node(NodeKind kind, std::vector<Edge> children) {
    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{kind, VarId{}, false, std::move(children)});
    return id;
}

std::size_t QuantifierGraph::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ULL;
    for (auto [id, neg] : k.children)
        h ^= (static_cast<std::size_t>(id) * 2 + neg) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

QuantifierGraph::Key QuantifierGraph::key_of(NodeKind kind, const std::vector<Edge>& children) const {
    Key key{kind, {}};
    key.children.reserve(children.size());
    for (const auto& e : children)
        key.children.emplace_back(e.target, e.negated);
    std::sort(key.children.begin(), key.children.end());
    return key;
}

bool QuantifierGraph::matches(NodeId id, const Key& key) const {
    const Node& n = nodes_[id];
    if (n.kind != key.kind)
        return false;
    for (const auto& e : n.children)
        if (!e.annotation.empty())
            return false;
    return key_of(n.kind, n.children) == key;
}

Edge QuantifierGraph::make_op(NodeKind kind, std::vector<Edge> children) {
    if (kind != NodeKind::And && kind != NodeKind::Or)
        throw PreconditionError("make_op needs an And or Or kind");
    const bool absorbing = kind == NodeKind::Or;
    std::vector<Edge> kept;
    kept.reserve(children.size());
    std::unordered_map<NodeId, bool> polarity;
    for (auto& e : children) {
        if (!e.annotation.empty())
            throw PreconditionError("make_op on annotated child edge");
        if (auto c = constant_value(e)) {
            if (*c == absorbing)
                return constant(absorbing);
            continue;
        }
        auto [it, inserted] = polarity.emplace(e.target, e.negated);
        if (!inserted) {
            if (it->second != e.negated)
                return constant(absorbing);
            continue;
        }
        kept.push_back(std::move(e));
    }
    if (kept.empty())
        return constant(!absorbing);
    if (kept.size() == 1)
        return kept.front();

    Key key = key_of(kind, kept);
    if (auto it = hash_.find(key); it != hash_.end() && matches(it->second, key))
        return Edge{it->second, false, {}};
    NodeId id = add_node(kind, std::move(kept));
    hash_[std::move(key)] = id;
    return Edge{id, false, {}};
}

std::optional<bool> QuantifierGraph::constant_value(const Edge& e) const {
    const Node& n = nodes_.at(e.target);
    if (n.kind != NodeKind::Const)
        return std::nullopt;
    return n.value != e.negated;
}

std::vector<NodeId> QuantifierGraph::postorder() const {
    return postorder(root_);
}

std::vector<NodeId> QuantifierGraph::postorder(const Edge& from) const {
    std::vector<NodeId> order;
    std::vector<std::uint8_t> seen(nodes_.size(), 0);
    // Explicit stack of (node, next child index) keeps deep graphs off the call stack.
    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.emplace_back(from.target, 0);
    seen[from.target] = 1;
    while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const Node& n = nodes_[id];
        if (next < n.children.size()) {
            NodeId child = n.children[next++].target;
            if (!seen[child]) {
                seen[child] = 1;
                stack.emplace_back(child, 0);
            }
            continue;
        }
        order.push_back(id);
        stack.pop_back();
    }
    return order;
}

std::vector<NodeId> QuantifierGraph::topological_order() const {
    auto order = postorder();
    std::reverse(order.begin(), order.end());
    return order;
}

std::string to_string(const EdgePath& path) {
    std::string out = "/";
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i)
            out += '/';
        out += std::to_string(path[i]);
    }
    return out;
}

const Edge& edge_at(const QuantifierGraph& g, const EdgePath& path) {
    const Edge* e = &g.root();
    for (auto index : path) {
        const Node& n = g.node(e->target);
        if (index >= n.children.size())
            throw PreconditionError("edge path " + to_string(path) + " leaves the graph");
        e = &n.children[index];
    }
    return *e;
}

Edge& edge_at_mut(QuantifierGraph& g, const EdgePath& path) {
    if (path.empty())
        return g.root_mut();
    const Edge& parent_edge = edge_at(g, EdgePath(path.begin(), path.end() - 1));
    Node& n = g.node_mut(parent_edge.target);
    if (path.back() >= n.children.size())
        throw PreconditionError("edge path " + to_string(path) + " leaves the graph");
    return n.children[path.back()];
}

Dqbf to_dqbf(const PrenexDqbf& p) {
    Dqbf f{p.vars, p.matrix};
    QuantAnnotation a;
    for (VarId v : p.prefix) {
        if (p.vars.is_universal(v))
            a.foralls.insert(v);
        else
            a.exists.insert(v);
    }
    f.graph.root_mut().annotation = std::move(a);
    return f;
}

PrenexDqbf to_prenex(const Dqbf& f) {
    for (NodeId id : f.graph.postorder())
        for (const auto& e : f.graph.node(id).children)
            if (!e.annotation.empty())
                throw PreconditionError("to_prenex: annotation below the root edge");
    PrenexDqbf p{f.vars, linearize_prefix(f.graph.root().annotation, f.vars), f.graph};
    p.matrix.root_mut().annotation = {};
    return p;
}

} // namespace dqbfloc
