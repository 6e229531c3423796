#pragma once

#include "dqbfloc/var_table.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dqbfloc {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { And, Or, Terminal, Const };

std::string_view to_string(NodeKind kind);

/// Quantifiers attached to an edge. Dependency sets are kept in the VarTable.
struct QuantAnnotation {
    VarSet foralls;
    VarSet exists;

    [[nodiscard]] bool empty() const { return foralls.empty() && exists.empty(); }
    [[nodiscard]] bool contains(VarId v) const { return foralls.contains(v) || exists.contains(v); }
    [[nodiscard]] VarSet all() const;
    void erase(VarId v) {
        foralls.erase(v);
        exists.erase(v);
    }
    void merge(const QuantAnnotation& other);

    friend bool operator==(const QuantAnnotation&, const QuantAnnotation&) = default;
};

struct Edge {
    NodeId target = 0;
    bool negated = false;
    QuantAnnotation annotation;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Node {
    NodeKind kind = NodeKind::Const;
    VarId var{};                 ///< Terminal only
    bool value = false;          ///< Const only
    std::vector<Edge> children;  ///< And/Or only

    [[nodiscard]] bool is_inner() const { return kind == NodeKind::And || kind == NodeKind::Or; }
};

/**
 * \brief Arena DAG of And/Or gates over variable terminals.
 *
 * Nodes are never freed; nodes unreachable from the root edge are dead.
 * Annotation-free nodes built through make_op are structurally hashed.
 */
class QuantifierGraph {
public:
    static constexpr NodeId kFalse = 0;
    static constexpr NodeId kTrue = 1;

    QuantifierGraph();

    NodeId terminal(VarId v);
    [[nodiscard]] Edge literal(VarId v, bool negated = false);
    [[nodiscard]] static Edge constant(bool value) { return Edge{value ? kTrue : kFalse, false, {}}; }

    /// Raw node creation: no hashing and no simplification.
    NodeId add_node(NodeKind kind, std::vector<Edge> children);

    /// Simplifying, hashing constructor. Children must carry no annotations.
    Edge make_op(NodeKind kind, std::vector<Edge> children);
    Edge make_and(std::vector<Edge> children) { return make_op(NodeKind::And, std::move(children)); }
    Edge make_or(std::vector<Edge> children) { return make_op(NodeKind::Or, std::move(children)); }

    [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
    Node& node_mut(NodeId id) {
        ++version_;
        return nodes_.at(id);
    }

    [[nodiscard]] const Edge& root() const { return root_; }
    Edge& root_mut() {
        ++version_;
        return root_;
    }
    void set_root(Edge e) {
        ++version_;
        root_ = std::move(e);
    }

    [[nodiscard]] std::size_t arena_size() const { return nodes_.size(); }
    [[nodiscard]] std::uint64_t version() const { return version_; }

    /// Reachable nodes, children before parents (deterministic DFS order).
    [[nodiscard]] std::vector<NodeId> postorder() const;
    [[nodiscard]] std::vector<NodeId> postorder(const Edge& from) const;
    /// Reachable nodes, parents before children.
    [[nodiscard]] std::vector<NodeId> topological_order() const;
    [[nodiscard]] std::size_t live_count() const { return postorder().size(); }

    [[nodiscard]] std::optional<bool> constant_value(const Edge& e) const;

private:
    struct Key {
        NodeKind kind;
        std::vector<std::pair<NodeId, bool>> children;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    [[nodiscard]] Key key_of(NodeKind kind, const std::vector<Edge>& children) const;
    [[nodiscard]] bool matches(NodeId id, const Key& key) const;

    std::vector<Node> nodes_;
    Edge root_;
    std::unordered_map<Key, NodeId, KeyHash> hash_;
    std::unordered_map<VarId, NodeId> terminals_;
    std::uint64_t version_ = 0;
};

/// Logical negation of an edge; constant edges switch constants instead of setting the flag.
inline Edge flip(Edge e) {
    if (e.target <= QuantifierGraph::kTrue)
        e.target ^= 1U;
    else
        e.negated = !e.negated;
    return e;
}

/// Child indices from the root edge downwards; empty addresses the root edge itself.
using EdgePath = std::vector<std::uint32_t>;

std::string to_string(const EdgePath& path);
[[nodiscard]] const Edge& edge_at(const QuantifierGraph& g, const EdgePath& path);
Edge& edge_at_mut(QuantifierGraph& g, const EdgePath& path);

/// A (possibly non-prenex) DQBF: variable registry plus annotated graph.
struct Dqbf {
    VarTable vars;
    QuantifierGraph graph;
};

/// Prenex DQBF: ordered prefix (universals, then existentials) and an annotation-free matrix.
struct PrenexDqbf {
    VarTable vars;
    std::vector<VarId> prefix;
    QuantifierGraph matrix;
};

/// Places the whole prefix on the root edge.
Dqbf to_dqbf(const PrenexDqbf& p);
/// Requires that only the root edge is annotated.
PrenexDqbf to_prenex(const Dqbf& f);

} // namespace dqbfloc
