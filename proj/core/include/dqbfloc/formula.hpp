#pragma once

#include "dqbfloc/bit_table.hpp"
#include "dqbfloc/graph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dqbfloc {

/// Existential, universal and free-support variables of a subformula.
struct VarPartition {
    VarSet exists;
    VarSet foralls;
    VarSet free_support;

    [[nodiscard]] VarSet quantified() const;
    [[nodiscard]] VarSet all() const;
    [[nodiscard]] bool mentions(VarId v) const {
        return exists.contains(v) || foralls.contains(v) || free_support.contains(v);
    }
};

/// Memoized bottom-up partitions of one graph snapshot.
class PartitionCache {
public:
    explicit PartitionCache(const QuantifierGraph& g) : g_(&g), memo_(g.arena_size()) {}

    const VarPartition& of_node(NodeId id);
    VarPartition of_edge(const Edge& e);

private:
    const QuantifierGraph* g_;
    std::vector<std::optional<VarPartition>> memo_;
};

VarPartition var_partition(const QuantifierGraph& g, const Edge& e);

/// All universals first, then all existentials, each ascending.
std::vector<VarId> linearize_prefix(const QuantAnnotation& a, const VarTable& vars);

[[nodiscard]] bool has_annotations_below(const QuantifierGraph& g, const Edge& e);

/// phi[c/v] for the quantifier-free subformula at \p e; the result carries no annotation.
Edge cofactor(QuantifierGraph& g, const Edge& e, VarId v, bool c);

/// Variables with a terminal reachable from \p e.
VarSet structural_support(const QuantifierGraph& g, const Edge& e);

/// Variables the function at \p e actually depends on. Exact up to \p exact_limit
/// structural variables, structural-hash based above that.
VarSet true_support(QuantifierGraph& g, const Edge& e, std::size_t exact_limit = 16);

/// Truth table of the subformula, annotations ignored. \p leaf maps each terminal to its table.
BitTable evaluate_table(const QuantifierGraph& g, const Edge& e, std::size_t bits,
                        const std::function<BitTable(VarId)>& leaf);

bool evaluate(const QuantifierGraph& g, const Edge& e, const std::function<bool(VarId)>& value);

/// Pushes negations down to terminals. The subformula must be annotation-free.
Edge to_nnf(QuantifierGraph& g, const Edge& e);

/// Copy of the subformula with free occurrences of \p from replaced by \p to.
/// Only nodes mentioning \p from are copied; annotations are carried along.
Edge rename_var(QuantifierGraph& g, const Edge& e, VarId from, VarId to);

/// Replaces the edge at \p path (relative to \p root) by \p replacement, copying the path.
Edge substitute_at_path(QuantifierGraph& g, const Edge& root, const EdgePath& path, const Edge& replacement);

/// Deterministic textual rendering of the reachable graph, used for structural comparison.
std::string canonical_form(const QuantifierGraph& g, const Edge& e, const VarTable& vars);
std::string canonical_form(const Dqbf& f);

/// Number of reachable inner nodes and of terminal edges (counted per edge).
struct GraphShape {
    std::size_t inner_nodes = 0;
    std::size_t terminal_edges = 0;
    std::size_t negated_terminal_edges = 0;
};
GraphShape shape_of(const QuantifierGraph& g);

} // namespace dqbfloc
