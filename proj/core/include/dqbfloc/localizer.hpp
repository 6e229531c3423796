#pragma once

#include "dqbfloc/rewrite.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dqbfloc {

/// Maximal fanout-free subtree of same-operation gates, treated as one multi-input gate.
struct Macrogate {
    NodeId root = 0;
    NodeKind kind = NodeKind::And;
    std::vector<NodeId> members;       ///< root first, then the absorbed gates
    std::vector<Edge> macrochildren;   ///< edges leaving the macrogate, left to right
};

/// An incoming edge of a node: the root edge, or child \p index of \p parent.
struct IncomingEdge {
    std::optional<NodeId> parent;
    std::uint32_t index = 0;
    friend bool operator==(const IncomingEdge&, const IncomingEdge&) = default;
};

/// Negations pushed to the terminals and the whole prefix placed on the root edge.
Dqbf normalize_to_nnf(const PrenexDqbf& p);

/// Macrogates of an NNF graph in topological order. Growth stops at nodes with several incoming edges.
std::vector<Macrogate> build_macrogates(const QuantifierGraph& g);

/// Rewires every macrogate root to its macrochildren, so each macrogate becomes one node.
void flatten_macrogates(QuantifierGraph& g, const std::vector<Macrogate>& gates);

std::vector<IncomingEdge> incoming_edges(const QuantifierGraph& g, NodeId node);
const Edge& edge_of(const QuantifierGraph& g, const IncomingEdge& in);

/// Some path from the root edge to the given edge.
EdgePath path_to(const QuantifierGraph& g, const IncomingEdge& in);

/// Children of the node at \p at that mention \p v (for a universal in a disjunction, also
/// the children containing an existential that depends on it).
std::vector<std::uint32_t> children_with(const Dqbf& f, const EdgePath& at, VarId v);

/// Whether distributing existential \p y over the disjunction at \p at keeps satisfiability.
bool is_var_pushable(const Dqbf& f, const EdgePath& at, VarId y);

/// Candidate with the fewest children containing it; ties go to the lowest VarId.
std::optional<VarId> find_best_variable_conj(const Dqbf& f, const EdgePath& at, const VarSet& candidates);
/// As above; universals bound on the same edge as an existential depending on them are not eligible.
std::optional<VarId> find_best_variable_disj(const Dqbf& f, const EdgePath& at, const VarSet& candidates);

/// Copies \p node and moves every incoming edge that does not carry \p v to the copy. Returns the copy.
NodeId separate_incomings(QuantifierGraph& g, NodeId node, VarId v);

enum class SplitHeuristic : std::uint8_t { Most, Fewest };

struct LocalizeOptions {
    /// Which variable decides a split when incoming edges disagree: the one on the most or the fewest edges.
    SplitHeuristic split = SplitHeuristic::Most;
    /// One line per push, split and stuck variable.
    std::function<void(const std::string&)> trace;
    /// Called around every fired rewrite with the formula before and after it.
    std::function<void(const Dqbf& before, const RewriteReceipt& receipt, const Dqbf& after)> observer;
    /// Skip macrogate flattening (for inspecting the raw graph).
    bool flatten = true;
};

struct LocalizeResult {
    std::vector<RewriteReceipt> receipts;
    std::size_t splits = 0;
    std::size_t macrogates = 0;
};

/// Pushes the quantifiers of the root edge as deep as the rewrite rules allow.
LocalizeResult localize(Dqbf& f, const LocalizeOptions& options = {});

/// Pushes the annotation of the single incoming edge at \p at into the node below.
std::vector<RewriteReceipt> push_variables(Dqbf& f, const EdgePath& at, const LocalizeOptions& options = {});

} // namespace dqbfloc
