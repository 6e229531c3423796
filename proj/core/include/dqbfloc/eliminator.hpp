#pragma once

#include "dqbfloc/localizer.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dqbfloc {

struct EliminationStats {
    std::size_t local_eliminations = 0;    ///< quantifiers removed by cofactoring
    std::size_t variables_eliminated = 0;  ///< base variables of which no copy survives
    std::size_t nodes_before = 0;
    std::size_t nodes_after = 0;
    std::size_t pulled_back = 0;
    std::size_t merged = 0;
    std::size_t growth_rollbacks = 0;
};

struct EliminateOptions {
    /// Live node count may not exceed growth_limit times the count before elimination.
    double growth_limit = 2.0;
    std::function<void(const std::string&)> trace;
    /// Called for every kept cofactor elimination with the formula before and after it.
    std::function<void(const Dqbf& before, const RewriteReceipt& receipt, const Dqbf& after)> observer;
};

struct EliminateResult {
    PrenexDqbf formula;
    EliminationStats stats;
    std::vector<RewriteReceipt> receipts;
};

/// Eliminates quantifiers bottom-up where cofactoring is allowed; everything else ends up in the prefix.
EliminateResult eliminate(Dqbf f, const EliminateOptions& options = {});

/// Moves \p v from child edge \p child of \p source to every incoming edge of \p source.
/// With several incoming edges the same variable is bound on each of them until merged higher up.
void pull_back(Dqbf& f, NodeId source, std::uint32_t child, VarId v);

/// Merges copies of one base variable bound on the edge at \p at into the lowest copy.
/// Universal copies merge over conjunctions, existential copies over disjunctions when their
/// dependency sets agree and the Vocc conditions hold. Returns the number of copies removed.
std::size_t merge_duplicates(Dqbf& f, const EdgePath& at);

/// Copy of the reachable part of the graph rooted at \p root, without annotations.
QuantifierGraph compact(const QuantifierGraph& g, const Edge& root);

} // namespace dqbfloc
