#pragma once

#include "dqbfloc/graph.hpp"

#include <random>

namespace dqbfloc {

struct RandomBounds {
    std::size_t max_universals = 3;
    std::size_t max_existentials = 2;
    std::size_t max_deps = 2;
    std::size_t max_inner = 8;
    std::size_t max_free = 0;
};

/// Random gates over the given variables; negations anywhere. Returns the last gate built.
Edge random_matrix(QuantifierGraph& g, std::mt19937_64& rng, const std::vector<VarId>& vars, std::size_t max_inner);

/// Closed (or, with max_free > 0, open) prenex DQBF with a random matrix.
PrenexDqbf random_prenex(std::mt19937_64& rng, const RandomBounds& bounds = {});

/// Well-formed non-prenex NNF formula: a random prenex formula with up to \p rewrites random
/// rule applications that move quantifiers into the graph.
Dqbf random_dqbf(std::mt19937_64& rng, const RandomBounds& bounds = {}, std::size_t rewrites = 4);

} // namespace dqbfloc
