#pragma once

#include "dqbfloc/graph.hpp"

#include <string>
#include <vector>

namespace dqbfloc {

struct Violation {
    std::string rule;      ///< short rule tag, e.g. "disjointness" or "dependency-set"
    EdgePath edge;         ///< a path to the offending edge
    VarId var;
    std::string message;
};

struct WellFormedReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
    [[nodiscard]] std::string to_string() const;
};

/// Checks the syntax rules of non-prenex DQBF on the tree unfolding of the graph.
WellFormedReport well_formed(const Dqbf& f);

/// Throws WellFormednessError with the report text unless \p f is well-formed.
void require_well_formed(const Dqbf& f, const std::string& stage);

} // namespace dqbfloc
