#pragma once

#include "dqbfloc/rewrite.hpp"

#include <string>
#include <vector>

namespace dqbfloc {

struct NamedFormula {
    std::string name;
    Dqbf formula;
    bool expected_sat = false;
};

/// A rewrite that would change satisfiability and must therefore be refused.
struct UnsoundRewrite {
    std::string name;
    Dqbf formula;
    EdgePath at;
    RuleId rule{};
    std::string var;
    RuleArgs args;
    std::string expected_condition;
};

/// forall x1 x2: (x1 == x2) | exists y1(x2): (x1 != y1)
Dqbf skolem_example();

/// The NNF quantifier graph used as the running localization example; prenex, 9 gates.
PrenexDqbf running_example();

/// Regression formulas whose satisfiability is known by hand.
std::vector<NamedFormula> counterexample_suite();

/// Rewrites that would turn a formula of the suite into its differently-satisfiable partner.
std::vector<UnsoundRewrite> unsound_rewrites();

} // namespace dqbfloc
