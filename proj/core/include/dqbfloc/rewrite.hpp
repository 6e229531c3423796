#pragma once

#include "dqbfloc/graph.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dqbfloc {

/// Guarded transformation rules on quantifier graphs.
enum class RuleId : std::uint8_t {
    DropExists,           ///< E y: phi  ~>  phi                      if y not in var(phi)
    DropForall,           ///< A x: phi  ~>  phi^{-x}                 if x not in var(phi)
    ForallCofactor,       ///< A x: phi  ==  phi[0/x] & phi[1/x]
    ExistsCofactor,       ///< E y: phi  ~>  phi[0/y] | phi[1/y]
    ForallAndDistribute,  ///< A x: (p1 & p2)  ~>  (A x: p1) & (A x': p2[x'/x])
    ForallAndScope,       ///< A x: (p1 & p2)  ~>  p1^{-x} & (A x: p2)
    ForallOpScope,        ///< A x: (p1 op p2)  ==  p1 op (A x: p2)
    ExistsOrDistribute,   ///< E y: (p1 | p2)  ~>  (E y: p1) | (E y': p2[y'/y])
    ExistsOpScope,        ///< E y: (p1 op p2)  ==  p1 op (E y: p2)
};

enum class Soundness : std::uint8_t { Equivalence, Equisat };

std::string_view to_string(RuleId rule);
std::optional<RuleId> rule_from_string(std::string_view name);
Soundness soundness_of(RuleId rule);
std::string_view to_string(Soundness s);

struct ConditionResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// Record of one fired rewrite.
struct RewriteReceipt {
    RuleId rule{};
    EdgePath position;                              ///< edge that carried the quantifier
    VarId var{};
    std::vector<std::uint32_t> children;            ///< child subset the rule acted on
    std::vector<std::pair<VarId, VarId>> fresh_vars;  ///< (original, copy)
    Soundness soundness{};
    std::vector<ConditionResult> conditions;
    /// Existential variables and their dependency sets are unchanged in the replaced subformula.
    bool substitution_preserves_existentials = false;
    std::vector<NodeId> created_nodes;              ///< new gates that group a child subset
};

/// Why a rule did not fire. The graph is left untouched.
struct Refusal {
    RuleId rule{};
    EdgePath position;
    VarId var{};
    std::string condition;
    std::string detail;

    [[nodiscard]] std::string message() const;
};

struct RuleArgs {
    /// Child subset for the rules that act on gate children; defaults to the children the rule must act on.
    std::optional<std::vector<std::uint32_t>> children;
    /// Disables the Vocc disjointness guard of ExistsOrDistribute. For mutation testing only.
    bool check_vocc = true;
};

using RewriteOutcome = std::variant<RewriteReceipt, Refusal>;

/// Applies \p rule to quantifier \p var on the edge at \p at. Transactional: refusals change nothing.
RewriteOutcome apply_rule(Dqbf& f, const EdgePath& at, RuleId rule, VarId var, const RuleArgs& args = {});

/// Condition check only; returns the refusal that apply_rule would produce, if any.
std::optional<Refusal> check_rule(const Dqbf& f, const EdgePath& at, RuleId rule, VarId var, const RuleArgs& args = {});

inline bool fired(const RewriteOutcome& o) { return std::holds_alternative<RewriteReceipt>(o); }

/// [V_A(psi) & var(phi)  u  U_{v in V_E(psi) & var(phi)} (V_A(psi) & D_v)] \ D_y for the subformula at \p sub.
VarSet vocc_of(const Dqbf& f, const Edge& sub, const VarSet& dy);

/// Universals bound outside psi1, plus the universal dependencies of existentials bound outside psi1,
/// where psi1 is E y: op(children) at \p at restricted to \p subset (all children by default).
VarSet vocc_outside(const Dqbf& f, const EdgePath& at, VarId y, const std::optional<std::vector<std::uint32_t>>& subset = {});

/// Existential variables of a subformula with their dependency sets.
struct ExistentialSignature {
    std::vector<std::pair<VarId, VarSet>> entries;
    friend bool operator==(const ExistentialSignature&, const ExistentialSignature&) = default;
};
ExistentialSignature existential_signature(const Dqbf& f, const Edge& sub);

/// Equivalent replacements stay equivalent in context only if this check passes.
ConditionResult check_substitution(const ExistentialSignature& before, const ExistentialSignature& after, const VarTable& vars);

std::string to_json_line(const RewriteReceipt& r, const VarTable& vars);
std::string to_json_line(const Refusal& r, const VarTable& vars);

} // namespace dqbfloc
