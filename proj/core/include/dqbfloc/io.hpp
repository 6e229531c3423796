#pragma once

#include "dqbfloc/graph.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dqbfloc {

enum class Format : std::uint8_t { Dqdimacs, Dqcir };

std::string_view to_string(Format f);
std::optional<Format> format_from_string(std::string_view name);
/// `.dqdimacs`, `.dimacs`, `.cnf` and `.dqcir`, `.qcir`.
std::optional<Format> format_from_path(std::string_view path);

/// Prefix lines `a`, `e`, `d` (dependency variables must be declared universal earlier), then clauses.
/// `e` variables depend on every universal declared before them.
PrenexDqbf parse_dqdimacs(std::string_view text);

/// Requires a CNF-shaped matrix. Numbering: universals, existentials, free variables, each by ascending VarId.
std::string write_dqdimacs(const PrenexDqbf& p);

/// QCIR-style gate list with `forall`, `exists`, `depend(y, x...)` and `free` declarations.
/// `not` gates are pushed down to the inputs while loading.
PrenexDqbf parse_dqcir(std::string_view text);
std::string write_dqcir(const PrenexDqbf& p);

PrenexDqbf parse(std::string_view text, Format f);
std::string write(const PrenexDqbf& p, Format f);

/// Constant, literal, clause, or conjunction of literals and clauses.
[[nodiscard]] bool is_cnf_shaped(const QuantifierGraph& g, const Edge& e);

/// Clause list of a CNF-shaped matrix; literals are (variable, negated).
using Clause = std::vector<std::pair<VarId, bool>>;
std::vector<Clause> clauses_of(const QuantifierGraph& g, const Edge& e);

/// Definitional CNF: one fresh existential per gate, depending on every universal of the prefix.
PrenexDqbf tseitin_encode(const PrenexDqbf& p);

/// The formula itself if its matrix is CNF-shaped, its Tseitin encoding otherwise.
PrenexDqbf to_cnf(const PrenexDqbf& p);

} // namespace dqbfloc
