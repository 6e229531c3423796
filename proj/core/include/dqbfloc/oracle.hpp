#pragma once

#include "dqbfloc/graph.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dqbfloc {

/// Boolean function given by its rows; row index bit i is the value of inputs[i].
struct TruthTable {
    std::vector<VarId> inputs;
    std::vector<bool> rows;

    static TruthTable constant(bool value) { return TruthTable{{}, {value}}; }
    static TruthTable from_function(std::vector<VarId> inputs, const std::function<bool(const std::vector<bool>&)>& f);

    friend bool operator==(const TruthTable&, const TruthTable&) = default;
    friend bool operator<(const TruthTable& a, const TruthTable& b) {
        return a.inputs != b.inputs ? a.inputs < b.inputs : a.rows < b.rows;
    }
};

/// Assignment of a function to every existential and free variable.
struct SkolemCandidate {
    std::map<VarId, TruthTable> functions;

    friend bool operator==(const SkolemCandidate&, const SkolemCandidate&) = default;
    friend bool operator<(const SkolemCandidate& a, const SkolemCandidate& b) { return a.functions < b.functions; }
};

struct SemanticsSet {
    std::set<SkolemCandidate> candidates;
    std::uint64_t universe_log2 = 0;  ///< the candidate universe has 2^universe_log2 elements

    friend bool operator==(const SemanticsSet& a, const SemanticsSet& b) { return a.candidates == b.candidates; }
};

struct OracleOptions {
    std::uint64_t budget = std::uint64_t{1} << 20;
    /// Variable universe V. Defaults to all variables occurring in the formula.
    std::optional<VarSet> universe;
};

/// Domain of the candidates of a formula: every variable with the inputs of its function.
struct CandidateLayout {
    std::vector<VarId> universals;   ///< V_forall, ascending
    std::vector<VarId> domain;       ///< free and existential variables, ascending
    std::vector<std::vector<VarId>> inputs;
    std::uint64_t universe_log2 = 0;
};

CandidateLayout candidate_layout(const Dqbf& f, const OracleOptions& opts = {});

/// Calls \p visit on each candidate in lexicographic order; stops early when it returns false.
void for_each_candidate(const Dqbf& f, const OracleOptions& opts, const std::function<bool(const SkolemCandidate&)>& visit);
std::vector<SkolemCandidate> candidate_universe(const Dqbf& f, const OracleOptions& opts = {});

bool check_candidate(const Dqbf& f, const SkolemCandidate& s);

SemanticsSet sem_def(const Dqbf& f, const OracleOptions& opts = {});
SemanticsSet sem_rec(const Dqbf& f, const OracleOptions& opts = {});

bool is_sat(const Dqbf& f, const OracleOptions& opts = {});
bool is_sat(const PrenexDqbf& p, const OracleOptions& opts = {});
bool equivalent(const Dqbf& a, const Dqbf& b, const OracleOptions& opts = {});
bool equisat(const Dqbf& a, const Dqbf& b, const OracleOptions& opts = {});

std::string dump(const SemanticsSet& s, const VarTable& vars);
std::string dump(const SkolemCandidate& s, const VarTable& vars);

} // namespace dqbfloc
