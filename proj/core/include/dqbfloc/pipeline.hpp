#pragma once

#include "dqbfloc/eliminator.hpp"
#include "dqbfloc/oracle.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dqbfloc {

enum class Verdict : std::uint8_t { Sat, Unsat, Undecided };

std::string_view to_string(Verdict v);

struct PipelineOptions {
    LocalizeOptions localize;
    EliminateOptions eliminate;
    /// Check input and output with the oracle, at most this many candidates each.
    std::optional<std::uint64_t> verify_budget;
    /// Check well-formedness after every stage.
    bool check_well_formed = true;
};

struct Verification {
    bool input_sat = false;
    bool output_sat = false;
    [[nodiscard]] bool agrees() const { return input_sat == output_sat; }
};

struct PipelineStats {
    std::size_t pushed = 0;
    EliminationStats elimination;
    std::size_t splits = 0;
    double wall_ms = 0.0;
};

struct PipelineResult {
    PrenexDqbf output;
    Verdict verdict = Verdict::Undecided;
    PipelineStats stats;
    std::vector<RewriteReceipt> localize_receipts;
    std::vector<RewriteReceipt> eliminate_receipts;
    std::optional<Verification> verification;
    /// Formula after localization, before elimination.
    Dqbf localized;
};

/// normalize_to_nnf, macrogates, localize, eliminate. Throws WellFormednessError on an internal violation
/// and BudgetExceeded if verification does not fit the budget.
PipelineResult run_pipeline(const PrenexDqbf& input, const PipelineOptions& options = {});

/// {"pushed":..,"local_eliminations":..,"variables_eliminated":..,"nodes_before":..,"nodes_after":..,"wall_ms":..}
std::string stats_json(const PipelineStats& s);

} // namespace dqbfloc
