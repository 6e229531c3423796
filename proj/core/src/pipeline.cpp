#include "dqbfloc/pipeline.hpp"

#include "dqbfloc/well_formed.hpp"

#include <json.hpp>

#include <chrono>

namespace dqbfloc {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Undecided: return "UNDECIDED";
    }
    return "?";
}

PipelineResult run_pipeline(const PrenexDqbf& input, const PipelineOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    PipelineResult result;

    Dqbf f = normalize_to_nnf(input);
    if (options.check_well_formed)
        require_well_formed(f, "NNF normalization");

    LocalizeResult loc = localize(f, options.localize);
    if (options.check_well_formed)
        require_well_formed(f, "localization");
    result.stats.pushed = loc.receipts.size();
    result.stats.splits = loc.splits;
    result.localize_receipts = std::move(loc.receipts);
    result.localized = f;

    EliminateResult elim = eliminate(std::move(f), options.eliminate);
    if (options.check_well_formed)
        require_well_formed(to_dqbf(elim.formula), "elimination");
    result.stats.elimination = elim.stats;
    result.eliminate_receipts = std::move(elim.receipts);
    result.output = std::move(elim.formula);

    if (auto c = result.output.matrix.constant_value(result.output.matrix.root()))
        result.verdict = *c ? Verdict::Sat : Verdict::Unsat;

    if (options.verify_budget) {
        OracleOptions oracle;
        oracle.budget = *options.verify_budget;
        Verification v;
        v.input_sat = is_sat(input, oracle);
        v.output_sat = is_sat(result.output, oracle);
        result.verification = v;
    }

    result.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::string stats_json(const PipelineStats& s) {
    nlohmann::ordered_json j;
    j["pushed"] = s.pushed;
    j["local_eliminations"] = s.elimination.local_eliminations;
    j["variables_eliminated"] = s.elimination.variables_eliminated;
    j["nodes_before"] = s.elimination.nodes_before;
    j["nodes_after"] = s.elimination.nodes_after;
    j["wall_ms"] = static_cast<std::int64_t>(s.wall_ms + 0.5);
    return j.dump();
}

} // namespace dqbfloc
