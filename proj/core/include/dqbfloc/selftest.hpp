#pragma once

#include <string>
#include <vector>

namespace dqbfloc {

struct SelftestOptions {
    /// Only checks whose name contains this substring run.
    std::string filter;
    /// Runs the refusal checks with the Vocc guard of ExistsOrDistribute switched off.
    bool disable_vocc_guard = false;
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    std::vector<std::string> warnings;

    [[nodiscard]] bool ok() const;
    [[nodiscard]] std::vector<std::string> failures() const;
    [[nodiscard]] std::string to_string() const;
};

/// Hand-verified examples: Skolem candidates, counterexample satisfiability, refused rewrites,
/// Vocc sets and the running localization example.
SelftestReport run_selftest(const SelftestOptions& options = {});

} // namespace dqbfloc
