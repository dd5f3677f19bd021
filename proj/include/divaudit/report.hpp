#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "divaudit/scenario.hpp"
#include "divaudit/synthesis.hpp"

namespace divaudit {

inline constexpr const char* kReportSchemaVersion = "1";

// Mandatory caveat attached to every report: cycle and violation passes are
// exhaustive only over the enumerated menu family.
inline constexpr const char* kMenuFamilyCaveat =
    "Verdicts are relative to the enumerated menu family; a pass certifies the absence of "
    "violations within this family only and is evidence, not proof, for larger universes.";

enum class Verdict { Pass, Fail, PreconditionUnmet, CapExceeded };

const char* verdict_name(Verdict verdict);

struct Limits {
    int max_universe = 12;
    std::uint64_t max_menu_enum = std::uint64_t{1} << 14;
    int gs_perturb = 2;
    size_t guaranteed_cap = 64;
};

struct AuditOutcome {
    AuditKind kind = AuditKind::Rationality;
    Verdict verdict = Verdict::Pass;
    nlohmann::json details;  // witnesses, notes, synthesized utilities
    double millis = 0.0;
};

struct Report {
    Scenario scenario;
    std::vector<AuditOutcome> results;
    std::string caveat = kMenuFamilyCaveat;
};

// Executes the scenario's audits in declared order; rule errors become
// verdicts, never exceptions.
Report run_audits(const Scenario& scenario, const Limits& limits);

// Deterministic byte-for-byte unless timing is requested.
std::string emit_report_json(const Report& report, bool include_timing = false);
std::string emit_report_text(const Report& report, bool include_timing = false);

// 0: all audits passed; 1: some audit failed.
int report_exit_code(const Report& report);

// Shared witness serializers (also used by the synthesize subcommand).
nlohmann::json profile_json(const TypeProfile& profile, const DimensionSchema& schema,
                            const ScoreSet& scores);
nlohmann::json utility_json(const SeparableUtility& utility, const DimensionSchema& schema,
                            const ScoreSet& scores);

}  // namespace divaudit
