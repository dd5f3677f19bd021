#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divaudit/model.hpp"
#include "divaudit/rules.hpp"

namespace divaudit {

enum class AuditKind {
    Rationality,
    ScoreRationality,
    ScpRationality,
    Substitutes,
    GrossSubstitutes,
    WgResponsiveness,
    Intersectionality,
    ValuesDiversity,
    Acyclicity,
    Separability,
    OpenFirst,
    CanonicalScores,
};

const char* audit_kind_name(AuditKind kind);
std::optional<AuditKind> audit_kind_from_name(std::string_view name);

struct ParseError : AuditError {
    int line = 0;
    int column = 0;
    std::string expected;
    ParseError(std::string msg, int l, int c, std::string hint = {})
        : AuditError(std::move(msg)), line(l), column(c), expected(std::move(hint)) {}
};

struct Scenario {
    std::string name = "unnamed";
    DimensionSchema schema;
    ScoreSet scores;
    std::vector<ScoredIndividual> universe;
    RuleSpec rule;
    // How the rule was written in the source, so serialization round-trips.
    enum class PrefSugar { None, BalancedMarginals, Explicit } pref_sugar = PrefSugar::None;
    std::vector<AuditKind> audits;
    std::optional<PrivilegeSpec> privilege;
    int menu_min = 1;
    int menu_max = 0;  // resolved to |universe| at parse time

    bool operator==(const Scenario& other) const;
};

// Line-oriented declarative format; every line is keyword-led. Errors carry
// line and column plus an expected-token hint.
Scenario parse_scenario(std::string_view text);

std::string serialize_scenario(const Scenario& scenario);

// Ranks profiles by marginal balance (then score sum), one class per
// (marginal, score multiset); ignores intersectionality by construction.
PreferenceTable balanced_marginals_preference(const DimensionSchema& schema,
                                              const ScoreSet& scores, int capacity);

}  // namespace divaudit
