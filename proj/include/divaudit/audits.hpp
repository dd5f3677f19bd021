#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "divaudit/menus.hpp"
#include "divaudit/model.hpp"
#include "divaudit/preference.hpp"
#include "divaudit/rules.hpp"

namespace divaudit {

struct SubstitutesViolation {
    MenuMask big_menu = 0;
    MenuMask small_menu = 0;
    std::vector<std::string> big_menu_ids;
    std::vector<std::string> small_menu_ids;
    TypeProfile kept;
    std::vector<std::string> kept_ids;
    TypeProfile chosen_from_big;
    std::vector<TypeProfile> small_menu_choices;
};

// Exhaustive over all (big menu, small menu, kept set) triples in
// deterministic (ascending mask) order; returns the first violation.
std::optional<SubstitutesViolation> check_substitutes(const ChoiceRule& rule,
                                                      const std::vector<ScoredIndividual>& universe,
                                                      std::uint64_t max_enumeration = 1ull << 14,
                                                      bool override_cap = false);

struct GrossSubstitutesViolation {
    MenuMask menu = 0;
    std::vector<std::string> menu_ids;
    TypeProfile chosen;
    TypeProfile kept;
    std::vector<std::string> kept_ids;
    std::map<std::string, Rational> lowered;  // id -> new score value
    std::vector<TypeProfile> perturbed_choices;
};

// Score perturbations weakly lower the scores of individuals outside the
// kept set; at most `max_lowered` individuals are strictly lowered at a
// time (the full reassignment space sits behind a larger value).
std::optional<GrossSubstitutesViolation> check_gross_substitutes(
    const ChoiceRule& rule, const std::vector<ScoredIndividual>& universe, int max_lowered = 2,
    std::uint64_t max_enumeration = 1ull << 14, bool override_cap = false);

struct WgrViolation {
    MenuMask menu = 0;
    std::vector<std::string> menu_ids;
    std::string high_id;  // i with s(i) > s(j), theta(i) = theta(j)
    std::string low_id;   // j
    std::vector<std::string> kept_ids;
    TypeProfile chosen_with_low;
    TypeProfile rejected_with_high;
};

std::optional<WgrViolation> check_wg_responsiveness(const ChoiceRule& rule,
                                                    const std::vector<ScoredIndividual>& universe,
                                                    std::uint64_t max_enumeration = 1ull << 14,
                                                    bool override_cap = false);

// None: same-marginal profiles (same-score-multiset too when several
// scores are in play) are always indifferent. Otherwise a witness pair.
std::optional<std::pair<TypeProfile, TypeProfile>> intersectionality_witness(
    const PreferenceTable& pref, const DimensionSchema& schema, size_t score_count);

bool pref_ignores_intersectionality(const PreferenceTable& pref, const DimensionSchema& schema,
                                    size_t score_count);

struct ValuesDiversityResult {
    bool values_diversity = false;
    // q below the largest dimension makes every profile boundary; the
    // predicate is then vacuously false and flagged.
    bool vacuous = false;
    std::optional<TypeProfile> boundary_top;  // witness when false
};

ValuesDiversityResult pref_values_diversity(const PreferenceTable& pref, int q,
                                            const DimensionSchema& schema);

struct IntersectionalityCounterexample {
    std::vector<ScoredIndividual> universe;
    SubstitutesViolation violation;
    bool constructive = false;  // proof construction vs exhaustive fallback
};

// Preconditions: >= 2 dimensions, pref ignores intersectionality and
// values diversity (over a single score level). Throws PreconditionError
// otherwise; the returned violation is validated by replay.
IntersectionalityCounterexample intersectionality_counterexample(const PreferenceTable& pref,
                                                                 int q,
                                                                 const DimensionSchema& schema);

struct ScoreCanonicalization {
    // Indifference classes of score indices, worst first; the relabeled
    // preference uses the class index as the new score.
    std::vector<std::vector<ScoreIndex>> classes;
    PreferenceTable relabeled;
};

struct UniformityFailure {
    // Quadruple i, j, i', j' with theta(i)=theta(j), theta(i')=theta(j'),
    // s(i)=s(i'), s(j)=s(j'), i >= j but not i' >= j'.
    Identity theta_a;
    Identity theta_b;
    ScoreIndex score_high = 0;
    ScoreIndex score_low = 0;
    // Set instead when merging indifferent scores collides two profiles the
    // preference does not treat as indifferent.
    std::optional<std::pair<TypeProfile, TypeProfile>> merge_conflict;
};

std::variant<ScoreCanonicalization, UniformityFailure> canonicalize_scores(
    const PreferenceTable& pref, const DimensionSchema& schema, size_t score_count);

}  // namespace divaudit
