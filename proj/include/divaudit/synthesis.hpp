#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divaudit/audits.hpp"
#include "divaudit/model.hpp"
#include "divaudit/pairwise.hpp"
#include "divaudit/preference.hpp"
#include "divaudit/rules.hpp"

namespace divaudit {

// Additively separable score/diversity utility over exact rationals:
// U(I) = sum u(s(i)) + sum_theta h_theta(N_theta(I)).
struct SeparableUtility {
    std::vector<Rational> u;  // per score index, strictly increasing
    std::map<Identity, std::vector<Rational>> h_marginal;    // [n-1] holds h(theta, n)
    std::map<Identity, std::vector<Rational>> h_cumulative;  // [n] holds h~_theta(n), [0] = 0
    std::map<Identity, int> guaranteed;                      // n_theta (synthesized only)
    Rational u_bar;
    int capacity = 0;
    // The quota form rationalizes choices but its cumulative table is not
    // concave; this marker records which case applies.
    bool concave = true;

    Rational evaluate(const TypeProfile& profile) const;
};

// Runs the rule on the synthetic menu I_theta (capacity-many individuals of
// every other identity at every score, plus capacity-many theta individuals
// at the lowest score) and reports how many theta members were chosen.
std::map<Identity, int> guaranteed_counts(const ChoiceRule& rule, size_t menu_size_cap = 64);

struct SynthesisFailure {
    enum class Kind {
        Substitutes,
        WgResponsiveness,
        Acyclicity,
        Precondition,
        CapExceeded,
        Diagnostic,  // internal inconsistency or menu family too small
    };
    Kind kind = Kind::Diagnostic;
    std::string message;
    std::optional<SubstitutesViolation> substitutes;
    std::optional<WgrViolation> wgr;
    std::optional<TverskyCycle> cycle;
};

struct SynthesisResult {
    std::optional<SeparableUtility> utility;
    std::optional<SynthesisFailure> failure;
    PairwiseRelation relation;  // extracted relation (empty on early failure)

    bool success() const { return utility.has_value(); }
};

// Full constructive pipeline: audits, exact feasibility, guaranteed counts,
// the h-table lift, and an end-to-end argmax verification against the rule
// on every menu of the universe.
SynthesisResult synthesize_separable(const ChoiceRule& rule,
                                     const std::vector<ScoredIndividual>& universe,
                                     std::uint64_t max_enumeration = 1ull << 14,
                                     bool override_cap = false, size_t guaranteed_cap = 64);

// The explicit representations of quota and reserve policies. base_u is one
// value per score index and must be strictly increasing.
SeparableUtility quota_utility(const std::map<Identity, int>& caps,
                               const std::vector<Rational>& base_u, const DimensionSchema& schema,
                               int capacity);
SeparableUtility reserve_utility(const std::map<Identity, int>& reserves,
                                 const std::vector<Rational>& base_u,
                                 const DimensionSchema& schema, int capacity);

// Preference table induced by a utility over every profile reachable from
// the universe with size <= capacity.
PreferenceTable utility_preference(const SeparableUtility& utility,
                                   const std::vector<ScoredIndividual>& universe,
                                   const DimensionSchema& schema);

// All argmax profiles of the utility over q-subsets of the menu.
std::vector<TypeProfile> utility_argmax(const SeparableUtility& utility,
                                        const std::vector<ScoredIndividual>& menu,
                                        const DimensionSchema& schema);

struct OpenFirstDiagnostic {
    TverskyCycle cycle;
    PairwiseRelation relation;  // pairs extracted from the two witness menus
};

// Instantiates the witness population for a reserve rule that processes an
// open position before a reserve position and returns the induced cycle.
// Throws PreconditionError when the slot order or score set does not
// support the construction.
OpenFirstDiagnostic open_first_diagnostic(const ChoiceRule& rule);

}  // namespace divaudit
