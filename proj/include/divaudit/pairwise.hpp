#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "divaudit/lp.hpp"
#include "divaudit/model.hpp"
#include "divaudit/rules.hpp"

namespace divaudit {

// One side of a revealed pairwise comparison: a theta individual with score
// s chosen as the n'th member of its identity.
struct PairElement {
    ScoreIndex score = 0;
    Identity identity;
    int count = 1;  // n in 1..q

    auto operator<=>(const PairElement&) const = default;
};

struct RelationPair {
    PairElement left;   // strictly revealed preferred
    PairElement right;
    std::vector<std::string> menu_ids;  // generating menu I u {j,k}

    auto operator<=>(const RelationPair& other) const {
        return std::tie(left, right) <=> std::tie(other.left, other.right);
    }
    bool operator==(const RelationPair& other) const {
        return left == other.left && right == other.right;
    }
};

class PairwiseRelation {
  public:
    void add(RelationPair pair);  // dedupes on (left, right); keeps first provenance
    bool contains(const PairElement& left, const PairElement& right) const;
    size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    const std::vector<RelationPair>& pairs() const { return pairs_; }

  private:
    std::vector<RelationPair> pairs_;  // kept sorted canonically
};

// Extracts >_C from every (q+1)-menu over the universe. The rule must be
// type-equivalent-valued on the whole family (validated first).
PairwiseRelation extract_pairwise_relation(const ChoiceRule& rule,
                                           const std::vector<ScoredIndividual>& universe,
                                           std::uint64_t max_enumeration = 1ull << 14,
                                           bool override_cap = false);

// Rows drawn from a relation (repetition allowed) whose left and right
// sides are permutations of each other, score-wise and (theta,n)-wise.
struct TverskyCycle {
    std::vector<RelationPair> rows;
};

bool validate_tversky_cycle(const TverskyCycle& cycle);

// Length-bounded depth-first search (length counts multiplicity). The exact
// feasibility solver is the authoritative unbounded test; this supplies
// short human-readable witnesses.
std::optional<TverskyCycle> find_tversky_cycle(const PairwiseRelation& relation, int max_len);

struct LpUtilities {
    std::vector<Rational> u;            // per score index
    std::vector<Rational> h;            // per (identity, n) flattened
    std::vector<Identity> identities;   // row order of h
    int capacity = 0;                   // n ranges over 1..capacity

    const Rational& h_of(size_t identity_index, int n) const {
        return h[identity_index * static_cast<size_t>(capacity) + static_cast<size_t>(n - 1)];
    }
};

struct LpFeasibilityResult {
    bool feasible = false;
    std::optional<LpUtilities> utilities;
    // Infeasible and no monotonicity rows involved: an exact certificate,
    // scaled to integers and expanded into a Tversky cycle.
    std::optional<TverskyCycle> certificate;
};

// Decides feasibility of {u(s)+h(d) >= u(s')+h(d')+1 per pair}, plus
// {u(s_{i+1}) >= u(s_i)+1} when monotone_u, in exact rational arithmetic.
LpFeasibilityResult lp_feasibility(const PairwiseRelation& relation, size_t score_count,
                                   const std::vector<Identity>& identities, int capacity,
                                   bool monotone_u);

// Builds the integer-multiplicity cycle behind a Farkas certificate of the
// pure (monotone_u = false) system.
TverskyCycle cycle_from_farkas(const PairwiseRelation& relation,
                               const std::vector<Rational>& farkas);

}  // namespace divaudit
