#include "divaudit/pairwise.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <set>

#include "divaudit/menus.hpp"
#include "divaudit/revealed.hpp"

namespace divaudit {

void PairwiseRelation::add(RelationPair pair) {
    if (pair.left == pair.right) {
        throw std::logic_error("pairwise relation cannot relate an element to itself");
    }
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), pair);
    if (it != pairs_.end() && *it == pair) return;
    pairs_.insert(it, std::move(pair));
}

bool PairwiseRelation::contains(const PairElement& left, const PairElement& right) const {
    RelationPair probe{left, right, {}};
    auto it = std::lower_bound(pairs_.begin(), pairs_.end(), probe);
    return it != pairs_.end() && *it == probe;
}

PairwiseRelation extract_pairwise_relation(const ChoiceRule& rule,
                                           const std::vector<ScoredIndividual>& universe,
                                           std::uint64_t max_enumeration, bool override_cap) {
    MenuFamilyConfig config{universe, 1, -1, max_enumeration, override_cap};
    config.validate();
    RuleCache cache(rule, universe);
    const int q = rule.capacity();
    const size_t n = universe.size();
    MenuMask end = MenuMask{1} << n;

    // The standing assumption: one chosen type profile per menu. Menus
    // below capacity are trivially single-valued.
    for (MenuMask mask = 1; mask < end; ++mask) {
        if (std::popcount(mask) < q) continue;
        const ChoiceResult& result = cache.at(mask);
        if (result.chosen.size() > 1) {
            throw TypeFunctionalityError(
                "rule is not type-equivalent-valued on a menu of this universe",
                ids_from_mask(universe, mask));
        }
    }

    PairwiseRelation relation;
    for (MenuMask mask = 1; mask < end; ++mask) {
        if (std::popcount(mask) != q + 1) continue;
        const ChoiceResult& result = cache.at(mask);
        if (result.chosen.empty()) continue;
        const TypeProfile& chosen = result.chosen.front();
        auto menu = menu_from_mask(universe, mask);
        TypeProfile menu_profile = canonical_profile(menu, rule.schema());

        for (const auto& dropped : menu) {  // k: I u {k} not chosen
            TypeEntry k_entry{dropped.identity, dropped.score};
            TypeProfile without_k = menu_profile.minus(k_entry);
            if (!(without_k == chosen)) continue;
            for (const auto& kept : menu) {  // j: I u {j} chosen
                if (kept.id == dropped.id) continue;
                TypeEntry j_entry{kept.identity, kept.score};
                TypeProfile without_j = menu_profile.minus(j_entry);
                if (without_j == chosen) continue;
                RelationPair pair;
                pair.left = PairElement{kept.score, kept.identity,
                                        without_k.group_count(kept.identity)};
                pair.right = PairElement{dropped.score, dropped.identity,
                                         without_j.group_count(dropped.identity)};
                pair.menu_ids = ids_from_mask(universe, mask);
                relation.add(std::move(pair));
            }
        }
    }
    return relation;
}

bool validate_tversky_cycle(const TverskyCycle& cycle) {
    if (cycle.rows.empty()) return false;
    std::multiset<ScoreIndex> left_scores, right_scores;
    std::multiset<std::pair<Identity, int>> left_d, right_d;
    for (const auto& row : cycle.rows) {
        left_scores.insert(row.left.score);
        right_scores.insert(row.right.score);
        left_d.insert({row.left.identity, row.left.count});
        right_d.insert({row.right.identity, row.right.count});
    }
    return left_scores == right_scores && left_d == right_d;
}

namespace {

struct Imbalance {
    std::map<ScoreIndex, int> scores;
    std::map<std::pair<Identity, int>, int> ds;

    void apply(const RelationPair& row, int sign) {
        auto bump = [](auto& m, const auto& key, int delta) {
            auto it = m.emplace(key, 0).first;
            it->second += delta;
            if (it->second == 0) m.erase(it);
        };
        bump(scores, row.left.score, sign);
        bump(scores, row.right.score, -sign);
        bump(ds, std::make_pair(row.left.identity, row.left.count), sign);
        bump(ds, std::make_pair(row.right.identity, row.right.count), -sign);
    }

    bool balanced() const { return scores.empty() && ds.empty(); }

    int lower_bound_steps() const {
        // One row moves each L1 norm by at most 2.
        int s = 0, d = 0;
        for (const auto& [k, v] : scores) s += std::abs(v);
        for (const auto& [k, v] : ds) d += std::abs(v);
        return std::max((s + 1) / 2, (d + 1) / 2);
    }
};

bool dfs_cycle(const std::vector<RelationPair>& rows, size_t min_row, Imbalance& imbalance,
               std::vector<RelationPair>& stack, int remaining) {
    if (!stack.empty() && imbalance.balanced()) return true;
    if (remaining == 0) return false;
    if (imbalance.lower_bound_steps() > remaining) return false;
    // Rows join as a multiset: enforce non-decreasing row indices.
    for (size_t i = min_row; i < rows.size(); ++i) {
        imbalance.apply(rows[i], 1);
        stack.push_back(rows[i]);
        if (dfs_cycle(rows, i, imbalance, stack, remaining - 1)) return true;
        stack.pop_back();
        imbalance.apply(rows[i], -1);
    }
    return false;
}

}  // namespace

std::optional<TverskyCycle> find_tversky_cycle(const PairwiseRelation& relation, int max_len) {
    if (max_len < 2) {
        throw ConfigError("tversky cycle search needs max_len >= 2");
    }
    // Iterative deepening returns a shortest witness.
    for (int depth = 2; depth <= max_len; ++depth) {
        Imbalance imbalance;
        std::vector<RelationPair> stack;
        if (dfs_cycle(relation.pairs(), 0, imbalance, stack, depth)) {
            TverskyCycle cycle{stack};
            return cycle;
        }
    }
    return std::nullopt;
}

LpFeasibilityResult lp_feasibility(const PairwiseRelation& relation, size_t score_count,
                                   const std::vector<Identity>& identities, int capacity,
                                   bool monotone_u) {
    if (capacity < 1) throw ConfigError("capacity must be positive");
    std::map<Identity, size_t> identity_index;
    for (size_t i = 0; i < identities.size(); ++i) identity_index.emplace(identities[i], i);

    const size_t u_vars = score_count;
    const size_t h_vars = identities.size() * static_cast<size_t>(capacity);
    LinearFeasibilitySystem system;
    system.num_vars = u_vars + h_vars;

    auto h_col = [&](const PairElement& e) {
        auto it = identity_index.find(e.identity);
        if (it == identity_index.end()) {
            throw ConfigError("relation element references an unknown identity");
        }
        if (e.count < 1 || e.count > capacity) {
            throw ConfigError("relation element count outside 1..q");
        }
        return u_vars + it->second * static_cast<size_t>(capacity) +
               static_cast<size_t>(e.count - 1);
    };

    for (const auto& pair : relation.pairs()) {
        std::vector<Rational> row(system.num_vars, Rational(0));
        row[static_cast<size_t>(pair.left.score)] += 1;
        row[h_col(pair.left)] += 1;
        row[static_cast<size_t>(pair.right.score)] -= 1;
        row[h_col(pair.right)] -= 1;
        system.add_ge(std::move(row), Rational(1));
    }
    size_t pair_rows = system.rows.size();
    if (monotone_u) {
        for (size_t s = 0; s + 1 < score_count; ++s) {
            std::vector<Rational> row(system.num_vars, Rational(0));
            row[s + 1] += 1;
            row[s] -= 1;
            system.add_ge(std::move(row), Rational(1));
        }
    }

    FeasibilityOutcome outcome = solve_linear_feasibility(system);
    LpFeasibilityResult result;
    result.feasible = outcome.feasible;
    if (outcome.feasible) {
        LpUtilities utilities;
        utilities.identities = identities;
        utilities.capacity = capacity;
        utilities.u.assign(outcome.point.begin(),
                           outcome.point.begin() + static_cast<long>(u_vars));
        utilities.h.assign(outcome.point.begin() + static_cast<long>(u_vars),
                           outcome.point.end());
        result.utilities = std::move(utilities);
    } else if (!monotone_u) {
        std::vector<Rational> farkas(outcome.farkas.begin(),
                                     outcome.farkas.begin() + static_cast<long>(pair_rows));
        result.certificate = cycle_from_farkas(relation, farkas);
    }
    return result;
}

TverskyCycle cycle_from_farkas(const PairwiseRelation& relation,
                               const std::vector<Rational>& farkas) {
    if (farkas.size() != relation.size()) {
        throw std::logic_error("certificate length does not match the relation");
    }
    BigInt lcm = 1;
    for (const auto& y : farkas) {
        BigInt den = denominator(y);
        lcm = lcm / gcd(lcm, den) * den;
    }
    TverskyCycle cycle;
    for (size_t i = 0; i < farkas.size(); ++i) {
        Rational scaled = farkas[i] * lcm;
        if (scaled < 0) throw std::logic_error("negative multiplier in Farkas certificate");
        BigInt times = numerator(scaled);
        for (BigInt t = 0; t < times; ++t) cycle.rows.push_back(relation.pairs()[i]);
    }
    if (!validate_tversky_cycle(cycle)) {
        throw std::logic_error("Farkas certificate failed the permutation check");
    }
    return cycle;
}

}  // namespace divaudit
