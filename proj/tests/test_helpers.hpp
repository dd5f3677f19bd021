#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "divaudit/model.hpp"
#include "divaudit/preference.hpp"
#include "divaudit/rules.hpp"

namespace testutil {

using namespace divaudit;

inline DimensionSchema schema_2x2() {
    return DimensionSchema({Dimension{"d1", {"1", "2"}}, Dimension{"d2", {"1", "2"}}});
}

inline DimensionSchema schema_1d(std::vector<std::string> groups = {"a", "b"}) {
    return DimensionSchema({Dimension{"g", std::move(groups)}});
}

inline ScoreSet scores_n(int n) {
    std::vector<Rational> values;
    for (int i = 1; i <= n; ++i) values.emplace_back(i);
    return ScoreSet(values);
}

inline ScoredIndividual ind(std::string id, Identity identity, ScoreIndex score) {
    return ScoredIndividual{std::move(id), std::move(identity), score};
}

// Brute-force oracle for >_S: search all identity-preserving bijections for
// one that is weakly score-improving with a strict step.
inline bool score_dominates_oracle(const TypeProfile& a, const TypeProfile& b) {
    if (a.size() != b.size()) return false;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::vector<size_t> perm(eb.size());
    std::iota(perm.begin(), perm.end(), size_t{0});
    bool any = false;
    do {
        bool ok = true, strict = false;
        for (size_t i = 0; i < ea.size() && ok; ++i) {
            const auto& x = ea[i];
            const auto& y = eb[perm[i]];
            if (x.identity != y.identity || x.score < y.score) ok = false;
            if (ok && x.score > y.score) strict = true;
        }
        if (ok && strict) any = true;
    } while (!any && std::next_permutation(perm.begin(), perm.end()));
    return any;
}

// Brute-force oracle for >_P.
inline bool privilege_dominates_oracle(const TypeProfile& a, const TypeProfile& b,
                                       const PrivilegeSpec& privilege) {
    if (a == b || a.size() != b.size()) return false;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::vector<size_t> perm(eb.size());
    std::iota(perm.begin(), perm.end(), size_t{0});
    do {
        bool ok = true;
        for (size_t i = 0; i < ea.size() && ok; ++i) {
            const auto& x = ea[i];
            const auto& y = eb[perm[i]];
            if (x.score != y.score) ok = false;
            for (size_t l = 0; ok && l < x.identity.size(); ++l) {
                if (x.identity[l] != y.identity[l] &&
                    x.identity[l] != privilege.privileged[l]) {
                    ok = false;
                }
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

// All profiles of size <= max_size over the given types (with repetition).
inline std::vector<TypeProfile> all_profiles(const std::vector<TypeEntry>& types, int max_size) {
    std::vector<TypeProfile> out;
    std::vector<TypeEntry> current;
    std::function<void(size_t, int)> walk = [&](size_t t, int budget) {
        if (t == types.size()) {
            out.push_back(TypeProfile::from_entries(current));
            return;
        }
        for (int take = 0; take <= budget; ++take) {
            for (int x = 0; x < take; ++x) current.push_back(types[t]);
            walk(t + 1, budget - take);
            for (int x = 0; x < take; ++x) current.pop_back();
        }
    };
    walk(0, max_size);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Random complete preorder over the given profiles: a shuffle plus random
// class boundaries.
inline PreferenceTable random_preorder(const std::vector<TypeProfile>& domain,
                                       std::mt19937_64& rng) {
    std::vector<TypeProfile> shuffled = domain;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<std::vector<TypeProfile>> classes;
    std::bernoulli_distribution new_class(0.6);
    for (const auto& profile : shuffled) {
        if (classes.empty() || new_class(rng)) classes.emplace_back();
        classes.back().push_back(profile);
    }
    return PreferenceTable::from_classes(std::move(classes));
}

}  // namespace testutil
