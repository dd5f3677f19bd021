#include "divaudit/audits.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <tuple>

#include "divaudit/revealed.hpp"

namespace divaudit {

namespace {

// Nonempty sub-multisets of a profile, deduped, in canonical order.
std::vector<TypeProfile> submultisets(const TypeProfile& profile) {
    const auto& entries = profile.entries();
    std::set<TypeProfile> seen;
    size_t count = entries.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << count); ++mask) {
        std::vector<TypeEntry> picked;
        for (size_t i = 0; i < count; ++i) {
            if (mask >> i & 1) picked.push_back(entries[i]);
        }
        seen.insert(TypeProfile::from_entries(std::move(picked)));
    }
    return {seen.begin(), seen.end()};
}

// Concrete ids realizing `wanted` inside the mask's menu, smallest ids first.
std::vector<std::string> realize_ids(const std::vector<ScoredIndividual>& universe, MenuMask mask,
                                     const TypeProfile& wanted) {
    auto menu = menu_from_mask(universe, mask);
    std::sort(menu.begin(), menu.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::vector<std::string> ids;
    std::vector<bool> used(menu.size(), false);
    for (const auto& entry : wanted.entries()) {
        for (size_t i = 0; i < menu.size(); ++i) {
            if (used[i] || menu[i].identity != entry.identity || menu[i].score != entry.score) {
                continue;
            }
            used[i] = true;
            ids.push_back(menu[i].id);
            break;
        }
    }
    return ids;
}

}  // namespace

std::optional<SubstitutesViolation> check_substitutes(const ChoiceRule& rule,
                                                      const std::vector<ScoredIndividual>& universe,
                                                      std::uint64_t max_enumeration,
                                                      bool override_cap) {
    MenuFamilyConfig config{universe, 1, -1, max_enumeration, override_cap};
    config.validate();
    RuleCache cache(rule, universe);
    const int q = rule.capacity();
    const size_t n = universe.size();

    // A violation needs |small| >= q (smaller menus are chosen whole) and
    // big a proper superset.
    MenuMask end = MenuMask{1} << n;
    for (MenuMask big = 1; big < end; ++big) {
        if (std::popcount(big) < q + 1) continue;
        const ChoiceResult& big_result = cache.at(big);
        for (MenuMask small = (big - 1) & big; small != 0; small = (small - 1) & big) {
            if (std::popcount(small) < q) continue;
            TypeProfile small_profile = canonical_profile(menu_from_mask(universe, small),
                                                          rule.schema());
            const ChoiceResult* small_result = nullptr;
            for (const auto& chosen : big_result.chosen) {
                for (const auto& kept : submultisets(chosen)) {
                    if (!kept.submultiset_of(small_profile)) continue;
                    if (!small_result) small_result = &cache.at(small);
                    bool survives = false;
                    for (const auto& small_chosen : small_result->chosen) {
                        if (kept.submultiset_of(small_chosen)) {
                            survives = true;
                            break;
                        }
                    }
                    if (survives) continue;
                    SubstitutesViolation v;
                    v.big_menu = big;
                    v.small_menu = small;
                    v.big_menu_ids = ids_from_mask(universe, big);
                    v.small_menu_ids = ids_from_mask(universe, small);
                    v.kept = kept;
                    v.kept_ids = realize_ids(universe, small, kept);
                    v.chosen_from_big = chosen;
                    v.small_menu_choices = small_result->chosen;
                    return v;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<GrossSubstitutesViolation> check_gross_substitutes(
    const ChoiceRule& rule, const std::vector<ScoredIndividual>& universe, int max_lowered,
    std::uint64_t max_enumeration, bool override_cap) {
    MenuFamilyConfig config{universe, 1, -1, max_enumeration, override_cap};
    config.validate();
    RuleCache cache(rule, universe);
    const int q = rule.capacity();
    const size_t n = universe.size();

    // Distinct perturbation instances up to type data; anonymity makes
    // repeats redundant.
    std::set<std::tuple<MenuMask, TypeProfile, TypeProfile>> visited;

    MenuMask end = MenuMask{1} << n;
    for (MenuMask menu_mask = 1; menu_mask < end; ++menu_mask) {
        if (std::popcount(menu_mask) < q + 1) continue;
        const ChoiceResult& result = cache.at(menu_mask);
        auto menu = menu_from_mask(universe, menu_mask);
        for (const auto& chosen : result.chosen) {
            const auto& witness_ids = result.witnesses.at(chosen);
            std::vector<const ScoredIndividual*> witness;
            for (const auto& id : witness_ids) {
                for (const auto& ind : menu) {
                    if (ind.id == id) witness.push_back(&ind);
                }
            }
            for (std::uint64_t kmask = 1; kmask < (std::uint64_t{1} << witness.size()); ++kmask) {
                std::vector<ScoredIndividual> kept_members;
                for (size_t i = 0; i < witness.size(); ++i) {
                    if (kmask >> i & 1) kept_members.push_back(*witness[i]);
                }
                TypeProfile kept = canonical_profile(kept_members, rule.schema());
                std::set<std::string> kept_ids(
                    [&] {
                        std::set<std::string> s;
                        for (const auto& m : kept_members) s.insert(m.id);
                        return s;
                    }());
                std::vector<size_t> rest;
                for (size_t i = 0; i < menu.size(); ++i) {
                    if (!kept_ids.count(menu[i].id)) rest.push_back(i);
                }
                // Choose <= max_lowered individuals to strictly lower.
                int limit = std::min<int>(max_lowered, static_cast<int>(rest.size()));
                std::vector<size_t> lowered_positions;
                bool found = false;
                GrossSubstitutesViolation violation;

                std::function<void(size_t, std::vector<ScoredIndividual>&)> test_assignments =
                    [&](size_t li, std::vector<ScoredIndividual>& perturbed) {
                        if (found) return;
                        if (li == lowered_positions.size()) {
                            TypeProfile perturbed_profile =
                                canonical_profile(perturbed, rule.schema());
                            if (!visited.insert({menu_mask, kept, perturbed_profile}).second) {
                                return;
                            }
                            ChoiceResult perturbed_result = rule.apply(perturbed);
                            for (const auto& p : perturbed_result.chosen) {
                                if (kept.submultiset_of(p)) return;
                            }
                            violation = GrossSubstitutesViolation{};
                            violation.menu = menu_mask;
                            violation.menu_ids = ids_from_mask(universe, menu_mask);
                            violation.chosen = chosen;
                            violation.kept = kept;
                            violation.kept_ids = {kept_ids.begin(), kept_ids.end()};
                            for (size_t pos : lowered_positions) {
                                const auto& original = menu[pos];
                                for (const auto& ind : perturbed) {
                                    if (ind.id == original.id) {
                                        violation.lowered[ind.id] =
                                            rule.scores().value(ind.score);
                                    }
                                }
                            }
                            violation.perturbed_choices = perturbed_result.chosen;
                            found = true;
                            return;
                        }
                        size_t pos = lowered_positions[li];
                        for (ScoreIndex s = menu[pos].score - 1; s >= 0; --s) {
                            for (auto& ind : perturbed) {
                                if (ind.id == menu[pos].id) ind.score = s;
                            }
                            test_assignments(li + 1, perturbed);
                            if (found) return;
                        }
                        for (auto& ind : perturbed) {
                            if (ind.id == menu[pos].id) ind.score = menu[pos].score;
                        }
                    };

                std::function<void(size_t, int)> pick_lowered = [&](size_t start, int remaining) {
                    if (found) return;
                    if (!lowered_positions.empty()) {
                        std::vector<ScoredIndividual> perturbed = menu;
                        test_assignments(0, perturbed);
                        if (found) return;
                    }
                    if (remaining == 0) return;
                    for (size_t i = start; i < rest.size(); ++i) {
                        if (menu[rest[i]].score == 0) continue;  // cannot lower further
                        lowered_positions.push_back(rest[i]);
                        pick_lowered(i + 1, remaining - 1);
                        lowered_positions.pop_back();
                        if (found) return;
                    }
                };
                pick_lowered(0, limit);
                if (found) return violation;
            }
        }
    }
    return std::nullopt;
}

std::optional<WgrViolation> check_wg_responsiveness(const ChoiceRule& rule,
                                                    const std::vector<ScoredIndividual>& universe,
                                                    std::uint64_t max_enumeration,
                                                    bool override_cap) {
    MenuFamilyConfig config{universe, 1, -1, max_enumeration, override_cap};
    config.validate();
    RuleCache cache(rule, universe);
    const int q = rule.capacity();
    const size_t n = universe.size();

    MenuMask end = MenuMask{1} << n;
    for (MenuMask menu_mask = 1; menu_mask < end; ++menu_mask) {
        if (std::popcount(menu_mask) < q + 1) continue;
        auto menu = menu_from_mask(universe, menu_mask);
        TypeProfile menu_profile = canonical_profile(menu, rule.schema());
        const ChoiceResult& result = cache.at(menu_mask);
        for (const auto& high : menu) {
            for (const auto& low : menu) {
                if (high.identity != low.identity || high.score <= low.score) continue;
                TypeEntry t_high{high.identity, high.score};
                TypeEntry t_low{low.identity, low.score};
                for (const auto& chosen : result.chosen) {
                    if (!chosen.contains(t_low)) continue;
                    TypeProfile with_high = chosen.minus(t_low).plus(t_high);
                    if (result.contains_profile(with_high)) continue;
                    // The kept part must be realizable avoiding both i and j.
                    TypeProfile kept = chosen.minus(t_low);
                    TypeProfile pool = menu_profile.minus(t_high).minus(t_low);
                    if (!kept.submultiset_of(pool)) continue;
                    WgrViolation v;
                    v.menu = menu_mask;
                    v.menu_ids = ids_from_mask(universe, menu_mask);
                    v.high_id = high.id;
                    v.low_id = low.id;
                    v.chosen_with_low = chosen;
                    v.rejected_with_high = with_high;
                    // Concrete kept ids drawn from the menu minus {i, j}.
                    std::vector<ScoredIndividual> others;
                    for (const auto& ind : menu) {
                        if (ind.id != high.id && ind.id != low.id) others.push_back(ind);
                    }
                    std::sort(others.begin(), others.end(),
                              [](const auto& a, const auto& b) { return a.id < b.id; });
                    std::vector<bool> used(others.size(), false);
                    for (const auto& entry : kept.entries()) {
                        for (size_t i = 0; i < others.size(); ++i) {
                            if (used[i] || others[i].identity != entry.identity ||
                                others[i].score != entry.score) {
                                continue;
                            }
                            used[i] = true;
                            v.kept_ids.push_back(others[i].id);
                            break;
                        }
                    }
                    return v;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::pair<TypeProfile, TypeProfile>> intersectionality_witness(
    const PreferenceTable& pref, const DimensionSchema& schema, size_t score_count) {
    // Bucket the domain by marginal distribution (plus score multiset when
    // several scores are in play); every bucket must be one indifference
    // class.
    std::map<std::pair<MarginalDistribution, std::vector<ScoreIndex>>,
             std::pair<TypeProfile, int>>
        buckets;
    for (const auto& profile : pref.domain()) {
        auto marginal = marginal_distribution(profile, schema);
        std::vector<ScoreIndex> score_key;
        if (score_count > 1) score_key = profile.score_multiset();
        auto key = std::make_pair(std::move(marginal), std::move(score_key));
        int rank = pref.require_rank(profile);
        auto [it, inserted] = buckets.emplace(key, std::make_pair(profile, rank));
        if (!inserted && it->second.second != rank) {
            return std::make_pair(it->second.first, profile);
        }
    }
    return std::nullopt;
}

bool pref_ignores_intersectionality(const PreferenceTable& pref, const DimensionSchema& schema,
                                    size_t score_count) {
    return !intersectionality_witness(pref, schema, score_count).has_value();
}

ValuesDiversityResult pref_values_diversity(const PreferenceTable& pref, int q,
                                            const DimensionSchema& schema) {
    ValuesDiversityResult out;
    for (size_t l = 0; l < schema.dimension_count(); ++l) {
        if (static_cast<int>(schema.group_count(l)) > q) out.vacuous = true;
    }
    int best_rank = -1;
    std::vector<TypeProfile> top;
    for (const auto& profile : pref.domain()) {
        if (static_cast<int>(profile.size()) != q) continue;
        int rank = pref.require_rank(profile);
        if (best_rank < 0 || rank < best_rank) {
            best_rank = rank;
            top.clear();
        }
        if (rank == best_rank) top.push_back(profile);
    }
    if (best_rank < 0) {
        throw PreconditionError("preference domain contains no size-q profiles");
    }
    for (const auto& profile : top) {
        if (marginal_distribution(profile, schema).at_boundary()) {
            out.boundary_top = profile;
            out.values_diversity = false;
            return out;
        }
    }
    out.values_diversity = true;
    return out;
}

namespace {

ScoreIndex single_domain_score(const PreferenceTable& pref) {
    std::optional<ScoreIndex> score;
    for (const auto& profile : pref.domain()) {
        for (const auto& entry : profile.entries()) {
            if (!score) {
                score = entry.score;
            } else if (*score != entry.score) {
                throw PreconditionError(
                    "intersectionality counterexample requires a single score level");
            }
        }
    }
    return score.value_or(0);
}

std::vector<ScoredIndividual> label_members(const std::vector<Identity>& identities,
                                            ScoreIndex score, const std::string& prefix) {
    std::vector<ScoredIndividual> out;
    for (size_t i = 0; i < identities.size(); ++i) {
        out.push_back(ScoredIndividual{prefix + std::to_string(i + 1), identities[i], score});
    }
    return out;
}

// Verifies the specific triple directly: kept survives in the big menu and
// dies in the small one.
std::optional<SubstitutesViolation> validate_removal(const ChoiceRule& rule,
                                                     const std::vector<ScoredIndividual>& universe,
                                                     const std::string& removed_id,
                                                     const TypeProfile& kept) {
    MenuMask big = (MenuMask{1} << universe.size()) - 1;
    MenuMask small = big;
    for (size_t i = 0; i < universe.size(); ++i) {
        if (universe[i].id == removed_id) small &= ~(MenuMask{1} << i);
    }
    ChoiceResult big_result = rule.apply(universe);
    const TypeProfile* chosen_with_kept = nullptr;
    for (const auto& chosen : big_result.chosen) {
        if (kept.submultiset_of(chosen)) chosen_with_kept = &chosen;
    }
    if (!chosen_with_kept) return std::nullopt;
    ChoiceResult small_result = rule.apply(menu_from_mask(universe, small));
    for (const auto& chosen : small_result.chosen) {
        if (kept.submultiset_of(chosen)) return std::nullopt;
    }
    SubstitutesViolation v;
    v.big_menu = big;
    v.small_menu = small;
    v.big_menu_ids = ids_from_mask(universe, big);
    v.small_menu_ids = ids_from_mask(universe, small);
    v.kept = kept;
    v.kept_ids = realize_ids(universe, small, kept);
    v.chosen_from_big = *chosen_with_kept;
    v.small_menu_choices = small_result.chosen;
    return v;
}

}  // namespace

IntersectionalityCounterexample intersectionality_counterexample(const PreferenceTable& pref,
                                                                 int q,
                                                                 const DimensionSchema& schema) {
    if (schema.dimension_count() < 2) {
        throw PreconditionError("intersectionality requires at least 2 dimensions");
    }
    ScoreIndex score = single_domain_score(pref);
    if (!pref_ignores_intersectionality(pref, schema, 1)) {
        throw PreconditionError("preference considers intersectionality");
    }
    if (!pref_values_diversity(pref, q, schema).values_diversity) {
        throw PreconditionError("preference does not value diversity");
    }

    RuleSpec spec;
    spec.rule = PreferenceMaximizerRule{pref};
    spec.capacity = q;

    // J: q individuals of every identity at the single score level.
    std::vector<Identity> j_identities;
    for (const auto& ident : schema.all_identities()) {
        for (int i = 0; i < q; ++i) j_identities.push_back(ident);
    }
    auto j_universe = label_members(j_identities, score, "j");

    if (schema.dimension_count() == 2) {
        // Build a ScoreSet wide enough for the profile's score index.
        std::vector<Rational> score_values;
        for (ScoreIndex s = 0; s <= score; ++s) score_values.emplace_back(s + 1);
        ChoiceRule rule(spec, schema, ScoreSet(std::move(score_values)));

        ChoiceResult top = rule.apply(j_universe);
        // Optimal marginals; d1 maximizes the dim-0 group-0 count, then the
        // dim-1 group-0 count, ties resolved canonically.
        std::set<MarginalDistribution> optimal;
        for (const auto& profile : top.chosen) {
            optimal.insert(marginal_distribution(profile, rule.schema()));
        }
        int m11 = -1;
        for (const auto& d : optimal) m11 = std::max(m11, d.counts[0][0]);
        std::optional<MarginalDistribution> d_star;
        int m21 = -1;
        for (const auto& d : optimal) {
            if (d.counts[0][0] != m11) continue;
            if (d.counts[1][0] > m21) {
                m21 = d.counts[1][0];
                d_star = d;
            }
        }

        std::vector<Identity> members;       // I_11 or I_12
        std::vector<Identity> complement;    // I'
        std::optional<Identity> k_identity;  // removed individual's identity
        bool case_one = m11 <= m21;

        auto fill_pairs = [&](std::vector<int> dim0_left, std::vector<int> dim1_left,
                              std::vector<Identity>& out) {
            // Pair remaining per-dimension deficits into concrete identities
            // until either side runs out.
            while (true) {
                size_t g0 = dim0_left.size(), g1 = dim1_left.size();
                for (size_t g = 0; g < dim0_left.size(); ++g) {
                    if (dim0_left[g] > 0) {
                        g0 = g;
                        break;
                    }
                }
                for (size_t g = 0; g < dim1_left.size(); ++g) {
                    if (dim1_left[g] > 0) {
                        g1 = g;
                        break;
                    }
                }
                if (g0 == dim0_left.size() || g1 == dim1_left.size()) break;
                out.push_back(
                    Identity{static_cast<GroupIndex>(g0), static_cast<GroupIndex>(g1)});
                --dim0_left[g0];
                --dim1_left[g1];
            }
        };

        if (case_one) {
            for (int i = 0; i < m11; ++i) members.push_back(Identity{0, 0});
            // First the dim-1 group-0 deficit with dim-0 groups != 0, then
            // fully off-group members; the latter supply k.
            std::vector<int> dim0_left = d_star->counts[0];
            std::vector<int> dim1_left = d_star->counts[1];
            dim0_left[0] -= m11;
            dim1_left[0] -= m11;
            std::vector<int> dim1_zero_only(dim1_left.size(), 0);
            dim1_zero_only[0] = dim1_left[0];
            std::vector<int> dim1_rest = dim1_left;
            dim1_rest[0] = 0;
            // batch1 covers the dim-1 group-0 deficit; batch2 members are
            // off-group in both dimensions and supply k.
            std::vector<Identity> batch1, batch2;
            fill_pairs(dim0_left, dim1_zero_only, batch1);
            for (const auto& ident : batch1) --dim0_left[static_cast<size_t>(ident[0])];
            fill_pairs(dim0_left, dim1_rest, batch2);
            if (batch2.empty()) {
                throw PreconditionError("no off-group complement member available");
            }
            k_identity = batch2.front();
            complement = batch1;
            complement.insert(complement.end(), batch2.begin(), batch2.end());
        } else {
            int extra = m11 - m21;
            for (int i = 0; i < m21; ++i) members.push_back(Identity{0, 0});
            std::vector<int> dim1_budget = d_star->counts[1];
            dim1_budget[0] = 0;
            int placed = 0;
            while (placed < extra) {
                bool progressed = false;
                for (size_t g1 = 1; g1 < dim1_budget.size() && placed < extra; ++g1) {
                    if (dim1_budget[g1] > 0) {
                        members.push_back(Identity{0, static_cast<GroupIndex>(g1)});
                        --dim1_budget[g1];
                        ++placed;
                        progressed = true;
                    }
                }
                if (!progressed) {
                    throw PreconditionError("cannot place off-group members for the construction");
                }
            }
            std::vector<int> dim0_left = d_star->counts[0];
            std::vector<int> dim1_left = d_star->counts[1];
            dim0_left[0] -= m11;
            for (const auto& ident : members) --dim1_left[static_cast<size_t>(ident[1])];
            fill_pairs(dim0_left, dim1_left, complement);
            if (complement.empty()) {
                throw PreconditionError("no complement member available");
            }
            k_identity = complement.front();
        }

        if (k_identity) {
            Identity k = *k_identity;
            Identity j_tilde, k_tilde;
            if (case_one) {
                j_tilde = Identity{0, k[1]};
                k_tilde = Identity{k[0], 0};
            } else {
                j_tilde = Identity{k[0], 0};
                k_tilde = Identity{0, k[1]};
            }
            std::vector<Identity> bar;
            bar.insert(bar.end(), members.begin(), members.end());
            bar.insert(bar.end(), complement.begin(), complement.end());
            bar.push_back(j_tilde);
            bar.push_back(k_tilde);
            auto universe = label_members(bar, score, "p");
            // The removed individual is the first complement member with
            // identity k (members come first, so index = |members| + offset).
            std::string removed_id;
            for (size_t i = members.size(); i < members.size() + complement.size(); ++i) {
                if (universe[i].identity == k) {
                    removed_id = universe[i].id;
                    break;
                }
            }
            std::vector<TypeEntry> kept_entries;
            for (const auto& ident : members) kept_entries.push_back(TypeEntry{ident, score});
            TypeProfile kept = TypeProfile::from_entries(std::move(kept_entries));
            if (auto v = validate_removal(rule, universe, removed_id, kept)) {
                return IntersectionalityCounterexample{universe, *v, true};
            }
        }
    }

    // Exhaustive fallback over J; a violation is guaranteed to exist there.
    std::vector<Rational> score_values;
    for (ScoreIndex s = 0; s <= score; ++s) score_values.emplace_back(s + 1);
    ChoiceRule rule(spec, schema, ScoreSet(std::move(score_values)));
    auto violation = check_substitutes(rule, j_universe, 1ull << j_universe.size(), true);
    if (!violation) {
        throw AuditError("internal inconsistency: no substitutes violation on the full universe");
    }
    return IntersectionalityCounterexample{j_universe, *violation, false};
}

std::variant<ScoreCanonicalization, UniformityFailure> canonicalize_scores(
    const PreferenceTable& pref, const DimensionSchema& schema, size_t score_count) {
    auto identities = schema.all_identities();
    auto singleton = [&](const Identity& theta, ScoreIndex s) {
        return TypeProfile::from_entries({TypeEntry{theta, s}});
    };
    for (const auto& theta : identities) {
        for (size_t s = 0; s < score_count; ++s) {
            if (!pref.contains(singleton(theta, static_cast<ScoreIndex>(s)))) {
                throw PreconditionError("preference domain must contain all singleton profiles");
            }
        }
    }

    // Uniform treatment: the singleton-induced order over scores must not
    // depend on the identity.
    const Identity& base = identities.front();
    for (const auto& theta : identities) {
        for (size_t a = 0; a < score_count; ++a) {
            for (size_t b = 0; b < score_count; ++b) {
                bool base_weak = pref.weakly_prefers(singleton(base, static_cast<ScoreIndex>(a)),
                                                     singleton(base, static_cast<ScoreIndex>(b)));
                bool theta_weak = pref.weakly_prefers(singleton(theta, static_cast<ScoreIndex>(a)),
                                                      singleton(theta, static_cast<ScoreIndex>(b)));
                if (base_weak && !theta_weak) {
                    UniformityFailure failure;
                    failure.theta_a = base;
                    failure.theta_b = theta;
                    failure.score_high = static_cast<ScoreIndex>(a);
                    failure.score_low = static_cast<ScoreIndex>(b);
                    return failure;
                }
            }
        }
    }

    // Peel indifference classes, best first, using the base identity.
    std::vector<ScoreIndex> order(score_count);
    for (size_t s = 0; s < score_count; ++s) order[s] = static_cast<ScoreIndex>(s);
    std::stable_sort(order.begin(), order.end(), [&](ScoreIndex a, ScoreIndex b) {
        return pref.require_rank(singleton(base, a)) < pref.require_rank(singleton(base, b));
    });
    std::vector<std::vector<ScoreIndex>> best_first;
    for (ScoreIndex s : order) {
        if (!best_first.empty() &&
            pref.indifferent(singleton(base, best_first.back().front()), singleton(base, s))) {
            best_first.back().push_back(s);
        } else {
            best_first.push_back({s});
        }
    }
    // New scores ascend in desirability: worst class gets index 0.
    std::vector<std::vector<ScoreIndex>> classes(best_first.rbegin(), best_first.rend());
    std::vector<ScoreIndex> new_index(score_count, 0);
    for (size_t c = 0; c < classes.size(); ++c) {
        for (ScoreIndex s : classes[c]) new_index[static_cast<size_t>(s)] = static_cast<int>(c);
    }

    auto relabel = [&](const TypeProfile& profile) {
        std::vector<TypeEntry> entries;
        for (const auto& e : profile.entries()) {
            entries.push_back(TypeEntry{e.identity, new_index[static_cast<size_t>(e.score)]});
        }
        return TypeProfile::from_entries(std::move(entries));
    };

    // Merging indifferent scores must not collide profiles the preference
    // distinguishes.
    std::map<TypeProfile, std::pair<TypeProfile, int>> relabeled_rank;
    std::vector<std::vector<TypeProfile>> new_classes(pref.class_count());
    for (const auto& profile : pref.domain()) {
        int rank = pref.require_rank(profile);
        TypeProfile mapped = relabel(profile);
        auto [it, inserted] = relabeled_rank.emplace(mapped, std::make_pair(profile, rank));
        if (!inserted) {
            if (it->second.second != rank) {
                UniformityFailure failure;
                failure.merge_conflict = std::make_pair(it->second.first, profile);
                return failure;
            }
            continue;
        }
        new_classes[static_cast<size_t>(rank)].push_back(mapped);
    }
    ScoreCanonicalization out;
    out.classes = std::move(classes);
    out.relabeled = PreferenceTable::from_classes(std::move(new_classes));
    return out;
}

}  // namespace divaudit
