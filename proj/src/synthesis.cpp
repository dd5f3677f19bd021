#include "divaudit/synthesis.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "divaudit/menus.hpp"
#include "divaudit/revealed.hpp"

namespace divaudit {

Rational SeparableUtility::evaluate(const TypeProfile& profile) const {
    if (static_cast<int>(profile.size()) > capacity) {
        throw SchemaError("profile larger than the utility's capacity");
    }
    Rational total(0);
    std::map<Identity, int> counts;
    for (const auto& entry : profile.entries()) {
        if (entry.score < 0 || static_cast<size_t>(entry.score) >= u.size()) {
            throw SchemaError("profile entry score outside the utility's score table");
        }
        total += u[static_cast<size_t>(entry.score)];
        ++counts[entry.identity];
    }
    for (const auto& [identity, n] : counts) {
        auto it = h_cumulative.find(identity);
        if (it == h_cumulative.end()) {
            throw SchemaError("profile entry identity outside the utility's tables");
        }
        total += it->second.at(static_cast<size_t>(n));
    }
    return total;
}

std::map<Identity, int> guaranteed_counts(const ChoiceRule& rule, size_t menu_size_cap) {
    const auto& schema = rule.schema();
    const auto& scores = rule.scores();
    const int q = rule.capacity();
    auto identities = schema.all_identities();

    size_t menu_size = static_cast<size_t>(q) * scores.size() * (identities.size() - 1) +
                       static_cast<size_t>(q);
    if (menu_size > menu_size_cap) {
        throw CapExceededError("guaranteed-count menu exceeds the size cap", menu_size,
                               menu_size_cap);
    }

    std::map<Identity, int> out;
    for (const auto& theta : identities) {
        std::vector<ScoredIndividual> menu;
        int serial = 0;
        for (const auto& other : identities) {
            if (other == theta) continue;
            for (size_t s = 0; s < scores.size(); ++s) {
                for (int i = 0; i < q; ++i) {
                    menu.push_back(ScoredIndividual{"gc" + std::to_string(serial++), other,
                                                    static_cast<ScoreIndex>(s)});
                }
            }
        }
        for (int i = 0; i < q; ++i) {
            menu.push_back(ScoredIndividual{"gc" + std::to_string(serial++), theta, 0});
        }
        ChoiceResult result = rule.apply(menu);
        if (result.chosen.size() != 1) {
            throw PreconditionError("rule is not type-functional on the guaranteed-count menu");
        }
        out[theta] = result.chosen.front().group_count(theta);
    }
    return out;
}

namespace {

// Pairs from one menu of size q+1, per the revealed relation's definition.
void extract_pairs_from_menu(const ChoiceRule& rule, const std::vector<ScoredIndividual>& menu,
                             PairwiseRelation& relation) {
    if (static_cast<int>(menu.size()) != rule.capacity() + 1) {
        throw std::logic_error("pair extraction expects a menu of size q+1");
    }
    ChoiceResult result = rule.apply(menu);
    if (result.chosen.size() != 1) {
        std::vector<std::string> ids;
        for (const auto& ind : menu) ids.push_back(ind.id);
        throw TypeFunctionalityError("rule is not type-equivalent-valued on a witness menu", ids);
    }
    const TypeProfile& chosen = result.chosen.front();
    TypeProfile menu_profile = canonical_profile(menu, rule.schema());
    std::vector<std::string> ids;
    for (const auto& ind : menu) ids.push_back(ind.id);
    std::sort(ids.begin(), ids.end());

    for (const auto& dropped : menu) {
        TypeEntry k_entry{dropped.identity, dropped.score};
        if (!(menu_profile.minus(k_entry) == chosen)) continue;
        for (const auto& kept : menu) {
            if (kept.id == dropped.id) continue;
            TypeEntry j_entry{kept.identity, kept.score};
            TypeProfile without_j = menu_profile.minus(j_entry);
            if (without_j == chosen) continue;
            RelationPair pair;
            pair.left =
                PairElement{kept.score, kept.identity,
                            menu_profile.minus(k_entry).group_count(kept.identity)};
            pair.right =
                PairElement{dropped.score, dropped.identity,
                            without_j.group_count(dropped.identity)};
            pair.menu_ids = ids;
            relation.add(std::move(pair));
        }
    }
}

SynthesisFailure make_failure(SynthesisFailure::Kind kind, std::string message) {
    SynthesisFailure f;
    f.kind = kind;
    f.message = std::move(message);
    return f;
}

}  // namespace

SynthesisResult synthesize_separable(const ChoiceRule& rule,
                                     const std::vector<ScoredIndividual>& universe,
                                     std::uint64_t max_enumeration, bool override_cap,
                                     size_t guaranteed_cap) {
    SynthesisResult out;
    const auto& schema = rule.schema();
    const auto& scores = rule.scores();
    const int q = rule.capacity();
    auto identities = schema.all_identities();

    try {
        if (auto violation =
                check_substitutes(rule, universe, max_enumeration, override_cap)) {
            auto failure = make_failure(SynthesisFailure::Kind::Substitutes,
                                        "substitutes condition fails");
            failure.substitutes = std::move(violation);
            out.failure = std::move(failure);
            return out;
        }
        if (auto violation =
                check_wg_responsiveness(rule, universe, max_enumeration, override_cap)) {
            auto failure = make_failure(SynthesisFailure::Kind::WgResponsiveness,
                                        "within-group responsiveness fails");
            failure.wgr = std::move(violation);
            out.failure = std::move(failure);
            return out;
        }
        out.relation = extract_pairwise_relation(rule, universe, max_enumeration, override_cap);
    } catch (const CapExceededError& e) {
        out.failure = make_failure(SynthesisFailure::Kind::CapExceeded, e.what());
        return out;
    } catch (const TypeFunctionalityError& e) {
        out.failure = make_failure(SynthesisFailure::Kind::Precondition, e.what());
        return out;
    } catch (const TieError& e) {
        out.failure = make_failure(SynthesisFailure::Kind::Precondition, e.what());
        return out;
    }

    auto pure = lp_feasibility(out.relation, scores.size(), identities, q, false);
    if (!pure.feasible) {
        auto failure = make_failure(SynthesisFailure::Kind::Acyclicity,
                                    "revealed pairwise relation has a cycle");
        int bound = std::min<int>(static_cast<int>(out.relation.size()), 6);
        if (bound >= 2) failure.cycle = find_tversky_cycle(out.relation, bound);
        if (!failure.cycle) failure.cycle = pure.certificate;
        out.failure = std::move(failure);
        return out;
    }

    std::map<Identity, int> counts;
    try {
        counts = guaranteed_counts(rule, guaranteed_cap);
    } catch (const CapExceededError& e) {
        out.failure = make_failure(SynthesisFailure::Kind::CapExceeded, e.what());
        return out;
    } catch (const AuditError& e) {
        out.failure = make_failure(SynthesisFailure::Kind::Precondition, e.what());
        return out;
    }

    // The concavity pairs (lowest score, theta, n) > (..., n+1) for n past
    // the guaranteed count follow from substitutes and responsiveness; the
    // universe's menus may be too small to reveal them directly.
    PairwiseRelation augmented = out.relation;
    for (const auto& theta : identities) {
        int start = std::max(counts[theta], 1);
        for (int n = start; n + 1 <= q; ++n) {
            RelationPair pair;
            pair.left = PairElement{0, theta, n};
            pair.right = PairElement{0, theta, n + 1};
            if (!(pair.left == pair.right)) augmented.add(std::move(pair));
        }
    }
    auto mono = lp_feasibility(augmented, scores.size(), identities, q, true);
    if (!mono.feasible) {
        out.failure = make_failure(
            SynthesisFailure::Kind::Diagnostic,
            "relation is acyclic but the score-monotone separable system is infeasible; "
            "the menu family may be too small");
        return out;
    }

    SeparableUtility utility;
    utility.capacity = q;
    utility.u = mono.utilities->u;
    Rational base = utility.u.front();
    for (auto& value : utility.u) value -= base;  // normalize u(s_0) = 0

    Rational max_h = mono.utilities->h.empty() ? Rational(0) : mono.utilities->h.front();
    for (const auto& value : mono.utilities->h) max_h = std::max(max_h, value);
    utility.u_bar = max_h + utility.u.back();
    utility.guaranteed = counts;

    for (size_t t = 0; t < identities.size(); ++t) {
        const Identity& theta = identities[t];
        int n_theta = counts[theta];
        std::vector<Rational> marginal(static_cast<size_t>(q));
        for (int n = 1; n <= q; ++n) {
            marginal[static_cast<size_t>(n - 1)] =
                n <= n_theta ? utility.u_bar : mono.utilities->h_of(t, n);
        }
        std::vector<Rational> cumulative(static_cast<size_t>(q) + 1, Rational(0));
        for (int n = 1; n <= q; ++n) {
            cumulative[static_cast<size_t>(n)] =
                cumulative[static_cast<size_t>(n - 1)] + marginal[static_cast<size_t>(n - 1)];
        }
        for (int n = 1; n + 1 <= q; ++n) {
            if (marginal[static_cast<size_t>(n - 1)] < marginal[static_cast<size_t>(n)]) {
                out.failure = make_failure(SynthesisFailure::Kind::Diagnostic,
                                           "lifted diversity table is not concave");
                return out;
            }
        }
        utility.h_marginal[theta] = std::move(marginal);
        utility.h_cumulative[theta] = std::move(cumulative);
    }
    utility.concave = true;

    // End-to-end certificate: the rule's choices must be exactly the
    // argmax sets on every enumerated menu.
    MenuFamilyConfig config{universe, 1, -1, max_enumeration, override_cap};
    RuleCache cache(rule, universe);
    bool verified = true;
    std::string mismatch;
    for_each_menu(config, [&](MenuMask mask) {
        if (!verified) return;
        if (std::popcount(mask) < q) return;
        auto menu = menu_from_mask(universe, mask);
        auto expected = utility_argmax(utility, menu, schema);
        const ChoiceResult& actual = cache.at(mask);
        if (expected != actual.chosen) {
            verified = false;
            mismatch = "argmax verification failed on menu {";
            for (const auto& id : ids_from_mask(universe, mask)) mismatch += id + " ";
            mismatch += "}";
        }
    });
    if (!verified) {
        out.failure = make_failure(SynthesisFailure::Kind::Diagnostic, mismatch);
        return out;
    }
    out.utility = std::move(utility);
    return out;
}

namespace {

SeparableUtility explicit_utility(const std::map<Identity, int>& per_identity,
                                  const std::vector<Rational>& base_u,
                                  const DimensionSchema& schema, int capacity, bool quota_form) {
    if (base_u.empty()) throw ConfigError("base utility must be nonempty");
    for (size_t i = 1; i < base_u.size(); ++i) {
        if (!(base_u[i - 1] < base_u[i])) {
            throw ConfigError("base utility must be strictly increasing");
        }
    }
    SeparableUtility utility;
    utility.capacity = capacity;
    utility.u = base_u;
    Rational u_hat = base_u.back() - base_u.front();
    utility.u_bar = u_hat + 1;
    bool concave = true;
    for (const auto& theta : schema.all_identities()) {
        auto it = per_identity.find(theta);
        int bound = it == per_identity.end() ? (quota_form ? capacity : 0) : it->second;
        std::vector<Rational> cumulative(static_cast<size_t>(capacity) + 1, Rational(0));
        for (int n = 1; n <= capacity; ++n) {
            if (quota_form) {
                cumulative[static_cast<size_t>(n)] =
                    n <= bound ? Rational(0) : -Rational(capacity) * utility.u_bar;
            } else {
                cumulative[static_cast<size_t>(n)] = Rational(std::min(n, bound)) * utility.u_bar;
            }
        }
        std::vector<Rational> marginal(static_cast<size_t>(capacity));
        for (int n = 1; n <= capacity; ++n) {
            marginal[static_cast<size_t>(n - 1)] =
                cumulative[static_cast<size_t>(n)] - cumulative[static_cast<size_t>(n - 1)];
        }
        for (int n = 1; n + 1 <= capacity; ++n) {
            if (marginal[static_cast<size_t>(n - 1)] < marginal[static_cast<size_t>(n)]) {
                concave = false;
            }
        }
        utility.h_marginal[theta] = std::move(marginal);
        utility.h_cumulative[theta] = std::move(cumulative);
    }
    utility.concave = concave;
    return utility;
}

}  // namespace

SeparableUtility quota_utility(const std::map<Identity, int>& caps,
                               const std::vector<Rational>& base_u, const DimensionSchema& schema,
                               int capacity) {
    return explicit_utility(caps, base_u, schema, capacity, true);
}

SeparableUtility reserve_utility(const std::map<Identity, int>& reserves,
                                 const std::vector<Rational>& base_u,
                                 const DimensionSchema& schema, int capacity) {
    return explicit_utility(reserves, base_u, schema, capacity, false);
}

PreferenceTable utility_preference(const SeparableUtility& utility,
                                   const std::vector<ScoredIndividual>& universe,
                                   const DimensionSchema& schema) {
    // Distinct types with availability bounds from the universe.
    std::map<TypeEntry, int> pool;
    for (const auto& ind : universe) {
        schema.require_valid(ind.identity);
        ++pool[TypeEntry{ind.identity, ind.score}];
    }
    std::vector<std::pair<TypeEntry, int>> types(pool.begin(), pool.end());

    std::map<Rational, std::vector<TypeProfile>, std::greater<Rational>> by_value;
    std::vector<TypeEntry> current;
    std::function<void(size_t, int)> enumerate = [&](size_t t, int budget) {
        if (t == types.size()) {
            TypeProfile profile = TypeProfile::from_entries(current);
            by_value[utility.evaluate(profile)].push_back(profile);
            return;
        }
        int avail = std::min(types[t].second, budget);
        for (int take = 0; take <= avail; ++take) {
            for (int x = 0; x < take; ++x) current.push_back(types[t].first);
            enumerate(t + 1, budget - take);
            for (int x = 0; x < take; ++x) current.pop_back();
        }
    };
    enumerate(0, utility.capacity);

    std::vector<std::vector<TypeProfile>> classes;
    for (auto& [value, profiles] : by_value) classes.push_back(std::move(profiles));
    return PreferenceTable::from_classes(std::move(classes));
}

std::vector<TypeProfile> utility_argmax(const SeparableUtility& utility,
                                        const std::vector<ScoredIndividual>& menu,
                                        const DimensionSchema& schema) {
    const int q = utility.capacity;
    std::vector<TypeProfile> best;
    std::optional<Rational> best_value;
    if (static_cast<int>(menu.size()) <= q) {
        best.push_back(canonical_profile(menu, schema));
        return best;
    }
    std::vector<int> combo;
    std::function<void(size_t)> walk = [&](size_t start) {
        if (static_cast<int>(combo.size()) == q) {
            std::vector<ScoredIndividual> picked;
            for (int i : combo) picked.push_back(menu[static_cast<size_t>(i)]);
            TypeProfile profile = canonical_profile(picked, schema);
            Rational value = utility.evaluate(profile);
            if (!best_value || value > *best_value) {
                best_value = value;
                best.clear();
            }
            if (value == *best_value &&
                std::find(best.begin(), best.end(), profile) == best.end()) {
                best.push_back(profile);
            }
            return;
        }
        for (size_t i = start; i < menu.size(); ++i) {
            combo.push_back(static_cast<int>(i));
            walk(i + 1);
            combo.pop_back();
        }
    };
    walk(0);
    std::sort(best.begin(), best.end());
    return best;
}

OpenFirstDiagnostic open_first_diagnostic(const ChoiceRule& rule) {
    const auto* reserve = std::get_if<ReserveRule>(&rule.spec().rule);
    if (!reserve) {
        throw PreconditionError("open-first diagnostic applies to reserve rules only");
    }
    const auto& slots = reserve->slots;
    const auto& scores = rule.scores();
    const int q = rule.capacity();

    size_t first_open = slots.size();
    for (size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].reserved) {
            first_open = i;
            break;
        }
    }
    std::optional<Identity> theta1;
    for (size_t i = first_open + 1; i < slots.size() && first_open < slots.size(); ++i) {
        if (slots[i].reserved) {
            theta1 = *slots[i].reserved;
            break;
        }
    }
    if (!theta1) {
        throw PreconditionError("no open slot precedes a reserve slot");
    }

    std::map<Identity, int> reserve_counts;
    for (const auto& slot : slots) {
        if (slot.reserved) ++reserve_counts[*slot.reserved];
    }
    std::optional<Identity> theta2;
    for (const auto& [ident, count] : reserve_counts) {
        if (!(ident == *theta1)) {
            theta2 = ident;
            break;
        }
    }
    if (!theta2) {
        // The second group needs no reserve slot of its own; any other
        // identity works for the witness population.
        for (const auto& ident : rule.schema().all_identities()) {
            if (!(ident == *theta1)) {
                theta2 = ident;
                break;
            }
        }
    }
    if (!theta2) {
        throw PreconditionError("schema offers no second identity");
    }

    bool has_other_reserves = false;
    for (const auto& [ident, count] : reserve_counts) {
        if (!(ident == *theta1) && !(ident == *theta2)) has_other_reserves = true;
    }
    if (scores.size() < 3 || (has_other_reserves && scores.size() < 4)) {
        throw PreconditionError("score set too small for the witness construction");
    }

    const ScoreIndex s0 = 0;
    const ScoreIndex sK = static_cast<ScoreIndex>(scores.size() - 1);
    const ScoreIndex sK1 = static_cast<ScoreIndex>(scores.size() - 2);
    const ScoreIndex s1 = 1;

    auto build_population = [&](int raised) {
        std::vector<ScoredIndividual> population;
        for (int i = 0; i < q; ++i) {
            population.push_back(ScoredIndividual{"t1_" + std::to_string(i), *theta1,
                                                  i < raised ? sK : s0});
        }
        for (int i = 0; i < q; ++i) {
            population.push_back(ScoredIndividual{"t2_" + std::to_string(i), *theta2, sK1});
        }
        int serial = 0;
        for (const auto& [ident, count] : reserve_counts) {
            if (ident == *theta1 || ident == *theta2) continue;
            for (int i = 0; i < count; ++i) {
                population.push_back(
                    ScoredIndividual{"tj_" + std::to_string(serial++), ident, s1});
            }
        }
        return population;
    };

    int n_before = 0;
    for (size_t i = 0; i < first_open; ++i) {
        if (slots[i].reserved && *slots[i].reserved == *theta1) ++n_before;
    }

    auto chosen_members = [&](const std::vector<ScoredIndividual>& population) {
        ChoiceResult result = rule.apply(population);
        if (result.chosen.size() != 1) {
            throw PreconditionError("rule is not type-functional on the witness population");
        }
        std::vector<ScoredIndividual> members;
        for (const auto& id : result.witnesses.at(result.chosen.front())) {
            for (const auto& ind : population) {
                if (ind.id == id) members.push_back(ind);
            }
        }
        return members;
    };

    PairwiseRelation relation;
    {
        auto population = build_population(0);
        auto menu = chosen_members(population);
        menu.push_back(ScoredIndividual{"extra_t1", *theta1, s0});
        extract_pairs_from_menu(rule, menu, relation);
    }
    {
        auto population = build_population(n_before + 1);
        auto menu = chosen_members(population);
        menu.push_back(ScoredIndividual{"extra_t2", *theta2, sK1});
        extract_pairs_from_menu(rule, menu, relation);
    }

    auto cycle = find_tversky_cycle(relation, 2);
    if (!cycle || !validate_tversky_cycle(*cycle)) {
        throw AuditError("open-first witness menus produced no length-2 cycle");
    }
    return OpenFirstDiagnostic{*cycle, relation};
}

}  // namespace divaudit
