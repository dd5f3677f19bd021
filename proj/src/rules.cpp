#include "divaudit/rules.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace divaudit {

bool ChoiceResult::contains_profile(const TypeProfile& p) const {
    return std::binary_search(chosen.begin(), chosen.end(), p);
}

namespace {

constexpr int kUncapped = std::numeric_limits<int>::max();

struct MenuOrder {
    // Indices into the menu, sorted by (score desc, id asc).
    std::vector<int> by_rank;
};

MenuOrder rank_menu(std::span<const ScoredIndividual> menu) {
    MenuOrder order;
    order.by_rank.resize(menu.size());
    for (size_t i = 0; i < menu.size(); ++i) order.by_rank[i] = static_cast<int>(i);
    std::sort(order.by_rank.begin(), order.by_rank.end(), [&](int a, int b) {
        if (menu[a].score != menu[b].score) return menu[a].score > menu[b].score;
        return menu[a].id < menu[b].id;
    });
    return order;
}

// Shared exploration context for the sequential rules. Branches arise only
// where tied scores across distinct identities make the selection ambiguous;
// same-type alternatives never branch because they yield the same profile.
struct Explorer {
    std::span<const ScoredIndividual> menu;
    bool branch_all = true;  // false: follow only the id-ascending branch
    std::optional<std::pair<std::string, std::string>> first_tie_pair;

    void note_tie(const std::vector<int>& tied) {
        if (first_tie_pair || tied.size() < 2) return;
        first_tie_pair = {menu[tied[0]].id, menu[tied[1]].id};
    }
};

// Enumerates the ways to take `want` members from tied candidate groups.
// `groups` maps each distinct identity to its candidate indices (id asc).
void enumerate_compositions(const std::vector<std::vector<int>>& groups, size_t gi, int want,
                            std::vector<int>& picked,
                            const std::function<void(const std::vector<int>&)>& emit) {
    if (want == 0) {
        emit(picked);
        return;
    }
    if (gi >= groups.size()) return;
    int remaining_after = 0;
    for (size_t k = gi + 1; k < groups.size(); ++k) {
        remaining_after += static_cast<int>(groups[k].size());
    }
    int max_here = std::min<int>(want, static_cast<int>(groups[gi].size()));
    int min_here = std::max(0, want - remaining_after);
    for (int take = max_here; take >= min_here; --take) {
        for (int t = 0; t < take; ++t) picked.push_back(groups[gi][static_cast<size_t>(t)]);
        enumerate_compositions(groups, gi + 1, want - take, picked, emit);
        for (int t = 0; t < take; ++t) picked.pop_back();
    }
}

// Selects the top-k of `candidates` (already sorted score desc, id asc),
// branching over the identity composition of the tied boundary class.
// Emits one index vector per alternative; fewer than k candidates means a
// single branch taking everything.
void select_top(Explorer& ex, const std::vector<int>& candidates, int k,
                const std::function<void(const std::vector<int>&)>& emit) {
    if (k <= 0) {
        std::vector<int> empty;
        emit(empty);
        return;
    }
    if (static_cast<int>(candidates.size()) <= k) {
        emit(candidates);
        return;
    }
    ScoreIndex boundary = ex.menu[static_cast<size_t>(candidates[static_cast<size_t>(k - 1)])].score;
    std::vector<int> sure, tied;
    for (int idx : candidates) {
        if (ex.menu[static_cast<size_t>(idx)].score > boundary) {
            sure.push_back(idx);
        } else if (ex.menu[static_cast<size_t>(idx)].score == boundary) {
            tied.push_back(idx);
        }
    }
    int want = k - static_cast<int>(sure.size());
    if (want == static_cast<int>(tied.size())) {
        std::vector<int> all = sure;
        all.insert(all.end(), tied.begin(), tied.end());
        emit(all);
        return;
    }
    // Group the tied class by identity; a branch is a composition of counts.
    std::vector<Identity> idents;
    std::vector<std::vector<int>> groups;
    for (int idx : tied) {
        const Identity& ident = ex.menu[static_cast<size_t>(idx)].identity;
        auto it = std::find(idents.begin(), idents.end(), ident);
        if (it == idents.end()) {
            idents.push_back(ident);
            groups.emplace_back();
            groups.back().push_back(idx);
        } else {
            groups[static_cast<size_t>(it - idents.begin())].push_back(idx);
        }
    }
    if (groups.size() == 1) {
        std::vector<int> all = sure;
        for (int t = 0; t < want; ++t) all.push_back(groups[0][static_cast<size_t>(t)]);
        emit(all);
        return;
    }
    ex.note_tie(tied);
    if (!ex.branch_all) {
        // id-ascending: take the first `want` tied members in rank order.
        std::vector<int> all = sure;
        all.insert(all.end(), tied.begin(), tied.begin() + want);
        emit(all);
        return;
    }
    std::vector<int> picked;
    enumerate_compositions(groups, 0, want, picked, [&](const std::vector<int>& chosen_tied) {
        std::vector<int> all = sure;
        all.insert(all.end(), chosen_tied.begin(), chosen_tied.end());
        emit(all);
    });
}

struct OutcomeSink {
    std::span<const ScoredIndividual> menu;
    const DimensionSchema* schema = nullptr;
    std::vector<TypeProfile> profiles;
    std::map<TypeProfile, std::vector<std::string>> witnesses;

    void add(const std::vector<bool>& taken) {
        std::vector<ScoredIndividual> picked;
        for (size_t i = 0; i < taken.size(); ++i) {
            if (taken[i]) picked.push_back(menu[i]);
        }
        TypeProfile profile = canonical_profile(picked, *schema);
        if (witnesses.count(profile)) return;
        std::vector<std::string> ids;
        for (const auto& ind : picked) ids.push_back(ind.id);
        std::sort(ids.begin(), ids.end());
        witnesses.emplace(profile, std::move(ids));
        profiles.push_back(profile);
    }

    ChoiceResult finish() {
        std::sort(profiles.begin(), profiles.end());
        ChoiceResult result;
        result.chosen = std::move(profiles);
        result.witnesses = std::move(witnesses);
        return result;
    }
};

std::vector<int> untaken_matching(const Explorer& ex, const MenuOrder& order,
                                  const std::vector<bool>& taken,
                                  const std::function<bool(const ScoredIndividual&)>& pred) {
    std::vector<int> out;
    for (int idx : order.by_rank) {
        if (!taken[static_cast<size_t>(idx)] && pred(ex.menu[static_cast<size_t>(idx)])) {
            out.push_back(idx);
        }
    }
    return out;
}

ChoiceResult whole_menu_result(std::span<const ScoredIndividual> menu,
                               const DimensionSchema& schema) {
    OutcomeSink sink{menu, &schema, {}, {}};
    std::vector<bool> taken(menu.size(), true);
    sink.add(taken);
    return sink.finish();
}

// ---------------------------------------------------------------------------
// Reserve rule

void run_reserve_slots(Explorer& ex, const MenuOrder& order, const ReserveRule& rule,
                       std::vector<bool>& taken, size_t slot_idx, int skipped,
                       OutcomeSink& sink, bool& lapsed) {
    if (slot_idx == rule.slots.size()) {
        // Skipped reserve slots refill as open positions, in sequence order.
        if (skipped > 0 && rule.refill_skipped) {
            auto pool = untaken_matching(ex, order, taken, [](const auto&) { return true; });
            int fill = std::min<int>(skipped, static_cast<int>(pool.size()));
            select_top(ex, pool, fill, [&](const std::vector<int>& pick) {
                for (int idx : pick) taken[static_cast<size_t>(idx)] = true;
                sink.add(taken);
                for (int idx : pick) taken[static_cast<size_t>(idx)] = false;
            });
        } else {
            if (skipped > 0) lapsed = true;
            sink.add(taken);
        }
        return;
    }
    const ReserveSlot& slot = rule.slots[slot_idx];
    if (slot.reserved) {
        auto pool = untaken_matching(ex, order, taken, [&](const ScoredIndividual& ind) {
            return ind.identity == *slot.reserved;
        });
        if (pool.empty()) {
            run_reserve_slots(ex, order, rule, taken, slot_idx + 1, skipped + 1, sink, lapsed);
            return;
        }
        // All candidates share an identity; the top-score pick is type-unique.
        int pick = pool.front();
        taken[static_cast<size_t>(pick)] = true;
        run_reserve_slots(ex, order, rule, taken, slot_idx + 1, skipped, sink, lapsed);
        taken[static_cast<size_t>(pick)] = false;
    } else {
        auto pool = untaken_matching(ex, order, taken, [](const auto&) { return true; });
        if (pool.empty()) {
            run_reserve_slots(ex, order, rule, taken, slot_idx + 1, skipped, sink, lapsed);
            return;
        }
        select_top(ex, pool, 1, [&](const std::vector<int>& pick) {
            taken[static_cast<size_t>(pick[0])] = true;
            run_reserve_slots(ex, order, rule, taken, slot_idx + 1, skipped, sink, lapsed);
            taken[static_cast<size_t>(pick[0])] = false;
        });
    }
}

// ---------------------------------------------------------------------------
// Quota rule

void run_quota_greedy(Explorer& ex, const MenuOrder& order,
                      const std::map<Identity, int>& effective_caps, std::vector<bool>& taken,
                      std::map<Identity, int>& counts, int remaining,
                      const std::function<void()>& done) {
    if (remaining == 0) {
        done();
        return;
    }
    auto pool = untaken_matching(ex, order, taken, [&](const ScoredIndividual& ind) {
        auto it = effective_caps.find(ind.identity);
        int cap = it == effective_caps.end() ? kUncapped : it->second;
        return counts[ind.identity] < cap;
    });
    if (pool.empty()) {
        done();  // cannot extend; caller decides what the outcome means
        return;
    }
    select_top(ex, pool, 1, [&](const std::vector<int>& pick) {
        int idx = pick[0];
        const Identity& ident = ex.menu[static_cast<size_t>(idx)].identity;
        taken[static_cast<size_t>(idx)] = true;
        ++counts[ident];
        run_quota_greedy(ex, order, effective_caps, taken, counts, remaining - 1, done);
        --counts[ident];
        taken[static_cast<size_t>(idx)] = false;
    });
}

ChoiceResult run_quota(Explorer& ex, const MenuOrder& order, const QuotaRule& rule, int q,
                       const DimensionSchema& schema) {
    std::map<Identity, int> present_counts;
    for (const auto& ind : ex.menu) ++present_counts[ind.identity];

    auto cap_of = [&](const Identity& ident) {
        auto it = rule.caps.find(ident);
        return it == rule.caps.end() ? kUncapped : it->second;
    };

    long long reachable = 0;
    for (const auto& [ident, count] : present_counts) {
        reachable += std::min(count, cap_of(ident));
    }

    OutcomeSink sink{ex.menu, &schema, {}, {}};
    std::vector<bool> taken(ex.menu.size(), false);
    std::map<Identity, int> counts;

    if (reachable >= q) {
        run_quota_greedy(ex, order, rule.caps, taken, counts, q, [&] { sink.add(taken); });
        return sink.finish();
    }

    // Caps cannot fill the capacity: maximize the quota utility exactly.
    // Each identity over its cap costs one violation; violations are
    // minimized first, then the score sum (by score rank, a fixed strictly
    // increasing u). Enumerate the identity subsets allowed to overflow.
    std::vector<Identity> idents;
    for (const auto& [ident, count] : present_counts) idents.push_back(ident);
    size_t m = idents.size();

    struct Best {
        int violations = std::numeric_limits<int>::max();
        long long rank_sum = std::numeric_limits<long long>::min();
        OutcomeSink sink;
    } best;
    best.sink = OutcomeSink{ex.menu, &schema, {}, {}};

    for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
        std::map<Identity, int> eff;
        long long total = 0;
        for (size_t i = 0; i < m; ++i) {
            int cap = (mask >> i) & 1 ? present_counts[idents[i]] : cap_of(idents[i]);
            eff[idents[i]] = cap;
            total += std::min(cap, present_counts[idents[i]]);
        }
        if (total < q) continue;
        run_quota_greedy(ex, order, eff, taken, counts, q, [&] {
            int violations = 0;
            long long rank_sum = 0;
            std::map<Identity, int> got;
            for (size_t i = 0; i < taken.size(); ++i) {
                if (!taken[i]) continue;
                ++got[ex.menu[i].identity];
                rank_sum += ex.menu[i].score;
            }
            for (const auto& [ident, n] : got) {
                if (n > cap_of(ident)) ++violations;
            }
            if (violations < best.violations ||
                (violations == best.violations && rank_sum > best.rank_sum)) {
                best.violations = violations;
                best.rank_sum = rank_sum;
                best.sink = OutcomeSink{ex.menu, &schema, {}, {}};
                best.sink.add(taken);
            } else if (violations == best.violations && rank_sum == best.rank_sum) {
                best.sink.add(taken);
            }
        });
    }
    ChoiceResult result = best.sink.finish();
    result.notes.push_back("quota caps below capacity; minimal-overrun utility maximization applied");
    return result;
}

// ---------------------------------------------------------------------------
// Supreme court rule

struct CsContext {
    const SupremeCourtRule* rule;
    size_t caste_dim, gender_dim;
    GroupIndex general_group, reserve_group, man_group, woman_group;
};

void cs_fill_stage(Explorer& ex, const MenuOrder& order, const CsContext& cs,
                   std::vector<bool>& taken, const std::vector<bool>& in_pool, int protected_women,
                   int open_count, const std::function<void()>& next) {
    // First the women-protected picks, then the remainder of the stage.
    auto is_woman = [&](const ScoredIndividual& ind) {
        return ind.identity[cs.gender_dim] == cs.woman_group;
    };
    auto in_stage = [&](int idx) { return in_pool[static_cast<size_t>(idx)]; };

    auto women_pool = untaken_matching(ex, order, taken, is_woman);
    std::erase_if(women_pool, [&](int idx) { return !in_stage(idx); });
    int women_take = std::min<int>(protected_women, static_cast<int>(women_pool.size()));
    int fallback_men = protected_women - women_take;

    select_top(ex, women_pool, women_take, [&](const std::vector<int>& women_pick) {
        for (int idx : women_pick) taken[static_cast<size_t>(idx)] = true;
        // Too few women at this step: the remaining protected positions go
        // to the highest scoring men considered at this stage.
        auto men_pool = untaken_matching(ex, order, taken, [&](const ScoredIndividual& ind) {
            return !is_woman(ind);
        });
        std::erase_if(men_pool, [&](int idx) { return !in_stage(idx); });
        int men_take = std::min<int>(fallback_men, static_cast<int>(men_pool.size()));
        select_top(ex, men_pool, men_take, [&](const std::vector<int>& men_pick) {
            for (int idx : men_pick) taken[static_cast<size_t>(idx)] = true;
            auto rest_pool = untaken_matching(ex, order, taken, [](const auto&) { return true; });
            std::erase_if(rest_pool, [&](int idx) { return !in_stage(idx); });
            int rest_take = std::min<int>(open_count, static_cast<int>(rest_pool.size()));
            select_top(ex, rest_pool, rest_take, [&](const std::vector<int>& rest_pick) {
                for (int idx : rest_pick) taken[static_cast<size_t>(idx)] = true;
                next();
                for (int idx : rest_pick) taken[static_cast<size_t>(idx)] = false;
            });
            for (int idx : men_pick) taken[static_cast<size_t>(idx)] = false;
        });
        for (int idx : women_pick) taken[static_cast<size_t>(idx)] = false;
    });
}

ChoiceResult run_supreme_court(Explorer& ex, const MenuOrder& order, const CsContext& cs, int q,
                               const DimensionSchema& schema) {
    OutcomeSink sink{ex.menu, &schema, {}, {}};
    std::vector<bool> taken(ex.menu.size(), false);
    bool used_extension = false;

    auto is_reserve = [&](const ScoredIndividual& ind) {
        return ind.identity[cs.caste_dim] == cs.reserve_group;
    };

    // Step 1: meritorious reserve candidates are the reserve-eligible
    // members of the top-o individuals overall.
    auto everyone = untaken_matching(ex, order, taken, [](const auto&) { return true; });
    int top_o = std::min<int>(cs.rule->open_total, static_cast<int>(everyone.size()));
    select_top(ex, everyone, top_o, [&](const std::vector<int>& top_set) {
        std::vector<bool> in_open_pool(ex.menu.size(), false);
        for (size_t i = 0; i < ex.menu.size(); ++i) {
            if (!is_reserve(ex.menu[i])) in_open_pool[i] = true;  // I^g
        }
        for (int idx : top_set) {
            if (is_reserve(ex.menu[static_cast<size_t>(idx)])) {
                in_open_pool[static_cast<size_t>(idx)] = true;  // meritorious
            }
        }
        // Steps 2-3 over I^g union M, then steps 4-5 over I^r.
        cs_fill_stage(ex, order, cs, taken, in_open_pool, cs.rule->open_women,
                      cs.rule->open_total - cs.rule->open_women, [&] {
            std::vector<bool> in_reserve_pool(ex.menu.size(), false);
            for (size_t i = 0; i < ex.menu.size(); ++i) {
                if (is_reserve(ex.menu[i])) in_reserve_pool[i] = true;
            }
            cs_fill_stage(ex, order, cs, taken, in_reserve_pool, cs.rule->reserve_women,
                          cs.rule->reserve_total - cs.rule->reserve_women, [&] {
                int assigned = static_cast<int>(std::count(taken.begin(), taken.end(), true));
                if (assigned < q) {
                    // Stage eligibility exhausted with individuals left over;
                    // fill remaining positions by score. This goes beyond the
                    // staged definition and is flagged in the result.
                    used_extension = true;
                    auto leftovers =
                        untaken_matching(ex, order, taken, [](const auto&) { return true; });
                    int fill = std::min<int>(q - assigned, static_cast<int>(leftovers.size()));
                    select_top(ex, leftovers, fill, [&](const std::vector<int>& pick) {
                        for (int idx : pick) taken[static_cast<size_t>(idx)] = true;
                        sink.add(taken);
                        for (int idx : pick) taken[static_cast<size_t>(idx)] = false;
                    });
                } else {
                    sink.add(taken);
                }
            });
        });
    });

    ChoiceResult result = sink.finish();
    if (used_extension) {
        result.notes.push_back(
            "staged eligibility exhausted; remaining positions filled by score (extension)");
    }
    return result;
}

}  // namespace

// ---------------------------------------------------------------------------

ChoiceRule::ChoiceRule(RuleSpec spec, DimensionSchema schema, ScoreSet scores)
    : spec_(std::move(spec)), schema_(std::move(schema)), scores_(std::move(scores)) {
    if (spec_.capacity < 1) throw ConfigError("capacity must be positive");

    if (const auto* quota = std::get_if<QuotaRule>(&spec_.rule)) {
        for (const auto& [ident, cap] : quota->caps) {
            schema_.require_valid(ident);
            if (cap < 0) throw ConfigError("quota caps must be nonnegative");
        }
    } else if (const auto* reserve = std::get_if<ReserveRule>(&spec_.rule)) {
        if (static_cast<int>(reserve->slots.size()) != spec_.capacity) {
            throw ConfigError("reserve slot sequence length must equal capacity");
        }
        for (const auto& slot : reserve->slots) {
            if (slot.reserved) schema_.require_valid(*slot.reserved);
        }
    } else if (const auto* sc = std::get_if<SupremeCourtRule>(&spec_.rule)) {
        if (sc->open_total < 0 || sc->reserve_total < 0 || sc->open_women < 0 ||
            sc->reserve_women < 0) {
            throw ConfigError("supreme-court position counts must be nonnegative");
        }
        if (sc->open_women > sc->open_total) {
            throw ConfigError("supreme-court requires o_w <= o");
        }
        if (sc->reserve_women > sc->reserve_total) {
            throw ConfigError("supreme-court requires r_w <= r");
        }
        if (sc->open_total + sc->reserve_total != spec_.capacity) {
            throw ConfigError("supreme-court requires q = o + r");
        }
        if (schema_.dimension_count() != 2) {
            throw ConfigError("supreme-court rule requires exactly two dimensions");
        }
        bool found_caste = false, found_gender = false;
        for (size_t l = 0; l < 2; ++l) {
            auto g = schema_.group_index(l, "g");
            auto r = schema_.group_index(l, "r");
            auto m = schema_.group_index(l, "m");
            auto w = schema_.group_index(l, "w");
            if (g && r && schema_.group_count(l) == 2) {
                caste_dim_ = l;
                general_group_ = *g;
                reserve_group_ = *r;
                found_caste = true;
            } else if (m && w && schema_.group_count(l) == 2) {
                gender_dim_ = l;
                man_group_ = *m;
                woman_group_ = *w;
                found_gender = true;
            }
        }
        if (!found_caste || !found_gender) {
            throw ConfigError(
                "supreme-court rule requires one dimension with groups {g,r} and one with {m,w}");
        }
    }
}

ChoiceResult ChoiceRule::apply_maximizer(const PreferenceMaximizerRule& rule,
                                         std::span<const ScoredIndividual> menu) const {
    int q = spec_.capacity;
    std::vector<int> idx(menu.size());
    for (size_t i = 0; i < menu.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return menu[a].id < menu[b].id; });

    OutcomeSink sink{menu, &schema_, {}, {}};
    int best_rank = std::numeric_limits<int>::max();
    std::map<TypeProfile, std::vector<std::string>> best;

    std::vector<int> combo;
    std::function<void(size_t)> walk = [&](size_t start) {
        if (static_cast<int>(combo.size()) == q) {
            std::vector<ScoredIndividual> picked;
            for (int i : combo) picked.push_back(menu[static_cast<size_t>(i)]);
            TypeProfile profile = canonical_profile(picked, schema_);
            int rank = rule.table.require_rank(profile);
            if (rank < best_rank) {
                best_rank = rank;
                best.clear();
            }
            if (rank == best_rank && !best.count(profile)) {
                std::vector<std::string> ids;
                for (const auto& ind : picked) ids.push_back(ind.id);
                std::sort(ids.begin(), ids.end());
                best.emplace(profile, std::move(ids));
            }
            return;
        }
        for (size_t i = start; i < idx.size(); ++i) {
            combo.push_back(idx[i]);
            walk(i + 1);
            combo.pop_back();
        }
    };
    walk(0);

    ChoiceResult result;
    for (auto& [profile, ids] : best) result.chosen.push_back(profile);
    std::sort(result.chosen.begin(), result.chosen.end());
    result.witnesses = std::move(best);
    return result;
}

ChoiceResult ChoiceRule::apply(std::span<const ScoredIndividual> menu) const {
    for (const auto& ind : menu) {
        schema_.require_valid(ind.identity);
        if (ind.score < 0 || static_cast<size_t>(ind.score) >= scores_.size()) {
            throw SchemaError("individual '" + ind.id + "' has a score outside the score set");
        }
    }
    int q = spec_.capacity;
    if (static_cast<int>(menu.size()) < q) {
        return whole_menu_result(menu, schema_);
    }

    if (const auto* maximizer = std::get_if<PreferenceMaximizerRule>(&spec_.rule)) {
        return apply_maximizer(*maximizer, menu);
    }

    auto run_sequential = [&](bool branch_all) {
        Explorer ex{menu, branch_all, std::nullopt};
        MenuOrder order = rank_menu(menu);
        ChoiceResult result;
        if (const auto* quota = std::get_if<QuotaRule>(&spec_.rule)) {
            result = run_quota(ex, order, *quota, q, schema_);
        } else if (const auto* reserve = std::get_if<ReserveRule>(&spec_.rule)) {
            OutcomeSink sink{menu, &schema_, {}, {}};
            std::vector<bool> taken(menu.size(), false);
            bool lapsed = false;
            run_reserve_slots(ex, order, *reserve, taken, 0, 0, sink, lapsed);
            result = sink.finish();
            if (lapsed) {
                result.capacity_shortfall = true;
                result.notes.push_back("reserve slot lapsed without refill");
            }
        } else {
            const auto& sc = std::get<SupremeCourtRule>(spec_.rule);
            CsContext cs{&sc,          caste_dim_,    gender_dim_, general_group_,
                         reserve_group_, man_group_, woman_group_};
            result = run_supreme_court(ex, order, cs, q, schema_);
        }
        return std::pair(result, ex.first_tie_pair);
    };

    if (spec_.tie_break == TieBreak::ByIdAscending) {
        return run_sequential(false).first;
    }
    auto [result, tie_pair] = run_sequential(true);
    if (result.chosen.size() > 1) {
        std::vector<std::string> ids;
        if (tie_pair) {
            ids = {tie_pair->first, tie_pair->second};
        }
        throw TieError("tie between individuals changes the chosen profile" +
                           (ids.empty() ? std::string()
                                        : " (" + ids[0] + " vs " + ids[1] + ")"),
                       ids);
    }
    return result;
}

}  // namespace divaudit
