#include "divaudit/revealed.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <tuple>

namespace divaudit {

const ChoiceResult& RuleCache::at(MenuMask mask) const {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    auto menu = menu_from_mask(universe_, mask);
    return cache_.emplace(mask, rule_->apply(menu)).first->second;
}

const char* edge_label_name(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::WeakChoice: return "weak-choice";
        case EdgeLabel::StrictChoice: return "strict-choice";
        case EdgeLabel::ScoreDom: return "score-dom";
        case EdgeLabel::PrivilegeDom: return "privilege-dom";
    }
    return "?";
}

int RevealedGraph::node_index(const TypeProfile& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
}

RevealedGraph build_revealed_graph(const ChoiceRule& rule, const MenuFamilyConfig& config,
                                   const RelationToggles& toggles) {
    config.validate();
    RevealedGraph g;
    g.universe = config.universe;
    g.toggles = toggles;
    if (toggles.privilege) validate_privilege(*toggles.privilege, rule.schema());

    const int q = rule.capacity();
    const size_t n = g.universe.size();
    const int node_cap = std::min(q, config.effective_max_size());

    // Nodes: profiles of size <= q realizable as subsets of family menus.
    std::unordered_map<MenuMask, int> node_of_mask;
    MenuMask end = MenuMask{1} << n;
    for (MenuMask mask = 0; mask < end; ++mask) {
        if (std::popcount(mask) > node_cap) continue;
        auto members = menu_from_mask(g.universe, mask);
        TypeProfile profile = canonical_profile(members, rule.schema());
        auto it = g.index_.find(profile);
        int idx;
        if (it == g.index_.end()) {
            idx = static_cast<int>(g.nodes.size());
            g.nodes.push_back(profile);
            g.index_.emplace(profile, idx);
        } else {
            idx = it->second;
        }
        node_of_mask.emplace(mask, idx);
    }

    RuleCache cache(rule, g.universe);
    std::set<std::tuple<int, int, int>> seen;
    auto add_edge = [&](int from, int to, EdgeLabel label, std::optional<MenuMask> menu) {
        if (from == to) return;
        if (!seen.insert({from, to, static_cast<int>(label)}).second) return;
        g.edges.push_back(RevealedEdge{from, to, label, menu});
    };

    for_each_menu(config, [&](MenuMask menu_mask) {
        const ChoiceResult& result = cache.at(menu_mask);
        for (const auto& chosen : result.chosen) {
            int from = g.node_index(chosen);
            if (from < 0) continue;  // cannot happen for valid rules
            // weak edges to every subset profile of the menu (size <= q);
            // strict edges additionally to non-chosen q-subsets.
            for (MenuMask sub = menu_mask;; sub = (sub - 1) & menu_mask) {
                int size = std::popcount(sub);
                if (size <= node_cap) {
                    auto it = node_of_mask.find(sub);
                    if (it != node_of_mask.end()) {
                        add_edge(from, it->second, EdgeLabel::WeakChoice, menu_mask);
                        if (size == q && !result.contains_profile(g.nodes[static_cast<size_t>(
                                             it->second)])) {
                            add_edge(from, it->second, EdgeLabel::StrictChoice, menu_mask);
                        }
                    }
                }
                if (sub == 0) break;
            }
        }
    });

    // Dominance relations between all node pairs, bucketed by the invariant
    // signature of each relation (identity multiset for >_S, score multiset
    // for >_P) to skip impossible pairs.
    if (toggles.score) {
        std::map<std::vector<Identity>, std::vector<int>> buckets;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            std::vector<Identity> sig;
            for (const auto& e : g.nodes[i].entries()) sig.push_back(e.identity);
            buckets[sig].push_back(static_cast<int>(i));
        }
        for (const auto& [sig, members] : buckets) {
            for (int a : members) {
                for (int b : members) {
                    if (a != b && score_dominates(g.nodes[static_cast<size_t>(a)],
                                                  g.nodes[static_cast<size_t>(b)])) {
                        add_edge(a, b, EdgeLabel::ScoreDom, std::nullopt);
                    }
                }
            }
        }
    }
    if (toggles.privilege) {
        std::map<std::vector<ScoreIndex>, std::vector<int>> buckets;
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            buckets[g.nodes[i].score_multiset()].push_back(static_cast<int>(i));
        }
        for (const auto& [sig, members] : buckets) {
            for (int a : members) {
                for (int b : members) {
                    if (a != b &&
                        privilege_dominates(g.nodes[static_cast<size_t>(a)],
                                            g.nodes[static_cast<size_t>(b)],
                                            *toggles.privilege, rule.schema())) {
                        add_edge(a, b, EdgeLabel::PrivilegeDom, std::nullopt);
                    }
                }
            }
        }
    }
    return g;
}

std::vector<TypeProfile> CycleWitness::profile_sequence() const {
    std::vector<TypeProfile> seq;
    for (const auto& step : steps) seq.push_back(step.from);
    return seq;
}

namespace {

// Iterative Tarjan SCC.
std::vector<int> strongly_connected_components(size_t node_count,
                                               const std::vector<RevealedEdge>& edges) {
    std::vector<std::vector<int>> adj(node_count);
    for (size_t e = 0; e < edges.size(); ++e) {
        adj[static_cast<size_t>(edges[e].from)].push_back(edges[e].to);
    }
    std::vector<int> comp(node_count, -1), low(node_count, 0), num(node_count, -1);
    std::vector<int> stack_nodes;
    std::vector<bool> on_stack(node_count, false);
    int counter = 0, comp_count = 0;

    struct Frame {
        int node;
        size_t next_child = 0;
    };
    for (size_t start = 0; start < node_count; ++start) {
        if (num[start] != -1) continue;
        std::vector<Frame> call_stack{{static_cast<int>(start)}};
        num[start] = low[start] = counter++;
        stack_nodes.push_back(static_cast<int>(start));
        on_stack[start] = true;
        while (!call_stack.empty()) {
            Frame& frame = call_stack.back();
            auto& children = adj[static_cast<size_t>(frame.node)];
            if (frame.next_child < children.size()) {
                int child = children[frame.next_child++];
                if (num[static_cast<size_t>(child)] == -1) {
                    num[static_cast<size_t>(child)] = low[static_cast<size_t>(child)] = counter++;
                    stack_nodes.push_back(child);
                    on_stack[static_cast<size_t>(child)] = true;
                    call_stack.push_back(Frame{child});
                } else if (on_stack[static_cast<size_t>(child)]) {
                    low[static_cast<size_t>(frame.node)] = std::min(
                        low[static_cast<size_t>(frame.node)], num[static_cast<size_t>(child)]);
                }
            } else {
                if (low[static_cast<size_t>(frame.node)] == num[static_cast<size_t>(frame.node)]) {
                    while (true) {
                        int v = stack_nodes.back();
                        stack_nodes.pop_back();
                        on_stack[static_cast<size_t>(v)] = false;
                        comp[static_cast<size_t>(v)] = comp_count;
                        if (v == frame.node) break;
                    }
                    ++comp_count;
                }
                int node = frame.node;
                call_stack.pop_back();
                if (!call_stack.empty()) {
                    int parent = call_stack.back().node;
                    low[static_cast<size_t>(parent)] =
                        std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(node)]);
                }
            }
        }
    }
    return comp;
}

std::optional<CycleWitness> find_cycle_with_closing(const RevealedGraph& g,
                                                    const std::set<EdgeLabel>& closing_labels) {
    auto comp = strongly_connected_components(g.nodes.size(), g.edges);

    // Candidate closing edges: closing-capable label with both endpoints in
    // one SCC. The returned witness is the shortest such cycle, tie-broken
    // canonically so reports are stable.
    struct Candidate {
        size_t edge_index;
        std::vector<size_t> path;  // edge indices from `to` back around to `from`
    };
    std::optional<Candidate> best;

    std::vector<std::vector<size_t>> out_edges(g.nodes.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
        out_edges[static_cast<size_t>(g.edges[e].from)].push_back(e);
    }

    auto consider = [&](size_t edge_index) {
        const auto& closing = g.edges[edge_index];
        if (comp[static_cast<size_t>(closing.from)] != comp[static_cast<size_t>(closing.to)]) {
            return;
        }
        // BFS from closing.to back to closing.from inside the SCC.
        int target_comp = comp[static_cast<size_t>(closing.from)];
        std::vector<int> parent_edge(g.nodes.size(), -1);
        std::vector<bool> visited(g.nodes.size(), false);
        std::deque<int> queue;
        queue.push_back(closing.to);
        visited[static_cast<size_t>(closing.to)] = true;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (v == closing.from) break;
            for (size_t e : out_edges[static_cast<size_t>(v)]) {
                int w = g.edges[e].to;
                if (visited[static_cast<size_t>(w)] ||
                    comp[static_cast<size_t>(w)] != target_comp) {
                    continue;
                }
                visited[static_cast<size_t>(w)] = true;
                parent_edge[static_cast<size_t>(w)] = static_cast<int>(e);
                queue.push_back(w);
            }
        }
        if (!visited[static_cast<size_t>(closing.from)]) return;  // self-pair handled by caller
        std::vector<size_t> path;
        int v = closing.from;
        while (v != closing.to) {
            size_t e = static_cast<size_t>(parent_edge[static_cast<size_t>(v)]);
            path.push_back(e);
            v = g.edges[e].from;
        }
        std::reverse(path.begin(), path.end());
        Candidate cand{edge_index, std::move(path)};
        if (!best) {
            best = std::move(cand);
            return;
        }
        size_t new_len = cand.path.size() + 1, old_len = best->path.size() + 1;
        if (new_len < old_len) {
            best = std::move(cand);
            return;
        }
        if (new_len == old_len) {
            const auto& ne = g.edges[cand.edge_index];
            const auto& oe = g.edges[best->edge_index];
            auto key = [&](const RevealedEdge& e) {
                return std::tuple(g.nodes[static_cast<size_t>(e.from)],
                                  g.nodes[static_cast<size_t>(e.to)], static_cast<int>(e.label));
            };
            if (key(ne) < key(oe)) best = std::move(cand);
        }
    };

    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (closing_labels.count(g.edges[e].label)) consider(e);
    }
    if (!best) return std::nullopt;

    CycleWitness witness;
    auto push_step = [&](const RevealedEdge& e) {
        CycleStep step;
        step.from = g.nodes[static_cast<size_t>(e.from)];
        step.to = g.nodes[static_cast<size_t>(e.to)];
        step.label = e.label;
        if (e.menu) step.menu_ids = ids_from_mask(g.universe, *e.menu);
        witness.steps.push_back(std::move(step));
    };
    // Sequence I_1 .. I_n with I_1 = closing.to; the closing step is last.
    for (size_t e : best->path) push_step(g.edges[e]);
    push_step(g.edges[best->edge_index]);
    return witness;
}

void require_toggles(const RevealedGraph& g, bool need_score, bool need_privilege,
                     bool forbid_dominance) {
    if (forbid_dominance && (g.toggles.score || g.toggles.privilege)) {
        throw ConfigError("choice-cycle search requires a graph built without dominance relations");
    }
    if (need_score && !g.toggles.score) {
        throw ConfigError("score-choice search requires a graph built with the score relation");
    }
    if (need_privilege && !g.toggles.privilege) {
        throw ConfigError("SCP search requires a graph built with the privilege relation");
    }
}

}  // namespace

std::optional<CycleWitness> find_choice_cycle(const RevealedGraph& g) {
    require_toggles(g, false, false, true);
    return find_cycle_with_closing(g, {EdgeLabel::StrictChoice});
}

std::optional<CycleWitness> find_score_choice_cycle(const RevealedGraph& g) {
    require_toggles(g, true, false, false);
    return find_cycle_with_closing(g, {EdgeLabel::StrictChoice, EdgeLabel::ScoreDom});
}

std::optional<CycleWitness> find_scp_cycle(const RevealedGraph& g) {
    require_toggles(g, true, true, false);
    return find_cycle_with_closing(
        g, {EdgeLabel::StrictChoice, EdgeLabel::ScoreDom, EdgeLabel::PrivilegeDom});
}

bool replay_cycle(const CycleWitness& witness, const ChoiceRule& rule,
                  const std::vector<ScoredIndividual>& universe,
                  const std::optional<PrivilegeSpec>& privilege) {
    if (witness.steps.empty()) return false;
    std::map<std::string, const ScoredIndividual*> by_id;
    for (const auto& ind : universe) by_id[ind.id] = &ind;

    for (size_t i = 0; i < witness.steps.size(); ++i) {
        const auto& step = witness.steps[i];
        const auto& next = witness.steps[(i + 1) % witness.steps.size()];
        if (!(step.to == next.from)) return false;
        switch (step.label) {
            case EdgeLabel::WeakChoice:
            case EdgeLabel::StrictChoice: {
                if (!step.menu_ids) return false;
                std::vector<ScoredIndividual> menu;
                for (const auto& id : *step.menu_ids) {
                    auto it = by_id.find(id);
                    if (it == by_id.end()) return false;
                    menu.push_back(*it->second);
                }
                ChoiceResult result = rule.apply(menu);
                if (!result.contains_profile(step.from)) return false;
                TypeProfile menu_profile = canonical_profile(menu, rule.schema());
                if (!step.to.submultiset_of(menu_profile)) return false;
                if (step.label == EdgeLabel::StrictChoice && result.contains_profile(step.to)) {
                    return false;
                }
                break;
            }
            case EdgeLabel::ScoreDom:
                if (!score_dominates(step.from, step.to)) return false;
                break;
            case EdgeLabel::PrivilegeDom:
                if (!privilege) return false;
                if (!privilege_dominates(step.from, step.to, *privilege, rule.schema())) {
                    return false;
                }
                break;
        }
    }
    // The closing step must be able to close a cycle on its own.
    EdgeLabel closing = witness.steps.back().label;
    return closing == EdgeLabel::StrictChoice || closing == EdgeLabel::ScoreDom ||
           closing == EdgeLabel::PrivilegeDom;
}

bool preference_is_increasing(const PreferenceTable& pref) {
    auto domain = pref.domain();
    for (const auto& a : domain) {
        for (const auto& b : domain) {
            if (score_dominates(a, b) && !pref.strictly_prefers(a, b)) return false;
        }
    }
    return true;
}

bool preference_is_wg_responsive(const PreferenceTable& pref) {
    // Single-entry swap condition: same identity, higher score, all else
    // fixed. Both perturbed profiles must be in the domain to compare.
    for (const auto& profile : pref.domain()) {
        for (const auto& entry : profile.entries()) {
            for (ScoreIndex lower = 0; lower < entry.score; ++lower) {
                TypeProfile worse = profile.minus(entry).plus(TypeEntry{entry.identity, lower});
                if (!pref.contains(worse)) continue;
                if (!pref.strictly_prefers(profile, worse)) return false;
            }
        }
    }
    return true;
}

IncreasingResponsiveCheck check_increasing_vs_responsive(const PreferenceTable& pref) {
    IncreasingResponsiveCheck out;
    out.increasing = preference_is_increasing(pref);
    out.responsive = preference_is_wg_responsive(pref);
    out.agree = out.increasing == out.responsive;
    return out;
}

}  // namespace divaudit
