#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "divaudit/menus.hpp"
#include "divaudit/model.hpp"
#include "divaudit/preference.hpp"
#include "divaudit/rules.hpp"

namespace divaudit {

// Lazily memoizes rule applications per menu mask of a fixed universe.
class RuleCache {
  public:
    RuleCache(const ChoiceRule& rule, std::vector<ScoredIndividual> universe)
        : rule_(&rule), universe_(std::move(universe)) {}

    const ChoiceResult& at(MenuMask mask) const;
    const std::vector<ScoredIndividual>& universe() const { return universe_; }
    const ChoiceRule& rule() const { return *rule_; }

  private:
    const ChoiceRule* rule_;
    std::vector<ScoredIndividual> universe_;
    mutable std::unordered_map<MenuMask, ChoiceResult> cache_;
};

enum class EdgeLabel { WeakChoice, StrictChoice, ScoreDom, PrivilegeDom };

const char* edge_label_name(EdgeLabel label);

struct RevealedEdge {
    int from = 0;
    int to = 0;
    EdgeLabel label = EdgeLabel::WeakChoice;
    std::optional<MenuMask> menu;  // generating menu for choice edges
};

struct RelationToggles {
    bool score = false;
    std::optional<PrivilegeSpec> privilege;
};

class RevealedGraph {
  public:
    std::vector<TypeProfile> nodes;
    std::vector<RevealedEdge> edges;
    std::vector<ScoredIndividual> universe;
    RelationToggles toggles;

    int node_index(const TypeProfile& p) const;

  private:
    friend RevealedGraph build_revealed_graph(const ChoiceRule&, const MenuFamilyConfig&,
                                              const RelationToggles&);
    std::map<TypeProfile, int> index_;
};

RevealedGraph build_revealed_graph(const ChoiceRule& rule, const MenuFamilyConfig& config,
                                   const RelationToggles& toggles);

struct CycleStep {
    TypeProfile from;
    TypeProfile to;
    EdgeLabel label = EdgeLabel::WeakChoice;
    std::optional<std::vector<std::string>> menu_ids;  // for choice steps
};

// Profile sequence with per-step justification; the closing step is last.
struct CycleWitness {
    std::vector<CycleStep> steps;

    std::vector<TypeProfile> profile_sequence() const;  // I_1 .. I_n
};

// Congruence violations are decided on strongly connected components: a
// cycle exists iff some SCC contains a closing-capable edge.
std::optional<CycleWitness> find_choice_cycle(const RevealedGraph& g);
std::optional<CycleWitness> find_score_choice_cycle(const RevealedGraph& g);
std::optional<CycleWitness> find_scp_cycle(const RevealedGraph& g);

// Re-executes the rule on every recorded menu and re-checks each step.
bool replay_cycle(const CycleWitness& witness, const ChoiceRule& rule,
                  const std::vector<ScoredIndividual>& universe,
                  const std::optional<PrivilegeSpec>& privilege = std::nullopt);

bool preference_is_increasing(const PreferenceTable& pref);
bool preference_is_wg_responsive(const PreferenceTable& pref);

// Both predicates plus the agreement assertion; a disagreement indicates an
// implementation bug and is surfaced as a diagnostic by callers.
struct IncreasingResponsiveCheck {
    bool increasing = false;
    bool responsive = false;
    bool agree = false;
};
IncreasingResponsiveCheck check_increasing_vs_responsive(const PreferenceTable& pref);

}  // namespace divaudit
