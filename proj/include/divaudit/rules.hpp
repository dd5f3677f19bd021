#pragma once

#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "divaudit/model.hpp"
#include "divaudit/preference.hpp"

namespace divaudit {

enum class TieBreak {
    ErrorOnTie,     // error when tied individuals change the chosen profile
    ByIdAscending,  // resolve every tie toward the lexicographically smaller id
};

struct PreferenceMaximizerRule {
    PreferenceTable table;

    bool operator==(const PreferenceMaximizerRule&) const = default;
};

// Hard caps per full identity; identities absent from the map are uncapped.
struct QuotaRule {
    std::map<Identity, int> caps;

    bool operator==(const QuotaRule&) const = default;
};

struct ReserveSlot {
    std::optional<Identity> reserved;  // nullopt = open position

    bool operator==(const ReserveSlot&) const = default;
};

struct ReserveRule {
    std::vector<ReserveSlot> slots;  // processed in order; length must equal q
    // A reserve slot with no eligible candidate is re-processed as an open
    // slot after the sequence; turning this off lets the slot lapse, which
    // can leave capacity unfilled (flagged in the result).
    bool refill_skipped = true;

    bool operator==(const ReserveRule&) const = default;
};

// Staged rule over two binary dimensions whose groups are named {g,r} and
// {m,w}: o open positions (o_w protected for women), then r reserved
// positions (r_w protected for women), with the within-stage fallback to
// men when too few women are considered at a protected step.
struct SupremeCourtRule {
    int open_total = 0;     // o
    int reserve_total = 0;  // r
    int open_women = 0;     // o_w <= o
    int reserve_women = 0;  // r_w <= r

    bool operator==(const SupremeCourtRule&) const = default;
};

struct RuleSpec {
    std::variant<PreferenceMaximizerRule, QuotaRule, ReserveRule, SupremeCourtRule> rule;
    int capacity = 1;  // q
    TieBreak tie_break = TieBreak::ErrorOnTie;

    bool operator==(const RuleSpec&) const = default;
};

struct ChoiceResult {
    // The correspondence's value up to type equivalence, sorted canonically.
    std::vector<TypeProfile> chosen;
    // One concrete id-level witness per chosen profile.
    std::map<TypeProfile, std::vector<std::string>> witnesses;
    // Set when a lapsed reserve slot left capacity unfilled.
    bool capacity_shortfall = false;
    std::vector<std::string> notes;

    bool contains_profile(const TypeProfile& p) const;
};

// A RuleSpec bound to its schema and score set; apply() is pure and safe to
// evaluate concurrently on different menus.
class ChoiceRule {
  public:
    ChoiceRule(RuleSpec spec, DimensionSchema schema, ScoreSet scores);

    ChoiceResult apply(std::span<const ScoredIndividual> menu) const;

    const RuleSpec& spec() const { return spec_; }
    int capacity() const { return spec_.capacity; }
    const DimensionSchema& schema() const { return schema_; }
    const ScoreSet& scores() const { return scores_; }

  private:
    ChoiceResult apply_maximizer(const PreferenceMaximizerRule& rule,
                                 std::span<const ScoredIndividual> menu) const;

    RuleSpec spec_;
    DimensionSchema schema_;
    ScoreSet scores_;

    // Resolved only for SupremeCourtRule.
    size_t caste_dim_ = 0, gender_dim_ = 0;
    GroupIndex general_group_ = 0, reserve_group_ = 0, man_group_ = 0, woman_group_ = 0;
};

}  // namespace divaudit
