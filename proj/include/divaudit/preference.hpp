#pragma once

#include <map>
#include <optional>
#include <vector>

#include "divaudit/model.hpp"

namespace divaudit {

// A complete preorder over type profiles, stored as an ordered list of
// indifference classes (best first). The classes partition the domain.
class PreferenceTable {
  public:
    PreferenceTable() = default;
    static PreferenceTable from_classes(std::vector<std::vector<TypeProfile>> classes);

    const std::vector<std::vector<TypeProfile>>& classes() const { return classes_; }
    size_t class_count() const { return classes_.size(); }
    size_t domain_size() const { return rank_.size(); }

    bool contains(const TypeProfile& p) const { return rank_.count(p) != 0; }
    std::optional<int> rank_of(const TypeProfile& p) const;
    int require_rank(const TypeProfile& p) const;  // throws IncompletePreferenceError

    bool weakly_prefers(const TypeProfile& a, const TypeProfile& b) const;
    bool strictly_prefers(const TypeProfile& a, const TypeProfile& b) const;
    bool indifferent(const TypeProfile& a, const TypeProfile& b) const;

    std::vector<TypeProfile> domain() const;

    bool operator==(const PreferenceTable& other) const { return classes_ == other.classes_; }

  private:
    std::vector<std::vector<TypeProfile>> classes_;  // each sorted canonically
    std::map<TypeProfile, int> rank_;                // 0 = best
};

}  // namespace divaudit
