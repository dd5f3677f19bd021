#include "divaudit/preference.hpp"

#include <algorithm>

namespace divaudit {

PreferenceTable PreferenceTable::from_classes(std::vector<std::vector<TypeProfile>> classes) {
    PreferenceTable table;
    for (auto& cls : classes) {
        std::sort(cls.begin(), cls.end());
        cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
        if (cls.empty()) continue;
        int rank = static_cast<int>(table.classes_.size());
        for (const auto& p : cls) {
            if (!table.rank_.emplace(p, rank).second) {
                throw SchemaError("preference classes must partition the domain");
            }
        }
        table.classes_.push_back(std::move(cls));
    }
    return table;
}

std::optional<int> PreferenceTable::rank_of(const TypeProfile& p) const {
    auto it = rank_.find(p);
    if (it == rank_.end()) return std::nullopt;
    return it->second;
}

int PreferenceTable::require_rank(const TypeProfile& p) const {
    auto r = rank_of(p);
    if (!r) {
        throw IncompletePreferenceError("profile missing from preference domain");
    }
    return *r;
}

bool PreferenceTable::weakly_prefers(const TypeProfile& a, const TypeProfile& b) const {
    return require_rank(a) <= require_rank(b);
}

bool PreferenceTable::strictly_prefers(const TypeProfile& a, const TypeProfile& b) const {
    return require_rank(a) < require_rank(b);
}

bool PreferenceTable::indifferent(const TypeProfile& a, const TypeProfile& b) const {
    return require_rank(a) == require_rank(b);
}

std::vector<TypeProfile> PreferenceTable::domain() const {
    std::vector<TypeProfile> out;
    out.reserve(rank_.size());
    for (const auto& [p, r] : rank_) out.push_back(p);
    return out;
}

}  // namespace divaudit
