#include "divaudit/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace divaudit {

DimensionSchema::DimensionSchema(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    std::set<std::string> dim_names;
    for (const auto& dim : dims_) {
        if (dim.groups.size() < 2) {
            throw SchemaError("dimension '" + dim.name + "' must have at least 2 groups");
        }
        if (!dim_names.insert(dim.name).second) {
            throw SchemaError("duplicate dimension name '" + dim.name + "'");
        }
        std::set<std::string> group_names;
        for (const auto& g : dim.groups) {
            if (!group_names.insert(g).second) {
                throw SchemaError("duplicate group '" + g + "' in dimension '" + dim.name + "'");
            }
        }
    }
}

bool DimensionSchema::valid_identity(const Identity& identity) const {
    if (identity.size() != dims_.size()) return false;
    for (size_t l = 0; l < dims_.size(); ++l) {
        if (identity[l] < 0 || static_cast<size_t>(identity[l]) >= dims_[l].groups.size()) {
            return false;
        }
    }
    return true;
}

void DimensionSchema::require_valid(const Identity& identity) const {
    if (!valid_identity(identity)) {
        throw SchemaError("identity vector does not conform to the dimension schema");
    }
}

std::vector<Identity> DimensionSchema::all_identities() const {
    std::vector<Identity> out;
    Identity current(dims_.size(), 0);
    while (true) {
        out.push_back(current);
        size_t l = dims_.size();
        while (l > 0) {
            --l;
            if (static_cast<size_t>(++current[l]) < dims_[l].groups.size()) break;
            current[l] = 0;
            if (l == 0) return out;
        }
        if (dims_.empty()) return out;
    }
}

std::string DimensionSchema::identity_name(const Identity& identity) const {
    require_valid(identity);
    std::string out;
    for (size_t l = 0; l < identity.size(); ++l) {
        if (l > 0) out += ',';
        out += dims_[l].groups[static_cast<size_t>(identity[l])];
    }
    return out;
}

std::optional<Identity> DimensionSchema::parse_identity(std::string_view text) const {
    Identity identity;
    size_t start = 0;
    for (size_t l = 0; l < dims_.size(); ++l) {
        size_t comma = text.find(',', start);
        std::string_view token = comma == std::string_view::npos
                                     ? text.substr(start)
                                     : text.substr(start, comma - start);
        auto g = group_index(l, token);
        if (!g) return std::nullopt;
        identity.push_back(*g);
        if (comma == std::string_view::npos) {
            return l + 1 == dims_.size() ? std::optional<Identity>(identity) : std::nullopt;
        }
        start = comma + 1;
    }
    return std::nullopt;
}

std::optional<size_t> DimensionSchema::dimension_index(std::string_view name) const {
    for (size_t l = 0; l < dims_.size(); ++l) {
        if (dims_[l].name == name) return l;
    }
    return std::nullopt;
}

std::optional<GroupIndex> DimensionSchema::group_index(size_t dim, std::string_view name) const {
    if (dim >= dims_.size()) return std::nullopt;
    for (size_t g = 0; g < dims_[dim].groups.size(); ++g) {
        if (dims_[dim].groups[g] == name) return static_cast<GroupIndex>(g);
    }
    return std::nullopt;
}

bool DimensionSchema::operator==(const DimensionSchema& other) const {
    if (dims_.size() != other.dims_.size()) return false;
    for (size_t l = 0; l < dims_.size(); ++l) {
        if (dims_[l].name != other.dims_[l].name || dims_[l].groups != other.dims_[l].groups) {
            return false;
        }
    }
    return true;
}

ScoreSet::ScoreSet(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.empty()) throw SchemaError("score set must be nonempty");
    for (size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i - 1] < values_[i])) {
            throw SchemaError("score set values must be strictly increasing");
        }
    }
}

std::optional<ScoreIndex> ScoreSet::index_of(const Rational& v) const {
    for (size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == v) return static_cast<ScoreIndex>(i);
    }
    return std::nullopt;
}

TypeProfile TypeProfile::from_entries(std::vector<TypeEntry> entries) {
    std::sort(entries.begin(), entries.end());
    TypeProfile p;
    p.entries_ = std::move(entries);
    return p;
}

int TypeProfile::group_count(const Identity& identity) const {
    int count = 0;
    for (const auto& e : entries_) {
        if (e.identity == identity) ++count;
    }
    return count;
}

std::vector<ScoreIndex> TypeProfile::score_multiset() const {
    std::vector<ScoreIndex> scores;
    scores.reserve(entries_.size());
    for (const auto& e : entries_) scores.push_back(e.score);
    std::sort(scores.begin(), scores.end());
    return scores;
}

TypeProfile TypeProfile::plus(const TypeEntry& e) const {
    auto entries = entries_;
    entries.insert(std::upper_bound(entries.begin(), entries.end(), e), e);
    TypeProfile p;
    p.entries_ = std::move(entries);
    return p;
}

TypeProfile TypeProfile::minus(const TypeEntry& e) const {
    auto entries = entries_;
    auto it = std::find(entries.begin(), entries.end(), e);
    if (it == entries.end()) throw SchemaError("entry not present in profile");
    entries.erase(it);
    TypeProfile p;
    p.entries_ = std::move(entries);
    return p;
}

bool TypeProfile::contains(const TypeEntry& e) const {
    return std::find(entries_.begin(), entries_.end(), e) != entries_.end();
}

bool TypeProfile::submultiset_of(const TypeProfile& other) const {
    // Both entry lists are sorted; a single merge pass suffices.
    size_t j = 0;
    for (const auto& e : entries_) {
        while (j < other.entries_.size() && other.entries_[j] < e) ++j;
        if (j >= other.entries_.size() || !(other.entries_[j] == e)) return false;
        ++j;
    }
    return true;
}

TypeProfile canonical_profile(std::span<const ScoredIndividual> individuals,
                              const DimensionSchema& schema) {
    std::vector<TypeEntry> entries;
    entries.reserve(individuals.size());
    for (const auto& ind : individuals) {
        schema.require_valid(ind.identity);
        entries.push_back(TypeEntry{ind.identity, ind.score});
    }
    return TypeProfile::from_entries(std::move(entries));
}

TypeProfile canonical_profile(std::span<const ScoredIndividual> individuals) {
    std::vector<TypeEntry> entries;
    entries.reserve(individuals.size());
    for (const auto& ind : individuals) entries.push_back(TypeEntry{ind.identity, ind.score});
    return TypeProfile::from_entries(std::move(entries));
}

bool MarginalDistribution::at_boundary() const {
    for (const auto& dim : counts) {
        for (int c : dim) {
            if (c == 0) return true;
        }
    }
    return false;
}

MarginalDistribution marginal_distribution(const TypeProfile& profile,
                                           const DimensionSchema& schema) {
    MarginalDistribution m;
    m.counts.resize(schema.dimension_count());
    for (size_t l = 0; l < schema.dimension_count(); ++l) {
        m.counts[l].assign(schema.group_count(l), 0);
    }
    for (const auto& e : profile.entries()) {
        schema.require_valid(e.identity);
        for (size_t l = 0; l < e.identity.size(); ++l) {
            ++m.counts[l][static_cast<size_t>(e.identity[l])];
        }
    }
    return m;
}

bool score_dominates(const TypeProfile& a, const TypeProfile& b) {
    if (a.size() != b.size()) return false;
    // Group scores by identity. Entries are sorted by (identity, score),
    // so identity classes are contiguous and scores within each class are
    // already ascending.
    std::map<Identity, std::vector<ScoreIndex>> by_identity_a, by_identity_b;
    for (const auto& e : a.entries()) by_identity_a[e.identity].push_back(e.score);
    for (const auto& e : b.entries()) by_identity_b[e.identity].push_back(e.score);
    if (by_identity_a.size() != by_identity_b.size()) return false;
    bool strict = false;
    auto it_b = by_identity_b.begin();
    for (auto it_a = by_identity_a.begin(); it_a != by_identity_a.end(); ++it_a, ++it_b) {
        if (it_a->first != it_b->first) return false;
        if (it_a->second.size() != it_b->second.size()) return false;
        for (size_t i = 0; i < it_a->second.size(); ++i) {
            if (it_a->second[i] < it_b->second[i]) return false;
            if (it_a->second[i] > it_b->second[i]) strict = true;
        }
    }
    return strict;
}

void validate_privilege(const PrivilegeSpec& spec, const DimensionSchema& schema) {
    if (spec.privileged.size() != schema.dimension_count()) {
        throw ConfigError("privilege declaration must cover every dimension");
    }
    for (size_t l = 0; l < schema.dimension_count(); ++l) {
        if (schema.group_count(l) != 2) {
            throw ConfigError("privilege-bearing dimension '" + schema.dimension(l).name +
                              "' must have exactly 2 groups");
        }
        if (spec.privileged[l] < 0 || spec.privileged[l] > 1) {
            throw ConfigError("invalid privileged group index in dimension '" +
                              schema.dimension(l).name + "'");
        }
    }
}

namespace {

// Entry pair compatible with one >_P bijection step: scores equal and every
// differing dimension has the a-side in the privileged group.
bool privilege_step_ok(const TypeEntry& a, const TypeEntry& b, const PrivilegeSpec& spec) {
    if (a.score != b.score) return false;
    for (size_t l = 0; l < a.identity.size(); ++l) {
        if (a.identity[l] != b.identity[l] && a.identity[l] != spec.privileged[l]) {
            return false;
        }
    }
    return true;
}

bool privilege_match(const std::vector<TypeEntry>& as, const std::vector<TypeEntry>& bs,
                     std::vector<bool>& used, size_t i, const PrivilegeSpec& spec) {
    if (i == as.size()) return true;
    for (size_t j = 0; j < bs.size(); ++j) {
        if (used[j] || !privilege_step_ok(as[i], bs[j], spec)) continue;
        used[j] = true;
        if (privilege_match(as, bs, used, i + 1, spec)) return true;
        used[j] = false;
    }
    return false;
}

}  // namespace

bool privilege_dominates(const TypeProfile& a, const TypeProfile& b,
                         const PrivilegeSpec& privilege, const DimensionSchema& schema) {
    validate_privilege(privilege, schema);
    if (a == b) return false;
    if (a.size() != b.size()) return false;
    if (a.score_multiset() != b.score_multiset()) return false;
    std::vector<bool> used(b.size(), false);
    return privilege_match(a.entries(), b.entries(), used, 0, privilege);
}

std::string profile_to_string(const TypeProfile& profile, const DimensionSchema& schema,
                              const ScoreSet& scores) {
    std::ostringstream out;
    out << '[';
    bool first = true;
    for (const auto& e : profile.entries()) {
        if (!first) out << ' ';
        first = false;
        out << schema.identity_name(e.identity) << '@' << format_rational(scores.value(e.score));
    }
    out << ']';
    return out.str();
}

}  // namespace divaudit
