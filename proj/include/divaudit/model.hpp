#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divaudit/errors.hpp"
#include "divaudit/rational.hpp"

namespace divaudit {

// Group indices are dense; names live only at the schema/IO boundary.
using GroupIndex = int;
using Identity = std::vector<GroupIndex>;  // one group per dimension
using ScoreIndex = int;                    // index into a ScoreSet

struct Dimension {
    std::string name;
    std::vector<std::string> groups;
};

class DimensionSchema {
  public:
    DimensionSchema() = default;
    explicit DimensionSchema(std::vector<Dimension> dims);

    size_t dimension_count() const { return dims_.size(); }
    const Dimension& dimension(size_t l) const { return dims_.at(l); }
    const std::vector<Dimension>& dimensions() const { return dims_; }
    size_t group_count(size_t l) const { return dims_.at(l).groups.size(); }

    bool valid_identity(const Identity& identity) const;
    void require_valid(const Identity& identity) const;

    // Cartesian product of all dimensions, in lexicographic index order.
    std::vector<Identity> all_identities() const;

    std::string identity_name(const Identity& identity) const;  // "g,m"
    std::optional<Identity> parse_identity(std::string_view text) const;

    std::optional<size_t> dimension_index(std::string_view name) const;
    std::optional<GroupIndex> group_index(size_t dim, std::string_view name) const;

    bool operator==(const DimensionSchema& other) const;

  private:
    std::vector<Dimension> dims_;
};

class ScoreSet {
  public:
    ScoreSet() = default;
    explicit ScoreSet(std::vector<Rational> values);  // strictly increasing

    size_t size() const { return values_.size(); }
    const Rational& value(ScoreIndex i) const { return values_.at(static_cast<size_t>(i)); }
    const std::vector<Rational>& values() const { return values_; }
    std::optional<ScoreIndex> index_of(const Rational& v) const;
    ScoreIndex lowest() const { return 0; }
    ScoreIndex highest() const { return static_cast<ScoreIndex>(values_.size()) - 1; }

    bool operator==(const ScoreSet& other) const { return values_ == other.values_; }

  private:
    std::vector<Rational> values_;
};

struct ScoredIndividual {
    std::string id;
    Identity identity;
    ScoreIndex score = 0;

    bool operator==(const ScoredIndividual& other) const = default;
};

struct TypeEntry {
    Identity identity;
    ScoreIndex score = 0;

    auto operator<=>(const TypeEntry&) const = default;
};

// Canonical multiset of (identity, score) pairs. Entries are kept sorted
// lexicographically by identity vector, then score index (ascending), so
// equal multisets have identical encodings. This order is part of the
// on-disk contract: golden reports depend on it.
class TypeProfile {
  public:
    TypeProfile() = default;
    static TypeProfile from_entries(std::vector<TypeEntry> entries);

    const std::vector<TypeEntry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    int group_count(const Identity& identity) const;  // N_theta
    std::vector<ScoreIndex> score_multiset() const;   // sorted ascending

    TypeProfile plus(const TypeEntry& e) const;
    TypeProfile minus(const TypeEntry& e) const;  // throws if absent
    bool contains(const TypeEntry& e) const;
    bool submultiset_of(const TypeProfile& other) const;

    auto operator<=>(const TypeProfile&) const = default;

  private:
    std::vector<TypeEntry> entries_;
};

// tau(I): the anonymity quotient of a set of individuals.
TypeProfile canonical_profile(std::span<const ScoredIndividual> individuals,
                              const DimensionSchema& schema);
TypeProfile canonical_profile(std::span<const ScoredIndividual> individuals);

struct MarginalDistribution {
    // counts[l][g]: number of entries whose dimension-l group is g.
    std::vector<std::vector<int>> counts;

    bool at_boundary() const;  // some dimension has a group with count 0
    auto operator<=>(const MarginalDistribution&) const = default;
};

MarginalDistribution marginal_distribution(const TypeProfile& profile,
                                           const DimensionSchema& schema);

// a >_S b: an identity-preserving bijection exists with a's scores
// componentwise >= b's and at least one strict. Implemented by comparing
// sorted scores within each identity class; the equivalence with the
// bijection definition is cross-checked against a brute-force oracle in
// the test suite.
bool score_dominates(const TypeProfile& a, const TypeProfile& b);

// One privileged group per dimension; every dimension must be binary.
struct PrivilegeSpec {
    std::vector<GroupIndex> privileged;  // one per dimension

    bool operator==(const PrivilegeSpec&) const = default;
};

void validate_privilege(const PrivilegeSpec& spec, const DimensionSchema& schema);

// a >_P b: profiles differ, and a score-preserving bijection exists where
// identity entries differ only by flips into the privileged group.
bool privilege_dominates(const TypeProfile& a, const TypeProfile& b,
                         const PrivilegeSpec& privilege, const DimensionSchema& schema);

std::string profile_to_string(const TypeProfile& profile, const DimensionSchema& schema,
                              const ScoreSet& scores);

}  // namespace divaudit
