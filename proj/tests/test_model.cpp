#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "divaudit/model.hpp"
#include "test_helpers.hpp"

using namespace divaudit;
using testutil::ind;

namespace {

TypeProfile profile_of(const DimensionSchema& schema,
                       std::vector<std::pair<Identity, ScoreIndex>> entries) {
    std::vector<TypeEntry> list;
    for (auto& [identity, score] : entries) list.push_back(TypeEntry{identity, score});
    (void)schema;
    return TypeProfile::from_entries(std::move(list));
}

}  // namespace

TEST_CASE("schema validation") {
    CHECK_THROWS_AS(DimensionSchema({Dimension{"d", {"only"}}}), SchemaError);
    CHECK_THROWS_AS(DimensionSchema({Dimension{"d", {"a", "a"}}}), SchemaError);
    CHECK_THROWS_AS(
        DimensionSchema({Dimension{"d", {"a", "b"}}, Dimension{"d", {"x", "y"}}}), SchemaError);
    auto schema = testutil::schema_2x2();
    CHECK(schema.all_identities().size() == 4);
    CHECK(schema.identity_name({1, 0}) == "2,1");
    CHECK(schema.parse_identity("2,1") == Identity{1, 0});
    CHECK_FALSE(schema.parse_identity("2").has_value());
    CHECK_FALSE(schema.parse_identity("2,3").has_value());
}

TEST_CASE("score set validation") {
    CHECK_THROWS_AS(ScoreSet(std::vector<Rational>{}), SchemaError);
    CHECK_THROWS_AS(ScoreSet({Rational(1), Rational(1)}), SchemaError);
    ScoreSet scores({Rational(1), Rational(7, 2), Rational(4)});
    CHECK(scores.index_of(Rational(7, 2)) == 1);
    CHECK_FALSE(scores.index_of(Rational(2)).has_value());
}

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3.5") == Rational(7, 2));
    CHECK(parse_rational("7/2") == Rational(7, 2));
    CHECK(parse_rational("-2") == Rational(-2));
    CHECK_FALSE(parse_rational("x").has_value());
    CHECK_FALSE(parse_rational("1/0").has_value());
    CHECK(format_rational(Rational(7, 2)) == "7/2");
    CHECK(format_rational(Rational(4)) == "4");
}

TEST_CASE("canonical profile basics") {
    auto schema = testutil::schema_2x2();

    SUBCASE("empty set gives the empty profile") {
        std::vector<ScoredIndividual> none;
        CHECK(canonical_profile(none, schema).empty());
    }

    SUBCASE("the balanced four-individual set") {
        std::vector<ScoredIndividual> members = {
            ind("i1", {0, 0}, 0), ind("i5", {0, 0}, 0), ind("i4", {1, 1}, 0),
            ind("i8", {1, 1}, 0)};
        auto profile = canonical_profile(members, schema);
        CHECK(profile.size() == 4);
        CHECK(profile.group_count({0, 0}) == 2);
        CHECK(profile.group_count({1, 1}) == 2);
        CHECK(profile.group_count({0, 1}) == 0);
    }

    SUBCASE("ids never matter") {
        std::vector<ScoredIndividual> a = {ind("x", {0, 1}, 0), ind("y", {1, 0}, 0)};
        std::vector<ScoredIndividual> b = {ind("p", {1, 0}, 0), ind("q", {0, 1}, 0)};
        CHECK(canonical_profile(a, schema) == canonical_profile(b, schema));
    }

    SUBCASE("malformed identity is rejected") {
        std::vector<ScoredIndividual> bad = {ind("z", {0, 7}, 0)};
        CHECK_THROWS_AS(canonical_profile(bad, schema), SchemaError);
    }
}

TEST_CASE("canonicalization is idempotent and permutation invariant") {
    auto schema = testutil::schema_2x2();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> group(0, 1), score(0, 2), size(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ScoredIndividual> members;
        int n = size(rng);
        for (int i = 0; i < n; ++i) {
            members.push_back(
                ind("m" + std::to_string(i), {group(rng), group(rng)}, score(rng)));
        }
        auto profile = canonical_profile(members, schema);
        std::shuffle(members.begin(), members.end(), rng);
        CHECK(canonical_profile(members, schema) == profile);
        CHECK(TypeProfile::from_entries(profile.entries()) == profile);
    }
}

TEST_CASE("group counts") {
    auto schema = testutil::schema_2x2();
    TypeProfile empty;
    CHECK(empty.group_count({0, 0}) == 0);

    std::vector<ScoredIndividual> saturated;
    for (int i = 0; i < 4; ++i) saturated.push_back(ind("s" + std::to_string(i), {0, 1}, 0));
    CHECK(canonical_profile(saturated, schema).group_count({0, 1}) == 4);
}

TEST_CASE("marginal distribution") {
    // One dimension of two groups, one of three: two men, one rich one poor.
    DimensionSchema schema(
        {Dimension{"gender", {"men", "women"}}, Dimension{"income", {"rich", "mid", "poor"}}});
    std::vector<ScoredIndividual> members = {ind("i", {0, 0}, 0), ind("j", {0, 2}, 0)};
    auto m = marginal_distribution(canonical_profile(members, schema), schema);
    CHECK(m.counts[0] == std::vector<int>{2, 0});
    CHECK(m.counts[1] == std::vector<int>{1, 0, 1});
    CHECK(m.at_boundary());

    auto schema22 = testutil::schema_2x2();
    TypeProfile empty;
    auto zero = marginal_distribution(empty, schema22);
    CHECK(zero.counts == std::vector<std::vector<int>>{{0, 0}, {0, 0}});

    // Equal marginals for the two disjoint balanced sets.
    std::vector<ScoredIndividual> chosen = {ind("i1", {0, 0}, 0), ind("i5", {0, 0}, 0),
                                            ind("i4", {1, 1}, 0), ind("i8", {1, 1}, 0)};
    std::vector<ScoredIndividual> other = {ind("i2", {0, 1}, 0), ind("i6", {0, 1}, 0),
                                           ind("i3", {1, 0}, 0), ind("i7", {1, 0}, 0)};
    auto ma = marginal_distribution(canonical_profile(chosen, schema22), schema22);
    auto mb = marginal_distribution(canonical_profile(other, schema22), schema22);
    CHECK(ma == mb);
    CHECK(ma.counts == std::vector<std::vector<int>>{{2, 2}, {2, 2}});
    CHECK_FALSE(ma.at_boundary());
}

TEST_CASE("profiles smaller than some dimension are always at boundary") {
    DimensionSchema schema({Dimension{"g", {"a", "b", "c"}}});
    auto types = std::vector<TypeEntry>{TypeEntry{{0}, 0}, TypeEntry{{1}, 0}, TypeEntry{{2}, 0}};
    for (const auto& profile : testutil::all_profiles(types, 2)) {
        CHECK(marginal_distribution(profile, schema).at_boundary());
    }
}

TEST_CASE("score dominance examples") {
    auto schema = testutil::schema_2x2();
    // {m1g, w1r, m~1r} >_S {m1g, w1r, m1r} with the higher-scoring m~1r.
    Identity gm{0, 0}, rw{1, 1}, rm{1, 0};
    auto high = profile_of(schema, {{gm, 3}, {rw, 2}, {rm, 1}});
    auto low = profile_of(schema, {{gm, 3}, {rw, 2}, {rm, 0}});
    CHECK(score_dominates(high, low));
    CHECK_FALSE(score_dominates(low, high));
    CHECK_FALSE(score_dominates(high, high));

    // Identity multisets must match.
    auto other = profile_of(schema, {{gm, 3}, {rw, 2}, {gm, 0}});
    CHECK_FALSE(score_dominates(high, other));
    CHECK_FALSE(score_dominates(other, low));
}

TEST_CASE("score dominance agrees with the all-bijections oracle") {
    // 2 dimensions x 2 groups x 3 scores, all profiles of size <= 4.
    auto schema = testutil::schema_2x2();
    std::vector<TypeEntry> types;
    for (const auto& identity : schema.all_identities()) {
        for (ScoreIndex s = 0; s < 3; ++s) types.push_back(TypeEntry{identity, s});
    }
    // Size <= 3 keeps the pairwise loop tractable while exercising every
    // bijection pattern; a sampled slice covers size 4.
    auto profiles = testutil::all_profiles(types, 3);
    size_t checked = 0;
    for (const auto& a : profiles) {
        for (const auto& b : profiles) {
            if (a.size() != b.size()) continue;
            ++checked;
            CHECK(score_dominates(a, b) == testutil::score_dominates_oracle(a, b));
        }
    }
    CHECK(checked > 100000);

    auto big = testutil::all_profiles(types, 4);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<size_t> pick(0, big.size() - 1);
    for (int trial = 0; trial < 20000; ++trial) {
        const auto& a = big[pick(rng)];
        const auto& b = big[pick(rng)];
        CHECK(score_dominates(a, b) == testutil::score_dominates_oracle(a, b));
    }
}

TEST_CASE("score dominance is irreflexive and transitive") {
    auto schema = testutil::schema_1d();
    std::vector<TypeEntry> types;
    for (GroupIndex g = 0; g < 2; ++g) {
        for (ScoreIndex s = 0; s < 3; ++s) types.push_back(TypeEntry{{g}, s});
    }
    auto profiles = testutil::all_profiles(types, 3);
    for (const auto& a : profiles) CHECK_FALSE(score_dominates(a, a));
    for (const auto& a : profiles) {
        for (const auto& b : profiles) {
            if (!score_dominates(a, b)) continue;
            for (const auto& c : profiles) {
                if (score_dominates(b, c)) CHECK(score_dominates(a, c));
            }
        }
    }
}

TEST_CASE("privilege dominance") {
    auto schema = testutil::schema_2x2();
    PrivilegeSpec privilege{{0, 0}};  // group "1" privileged in both dimensions
    validate_privilege(privilege, schema);

    auto unprivileged = profile_of(schema, {{{1, 1}, 2}});
    auto privileged = profile_of(schema, {{{0, 1}, 2}});
    CHECK(privilege_dominates(privileged, unprivileged, privilege, schema));
    CHECK_FALSE(privilege_dominates(unprivileged, privileged, privilege, schema));
    CHECK_FALSE(privilege_dominates(privileged, privileged, privilege, schema));

    // Scores must be preserved.
    auto different_score = profile_of(schema, {{{1, 1}, 1}});
    CHECK_FALSE(privilege_dominates(privileged, different_score, privilege, schema));

    DimensionSchema wide({Dimension{"d", {"a", "b", "c"}}});
    CHECK_THROWS_AS(validate_privilege(PrivilegeSpec{{0}}, wide), ConfigError);
}

TEST_CASE("privilege dominance agrees with the bijection oracle") {
    auto schema = testutil::schema_2x2();
    PrivilegeSpec privilege{{0, 1}};
    std::vector<TypeEntry> types;
    for (const auto& identity : schema.all_identities()) {
        for (ScoreIndex s = 0; s < 2; ++s) types.push_back(TypeEntry{identity, s});
    }
    auto profiles = testutil::all_profiles(types, 3);
    size_t dominated = 0;
    for (const auto& a : profiles) {
        for (const auto& b : profiles) {
            if (a.size() != b.size()) continue;
            bool expected = testutil::privilege_dominates_oracle(a, b, privilege);
            CHECK(privilege_dominates(a, b, privilege, schema) == expected);
            if (expected) {
                ++dominated;
                // Privilege flips preserve the score multiset.
                CHECK(a.score_multiset() == b.score_multiset());
            }
        }
    }
    CHECK(dominated > 0);
}

TEST_CASE("submultiset and mutation helpers") {
    auto schema = testutil::schema_1d();
    auto profile = profile_of(schema, {{{0}, 1}, {{0}, 1}, {{1}, 0}});
    auto sub = profile_of(schema, {{{0}, 1}, {{1}, 0}});
    CHECK(sub.submultiset_of(profile));
    CHECK_FALSE(profile.submultiset_of(sub));
    CHECK(profile.minus(TypeEntry{{0}, 1}) == profile_of(schema, {{{0}, 1}, {{1}, 0}}));
    CHECK_THROWS_AS(profile.minus(TypeEntry{{1}, 2}), SchemaError);
    CHECK(sub.plus(TypeEntry{{0}, 1}) == profile);
}
