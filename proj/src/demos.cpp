#include "divaudit/demos.hpp"

namespace divaudit {

namespace {

struct Demo {
    const char* name;
    const char* text;
};

// The staged rule admits a score-choice cycle once the meritorious reserve
// candidate displaces the reserve-eligible woman. The menu family covers
// the capacity-sized and one-larger menus the comparison runs on.
constexpr const char* kExample1 = R"(scenario example1
dimension caste: g r
dimension gender: m w
scores: 1 2 3 3.5 4
capacity: 3
tie-break: error
menus: 3 4
individual m1g: g m score 4
individual w1r: r w score 3
individual m1r: r m score 2
individual w1g: g w score 1
individual mt1r: r m score 3.5
rule: supreme-court o=2 r=1 ow=1 rw=1
audits: score-rationality wg-responsiveness
)";

// Marginal-only diversity evaluation makes same-identity pairs complements;
// removing two individuals kills a previously chosen set.
constexpr const char* kExample2 = R"(scenario example2
dimension d1: 1 2
dimension d2: 1 2
scores: 1
capacity: 4
tie-break: error
individual i1: 1 1 score 1
individual i2: 1 2 score 1
individual i3: 2 1 score 1
individual i4: 2 2 score 1
individual i5: 1 1 score 1
individual i6: 1 2 score 1
individual i7: 2 1 score 1
individual i8: 2 2 score 1
rule: preference balanced-marginals
audits: substitutes intersectionality
)";

// An open position processed before reserves: the pairwise relation over
// this universe contains both (1,a,2) > (1,b,2) and its reverse.
constexpr const char* kExample3 = R"(scenario example3
dimension group: a b
scores: 1 2 3
capacity: 3
tie-break: id
individual a3: a score 3
individual a2: a score 2
individual a1: a score 1
individual b3: b score 3
individual b2: b score 2
individual b1: b score 1
rule: reserve open a b
audits: acyclicity separability
)";

// The staged rule admits a plain choice cycle: removing the second general
// man flips which women are chosen.
constexpr const char* kAppendixB2 = R"(scenario appendixB2
dimension caste: g r
dimension gender: m w
scores: 1 2 3 4 5
capacity: 3
tie-break: error
individual m1g: g m score 5
individual m2g: g m score 4
individual w1r: r w score 3
individual w2r: r w score 2
individual w1g: g w score 1
rule: supreme-court o=2 r=1 ow=1 rw=0
audits: rationality
)";

// Minimal open-before-reserve instance; the diagnostic constructs its own
// witness populations from the schema.
constexpr const char* kProp6Proof = R"(scenario prop6-proof
dimension group: t1 t2
scores: 1 2 3
capacity: 3
tie-break: error
individual x1: t1 score 1
individual x2: t1 score 1
individual x3: t1 score 1
individual y1: t2 score 2
individual y2: t2 score 2
individual y3: t2 score 2
rule: reserve open t1 t2
audits: open-first
)";

constexpr Demo kDemos[] = {
    {"example1", kExample1},   {"example2", kExample2},       {"example3", kExample3},
    {"appendixB2", kAppendixB2}, {"prop6-proof", kProp6Proof},
};

}  // namespace

std::vector<std::string> demo_names() {
    std::vector<std::string> names;
    for (const auto& demo : kDemos) names.emplace_back(demo.name);
    return names;
}

std::optional<std::string> demo_text(std::string_view name) {
    for (const auto& demo : kDemos) {
        if (name == demo.name) return std::string(demo.text);
    }
    return std::nullopt;
}

}  // namespace divaudit
