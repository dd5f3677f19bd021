#include "divaudit/scenario.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace divaudit {

const char* audit_kind_name(AuditKind kind) {
    switch (kind) {
        case AuditKind::Rationality: return "rationality";
        case AuditKind::ScoreRationality: return "score-rationality";
        case AuditKind::ScpRationality: return "scp-rationality";
        case AuditKind::Substitutes: return "substitutes";
        case AuditKind::GrossSubstitutes: return "gross-substitutes";
        case AuditKind::WgResponsiveness: return "wg-responsiveness";
        case AuditKind::Intersectionality: return "intersectionality";
        case AuditKind::ValuesDiversity: return "values-diversity";
        case AuditKind::Acyclicity: return "acyclicity";
        case AuditKind::Separability: return "separability";
        case AuditKind::OpenFirst: return "open-first";
        case AuditKind::CanonicalScores: return "canonical-scores";
    }
    return "?";
}

std::optional<AuditKind> audit_kind_from_name(std::string_view name) {
    static const std::pair<const char*, AuditKind> table[] = {
        {"rationality", AuditKind::Rationality},
        {"score-rationality", AuditKind::ScoreRationality},
        {"scp-rationality", AuditKind::ScpRationality},
        {"substitutes", AuditKind::Substitutes},
        {"gross-substitutes", AuditKind::GrossSubstitutes},
        {"wg-responsiveness", AuditKind::WgResponsiveness},
        {"intersectionality", AuditKind::Intersectionality},
        {"values-diversity", AuditKind::ValuesDiversity},
        {"acyclicity", AuditKind::Acyclicity},
        {"separability", AuditKind::Separability},
        {"open-first", AuditKind::OpenFirst},
        {"canonical-scores", AuditKind::CanonicalScores},
    };
    for (const auto& [text, kind] : table) {
        if (name == text) return kind;
    }
    return std::nullopt;
}

bool Scenario::operator==(const Scenario& other) const {
    return name == other.name && schema == other.schema && scores == other.scores &&
           universe == other.universe && rule == other.rule && pref_sugar == other.pref_sugar &&
           audits == other.audits && privilege == other.privilege &&
           menu_min == other.menu_min && menu_max == other.menu_max;
}

PreferenceTable balanced_marginals_preference(const DimensionSchema& schema,
                                              const ScoreSet& scores, int capacity) {
    // Every profile of size <= capacity over the full type space, classed by
    // (marginal imbalance asc, score sum desc, marginal, score multiset).
    auto identities = schema.all_identities();
    using Key = std::tuple<Rational, Rational, MarginalDistribution, std::vector<ScoreIndex>>;
    std::map<Key, std::vector<TypeProfile>> classes;

    std::vector<TypeEntry> types;
    for (const auto& ident : identities) {
        for (size_t s = 0; s < scores.size(); ++s) {
            types.push_back(TypeEntry{ident, static_cast<ScoreIndex>(s)});
        }
    }
    std::vector<TypeEntry> current;
    std::function<void(size_t, int)> enumerate = [&](size_t t, int budget) {
        if (t == types.size()) {
            TypeProfile profile = TypeProfile::from_entries(current);
            auto marginal = marginal_distribution(profile, schema);
            Rational imbalance(0);
            Rational size(static_cast<int>(profile.size()));
            for (size_t l = 0; l < marginal.counts.size(); ++l) {
                Rational even = size / Rational(static_cast<int>(marginal.counts[l].size()));
                for (int count : marginal.counts[l]) {
                    Rational diff = Rational(count) - even;
                    imbalance += diff < 0 ? -diff : diff;
                }
            }
            Rational score_sum(0);
            for (const auto& e : profile.entries()) score_sum += scores.value(e.score);
            classes[Key{imbalance, -score_sum, marginal, profile.score_multiset()}].push_back(
                profile);
            return;
        }
        for (int take = 0; take <= budget; ++take) {
            for (int x = 0; x < take; ++x) current.push_back(types[t]);
            enumerate(t + 1, budget - take);
            for (int x = 0; x < take; ++x) current.pop_back();
        }
    };
    enumerate(0, capacity);

    std::vector<std::vector<TypeProfile>> ordered;
    for (auto& [key, profiles] : classes) ordered.push_back(std::move(profiles));
    return PreferenceTable::from_classes(std::move(ordered));
}

namespace {

struct Line {
    int number = 0;
    std::vector<std::string> tokens;
    std::vector<int> columns;  // 1-based start column per token
    std::string raw;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        std::string_view raw = end == std::string_view::npos
                                   ? text.substr(pos)
                                   : text.substr(pos, end - pos);
        ++number;
        Line line;
        line.number = number;
        line.raw = std::string(raw);
        size_t i = 0;
        while (i < raw.size()) {
            if (raw[i] == '#') break;
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            size_t start = i;
            while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) &&
                   raw[i] != '#') {
                ++i;
            }
            line.tokens.emplace_back(raw.substr(start, i - start));
            line.columns.push_back(static_cast<int>(start) + 1);
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return lines;
}

[[noreturn]] void fail(const Line& line, size_t token_index, const std::string& message,
                       const std::string& expected = {}) {
    int col = token_index < line.columns.size() ? line.columns[token_index]
                                                : static_cast<int>(line.raw.size()) + 1;
    throw ParseError(message, line.number, col, expected);
}

int parse_int(const Line& line, size_t index, const std::string& what) {
    if (index >= line.tokens.size()) fail(line, index, "missing " + what, "integer");
    try {
        size_t used = 0;
        int value = std::stoi(line.tokens[index], &used);
        if (used != line.tokens[index].size()) throw std::invalid_argument("");
        return value;
    } catch (...) {
        fail(line, index, "invalid " + what + " '" + line.tokens[index] + "'", "integer");
    }
}

struct PendingRule {
    enum class Kind { None, SupremeCourt, Quota, Reserve, BalancedMarginals, Explicit } kind =
        Kind::None;
    Line line;
    std::vector<std::string> args;
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
    auto lines = tokenize(text);
    if (lines.empty()) {
        throw ParseError("empty scenario", 1, 1, "scenario sections");
    }

    Scenario scenario;
    std::vector<Dimension> dims;
    std::vector<Rational> score_values;
    bool have_scores = false, have_capacity = false, have_rule = false;
    int capacity = 0;
    TieBreak tie_break = TieBreak::ErrorOnTie;
    std::optional<std::pair<int, int>> menu_bounds;
    std::vector<std::pair<Line, std::vector<std::string>>> individual_lines;
    std::vector<std::pair<Line, std::vector<std::string>>> privilege_tokens;
    std::vector<Line> class_lines;
    PendingRule pending;

    for (const auto& line : lines) {
        const std::string& head = line.tokens[0];
        if (head == "scenario") {
            if (line.tokens.size() != 2) fail(line, 1, "expected a scenario name", "name");
            scenario.name = line.tokens[1];
        } else if (head == "dimension") {
            if (line.tokens.size() < 2 || line.tokens[1].back() != ':') {
                fail(line, 1, "expected 'dimension <name>:'", "<name>:");
            }
            Dimension dim;
            dim.name = line.tokens[1].substr(0, line.tokens[1].size() - 1);
            for (size_t i = 2; i < line.tokens.size(); ++i) dim.groups.push_back(line.tokens[i]);
            if (dim.groups.size() < 2) {
                fail(line, line.tokens.size() - 1, "dimension needs at least 2 groups",
                     "group names");
            }
            dims.push_back(std::move(dim));
        } else if (head == "scores:") {
            for (size_t i = 1; i < line.tokens.size(); ++i) {
                auto value = parse_rational(line.tokens[i]);
                if (!value) fail(line, i, "invalid score '" + line.tokens[i] + "'", "rational");
                score_values.push_back(*value);
            }
            if (score_values.empty()) fail(line, 1, "score set must be nonempty", "rationals");
            have_scores = true;
        } else if (head == "capacity:") {
            capacity = parse_int(line, 1, "capacity");
            have_capacity = true;
        } else if (head == "tie-break:") {
            if (line.tokens.size() != 2) fail(line, 1, "expected tie-break mode", "error|id");
            if (line.tokens[1] == "error") {
                tie_break = TieBreak::ErrorOnTie;
            } else if (line.tokens[1] == "id") {
                tie_break = TieBreak::ByIdAscending;
            } else {
                fail(line, 1, "unknown tie-break '" + line.tokens[1] + "'", "error|id");
            }
        } else if (head == "menus:") {
            int lo = parse_int(line, 1, "menu lower bound");
            int hi = parse_int(line, 2, "menu upper bound");
            menu_bounds = {lo, hi};
        } else if (head == "privilege:") {
            std::vector<std::string> parts(line.tokens.begin() + 1, line.tokens.end());
            privilege_tokens.emplace_back(line, parts);
        } else if (head == "individual") {
            std::vector<std::string> parts(line.tokens.begin() + 1, line.tokens.end());
            individual_lines.emplace_back(line, parts);
        } else if (head == "rule:") {
            if (pending.kind != PendingRule::Kind::None) {
                fail(line, 0, "duplicate rule declaration", "single rule");
            }
            if (line.tokens.size() < 2) fail(line, 1, "missing rule kind", "rule kind");
            const std::string& kind = line.tokens[1];
            pending.line = line;
            pending.args.assign(line.tokens.begin() + 2, line.tokens.end());
            if (kind == "supreme-court") {
                pending.kind = PendingRule::Kind::SupremeCourt;
            } else if (kind == "quota") {
                pending.kind = PendingRule::Kind::Quota;
            } else if (kind == "reserve") {
                pending.kind = PendingRule::Kind::Reserve;
            } else if (kind == "preference") {
                if (pending.args.empty()) {
                    fail(line, 2, "preference rule needs a form", "balanced-marginals|explicit");
                }
                if (pending.args[0] == "balanced-marginals") {
                    pending.kind = PendingRule::Kind::BalancedMarginals;
                } else if (pending.args[0] == "explicit") {
                    pending.kind = PendingRule::Kind::Explicit;
                } else {
                    fail(line, 2, "unknown preference form '" + pending.args[0] + "'",
                         "balanced-marginals|explicit");
                }
            } else {
                fail(line, 1, "unknown rule kind '" + kind + "'",
                     "supreme-court|quota|reserve|preference");
            }
            have_rule = true;
        } else if (head == "class:") {
            class_lines.push_back(line);
        } else if (head == "audits:") {
            for (size_t i = 1; i < line.tokens.size(); ++i) {
                auto kind = audit_kind_from_name(line.tokens[i]);
                if (!kind) fail(line, i, "unknown audit '" + line.tokens[i] + "'", "audit name");
                scenario.audits.push_back(*kind);
            }
        } else {
            fail(line, 0, "unknown section '" + head + "'",
                 "scenario|dimension|scores:|capacity:|tie-break:|menus:|privilege:|individual|"
                 "rule:|class:|audits:");
        }
    }

    const Line& last = lines.back();
    if (dims.empty()) fail(last, 0, "scenario declares no dimensions", "dimension lines");
    if (!have_scores) fail(last, 0, "scenario declares no scores", "scores: line");
    if (!have_capacity) fail(last, 0, "scenario declares no capacity", "capacity: line");
    if (!have_rule) fail(last, 0, "scenario declares no rule", "rule: line");

    try {
        scenario.schema = DimensionSchema(dims);
        scenario.scores = ScoreSet(score_values);
    } catch (const SchemaError& e) {
        throw ParseError(e.what(), last.number, 1, "");
    }

    // Individuals.
    std::map<std::string, int> seen_ids;
    for (const auto& [line, parts] : individual_lines) {
        size_t dims_count = scenario.schema.dimension_count();
        if (parts.size() != dims_count + 3 || parts[0].back() != ':' ||
            parts[dims_count + 1] != "score") {
            fail(line, 1, "expected 'individual <id>: <groups...> score <value>'",
                 "individual line");
        }
        ScoredIndividual individual;
        individual.id = parts[0].substr(0, parts[0].size() - 1);
        if (seen_ids.count(individual.id)) {
            fail(line, 1, "duplicate individual id '" + individual.id + "'", "unique id");
        }
        seen_ids[individual.id] = line.number;
        for (size_t l = 0; l < dims_count; ++l) {
            auto g = scenario.schema.group_index(l, parts[1 + l]);
            if (!g) {
                fail(line, 2 + l,
                     "unknown group '" + parts[1 + l] + "' in dimension '" +
                         scenario.schema.dimension(l).name + "'",
                     "group name");
            }
            individual.identity.push_back(*g);
        }
        auto value = parse_rational(parts[dims_count + 2]);
        auto index = value ? scenario.scores.index_of(*value) : std::nullopt;
        if (!index) {
            fail(line, parts.size(),
                 "score '" + parts[dims_count + 2] + "' of individual '" + individual.id +
                     "' is not in the score set",
                 "declared score");
        }
        individual.score = *index;
        scenario.universe.push_back(std::move(individual));
    }

    // Privilege.
    if (!privilege_tokens.empty()) {
        PrivilegeSpec spec;
        spec.privileged.assign(scenario.schema.dimension_count(), -1);
        for (const auto& [line, parts] : privilege_tokens) {
            for (size_t i = 0; i < parts.size(); ++i) {
                auto eq = parts[i].find('=');
                if (eq == std::string::npos) {
                    fail(line, 1 + i, "expected <dimension>=<group>", "dim=group");
                }
                auto dim = scenario.schema.dimension_index(parts[i].substr(0, eq));
                if (!dim) {
                    fail(line, 1 + i, "unknown dimension '" + parts[i].substr(0, eq) + "'",
                         "dimension name");
                }
                auto group = scenario.schema.group_index(*dim, parts[i].substr(eq + 1));
                if (!group) {
                    fail(line, 1 + i, "unknown group '" + parts[i].substr(eq + 1) + "'",
                         "group name");
                }
                spec.privileged[*dim] = *group;
            }
        }
        for (size_t l = 0; l < spec.privileged.size(); ++l) {
            if (spec.privileged[l] < 0) {
                fail(lines.back(), 0,
                     "privilege declaration missing dimension '" +
                         scenario.schema.dimension(l).name + "'",
                     "dim=group");
            }
        }
        scenario.privilege = spec;
    }

    // Rule.
    RuleSpec spec;
    spec.capacity = capacity;
    spec.tie_break = tie_break;
    switch (pending.kind) {
        case PendingRule::Kind::SupremeCourt: {
            SupremeCourtRule sc;
            for (size_t i = 0; i < pending.args.size(); ++i) {
                const std::string& arg = pending.args[i];
                auto eq = arg.find('=');
                if (eq == std::string::npos) {
                    fail(pending.line, 2 + i, "expected o=/r=/ow=/rw= parameters", "k=v");
                }
                std::string key = arg.substr(0, eq);
                int value;
                try {
                    value = std::stoi(arg.substr(eq + 1));
                } catch (...) {
                    fail(pending.line, 2 + i, "invalid integer in '" + arg + "'", "integer");
                }
                if (key == "o") {
                    sc.open_total = value;
                } else if (key == "r") {
                    sc.reserve_total = value;
                } else if (key == "ow") {
                    sc.open_women = value;
                } else if (key == "rw") {
                    sc.reserve_women = value;
                } else {
                    fail(pending.line, 2 + i, "unknown parameter '" + key + "'", "o|r|ow|rw");
                }
            }
            spec.rule = sc;
            break;
        }
        case PendingRule::Kind::Quota: {
            QuotaRule quota;
            for (size_t i = 0; i < pending.args.size(); ++i) {
                const std::string& arg = pending.args[i];
                auto eq = arg.find('=');
                if (eq == std::string::npos) {
                    fail(pending.line, 2 + i, "expected <identity>=<cap>", "identity=cap");
                }
                auto identity = scenario.schema.parse_identity(arg.substr(0, eq));
                if (!identity) {
                    fail(pending.line, 2 + i, "unknown identity '" + arg.substr(0, eq) + "'",
                         "comma-joined groups");
                }
                int cap;
                try {
                    cap = std::stoi(arg.substr(eq + 1));
                } catch (...) {
                    fail(pending.line, 2 + i, "invalid cap in '" + arg + "'", "integer");
                }
                quota.caps[*identity] = cap;
            }
            spec.rule = quota;
            break;
        }
        case PendingRule::Kind::Reserve: {
            ReserveRule reserve;
            for (size_t i = 0; i < pending.args.size(); ++i) {
                const std::string& arg = pending.args[i];
                if (arg == "open") {
                    reserve.slots.push_back(ReserveSlot{std::nullopt});
                } else {
                    auto identity = scenario.schema.parse_identity(arg);
                    if (!identity) {
                        fail(pending.line, 2 + i, "unknown slot '" + arg + "'",
                             "open or identity");
                    }
                    reserve.slots.push_back(ReserveSlot{*identity});
                }
            }
            spec.rule = reserve;
            break;
        }
        case PendingRule::Kind::BalancedMarginals: {
            spec.rule = PreferenceMaximizerRule{
                balanced_marginals_preference(scenario.schema, scenario.scores, capacity)};
            scenario.pref_sugar = Scenario::PrefSugar::BalancedMarginals;
            break;
        }
        case PendingRule::Kind::Explicit: {
            std::vector<std::vector<TypeProfile>> classes;
            for (const auto& line : class_lines) {
                std::vector<TypeProfile> cls;
                // Profiles are bracketed lists of identity@score entries.
                std::string joined;
                for (size_t i = 1; i < line.tokens.size(); ++i) {
                    if (i > 1) joined += ' ';
                    joined += line.tokens[i];
                }
                size_t pos = 0;
                while (pos < joined.size()) {
                    if (std::isspace(static_cast<unsigned char>(joined[pos]))) {
                        ++pos;
                        continue;
                    }
                    if (joined[pos] != '[') {
                        fail(line, 1, "expected '[' starting a profile", "[entries]");
                    }
                    size_t close = joined.find(']', pos);
                    if (close == std::string::npos) {
                        fail(line, 1, "unterminated profile", "]");
                    }
                    std::istringstream inner(joined.substr(pos + 1, close - pos - 1));
                    std::vector<TypeEntry> entries;
                    std::string item;
                    while (inner >> item) {
                        auto at = item.find('@');
                        if (at == std::string::npos) {
                            fail(line, 1, "profile entry '" + item + "' needs identity@score",
                                 "identity@score");
                        }
                        auto identity = scenario.schema.parse_identity(item.substr(0, at));
                        auto value = parse_rational(item.substr(at + 1));
                        auto index = value ? scenario.scores.index_of(*value) : std::nullopt;
                        if (!identity) {
                            fail(line, 1, "unknown identity in '" + item + "'", "identity");
                        }
                        if (!index) {
                            fail(line, 1, "unknown score in '" + item + "'", "declared score");
                        }
                        entries.push_back(TypeEntry{*identity, *index});
                    }
                    cls.push_back(TypeProfile::from_entries(std::move(entries)));
                    pos = close + 1;
                }
                classes.push_back(std::move(cls));
            }
            if (classes.empty()) {
                fail(pending.line, 1, "explicit preference needs class: lines", "class: lines");
            }
            try {
                spec.rule = PreferenceMaximizerRule{PreferenceTable::from_classes(classes)};
            } catch (const SchemaError& e) {
                fail(pending.line, 1, e.what(), "disjoint classes");
            }
            scenario.pref_sugar = Scenario::PrefSugar::Explicit;
            break;
        }
        case PendingRule::Kind::None: break;
    }
    if (pending.kind != PendingRule::Kind::Explicit && !class_lines.empty()) {
        fail(class_lines.front(), 0, "class: lines require 'rule: preference explicit'",
             "rule: preference explicit");
    }
    scenario.rule = std::move(spec);

    scenario.menu_min = menu_bounds ? menu_bounds->first : 1;
    scenario.menu_max =
        menu_bounds ? menu_bounds->second : static_cast<int>(scenario.universe.size());

    // Semantic validation through the rule constructor.
    try {
        ChoiceRule probe(scenario.rule, scenario.schema, scenario.scores);
    } catch (const AuditError& e) {
        throw ParseError(e.what(), pending.line.number, 1, "");
    }
    if (scenario.privilege) {
        try {
            validate_privilege(*scenario.privilege, scenario.schema);
        } catch (const AuditError& e) {
            throw ParseError(e.what(), lines.back().number, 1, "");
        }
    }
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "scenario " << scenario.name << "\n";
    for (const auto& dim : scenario.schema.dimensions()) {
        out << "dimension " << dim.name << ":";
        for (const auto& g : dim.groups) out << ' ' << g;
        out << "\n";
    }
    out << "scores:";
    for (const auto& v : scenario.scores.values()) out << ' ' << format_rational(v);
    out << "\n";
    out << "capacity: " << scenario.rule.capacity << "\n";
    out << "tie-break: "
        << (scenario.rule.tie_break == TieBreak::ErrorOnTie ? "error" : "id") << "\n";
    out << "menus: " << scenario.menu_min << ' ' << scenario.menu_max << "\n";
    if (scenario.privilege) {
        out << "privilege:";
        for (size_t l = 0; l < scenario.schema.dimension_count(); ++l) {
            out << ' ' << scenario.schema.dimension(l).name << '='
                << scenario.schema.dimension(l)
                       .groups[static_cast<size_t>(scenario.privilege->privileged[l])];
        }
        out << "\n";
    }
    for (const auto& individual : scenario.universe) {
        out << "individual " << individual.id << ":";
        for (size_t l = 0; l < individual.identity.size(); ++l) {
            out << ' '
                << scenario.schema.dimension(l)
                       .groups[static_cast<size_t>(individual.identity[l])];
        }
        out << " score " << format_rational(scenario.scores.value(individual.score)) << "\n";
    }

    if (const auto* sc = std::get_if<SupremeCourtRule>(&scenario.rule.rule)) {
        out << "rule: supreme-court o=" << sc->open_total << " r=" << sc->reserve_total
            << " ow=" << sc->open_women << " rw=" << sc->reserve_women << "\n";
    } else if (const auto* quota = std::get_if<QuotaRule>(&scenario.rule.rule)) {
        out << "rule: quota";
        for (const auto& [identity, cap] : quota->caps) {
            out << ' ' << scenario.schema.identity_name(identity) << '=' << cap;
        }
        out << "\n";
    } else if (const auto* reserve = std::get_if<ReserveRule>(&scenario.rule.rule)) {
        out << "rule: reserve";
        for (const auto& slot : reserve->slots) {
            out << ' '
                << (slot.reserved ? scenario.schema.identity_name(*slot.reserved) : "open");
        }
        out << "\n";
    } else if (const auto* pref = std::get_if<PreferenceMaximizerRule>(&scenario.rule.rule)) {
        if (scenario.pref_sugar == Scenario::PrefSugar::BalancedMarginals) {
            out << "rule: preference balanced-marginals\n";
        } else {
            out << "rule: preference explicit\n";
            for (const auto& cls : pref->table.classes()) {
                out << "class:";
                for (const auto& profile : cls) {
                    out << " [";
                    bool first = true;
                    for (const auto& e : profile.entries()) {
                        if (!first) out << ' ';
                        first = false;
                        out << scenario.schema.identity_name(e.identity) << '@'
                            << format_rational(scenario.scores.value(e.score));
                    }
                    out << ']';
                }
                out << "\n";
            }
        }
    }
    if (!scenario.audits.empty()) {
        out << "audits:";
        for (auto kind : scenario.audits) out << ' ' << audit_kind_name(kind);
        out << "\n";
    }
    return out.str();
}

}  // namespace divaudit
