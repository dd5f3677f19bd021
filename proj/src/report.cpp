#include "divaudit/report.hpp"

#include <chrono>
#include <sstream>

#include "divaudit/audits.hpp"
#include "divaudit/revealed.hpp"

namespace divaudit {

using nlohmann::json;

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::PreconditionUnmet: return "precondition-unmet";
        case Verdict::CapExceeded: return "cap-exceeded";
    }
    return "?";
}

json profile_json(const TypeProfile& profile, const DimensionSchema& schema,
                  const ScoreSet& scores) {
    json out = json::array();
    for (const auto& e : profile.entries()) {
        out.push_back(schema.identity_name(e.identity) + "@" +
                      format_rational(scores.value(e.score)));
    }
    return out;
}

json utility_json(const SeparableUtility& utility, const DimensionSchema& schema,
                  const ScoreSet& scores) {
    json u = json::object();
    for (size_t s = 0; s < utility.u.size(); ++s) {
        u[format_rational(scores.value(static_cast<ScoreIndex>(s)))] =
            format_rational(utility.u[s]);
    }
    json h = json::object();
    for (const auto& [identity, cumulative] : utility.h_cumulative) {
        json values = json::array();
        for (const auto& v : cumulative) values.push_back(format_rational(v));
        h[schema.identity_name(identity)] = values;
    }
    json guaranteed = json::object();
    for (const auto& [identity, n] : utility.guaranteed) {
        guaranteed[schema.identity_name(identity)] = n;
    }
    return json{{"u", u},
                {"h_cumulative", h},
                {"guaranteed_counts", guaranteed},
                {"u_bar", format_rational(utility.u_bar)},
                {"concave", utility.concave}};
}

namespace {

json cycle_json(const CycleWitness& witness, const DimensionSchema& schema,
                const ScoreSet& scores) {
    json steps = json::array();
    for (const auto& step : witness.steps) {
        json s{{"from", profile_json(step.from, schema, scores)},
               {"to", profile_json(step.to, schema, scores)},
               {"label", edge_label_name(step.label)}};
        if (step.menu_ids) s["menu"] = *step.menu_ids;
        steps.push_back(std::move(s));
    }
    return json{{"steps", steps}};
}

json substitutes_json(const SubstitutesViolation& v, const DimensionSchema& schema,
                      const ScoreSet& scores) {
    std::vector<std::string> removed;
    for (const auto& id : v.big_menu_ids) {
        if (std::find(v.small_menu_ids.begin(), v.small_menu_ids.end(), id) ==
            v.small_menu_ids.end()) {
            removed.push_back(id);
        }
    }
    json small_choices = json::array();
    for (const auto& p : v.small_menu_choices) {
        small_choices.push_back(profile_json(p, schema, scores));
    }
    return json{{"big_menu", v.big_menu_ids},
                {"small_menu", v.small_menu_ids},
                {"removed", removed},
                {"kept", profile_json(v.kept, schema, scores)},
                {"kept_ids", v.kept_ids},
                {"chosen_from_big", profile_json(v.chosen_from_big, schema, scores)},
                {"small_menu_choices", small_choices}};
}

json wgr_json(const WgrViolation& v, const DimensionSchema& schema, const ScoreSet& scores) {
    return json{{"menu", v.menu_ids},
                {"high_id", v.high_id},
                {"low_id", v.low_id},
                {"kept_ids", v.kept_ids},
                {"chosen_with_low", profile_json(v.chosen_with_low, schema, scores)},
                {"rejected_with_high", profile_json(v.rejected_with_high, schema, scores)}};
}

json gs_json(const GrossSubstitutesViolation& v, const DimensionSchema& schema,
             const ScoreSet& scores) {
    json lowered = json::object();
    for (const auto& [id, value] : v.lowered) lowered[id] = format_rational(value);
    json perturbed = json::array();
    for (const auto& p : v.perturbed_choices) perturbed.push_back(profile_json(p, schema, scores));
    return json{{"menu", v.menu_ids},
                {"chosen", profile_json(v.chosen, schema, scores)},
                {"kept", profile_json(v.kept, schema, scores)},
                {"kept_ids", v.kept_ids},
                {"lowered", lowered},
                {"perturbed_choices", perturbed}};
}

json pair_element_json(const PairElement& e, const DimensionSchema& schema,
                       const ScoreSet& scores) {
    return json{{"score", format_rational(scores.value(e.score))},
                {"identity", schema.identity_name(e.identity)},
                {"n", e.count}};
}

json tversky_json(const TverskyCycle& cycle, const DimensionSchema& schema,
                  const ScoreSet& scores) {
    json rows = json::array();
    for (const auto& row : cycle.rows) {
        rows.push_back(json{{"left", pair_element_json(row.left, schema, scores)},
                            {"right", pair_element_json(row.right, schema, scores)}});
    }
    return json{{"rows", rows}};
}

struct AuditContext {
    const Scenario& scenario;
    const Limits& limits;
    const ChoiceRule& rule;
};

MenuFamilyConfig family_config(const AuditContext& ctx) {
    MenuFamilyConfig config;
    config.universe = ctx.scenario.universe;
    config.min_size = ctx.scenario.menu_min;
    config.max_size = ctx.scenario.menu_max;
    config.max_enumeration = ctx.limits.max_menu_enum;
    return config;
}

AuditOutcome run_cycle_audit(const AuditContext& ctx, AuditKind kind) {
    AuditOutcome outcome;
    outcome.kind = kind;
    RelationToggles toggles;
    if (kind == AuditKind::ScoreRationality || kind == AuditKind::ScpRationality) {
        toggles.score = true;
    }
    if (kind == AuditKind::ScpRationality) {
        if (!ctx.scenario.privilege) {
            outcome.verdict = Verdict::PreconditionUnmet;
            outcome.details["note"] = "scenario declares no privileged groups";
            return outcome;
        }
        toggles.privilege = ctx.scenario.privilege;
    }
    RevealedGraph graph = build_revealed_graph(ctx.rule, family_config(ctx), toggles);
    std::optional<CycleWitness> witness;
    switch (kind) {
        case AuditKind::Rationality: witness = find_choice_cycle(graph); break;
        case AuditKind::ScoreRationality: witness = find_score_choice_cycle(graph); break;
        default: witness = find_scp_cycle(graph); break;
    }
    outcome.details["nodes"] = graph.nodes.size();
    outcome.details["edges"] = graph.edges.size();
    if (!witness) {
        outcome.verdict = Verdict::Pass;
        outcome.details["menu_family_caveat"] = kMenuFamilyCaveat;
        return outcome;
    }
    outcome.verdict = Verdict::Fail;
    outcome.details["cycle"] = cycle_json(*witness, ctx.rule.schema(), ctx.rule.scores());
    outcome.details["replayed"] =
        replay_cycle(*witness, ctx.rule, ctx.scenario.universe, ctx.scenario.privilege);
    return outcome;
}

AuditOutcome run_one_audit(const AuditContext& ctx, AuditKind kind) {
    AuditOutcome outcome;
    outcome.kind = kind;
    const auto& schema = ctx.rule.schema();
    const auto& scores = ctx.rule.scores();
    const auto* pref = std::get_if<PreferenceMaximizerRule>(&ctx.scenario.rule.rule);

    switch (kind) {
        case AuditKind::Rationality:
        case AuditKind::ScoreRationality:
        case AuditKind::ScpRationality:
            return run_cycle_audit(ctx, kind);

        case AuditKind::Substitutes: {
            auto violation = check_substitutes(ctx.rule, ctx.scenario.universe,
                                               ctx.limits.max_menu_enum);
            if (!violation) {
                outcome.verdict = Verdict::Pass;
                outcome.details["menu_family_caveat"] = kMenuFamilyCaveat;
            } else {
                outcome.verdict = Verdict::Fail;
                outcome.details["violation"] = substitutes_json(*violation, schema, scores);
            }
            return outcome;
        }
        case AuditKind::GrossSubstitutes: {
            auto violation = check_gross_substitutes(ctx.rule, ctx.scenario.universe,
                                                     ctx.limits.gs_perturb,
                                                     ctx.limits.max_menu_enum);
            if (!violation) {
                outcome.verdict = Verdict::Pass;
                outcome.details["menu_family_caveat"] = kMenuFamilyCaveat;
                outcome.details["max_lowered"] = ctx.limits.gs_perturb;
            } else {
                outcome.verdict = Verdict::Fail;
                outcome.details["violation"] = gs_json(*violation, schema, scores);
            }
            return outcome;
        }
        case AuditKind::WgResponsiveness: {
            auto violation = check_wg_responsiveness(ctx.rule, ctx.scenario.universe,
                                                     ctx.limits.max_menu_enum);
            if (!violation) {
                outcome.verdict = Verdict::Pass;
                outcome.details["menu_family_caveat"] = kMenuFamilyCaveat;
            } else {
                outcome.verdict = Verdict::Fail;
                outcome.details["violation"] = wgr_json(*violation, schema, scores);
            }
            return outcome;
        }
        case AuditKind::Intersectionality: {
            if (!pref) {
                outcome.verdict = Verdict::PreconditionUnmet;
                outcome.details["note"] = "audit applies to preference-maximizer rules";
                return outcome;
            }
            bool ignores = pref_ignores_intersectionality(pref->table, schema, scores.size());
            auto diversity =
                pref_values_diversity(pref->table, ctx.scenario.rule.capacity, schema);
            outcome.details["ignores_intersectionality"] = ignores;
            outcome.details["values_diversity"] = diversity.values_diversity;
            if (!ignores || !diversity.values_diversity ||
                schema.dimension_count() < 2) {
                outcome.verdict = Verdict::PreconditionUnmet;
                outcome.details["note"] =
                    "counterexample construction needs >= 2 dimensions, no intersectionality, "
                    "and diversity-valuing preferences";
                return outcome;
            }
            auto counterexample = intersectionality_counterexample(
                pref->table, ctx.scenario.rule.capacity, schema);
            outcome.verdict = Verdict::Fail;  // substitutes provably fails
            json universe_ids = json::array();
            for (const auto& ind : counterexample.universe) {
                universe_ids.push_back(ind.id + ":" + schema.identity_name(ind.identity));
            }
            outcome.details["constructed_universe"] = universe_ids;
            outcome.details["constructive_route"] = counterexample.constructive;
            outcome.details["violation"] =
                substitutes_json(counterexample.violation, schema, scores);
            return outcome;
        }
        case AuditKind::ValuesDiversity: {
            if (!pref) {
                outcome.verdict = Verdict::PreconditionUnmet;
                outcome.details["note"] = "audit applies to preference-maximizer rules";
                return outcome;
            }
            auto result = pref_values_diversity(pref->table, ctx.scenario.rule.capacity, schema);
            outcome.verdict = result.values_diversity ? Verdict::Pass : Verdict::Fail;
            outcome.details["vacuous"] = result.vacuous;
            if (result.boundary_top) {
                outcome.details["boundary_top"] =
                    profile_json(*result.boundary_top, schema, scores);
            }
            return outcome;
        }
        case AuditKind::Acyclicity: {
            auto relation = extract_pairwise_relation(ctx.rule, ctx.scenario.universe,
                                                      ctx.limits.max_menu_enum);
            outcome.details["relation_size"] = relation.size();
            auto feasibility = lp_feasibility(relation, scores.size(), schema.all_identities(),
                                              ctx.scenario.rule.capacity, false);
            if (feasibility.feasible) {
                outcome.verdict = Verdict::Pass;
                outcome.details["menu_family_caveat"] = kMenuFamilyCaveat;
            } else {
                outcome.verdict = Verdict::Fail;
                int bound = std::min<int>(static_cast<int>(relation.size()), 6);
                std::optional<TverskyCycle> cycle;
                if (bound >= 2) cycle = find_tversky_cycle(relation, bound);
                if (!cycle) cycle = feasibility.certificate;
                if (cycle) outcome.details["cycle"] = tversky_json(*cycle, schema, scores);
            }
            return outcome;
        }
        case AuditKind::Separability: {
            auto result = synthesize_separable(ctx.rule, ctx.scenario.universe,
                                               ctx.limits.max_menu_enum, false,
                                               ctx.limits.guaranteed_cap);
            if (result.success()) {
                outcome.verdict = Verdict::Pass;
                outcome.details["utility"] = utility_json(*result.utility, schema, scores);
                outcome.details["menu_family_caveat"] = kMenuFamilyCaveat;
                return outcome;
            }
            const auto& failure = *result.failure;
            switch (failure.kind) {
                case SynthesisFailure::Kind::Precondition:
                    outcome.verdict = Verdict::PreconditionUnmet;
                    break;
                case SynthesisFailure::Kind::CapExceeded:
                    outcome.verdict = Verdict::CapExceeded;
                    break;
                default: outcome.verdict = Verdict::Fail; break;
            }
            outcome.details["reason"] = failure.message;
            if (failure.substitutes) {
                outcome.details["substitutes_violation"] =
                    substitutes_json(*failure.substitutes, schema, scores);
            }
            if (failure.wgr) {
                outcome.details["wg_responsiveness_violation"] =
                    wgr_json(*failure.wgr, schema, scores);
            }
            if (failure.cycle) {
                outcome.details["cycle"] = tversky_json(*failure.cycle, schema, scores);
            }
            return outcome;
        }
        case AuditKind::OpenFirst: {
            if (!std::holds_alternative<ReserveRule>(ctx.scenario.rule.rule)) {
                outcome.verdict = Verdict::PreconditionUnmet;
                outcome.details["note"] = "audit applies to reserve rules";
                return outcome;
            }
            auto diagnostic = open_first_diagnostic(ctx.rule);
            outcome.verdict = Verdict::Fail;  // an open-before-reserve order is never separable
            outcome.details["cycle"] = tversky_json(diagnostic.cycle, schema, scores);
            outcome.details["validated"] = validate_tversky_cycle(diagnostic.cycle);
            return outcome;
        }
        case AuditKind::CanonicalScores: {
            if (!pref) {
                outcome.verdict = Verdict::PreconditionUnmet;
                outcome.details["note"] = "audit applies to preference-maximizer rules";
                return outcome;
            }
            auto result = canonicalize_scores(pref->table, schema, scores.size());
            if (const auto* canonical = std::get_if<ScoreCanonicalization>(&result)) {
                outcome.verdict = Verdict::Pass;
                json classes = json::array();
                for (const auto& cls : canonical->classes) {
                    json values = json::array();
                    for (ScoreIndex s : cls) values.push_back(format_rational(scores.value(s)));
                    classes.push_back(values);
                }
                outcome.details["score_classes_ascending"] = classes;
            } else {
                const auto& failure = std::get<UniformityFailure>(result);
                outcome.verdict = Verdict::Fail;
                if (failure.merge_conflict) {
                    outcome.details["merge_conflict"] = json::array(
                        {profile_json(failure.merge_conflict->first, schema, scores),
                         profile_json(failure.merge_conflict->second, schema, scores)});
                } else {
                    outcome.details["witness"] =
                        json{{"identity_a", schema.identity_name(failure.theta_a)},
                             {"identity_b", schema.identity_name(failure.theta_b)},
                             {"score_a", format_rational(scores.value(failure.score_high))},
                             {"score_b", format_rational(scores.value(failure.score_low))}};
                }
            }
            return outcome;
        }
    }
    return outcome;
}

}  // namespace

Report run_audits(const Scenario& scenario, const Limits& limits) {
    Report report;
    report.scenario = scenario;
    ChoiceRule rule(scenario.rule, scenario.schema, scenario.scores);
    AuditContext ctx{scenario, limits, rule};

    bool universe_too_big =
        static_cast<int>(scenario.universe.size()) > limits.max_universe;

    for (AuditKind kind : scenario.audits) {
        auto start = std::chrono::steady_clock::now();
        AuditOutcome outcome;
        outcome.kind = kind;
        if (universe_too_big) {
            outcome.verdict = Verdict::CapExceeded;
            outcome.details["note"] = "universe exceeds --max-universe";
        } else {
            try {
                outcome = run_one_audit(ctx, kind);
            } catch (const CapExceededError& e) {
                outcome.verdict = Verdict::CapExceeded;
                outcome.details = json{{"note", e.what()}};
            } catch (const ParseError&) {
                throw;
            } catch (const AuditError& e) {
                outcome.verdict = Verdict::PreconditionUnmet;
                outcome.details = json{{"note", e.what()}};
            }
        }
        auto end = std::chrono::steady_clock::now();
        outcome.millis = std::chrono::duration<double, std::milli>(end - start).count();
        report.results.push_back(std::move(outcome));
    }
    return report;
}

std::string emit_report_json(const Report& report, bool include_timing) {
    json results = json::array();
    for (const auto& outcome : report.results) {
        json entry{{"audit", audit_kind_name(outcome.kind)},
                   {"verdict", verdict_name(outcome.verdict)},
                   {"details", outcome.details},
                   {"time_ms", include_timing ? outcome.millis : 0.0}};
        results.push_back(std::move(entry));
    }
    json out{{"schema_version", kReportSchemaVersion},
             {"scenario", json{{"name", report.scenario.name},
                               {"source", serialize_scenario(report.scenario)}}},
             {"results", results},
             {"menu_family_caveat", report.caveat}};
    return out.dump(2) + "\n";
}

std::string emit_report_text(const Report& report, bool include_timing) {
    std::ostringstream out;
    out << "scenario: " << report.scenario.name << "\n";
    for (const auto& outcome : report.results) {
        out << "  " << audit_kind_name(outcome.kind) << ": " << verdict_name(outcome.verdict);
        if (include_timing) out << " (" << outcome.millis << " ms)";
        out << "\n";
        if (outcome.details.contains("note")) {
            out << "    note: " << outcome.details["note"].get<std::string>() << "\n";
        }
        if (outcome.details.contains("reason")) {
            out << "    reason: " << outcome.details["reason"].get<std::string>() << "\n";
        }
        if (outcome.verdict == Verdict::Fail) {
            out << "    witness: " << outcome.details.dump() << "\n";
        }
    }
    out << "caveat: " << report.caveat << "\n";
    return out.str();
}

int report_exit_code(const Report& report) {
    for (const auto& outcome : report.results) {
        if (outcome.verdict == Verdict::Fail) return 1;
    }
    return 0;
}

}  // namespace divaudit
