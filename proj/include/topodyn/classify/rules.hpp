#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topodyn/classify/report.hpp"

namespace topodyn {

/// A property asserted positively or negated. A negated literal is satisfied
/// only by Refuted, which counts as a definitive negation.
struct Literal {
    Property property;
    bool negated = false;
};

enum FlagMask : unsigned {
    needs_none = 0,
    needs_f_semigroup = 1U << 0,
    needs_c_semigroup = 1U << 1,
    needs_polish = 1U << 2,
};

/// One directed instance of a rule. Biconditional rules contribute several
/// instances sharing an id.
struct ImplicationRule {
    std::string_view id;
    std::string_view anchor;
    unsigned flags = needs_none;
    std::vector<Literal> premises;
    std::vector<Literal> conclusions;
};

struct Violation {
    std::string rule;
    std::string anchor;
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

namespace rule_anchor {
inline constexpr std::string_view r1 = "PT on a perfect space under an F-semigroup implies TT";
inline constexpr std::string_view r2 = "TT on a Polish space implies DPT";
inline constexpr std::string_view r3 = "DPT implies TT";
inline constexpr std::string_view r4 = "TT implies Eq(X) is contained in Trans(X)";
inline constexpr std::string_view r5 = "C-semigroup, PT and Eq(X) nonempty imply Trans(X) is contained in Eq(X)";
inline constexpr std::string_view r6 = "C-semigroup, minimal and Eq(X) nonempty imply equicontinuous";
inline constexpr std::string_view r7 = "C-semigroup, Polish, TT: almost equicontinuous iff Eq(X) nonempty";
inline constexpr std::string_view r8 = "C-semigroup, Polish, TT: almost equicontinuous iff not sensitive";
inline constexpr std::string_view r9 = "C-semigroup, Polish M-system with Eq(X) nonempty is minimal and equicontinuous";
inline constexpr std::string_view r10 = "C-semigroup, Polish M-system that is not minimal or not equicontinuous is sensitive";
inline constexpr std::string_view r11 = "P-system implies M-system";
inline constexpr std::string_view r12 = "dense periodic points imply dense almost periodic points";
inline constexpr std::string_view d_p = "PSystem is TT together with dense periodic points";
inline constexpr std::string_view d_m = "MSystem is TT together with dense almost periodic points";
} // namespace rule_anchor

/// System-level rule instances R1-R3 and R6-R12. R4 and R5 act on point
/// observations and are handled separately.
inline const std::vector<ImplicationRule>& implication_rules()
{
    using P = Property;
    constexpr unsigned cp = needs_c_semigroup | needs_polish;
    static const std::vector<ImplicationRule> rules{
        {"R1", rule_anchor::r1, needs_f_semigroup, {{P::perfect}, {P::pt}}, {{P::tt}}},
        {"R2", rule_anchor::r2, needs_polish, {{P::tt}}, {{P::dpt}}},
        {"R3", rule_anchor::r3, needs_none, {{P::dpt}}, {{P::tt}}},
        {"R6", rule_anchor::r6, needs_c_semigroup, {{P::minimal}, {P::eq_nonempty}}, {{P::equicontinuous}}},
        {"R7", rule_anchor::r7, cp, {{P::tt}, {P::almost_equicontinuous}}, {{P::eq_nonempty}}},
        {"R7", rule_anchor::r7, cp, {{P::tt}, {P::eq_nonempty}}, {{P::almost_equicontinuous}}},
        {"R7", rule_anchor::r7, cp, {{P::tt}, {P::almost_equicontinuous, true}}, {{P::eq_nonempty, true}}},
        {"R7", rule_anchor::r7, cp, {{P::tt}, {P::eq_nonempty, true}}, {{P::almost_equicontinuous, true}}},
        {"R8", rule_anchor::r8, cp, {{P::tt}, {P::almost_equicontinuous}}, {{P::sensitive, true}}},
        {"R8", rule_anchor::r8, cp, {{P::tt}, {P::sensitive, true}}, {{P::almost_equicontinuous}}},
        {"R8", rule_anchor::r8, cp, {{P::tt}, {P::sensitive}}, {{P::almost_equicontinuous, true}}},
        {"R8", rule_anchor::r8, cp, {{P::tt}, {P::almost_equicontinuous, true}}, {{P::sensitive}}},
        {"R9", rule_anchor::r9, cp, {{P::m_system}, {P::eq_nonempty}}, {{P::minimal}, {P::equicontinuous}}},
        {"R10", rule_anchor::r10, cp, {{P::m_system}, {P::minimal, true}}, {{P::sensitive}}},
        {"R10", rule_anchor::r10, cp, {{P::m_system}, {P::equicontinuous, true}}, {{P::sensitive}}},
        {"R11", rule_anchor::r11, needs_none, {{P::p_system}}, {{P::m_system}}},
        {"R12", rule_anchor::r12, needs_none, {{P::periodic_dense}}, {{P::bronstein_dense}}},
        {"D-PSystem", rule_anchor::d_p, needs_none, {{P::tt}, {P::periodic_dense}}, {{P::p_system}}},
        {"D-PSystem", rule_anchor::d_p, needs_none, {{P::p_system}}, {{P::tt}, {P::periodic_dense}}},
        {"D-PSystem", rule_anchor::d_p, needs_none, {{P::tt, true}}, {{P::p_system, true}}},
        {"D-PSystem", rule_anchor::d_p, needs_none, {{P::periodic_dense, true}}, {{P::p_system, true}}},
        {"D-MSystem", rule_anchor::d_m, needs_none, {{P::tt}, {P::bronstein_dense}}, {{P::m_system}}},
        {"D-MSystem", rule_anchor::d_m, needs_none, {{P::m_system}}, {{P::tt}, {P::bronstein_dense}}},
        {"D-MSystem", rule_anchor::d_m, needs_none, {{P::tt, true}}, {{P::m_system, true}}},
        {"D-MSystem", rule_anchor::d_m, needs_none, {{P::bronstein_dense, true}}, {{P::m_system, true}}},
    };
    return rules;
}

namespace detail {

inline bool flags_met(const StructuralFlags& f, unsigned need)
{
    return (!(need & needs_f_semigroup) || f.f_semigroup) && (!(need & needs_c_semigroup) || f.c_semigroup) &&
           (!(need & needs_polish) || f.polish);
}

/// Evidence strength for a literal: Proven or Witnessed when it holds, else nullopt.
inline std::optional<Status> literal_strength(const ClassificationReport& r, Literal l)
{
    Status s = r.status(l.property);
    if (l.negated) {
        return s == Status::refuted ? std::optional<Status>{Status::proven} : std::nullopt;
    }
    return holds(s) ? std::optional<Status>{s} : std::nullopt;
}

/// True when the literal is definitively false in the report.
inline bool literal_contradicted(const ClassificationReport& r, Literal l)
{
    Status s = r.status(l.property);
    return l.negated ? holds(s) : s == Status::refuted;
}

inline std::string describe_literal(const ClassificationReport& r, Literal l)
{
    std::string out(l.negated ? "not " : "");
    out += to_string(l.property);
    out += "=";
    out += to_string(r.status(l.property));
    return out;
}

inline std::string describe_premises(const ClassificationReport& r, const std::vector<Literal>& ls)
{
    std::string out;
    for (const auto& l : ls) {
        if (!out.empty()) {
            out += ", ";
        }
        out += describe_literal(r, l);
    }
    return out;
}

} // namespace detail

/// Forward-chains the rule table to a fixed point. Positive conclusions take
/// the weakest premise strength; negated conclusions need Proven premises.
/// Statuses only ever move up, so the loop terminates.
inline ClassificationReport derive_closure(ClassificationReport report)
{
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : implication_rules()) {
            if (!detail::flags_met(report.flags, rule.flags)) {
                continue;
            }
            Status strength = Status::proven;
            bool fires = true;
            for (const auto& l : rule.premises) {
                auto s = detail::literal_strength(report, l);
                if (!s) {
                    fires = false;
                    break;
                }
                strength = std::min(strength, *s);
            }
            if (!fires) {
                continue;
            }
            for (const auto& c : rule.conclusions) {
                auto& v = report[c.property];
                std::string why = std::string(rule.id) + " from " + detail::describe_premises(report, rule.premises);
                if (c.negated) {
                    if (strength == Status::proven && v.status == Status::unknown) {
                        v.status = Status::refuted;
                        v.witness = std::move(why);
                        changed = true;
                    }
                } else if (v.status == Status::unknown || (v.status == Status::witnessed && strength == Status::proven)) {
                    v.status = strength;
                    v.witness = std::move(why);
                    changed = true;
                }
            }
        }

        // R4 and R5 on the probed points.
        const bool r4 = holds(report.status(Property::tt));
        const bool r5 = report.flags.c_semigroup && holds(report.status(Property::pt)) &&
                        holds(report.status(Property::eq_nonempty));
        for (auto& pt : report.points) {
            if (r4 && holds(pt.eq)) {
                Status s = std::min(report.status(Property::tt), pt.eq);
                if (pt.trans == Status::unknown || (pt.trans == Status::witnessed && s == Status::proven)) {
                    pt.trans = s;
                    pt.derived_by = "R4";
                    changed = true;
                }
            }
            if (r5 && holds(pt.trans)) {
                Status s = std::min({report.status(Property::pt), report.status(Property::eq_nonempty), pt.trans});
                if (pt.eq == Status::unknown || (pt.eq == Status::witnessed && s == Status::proven)) {
                    pt.eq = s;
                    pt.derived_by = "R5";
                    changed = true;
                }
            }
        }
    }
    return report;
}

/// Rule instances whose premises all hold (Witnessed or better) while a
/// conclusion is definitively false. Biconditional conflicts surface through
/// their directed instances.
inline std::vector<Violation> check_consistency(const ClassificationReport& report)
{
    std::vector<Violation> out;
    auto seen = [&](std::string_view id, const std::string& detail) {
        return std::any_of(out.begin(), out.end(),
                           [&](const Violation& v) { return v.rule == id && v.detail == detail; });
    };
    for (const auto& rule : implication_rules()) {
        if (!detail::flags_met(report.flags, rule.flags)) {
            continue;
        }
        bool premises = std::all_of(rule.premises.begin(), rule.premises.end(),
                                    [&](Literal l) { return detail::literal_strength(report, l).has_value(); });
        if (!premises) {
            continue;
        }
        for (const auto& c : rule.conclusions) {
            if (detail::literal_contradicted(report, c)) {
                std::string detail = detail::describe_premises(report, rule.premises) + " but " +
                                     detail::describe_literal(report, c) + (c.negated ? "" : " (expected to hold)");
                if (!seen(rule.id, detail)) {
                    out.push_back({std::string(rule.id), std::string(rule.anchor), std::move(detail)});
                }
            }
        }
    }
    const bool r4 = holds(report.status(Property::tt));
    const bool r5 = report.flags.c_semigroup && holds(report.status(Property::pt)) &&
                    holds(report.status(Property::eq_nonempty));
    for (const auto& pt : report.points) {
        if (r4 && holds(pt.eq) && pt.trans == Status::refuted) {
            out.push_back({"R4", std::string(rule_anchor::r4), "point " + pt.point + " is equicontinuous but not transitive"});
        }
        if (r5 && holds(pt.trans) && pt.eq == Status::refuted) {
            out.push_back({"R5", std::string(rule_anchor::r5), "point " + pt.point + " is transitive but not equicontinuous"});
        }
    }
    return out;
}

} // namespace topodyn
