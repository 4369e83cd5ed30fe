#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "topodyn/classify/rules.hpp"
#include "topodyn/symbolic/sft.hpp"

using namespace topodyn;
using P = Property;

namespace {

ClassificationReport blank(bool c_semigroup = false, bool polish = true)
{
    ClassificationReport r;
    r.system = "test";
    r.flags.c_semigroup = c_semigroup;
    r.flags.f_semigroup = c_semigroup;
    r.flags.polish = polish;
    return r;
}

Status random_status(std::mt19937_64& rng)
{
    // Unknown is over-represented so that rules have room to fire.
    switch (rng() % 6) {
    case 0: return Status::refuted;
    case 1: return Status::witnessed;
    case 2: return Status::proven;
    default: return Status::unknown;
    }
}

ClassificationReport random_report(std::mt19937_64& rng)
{
    auto r = blank();
    r.flags.f_semigroup = rng() % 2;
    r.flags.c_semigroup = r.flags.f_semigroup || rng() % 2;
    r.flags.polish = rng() % 4 != 0;
    for (auto p : all_properties) {
        r.set(p, random_status(rng), "input");
    }
    std::size_t points = rng() % 3;
    for (std::size_t i = 0; i < points; ++i) {
        r.points.push_back({"p" + std::to_string(i), random_status(rng), random_status(rng), {}});
    }
    return r;
}

std::set<std::string> rule_ids(const std::vector<Violation>& vs)
{
    std::set<std::string> out;
    for (const auto& v : vs) {
        out.insert(v.rule);
    }
    return out;
}

bool has_rule(const std::vector<Violation>& vs, std::string_view id)
{
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.rule == id; });
}

// The evidence a rule gives its conclusions: weakest premise, or nullopt if a premise fails.
std::optional<Status> premise_strength(const ClassificationReport& r, const ImplicationRule& rule)
{
    Status s = Status::proven;
    for (auto l : rule.premises) {
        auto ls = detail::literal_strength(r, l);
        if (!ls) {
            return std::nullopt;
        }
        s = std::min(s, *ls);
    }
    return s;
}

} // namespace

TEST(Closure, PSystemGivesMSystemByR11)
{
    auto r = blank();
    r.set(P::p_system, Status::proven);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::m_system), Status::proven);
    EXPECT_EQ(c[P::m_system].witness.rfind("R11", 0), 0U) << c[P::m_system].witness;
    EXPECT_EQ(c.status(P::tt), Status::proven);
    EXPECT_EQ(c.status(P::periodic_dense), Status::proven);
    EXPECT_EQ(c.status(P::bronstein_dense), Status::proven);
}

TEST(Closure, NonMinimalMSystemIsSensitiveByR10)
{
    auto r = blank(true);
    r.set(P::m_system, Status::proven);
    r.set(P::minimal, Status::refuted);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::sensitive), Status::proven);
    EXPECT_EQ(c[P::sensitive].witness.rfind("R10", 0), 0U) << c[P::sensitive].witness;
    EXPECT_EQ(c.status(P::almost_equicontinuous), Status::refuted);
    EXPECT_TRUE(check_consistency(c).empty());
}

TEST(Closure, WitnessedTransitivityGivesWitnessedDptByR2)
{
    auto r = blank();
    r.set(P::tt, Status::witnessed);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::dpt), Status::witnessed);
    EXPECT_EQ(c[P::dpt].witness, "R2 from TT=Witnessed");
}

TEST(Closure, RulesNeedTheirStructuralFlags)
{
    auto r = blank(false, false);
    r.set(P::tt, Status::witnessed);
    r.set(P::m_system, Status::proven);
    r.set(P::minimal, Status::refuted);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::dpt), Status::unknown);
    EXPECT_EQ(c.status(P::sensitive), Status::unknown);
}

TEST(Closure, NegatedConclusionsNeedProvenPremises)
{
    auto r = blank(true);
    r.set(P::tt, Status::witnessed);
    r.set(P::sensitive, Status::witnessed);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::almost_equicontinuous), Status::unknown);
    r.set(P::tt, Status::proven);
    r.set(P::sensitive, Status::proven);
    c = derive_closure(r);
    EXPECT_EQ(c.status(P::almost_equicontinuous), Status::refuted);
    EXPECT_EQ(c[P::almost_equicontinuous].witness, "R8 from TT=Proven, Sensitive=Proven");
}

TEST(Closure, RefutedTransitivityRefutesBothSystems)
{
    auto r = blank();
    r.set(P::tt, Status::refuted);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::p_system), Status::refuted);
    EXPECT_EQ(c.status(P::m_system), Status::refuted);
    EXPECT_EQ(c.status(P::dpt), Status::unknown);
}

TEST(Closure, WitnessedIsUpgradedButNeverDowngraded)
{
    auto r = blank();
    r.set(P::dpt, Status::witnessed);
    r.set(P::p_system, Status::proven);
    r.set(P::bronstein_dense, Status::refuted);
    auto c = derive_closure(r);
    EXPECT_EQ(c.status(P::dpt), Status::proven);
    EXPECT_EQ(c.status(P::bronstein_dense), Status::refuted);
    EXPECT_TRUE(has_rule(check_consistency(c), "R12"));
}

TEST(Closure, PointRulesR4AndR5)
{
    auto r = blank(true);
    r.set(P::tt, Status::proven);
    r.set(P::pt, Status::witnessed);
    r.set(P::eq_nonempty, Status::proven);
    r.points.push_back({"a", Status::proven, Status::unknown, {}});
    r.points.push_back({"b", Status::unknown, Status::witnessed, {}});
    auto c = derive_closure(r);
    EXPECT_EQ(c.points[0].trans, Status::proven);
    EXPECT_EQ(c.points[0].derived_by, "R4");
    EXPECT_EQ(c.points[1].eq, Status::witnessed);
    EXPECT_EQ(c.points[1].derived_by, "R5");
}

TEST(Consistency, RotationLikeReportIsClean)
{
    auto r = blank(true);
    r.flags.group = true;
    r.flags.isometric = true;
    for (auto p : {P::tt, P::pt, P::dpt, P::minimal}) {
        r.set(p, Status::witnessed);
    }
    for (auto p : {P::equicontinuous, P::eq_nonempty, P::almost_equicontinuous, P::infinite, P::perfect}) {
        r.set(p, Status::proven);
    }
    r.set(P::sensitive, Status::refuted);
    r.set(P::periodic_dense, Status::unknown);
    auto c = derive_closure(r);
    EXPECT_TRUE(check_consistency(c).empty());
    EXPECT_EQ(c.status(P::bronstein_dense), Status::unknown);
}

TEST(Consistency, HandCraftedR10Violation)
{
    auto r = blank(true);
    r.set(P::m_system, Status::proven);
    r.set(P::minimal, Status::refuted);
    r.set(P::sensitive, Status::refuted);
    auto v = check_consistency(r);
    ASSERT_TRUE(has_rule(v, "R10"));
    auto it = std::find_if(v.begin(), v.end(), [](const Violation& x) { return x.rule == "R10"; });
    EXPECT_EQ(it->anchor, rule_anchor::r10);
    EXPECT_NE(it->detail.find("Sensitive=Refuted"), std::string::npos);
}

TEST(Consistency, HandCraftedR8Violation)
{
    auto r = blank(true);
    r.set(P::tt, Status::proven);
    r.set(P::almost_equicontinuous, Status::witnessed);
    r.set(P::sensitive, Status::witnessed);
    auto v = check_consistency(r);
    EXPECT_TRUE(has_rule(v, "R8"));
    EXPECT_FALSE(has_rule(v, "R7"));
    r.flags.polish = false;
    EXPECT_TRUE(check_consistency(r).empty());
}

TEST(Consistency, PointViolations)
{
    auto r = blank(true);
    r.set(P::tt, Status::witnessed);
    r.points.push_back({"x", Status::witnessed, Status::refuted, {}});
    auto v = check_consistency(r);
    ASSERT_EQ(v.size(), 1U);
    EXPECT_EQ(v[0].rule, "R4");
}

TEST(Consistency, AnchorsArePresentForEveryRule)
{
    for (const auto& rule : implication_rules()) {
        EXPECT_FALSE(rule.anchor.empty()) << rule.id;
        EXPECT_FALSE(rule.premises.empty()) << rule.id;
        EXPECT_FALSE(rule.conclusions.empty()) << rule.id;
    }
}

// --- properties over random reports ----------------------------------------

TEST(ClosureProperties, Idempotent)
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 2000; ++t) {
        auto c = derive_closure(random_report(rng));
        ASSERT_EQ(derive_closure(c), c);
    }
}

TEST(ClosureProperties, NeverDowngradesAndOnlyFillsUnknown)
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 2000; ++t) {
        auto r = random_report(rng);
        auto c = derive_closure(r);
        for (auto p : all_properties) {
            Status before = r.status(p);
            Status after = c.status(p);
            if (before == Status::unknown) {
                continue;
            }
            if (before == Status::witnessed) {
                ASSERT_TRUE(after == Status::witnessed || after == Status::proven);
            } else {
                ASSERT_EQ(after, before);
            }
        }
        EXPECT_EQ(c.flags, r.flags);
    }
}

TEST(ClosureProperties, DerivedStatusesAreBackedByARule)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 2000; ++t) {
        auto r = random_report(rng);
        auto c = derive_closure(r);
        for (auto p : all_properties) {
            if (c[p].witness == "input") {
                continue;
            }
            if (c.status(p) == Status::unknown) {
                continue;
            }
            // Some rule instance concluding p with the right polarity must fire in the
            // closed report at the derived strength or better.
            const Status derived = c.status(p);
            bool backed = false;
            for (const auto& rule : implication_rules()) {
                if (!detail::flags_met(c.flags, rule.flags) || c[p].witness.rfind(std::string(rule.id) + " ", 0) != 0) {
                    continue;
                }
                auto s = premise_strength(c, rule);
                for (auto l : rule.conclusions) {
                    if (l.property != p || !s) {
                        continue;
                    }
                    if (l.negated && derived == Status::refuted && *s == Status::proven) {
                        backed = true;
                    }
                    if (!l.negated && holds(derived) && derived <= *s) {
                        backed = true;
                    }
                }
            }
            ASSERT_TRUE(backed) << to_string(p) << " " << c[p].witness;
        }
    }
}

TEST(ClosureProperties, FiredRulesAreSaturated)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 2000; ++t) {
        auto c = derive_closure(random_report(rng));
        for (const auto& rule : implication_rules()) {
            auto s = premise_strength(c, rule);
            if (!s || !detail::flags_met(c.flags, rule.flags)) {
                continue;
            }
            for (auto l : rule.conclusions) {
                Status now = c.status(l.property);
                if (l.negated) {
                    if (*s == Status::proven) {
                        ASSERT_NE(now, Status::unknown) << rule.id;
                    }
                } else {
                    ASSERT_TRUE(now == Status::refuted || now >= *s) << rule.id;
                }
            }
        }
    }
}

TEST(ClosureProperties, ViolationsPersistThroughClosure)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
        auto r = random_report(rng);
        auto before = rule_ids(check_consistency(r));
        auto after = rule_ids(check_consistency(derive_closure(r)));
        ASSERT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    }
}

TEST(ClosureProperties, MonotoneInEvidence)
{
    // Strengthening an input (Unknown -> Witnessed -> Proven) never weakens the closure
    // on properties the weaker closure already decided positively.
    std::mt19937_64 rng(6);
    for (int t = 0; t < 2000; ++t) {
        auto r = random_report(rng);
        auto stronger = r;
        auto p = all_properties[rng() % property_count];
        if (stronger.status(p) == Status::unknown) {
            stronger.set(p, Status::witnessed, "input");
        } else if (stronger.status(p) == Status::witnessed) {
            stronger.set(p, Status::proven, "input");
        }
        auto a = derive_closure(r);
        auto b = derive_closure(stronger);
        for (auto q : all_properties) {
            if (holds(a.status(q)) && b.status(q) != Status::refuted) {
                ASSERT_GE(b.status(q), a.status(q)) << to_string(q);
            }
        }
    }
}

// --- exact symbolic reports obey every rule ---------------------------------

TEST(SymbolicOracle, RandomSftReportsAreConsistent)
{
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int t = 0; t < 3000; ++t) {
        std::size_t n = 1 + rng() % 5;
        std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n));
        for (auto& row : m) {
            for (auto& e : row) {
                e = rng() % 3 == 0;
            }
        }
        Sft sft = essentialize(Sft(m));
        if (sft.alphabet_size() == 0) {
            continue;
        }
        auto c = derive_closure(sft_classify(sft));
        ASSERT_TRUE(check_consistency(c).empty());
        ++checked;
    }
    EXPECT_GT(checked, 1000);
}
