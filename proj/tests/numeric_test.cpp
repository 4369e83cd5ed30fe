#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "topodyn/core/maps.hpp"
#include "topodyn/numeric/estimators.hpp"

using namespace topodyn;

namespace {

const Circle circle;
const Interval unit;
const Torus2 torus;

Index step(std::uint64_t n) { return Index{n}; }

// Rotation orbit by the closed form frac(x + n*alpha), independent of the cascade.
double rotation_point(double x, double alpha, std::uint64_t n)
{
    double v = x + static_cast<double>(n) * alpha;
    return v - std::floor(v);
}

// Largest gap between consecutive n in [1, h] with d(frac(n*alpha), 0) < r,
// including the leading gap from 0 and the trailing gap to h.
std::uint64_t rotation_gap_oracle(double alpha, double r, std::uint64_t h)
{
    std::uint64_t prev = 0;
    std::uint64_t gap = 0;
    for (std::uint64_t n = 1; n <= h; ++n) {
        double v = rotation_point(0.0, alpha, n);
        if (std::min(v, 1.0 - v) < r) {
            gap = std::max(gap, n - prev);
            prev = n;
        }
    }
    return std::max(gap, h - prev);
}

SemigroupAction<double> unflagged_rotation(double alpha)
{
    return {Cascade<double>{[alpha](double x) { return mod1(x + alpha); }}, {}};
}

} // namespace

// --- find_transitive_point ---------------------------------------------------

TEST(TransitivePoint, DoublingWitnessedAndWitnessRevalidates)
{
    auto action = maps::doubling_cascade();
    const double eps = 1.0 / 16.0;
    auto r = find_transitive_point(action, circle, eps, 2000, 50, 42);
    ASSERT_EQ(r.verdict.status, Status::witnessed);
    ASSERT_TRUE(r.point.has_value());
    auto net = circle.epsilon_net(eps);
    ASSERT_EQ(r.hits.size(), net.size());
    for (std::size_t j = 0; j < net.size(); ++j) {
        EXPECT_LT(circle.distance(action.act(r.hits[j], *r.point), net.points[j]), eps);
    }
    EXPECT_EQ(r.verdict.horizon.seed, 42U);
}

TEST(TransitivePoint, GoldenRotationAgreesWithClosedFormCoverage)
{
    auto action = maps::rotation_cascade(maps::golden_rotation);
    const double eps = 0.05;
    auto net = circle.epsilon_net(eps);
    for (std::uint64_t h : {5, 10, 15, 20, 30, 500}) {
        for (double x : {0.0, 0.3, 0.77}) {
            auto r = transitive_witness_at(action, circle, x, eps, h);
            // Coverage with a small margin either way avoids rounding ties.
            auto covered = [&](double margin) {
                return std::all_of(net.points.begin(), net.points.end(), [&](double c) {
                    for (std::uint64_t n = 1; n <= h; ++n) {
                        if (circle.distance(rotation_point(x, maps::golden_rotation, n), c) < eps + margin) {
                            return true;
                        }
                    }
                    return false;
                });
            };
            if (covered(-1e-9)) {
                EXPECT_EQ(r.verdict.status, Status::witnessed) << "h=" << h << " x=" << x;
            }
            if (r.verdict.status == Status::witnessed) {
                EXPECT_TRUE(covered(1e-9));
            }
        }
    }
    EXPECT_EQ(find_transitive_point(action, circle, eps, 500, 50, 1).verdict.status, Status::witnessed);
}

TEST(TransitivePoint, IdentityAndRationalRotationStayUnknown)
{
    for (std::uint64_t h : {1, 100, 5000}) {
        EXPECT_EQ(find_transitive_point(maps::identity_cascade(), unit, 0.1, h, 20, 3).verdict.status,
                  Status::unknown);
    }
    auto half = maps::rotation_cascade(0.5);
    auto r = find_transitive_point(half, circle, 0.1, 1000, 20, 3);
    EXPECT_EQ(r.verdict.status, Status::unknown);
    EXPECT_LE(r.best_coverage, 4U);
}

TEST(TransitivePoint, RejectsBadArgumentsAndHonoursCaps)
{
    auto action = maps::doubling_cascade();
    EXPECT_THROW((void)find_transitive_point(action, circle, 0.0, 10, 1, 0), DomainError);
    EXPECT_THROW((void)find_transitive_point(action, circle, 0.1, 0, 1, 0), DomainError);
    EXPECT_THROW((void)find_transitive_point(action, circle, 0.1, 10, 0, 0), DomainError);
    Limits tight;
    tight.max_evals = 50;
    EXPECT_THROW((void)find_transitive_point(maps::identity_cascade(), unit, 0.1, 100, 5, 0, tight), ResourceError);
    tight = {};
    tight.max_net = 10;
    EXPECT_THROW((void)find_transitive_point(action, circle, 0.01, 10, 1, 0, tight), ResourceError);
}

TEST(TransitivePoint, MonotoneInHorizonAndSamples)
{
    auto action = maps::tent_cascade();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        std::uint64_t h = 5 + rng() % 60;
        std::size_t n = 1 + rng() % 10;
        std::uint64_t seed = rng();
        auto small = find_transitive_point(action, unit, 0.125, h, n, seed);
        auto large = find_transitive_point(action, unit, 0.125, h + rng() % 100, n + rng() % 10, seed);
        if (small.verdict.status == Status::witnessed) {
            EXPECT_EQ(large.verdict.status, Status::witnessed);
        }
    }
}

// --- check_tt ----------------------------------------------------------------

TEST(CheckTt, SpecExamples)
{
    EXPECT_EQ(check_tt(maps::doubling_cascade(), circle, 0.125, 200).verdict.status, Status::witnessed);
    EXPECT_EQ(check_tt(maps::rotation_cascade(maps::golden_rotation), circle, 0.1, 200).verdict.status,
              Status::witnessed);
    auto id = check_tt(maps::identity_cascade(), unit, 0.125, 200);
    EXPECT_EQ(id.verdict.status, Status::unknown);
    ASSERT_TRUE(id.failed_pair.has_value());
}

TEST(CheckTt, PairTableRevalidates)
{
    auto action = maps::cat_cascade();
    const double eps = 0.125;
    auto r = check_tt(action, torus, eps, 300);
    ASSERT_EQ(r.verdict.status, Status::witnessed);
    for (std::size_t i = 0; i < r.centers.size(); ++i) {
        for (std::size_t j = 0; j < r.centers.size(); ++j) {
            const auto& w = r.table[i][j];
            ASSERT_TRUE(w.has_value());
            ASSERT_LT(torus.distance(w->u, r.centers[i]), eps);
            ASSERT_LT(torus.distance(action.act(w->s, w->u), r.centers[j]), eps);
        }
    }
}

TEST(CheckTt, MonotoneInHorizon)
{
    auto action = maps::logistic4_cascade();
    bool seen = false;
    for (std::uint64_t h = 1; h <= 40; ++h) {
        bool w = check_tt(action, unit, 0.125, h).verdict.status == Status::witnessed;
        EXPECT_TRUE(!seen || w) << "lost witness at horizon " << h;
        seen = seen || w;
    }
    EXPECT_TRUE(seen);
}

TEST(CheckTt, FinitelyGeneratedAction)
{
    SemigroupAction<double> fg(FinitelyGenerated<double>{{[](double x) { return mod1(x + 0.5); },
                                                           [](double x) { return mod1(x + 0.125); }}},
                               {});
    EXPECT_EQ(check_tt(fg, circle, 0.1, 4).verdict.status, Status::witnessed);
}

// --- equicontinuity_at ---------------------------------------------------------

TEST(Equicontinuity, IsometricIsProven)
{
    auto r = equicontinuity_at(maps::rotation_cascade(maps::golden_rotation), circle, 0.4, {0.1}, {0.05}, 100);
    EXPECT_EQ(r.verdict.status, Status::proven);
}

TEST(Equicontinuity, DoublingRefutedWithRevalidatingViolation)
{
    auto action = maps::doubling_cascade();
    auto deltas = geometric_ladder_to(0.25, 1e-6);
    auto r = equicontinuity_at(action, circle, 0.3, {0.25}, deltas, 30);
    ASSERT_EQ(r.verdict.status, Status::refuted);
    ASSERT_TRUE(r.violation.has_value());
    const auto& v = *r.violation;
    EXPECT_LT(circle.distance(v.x, v.y), deltas.back());
    EXPECT_GE(circle.distance(action.act(v.s, v.x), action.act(v.s, v.y)), 0.25);
    // Oracle: the gap d doubles each step until it exceeds 1/4, so that happens within
    // ceil(log2(0.25 / d)) + 1 steps.
    double d = circle.distance(v.x, v.y);
    EXPECT_LE(std::get<std::uint64_t>(v.s), static_cast<std::uint64_t>(std::ceil(std::log2(0.25 / d))) + 1);
}

TEST(Equicontinuity, TentFoldIsRefuted)
{
    auto r = equicontinuity_at(maps::tent_cascade(), unit, 0.5, {0.25}, geometric_ladder(0.5, 12), 60);
    EXPECT_EQ(r.verdict.status, Status::refuted);
}

TEST(Equicontinuity, UnflaggedRotationPassesAtFirstDeltaBelowEps)
{
    // Distances are preserved, so the probe at 0.999 delta decides: the first delta
    // with 0.999 delta < eps passes.
    auto r = equicontinuity_at(unflagged_rotation(maps::golden_rotation), circle, 0.2, {0.1, 0.05},
                               geometric_ladder(0.25, 12), 200);
    ASSERT_EQ(r.verdict.status, Status::witnessed);
    ASSERT_EQ(r.passing.size(), 2U);
    EXPECT_EQ(r.passing[0], (std::pair<double, double>{0.1, 0.0625}));
    EXPECT_EQ(r.passing[1], (std::pair<double, double>{0.05, 0.03125}));
}

TEST(Equicontinuity, ContractionWitnessedAndBadListsRejected)
{
    SemigroupAction<double> half(Cascade<double>{[](double x) { return 0.5 * x; }}, {});
    EXPECT_EQ(equicontinuity_at(half, unit, 0.7, {0.1, 0.01}, geometric_ladder(0.5, 12), 100).verdict.status,
              Status::witnessed);
    EXPECT_THROW((void)equicontinuity_at(half, unit, 0.7, {0.1, 0.2}, {0.1}, 10), DomainError);
    EXPECT_THROW((void)equicontinuity_at(half, unit, 0.7, {0.1}, {}, 10), DomainError);
    EXPECT_THROW((void)equicontinuity_at(half, unit, 0.7, {-0.1}, {0.1}, 10), DomainError);
}

TEST(Equicontinuity, ProbeBudgetExhaustionIsUnknown)
{
    EquicontinuityOptions opts;
    opts.max_probes = 2;
    auto r = equicontinuity_at(unflagged_rotation(0.3), circle, 0.1, {0.01}, geometric_ladder(0.25, 12), 10, {}, opts);
    EXPECT_EQ(r.verdict.status, Status::unknown);
}

// --- sensitivity_estimate ------------------------------------------------------

TEST(Sensitivity, DoublingQuarterWithRevalidatingWitnesses)
{
    auto action = maps::doubling_cascade();
    auto deltas = geometric_ladder_to(0.25, 1e-6);
    auto r = sensitivity_estimate(action, circle, default_sensitivity_candidates(0.5), deltas, 1000, 100, 7);
    ASSERT_EQ(r.verdict.status, Status::witnessed);
    const auto& e = r.estimate;
    EXPECT_EQ(e.constant, 0.25);
    EXPECT_EQ(e.coverage, 1.0);
    ASSERT_EQ(e.witnesses.size(), 100U);
    for (const auto& w : e.witnesses) {
        EXPECT_LT(circle.distance(w.x, w.y), deltas.back());
        EXPECT_GT(circle.distance(action.act(w.s, w.x), action.act(w.s, w.y)), e.constant);
    }
    // The circle has diameter 1/2, so 1/4 is the largest default candidate.
    EXPECT_EQ(e.coverage_by_candidate.front(), 1.0);
    EXPECT_EQ(e.runner_up_coverage, 1.0);
}

TEST(Sensitivity, TentAndCatMapReachAQuarter)
{
    auto tent = sensitivity_estimate(maps::tent_cascade(), unit, default_sensitivity_candidates(1.0),
                                     geometric_ladder_to(0.5, 1e-6), 50, 50, 3);
    ASSERT_EQ(tent.verdict.status, Status::witnessed);
    EXPECT_GE(*tent.verdict.constant, 0.25);
    auto cat = sensitivity_estimate(maps::cat_cascade(), torus, default_sensitivity_candidates(0.5),
                                    geometric_ladder_to(0.25, 1e-6), 200, 50, 3);
    ASSERT_EQ(cat.verdict.status, Status::witnessed);
    EXPECT_GE(*cat.verdict.constant, 0.25);
}

TEST(Sensitivity, IsometriesAreRefutedForEveryDefaultCandidate)
{
    auto deltas = geometric_ladder_to(0.25, 1e-6);
    for (double c : default_sensitivity_candidates(0.5)) {
        EXPECT_EQ(sensitivity_estimate(maps::rotation_cascade(maps::golden_rotation), circle, {c}, deltas, 100, 10, 1)
                      .verdict.status,
                  Status::refuted);
        EXPECT_EQ(sensitivity_estimate(maps::torus_linear_flow(1.0, std::sqrt(2.0)), torus, {c}, deltas, 100, 10, 1)
                      .verdict.status,
                  Status::refuted);
    }
    // A candidate below the finest delta cannot be refuted by the structural argument.
    EXPECT_EQ(sensitivity_estimate(maps::identity_cascade(), unit, {1e-9}, {1e-3}, 10, 5, 1).verdict.status,
              Status::unknown);
}

TEST(Sensitivity, ContractionIsUnknown)
{
    SemigroupAction<double> half(Cascade<double>{[](double x) { return 0.5 * x; }}, {});
    auto r = sensitivity_estimate(half, unit, default_sensitivity_candidates(1.0), geometric_ladder(0.5, 8), 100, 10, 1);
    EXPECT_EQ(r.verdict.status, Status::unknown);
    EXPECT_EQ(r.estimate.coverage, 0.0);
}

// --- return_times / almost_periodic_witness ------------------------------------

TEST(ReturnTimes, QuarterRotationReturnsEveryFourSteps)
{
    auto c = return_times(maps::rotation_cascade(0.25), circle, 0.0, 0.0, 0.1, 20);
    EXPECT_EQ(c.return_times,
              (std::vector<Index>{step(4), step(8), step(12), step(16), step(20)}));
    EXPECT_EQ(c.max_gap, 4U);
    EXPECT_EQ(c.horizon, 20U);
}

TEST(ReturnTimes, GoldenRotationGapMatchesDirectIteration)
{
    auto c = return_times(maps::rotation_cascade(maps::golden_rotation), circle, 0.0, 0.0, 0.1, 500);
    EXPECT_EQ(c.max_gap, rotation_gap_oracle(maps::golden_rotation, 0.1, 500));
    EXPECT_LE(c.max_gap, 13U);
}

TEST(ReturnTimes, FixedPointReturnsAlways)
{
    auto c = return_times(maps::doubling_cascade(), circle, 0.0, 0.0, 0.1, 50);
    EXPECT_EQ(c.return_times.size(), 50U);
    EXPECT_EQ(c.max_gap, 1U);
}

TEST(ReturnTimes, CertificatesRevalidate)
{
    auto action = maps::logistic4_cascade();
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        double x = unit_double(rng);
        double center = unit_double(rng);
        double radius = 0.05 + 0.2 * unit_double(rng);
        auto c = return_times(action, unit, x, center, radius, 300);
        std::vector<std::uint64_t> expected;
        for (std::uint64_t n = 1; n <= 300; ++n) {
            if (unit.distance(action.act(step(n), x), center) < radius) {
                expected.push_back(n);
            }
        }
        ASSERT_EQ(c.positions, expected);
        std::uint64_t prev = 0;
        std::uint64_t gap = 0;
        for (auto p : expected) {
            gap = std::max(gap, p - prev);
            prev = p;
        }
        gap = std::max<std::uint64_t>(gap, 300 - prev);
        ASSERT_EQ(c.max_gap, gap);
    }
    EXPECT_EQ(max_return_gap({}, 7), 7U);
    EXPECT_THROW((void)return_times(action, unit, 0.1, 0.1, 0.0, 10), DomainError);
}

TEST(AlmostPeriodic, RotationWitnessedAtEveryPoint)
{
    auto action = maps::rotation_cascade(maps::golden_rotation);
    for (double x : circle.sample(4, 20)) {
        auto r = almost_periodic_witness(action, circle, x, {0.2, 0.1, 0.05}, 2000);
        EXPECT_EQ(r.verdict.status, Status::witnessed);
        ASSERT_EQ(r.certificates.size(), 3U);
        for (const auto& c : r.certificates) {
            EXPECT_LE(c.max_gap, 200U);
        }
    }
}

TEST(AlmostPeriodic, DoublingPeriodTwoPoint)
{
    // 1/3 -> 2/3 -> 1/3. In binary floating point the orbit drifts by a factor
    // 2 per step from the rounding of 1/3, so the horizon stays below the
    // collapse (about 53 steps).
    auto r = almost_periodic_witness(maps::doubling_cascade(), circle, 1.0 / 3.0, {0.2, 0.1, 0.05}, 48);
    ASSERT_EQ(r.verdict.status, Status::witnessed);
    for (const auto& c : r.certificates) {
        EXPECT_EQ(c.max_gap, 2U);
    }
}

TEST(AlmostPeriodic, TypicalDoublingPointIsUnknown)
{
    auto r = almost_periodic_witness(maps::doubling_cascade(), circle, 0.1234567, {0.01}, 10000);
    EXPECT_EQ(r.verdict.status, Status::unknown);
}

TEST(AlmostPeriodic, GrowingGapIsNotWitnessed)
{
    // Returns at 1, 2, 3 and then never: the gap grows past the half-horizon mark.
    SemigroupAction<double> drift(Cascade<double>{[](double x) { return x < 0.03 ? x + 0.01 : 0.9; }}, {});
    auto r = almost_periodic_witness(drift, unit, 0.0, {0.05}, 100);
    EXPECT_EQ(r.verdict.status, Status::unknown);
}

// --- periodic_point_search -----------------------------------------------------

TEST(PeriodicPoints, DoublingUpToPeriodTwo)
{
    auto found = periodic_point_search(maps::doubling_cascade(), circle, {2, 1e-9, 4096, 0});
    ASSERT_EQ(found.size(), 3U);
    // Exact solutions of 2x = x and 4x = x mod 1 with least period.
    const double expected[] = {0.0, 1.0 / 3.0, 2.0 / 3.0};
    const std::uint64_t periods[] = {1, 2, 2};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(found[i].point, expected[i], 1e-9);
        EXPECT_EQ(found[i].period, periods[i]);
    }
}

TEST(PeriodicPoints, TentFixedPoints)
{
    auto found = periodic_point_search(maps::tent_cascade(), unit, {1, 1e-9, 4096, 0});
    ASSERT_EQ(found.size(), 2U);
    EXPECT_EQ(found[0].point, 0.0);
    EXPECT_NEAR(found[1].point, 2.0 / 3.0, 1e-9);
}

TEST(PeriodicPoints, IrrationalRotationHasNone)
{
    EXPECT_TRUE(
        periodic_point_search(maps::rotation_cascade(maps::golden_rotation), circle, {20, 1e-9, 4096, 0}).empty());
}

TEST(PeriodicPoints, DoublingCountsMatchLeastPeriodFormula)
{
    // Points of least period p under doubling: sum over d | p of mu(p/d) (2^d - 1).
    const std::size_t least[] = {1, 2, 6, 12, 30, 54, 126, 240};
    auto found = periodic_point_search(maps::doubling_cascade(), circle, {8, 1e-9, 4096, 0});
    std::vector<std::size_t> per(9, 0);
    for (const auto& p : found) {
        ++per[p.period];
        EXPECT_LT(circle.distance(maps::doubling_cascade().act(step(p.period), p.point), p.point), 1e-9);
    }
    for (std::size_t p = 1; p <= 8; ++p) {
        EXPECT_EQ(per[p], least[p - 1]) << "period " << p;
    }
}

TEST(PeriodicPoints, CatMapRationalCandidates)
{
    auto action = maps::cat_cascade();
    auto found = periodic_point_search(action, torus, {3, 1e-9, 4096, 0});
    ASSERT_FALSE(found.empty());
    bool origin = false;
    for (const auto& p : found) {
        origin = origin || (p.point == Vec2{0.0, 0.0} && p.period == 1);
        EXPECT_LT(torus.distance(action.act(step(p.period), p.point), p.point), 1e-9);
    }
    EXPECT_TRUE(origin);
    // (1/2, 0) -> (0, 1/2) -> (1/2, 1/2) -> (1/2, 0): least period 3.
    EXPECT_TRUE(std::any_of(found.begin(), found.end(),
                            [](const auto& p) { return p.point == Vec2{0.5, 0.0} && p.period == 3; }));
}

TEST(PeriodicPoints, RejectsWordsAndBadOptions)
{
    SemigroupAction<double> fg(FinitelyGenerated<double>{{maps::doubling}}, {});
    EXPECT_THROW((void)periodic_point_search(fg, circle), DomainError);
    EXPECT_THROW((void)periodic_point_search(maps::doubling_cascade(), circle, {0, 1e-9, 10, 0}), DomainError);
    EXPECT_THROW((void)periodic_point_search(maps::doubling_cascade(), circle, {2, 0.0, 10, 0}), DomainError);
}

// --- determinism -----------------------------------------------------------------

TEST(Determinism, IdenticalInputsGiveIdenticalVerdicts)
{
    auto action = maps::cat_cascade();
    auto deltas = geometric_ladder_to(0.25, 1e-6);
    for (std::uint64_t seed : {0ULL, 42ULL, 12345ULL}) {
        auto a = sensitivity_estimate(action, torus, default_sensitivity_candidates(0.5), deltas, 500, 20, seed);
        auto b = sensitivity_estimate(action, torus, default_sensitivity_candidates(0.5), deltas, 500, 20, seed);
        EXPECT_EQ(a.verdict, b.verdict);
        EXPECT_EQ(a.estimate.coverage_by_candidate, b.estimate.coverage_by_candidate);
        ASSERT_EQ(a.estimate.witnesses.size(), b.estimate.witnesses.size());
        for (std::size_t i = 0; i < a.estimate.witnesses.size(); ++i) {
            EXPECT_EQ(a.estimate.witnesses[i].y, b.estimate.witnesses[i].y);
            EXPECT_EQ(a.estimate.witnesses[i].s, b.estimate.witnesses[i].s);
        }
        EXPECT_EQ(find_transitive_point(action, torus, 0.1, 500, 10, seed).verdict,
                  find_transitive_point(action, torus, 0.1, 500, 10, seed).verdict);
    }
}

TEST(FlowCase, TorusLinearFlowTransitivePoint)
{
    auto flow = maps::torus_linear_flow(1.0, std::sqrt(2.0), 0.01, 1.0);
    auto r = find_transitive_point(flow, torus, 0.1, 10000, 50, 42);
    ASSERT_EQ(r.verdict.status, Status::witnessed);
    auto net = torus.epsilon_net(0.1);
    for (std::size_t j = 0; j < net.size(); ++j) {
        // Closed form phi(t, p) = p + t (1, sqrt 2) mod 1 with t = k dt.
        double t = 0.01 * static_cast<double>(std::get<std::uint64_t>(r.hits[j]));
        Vec2 q{mod1((*r.point)[0] + t), mod1((*r.point)[1] + t * std::sqrt(2.0))};
        EXPECT_LT(torus.distance(q, net.points[j]), 0.1 + 1e-9);
    }
}
