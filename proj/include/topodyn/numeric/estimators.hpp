#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "topodyn/core/action.hpp"
#include "topodyn/core/errors.hpp"
#include "topodyn/core/spaces.hpp"
#include "topodyn/numeric/verdict.hpp"

namespace topodyn {

template <MetricSpace S>
using PointOf = typename S::point_type;

namespace detail {

inline void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be a positive finite real");
    }
}

inline void require_decreasing(const std::vector<double>& v, const char* what)
{
    if (v.empty()) {
        throw DomainError(std::string(what) + " must not be empty");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        require_positive(v[i], what);
        if (i > 0 && !(v[i] < v[i - 1])) {
            throw DomainError(std::string(what) + " must be strictly decreasing");
        }
    }
}

template <class P>
std::vector<P> stored_orbit(const SemigroupAction<P>& action, const P& x, std::uint64_t horizon, EvalBudget& budget)
{
    std::vector<P> states;
    walk_orbit(action, x, horizon, budget, [&](std::uint64_t, const Index&, const P& y) {
        states.push_back(y);
        return true;
    });
    return states;
}

/// Net indices first reached by the orbit of x; complete when every slot is set.
template <MetricSpace S>
std::vector<std::optional<Index>> orbit_net_hits(const SemigroupAction<PointOf<S>>& action, const S& space,
                                                 const EpsNet<PointOf<S>>& net, const PointOf<S>& x,
                                                 std::uint64_t horizon, EvalBudget& budget, std::size_t& covered)
{
    std::vector<std::optional<Index>> hits(net.size());
    std::vector<std::size_t> scratch;
    covered = 0;
    walk_orbit(action, x, horizon, budget, [&](std::uint64_t, const Index& s, const PointOf<S>& y) {
        space.net_hits(net, y, scratch);
        for (auto j : scratch) {
            if (!hits[j]) {
                hits[j] = s;
                ++covered;
            }
        }
        return covered < net.size();
    });
    return hits;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Transitive points

template <class P>
struct TransitivePointResult {
    Verdict verdict;
    std::optional<P> point;
    /// For each net point, the first sampled index bringing the orbit within eps.
    std::vector<Index> hits;
    std::size_t best_coverage = 0;
    std::size_t net_size = 0;
};

/// Orbit of the given x comes within eps of every net point before the horizon.
template <MetricSpace S>
TransitivePointResult<PointOf<S>> transitive_witness_at(const SemigroupAction<PointOf<S>>& action, const S& space,
                                                        const PointOf<S>& x, double eps, std::uint64_t horizon,
                                                        const Limits& limits = {})
{
    detail::require_positive(eps, "eps");
    if (horizon < 1) {
        throw DomainError("transitive_witness_at: horizon must be >= 1");
    }
    auto net = space.epsilon_net(eps, limits);
    EvalBudget budget("transitive_witness_at", limits.max_evals);
    TransitivePointResult<PointOf<S>> out;
    out.net_size = net.size();
    out.verdict.horizon = {eps, 0.0, horizon, 1, 0};
    std::size_t covered = 0;
    auto hits = detail::orbit_net_hits(action, space, net, x, horizon, budget, covered);
    out.best_coverage = covered;
    if (covered == net.size()) {
        out.point = x;
        for (auto& h : hits) {
            out.hits.push_back(*h);
        }
        out.verdict.status = Status::witnessed;
        out.verdict.witness = "x=" + space.describe(x) + " orbit meets all " + std::to_string(net.size()) + " net balls";
    } else {
        out.verdict.witness = "orbit meets " + std::to_string(covered) + "/" + std::to_string(net.size()) + " net balls";
    }
    return out;
}

/// Searches `samples` seeded base points for one whose orbit is eps-dense.
/// Witnessed or Unknown; a miss at finite horizon proves nothing.
template <MetricSpace S>
TransitivePointResult<PointOf<S>> find_transitive_point(const SemigroupAction<PointOf<S>>& action, const S& space,
                                                        double eps, std::uint64_t horizon, std::size_t samples,
                                                        std::uint64_t seed, const Limits& limits = {})
{
    detail::require_positive(eps, "eps");
    if (horizon < 1 || samples < 1) {
        throw DomainError("find_transitive_point: horizon and samples must be >= 1");
    }
    auto net = space.epsilon_net(eps, limits);
    EvalBudget budget("find_transitive_point", limits.max_evals);
    TransitivePointResult<PointOf<S>> out;
    out.net_size = net.size();
    out.verdict.horizon = {eps, 0.0, horizon, samples, seed};
    for (const auto& x : space.sample(seed, samples)) {
        std::size_t covered = 0;
        auto hits = detail::orbit_net_hits(action, space, net, x, horizon, budget, covered);
        out.best_coverage = std::max(out.best_coverage, covered);
        if (covered == net.size()) {
            out.point = x;
            for (auto& h : hits) {
                out.hits.push_back(*h);
            }
            out.verdict.status = Status::witnessed;
            out.verdict.witness =
                "x=" + space.describe(x) + " orbit meets all " + std::to_string(net.size()) + " net balls";
            return out;
        }
    }
    out.verdict.witness = "best orbit meets " + std::to_string(out.best_coverage) + "/" + std::to_string(net.size()) +
                          " net balls";
    return out;
}

// ---------------------------------------------------------------------------
// Topological transitivity on net balls

template <class P>
struct PairWitness {
    P u;
    Index s;
};

template <class P>
struct TtResult {
    Verdict verdict;
    std::vector<P> centers;
    /// table[i][j]: u in B(center i) and s with act(s, u) in B(center j).
    std::vector<std::vector<std::optional<PairWitness<P>>>> table;
    std::optional<std::pair<std::size_t, std::size_t>> failed_pair;
};

/// U and V range over eps-balls at net points; each U is probed at its
/// center plus `ball_samples` deterministic interior points.
template <MetricSpace S>
TtResult<PointOf<S>> check_tt(const SemigroupAction<PointOf<S>>& action, const S& space, double eps,
                              std::uint64_t horizon, const Limits& limits = {}, std::size_t ball_samples = 7)
{
    using P = PointOf<S>;
    detail::require_positive(eps, "eps");
    if (horizon < 1) {
        throw DomainError("check_tt: horizon must be >= 1");
    }
    auto net = space.epsilon_net(eps, limits);
    EvalBudget budget("check_tt", limits.max_evals);
    const std::size_t n = net.size();
    TtResult<P> out;
    out.centers = net.points;
    out.table.assign(n, std::vector<std::optional<PairWitness<P>>>(n));
    out.verdict.horizon = {eps, 0.0, horizon, ball_samples + 1, 0};
    std::vector<std::size_t> scratch;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<P> probes{net.points[i]};
        for (auto& p : space.ball_points(net.points[i], eps, ball_samples)) {
            probes.push_back(std::move(p));
        }
        std::size_t found = 0;
        for (const auto& u : probes) {
            if (found == n) {
                break;
            }
            walk_orbit(action, u, horizon, budget, [&](std::uint64_t, const Index& s, const P& y) {
                space.net_hits(net, y, scratch);
                for (auto j : scratch) {
                    if (!out.table[i][j]) {
                        out.table[i][j] = PairWitness<P>{u, s};
                        ++found;
                    }
                }
                return found < n;
            });
        }
        if (found < n) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!out.table[i][j]) {
                    out.failed_pair = std::make_pair(i, j);
                    break;
                }
            }
            out.verdict.witness = "no sampled s maps B(" + space.describe(net.points[i]) + ") into B(" +
                                  space.describe(net.points[out.failed_pair->second]) + ")";
            return out;
        }
    }
    out.verdict.status = Status::witnessed;
    out.verdict.witness = "all " + std::to_string(n * n) + " ordered net-ball pairs connected";
    return out;
}

// ---------------------------------------------------------------------------
// Equicontinuity at a point

template <class P>
struct SeparationWitness {
    P x;
    P y;
    Index s;
    double distance = 0.0;
};

template <class P>
struct EquicontinuityResult {
    Verdict verdict;
    /// (eps, delta) pairs that passed, one per eps on Witnessed.
    std::vector<std::pair<double, double>> passing;
    std::optional<SeparationWitness<P>> violation;
    double violated_eps = 0.0;
};

struct EquicontinuityOptions {
    std::size_t max_probes = 100'000;
};

/// Proven at once for isometric actions. Otherwise radial probes at
/// {0.999, 1/2, 1/4} * delta are followed for every sampled s.
template <MetricSpace S>
EquicontinuityResult<PointOf<S>> equicontinuity_at(const SemigroupAction<PointOf<S>>& action, const S& space,
                                                   const PointOf<S>& x, const std::vector<double>& eps_list,
                                                   const std::vector<double>& delta_list, std::uint64_t horizon,
                                                   const Limits& limits = {}, EquicontinuityOptions opts = {})
{
    using P = PointOf<S>;
    detail::require_decreasing(eps_list, "eps_list");
    detail::require_decreasing(delta_list, "delta_list");
    EquicontinuityResult<P> out;
    out.verdict.horizon = {eps_list.back(), delta_list.back(), horizon, 0, 0};
    if (action.flags().isometric) {
        out.verdict.status = Status::proven;
        out.verdict.witness = "isometric: delta = eps";
        for (double e : eps_list) {
            out.passing.emplace_back(e, e);
        }
        return out;
    }
    EvalBudget budget("equicontinuity_at", limits.max_evals);
    auto xs = detail::stored_orbit(action, x, horizon, budget);
    std::size_t probes_used = 0;
    for (double eps : eps_list) {
        bool passed = false;
        bool any_probe = false;
        std::optional<SeparationWitness<P>> last_violation;
        for (double delta : delta_list) {
            std::optional<SeparationWitness<P>> violation;
            for (const auto& y : space.radial_probes(x, delta)) {
                if (!(space.distance(x, y) < delta)) {
                    continue;
                }
                if (++probes_used > opts.max_probes) {
                    out.verdict.status = Status::unknown;
                    out.verdict.witness = "probe budget exhausted";
                    return out;
                }
                any_probe = true;
                walk_orbit(action, y, horizon, budget, [&](std::uint64_t pos, const Index& s, const P& ys) {
                    double d = space.distance(xs[pos - 1], ys);
                    if (d >= eps) {
                        violation = SeparationWitness<P>{x, y, s, d};
                        return false;
                    }
                    return true;
                });
                if (violation) {
                    break;
                }
            }
            if (!violation) {
                passed = any_probe;
                if (passed) {
                    out.passing.emplace_back(eps, delta);
                }
                break;
            }
            last_violation = violation;
        }
        if (!any_probe) {
            out.verdict.witness = "no probe points below delta at eps=" + format_double(eps);
            return out;
        }
        if (!passed) {
            out.violation = last_violation;
            out.violated_eps = eps;
            out.verdict.status = Status::refuted;
            out.verdict.witness = "eps=" + format_double(eps) + ": y=" + space.describe(last_violation->y) +
                                  " separates to " + format_double(last_violation->distance) + " at s=" +
                                  describe_index(last_violation->s) + " for every delta";
            return out;
        }
    }
    out.verdict.status = Status::witnessed;
    out.verdict.witness = "every eps level has a passing delta (smallest " + format_double(out.passing.back().second) + ")";
    return out;
}

// ---------------------------------------------------------------------------
// Sensitivity

template <class P>
struct SensitivityEstimate {
    double constant = 0.0;
    /// One witness per base point at the smallest delta, separation > constant.
    std::vector<SeparationWitness<P>> witnesses;
    double coverage = 0.0;
    double runner_up_coverage = 0.0;
    std::vector<double> coverage_by_candidate;
};

template <class P>
struct SensitivityResult {
    Verdict verdict;
    SensitivityEstimate<P> estimate;
};

inline std::vector<double> default_sensitivity_candidates(double diameter)
{
    return {diameter / 2.0, diameter / 4.0, diameter / 8.0, diameter / 16.0};
}

/// Largest candidate c with coverage 1.0: every sampled x at every delta has
/// a probe y and s with d(sx, sy) > c. Refuted structurally for isometries.
template <MetricSpace S>
SensitivityResult<PointOf<S>> sensitivity_estimate(const SemigroupAction<PointOf<S>>& action, const S& space,
                                                   const std::vector<double>& c_candidates,
                                                   const std::vector<double>& delta_list, std::uint64_t horizon,
                                                   std::size_t samples, std::uint64_t seed,
                                                   const Limits& limits = {})
{
    using P = PointOf<S>;
    detail::require_decreasing(c_candidates, "c_candidates");
    detail::require_decreasing(delta_list, "delta_list");
    if (horizon < 1 || samples < 1) {
        throw DomainError("sensitivity_estimate: horizon and samples must be >= 1");
    }
    SensitivityResult<P> out;
    out.verdict.horizon = {c_candidates.back(), delta_list.back(), horizon, samples, seed};
    if (action.flags().isometric) {
        if (c_candidates.back() >= delta_list.back()) {
            out.verdict.status = Status::refuted;
            out.verdict.witness = "isometric: d(sx,sy) = d(x,y) < delta <= c for every s";
        } else {
            out.verdict.witness = "isometric, but smallest c is below smallest delta";
        }
        return out;
    }
    EvalBudget budget("sensitivity_estimate", limits.max_evals);
    const double c_max = c_candidates.front();
    auto base = space.sample(seed, samples);
    // worst[b]: min over deltas of the best separation found at base point b.
    std::vector<double> worst(base.size(), std::numeric_limits<double>::infinity());
    std::vector<std::optional<SeparationWitness<P>>> finest(base.size());
    for (std::size_t b = 0; b < base.size(); ++b) {
        const auto& x = base[b];
        auto xs = detail::stored_orbit(action, x, horizon, budget);
        for (std::size_t di = 0; di < delta_list.size(); ++di) {
            double delta = delta_list[di];
            std::optional<SeparationWitness<P>> best;
            for (const auto& y : space.radial_probes(x, delta)) {
                if (!(space.distance(x, y) < delta)) {
                    continue;
                }
                walk_orbit(action, y, horizon, budget, [&](std::uint64_t pos, const Index& s, const P& ys) {
                    double d = space.distance(xs[pos - 1], ys);
                    if (!best || d > best->distance) {
                        best = SeparationWitness<P>{x, y, s, d};
                    }
                    return d <= c_max;
                });
                if (best && best->distance > c_max) {
                    break;
                }
            }
            double sep = best ? best->distance : 0.0;
            worst[b] = std::min(worst[b], sep);
            if (di + 1 == delta_list.size()) {
                finest[b] = best;
            }
        }
    }
    auto& est = out.estimate;
    for (double c : c_candidates) {
        std::size_t ok = 0;
        for (double w : worst) {
            ok += w > c ? 1 : 0;
        }
        est.coverage_by_candidate.push_back(static_cast<double>(ok) / static_cast<double>(base.size()));
    }
    for (std::size_t ci = 0; ci < c_candidates.size(); ++ci) {
        if (est.coverage_by_candidate[ci] == 1.0) {
            est.constant = c_candidates[ci];
            est.coverage = 1.0;
            est.runner_up_coverage = ci > 0 ? est.coverage_by_candidate[ci - 1] : 1.0;
            for (const auto& w : finest) {
                est.witnesses.push_back(*w);
            }
            out.verdict.status = Status::witnessed;
            out.verdict.constant = est.constant;
            out.verdict.witness = "c=" + format_double(est.constant) + " at all " + std::to_string(base.size()) +
                                  " base points, delta down to " + format_double(delta_list.back());
            return out;
        }
    }
    est.coverage = *std::max_element(est.coverage_by_candidate.begin(), est.coverage_by_candidate.end());
    est.runner_up_coverage = est.coverage;
    out.verdict.witness = "best coverage " + format_double(est.coverage) + " at c=" + format_double(c_candidates.back());
    return out;
}

// ---------------------------------------------------------------------------
// Return times and almost periodicity

template <class P>
struct SyndeticCertificate {
    P point;
    P center;
    double radius = 0.0;
    std::vector<Index> return_times;
    /// 1-based positions of the returns in sample_elements order (equal to the
    /// step count for cascades and flows).
    std::vector<std::uint64_t> positions;
    std::uint64_t max_gap = 0;
    /// Number of sampled elements examined.
    std::uint64_t horizon = 0;
};

/// Largest gap between consecutive returns, counting 0 -> first and last -> total.
inline std::uint64_t max_return_gap(const std::vector<std::uint64_t>& positions, std::uint64_t total)
{
    std::uint64_t prev = 0;
    std::uint64_t gap = 0;
    for (auto p : positions) {
        if (p > total) {
            break;
        }
        gap = std::max(gap, p - prev);
        prev = p;
    }
    return std::max(gap, total - prev);
}

template <MetricSpace S>
SyndeticCertificate<PointOf<S>> return_times(const SemigroupAction<PointOf<S>>& action, const S& space,
                                             const PointOf<S>& x, const PointOf<S>& center, double radius,
                                             std::uint64_t horizon, const Limits& limits = {})
{
    using P = PointOf<S>;
    detail::require_positive(radius, "radius");
    EvalBudget budget("return_times", limits.max_evals);
    SyndeticCertificate<P> cert{x, center, radius, {}, {}, 0, 0};
    walk_orbit(action, x, horizon, budget, [&](std::uint64_t pos, const Index& s, const P& y) {
        cert.horizon = pos;
        if (space.distance(y, center) < radius) {
            cert.return_times.push_back(s);
            cert.positions.push_back(pos);
        }
        return true;
    });
    cert.max_gap = max_return_gap(cert.positions, cert.horizon);
    return cert;
}

template <class P>
struct AlmostPeriodicResult {
    Verdict verdict;
    std::vector<SyndeticCertificate<P>> certificates;
};

/// Bounded-gap test of N(x, B(x, eps)) for each eps: the gap must stay within
/// a tenth of the horizon and must not grow between horizon/2 and horizon.
template <MetricSpace S>
AlmostPeriodicResult<PointOf<S>> almost_periodic_witness(const SemigroupAction<PointOf<S>>& action, const S& space,
                                                         const PointOf<S>& x, const std::vector<double>& eps_list,
                                                         std::uint64_t horizon, const Limits& limits = {})
{
    detail::require_decreasing(eps_list, "eps_list");
    if (horizon < 2) {
        throw DomainError("almost_periodic_witness: horizon must be >= 2");
    }
    AlmostPeriodicResult<PointOf<S>> out;
    out.verdict.horizon = {eps_list.back(), 0.0, horizon, 1, 0};
    bool ok = true;
    std::string reason;
    for (double eps : eps_list) {
        auto cert = return_times(action, space, x, x, eps, horizon, limits);
        const double threshold = static_cast<double>(cert.horizon) / 10.0;
        auto half_gap = max_return_gap(cert.positions, cert.horizon / 2);
        if (ok && static_cast<double>(cert.max_gap) > threshold) {
            ok = false;
            reason = "eps=" + format_double(eps) + ": gap " + std::to_string(cert.max_gap) + " exceeds horizon/10";
        } else if (ok && half_gap != cert.max_gap) {
            ok = false;
            reason = "eps=" + format_double(eps) + ": gap grew from " + std::to_string(half_gap) + " to " +
                     std::to_string(cert.max_gap) + " over the last horizon doubling";
        }
        out.certificates.push_back(std::move(cert));
    }
    if (ok) {
        std::uint64_t worst = 0;
        for (const auto& c : out.certificates) {
            worst = std::max(worst, c.max_gap);
        }
        out.verdict.status = Status::witnessed;
        out.verdict.witness = "syndetic returns at every eps, max gap " + std::to_string(worst) + " (minimal-point candidate)";
    } else {
        out.verdict.witness = reason;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Periodic points

template <class P>
struct PeriodicPoint {
    P point;
    std::uint64_t period = 0;
};

struct PeriodicSearchOptions {
    std::uint64_t period_max = 8;
    double tol = 1e-9;
    std::size_t samples = 4096;
    std::uint64_t seed = 0;
};

/// Candidates x with d(act(p, x), x) < tol for their least such p. One-dimensional
/// spaces scan a uniform grid and bisect sign changes of the signed displacement;
/// the torus tests rational points of small denominator; other spaces test seeded samples.
template <MetricSpace S>
std::vector<PeriodicPoint<PointOf<S>>> periodic_point_search(const SemigroupAction<PointOf<S>>& action,
                                                             const S& space, PeriodicSearchOptions opts = {},
                                                             const Limits& limits = {})
{
    using P = PointOf<S>;
    detail::require_positive(opts.tol, "tol");
    if (opts.period_max < 1 || opts.samples < 1) {
        throw DomainError("periodic_point_search: period_max and samples must be >= 1");
    }
    if (action.is_finitely_generated()) {
        throw DomainError("periodic_point_search: needs a cascade or a sampled flow");
    }
    EvalBudget budget("periodic_point_search", limits.max_evals);
    auto act_p = [&](std::uint64_t p, const P& x) {
        budget.charge(p);
        return action.act(Index{p}, x);
    };
    auto least_period = [&](const P& x, std::uint64_t upto) -> std::uint64_t {
        for (std::uint64_t q = 1; q <= upto; ++q) {
            if (space.distance(act_p(q, x), x) < opts.tol) {
                return q;
            }
        }
        return 0;
    };

    std::vector<PeriodicPoint<P>> found;
    constexpr bool one_dim = std::is_same_v<P, double>;
    if constexpr (one_dim) {
        const bool circle = S::repr() == PointRepr::circle;
        double lo = 0.0;
        double hi = 1.0;
        if constexpr (std::is_same_v<S, Interval>) {
            lo = space.lo();
            hi = space.hi();
        }
        const std::size_t n = opts.samples;
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i) {
            grid[i] = circle ? static_cast<double>(i) / static_cast<double>(n)
                             : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n > 1 ? n - 1 : 1);
        }
        auto displacement = [&](double x, double fx) { return circle ? mod1(fx - x + 0.5) - 0.5 : fx - x; };
        std::vector<double> image = grid;
        std::vector<double> g(n);
        for (std::uint64_t p = 1; p <= opts.period_max; ++p) {
            for (std::size_t i = 0; i < n; ++i) {
                image[i] = action.is_cascade() ? action.act(Index{std::uint64_t{1}}, image[i])
                                               : action.act(Index{p}, grid[i]);
                budget.charge(1);
                g[i] = displacement(grid[i], image[i]);
            }
            auto consider = [&](double x) {
                if (space.distance(act_p(p, x), x) < opts.tol && least_period(x, p) == p) {
                    found.push_back({x, p});
                }
            };
            for (std::size_t i = 0; i < n; ++i) {
                if (std::fabs(g[i]) < opts.tol) {
                    consider(grid[i]);
                    continue;
                }
                if (i + 1 == n || std::fabs(g[i + 1]) < opts.tol) {
                    continue;
                }
                if ((g[i] < 0.0) == (g[i + 1] < 0.0) || (circle && std::fabs(g[i] - g[i + 1]) >= 0.5)) {
                    continue;
                }
                double a = grid[i];
                double b = grid[i + 1];
                double ga = g[i];
                for (int it = 0; it < 100 && b - a > 1e-16; ++it) {
                    double m = 0.5 * (a + b);
                    double gm = displacement(m, act_p(p, m));
                    if (gm == 0.0) {
                        a = b = m;
                        break;
                    }
                    if ((gm < 0.0) == (ga < 0.0)) {
                        a = m;
                        ga = gm;
                    } else {
                        b = m;
                    }
                }
                consider(0.5 * (a + b));
            }
        }
    } else {
        std::vector<P> candidates;
        if constexpr (std::is_same_v<S, Torus2>) {
            // Rational points i/q for every denominator q while the total stays
            // within `samples`; points reached at a smaller q are skipped.
            std::size_t used = 0;
            for (std::size_t q = 1; used + q * q <= opts.samples; ++q) {
                used += q * q;
                for (std::size_t i = 0; i < q; ++i) {
                    for (std::size_t j = 0; j < q; ++j) {
                        if (std::gcd(std::gcd(i, j), q) != 1) {
                            continue;
                        }
                        candidates.push_back({static_cast<double>(i) / static_cast<double>(q),
                                              static_cast<double>(j) / static_cast<double>(q)});
                    }
                }
            }
        } else {
            candidates = space.sample(opts.seed, opts.samples);
        }
        for (const auto& x : candidates) {
            if (auto p = least_period(x, opts.period_max); p > 0) {
                found.push_back({x, p});
            }
        }
    }

    // Drop duplicates produced by neighbouring grid cells.
    std::vector<PeriodicPoint<P>> unique;
    for (auto& c : found) {
        bool dup = std::any_of(unique.begin(), unique.end(), [&](const PeriodicPoint<P>& u) {
            return u.period == c.period && space.distance(u.point, c.point) < 1e-7;
        });
        if (!dup) {
            unique.push_back(std::move(c));
        }
    }
    if constexpr (one_dim) {
        std::sort(unique.begin(), unique.end(), [](const auto& a, const auto& b) {
            return a.point < b.point || (a.point == b.point && a.period < b.period);
        });
    }
    return unique;
}

} // namespace topodyn
