#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "topodyn/classify/rules.hpp"
#include "topodyn/cli/config.hpp"
#include "topodyn/cli/expr.hpp"
#include "topodyn/cli/registry.hpp"
#include "topodyn/cli/report_io.hpp"
#include "topodyn/core/maps.hpp"
#include "topodyn/numeric/estimators.hpp"
#include "topodyn/symbolic/sft.hpp"

namespace topodyn::cli {

/// Global settings; per-system config values take precedence.
struct RunSettings {
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> eps_levels;
    Limits limits;
};

struct NumericOptions {
    std::uint64_t horizon = 1000;
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    std::size_t eps_levels = 2;
    bool polish = true;
    Limits limits;
};

inline constexpr std::uint64_t default_cascade_horizon = 1000;
inline constexpr std::uint64_t default_flow_horizon = 10'000;
inline constexpr std::uint64_t default_word_horizon = 8;
inline constexpr std::size_t default_samples = 50;
inline constexpr std::size_t default_eps_levels = 2;

namespace detail {

/// True when every net point lies within eps of one of `points`.
template <MetricSpace S>
bool covers_net(const S& space, const EpsNet<PointOf<S>>& net, const std::vector<PointOf<S>>& points,
                std::vector<bool>& covered)
{
    std::vector<std::size_t> scratch;
    for (const auto& p : points) {
        space.net_hits(net, p, scratch);
        for (auto j : scratch) {
            covered[j] = true;
        }
    }
    return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

} // namespace detail

/// Sampled classification of a numeric system followed by closure and the
/// consistency check.
template <MetricSpace S>
Report analyze_numeric(const std::string& name, const SemigroupAction<PointOf<S>>& action, const S& space,
                       const NumericOptions& opt)
{
    using P = PointOf<S>;
    const double diam = space.diameter_hint();
    const double eps = diam / 8.0;
    const std::uint64_t h = opt.horizon;
    const auto levels = std::max<std::size_t>(opt.eps_levels, 1);
    std::vector<double> eps_list;
    for (std::size_t i = levels; i-- > 0;) {
        eps_list.push_back(std::ldexp(eps, static_cast<int>(i)));
    }
    const auto deltas = geometric_ladder(diam / 2.0, 12);
    const HorizonTuple tuple{eps, 0.0, h, opt.samples, opt.seed};

    Report out;
    out.seed = opt.seed;
    auto& rep = out.classification;
    rep.system = name;
    const auto& af = action.flags();
    rep.flags = {af.f_semigroup, af.c_semigroup, af.group, af.isometric, opt.polish};

    auto tt = check_tt(action, space, eps, h, opt.limits);
    rep[Property::tt] = tt.verdict;
    auto pt = find_transitive_point(action, space, eps, h, opt.samples, opt.seed, opt.limits);
    rep[Property::pt] = pt.verdict;

    auto net = space.epsilon_net(eps, opt.limits);
    auto base = space.sample(opt.seed, opt.samples);
    std::size_t eq_refuted = 0;
    std::size_t eq_holds = 0;
    Status eq_best = Status::unknown;
    std::size_t transitive = 0;
    std::vector<bool> ap_cover(net.size(), false);
    std::size_t ap_points = 0;
    for (const auto& x : base) {
        auto eq = equicontinuity_at(action, space, x, eps_list, deltas, h, opt.limits);
        auto tr = transitive_witness_at(action, space, x, eps, h, opt.limits);
        auto ap = almost_periodic_witness(action, space, x, eps_list, std::max<std::uint64_t>(h, 2), opt.limits);
        rep.points.push_back({space.describe(x), eq.verdict.status, tr.verdict.status, {}});
        if (eq.verdict.status == Status::refuted) {
            ++eq_refuted;
        } else if (holds(eq.verdict.status)) {
            ++eq_holds;
            eq_best = std::max(eq_best, eq.verdict.status);
        }
        transitive += holds(tr.verdict.status) ? 1 : 0;
        for (const auto& c : ap.certificates) {
            out.certificates.push_back(
                {space.describe(x), c.radius, c.return_times.size(), c.max_gap, c.horizon});
        }
        if (holds(ap.verdict.status)) {
            // Orbit points of an almost periodic point are almost periodic.
            ++ap_points;
            std::vector<P> orbit_points{x};
            EvalBudget budget("almost_periodic_cover", opt.limits.max_evals);
            walk_orbit(action, x, h, budget, [&](std::uint64_t, const Index&, const P& y) {
                orbit_points.push_back(y);
                return true;
            });
            detail::covers_net(space, net, orbit_points, ap_cover);
        }
    }

    if (af.isometric) {
        rep.set(Property::equicontinuous, Status::proven, "isometric action", tuple);
        rep.set(Property::eq_nonempty, Status::proven, "isometric action", tuple);
        rep.set(Property::almost_equicontinuous, Status::proven, "isometric action", tuple);
    } else {
        if (eq_refuted > 0) {
            rep.set(Property::equicontinuous, Status::refuted,
                    std::to_string(eq_refuted) + "/" + std::to_string(base.size()) +
                        " probed points fail at every tested delta",
                    tuple);
        } else if (eq_holds == base.size()) {
            rep.set(Property::equicontinuous, Status::witnessed, "every probed point passes", tuple);
        }
        if (eq_holds > 0) {
            rep.set(Property::eq_nonempty, eq_best,
                    std::to_string(eq_holds) + "/" + std::to_string(base.size()) + " probed points pass", tuple);
        }
    }

    auto sens = sensitivity_estimate(action, space, default_sensitivity_candidates(diam),
                                     geometric_ladder_to(diam / 2.0, 1e-6), h, opt.samples, opt.seed, opt.limits);
    rep[Property::sensitive] = sens.verdict;
    out.sensitivity = {sens.verdict.status,
                       sens.verdict.constant,
                       sens.estimate.coverage,
                       sens.estimate.runner_up_coverage,
                       sens.estimate.witnesses.size()};

    std::vector<PeriodicPoint<P>> periodic;
    if (!action.is_finitely_generated()) {
        periodic = periodic_point_search(action, space, {8, 1e-9, 4096, opt.seed}, opt.limits);
    }
    std::vector<P> periodic_points;
    for (const auto& pp : periodic) {
        periodic_points.push_back(pp.point);
    }
    std::vector<bool> pd_cover(net.size(), false);
    if (!periodic.empty() && detail::covers_net(space, net, periodic_points, pd_cover)) {
        rep.set(Property::periodic_dense, Status::witnessed,
                std::to_string(periodic.size()) + " periodic points of period <= 8 cover the eps-net", tuple);
    }
    if (detail::covers_net(space, net, periodic_points, ap_cover) && (ap_points > 0 || !periodic.empty())) {
        rep.set(Property::bronstein_dense, Status::witnessed,
                "almost periodic orbits and periodic points cover the eps-net", tuple);
    }

    // Minimality: a proper periodic orbit refutes it on a perfect space;
    // dense sampled orbits witness it.
    std::optional<std::string> proper_orbit;
    for (const auto& pp : periodic) {
        std::vector<P> cycle{pp.point};
        for (std::uint64_t k = 1; k < pp.period; ++k) {
            cycle.push_back(action.act(Index{k}, pp.point));
        }
        std::vector<bool> cover(net.size(), false);
        if (!detail::covers_net(space, net, cycle, cover)) {
            proper_orbit = "periodic orbit of " + space.describe(pp.point) + " (period " +
                           std::to_string(pp.period) + ") is a proper closed invariant set";
            break;
        }
    }
    if (proper_orbit) {
        if (pt.point) {
            *proper_orbit += "; transitive point " + space.describe(*pt.point) + " exists";
        }
        rep.set(Property::minimal, Status::refuted, *proper_orbit, tuple);
    } else if (transitive == base.size()) {
        rep.set(Property::minimal, Status::witnessed,
                "all " + std::to_string(base.size()) + " sampled orbits are eps-dense", tuple);
    }

    rep.set(Property::infinite, Status::proven, "continuum space");
    rep.set(Property::perfect, Status::proven, "no isolated points");

    rep = derive_closure(std::move(rep));
    out.violations = check_consistency(rep);
    return out;
}

/// Exact classification of a subshift of finite type.
inline Report analyze_sft(const std::string& name, const Sft& sft, std::uint64_t seed)
{
    Report out;
    out.seed = seed;
    out.classification = derive_closure(sft_classify(sft, name));
    auto sens = sft_sensitivity(essentialize(sft));
    out.sensitivity.status = sens.verdict.status;
    if (holds(sens.verdict.status)) {
        out.sensitivity.constant = sens.constant;
        out.sensitivity.coverage = 1.0;
        out.sensitivity.runner_up_coverage = 1.0;
    }
    out.violations = check_consistency(out.classification);
    return out;
}

namespace detail {

inline Expression compile(const Located& loc) { return Expression::parse(loc.text, loc.line, loc.column); }

/// Splits `text` on `sep`, keeping each piece's column.
inline std::vector<Located> split_located(const Located& loc, char sep)
{
    std::vector<Located> out;
    std::size_t start = 0;
    for (;;) {
        auto end = loc.text.find(sep, start);
        auto piece = loc.text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        out.push_back({piece, loc.line, loc.column + start});
        if (end == std::string::npos) {
            return out;
        }
        start = end + 1;
    }
}

inline ActionFlags user_flags(const SystemSpec& spec)
{
    return {spec.f_semigroup, spec.c_semigroup, spec.group, spec.isometric};
}

template <class S>
Report analyze_user_1d(const SystemSpec& spec, const S& space, const NumericOptions& opt)
{
    auto wrap = [&space](const Expression& e) {
        return [e, &space](double x) {
            double v = e(x);
            if constexpr (S::repr() == PointRepr::circle) {
                return mod1(v);
            } else {
                if (!(v >= space.lo() && v <= space.hi())) {
                    throw DomainError("map leaves the interval at x=" + format_double(x));
                }
                return v;
            }
        };
    };
    auto check_1d = [](const Expression& e, const Located& loc) {
        if (e.uses_y()) {
            throw ParseError(loc.line, loc.column, "y is not available on a one-dimensional space");
        }
    };
    if (spec.generators) {
        FinitelyGenerated<double> fg;
        for (const auto& piece : split_located(*spec.generators, ';')) {
            auto e = compile(piece);
            check_1d(e, piece);
            fg.generators.push_back(wrap(e));
        }
        return analyze_numeric(spec.name, SemigroupAction<double>(std::move(fg), user_flags(spec)), space, opt);
    }
    if (!spec.map) {
        throw ParseError(spec.line, 1, "system '" + spec.name + "' needs 'map' or 'generators'");
    }
    auto e = compile(*spec.map);
    check_1d(e, *spec.map);
    return analyze_numeric(spec.name, SemigroupAction<double>(Cascade<double>{wrap(e)}, user_flags(spec)), space,
                           opt);
}

inline Report analyze_user_torus(const SystemSpec& spec, const NumericOptions& opt)
{
    Torus2 space;
    auto pair = [](const Expression& ex, const Expression& ey) {
        return [ex, ey](const Vec2& p) -> Vec2 { return {mod1(ex(p[0], p[1])), mod1(ey(p[0], p[1]))}; };
    };
    if (spec.generators) {
        FinitelyGenerated<Vec2> fg;
        for (const auto& piece : split_located(*spec.generators, ';')) {
            auto parts = split_located(piece, ',');
            if (parts.size() != 2) {
                throw ParseError(piece.line, piece.column, "torus generator needs 'expr_x, expr_y'");
            }
            fg.generators.push_back(pair(compile(parts[0]), compile(parts[1])));
        }
        return analyze_numeric(spec.name, SemigroupAction<Vec2>(std::move(fg), user_flags(spec)), space, opt);
    }
    if (!spec.map_x || !spec.map_y) {
        throw ParseError(spec.line, 1, "torus system '" + spec.name + "' needs 'map_x' and 'map_y'");
    }
    return analyze_numeric(
        spec.name,
        SemigroupAction<Vec2>(Cascade<Vec2>{pair(compile(*spec.map_x), compile(*spec.map_y))}, user_flags(spec)),
        space, opt);
}

} // namespace detail

inline Report run_analysis(const SystemSpec& spec, const RunSettings& settings = {})
{
    const std::uint64_t seed = spec.seed.value_or(settings.seed);
    NumericOptions opt;
    opt.seed = seed;
    opt.samples = static_cast<std::size_t>(spec.samples.value_or(default_samples));
    opt.eps_levels = static_cast<std::size_t>(spec.eps_levels.value_or(settings.eps_levels.value_or(default_eps_levels)));
    opt.limits = settings.limits;
    if (opt.samples == 0) {
        throw DomainError("samples must be >= 1");
    }
    auto horizon = [&](std::uint64_t fallback) {
        auto v = spec.horizon ? *spec.horizon : settings.horizon.value_or(fallback);
        if (v < 1) {
            throw DomainError("horizon must be >= 1");
        }
        return v;
    };

    switch (spec.kind) {
    case SystemKind::sft: {
        auto path = spec.base_dir.empty() ? std::filesystem::path(spec.target) : spec.base_dir / spec.target;
        return analyze_sft(spec.name, load_sft(path.string()), seed);
    }
    case SystemKind::map: {
        opt.polish = spec.polish;
        opt.horizon = horizon(spec.generators ? default_word_horizon : default_cascade_horizon);
        if (spec.space == "torus") {
            return detail::analyze_user_torus(spec, opt);
        }
        if (spec.space == "interval") {
            if (!(spec.lo < spec.hi)) {
                throw ParseError(spec.line, 1, "interval needs lo < hi");
            }
            return detail::analyze_user_1d(spec, Interval(spec.lo, spec.hi), opt);
        }
        return detail::analyze_user_1d(spec, Circle{}, opt);
    }
    case SystemKind::builtin: break;
    }

    const auto& id = spec.target;
    if (id == "full_shift_2") {
        return analyze_sft(spec.name, sfts::full_shift(2), seed);
    }
    if (id == "golden_mean_shift") {
        return analyze_sft(spec.name, sfts::golden_mean(), seed);
    }
    if (id == "two_cycle_shift") {
        return analyze_sft(spec.name, sfts::two_cycle(), seed);
    }
    if (id == "torus_linear_flow") {
        opt.horizon = horizon(default_flow_horizon);
        return analyze_numeric(spec.name,
                               maps::torus_linear_flow(spec.omega1.value_or(1.0), spec.omega2.value_or(std::sqrt(2.0)),
                                                       spec.dt.value_or(0.01)),
                               Torus2{}, opt);
    }
    opt.horizon = horizon(default_cascade_horizon);
    if (id == "tent") {
        return analyze_numeric(spec.name, maps::tent_cascade(), Interval(0.0, 1.0), opt);
    }
    if (id == "doubling") {
        return analyze_numeric(spec.name, maps::doubling_cascade(), Circle{}, opt);
    }
    if (id == "logistic4") {
        return analyze_numeric(spec.name, maps::logistic4_cascade(), Interval(0.0, 1.0), opt);
    }
    if (id == "rotation") {
        return analyze_numeric(spec.name, maps::rotation_cascade(spec.alpha.value_or(maps::golden_rotation)), Circle{},
                               opt);
    }
    if (id == "cat_map") {
        return analyze_numeric(spec.name, maps::cat_cascade(), Torus2{}, opt);
    }
    if (id == "identity") {
        return analyze_numeric(spec.name, maps::identity_cascade(), Interval(0.0, 1.0), opt);
    }
    throw ParseError(spec.line, 1, "unknown builtin '" + id + "'");
}

/// Spec for a registry entry under its own id.
inline SystemSpec builtin_spec(std::string_view id)
{
    SystemSpec spec;
    spec.name = std::string(id);
    spec.kind = SystemKind::builtin;
    spec.target = std::string(id);
    return spec;
}

} // namespace topodyn::cli
