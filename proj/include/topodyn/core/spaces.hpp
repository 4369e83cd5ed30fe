#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "topodyn/core/errors.hpp"
#include "topodyn/core/format.hpp"
#include "topodyn/core/random.hpp"

namespace topodyn {

using Vec2 = std::array<double, 2>;
using Symbols = std::vector<std::uint8_t>;

enum class PointRepr { real_interval, circle, torus_2d, symbol_sequence };

/// Finite eps-dense subset of a space. `per_axis` is the grid size for the
/// continuous spaces, `depth` the number of fixed coordinates for sequences.
template <class P>
struct EpsNet {
    double eps = 0.0;
    std::vector<P> points;
    std::size_t per_axis = 0;
    std::size_t depth = 0;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Reduce to [0, 1).
inline double mod1(double x)
{
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

/// Arc-length distance on R/Z.
inline double circle_distance(double a, double b)
{
    double d = std::fabs(a - b);
    d -= std::floor(d);
    return std::min(d, 1.0 - d);
}

namespace detail {

inline constexpr double golden_step = 0.6180339887498948482;
// Inverse powers of the plastic number; generates a low-discrepancy 2-d sequence.
inline constexpr double plastic_step_1 = 0.7548776662466927600;
inline constexpr double plastic_step_2 = 0.5698402909980532659;
inline constexpr std::array<double, 3> probe_fractions{0.999, 0.5, 0.25};

inline void check_eps(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw DomainError("epsilon_net: eps must be a positive finite real");
    }
}

inline std::size_t grid_count(double extent, double eps, std::size_t cap, std::size_t dims)
{
    double n = std::ceil(extent / eps);
    double total = std::pow(n, static_cast<double>(dims));
    if (total > static_cast<double>(cap)) {
        throw ResourceError("epsilon_net", "net of " + format_double(total) + " points exceeds cap of " +
                                               std::to_string(cap));
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

// Offset in (-r, r) for the k-th element of a Kronecker sequence with step `step`.
inline double kronecker_offset(double r, std::size_t k, double step)
{
    double u = mod1(static_cast<double>(k) * step);
    return 0.999 * r * (2.0 * u - 1.0);
}

} // namespace detail

/// Closed interval [lo, hi] with the absolute-value metric.
class Interval {
public:
    using point_type = double;

    Interval(double lo = 0.0, double hi = 1.0) : lo_(lo), hi_(hi)
    {
        if (!(lo < hi)) {
            throw DomainError("interval: lo must be below hi");
        }
    }

    [[nodiscard]] static constexpr PointRepr repr() noexcept { return PointRepr::real_interval; }
    [[nodiscard]] std::string name() const { return "interval[" + format_double(lo_) + "," + format_double(hi_) + "]"; }
    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }

    [[nodiscard]] double distance(double a, double b) const { return std::fabs(a - b); }
    [[nodiscard]] double diameter_hint() const noexcept { return hi_ - lo_; }
    [[nodiscard]] bool perfect() const noexcept { return true; }
    [[nodiscard]] bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

    [[nodiscard]] std::vector<double> sample(std::uint64_t seed, std::size_t count) const
    {
        std::mt19937_64 rng(seed);
        std::vector<double> out(count);
        for (auto& x : out) {
            x = lo_ + (hi_ - lo_) * unit_double(rng);
        }
        return out;
    }

    /// Cell midpoints of a uniform partition with cell width <= eps.
    [[nodiscard]] EpsNet<double> epsilon_net(double eps, const Limits& limits = {}) const
    {
        detail::check_eps(eps);
        std::size_t n = detail::grid_count(hi_ - lo_, eps, limits.max_net, 1);
        EpsNet<double> net{eps, {}, n, 0};
        double w = (hi_ - lo_) / static_cast<double>(n);
        net.points.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            net.points.push_back(lo_ + (static_cast<double>(i) + 0.5) * w);
        }
        return net;
    }

    void net_hits(const EpsNet<double>& net, double p, std::vector<std::size_t>& out) const
    {
        out.clear();
        const auto n = static_cast<std::ptrdiff_t>(net.per_axis);
        double w = (hi_ - lo_) / static_cast<double>(n);
        auto c = static_cast<std::ptrdiff_t>(std::floor((p - lo_) / w));
        auto r = static_cast<std::ptrdiff_t>(std::ceil(net.eps / w)) + 1;
        for (auto i = std::max<std::ptrdiff_t>(0, c - r); i <= std::min(n - 1, c + r); ++i) {
            if (distance(p, net.points[static_cast<std::size_t>(i)]) < net.eps) {
                out.push_back(static_cast<std::size_t>(i));
            }
        }
    }

    [[nodiscard]] std::vector<double> ball_points(double center, double radius, std::size_t count) const
    {
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t k = 1; k <= count; ++k) {
            out.push_back(std::clamp(center + detail::kronecker_offset(radius, k, detail::golden_step), lo_, hi_));
        }
        return out;
    }

    /// Points at distances {0.999, 1/2, 1/4} * delta on both sides, where they stay inside.
    [[nodiscard]] std::vector<double> radial_probes(double x, double delta) const
    {
        std::vector<double> out;
        for (double f : detail::probe_fractions) {
            for (double sign : {1.0, -1.0}) {
                double y = x + sign * f * delta;
                if (contains(y) && y != x) {
                    out.push_back(y);
                }
            }
        }
        return out;
    }

    [[nodiscard]] std::string describe(double x) const { return format_double(x); }

private:
    double lo_;
    double hi_;
};

/// R/Z represented by [0, 1), arc-length metric (diameter 1/2).
class Circle {
public:
    using point_type = double;

    [[nodiscard]] static constexpr PointRepr repr() noexcept { return PointRepr::circle; }
    [[nodiscard]] std::string name() const { return "circle"; }

    [[nodiscard]] double distance(double a, double b) const { return circle_distance(a, b); }
    [[nodiscard]] double diameter_hint() const noexcept { return 0.5; }
    [[nodiscard]] bool perfect() const noexcept { return true; }

    [[nodiscard]] std::vector<double> sample(std::uint64_t seed, std::size_t count) const
    {
        std::mt19937_64 rng(seed);
        std::vector<double> out(count);
        for (auto& x : out) {
            x = unit_double(rng);
        }
        return out;
    }

    /// Uniform grid {i/n} with spacing 1/n <= eps.
    [[nodiscard]] EpsNet<double> epsilon_net(double eps, const Limits& limits = {}) const
    {
        detail::check_eps(eps);
        std::size_t n = detail::grid_count(1.0, eps, limits.max_net, 1);
        EpsNet<double> net{eps, {}, n, 0};
        net.points.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            net.points.push_back(static_cast<double>(i) / static_cast<double>(n));
        }
        return net;
    }

    void net_hits(const EpsNet<double>& net, double p, std::vector<std::size_t>& out) const
    {
        out.clear();
        const auto n = static_cast<std::ptrdiff_t>(net.per_axis);
        auto r = static_cast<std::ptrdiff_t>(std::ceil(net.eps * static_cast<double>(n))) + 1;
        if (2 * r + 1 >= n) {
            for (std::size_t i = 0; i < net.points.size(); ++i) {
                if (distance(p, net.points[i]) < net.eps) {
                    out.push_back(i);
                }
            }
            return;
        }
        auto c = static_cast<std::ptrdiff_t>(std::llround(mod1(p) * static_cast<double>(n)));
        for (auto i = c - r; i <= c + r; ++i) {
            auto idx = static_cast<std::size_t>(((i % n) + n) % n);
            if (distance(p, net.points[idx]) < net.eps) {
                out.push_back(idx);
            }
        }
        std::sort(out.begin(), out.end());
    }

    [[nodiscard]] std::vector<double> ball_points(double center, double radius, std::size_t count) const
    {
        radius = std::min(radius, 0.5);
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t k = 1; k <= count; ++k) {
            out.push_back(mod1(center + detail::kronecker_offset(radius, k, detail::golden_step)));
        }
        return out;
    }

    [[nodiscard]] std::vector<double> radial_probes(double x, double delta) const
    {
        std::vector<double> out;
        for (double f : detail::probe_fractions) {
            double d = std::min(f * delta, 0.499);
            out.push_back(mod1(x + d));
            out.push_back(mod1(x - d));
        }
        return out;
    }

    [[nodiscard]] std::string describe(double x) const { return format_double(x); }
};

/// (R/Z)^2 with the max of the coordinate arc distances (diameter 1/2).
class Torus2 {
public:
    using point_type = Vec2;

    [[nodiscard]] static constexpr PointRepr repr() noexcept { return PointRepr::torus_2d; }
    [[nodiscard]] std::string name() const { return "torus2"; }

    [[nodiscard]] double distance(const Vec2& a, const Vec2& b) const
    {
        return std::max(circle_distance(a[0], b[0]), circle_distance(a[1], b[1]));
    }
    [[nodiscard]] double diameter_hint() const noexcept { return 0.5; }
    [[nodiscard]] bool perfect() const noexcept { return true; }

    [[nodiscard]] std::vector<Vec2> sample(std::uint64_t seed, std::size_t count) const
    {
        std::mt19937_64 rng(seed);
        std::vector<Vec2> out(count);
        for (auto& p : out) {
            p[0] = unit_double(rng);
            p[1] = unit_double(rng);
        }
        return out;
    }

    [[nodiscard]] EpsNet<Vec2> epsilon_net(double eps, const Limits& limits = {}) const
    {
        detail::check_eps(eps);
        std::size_t n = detail::grid_count(1.0, eps, limits.max_net, 2);
        EpsNet<Vec2> net{eps, {}, n, 0};
        net.points.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                net.points.push_back({static_cast<double>(i) / static_cast<double>(n),
                                      static_cast<double>(j) / static_cast<double>(n)});
            }
        }
        return net;
    }

    void net_hits(const EpsNet<Vec2>& net, const Vec2& p, std::vector<std::size_t>& out) const
    {
        out.clear();
        const auto n = static_cast<std::ptrdiff_t>(net.per_axis);
        auto r = static_cast<std::ptrdiff_t>(std::ceil(net.eps * static_cast<double>(n))) + 1;
        auto axis = [&](double v) {
            std::vector<std::ptrdiff_t> idx;
            if (2 * r + 1 >= n) {
                for (std::ptrdiff_t i = 0; i < n; ++i) {
                    idx.push_back(i);
                }
                return idx;
            }
            auto c = static_cast<std::ptrdiff_t>(std::llround(mod1(v) * static_cast<double>(n)));
            for (auto i = c - r; i <= c + r; ++i) {
                idx.push_back(((i % n) + n) % n);
            }
            return idx;
        };
        for (auto i : axis(p[0])) {
            for (auto j : axis(p[1])) {
                auto k = static_cast<std::size_t>(i * n + j);
                if (distance(p, net.points[k]) < net.eps) {
                    out.push_back(k);
                }
            }
        }
        std::sort(out.begin(), out.end());
    }

    [[nodiscard]] std::vector<Vec2> ball_points(const Vec2& center, double radius, std::size_t count) const
    {
        radius = std::min(radius, 0.5);
        std::vector<Vec2> out;
        out.reserve(count);
        for (std::size_t k = 1; k <= count; ++k) {
            out.push_back({mod1(center[0] + detail::kronecker_offset(radius, k, detail::plastic_step_1)),
                           mod1(center[1] + detail::kronecker_offset(radius, k, detail::plastic_step_2))});
        }
        return out;
    }

    /// Eight compass directions (max-norm length) at each probe radius.
    [[nodiscard]] std::vector<Vec2> radial_probes(const Vec2& x, double delta) const
    {
        static constexpr std::array<std::array<double, 2>, 8> dirs{
            {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
        std::vector<Vec2> out;
        for (double f : detail::probe_fractions) {
            double d = std::min(f * delta, 0.499);
            for (const auto& dir : dirs) {
                out.push_back({mod1(x[0] + dir[0] * d), mod1(x[1] + dir[1] * d)});
            }
        }
        return out;
    }

    [[nodiscard]] std::string describe(const Vec2& p) const
    {
        return "(" + format_double(p[0]) + "," + format_double(p[1]) + ")";
    }
};

/// One-sided sequences over {0..k-1}, truncated to `depth` coordinates, with
/// d(x, y) = 2^-(first differing index). Resolution floor is 2^-depth.
class SequenceSpace {
public:
    using point_type = Symbols;

    SequenceSpace(std::size_t alphabet = 2, std::size_t depth = 32) : alphabet_(alphabet), depth_(depth)
    {
        if (alphabet < 1 || alphabet > 255) {
            throw DomainError("sequence space: alphabet size must be in [1, 255]");
        }
        if (depth < 1 || depth > 1000) {
            throw DomainError("sequence space: depth must be in [1, 1000]");
        }
    }

    [[nodiscard]] static constexpr PointRepr repr() noexcept { return PointRepr::symbol_sequence; }
    [[nodiscard]] std::string name() const
    {
        return "sequences(" + std::to_string(alphabet_) + "," + std::to_string(depth_) + ")";
    }
    [[nodiscard]] std::size_t alphabet() const noexcept { return alphabet_; }
    [[nodiscard]] std::size_t depth() const noexcept { return depth_; }

    [[nodiscard]] double distance(const Symbols& a, const Symbols& b) const
    {
        std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] != b[i]) {
                return std::ldexp(1.0, -static_cast<int>(i));
            }
        }
        return 0.0;
    }
    [[nodiscard]] double diameter_hint() const noexcept { return 1.0; }
    [[nodiscard]] bool perfect() const noexcept { return alphabet_ >= 2; }

    [[nodiscard]] std::vector<Symbols> sample(std::uint64_t seed, std::size_t count) const
    {
        std::mt19937_64 rng(seed);
        std::vector<Symbols> out(count, Symbols(depth_));
        for (auto& w : out) {
            for (auto& s : w) {
                s = static_cast<std::uint8_t>(rng() % alphabet_);
            }
        }
        return out;
    }

    /// Number of leading coordinates that must agree for distance < eps.
    [[nodiscard]] static std::size_t agreement_length(double eps)
    {
        std::size_t j = 0;
        while (std::ldexp(1.0, -static_cast<int>(j)) >= eps && j < 4096) {
            ++j;
        }
        return j;
    }

    /// One representative per cylinder of length ceil(log2(1/eps)) + 1,
    /// padded with zeros, in lexicographic order.
    [[nodiscard]] EpsNet<Symbols> epsilon_net(double eps, const Limits& limits = {}) const
    {
        detail::check_eps(eps);
        double lg = std::ceil(std::log2(1.0 / eps));
        std::size_t m = lg < 0.0 ? 1 : static_cast<std::size_t>(lg) + 1;
        m = std::min(m, depth_);
        std::size_t count = 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (count > limits.max_net / alphabet_) {
                throw ResourceError("epsilon_net", "cylinder net exceeds cap of " + std::to_string(limits.max_net));
            }
            count *= alphabet_;
        }
        EpsNet<Symbols> net{eps, {}, 0, m};
        net.points.reserve(count);
        for (std::size_t idx = 0; idx < count; ++idx) {
            Symbols w(depth_, 0);
            std::size_t v = idx;
            for (std::size_t i = m; i-- > 0;) {
                w[i] = static_cast<std::uint8_t>(v % alphabet_);
                v /= alphabet_;
            }
            net.points.push_back(std::move(w));
        }
        return net;
    }

    void net_hits(const EpsNet<Symbols>& net, const Symbols& p, std::vector<std::size_t>& out) const
    {
        out.clear();
        std::size_t j = agreement_length(net.eps);
        if (j > net.depth) {
            for (std::size_t i = 0; i < net.points.size(); ++i) {
                if (distance(p, net.points[i]) < net.eps) {
                    out.push_back(i);
                }
            }
            return;
        }
        std::size_t prefix = 0;
        for (std::size_t i = 0; i < j; ++i) {
            prefix = prefix * alphabet_ + p[i];
        }
        std::size_t block = 1;
        for (std::size_t i = j; i < net.depth; ++i) {
            block *= alphabet_;
        }
        for (std::size_t t = 0; t < block; ++t) {
            out.push_back(prefix * block + t);
        }
    }

    [[nodiscard]] std::vector<Symbols> ball_points(const Symbols& center, double radius, std::size_t count) const
    {
        std::size_t j = std::min(agreement_length(radius), depth_);
        std::vector<Symbols> out;
        out.reserve(count);
        for (std::size_t k = 1; k <= count; ++k) {
            std::mt19937_64 rng(mix_seed(0x5eed, k));
            Symbols w = center;
            for (std::size_t i = j; i < depth_; ++i) {
                w[i] = static_cast<std::uint8_t>(rng() % alphabet_);
            }
            out.push_back(std::move(w));
        }
        return out;
    }

    /// Flip one coordinate at each of the three first positions that keep distance < delta.
    [[nodiscard]] std::vector<Symbols> radial_probes(const Symbols& x, double delta) const
    {
        std::vector<Symbols> out;
        if (alphabet_ < 2) {
            return out;
        }
        std::size_t j = agreement_length(delta);
        for (std::size_t m = j; m < j + 3 && m < depth_; ++m) {
            Symbols y = x;
            y[m] = static_cast<std::uint8_t>((y[m] + 1) % alphabet_);
            out.push_back(std::move(y));
        }
        return out;
    }

    [[nodiscard]] std::string describe(const Symbols& w) const
    {
        std::string s;
        for (std::size_t i = 0; i < std::min<std::size_t>(w.size(), 16); ++i) {
            s += alphabet_ <= 10 ? static_cast<char>('0' + w[i]) : '?';
        }
        return s + (w.size() > 16 ? "..." : "");
    }

private:
    std::size_t alphabet_;
    std::size_t depth_;
};

template <class S>
concept MetricSpace = requires(const S& s, const typename S::point_type& p, double r, std::uint64_t seed,
                               std::size_t n, const Limits& limits, const EpsNet<typename S::point_type>& net,
                               std::vector<std::size_t>& hits) {
    { s.distance(p, p) } -> std::convertible_to<double>;
    { s.diameter_hint() } -> std::convertible_to<double>;
    { s.perfect() } -> std::convertible_to<bool>;
    { S::repr() } -> std::same_as<PointRepr>;
    { s.sample(seed, n) } -> std::same_as<std::vector<typename S::point_type>>;
    { s.epsilon_net(r, limits) } -> std::same_as<EpsNet<typename S::point_type>>;
    s.net_hits(net, p, hits);
    { s.ball_points(p, r, n) } -> std::same_as<std::vector<typename S::point_type>>;
    { s.radial_probes(p, r) } -> std::same_as<std::vector<typename S::point_type>>;
    { s.describe(p) } -> std::same_as<std::string>;
};

static_assert(MetricSpace<Interval>);
static_assert(MetricSpace<Circle>);
static_assert(MetricSpace<Torus2>);
static_assert(MetricSpace<SequenceSpace>);

/// Geometric ladder start, start/2, ... with `levels` entries.
inline std::vector<double> geometric_ladder(double start, std::size_t levels)
{
    std::vector<double> out;
    out.reserve(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        out.push_back(std::ldexp(start, -static_cast<int>(i)));
    }
    return out;
}

/// Halving ladder from `start` that stops at the first entry <= floor.
inline std::vector<double> geometric_ladder_to(double start, double floor)
{
    std::vector<double> out{start};
    while (out.back() > floor) {
        out.push_back(out.back() / 2.0);
    }
    return out;
}

} // namespace topodyn
