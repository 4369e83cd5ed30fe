#pragma once

#include <cmath>

#include "topodyn/core/action.hpp"
#include "topodyn/core/spaces.hpp"

// Built-in transformations. Interval maps act on [0, 1]; circle and torus
// maps keep their values in [0, 1).
namespace topodyn::maps {

inline constexpr double golden_rotation = 0.6180339887498948482; // (sqrt(5) - 1) / 2

inline double tent(double x) { return x <= 0.5 ? 2.0 * x : 2.0 - 2.0 * x; }

inline double doubling(double x) { return mod1(2.0 * x); }

inline double logistic4(double x) { return 4.0 * x * (1.0 - x); }

inline Vec2 cat(const Vec2& p) { return {mod1(2.0 * p[0] + p[1]), mod1(p[0] + p[1])}; }

inline SemigroupAction<double> tent_cascade() { return {Cascade<double>{tent}, {}}; }

inline SemigroupAction<double> doubling_cascade() { return {Cascade<double>{doubling}, {}}; }

inline SemigroupAction<double> logistic4_cascade() { return {Cascade<double>{logistic4}, {}}; }

inline SemigroupAction<double> rotation_cascade(double alpha)
{
    ActionFlags flags;
    flags.isometric = true;
    return {Cascade<double>{[alpha](double x) { return mod1(x + alpha); }}, flags};
}

inline SemigroupAction<Vec2> cat_cascade() { return {Cascade<Vec2>{cat}, {}}; }

inline SemigroupAction<double> identity_cascade()
{
    ActionFlags flags;
    flags.isometric = true;
    return {Cascade<double>{[](double x) { return x; }}, flags};
}

/// phi(t, p) = p + t * (w1, w2) mod 1, sampled on the dt grid.
inline SemigroupAction<Vec2> torus_linear_flow(double w1, double w2, double dt = 0.01, double tail = 1.0)
{
    ActionFlags flags;
    flags.c_semigroup = true;
    flags.isometric = true;
    auto phi = [w1, w2](double t, const Vec2& p) -> Vec2 { return {mod1(p[0] + t * w1), mod1(p[1] + t * w2)}; };
    return {SampledFlow<Vec2>{phi, dt, tail}, flags};
}

/// Left shift on truncated sequences; the vacated last coordinate is filled with 0.
inline SemigroupAction<Symbols> shift_cascade()
{
    return {Cascade<Symbols>{[](const Symbols& w) {
                Symbols out(w.size(), 0);
                for (std::size_t i = 1; i < w.size(); ++i) {
                    out[i - 1] = w[i];
                }
                return out;
            }},
            {}};
}

} // namespace topodyn::maps
