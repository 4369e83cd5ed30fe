#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "topodyn/core/errors.hpp"

namespace topodyn {

/// Word over generator indices; (g0, g1, ..., gm) acts as g0 o g1 o ... o gm.
using Word = std::vector<std::uint32_t>;

/// Semigroup element: an iterate count n >= 1 (cascades), a step count k >= 1
/// meaning t = k * dt (sampled flows), or a nonempty word (finitely generated).
using Index = std::variant<std::uint64_t, Word>;

inline std::string describe_index(const Index& s)
{
    if (const auto* n = std::get_if<std::uint64_t>(&s)) {
        return std::to_string(*n);
    }
    std::string out = "w";
    for (auto g : std::get<Word>(s)) {
        out += ":" + std::to_string(g);
    }
    return out;
}

struct ActionFlags {
    bool f_semigroup = false;
    bool c_semigroup = false;
    bool group = false;
    bool isometric = false;

    friend bool operator==(const ActionFlags&, const ActionFlags&) = default;
};

template <class P>
struct Cascade {
    std::function<P(const P&)> map;
};

template <class P>
struct FinitelyGenerated {
    std::vector<std::function<P(const P&)>> generators;
};

template <class P>
struct SampledFlow {
    std::function<P(double, const P&)> flow;
    double dt = 0.01;
    /// Length of the compact tail [0, s0) that is sampled on the dt grid.
    double tail = 1.0;
};

template <class P>
using ActionKind = std::variant<Cascade<P>, FinitelyGenerated<P>, SampledFlow<P>>;

template <class P>
class SemigroupAction {
public:
    using point_type = P;

    SemigroupAction(ActionKind<P> kind, ActionFlags flags) : kind_(std::move(kind)), flags_(flags)
    {
        if (is_cascade()) {
            flags_.f_semigroup = true;
            flags_.c_semigroup = true;
        }
        if (flags_.f_semigroup) {
            flags_.c_semigroup = true;
        }
        if (const auto* fg = std::get_if<FinitelyGenerated<P>>(&kind_); fg && fg->generators.empty()) {
            throw DomainError("finitely generated action needs at least one generator");
        }
        if (const auto* fl = std::get_if<SampledFlow<P>>(&kind_); fl && !(fl->dt > 0.0)) {
            throw DomainError("sampled flow needs dt > 0");
        }
    }

    [[nodiscard]] const ActionKind<P>& kind() const noexcept { return kind_; }
    [[nodiscard]] const ActionFlags& flags() const noexcept { return flags_; }
    [[nodiscard]] bool is_cascade() const noexcept { return std::holds_alternative<Cascade<P>>(kind_); }
    [[nodiscard]] bool is_flow() const noexcept { return std::holds_alternative<SampledFlow<P>>(kind_); }
    [[nodiscard]] bool is_finitely_generated() const noexcept
    {
        return std::holds_alternative<FinitelyGenerated<P>>(kind_);
    }

    /// Grid step of a sampled flow; 1 for discrete kinds.
    [[nodiscard]] double time_step() const noexcept
    {
        if (const auto* fl = std::get_if<SampledFlow<P>>(&kind_)) {
            return fl->dt;
        }
        return 1.0;
    }

    [[nodiscard]] P act(const Index& s, const P& x) const
    {
        return std::visit(
            [&](const auto& k) -> P {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Cascade<P>>) {
                    std::uint64_t n = steps_of(s, "cascade");
                    P y = x;
                    for (std::uint64_t i = 0; i < n; ++i) {
                        y = k.map(y);
                    }
                    return y;
                } else if constexpr (std::is_same_v<K, SampledFlow<P>>) {
                    std::uint64_t n = steps_of(s, "sampled flow");
                    return k.flow(static_cast<double>(n) * k.dt, x);
                } else {
                    const auto* w = std::get_if<Word>(&s);
                    if (w == nullptr || w->empty()) {
                        throw DomainError("finitely generated action: index must be a nonempty word");
                    }
                    P y = x;
                    for (auto it = w->rbegin(); it != w->rend(); ++it) {
                        if (*it >= k.generators.size()) {
                            throw DomainError("finitely generated action: unknown generator " + std::to_string(*it));
                        }
                        y = k.generators[*it](y);
                    }
                    return y;
                }
            },
            kind_);
    }

    /// Flow time carried by a step index; throws for t below the grid step.
    [[nodiscard]] std::uint64_t flow_steps(double t) const
    {
        double dt = time_step();
        double k = std::round(t / dt);
        if (k < 1.0 || std::fabs(k * dt - t) > 1e-9 * std::max(1.0, t)) {
            throw DomainError("sampled flow: time must be a positive multiple of dt");
        }
        return static_cast<std::uint64_t>(k);
    }

    /// Product s1 * s2, i.e. act(s1 * s2, x) = act(s1, act(s2, x)).
    [[nodiscard]] Index compose(const Index& s1, const Index& s2) const
    {
        if (is_finitely_generated()) {
            const auto* a = std::get_if<Word>(&s1);
            const auto* b = std::get_if<Word>(&s2);
            if (a == nullptr || b == nullptr) {
                throw DomainError("compose: finitely generated indices must be words");
            }
            Word w = *a;
            w.insert(w.end(), b->begin(), b->end());
            return w;
        }
        return steps_of(s1, "compose") + steps_of(s2, "compose");
    }

    [[nodiscard]] std::size_t generator_count() const noexcept
    {
        if (const auto* fg = std::get_if<FinitelyGenerated<P>>(&kind_)) {
            return fg->generators.size();
        }
        return 1;
    }

    /// Number of indices in sample_elements(horizon) and the map evaluations
    /// a full orbit walk costs.
    [[nodiscard]] std::pair<std::uint64_t, std::uint64_t> element_count(std::uint64_t horizon) const
    {
        if (!is_finitely_generated()) {
            return {horizon, horizon};
        }
        const double k = static_cast<double>(generator_count());
        double count = 0.0;
        double evals = 0.0;
        double layer = 1.0;
        for (std::uint64_t len = 1; len <= horizon; ++len) {
            layer *= k;
            count += layer;
            evals += layer * static_cast<double>(len);
            if (evals > 1e18) {
                break;
            }
        }
        auto clamp = [](double v) {
            return v >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(v);
        };
        return {clamp(count), clamp(evals)};
    }

    /// Deterministic enumeration of semigroup elements: 1..h for cascades,
    /// dt..h*dt for flows, words of length <= h (shortest first, then
    /// lexicographic) for finitely generated actions.
    [[nodiscard]] std::vector<Index> sample_elements(std::uint64_t horizon, const Limits& limits = {}) const
    {
        auto [count, evals] = element_count(horizon);
        if (count > limits.max_evals) {
            throw ResourceError("sample_elements", std::to_string(count) + " elements exceed cap");
        }
        std::vector<Index> out;
        out.reserve(count);
        for_each_index(horizon, [&](const Index& s) {
            out.push_back(s);
            return true;
        });
        return out;
    }

    /// Calls f(index) in sample_elements order until f returns false.
    template <class F>
    void for_each_index(std::uint64_t horizon, F&& f) const
    {
        if (!is_finitely_generated()) {
            for (std::uint64_t n = 1; n <= horizon; ++n) {
                if (!f(Index{n})) {
                    return;
                }
            }
            return;
        }
        const auto k = static_cast<std::uint32_t>(generator_count());
        for (std::uint64_t len = 1; len <= horizon; ++len) {
            Word w(len, 0);
            while (true) {
                if (!f(Index{w})) {
                    return;
                }
                std::size_t i = w.size();
                while (i > 0 && w[i - 1] + 1 == k) {
                    w[i - 1] = 0;
                    --i;
                }
                if (i == 0) {
                    break;
                }
                ++w[i - 1];
            }
        }
    }

private:
    static std::uint64_t steps_of(const Index& s, const char* who)
    {
        const auto* n = std::get_if<std::uint64_t>(&s);
        if (n == nullptr) {
            throw DomainError(std::string(who) + ": index must be a step count");
        }
        if (*n == 0) {
            throw DomainError(std::string(who) + ": index must be >= 1");
        }
        return *n;
    }

    ActionKind<P> kind_;
    ActionFlags flags_;
};

template <class P>
struct OrbitSegment {
    P base_point;
    std::vector<Index> indices;
    std::vector<P> states;
};

/// Visits (position, index, state) along sample_elements(horizon); position
/// is 1-based. Cascades advance incrementally; flows and words are evaluated
/// directly. Every map evaluation is charged to `budget`. Stops when f returns false.
template <class P, class F>
void walk_orbit(const SemigroupAction<P>& action, const P& x, std::uint64_t horizon, EvalBudget& budget, F&& f)
{
    if (const auto* c = std::get_if<Cascade<P>>(&action.kind())) {
        P y = x;
        for (std::uint64_t n = 1; n <= horizon; ++n) {
            budget.charge(1);
            y = c->map(y);
            if (!f(n, Index{n}, y)) {
                return;
            }
        }
        return;
    }
    if (const auto* fl = std::get_if<SampledFlow<P>>(&action.kind())) {
        for (std::uint64_t n = 1; n <= horizon; ++n) {
            budget.charge(1);
            P y = fl->flow(static_cast<double>(n) * fl->dt, x);
            if (!f(n, Index{n}, y)) {
                return;
            }
        }
        return;
    }
    std::uint64_t pos = 0;
    action.for_each_index(horizon, [&](const Index& s) {
        budget.charge(std::get<Word>(s).size());
        return f(++pos, s, action.act(s, x));
    });
}

template <class P>
OrbitSegment<P> orbit(const SemigroupAction<P>& action, const P& x, std::uint64_t horizon, const Limits& limits = {})
{
    if (horizon < 1) {
        throw DomainError("orbit: horizon must be >= 1");
    }
    EvalBudget budget("orbit", limits.max_evals);
    budget.require(action.element_count(horizon).second);
    OrbitSegment<P> seg{x, {}, {}};
    walk_orbit(action, x, horizon, budget, [&](std::uint64_t, const Index& s, const P& y) {
        seg.indices.push_back(s);
        seg.states.push_back(y);
        return true;
    });
    return seg;
}

} // namespace topodyn
