#pragma once

#include <algorithm>
#include <string_view>
#include <vector>

namespace topodyn::cli {

struct BuiltinInfo {
    std::string_view id;
    std::string_view description;
    /// True for subshifts analysed exactly; false for sampled numeric systems.
    bool symbolic = false;
};

inline const std::vector<BuiltinInfo>& registry_list()
{
    static const std::vector<BuiltinInfo> list{
        {"tent", "tent map on [0,1]", false},
        {"doubling", "x -> 2x mod 1 on the circle", false},
        {"logistic4", "x -> 4x(1-x) on [0,1]", false},
        {"rotation", "x -> x + alpha mod 1 on the circle (alpha defaults to the golden mean)", false},
        {"cat_map", "(x,y) -> (2x+y, x+y) mod 1 on the torus", false},
        {"full_shift_2", "full shift on two symbols", true},
        {"golden_mean_shift", "shift forbidding the word 11", true},
        {"two_cycle_shift", "shift on the single periodic orbit 0101...", true},
        {"torus_linear_flow", "t -> p + t(omega1, omega2) mod 1, sampled every dt (defaults 1, sqrt 2, 0.01)", false},
        {"identity", "identity map on [0,1]", false},
    };
    return list;
}

inline const BuiltinInfo* find_builtin(std::string_view id)
{
    const auto& list = registry_list();
    auto it = std::find_if(list.begin(), list.end(), [&](const BuiltinInfo& b) { return b.id == id; });
    return it == list.end() ? nullptr : &*it;
}

} // namespace topodyn::cli
