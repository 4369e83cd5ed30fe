#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topodyn/numeric/verdict.hpp"

namespace topodyn {

enum class Property : std::size_t {
    tt,
    pt,
    dpt,
    eq_nonempty,
    almost_equicontinuous,
    equicontinuous,
    minimal,
    bronstein_dense,
    m_system,
    p_system,
    periodic_dense,
    sensitive,
    infinite,
    perfect,
};

inline constexpr std::size_t property_count = 14;

inline constexpr std::array<Property, property_count> all_properties{
    Property::tt,          Property::pt,          Property::dpt,          Property::eq_nonempty,
    Property::almost_equicontinuous, Property::equicontinuous, Property::minimal, Property::bronstein_dense,
    Property::m_system,    Property::p_system,    Property::periodic_dense, Property::sensitive,
    Property::infinite,    Property::perfect,
};

inline std::string_view to_string(Property p)
{
    static constexpr std::array<std::string_view, property_count> names{
        "TT",       "PT",      "DPT",           "EqNonempty",     "AlmostEquicontinuous",
        "Equicontinuous", "Minimal", "BronsteinDense", "MSystem", "PSystem",
        "PeriodicDense",  "Sensitive", "Infinite",  "Perfect"};
    return names[static_cast<std::size_t>(p)];
}

inline std::optional<Property> parse_property(std::string_view text)
{
    for (Property p : all_properties) {
        if (to_string(p) == text) {
            return p;
        }
    }
    return std::nullopt;
}

struct StructuralFlags {
    bool f_semigroup = false;
    bool c_semigroup = false;
    bool group = false;
    bool isometric = false;
    bool polish = true;

    friend bool operator==(const StructuralFlags&, const StructuralFlags&) = default;
};

/// Equicontinuity and transitivity observed at one probed point.
struct PointObservation {
    std::string point;
    Status eq = Status::unknown;
    Status trans = Status::unknown;
    /// Rule that upgraded `eq` or `trans`, empty when both were observed directly.
    std::string derived_by;

    friend bool operator==(const PointObservation&, const PointObservation&) = default;
};

struct ClassificationReport {
    std::string system;
    std::array<Verdict, property_count> verdicts{};
    StructuralFlags flags;
    std::vector<PointObservation> points;

    [[nodiscard]] Verdict& operator[](Property p) { return verdicts[static_cast<std::size_t>(p)]; }
    [[nodiscard]] const Verdict& operator[](Property p) const { return verdicts[static_cast<std::size_t>(p)]; }
    [[nodiscard]] Status status(Property p) const { return (*this)[p].status; }

    void set(Property p, Status s, std::string witness = {}, HorizonTuple horizon = {})
    {
        auto& v = (*this)[p];
        v.status = s;
        v.witness = std::move(witness);
        v.horizon = horizon;
    }

    friend bool operator==(const ClassificationReport&, const ClassificationReport&) = default;
};

} // namespace topodyn
