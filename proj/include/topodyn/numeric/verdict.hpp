#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "topodyn/core/format.hpp"

namespace topodyn {

/// Ordered by strength for positive evidence: Proven > Witnessed > Unknown.
/// Refuted is the negative outcome and sits outside that chain.
enum class Status { refuted, unknown, witnessed, proven };

inline std::string_view to_string(Status s)
{
    switch (s) {
    case Status::refuted: return "Refuted";
    case Status::unknown: return "Unknown";
    case Status::witnessed: return "Witnessed";
    case Status::proven: return "Proven";
    }
    return "Unknown";
}

inline std::optional<Status> parse_status(std::string_view text)
{
    for (Status s : {Status::refuted, Status::unknown, Status::witnessed, Status::proven}) {
        if (to_string(s) == text) {
            return s;
        }
    }
    return std::nullopt;
}

/// Proven or Witnessed.
constexpr bool holds(Status s) noexcept { return s == Status::proven || s == Status::witnessed; }

/// Conjunction: any Refuted forces Refuted, otherwise the weaker status.
constexpr Status meet(Status a, Status b) noexcept
{
    if (a == Status::refuted || b == Status::refuted) {
        return Status::refuted;
    }
    return a < b ? a : b;
}

/// Resolution that produced a verdict. Zero means "not used".
struct HorizonTuple {
    double eps = 0.0;
    double delta = 0.0;
    std::uint64_t horizon = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] std::string describe() const
    {
        return "eps=" + format_double(eps) + ";delta=" + format_double(delta) + ";horizon=" + std::to_string(horizon) +
               ";samples=" + std::to_string(samples) + ";seed=" + std::to_string(seed);
    }

    friend bool operator==(const HorizonTuple&, const HorizonTuple&) = default;
};

struct Verdict {
    Status status = Status::unknown;
    /// Human-readable witness (or refutation) summary; empty when none.
    std::string witness;
    HorizonTuple horizon;
    /// Constant carried by the verdict, e.g. a sensitivity constant.
    std::optional<double> constant;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

} // namespace topodyn
