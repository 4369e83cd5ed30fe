#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace topodyn {

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double value)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

inline bool parse_double(std::string_view text, double& out)
{
    if (text.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

inline bool parse_u64(std::string_view text, std::uint64_t& out)
{
    if (text.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

inline std::optional<double> parse_double(std::string_view text)
{
    double v = 0.0;
    return parse_double(text, v) ? std::optional<double>{v} : std::nullopt;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view text)
{
    std::uint64_t v = 0;
    return parse_u64(text, v) ? std::optional<std::uint64_t>{v} : std::nullopt;
}

} // namespace topodyn
