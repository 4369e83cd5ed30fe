#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "topodyn/core/errors.hpp"
#include "topodyn/core/format.hpp"
#include "topodyn/cli/registry.hpp"

namespace topodyn::cli {

enum class SystemKind { builtin, sft, map };

/// A value together with where it was written, for late validation errors.
struct Located {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct SystemSpec {
    std::string name;
    SystemKind kind = SystemKind::builtin;
    /// Builtin id or SFT matrix path (resolved against `base_dir`).
    std::string target;
    std::filesystem::path base_dir;
    std::size_t line = 0;

    std::optional<double> alpha;
    std::optional<double> omega1;
    std::optional<double> omega2;
    std::optional<double> dt;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> eps_levels;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;

    // User maps.
    std::string space = "circle";
    double lo = 0.0;
    double hi = 1.0;
    std::optional<Located> map;
    std::optional<Located> map_x;
    std::optional<Located> map_y;
    std::optional<Located> generators;
    bool isometric = false;
    bool f_semigroup = false;
    bool c_semigroup = false;
    bool group = false;
    bool polish = false;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) {
        ++b;
    }
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
        --e;
    }
    return s.substr(b, e - b);
}

inline bool parse_bool(std::string_view v, bool& out)
{
    if (v == "true" || v == "yes" || v == "1") {
        out = true;
        return true;
    }
    if (v == "false" || v == "no" || v == "0") {
        out = false;
        return true;
    }
    return false;
}

/// Applies `key = value`; columns are 1-based positions in the source line.
inline void apply_key(SystemSpec& spec, std::string_view key, std::string_view value, std::size_t line,
                      std::size_t key_col, std::size_t value_col)
{
    auto bad = [&](const std::string& msg) -> ParseError { return ParseError(line, value_col, msg); };
    auto real = [&](std::optional<double>& slot) {
        auto v = parse_double(value);
        if (!v) {
            throw bad("expected a real number for '" + std::string(key) + "'");
        }
        slot = *v;
    };
    auto count = [&](std::optional<std::uint64_t>& slot) {
        auto v = parse_u64(value);
        if (!v) {
            throw bad("expected a non-negative integer for '" + std::string(key) + "'");
        }
        slot = *v;
    };
    auto flag = [&](bool& slot) {
        if (!parse_bool(value, slot)) {
            throw bad("expected true or false for '" + std::string(key) + "'");
        }
    };
    auto expr = [&](std::optional<Located>& slot) { slot = Located{std::string(value), line, value_col}; };

    if (key == "system") {
        if (value.rfind("builtin:", 0) == 0) {
            spec.kind = SystemKind::builtin;
            spec.target = std::string(value.substr(8));
        } else if (value.rfind("sft:", 0) == 0) {
            spec.kind = SystemKind::sft;
            spec.target = std::string(value.substr(4));
        } else if (value == "map") {
            spec.kind = SystemKind::map;
            spec.target.clear();
        } else {
            throw bad("system must be builtin:<id>, sft:<path> or map");
        }
        if ((spec.kind != SystemKind::map) && spec.target.empty()) {
            throw bad("missing system target");
        }
        if (spec.kind == SystemKind::builtin && find_builtin(spec.target) == nullptr) {
            throw ParseError(line, value_col + 8, "unknown builtin '" + spec.target + "'");
        }
    } else if (key == "alpha" || key == "\xCE\xB1") {
        real(spec.alpha);
    } else if (key == "omega1") {
        real(spec.omega1);
    } else if (key == "omega2") {
        real(spec.omega2);
    } else if (key == "dt") {
        real(spec.dt);
    } else if (key == "horizon") {
        count(spec.horizon);
    } else if (key == "eps_levels") {
        count(spec.eps_levels);
    } else if (key == "seed") {
        count(spec.seed);
    } else if (key == "samples") {
        count(spec.samples);
    } else if (key == "space") {
        if (value != "circle" && value != "interval" && value != "torus") {
            throw bad("space must be circle, interval or torus");
        }
        spec.space = std::string(value);
    } else if (key == "lo" || key == "hi") {
        std::optional<double> v;
        real(v);
        (key == "lo" ? spec.lo : spec.hi) = *v;
    } else if (key == "map") {
        expr(spec.map);
    } else if (key == "map_x") {
        expr(spec.map_x);
    } else if (key == "map_y") {
        expr(spec.map_y);
    } else if (key == "generators") {
        expr(spec.generators);
    } else if (key == "isometric") {
        flag(spec.isometric);
    } else if (key == "f_semigroup") {
        flag(spec.f_semigroup);
    } else if (key == "c_semigroup") {
        flag(spec.c_semigroup);
    } else if (key == "group") {
        flag(spec.group);
    } else if (key == "polish") {
        flag(spec.polish);
    } else {
        throw ParseError(line, key_col, "unknown key '" + std::string(key) + "'");
    }
}

} // namespace detail

/// Sectioned `key = value` text. Each `[name]` opens a system; `#` starts a comment.
inline std::vector<SystemSpec> parse_config(std::istream& in, const std::filesystem::path& base_dir = {})
{
    std::vector<SystemSpec> specs;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text(raw);
        if (auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        auto body = detail::trim(text);
        if (body.empty()) {
            continue;
        }
        const auto col_of = [&](std::string_view part) {
            return static_cast<std::size_t>(part.data() - raw.data()) + 1;
        };
        if (body.front() == '[') {
            if (body.back() != ']') {
                throw ParseError(line, col_of(body) + body.size(), "expected ']'");
            }
            auto name = detail::trim(body.substr(1, body.size() - 2));
            if (name.empty()) {
                throw ParseError(line, col_of(body) + 1, "empty section name");
            }
            for (const auto& s : specs) {
                if (s.name == name) {
                    throw ParseError(line, col_of(name), "duplicate system '" + std::string(name) + "'");
                }
            }
            SystemSpec spec;
            spec.name = std::string(name);
            spec.base_dir = base_dir;
            spec.line = line;
            specs.push_back(std::move(spec));
            continue;
        }
        auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line, col_of(body), "expected 'key = value'");
        }
        if (specs.empty()) {
            throw ParseError(line, col_of(body), "key outside of a [system] section");
        }
        auto key = detail::trim(body.substr(0, eq));
        auto value = detail::trim(body.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(line, col_of(body), "missing key");
        }
        if (value.empty()) {
            throw ParseError(line, col_of(body) + eq + 1, "missing value for '" + std::string(key) + "'");
        }
        detail::apply_key(specs.back(), key, value, line, col_of(key), col_of(value));
    }
    for (const auto& s : specs) {
        if (s.kind == SystemKind::builtin && s.target.empty()) {
            throw ParseError(s.line, 1, "system '" + s.name + "' has no 'system' key");
        }
    }
    return specs;
}

inline std::vector<SystemSpec> load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, 0, "cannot open " + path.string());
    }
    return parse_config(in, path.parent_path());
}

/// One-line form: `builtin:rotation alpha=0.618 seed=7` or `sft:golden_mean.mat`.
inline SystemSpec parse_inline_spec(std::string_view text, const std::filesystem::path& base_dir = {})
{
    SystemSpec spec;
    spec.base_dir = base_dir;
    spec.line = 1;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') {
            ++pos;
        }
        if (pos == text.size()) {
            break;
        }
        std::size_t end = text.find(' ', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto token = text.substr(pos, end - pos);
        if (first) {
            detail::apply_key(spec, "system", token, 1, pos + 1, pos + 1);
            auto slash = spec.target.find_last_of('/');
            spec.name = slash == std::string::npos ? spec.target : spec.target.substr(slash + 1);
            if (auto dot = spec.name.rfind(".mat"); spec.kind == SystemKind::sft && dot != std::string::npos) {
                spec.name.erase(dot);
            }
            first = false;
        } else {
            auto eq = token.find('=');
            if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size()) {
                throw ParseError(1, pos + 1, "expected key=value");
            }
            detail::apply_key(spec, token.substr(0, eq), token.substr(eq + 1), 1, pos + 1, pos + eq + 2);
        }
        pos = end;
    }
    if (first) {
        throw ParseError(1, 1, "empty system spec");
    }
    if (spec.kind == SystemKind::map) {
        throw ParseError(1, 1, "map systems need a config file");
    }
    return spec;
}

} // namespace topodyn::cli
