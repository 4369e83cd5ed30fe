#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "topodyn/classify/report.hpp"
#include "topodyn/classify/rules.hpp"
#include "topodyn/core/errors.hpp"
#include "topodyn/core/format.hpp"

namespace topodyn::cli {

inline constexpr std::string_view tool_version = "0.1.0";

struct CertificateSummary {
    std::string point;
    double radius = 0.0;
    std::uint64_t returns = 0;
    std::uint64_t max_gap = 0;
    std::uint64_t horizon = 0;

    friend bool operator==(const CertificateSummary&, const CertificateSummary&) = default;
};

struct SensitivitySummary {
    Status status = Status::unknown;
    std::optional<double> constant;
    double coverage = 0.0;
    double runner_up_coverage = 0.0;
    std::uint64_t witnesses = 0;

    friend bool operator==(const SensitivitySummary&, const SensitivitySummary&) = default;
};

struct Report {
    std::string version{tool_version};
    std::uint64_t seed = 0;
    ClassificationReport classification;
    std::vector<CertificateSummary> certificates;
    SensitivitySummary sensitivity;
    std::vector<Violation> violations;

    [[nodiscard]] const std::string& system() const noexcept { return classification.system; }

    friend bool operator==(const Report&, const Report&) = default;
};

namespace detail {

inline std::string escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string unescape(std::string_view s, std::size_t line)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) {
            throw ParseError(line, i, "dangling escape");
        }
        switch (s[i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default: throw ParseError(line, i, "unknown escape");
        }
    }
    return out;
}

inline std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

inline std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

} // namespace detail

/// Machine pane: one tab-separated record per line, closed by `end`.
inline void emit_machine(std::ostream& out, const Report& r)
{
    using detail::escape;
    const auto& c = r.classification;
    out << "report\t" << escape(c.system) << '\n';
    out << "version\t" << escape(r.version) << '\n';
    out << "seed\t" << r.seed << '\n';
    out << "flags\t" << c.flags.f_semigroup << '\t' << c.flags.c_semigroup << '\t' << c.flags.group << '\t'
        << c.flags.isometric << '\t' << c.flags.polish << '\n';
    for (Property p : all_properties) {
        const auto& v = c[p];
        out << to_string(p) << '\t' << to_string(v.status) << '\t' << escape(v.witness) << '\t'
            << v.horizon.describe() << '\t' << detail::opt_double(v.constant) << '\n';
    }
    for (const auto& pt : c.points) {
        out << "point\t" << escape(pt.point) << '\t' << to_string(pt.eq) << '\t' << to_string(pt.trans) << '\t'
            << escape(pt.derived_by) << '\n';
    }
    for (const auto& cert : r.certificates) {
        out << "certificate\t" << escape(cert.point) << '\t' << format_double(cert.radius) << '\t' << cert.returns
            << '\t' << cert.max_gap << '\t' << cert.horizon << '\n';
    }
    const auto& s = r.sensitivity;
    out << "sensitivity\t" << to_string(s.status) << '\t' << detail::opt_double(s.constant) << '\t'
        << format_double(s.coverage) << '\t' << format_double(s.runner_up_coverage) << '\t' << s.witnesses << '\n';
    for (const auto& v : r.violations) {
        out << "violation\t" << escape(v.rule) << '\t' << escape(v.anchor) << '\t' << escape(v.detail) << '\n';
    }
    out << "end\n";
}

inline std::string emit_machine(const Report& r)
{
    std::ostringstream out;
    emit_machine(out, r);
    return out.str();
}

namespace detail {

struct FieldReader {
    std::vector<std::string_view> fields;
    std::size_t line;

    void expect(std::size_t n) const
    {
        if (fields.size() != n) {
            throw ParseError(line, 1,
                             "expected " + std::to_string(n) + " fields, found " + std::to_string(fields.size()));
        }
    }
    [[nodiscard]] std::string text(std::size_t i) const { return unescape(fields[i], line); }
    [[nodiscard]] std::uint64_t count(std::size_t i) const
    {
        auto v = parse_u64(fields[i]);
        if (!v) {
            throw ParseError(line, 1, "bad integer '" + std::string(fields[i]) + "'");
        }
        return *v;
    }
    [[nodiscard]] double real(std::size_t i) const
    {
        auto v = parse_double(fields[i]);
        if (!v) {
            throw ParseError(line, 1, "bad number '" + std::string(fields[i]) + "'");
        }
        return *v;
    }
    [[nodiscard]] std::optional<double> opt_real(std::size_t i) const
    {
        if (fields[i].empty()) {
            return std::nullopt;
        }
        return real(i);
    }
    [[nodiscard]] Status status(std::size_t i) const
    {
        auto s = parse_status(fields[i]);
        if (!s) {
            throw ParseError(line, 1, "bad status '" + std::string(fields[i]) + "'");
        }
        return *s;
    }
    [[nodiscard]] bool flag(std::size_t i) const
    {
        if (fields[i] != "0" && fields[i] != "1") {
            throw ParseError(line, 1, "bad flag '" + std::string(fields[i]) + "'");
        }
        return fields[i] == "1";
    }
};

inline HorizonTuple parse_horizon(std::string_view text, std::size_t line)
{
    HorizonTuple h;
    static constexpr std::string_view keys[] = {"eps=", "delta=", "horizon=", "samples=", "seed="};
    std::size_t start = 0;
    for (std::size_t k = 0; k < 5; ++k) {
        auto end = text.find(';', start);
        if ((k < 4) == (end == std::string_view::npos)) {
            throw ParseError(line, 1, "malformed horizon tuple");
        }
        auto part = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (part.substr(0, keys[k].size()) != keys[k]) {
            throw ParseError(line, 1, "malformed horizon tuple");
        }
        auto value = part.substr(keys[k].size());
        bool ok = true;
        if (k < 2) {
            auto v = parse_double(value);
            ok = v.has_value();
            (k == 0 ? h.eps : h.delta) = v.value_or(0.0);
        } else {
            auto v = parse_u64(value);
            ok = v.has_value();
            (k == 2 ? h.horizon : k == 3 ? h.samples : h.seed) = v.value_or(0);
        }
        if (!ok) {
            throw ParseError(line, 1, "malformed horizon tuple");
        }
        start = end + 1;
    }
    return h;
}

} // namespace detail

/// Reads every report in a machine pane stream; lines outside reports are ignored.
inline std::vector<Report> parse_machine(std::istream& in)
{
    std::vector<Report> out;
    std::optional<Report> cur;
    std::vector<bool> seen_props;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        detail::FieldReader f{detail::split_tabs(raw), line};
        std::string_view tag = f.fields[0];
        if (!cur) {
            if (tag == "report") {
                f.expect(2);
                cur.emplace();
                cur->classification.system = f.text(1);
                seen_props.assign(property_count, false);
            }
            continue;
        }
        auto& r = *cur;
        if (tag == "version") {
            f.expect(2);
            r.version = f.text(1);
        } else if (tag == "seed") {
            f.expect(2);
            r.seed = f.count(1);
        } else if (tag == "flags") {
            f.expect(6);
            auto& fl = r.classification.flags;
            fl = {f.flag(1), f.flag(2), f.flag(3), f.flag(4), f.flag(5)};
        } else if (auto p = parse_property(tag)) {
            f.expect(5);
            auto& v = r.classification[*p];
            v.status = f.status(1);
            v.witness = f.text(2);
            v.horizon = detail::parse_horizon(f.fields[3], line);
            v.constant = f.opt_real(4);
            seen_props[static_cast<std::size_t>(*p)] = true;
        } else if (tag == "point") {
            f.expect(5);
            r.classification.points.push_back({f.text(1), f.status(2), f.status(3), f.text(4)});
        } else if (tag == "certificate") {
            f.expect(6);
            r.certificates.push_back({f.text(1), f.real(2), f.count(3), f.count(4), f.count(5)});
        } else if (tag == "sensitivity") {
            f.expect(6);
            r.sensitivity = {f.status(1), f.opt_real(2), f.real(3), f.real(4), f.count(5)};
        } else if (tag == "violation") {
            f.expect(4);
            r.violations.push_back({f.text(1), f.text(2), f.text(3)});
        } else if (tag == "end") {
            for (std::size_t i = 0; i < property_count; ++i) {
                if (!seen_props[i]) {
                    throw ParseError(line, 1, "report is missing property " +
                                                  std::string(to_string(all_properties[i])));
                }
            }
            out.push_back(std::move(r));
            cur.reset();
        } else {
            throw ParseError(line, 1, "unknown record '" + std::string(tag) + "'");
        }
    }
    if (cur) {
        throw ParseError(line, 1, "report '" + cur->system() + "' is not terminated");
    }
    return out;
}

inline std::vector<Report> parse_machine(const std::string& text)
{
    std::istringstream in(text);
    return parse_machine(in);
}

inline void emit_human(std::ostream& out, const Report& r)
{
    const auto& c = r.classification;
    out << "== " << c.system << " ==\n";
    out << "flags:";
    if (c.flags.f_semigroup) out << " F-semigroup";
    if (c.flags.c_semigroup) out << " C-semigroup";
    if (c.flags.group) out << " group";
    if (c.flags.isometric) out << " isometric";
    if (c.flags.polish) out << " Polish";
    out << '\n';
    for (Property p : all_properties) {
        const auto& v = c[p];
        out << "  " << std::left << std::setw(22) << to_string(p) << std::setw(10) << to_string(v.status);
        if (!v.witness.empty()) {
            out << ' ' << v.witness;
        }
        out << '\n';
    }
    if (!c.points.empty()) {
        std::size_t eq = 0;
        std::size_t trans = 0;
        for (const auto& pt : c.points) {
            eq += holds(pt.eq) ? 1 : 0;
            trans += holds(pt.trans) ? 1 : 0;
        }
        out << "  probed points: " << c.points.size() << " (" << eq << " equicontinuity, " << trans
            << " transitive)\n";
    }
    if (!r.certificates.empty()) {
        std::uint64_t worst = 0;
        for (const auto& cert : r.certificates) {
            worst = std::max(worst, cert.max_gap);
        }
        out << "  return-time certificates: " << r.certificates.size() << ", largest gap " << worst << '\n';
    }
    if (r.sensitivity.constant) {
        out << "  sensitivity constant " << format_double(*r.sensitivity.constant) << ", coverage "
            << format_double(r.sensitivity.coverage) << '\n';
    }
    if (r.violations.empty()) {
        out << "  violations: none\n";
    } else {
        for (const auto& v : r.violations) {
            out << "  VIOLATION " << v.rule << " [" << v.anchor << "]: " << v.detail << '\n';
        }
    }
}

} // namespace topodyn::cli
