#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "topodyn/classify/report.hpp"
#include "topodyn/core/errors.hpp"

namespace topodyn {

using BigInt = boost::multiprecision::cpp_int;

/// Subshift of finite type: one-sided sequences over {0..k-1} whose
/// consecutive symbols (a, b) satisfy transition(a, b) = 1. `labels` maps
/// states back to the alphabet of the matrix the subshift was derived from.
class Sft {
public:
    Sft() = default;

    explicit Sft(std::vector<std::vector<std::uint8_t>> transition) : matrix_(std::move(transition))
    {
        for (const auto& row : matrix_) {
            if (row.size() != matrix_.size()) {
                throw DomainError("sft: transition matrix must be square");
            }
            for (auto v : row) {
                if (v > 1) {
                    throw DomainError("sft: transition entries must be 0 or 1");
                }
            }
        }
        labels_.resize(matrix_.size());
        std::iota(labels_.begin(), labels_.end(), std::size_t{0});
    }

    Sft(std::vector<std::vector<std::uint8_t>> transition, std::vector<std::size_t> labels)
        : Sft(std::move(transition))
    {
        if (labels.size() != matrix_.size()) {
            throw DomainError("sft: one label per state required");
        }
        labels_ = std::move(labels);
    }

    [[nodiscard]] std::size_t alphabet_size() const noexcept { return matrix_.size(); }
    [[nodiscard]] bool empty() const noexcept { return matrix_.empty(); }
    [[nodiscard]] bool edge(std::size_t a, std::size_t b) const { return matrix_[a][b] != 0; }
    [[nodiscard]] const std::vector<std::vector<std::uint8_t>>& matrix() const noexcept { return matrix_; }
    [[nodiscard]] const std::vector<std::size_t>& labels() const noexcept { return labels_; }

    [[nodiscard]] std::size_t out_degree(std::size_t a) const
    {
        return static_cast<std::size_t>(std::count(matrix_[a].begin(), matrix_[a].end(), 1));
    }

    [[nodiscard]] std::size_t in_degree(std::size_t b) const
    {
        std::size_t d = 0;
        for (const auto& row : matrix_) {
            d += row[b];
        }
        return d;
    }

    [[nodiscard]] bool is_essential() const
    {
        for (std::size_t s = 0; s < alphabet_size(); ++s) {
            if (out_degree(s) == 0 || in_degree(s) == 0) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] std::vector<std::size_t> successors(std::size_t a) const
    {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < alphabet_size(); ++b) {
            if (matrix_[a][b]) {
                out.push_back(b);
            }
        }
        return out;
    }

    friend bool operator==(const Sft&, const Sft&) = default;

private:
    std::vector<std::vector<std::uint8_t>> matrix_;
    std::vector<std::size_t> labels_;
};

/// Largest sub-matrix in which every state has an incoming and an outgoing edge.
inline Sft essentialize(const Sft& sft)
{
    const std::size_t k = sft.alphabet_size();
    std::vector<bool> alive(k, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < k; ++s) {
            if (!alive[s]) {
                continue;
            }
            bool has_out = false;
            bool has_in = false;
            for (std::size_t t = 0; t < k; ++t) {
                has_out = has_out || (alive[t] && sft.edge(s, t));
                has_in = has_in || (alive[t] && sft.edge(t, s));
            }
            if (!has_out || !has_in) {
                alive[s] = false;
                changed = true;
            }
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t s = 0; s < k; ++s) {
        if (alive[s]) {
            keep.push_back(s);
        }
    }
    std::vector<std::vector<std::uint8_t>> m(keep.size(), std::vector<std::uint8_t>(keep.size()));
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        labels.push_back(sft.labels()[keep[i]]);
        for (std::size_t j = 0; j < keep.size(); ++j) {
            m[i][j] = sft.matrix()[keep[i]][keep[j]];
        }
    }
    return Sft(std::move(m), std::move(labels));
}

/// Strongly connected component id per state (Tarjan, iterative). Ids are
/// assigned in reverse topological order of the condensation.
inline std::vector<std::size_t> strongly_connected_components(const Sft& sft)
{
    const std::size_t k = sft.alphabet_size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(k, unvisited), low(k, 0), comp(k, unvisited);
    std::vector<bool> on_stack(k, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;
    std::size_t ncomp = 0;

    for (std::size_t root = 0; root < k; ++root) {
        if (index[root] != unvisited) {
            continue;
        }
        // (state, next successor to examine)
        std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            if (next < k) {
                std::size_t w = next++;
                if (!sft.edge(v, w)) {
                    continue;
                }
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return comp;
}

namespace detail {

inline void require_essential_nonempty(const Sft& sft, const char* op)
{
    if (sft.empty()) {
        throw DomainError(std::string(op) + ": empty subshift");
    }
    if (!sft.is_essential()) {
        throw DomainError(std::string(op) + ": transition matrix must be essentialized first");
    }
}

} // namespace detail

struct SftTransitivity {
    Verdict verdict;
    /// pred[i][j]: predecessor of j on a shortest nonempty path from i (or npos).
    std::vector<std::vector<std::size_t>> pred;
    std::optional<std::pair<std::size_t, std::size_t>> unreachable;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// State sequence i, ..., j of a connecting path with at least one edge; empty if none.
    [[nodiscard]] std::vector<std::size_t> path(std::size_t from, std::size_t to) const
    {
        if (pred.empty() || pred[from][to] == npos) {
            return {};
        }
        std::vector<std::size_t> rev{to};
        std::size_t cur = to;
        do {
            cur = pred[from][cur];
            rev.push_back(cur);
        } while (cur != from && rev.size() <= pred.size() + 1);
        std::reverse(rev.begin(), rev.end());
        return rev;
    }
};

/// TT holds exactly when the essential graph is irreducible (one SCC).
inline SftTransitivity sft_is_transitive(const Sft& sft)
{
    detail::require_essential_nonempty(sft, "sft_is_transitive");
    const std::size_t k = sft.alphabet_size();
    SftTransitivity out;
    out.pred.assign(k, std::vector<std::size_t>(k, SftTransitivity::npos));
    for (std::size_t src = 0; src < k; ++src) {
        std::queue<std::size_t> q;
        std::vector<bool> seen(k, false);
        for (auto t : sft.successors(src)) {
            out.pred[src][t] = src;
            seen[t] = true;
            q.push(t);
        }
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto t : sft.successors(v)) {
                if (!seen[t]) {
                    seen[t] = true;
                    out.pred[src][t] = v;
                    q.push(t);
                }
            }
        }
    }
    auto comp = strongly_connected_components(sft);
    bool irreducible = std::all_of(comp.begin(), comp.end(), [&](std::size_t c) { return c == comp[0]; });
    if (irreducible) {
        out.verdict.status = Status::proven;
        out.verdict.witness = "irreducible: connecting path for every ordered state pair";
        return out;
    }
    for (std::size_t i = 0; i < k && !out.unreachable; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (out.pred[i][j] == SftTransitivity::npos) {
                out.unreachable = std::make_pair(i, j);
                break;
            }
        }
    }
    out.verdict.status = Status::refuted;
    out.verdict.witness = "no path from state " + std::to_string(sft.labels()[out.unreachable->first]) +
                          " to state " + std::to_string(sft.labels()[out.unreachable->second]);
    return out;
}

/// gcd of cycle lengths of an irreducible graph; 1 means mixing. 0 if reducible.
inline std::size_t sft_period(const Sft& sft)
{
    detail::require_essential_nonempty(sft, "sft_period");
    auto comp = strongly_connected_components(sft);
    if (!std::all_of(comp.begin(), comp.end(), [&](std::size_t c) { return c == comp[0]; })) {
        return 0;
    }
    const std::size_t k = sft.alphabet_size();
    std::vector<std::ptrdiff_t> level(k, -1);
    std::queue<std::size_t> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
        auto v = q.front();
        q.pop();
        for (auto t : sft.successors(v)) {
            if (level[t] < 0) {
                level[t] = level[v] + 1;
                q.push(t);
            }
        }
    }
    std::size_t g = 0;
    for (std::size_t u = 0; u < k; ++u) {
        for (auto v : sft.successors(u)) {
            auto diff = level[u] + 1 - level[v];
            g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
        }
    }
    return g;
}

/// Number of points with shift^p x = x, computed as trace(A^p).
inline BigInt count_periodic(const Sft& sft, unsigned p)
{
    if (p < 1 || p > 64) {
        throw DomainError("count_periodic: period must be in [1, 64]");
    }
    if (!sft.empty() && !sft.is_essential()) {
        throw DomainError("count_periodic: transition matrix must be essentialized first");
    }
    const std::size_t k = sft.alphabet_size();
    using Matrix = std::vector<std::vector<BigInt>>;
    auto multiply = [k](const Matrix& a, const Matrix& b) {
        Matrix c(k, std::vector<BigInt>(k, 0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t l = 0; l < k; ++l) {
                if (a[i][l] == 0) {
                    continue;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    c[i][j] += a[i][l] * b[l][j];
                }
            }
        }
        return c;
    };
    Matrix base(k, std::vector<BigInt>(k, 0));
    Matrix acc(k, std::vector<BigInt>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
        acc[i][i] = 1;
        for (std::size_t j = 0; j < k; ++j) {
            base[i][j] = sft.matrix()[i][j];
        }
    }
    for (unsigned e = p; e > 0; e >>= 1) {
        if (e & 1U) {
            acc = multiply(acc, base);
        }
        if (e > 1) {
            base = multiply(base, base);
        }
    }
    BigInt trace = 0;
    for (std::size_t i = 0; i < k; ++i) {
        trace += acc[i][i];
    }
    return trace;
}

/// Structural facts every symbolic verdict is read off from.
struct SftStructure {
    bool irreducible = false;
    bool infinite = false;          // some state has out-degree >= 2
    bool single_cycle = false;      // irreducible with all out-degrees 1
    bool edges_inside_scc = false;  // every edge lies on a cycle
    std::vector<bool> determined;   // state whose forward continuation is unique
    bool all_reach_determined = false;
    std::size_t period = 0;
};

inline SftStructure analyze_structure(const Sft& sft)
{
    detail::require_essential_nonempty(sft, "sft structure");
    const std::size_t k = sft.alphabet_size();
    SftStructure st;
    auto comp = strongly_connected_components(sft);
    st.irreducible = std::all_of(comp.begin(), comp.end(), [&](std::size_t c) { return c == comp[0]; });
    st.edges_inside_scc = true;
    for (std::size_t u = 0; u < k; ++u) {
        auto deg = sft.out_degree(u);
        st.infinite = st.infinite || deg >= 2;
        for (auto v : sft.successors(u)) {
            st.edges_inside_scc = st.edges_inside_scc && comp[u] == comp[v];
        }
    }
    st.single_cycle = st.irreducible && !st.infinite;

    // Greatest fixed point: out-degree 1 and the unique successor is determined too.
    st.determined.assign(k, false);
    for (std::size_t s = 0; s < k; ++s) {
        st.determined[s] = sft.out_degree(s) == 1;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < k; ++s) {
            if (st.determined[s] && !st.determined[sft.successors(s).front()]) {
                st.determined[s] = false;
                changed = true;
            }
        }
    }
    // Backward reachability from the determined set.
    std::vector<bool> reaches = st.determined;
    changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < k; ++s) {
            if (reaches[s]) {
                continue;
            }
            for (auto t : sft.successors(s)) {
                if (reaches[t]) {
                    reaches[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    st.all_reach_determined = std::all_of(reaches.begin(), reaches.end(), [](bool b) { return b; });
    st.period = st.irreducible ? sft_period(sft) : 0;
    return st;
}

struct SftSensitivity {
    Verdict verdict;
    double constant = 0.0;
};

/// Sensitive with c = 1/2 exactly when no state has a unique forward
/// continuation: every cylinder then holds two points that split at a later
/// branching state, and shifting to the split gives distance 1. A state with
/// a unique continuation yields an isolated point, so no c > 0 works.
inline SftSensitivity sft_sensitivity(const Sft& sft)
{
    detail::require_essential_nonempty(sft, "sft_sensitivity");
    auto st = analyze_structure(sft);
    SftSensitivity out;
    bool any_determined = std::any_of(st.determined.begin(), st.determined.end(), [](bool b) { return b; });
    if (!any_determined) {
        out.constant = 0.5;
        out.verdict.status = Status::proven;
        out.verdict.constant = 0.5;
        out.verdict.witness = "c=0.5: every state reaches a branching state; split then shift gives distance 1";
        return out;
    }
    std::size_t s = 0;
    while (!st.determined[s]) {
        ++s;
    }
    out.verdict.status = Status::refuted;
    out.verdict.witness = st.infinite ? "isolated point: state " + std::to_string(sft.labels()[s]) +
                                            " has a unique forward continuation"
                                      : "finite space: every point is isolated";
    return out;
}

/// Exact verdicts for the one-sided shift on an essential SFT.
inline ClassificationReport sft_classify(const Sft& sft, std::string name = "sft")
{
    detail::require_essential_nonempty(sft, "sft_classify");
    ClassificationReport r;
    r.system = std::move(name);
    r.flags.f_semigroup = true;
    r.flags.c_semigroup = true;
    r.flags.group = false;
    r.flags.isometric = false;
    r.flags.polish = true;

    auto st = analyze_structure(sft);
    auto tt = sft_is_transitive(sft);
    auto sens = sft_sensitivity(sft);
    const auto P = Status::proven;
    const auto R = Status::refuted;

    std::string tt_witness = tt.verdict.witness;
    if (st.irreducible) {
        tt_witness += "; period " + std::to_string(st.period) + (st.period == 1 ? " (mixing)" : "");
    }
    r.set(Property::tt, tt.verdict.status, tt_witness);
    if (st.irreducible) {
        r.set(Property::pt, P, "concatenation of all admissible words has a dense orbit");
    } else {
        r.set(Property::pt, R, "reducible: an orbit cannot return to a source component it has left");
        r.set(Property::dpt, R, "no transitive point exists");
    }

    r.set(Property::periodic_dense, st.edges_inside_scc ? P : R,
          st.edges_inside_scc ? "every admissible word extends to a periodic point"
                              : "an edge between components lies on no cycle");
    r.set(Property::bronstein_dense, st.edges_inside_scc ? P : R,
          st.edges_inside_scc ? "periodic points are almost periodic and dense"
                              : "points through a cross-component edge are not almost periodic");
    r.set(Property::p_system, meet(r.status(Property::tt), r.status(Property::periodic_dense)), "TT and PeriodicDense");
    r.set(Property::m_system, meet(r.status(Property::tt), r.status(Property::bronstein_dense)),
          "TT and BronsteinDense");

    r.set(Property::minimal, st.single_cycle ? P : R,
          st.single_cycle ? "single cycle: every orbit is the whole space"
                          : (st.irreducible ? "a periodic orbit is a proper closed invariant subset"
                                            : "reducible graph"));
    r.set(Property::infinite, st.infinite ? P : R,
          st.infinite ? "a state has two successors" : "all out-degrees are 1");

    bool any_determined = std::any_of(st.determined.begin(), st.determined.end(), [](bool b) { return b; });
    r.set(Property::perfect, any_determined ? R : P,
          any_determined ? "a state with unique continuation gives an isolated point" : "no isolated points");
    r.set(Property::sensitive, sens.verdict.status, sens.verdict.witness);
    r[Property::sensitive].constant = sens.verdict.constant;

    r.set(Property::eq_nonempty, any_determined ? P : R,
          any_determined ? "isolated points are equicontinuity points" : "sensitive at every point");
    r.set(Property::equicontinuous, st.infinite ? R : P,
          st.infinite ? "points passing a branching state are not equicontinuity points" : "finite discrete space");
    r.set(Property::almost_equicontinuous, st.all_reach_determined ? P : R,
          st.all_reach_determined ? "every cylinder contains an eventually determined point"
                                  : "some cylinder avoids equicontinuity points");
    return r;
}

/// Reads `k` followed by k rows of k space-separated 0/1 digits; `#` starts a comment.
inline Sft parse_sft(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                return true;
            }
        }
        return false;
    };
    if (!next_line()) {
        throw ParseError(lineno + 1, 1, "expected alphabet size");
    }
    std::size_t first = line.find_first_not_of(" \t");
    std::size_t last = line.find_last_not_of(" \t\r");
    std::string head = line.substr(first, last - first + 1);
    std::uint64_t k = 0;
    if (!parse_u64(head, k) || k == 0 || k > 4096) {
        throw ParseError(lineno, first + 1, "alphabet size must be an integer in [1, 4096]");
    }
    std::vector<std::vector<std::uint8_t>> m;
    for (std::size_t row = 0; row < k; ++row) {
        if (!next_line()) {
            throw ParseError(lineno + 1, 1, "expected " + std::to_string(k) + " matrix rows, got " + std::to_string(row));
        }
        std::vector<std::uint8_t> r;
        std::size_t col = 0;
        while (col < line.size()) {
            char c = line[col];
            if (c == ' ' || c == '\t' || c == '\r') {
                ++col;
                continue;
            }
            if ((c != '0' && c != '1') || (col + 1 < line.size() && line[col + 1] != ' ' && line[col + 1] != '\t' &&
                                           line[col + 1] != '\r')) {
                throw ParseError(lineno, col + 1, "matrix entries must be 0 or 1");
            }
            if (r.size() == k) {
                throw ParseError(lineno, col + 1, "too many entries in row");
            }
            r.push_back(static_cast<std::uint8_t>(c - '0'));
            ++col;
        }
        if (r.size() != k) {
            throw ParseError(lineno, line.size() + 1, "row has " + std::to_string(r.size()) + " entries, expected " +
                                                          std::to_string(k));
        }
        m.push_back(std::move(r));
    }
    if (next_line()) {
        throw ParseError(lineno, 1, "unexpected content after matrix");
    }
    return Sft(std::move(m));
}

inline Sft load_sft(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, 0, "cannot open sft file '" + path + "'");
    }
    return parse_sft(in);
}

namespace sfts {

inline Sft full_shift(std::size_t k)
{
    return Sft(std::vector<std::vector<std::uint8_t>>(k, std::vector<std::uint8_t>(k, 1)));
}
inline Sft golden_mean() { return Sft({{1, 1}, {1, 0}}); }
inline Sft two_cycle() { return Sft({{0, 1}, {1, 0}}); }

} // namespace sfts

} // namespace topodyn
