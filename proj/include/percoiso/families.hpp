#pragma once
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "percoiso/errors.hpp"
#include "percoiso/oracle.hpp"
#include "percoiso/window.hpp"

namespace perco {

namespace detail {

// ceil(e^k) for k = 0..43, computed once with 60-digit arithmetic. e^k is
// irrational for k >= 1, so "y <= ln(1+x)" for integers is exactly
// "EXP_CEIL[y] <= 1+x". No floating point ever decides graph membership.
inline constexpr std::array<std::int64_t, 44> EXP_CEIL = {
    1LL,
    3LL,
    8LL,
    21LL,
    55LL,
    149LL,
    404LL,
    1097LL,
    2981LL,
    8104LL,
    22027LL,
    59875LL,
    162755LL,
    442414LL,
    1202605LL,
    3269018LL,
    8886111LL,
    24154953LL,
    65659970LL,
    178482301LL,
    485165196LL,
    1318815735LL,
    3584912847LL,
    9744803447LL,
    26489122130LL,
    72004899338LL,
    195729609429LL,
    532048240602LL,
    1446257064292LL,
    3931334297145LL,
    10686474581525LL,
    29048849665248LL,
    78962960182681LL,
    214643579785917LL,
    583461742527455LL,
    1586013452313431LL,
    4311231547115196LL,
    11719142372802612LL,
    31855931757113757LL,
    86593400423993747LL,
    235385266837019986LL,
    639843493530054950LL,
    1739274941520501048LL,
    4727839468229346562LL,
};

// floor(ln(1+x)) for x >= 0, exact.
inline int log_height(std::int64_t x) {
    int k = 0;
    while (k + 1 < static_cast<int>(EXP_CEIL.size()) && EXP_CEIL[k + 1] <= x + 1) ++k;
    return k;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::int64_t parse_int(const std::string& s, std::size_t err_pos) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("expected integer, got '" + s + "'", err_pos);
    return v;
}

inline std::vector<std::int64_t> parse_coords(const std::string& s, std::size_t arity) {
    auto parts = split(s, ',');
    if (parts.size() != arity)
        throw ParseError("expected " + std::to_string(arity) + " comma-separated coordinates", 0);
    std::vector<std::int64_t> out;
    for (auto& p : parts) out.push_back(parse_int(p, 0));
    return out;
}

inline std::string format_coords(const std::vector<std::int64_t>& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
    }
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Z^d (the unit cubic lattice). "line" is d = 1 under its own family name.
// ---------------------------------------------------------------------------
class ZdOracle final : public GraphOracle {
public:
    ZdOracle(int d, std::string name) : d_(d), name_(std::move(name)) {}

    const std::string& family() const override { return name_; }
    int max_degree() const override { return 2 * d_; }
    VertexId root() const override { return VertexId(std::vector<std::int64_t>(d_, 0)); }
    bool contains(const VertexId& v) const override {
        return static_cast<int>(v.tok.size()) == d_;
    }
    std::vector<VertexId> neighbors(const VertexId& v) const override {
        require(v);
        std::vector<VertexId> out;
        out.reserve(2 * d_);
        for (int i = 0; i < d_; ++i)
            for (int s : {-1, +1}) {
                VertexId u = v;
                u.tok[i] += s;
                out.push_back(std::move(u));
            }
        return out;
    }
    bool vertex_transitive() const override { return true; }
    bool has_bigeodesic() const override { return true; }
    std::pair<Ray, Ray> bigeodesic_rays() const override {
        return {axis_ray(root(), 0, +1), axis_ray(root(), 0, -1)};
    }
    std::optional<std::uint64_t> interior_cap(std::uint64_t n) const override {
        if (d_ == 1) return std::nullopt;  // intervals of any length have boundary 2
        // Loomis-Whitney: |boundary(W)| >= 2d |W|^((d-1)/d), so
        // |W| <= (n / 2d)^(d/(d-1)). Rounded up, which keeps it a valid bound.
        if (n < static_cast<std::uint64_t>(2 * d_)) return 0;
        if (d_ == 2) return (n * n + 15) / 16;
        long double x = powl(static_cast<long double>(n) / (2.0L * d_),
                             static_cast<long double>(d_) / (d_ - 1));
        return static_cast<std::uint64_t>(ceill(x));
    }
    std::optional<std::uint64_t> anchored_reach(const VertexId& a, std::uint64_t n) const override {
        if (d_ == 1) return n < 2 ? std::optional<std::uint64_t>(0) : std::nullopt;
        return GraphOracle::anchored_reach(a, n);
    }
    std::vector<Ray> escape_rays(const VertexId& v) const override {
        std::vector<Ray> out;
        for (int i = 0; i < d_; ++i)
            for (int s : {+1, -1}) out.push_back(axis_ray(v, i, s));
        return out;
    }
    std::string format_vertex(const VertexId& v) const override {
        return detail::format_coords(v.tok);
    }
    VertexId parse_vertex(const std::string& s) const override {
        return VertexId(detail::parse_coords(s, d_));
    }

private:
    void require(const VertexId& v) const {
        if (!contains(v)) throw OracleError(name_ + ": bad vertex arity");
    }
    Ray axis_ray(const VertexId& from, int axis, int sign) const {
        Ray r;
        r.origin = from;
        r.label = (sign > 0 ? "+" : "-") + std::string("e") + std::to_string(axis + 1);
        r.at = [from, axis, sign](std::uint64_t k) {
            VertexId u = from;
            u.tok[axis] += sign * static_cast<std::int64_t>(k);
            return u;
        };
        return r;
    }

    int d_;
    std::string name_;
};

// ---------------------------------------------------------------------------
// Z x {0..h-1}: the infinite strip of height h, a bi-geodesic control family
// that stays quasi-one-dimensional.
// ---------------------------------------------------------------------------
class StripOracle final : public GraphOracle {
public:
    explicit StripOracle(int h) : h_(h), name_("strip:" + std::to_string(h)) {}

    const std::string& family() const override { return name_; }
    int max_degree() const override { return h_ == 1 ? 2 : (h_ == 2 ? 3 : 4); }
    VertexId root() const override { return VertexId{0, 0}; }
    bool contains(const VertexId& v) const override {
        return v.tok.size() == 2 && v.tok[1] >= 0 && v.tok[1] < h_;
    }
    std::vector<VertexId> neighbors(const VertexId& v) const override {
        std::vector<VertexId> out;
        const std::int64_t x = v.tok[0], y = v.tok[1];
        for (auto [dx, dy] : std::array<std::pair<int, int>, 4>{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}}) {
            VertexId u{x + dx, y + dy};
            if (contains(u)) out.push_back(std::move(u));
        }
        return out;
    }
    bool vertex_transitive() const override { return h_ <= 2; }
    bool has_bigeodesic() const override { return true; }
    std::pair<Ray, Ray> bigeodesic_rays() const override {
        return {x_ray(root(), +1), x_ray(root(), -1)};
    }
    std::optional<std::uint64_t> interior_cap(std::uint64_t) const override {
        return std::nullopt;  // column blocks of any length have boundary 2h
    }
    std::optional<std::uint64_t> anchored_reach(const VertexId&, std::uint64_t n) const override {
        // smallest boundary: 2 on the line, else 3 (a border-row singleton)
        std::uint64_t min_b = h_ == 1 ? 2 : 3;
        if (n < min_b) return 0;
        return std::nullopt;
    }
    std::vector<Ray> escape_rays(const VertexId& v) const override {
        return {x_ray(v, +1), x_ray(v, -1)};
    }
    std::string format_vertex(const VertexId& v) const override {
        return detail::format_coords(v.tok);
    }
    VertexId parse_vertex(const std::string& s) const override {
        auto v = VertexId(detail::parse_coords(s, 2));
        if (!contains(v)) throw ParseError("row outside strip of height " + std::to_string(h_), 0);
        return v;
    }

private:
    Ray x_ray(const VertexId& from, int sign) const {
        Ray r;
        r.origin = from;
        r.label = sign > 0 ? "+x" : "-x";
        r.at = [from, sign](std::uint64_t k) {
            VertexId u = from;
            u.tok[0] += sign * static_cast<std::int64_t>(k);
            return u;
        };
        return r;
    }

    std::int64_t h_;
    std::string name_;
};

// ---------------------------------------------------------------------------
// k-regular tree, k >= 3. Addresses are child-digit paths from the root:
// the root is [], its k subtrees start with digit 0..k-1, and every deeper
// digit is 0..k-2 (one neighbor is the parent).
// ---------------------------------------------------------------------------
class RegularTreeOracle final : public GraphOracle {
public:
    explicit RegularTreeOracle(int k) : k_(k), name_("tree:" + std::to_string(k)) {}

    const std::string& family() const override { return name_; }
    int max_degree() const override { return k_; }
    VertexId root() const override { return VertexId{}; }
    bool contains(const VertexId& v) const override {
        for (std::size_t i = 0; i < v.tok.size(); ++i) {
            std::int64_t hi = i == 0 ? k_ : k_ - 1;
            if (v.tok[i] < 0 || v.tok[i] >= hi) return false;
        }
        return true;
    }
    std::vector<VertexId> neighbors(const VertexId& v) const override {
        std::vector<VertexId> out;
        out.reserve(k_);
        if (v.tok.empty()) {
            for (int c = 0; c < k_; ++c) out.push_back(VertexId{c});
            return out;
        }
        VertexId parent = v;
        parent.tok.pop_back();
        out.push_back(std::move(parent));
        for (int c = 0; c < k_ - 1; ++c) {
            VertexId child = v;
            child.tok.push_back(c);
            out.push_back(std::move(child));
        }
        return out;
    }
    bool vertex_transitive() const override { return true; }
    bool has_bigeodesic() const override { return true; }
    std::pair<Ray, Ray> bigeodesic_rays() const override {
        return {branch_ray(0), branch_ray(1)};
    }
    std::optional<std::uint64_t> interior_cap(std::uint64_t n) const override {
        // exact identity: |boundary(W)| = (k-2)|W| + 2 for connected W
        if (n < static_cast<std::uint64_t>(k_)) return 0;
        return (n - 2) / (k_ - 2);
    }
    bool complement_always_infinite() const override { return true; }
    std::vector<Ray> escape_rays(const VertexId& v) const override {
        Ray r;
        r.origin = v;
        r.label = "descend-0";
        r.at = [v](std::uint64_t k) {
            VertexId u = v;
            for (std::uint64_t i = 0; i < k; ++i) u.tok.push_back(0);
            return u;
        };
        return {r};
    }
    std::string format_vertex(const VertexId& v) const override {
        std::string s = "r";
        for (auto d : v.tok) s += "." + std::to_string(d);
        return s;
    }
    VertexId parse_vertex(const std::string& s) const override {
        auto parts = detail::split(s, '.');
        if (parts.empty() || parts[0] != "r")
            throw ParseError("tree address must start with 'r'", 0);
        VertexId v;
        for (std::size_t i = 1; i < parts.size(); ++i)
            v.tok.push_back(detail::parse_int(parts[i], i));
        if (!contains(v)) throw ParseError("tree address digit out of range", 0);
        return v;
    }

private:
    Ray branch_ray(int first) const {
        Ray r;
        r.origin = root();
        r.label = "branch-" + std::to_string(first);
        r.at = [first](std::uint64_t k) {
            VertexId u;
            if (k == 0) return u;
            u.tok.push_back(first);
            for (std::uint64_t i = 1; i < k; ++i) u.tok.push_back(0);
            return u;
        };
        return r;
    }

    int k_;
    std::string name_;
};

// ---------------------------------------------------------------------------
// The log-wedge: {(x, y) in Z^2 : x >= 0, 0 <= y <= ln(1+x)}, nearest-neighbor
// edges. Membership is decided by the exact integer table EXP_CEIL.
//
// Anchored containment certificate (used to certify contour enumeration):
// let W be connected with anchor (jx, yx) and |boundary(W)| <= m.
//  - Every occupied row has a distinct rightmost horizontal boundary edge,
//    so W occupies at most m rows; rows are contiguous (paths cross
//    intermediate rows), hence all rows lie in [0, yx + m - 1].
//  - Occupied columns are contiguous. A column whose top cell stays below the
//    wedge ceiling contributes a distinct upward boundary edge, so at most m
//    such columns exist; a column reaching its ceiling h(j) needs
//    h(j) <= Y := yx + m - 1, i.e. j <= ceil(e^(Y+1)) - 2.
// Together: W fits in [0, C] x [0, Y] with C = max(jx, ceil(e^(Y+1)) - 2) + m,
// and every such cell is within distance C + yx + Y of the anchor.
// ---------------------------------------------------------------------------
class LogWedgeOracle final : public GraphOracle {
public:
    LogWedgeOracle() : name_("wedge:ln") {}

    const std::string& family() const override { return name_; }
    int max_degree() const override { return 4; }
    VertexId root() const override { return VertexId{0, 0}; }
    bool contains(const VertexId& v) const override {
        if (v.tok.size() != 2) return false;
        const std::int64_t x = v.tok[0], y = v.tok[1];
        return x >= 0 && y >= 0 && y <= detail::log_height(x);
    }
    std::vector<VertexId> neighbors(const VertexId& v) const override {
        std::vector<VertexId> out;
        const std::int64_t x = v.tok[0], y = v.tok[1];
        for (auto [dx, dy] : std::array<std::pair<int, int>, 4>{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}}) {
            VertexId u{x + dx, y + dy};
            if (contains(u)) out.push_back(std::move(u));
        }
        return out;
    }
    bool vertex_transitive() const override { return false; }
    std::optional<std::uint64_t> interior_cap(std::uint64_t) const override {
        // no global certificate: full-column prefixes grow without bound at
        // fixed boundary size (their boundary is h(c)+1 ~ ln c)
        return std::nullopt;
    }
    std::optional<std::uint64_t> anchored_reach(const VertexId& a, std::uint64_t m) const override {
        if (m == 0) return 0;
        const std::int64_t jx = a.tok[0], yx = a.tok[1];
        const std::int64_t Y = yx + static_cast<std::int64_t>(m) - 1;
        if (Y + 1 >= static_cast<std::int64_t>(detail::EXP_CEIL.size())) return std::nullopt;
        const std::int64_t full_top_max = detail::EXP_CEIL[Y + 1] - 2;
        const std::int64_t C = std::max(jx, full_top_max) + static_cast<std::int64_t>(m);
        return static_cast<std::uint64_t>(C + yx + Y);
    }
    std::vector<Ray> escape_rays(const VertexId& v) const override {
        Ray r;
        r.origin = v;
        r.label = "+x";
        r.at = [v](std::uint64_t k) {
            VertexId u = v;
            u.tok[0] += static_cast<std::int64_t>(k);
            return u;
        };
        return {r};
    }
    std::string format_vertex(const VertexId& v) const override {
        return detail::format_coords(v.tok);
    }
    VertexId parse_vertex(const std::string& s) const override {
        auto v = VertexId(detail::parse_coords(s, 2));
        if (!contains(v)) throw ParseError("point outside the wedge", 0);
        return v;
    }

private:
    std::string name_;
};

// ---------------------------------------------------------------------------
// Diestel-Leader graph DL(2,2): pairs (u, v) of vertices of two 3-regular
// trees with Busemann heights summing to zero; a step moves u down and v up,
// or u up and v down. Tree vertices are encoded relative to a fixed spine:
// (height, word) where the word is the child-digit path after leaving the
// spine (empty word = on the spine; a nonempty word starts with digit 1,
// because child 0 of a spine vertex continues the spine).
//
// Token layout: [h_u, h_v, len(w_u), w_u..., len(w_v), w_v...], h_u + h_v = 0.
// ---------------------------------------------------------------------------
class DiestelLeaderOracle final : public GraphOracle {
public:
    DiestelLeaderOracle() : name_("dl:2,2") {}

    struct TreePart {
        std::int64_t h;
        std::vector<std::int64_t> w;
        TreePart parent() const {
            TreePart p{h - 1, w};
            if (!p.w.empty()) p.w.pop_back();
            return p;
        }
        TreePart child(int c) const {
            TreePart q{h + 1, w};
            if (!(q.w.empty() && c == 0)) q.w.push_back(c);
            return q;
        }
        bool valid() const {
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (w[i] < 0 || w[i] > 1) return false;
                if (i == 0 && w[i] != 1) return false;
            }
            return true;
        }
    };

    static std::pair<TreePart, TreePart> decode(const VertexId& v) {
        std::size_t i = 0;
        auto need = [&](std::size_t k) {
            if (v.tok.size() < i + k) throw OracleError("dl:2,2: truncated token");
        };
        need(3);
        TreePart u{v.tok[0], {}}, w{v.tok[1], {}};
        std::size_t lu = static_cast<std::size_t>(v.tok[2]);
        i = 3;
        need(lu);
        u.w.assign(v.tok.begin() + i, v.tok.begin() + i + lu);
        i += lu;
        need(1);
        std::size_t lv = static_cast<std::size_t>(v.tok[i]);
        ++i;
        need(lv);
        w.w.assign(v.tok.begin() + i, v.tok.begin() + i + lv);
        i += lv;
        if (i != v.tok.size()) throw OracleError("dl:2,2: trailing token data");
        return {u, w};
    }

    static VertexId encode(const TreePart& u, const TreePart& v) {
        VertexId out;
        out.tok.push_back(u.h);
        out.tok.push_back(v.h);
        out.tok.push_back(static_cast<std::int64_t>(u.w.size()));
        out.tok.insert(out.tok.end(), u.w.begin(), u.w.end());
        out.tok.push_back(static_cast<std::int64_t>(v.w.size()));
        out.tok.insert(out.tok.end(), v.w.begin(), v.w.end());
        return out;
    }

    const std::string& family() const override { return name_; }
    int max_degree() const override { return 4; }
    VertexId root() const override { return encode({0, {}}, {0, {}}); }
    bool contains(const VertexId& v) const override {
        try {
            auto [u, w] = decode(v);
            return u.h + w.h == 0 && u.valid() && w.valid();
        } catch (const OracleError&) {
            return false;
        }
    }
    std::vector<VertexId> neighbors(const VertexId& v) const override {
        auto [u, w] = decode(v);
        if (u.h + w.h != 0) throw OracleError("dl:2,2: heights do not sum to zero");
        std::vector<VertexId> out;
        out.reserve(4);
        for (int c = 0; c < 2; ++c) out.push_back(encode(u.child(c), w.parent()));
        for (int c = 0; c < 2; ++c) out.push_back(encode(u.parent(), w.child(c)));
        return out;
    }
    bool vertex_transitive() const override { return true; }
    bool has_bigeodesic() const override { return true; }
    std::pair<Ray, Ray> bigeodesic_rays() const override {
        return {monotone_ray(root(), +1), monotone_ray(root(), -1)};
    }
    std::optional<std::uint64_t> interior_cap(std::uint64_t) const override { return std::nullopt; }
    std::optional<std::uint64_t> anchored_reach(const VertexId&, std::uint64_t n) const override {
        // a top-level vertex of W exposes 2 down edges and a bottom-level one
        // 2 up edges (same-level vertices are never adjacent), so any finite
        // nonempty W has |boundary(W)| >= 4
        if (n < 4) return 0;
        return std::nullopt;
    }
    std::vector<Ray> escape_rays(const VertexId& v) const override {
        return {monotone_ray(v, +1), monotone_ray(v, -1)};
    }
    std::string format_vertex(const VertexId& v) const override {
        auto [u, w] = decode(v);
        auto word = [](const std::vector<std::int64_t>& ws) {
            std::string s;
            for (auto d : ws) s += static_cast<char>('0' + d);
            return s;
        };
        return std::to_string(u.h) + "|" + word(u.w) + "|" + word(w.w);
    }
    VertexId parse_vertex(const std::string& s) const override {
        auto parts = detail::split(s, '|');
        if (parts.size() != 3) throw ParseError("dl vertex must be h|uword|vword", 0);
        TreePart u{detail::parse_int(parts[0], 0), {}}, v{-detail::parse_int(parts[0], 0), {}};
        for (char c : parts[1]) u.w.push_back(c - '0');
        for (char c : parts[2]) v.w.push_back(c - '0');
        if (!u.valid() || !v.valid()) throw ParseError("dl word must be empty or 1{0,1}*", 0);
        return encode(u, v);
    }

private:
    // +1: u descends (child 0) while v ascends; -1: the reverse. The height
    // coordinate is strictly monotone along the ray, so it never revisits.
    Ray monotone_ray(const VertexId& from, int dir) const {
        Ray r;
        r.origin = from;
        r.label = dir > 0 ? "down-up" : "up-down";
        r.at = [from, dir](std::uint64_t k) {
            auto [u, v] = decode(from);
            for (std::uint64_t i = 0; i < k; ++i) {
                if (dir > 0) {
                    u = u.child(0);
                    v = v.parent();
                } else {
                    u = u.parent();
                    v = v.child(0);
                }
            }
            return encode(u, v);
        };
        return r;
    }

    std::string name_;
};

// ---------------------------------------------------------------------------
// Family spec grammar: zd:<d> | line | tree:<k> | wedge:ln | dl:2,2 | strip:<h>
// ---------------------------------------------------------------------------
inline OraclePtr make_family(const std::string& spec) {
    auto parts = detail::split(spec, ':');
    const std::string& head = parts[0];
    std::size_t param_pos = head.size() + 1;
    if (head == "line") {
        if (parts.size() != 1) throw ParseError("'line' takes no parameter", param_pos);
        return std::make_shared<ZdOracle>(1, "line");
    }
    if (head == "zd") {
        if (parts.size() != 2) throw ParseError("expected zd:<d>", param_pos);
        auto d = detail::parse_int(parts[1], param_pos);
        if (d < 1 || d > 8) throw ParseError("zd dimension must be in [1,8]", param_pos);
        return std::make_shared<ZdOracle>(static_cast<int>(d), spec);
    }
    if (head == "tree") {
        if (parts.size() != 2) throw ParseError("expected tree:<k>", param_pos);
        auto k = detail::parse_int(parts[1], param_pos);
        if (k < 3 || k > 16) throw ParseError("tree degree must be in [3,16]", param_pos);
        return std::make_shared<RegularTreeOracle>(static_cast<int>(k));
    }
    if (head == "wedge") {
        if (parts.size() != 2 || parts[1] != "ln") throw ParseError("expected wedge:ln", param_pos);
        return std::make_shared<LogWedgeOracle>();
    }
    if (head == "dl") {
        if (parts.size() != 2 || parts[1] != "2,2") throw ParseError("expected dl:2,2", param_pos);
        return std::make_shared<DiestelLeaderOracle>();
    }
    if (head == "strip") {
        if (parts.size() != 2) throw ParseError("expected strip:<h>", param_pos);
        auto h = detail::parse_int(parts[1], param_pos);
        if (h < 1 || h > 64) throw ParseError("strip height must be in [1,64]", param_pos);
        return std::make_shared<StripOracle>(static_cast<int>(h));
    }
    throw ParseError("unknown family '" + head + "'", 0);
}

// True iff d(x_n, y_m) = n + m for all 1 <= n, m <= depth, each distance
// computed by capped BFS. The rays themselves are also validated as geodesics.
inline bool verify_bigeodesic_prefix(const GraphOracle& g, const Ray& a, const Ray& b,
                                     std::uint64_t depth) {
    if (depth < 1) throw DomainError("verify_bigeodesic_prefix: depth must be >= 1");
    if (!validate_geodesic_prefix(g, a, depth) || !validate_geodesic_prefix(g, b, depth))
        return false;
    if (a.at(0) != b.at(0)) return false;
    for (std::uint64_t n = 1; n <= depth; ++n)
        for (std::uint64_t m = 1; m <= depth; ++m) {
            auto d = path_distance(g, a.at(n), b.at(m), n + m);
            if (!d || *d != n + m) return false;
        }
    return true;
}

inline bool verify_bigeodesic_prefix(const GraphOracle& g, std::uint64_t depth) {
    auto [a, b] = g.bigeodesic_rays();
    return verify_bigeodesic_prefix(g, a, b, depth);
}

// Window descriptor grammar:
//   ball:<vertex>:<radius>        any family
//   box:<corner>:<corner>         coordinate families (zd, strip, wedge)
//   path:<n>                      line: vertices 0..n-1
//   cols:<a>:<b>                  wedge: all columns a..b at full height
inline Window window_from_descriptor(OraclePtr g, const std::string& desc) {
    auto parts = detail::split(desc, ':');
    const std::string& kind = parts[0];
    if (kind == "ball") {
        if (parts.size() != 3) throw ParseError("expected ball:<vertex>:<radius>", 5);
        auto center = g->parse_vertex(parts[1]);
        auto radius = detail::parse_int(parts[2], 5);
        if (radius < 0) throw ParseError("radius must be >= 0", 5);
        return Window::ball(std::move(g), center, static_cast<std::uint32_t>(radius));
    }
    if (kind == "path") {
        if (parts.size() != 2) throw ParseError("expected path:<n>", 5);
        auto n = detail::parse_int(parts[1], 5);
        if (n < 1) throw ParseError("path length must be >= 1", 5);
        std::vector<VertexId> verts;
        for (std::int64_t i = 0; i < n; ++i) verts.push_back(VertexId{i});
        return Window::induce(std::move(g), std::move(verts), desc);
    }
    if (kind == "box") {
        if (parts.size() != 3) throw ParseError("expected box:<corner>:<corner>", 4);
        auto lo = g->parse_vertex(parts[1]).tok;
        auto hi = g->parse_vertex(parts[2]).tok;
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (lo[i] > hi[i]) std::swap(lo[i], hi[i]);
        std::vector<VertexId> verts;
        std::vector<std::int64_t> cur = lo;
        while (true) {
            VertexId v(cur);
            if (g->contains(v)) verts.push_back(v);
            std::size_t i = 0;
            for (; i < cur.size(); ++i) {
                if (cur[i] < hi[i]) {
                    ++cur[i];
                    break;
                }
                cur[i] = lo[i];
            }
            if (i == cur.size()) break;
        }
        return Window::induce(std::move(g), std::move(verts), desc);
    }
    if (kind == "cols") {
        if (parts.size() != 3) throw ParseError("expected cols:<a>:<b>", 5);
        auto a = detail::parse_int(parts[1], 5);
        auto b = detail::parse_int(parts[2], 5);
        if (a < 0 || b < a) throw ParseError("need 0 <= a <= b", 5);
        std::vector<VertexId> verts;
        for (std::int64_t x = a; x <= b; ++x)
            for (std::int64_t y = 0; y <= detail::log_height(x); ++y) {
                VertexId v{x, y};
                if (g->contains(v)) verts.push_back(std::move(v));
            }
        return Window::induce(std::move(g), std::move(verts), desc);
    }
    throw ParseError("unknown window descriptor '" + kind + "'", 0);
}

}  // namespace perco
