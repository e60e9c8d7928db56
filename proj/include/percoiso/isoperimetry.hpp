#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "percoiso/bitset.hpp"
#include "percoiso/enumerate.hpp"
#include "percoiso/errors.hpp"
#include "percoiso/window.hpp"

namespace perco {

// Everything about a finite connected set's boundary: the edge boundary, the
// two vertex boundaries, the closure, the minimal connector size ell (fewest
// edges of E[W] joining the internal vertex boundary, a Steiner problem), and
// the tree distance ell + |boundary|.
struct BoundaryReport {
    std::vector<std::uint32_t> set;             // window vertex indices, sorted
    std::vector<std::uint32_t> boundary_edges;  // window edge ids
    std::vector<std::uint32_t> int_vertex_boundary;
    std::vector<std::uint32_t> ext_vertex_boundary;
    std::vector<std::uint32_t> closure;  // set + external vertex boundary
    std::uint64_t ell = 0;
    std::uint64_t tree_distance = 0;
    std::uint32_t diam = 0;
    bool boundary_connected = false;  // as a subgraph of the closure
    bool induced_is_tree = false;
};

namespace detail {

inline bool connected_subset(const Window& w, const DynBitset& in, std::uint32_t start,
                             std::size_t size) {
    std::vector<std::uint32_t> stack{start};
    DynBitset seen(w.n_vertices());
    seen.set(start);
    std::size_t cnt = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto u : w.adj(v))
            if (in.test(u) && !seen.test(u)) {
                seen.set(u);
                ++cnt;
                stack.push_back(u);
            }
    }
    return cnt == size;
}

// Minimum edge count of a connected subgraph of G[W] covering `terminals`.
// With unit weights this is min |U| - 1 over connected U with T <= U <= W, so
// when W \ T is small we scan its subsets; otherwise Dreyfus-Wagner DP over
// terminal subsets; last resort: exhaustive edge-subset search.
inline std::uint64_t steiner_connector(const Window& w, const std::vector<std::uint32_t>& W,
                                       const std::vector<std::uint32_t>& terminals) {
    if (terminals.size() <= 1) return 0;
    const std::size_t nw = W.size();
    std::vector<std::uint32_t> local(w.n_vertices(), Window::UNREACHED);
    for (std::size_t i = 0; i < nw; ++i) local[W[i]] = static_cast<std::uint32_t>(i);
    // adjacency within G[W], local indices
    std::vector<std::vector<std::uint32_t>> adj(nw);
    std::uint64_t n_edges = 0;
    for (std::size_t i = 0; i < nw; ++i)
        for (auto u : w.adj(W[i]))
            if (local[u] != Window::UNREACHED) {
                adj[i].push_back(local[u]);
                ++n_edges;
            }
    n_edges /= 2;
    std::vector<char> is_term(nw, 0);
    for (auto t : terminals) is_term[local[t]] = 1;
    std::vector<std::uint32_t> free;
    for (std::uint32_t i = 0; i < nw; ++i)
        if (!is_term[i]) free.push_back(i);

    auto connected_mask = [&](std::uint64_t mask) {
        // mask over local indices
        int start = -1;
        std::size_t size = 0;
        for (std::uint32_t i = 0; i < nw; ++i)
            if (mask >> i & 1) {
                if (start < 0) start = static_cast<int>(i);
                ++size;
            }
        if (start < 0) return false;
        std::uint64_t seen = std::uint64_t{1} << start;
        std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(start)};
        std::size_t cnt = 1;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto u : adj[v])
                if ((mask >> u & 1) && !(seen >> u & 1)) {
                    seen |= std::uint64_t{1} << u;
                    ++cnt;
                    stack.push_back(u);
                }
        }
        return cnt == size;
    };

    if (free.size() <= 18 && nw <= 64) {
        std::uint64_t tmask = 0;
        for (std::uint32_t i = 0; i < nw; ++i)
            if (is_term[i]) tmask |= std::uint64_t{1} << i;
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::uint64_t fm = 0; fm < (std::uint64_t{1} << free.size()); ++fm) {
            std::uint64_t extra = static_cast<std::uint64_t>(std::popcount(fm));
            if (terminals.size() + extra - 1 >= best) continue;
            std::uint64_t mask = tmask;
            for (std::size_t j = 0; j < free.size(); ++j)
                if (fm >> j & 1) mask |= std::uint64_t{1} << free[j];
            if (connected_mask(mask)) best = terminals.size() + extra - 1;
        }
        if (best == std::numeric_limits<std::uint64_t>::max())
            throw DomainError("steiner: terminals not connectable inside G[W]");
        return best;
    }

    if (terminals.size() <= 12) {
        // Dreyfus-Wagner with unit weights
        const std::size_t t = terminals.size();
        const std::uint32_t INF = Window::UNREACHED;
        // all-pairs BFS distances inside G[W]
        std::vector<std::vector<std::uint32_t>> dist(nw, std::vector<std::uint32_t>(nw, INF));
        for (std::uint32_t s = 0; s < nw; ++s) {
            dist[s][s] = 0;
            std::vector<std::uint32_t> q{s};
            for (std::size_t h = 0; h < q.size(); ++h) {
                auto v = q[h];
                for (auto u : adj[v])
                    if (dist[s][u] == INF) {
                        dist[s][u] = dist[s][v] + 1;
                        q.push_back(u);
                    }
            }
        }
        const std::size_t full = std::size_t{1} << t;
        std::vector<std::vector<std::uint32_t>> dp(full, std::vector<std::uint32_t>(nw, INF));
        for (std::size_t i = 0; i < t; ++i)
            for (std::uint32_t v = 0; v < nw; ++v)
                dp[std::size_t{1} << i][v] = dist[local[terminals[i]]][v];
        for (std::size_t S = 1; S < full; ++S) {
            if (std::popcount(S) < 2) continue;
            auto& row = dp[S];
            for (std::size_t T = (S - 1) & S; T; T = (T - 1) & S) {
                if (T < (S ^ T)) break;  // each split once
                const auto& a = dp[T];
                const auto& b = dp[S ^ T];
                for (std::uint32_t v = 0; v < nw; ++v)
                    if (a[v] != INF && b[v] != INF) row[v] = std::min(row[v], a[v] + b[v]);
            }
            // relax by distance
            for (std::uint32_t v = 0; v < nw; ++v) {
                if (row[v] == INF) continue;
                for (std::uint32_t u = 0; u < nw; ++u)
                    if (dist[v][u] != INF && row[v] + dist[v][u] < row[u])
                        row[u] = row[v] + dist[v][u];
            }
        }
        std::uint32_t best = INF;
        for (std::uint32_t v = 0; v < nw; ++v) best = std::min(best, dp[full - 1][v]);
        if (best == INF) throw DomainError("steiner: terminals not connectable inside G[W]");
        return best;
    }

    if (n_edges <= 20) {
        // exhaustive search over edge subsets
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (std::uint32_t i = 0; i < nw; ++i)
            for (auto j : adj[i])
                if (i < j) edges.push_back({i, j});
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::uint64_t em = 0; em < (std::uint64_t{1} << edges.size()); ++em) {
            std::uint64_t k = static_cast<std::uint64_t>(std::popcount(em));
            if (k >= best) continue;
            // vertices covered = terminals plus edge endpoints; must be connected
            // through chosen edges and contain all terminals in one component
            std::vector<std::uint32_t> parent(nw);
            for (std::uint32_t i = 0; i < nw; ++i) parent[i] = i;
            std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (em >> e & 1) parent[find(edges[e].first)] = find(edges[e].second);
            auto r0 = find(local[terminals[0]]);
            bool ok = true;
            for (auto t2 : terminals)
                if (find(local[t2]) != r0) {
                    ok = false;
                    break;
                }
            if (ok) best = k;
        }
        if (best == std::numeric_limits<std::uint64_t>::max())
            throw DomainError("steiner: terminals not connectable inside G[W]");
        return best;
    }

    throw BudgetError("steiner instance exceeds the exact-solver budget (" +
                      std::to_string(terminals.size()) + " terminals, " +
                      std::to_string(n_edges) + " edges)");
}

}  // namespace detail

// Requires W connected and disjoint from the rim so every boundary edge is
// visible inside the window.
inline BoundaryReport boundary_report(const Window& w, std::vector<std::uint32_t> W,
                                      bool with_diameter = true) {
    if (W.empty()) throw DomainError("boundary_report: empty set");
    std::sort(W.begin(), W.end());
    W.erase(std::unique(W.begin(), W.end()), W.end());
    DynBitset in(w.n_vertices());
    for (auto v : W) {
        if (w.on_rim(v))
            throw PaddingError("boundary_report: set touches the window rim (" +
                               w.oracle().format_vertex(w.vertex(v)) + ")");
        in.set(v);
    }
    if (!detail::connected_subset(w, in, W[0], W.size()))
        throw DomainError("boundary_report: set is not connected");

    BoundaryReport r;
    r.set = W;
    DynBitset ext(w.n_vertices());
    std::uint64_t inner_edges = 0;
    for (auto v : W) {
        bool on_boundary = false;
        for (auto e : w.incident_edges(v)) {
            auto [a, b] = w.edge(e);
            auto u = a == v ? b : a;
            if (in.test(u)) {
                ++inner_edges;  // counted from both sides
            } else {
                r.boundary_edges.push_back(e);
                ext.set(u);
                on_boundary = true;
            }
        }
        if (on_boundary) r.int_vertex_boundary.push_back(v);
    }
    inner_edges /= 2;
    std::sort(r.boundary_edges.begin(), r.boundary_edges.end());
    ext.for_each_set([&](std::uint32_t u) { r.ext_vertex_boundary.push_back(u); });
    r.closure = W;
    r.closure.insert(r.closure.end(), r.ext_vertex_boundary.begin(), r.ext_vertex_boundary.end());
    std::sort(r.closure.begin(), r.closure.end());
    r.induced_is_tree = inner_edges == W.size() - 1;
    r.ell = detail::steiner_connector(w, W, r.int_vertex_boundary);
    r.tree_distance = r.ell + r.boundary_edges.size();
    if (with_diameter) r.diam = diameter(w, W);

    // is the edge boundary connected as a subgraph of the closure?
    if (!r.boundary_edges.empty()) {
        std::vector<std::uint32_t> comp(w.n_vertices(), Window::UNREACHED);
        // union-find over boundary-edge endpoints
        std::vector<std::uint32_t> parent(w.n_vertices());
        for (std::uint32_t i = 0; i < w.n_vertices(); ++i) parent[i] = i;
        std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto e : r.boundary_edges) parent[find(w.edge(e).a)] = find(w.edge(e).b);
        auto r0 = find(w.edge(r.boundary_edges[0]).a);
        r.boundary_connected = true;
        for (auto e : r.boundary_edges)
            if (find(w.edge(e).a) != r0) {
                r.boundary_connected = false;
                break;
            }
        (void)comp;
    }
    return r;
}

// Windowed estimate of one of the three isoperimetric constants. The value is
// an upper bound on the infimum restricted to |W| <= max_size; `num`/`den`
// carry the exact integers behind the minimizing ratio.
struct ConstantEstimate {
    char constant;  // 'R', 'P', or 'C'
    double value = 0;
    std::uint64_t num = 0;  // |boundary| of the minimizer
    std::uint64_t den = 0;  // d^t for R, |W| for C, diam for P
    std::vector<VertexId> minimizer;
    std::uint32_t max_size = 0;
    std::string window_descriptor;
};

namespace detail {

template <class Ratio>
ConstantEstimate minimize_over_sets(const Window& w, std::uint32_t max_size, char name,
                                    Ratio&& ratio) {
    // Anchoring: on vertex-transitive families the infimum is attained over
    // sets through the root; otherwise every non-rim vertex anchors (the
    // unanchored engine already generates each set once, from its minimal
    // vertex).
    std::optional<std::uint32_t> anchor;
    if (w.oracle().vertex_transitive()) {
        auto rt = w.try_index(w.oracle().root());
        if (!rt) throw PaddingError("window does not contain the family root");
        if (w.dist_to_rim(*rt) < max_size)
            throw PaddingError("window too small: sets of size " + std::to_string(max_size) +
                               " through the root may touch the rim");
        anchor = *rt;
    }
    DynBitset eligible(w.n_vertices());
    for (std::uint32_t v = 0; v < w.n_vertices(); ++v)
        if (!w.on_rim(v)) eligible.set(v);

    ConstantEstimate best;
    best.constant = name;
    best.value = std::numeric_limits<double>::infinity();
    best.max_size = max_size;
    best.window_descriptor = w.descriptor();
    EnumOptions opts;
    opts.eligible = &eligible;
    enumerate_connected_sets(
        w, anchor, max_size,
        [&](const std::vector<std::uint32_t>& s) {
            auto res = ratio(s);
            if (!res) return;
            auto [val, num, den] = *res;
            if (val < best.value) {
                best.value = val;
                best.num = num;
                best.den = den;
                best.minimizer.clear();
                for (auto v : s) best.minimizer.push_back(w.vertex(v));
            }
        },
        opts);
    if (!std::isfinite(best.value))
        throw DomainError(std::string("estimate_") + name + ": no admissible set found");
    return best;
}

}  // namespace detail

// min |boundary(W)| / d^t(boundary(W)) over connected W, |W| <= max_size
inline ConstantEstimate estimate_R(const Window& w, std::uint32_t max_size) {
    return detail::minimize_over_sets(
        w, max_size, 'R',
        [&](const std::vector<std::uint32_t>& s)
            -> std::optional<std::tuple<double, std::uint64_t, std::uint64_t>> {
            auto r = boundary_report(w, s, /*with_diameter=*/false);
            double val = static_cast<double>(r.boundary_edges.size()) /
                         static_cast<double>(r.tree_distance);
            return std::tuple{val, static_cast<std::uint64_t>(r.boundary_edges.size()),
                              r.tree_distance};
        });
}

namespace detail {

inline std::uint64_t boundary_size_of(const Window& w, const std::vector<std::uint32_t>& s,
                                      DynBitset& scratch) {
    scratch.clear();
    for (auto v : s) scratch.set(v);
    std::uint64_t b = 0;
    for (auto v : s)
        for (auto u : w.adj(v))
            if (!scratch.test(u)) ++b;
    // oracle edges leaving the window also count; non-rim sets have none
    for (auto v : s)
        b += static_cast<std::uint64_t>(w.oracle().neighbors(w.vertex(v)).size()) - w.adj(v).size();
    return b;
}

}  // namespace detail

// min |boundary(W)| / ln(diam W); sets with diam < 2 are inadmissible (the
// ratio is undefined or nonpositive there).
inline ConstantEstimate estimate_P(const Window& w, std::uint32_t max_size) {
    DynBitset scratch(w.n_vertices());
    return detail::minimize_over_sets(
        w, max_size, 'P',
        [&, scratch](const std::vector<std::uint32_t>& s) mutable
            -> std::optional<std::tuple<double, std::uint64_t, std::uint64_t>> {
            if (s.size() < 3) return std::nullopt;  // diam >= 2 needs 3 vertices
            auto d = diameter(w, s);
            if (d < 2) return std::nullopt;
            std::uint64_t b = detail::boundary_size_of(w, s, scratch);
            double val = static_cast<double>(b) / std::log(static_cast<double>(d));
            return std::tuple{val, b, static_cast<std::uint64_t>(d)};
        });
}

// min |boundary(W)| / |W|
inline ConstantEstimate estimate_C(const Window& w, std::uint32_t max_size) {
    DynBitset scratch(w.n_vertices());
    return detail::minimize_over_sets(
        w, max_size, 'C',
        [&, scratch](const std::vector<std::uint32_t>& s) mutable
            -> std::optional<std::tuple<double, std::uint64_t, std::uint64_t>> {
            std::uint64_t b = detail::boundary_size_of(w, s, scratch);
            double val = static_cast<double>(b) / static_cast<double>(s.size());
            return std::tuple{val, b, static_cast<std::uint64_t>(s.size())};
        });
}

struct InequalityViolation {
    std::size_t report_index;
    std::string kind;
    std::string detail;
};

// Per-report sanity battery:
//   |boundary| <= d^t <= |boundary| + |W| - 1
//   |boundary|/d^t >= c/(c+1) with c = |boundary|/|W|  (i.e. d^t <= |b|+|W|)
//   optional manual certificate: d^t <= (1+t)|boundary|
inline std::vector<InequalityViolation> check_constant_inequalities(
    const std::vector<BoundaryReport>& reports, std::optional<double> t_certificate = {}) {
    std::vector<InequalityViolation> out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const std::uint64_t b = r.boundary_edges.size();
        const std::uint64_t n = r.set.size();
        if (!(b <= r.tree_distance))
            out.push_back({i, "bracket-lower",
                           "d^t=" + std::to_string(r.tree_distance) + " < |b|=" + std::to_string(b)});
        if (!(r.tree_distance <= b + n - 1))
            out.push_back({i, "bracket-upper",
                           "d^t=" + std::to_string(r.tree_distance) + " > " +
                               std::to_string(b + n - 1)});
        if (!(r.tree_distance <= b + n))
            out.push_back({i, "cheeger-ratio", "d^t > |b| + |W|"});
        if (t_certificate && !(static_cast<double>(r.tree_distance) <=
                               (1.0 + *t_certificate) * static_cast<double>(b)))
            out.push_back({i, "t-certificate", "d^t > (1+t)|b|"});
    }
    return out;
}

}  // namespace perco
