#pragma once
#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "percoiso/bitset.hpp"
#include "percoiso/errors.hpp"
#include "percoiso/oracle.hpp"

namespace perco {

// Finite snapshot of an infinite graph: an induced subgraph plus its rim
// (vertices with at least one oracle neighbor outside the window). All
// computations on infinite graphs run through a Window with caller-controlled
// padding; rim data is computed from the oracle at construction and never
// goes stale because windows are immutable.
class Window {
public:
    struct EdgeRef {
        std::uint32_t a, b;  // a < b, window vertex indices
    };

    static Window ball(OraclePtr oracle, const VertexId& center, std::uint32_t radius) {
        std::map<VertexId, std::uint32_t> dist;
        std::deque<VertexId> queue;
        if (!oracle->contains(center))
            throw OracleError(oracle->family() + ": ball center is not a vertex");
        dist[center] = 0;
        queue.push_back(center);
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            std::uint32_t d = dist[v];
            if (d == radius) continue;
            for (auto& u : oracle->neighbors(v)) {
                if (dist.emplace(u, d + 1).second) queue.push_back(u);
            }
        }
        std::vector<VertexId> verts;
        verts.reserve(dist.size());
        for (auto& [v, d] : dist) verts.push_back(v);
        std::string desc = "ball:" + oracle->format_vertex(center) + ":" + std::to_string(radius);
        return Window(std::move(oracle), std::move(verts), std::move(desc));
    }

    static Window induce(OraclePtr oracle, std::vector<VertexId> verts, std::string descriptor) {
        return Window(std::move(oracle), std::move(verts), std::move(descriptor));
    }

    const GraphOracle& oracle() const { return *g_; }
    const OraclePtr& oracle_ptr() const { return g_; }
    const std::string& descriptor() const { return desc_; }

    std::uint32_t n_vertices() const { return static_cast<std::uint32_t>(verts_.size()); }
    std::uint32_t n_edges() const { return static_cast<std::uint32_t>(edges_.size()); }

    const VertexId& vertex(std::uint32_t i) const { return verts_[i]; }

    std::optional<std::uint32_t> try_index(const VertexId& v) const {
        auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
        if (it == verts_.end() || *it != v) return std::nullopt;
        return static_cast<std::uint32_t>(it - verts_.begin());
    }

    std::uint32_t index_of(const VertexId& v) const {
        auto i = try_index(v);
        if (!i) throw DomainError("vertex " + g_->format_vertex(v) + " not in window " + desc_);
        return *i;
    }

    bool contains(const VertexId& v) const { return try_index(v).has_value(); }

    const std::vector<std::uint32_t>& adj(std::uint32_t v) const { return adj_[v]; }
    const std::vector<std::uint32_t>& incident_edges(std::uint32_t v) const { return inc_[v]; }
    const EdgeRef& edge(std::uint32_t e) const { return edges_[e]; }

    std::optional<std::uint32_t> edge_index(std::uint32_t a, std::uint32_t b) const {
        if (b < a) std::swap(a, b);
        EdgeRef key{a, b};
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                                   [](const EdgeRef& x, const EdgeRef& y) {
                                       return x.a != y.a ? x.a < y.a : x.b < y.b;
                                   });
        if (it == edges_.end() || it->a != a || it->b != b) return std::nullopt;
        return static_cast<std::uint32_t>(it - edges_.begin());
    }

    bool on_rim(std::uint32_t v) const { return rim_[v] != 0; }
    const std::vector<std::uint32_t>& rim() const { return rim_list_; }

    // Hop count to the nearest rim vertex (0 on the rim itself). Infinity-free:
    // if the window has no rim (finite component), returns n_vertices().
    std::uint32_t dist_to_rim(std::uint32_t v) const { return rim_dist_[v]; }

    // BFS distance within the window graph.
    std::vector<std::uint32_t> bfs_all(std::uint32_t from) const {
        std::vector<std::uint32_t> d(n_vertices(), UNREACHED);
        std::deque<std::uint32_t> q{from};
        d[from] = 0;
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            for (auto u : adj_[v])
                if (d[u] == UNREACHED) {
                    d[u] = d[v] + 1;
                    q.push_back(u);
                }
        }
        return d;
    }

    static constexpr std::uint32_t UNREACHED = 0xffffffffu;

private:
    Window(OraclePtr oracle, std::vector<VertexId> verts, std::string descriptor)
        : g_(std::move(oracle)), verts_(std::move(verts)), desc_(std::move(descriptor)) {
        std::sort(verts_.begin(), verts_.end());
        verts_.erase(std::unique(verts_.begin(), verts_.end()), verts_.end());
        const auto n = static_cast<std::uint32_t>(verts_.size());
        adj_.assign(n, {});
        inc_.assign(n, {});
        rim_.assign(n, 0);
        const int delta = g_->max_degree();
        for (std::uint32_t i = 0; i < n; ++i) {
            auto nbrs = g_->neighbors(verts_[i]);
            if (static_cast<int>(nbrs.size()) > delta)
                throw OracleError(g_->family() + ": degree bound violated at " +
                                  g_->format_vertex(verts_[i]));
            for (auto& u : nbrs) {
                if (auto j = try_index(u)) {
                    adj_[i].push_back(*j);
                } else {
                    rim_[i] = 1;
                }
            }
            std::sort(adj_[i].begin(), adj_[i].end());
        }
        // neighbor symmetry within the window
        for (std::uint32_t i = 0; i < n; ++i)
            for (auto j : adj_[i])
                if (!std::binary_search(adj_[j].begin(), adj_[j].end(), i))
                    throw OracleError(g_->family() + ": asymmetric adjacency at " +
                                      g_->format_vertex(verts_[i]));
        for (std::uint32_t i = 0; i < n; ++i)
            for (auto j : adj_[i])
                if (i < j) edges_.push_back({i, j});
        // already sorted because adj lists are sorted and i ascends
        for (std::uint32_t e = 0; e < edges_.size(); ++e) {
            inc_[edges_[e].a].push_back(e);
            inc_[edges_[e].b].push_back(e);
        }
        for (std::uint32_t i = 0; i < n; ++i)
            if (rim_[i]) rim_list_.push_back(i);
        // multi-source BFS from the rim
        rim_dist_.assign(n, n == 0 ? 0 : n);
        std::deque<std::uint32_t> q;
        for (auto r : rim_list_) {
            rim_dist_[r] = 0;
            q.push_back(r);
        }
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            for (auto u : adj_[v])
                if (rim_dist_[u] > rim_dist_[v] + 1) {
                    rim_dist_[u] = rim_dist_[v] + 1;
                    q.push_back(u);
                }
        }
    }

    OraclePtr g_;
    std::vector<VertexId> verts_;
    std::string desc_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<EdgeRef> edges_;
    std::vector<std::vector<std::uint32_t>> inc_;
    std::vector<char> rim_;
    std::vector<std::uint32_t> rim_list_;
    std::vector<std::uint32_t> rim_dist_;
};

// Capped breadth-first distance directly on the oracle. Unbounded search on an
// infinite graph is forbidden; nullopt means the distance exceeds `cap`.
inline std::optional<std::uint64_t> path_distance(const GraphOracle& g, const VertexId& x,
                                                  const VertexId& y, std::uint64_t cap) {
    if (x == y) return 0;
    std::map<VertexId, std::uint64_t> dist;
    std::deque<VertexId> q{x};
    dist[x] = 0;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        std::uint64_t d = dist[v];
        if (d == cap) continue;
        for (auto& u : g.neighbors(v)) {
            if (dist.count(u)) continue;
            if (u == y) return d + 1;
            dist[u] = d + 1;
            q.push_back(u);
        }
    }
    return std::nullopt;
}

// Oracle-metric distance computed inside a window. The window distance always
// dominates the oracle distance; it equals it whenever no shorter path can
// leave the window. Any path exiting and re-entering costs at least
// dist_to_rim(x) + 2 + dist_to_rim(y), so the value is certified when it does
// not exceed that. Otherwise the padding is insufficient and we refuse.
inline std::uint32_t oracle_distance_in_window(const Window& w, std::uint32_t x, std::uint32_t y) {
    auto d = w.bfs_all(x);
    std::uint64_t bound = std::uint64_t{w.dist_to_rim(x)} + w.dist_to_rim(y) + 2;
    if (d[y] == Window::UNREACHED || d[y] > bound)
        throw PaddingError("window " + w.descriptor() +
                           " too small to certify a distance; enlarge it");
    return d[y];
}

inline bool is_connected(const Window& w, const std::vector<std::uint32_t>& set) {
    if (set.empty()) throw DomainError("is_connected: empty vertex set");
    DynBitset in(w.n_vertices());
    for (auto v : set) in.set(v);
    std::vector<std::uint32_t> stack{set[0]};
    DynBitset seen(w.n_vertices());
    seen.set(set[0]);
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
    return cnt == set.size();
}

// max over pairs of the oracle-metric distance; throws PaddingError if any
// pair's geodesic might exit the window.
inline std::uint32_t diameter(const Window& w, const std::vector<std::uint32_t>& set) {
    if (set.empty()) throw DomainError("diameter: empty vertex set");
    std::uint32_t best = 0;
    for (auto x : set) {
        auto d = w.bfs_all(x);
        for (auto y : set) {
            if (y <= x) continue;
            std::uint64_t bound = std::uint64_t{w.dist_to_rim(x)} + w.dist_to_rim(y) + 2;
            if (d[y] == Window::UNREACHED || d[y] > bound)
                throw PaddingError("window " + w.descriptor() +
                                   " too small to certify diameter; enlarge it");
            best = std::max(best, d[y]);
        }
    }
    return best;
}

// Checks adjacency of consecutive ray vertices and the geodesic property
// d(origin, at(k)) == k for 1 <= k <= depth.
inline bool validate_geodesic_prefix(const GraphOracle& g, const Ray& ray, std::uint64_t depth) {
    VertexId prev = ray.at(0);
    if (prev != ray.origin) return false;
    for (std::uint64_t k = 1; k <= depth; ++k) {
        VertexId cur = ray.at(k);
        auto nbrs = g.neighbors(prev);
        if (std::find(nbrs.begin(), nbrs.end(), cur) == nbrs.end()) return false;
        auto d = path_distance(g, ray.origin, cur, k);
        if (!d || *d != k) return false;
        prev = std::move(cur);
    }
    return true;
}

}  // namespace perco
