#pragma once
#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "percoiso/bitset.hpp"
#include "percoiso/enumerate.hpp"
#include "percoiso/errors.hpp"
#include "percoiso/isoperimetry.hpp"
#include "percoiso/window.hpp"

namespace perco {

// A contour: a finite minimal edge cut whose removal leaves exactly one
// finite component. Stored through that component (the interior), which is in
// bijection with the contour: gamma = boundary(interior).
struct Contour {
    std::vector<std::uint32_t> interior;       // window vertex indices, sorted
    std::vector<std::uint32_t> edges;          // gamma, window edge ids, sorted
    std::vector<std::uint32_t> edge_interior;  // E[interior]
};

namespace detail {

// Decides whether every component of the window complement of `in` escapes to
// infinity. A component that stays strictly inside the window is a finite
// hole (definitive). A rim-touching component is infinite iff certified: on
// families where complements of connected sets are always infinite this is
// automatic; otherwise an escape ray from one of its vertices must clear the
// interior inside the window (beyond the window it cannot meet the interior
// at all). Rim contact without a certificate is ambiguous and raises
// PaddingError.
enum class HoleStatus { none, finite_hole, ambiguous };

inline HoleStatus find_holes(const Window& w, const DynBitset& in) {
    const std::uint32_t n = w.n_vertices();
    std::vector<char> seen(n, 0);
    const bool always_inf = w.oracle().complement_always_infinite();
    for (std::uint32_t s = 0; s < n; ++s) {
        if (in.test(s) || seen[s]) continue;
        // flood one complement component
        std::vector<std::uint32_t> comp{s};
        seen[s] = 1;
        bool touches_rim = false;
        for (std::size_t h = 0; h < comp.size(); ++h) {
            auto v = comp[h];
            if (w.on_rim(v)) touches_rim = true;
            for (auto u : w.adj(v))
                if (!in.test(u) && !seen[u]) {
                    seen[u] = 1;
                    comp.push_back(u);
                }
        }
        if (!touches_rim) return HoleStatus::finite_hole;
        if (always_inf) continue;
        bool certified = false;
        for (auto v : comp) {
            for (const auto& ray : w.oracle().escape_rays(w.vertex(v))) {
                bool clear = true;
                for (std::uint64_t k = 1; k <= w.n_vertices() + 1; ++k) {
                    auto idx = w.try_index(ray.at(k));
                    if (!idx) break;  // left the window: nothing out there is interior
                    if (in.test(*idx)) {
                        clear = false;
                        break;
                    }
                }
                if (clear) {
                    certified = true;
                    break;
                }
            }
            if (certified) break;
        }
        if (!certified) return HoleStatus::ambiguous;
    }
    return HoleStatus::none;
}

inline std::vector<std::uint32_t> boundary_edge_ids(const Window& w, const DynBitset& in,
                                                    const std::vector<std::uint32_t>& set) {
    std::vector<std::uint32_t> out;
    for (auto v : set)
        for (auto e : w.incident_edges(v)) {
            auto [a, b] = w.edge(e);
            auto u = a == v ? b : a;
            if (!in.test(u)) out.push_back(e);
        }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Builds the contour with interior W, or nullopt if the complement of W has a
// finite hole. W and its external vertex boundary must avoid the rim.
inline std::optional<Contour> contour_from_interior(const Window& w,
                                                    std::vector<std::uint32_t> W) {
    if (W.empty()) throw DomainError("contour_from_interior: empty interior");
    std::sort(W.begin(), W.end());
    W.erase(std::unique(W.begin(), W.end()), W.end());
    DynBitset in(w.n_vertices());
    for (auto v : W) {
        if (w.on_rim(v))
            throw PaddingError("contour_from_interior: interior touches the window rim");
        in.set(v);
    }
    if (!detail::connected_subset(w, in, W[0], W.size()))
        throw DomainError("contour_from_interior: interior is not connected");
    switch (detail::find_holes(w, in)) {
        case detail::HoleStatus::finite_hole:
            return std::nullopt;
        case detail::HoleStatus::ambiguous:
            throw PaddingError(
                "contour_from_interior: a complement component touches the rim without an "
                "escape certificate; enlarge the window");
        case detail::HoleStatus::none:
            break;
    }
    Contour c;
    c.interior = std::move(W);
    c.edges = detail::boundary_edge_ids(w, in, c.interior);
    for (auto v : c.interior)
        for (auto e : w.incident_edges(v)) {
            auto [a, b] = w.edge(e);
            if (in.test(a) && in.test(b) && v == a) c.edge_interior.push_back(e);
        }
    std::sort(c.edge_interior.begin(), c.edge_interior.end());
    return c;
}

// gamma surrounds X iff X lies inside the interior.
inline bool surrounds(const Contour& c, const std::vector<std::uint32_t>& X) {
    if (X.empty()) throw DomainError("surrounds: X must be nonempty");
    for (auto x : X)
        if (!std::binary_search(c.interior.begin(), c.interior.end(), x)) return false;
    return true;
}

// gamma separates X iff X meets both the interior and its complement.
inline bool separates(const Contour& c, const std::vector<std::uint32_t>& X) {
    if (X.empty()) throw DomainError("separates: X must be nonempty");
    std::size_t inside = 0;
    for (auto x : X)
        if (std::binary_search(c.interior.begin(), c.interior.end(), x)) ++inside;
    return inside > 0 && inside < X.size();
}

struct ContourEnumResult {
    bool certified = false;           // completeness certificate held
    std::uint64_t total = 0;          // contours emitted
    std::uint64_t ambiguous_skipped = 0;  // candidates skipped in lower-bound mode
    std::map<std::uint64_t, std::uint64_t> count_by_size;
};

// Streams every contour gamma with must_surround <= interior and
// |gamma| <= max_boundary, each exactly once (contours are generated through
// their interiors). Completeness is certified when the family provides an
// anchored containment radius for max_boundary and the window covers it with
// one extra hop; otherwise the result carries certified=false and counts are
// lower bounds.
template <class Fn>
ContourEnumResult enumerate_contours(const Window& w, const std::vector<std::uint32_t>& must_surround,
                                     std::uint64_t max_boundary, Fn&& visit) {
    if (must_surround.empty()) throw DomainError("enumerate_contours: must_surround is empty");
    for (auto v : must_surround)
        if (w.on_rim(v)) throw DomainError("enumerate_contours: must_surround touches the rim");

    ContourEnumResult res;
    const std::uint32_t anchor = *std::min_element(must_surround.begin(), must_surround.end());
    auto reach = w.oracle().anchored_reach(w.vertex(anchor), max_boundary);
    res.certified = reach && w.dist_to_rim(anchor) > *reach;

    DynBitset eligible(w.n_vertices());
    for (std::uint32_t v = 0; v < w.n_vertices(); ++v)
        if (!w.on_rim(v)) eligible.set(v);

    EnumOptions opts;
    opts.eligible = &eligible;
    opts.boundary_budget = max_boundary;
    if (auto cap = w.oracle().interior_cap(max_boundary)) opts.size_budget = *cap;

    DynBitset scratch(w.n_vertices());
    enumerate_connected_sets(
        w, anchor, w.n_vertices(), /* size-capped via opts */
        [&](const std::vector<std::uint32_t>& s) {
            for (auto x : must_surround)
                if (std::find(s.begin(), s.end(), x) == s.end()) return;
            scratch.clear();
            for (auto v : s) scratch.set(v);
            auto b = detail::boundary_edge_ids(w, scratch, s);
            if (b.size() > max_boundary) return;
            switch (detail::find_holes(w, scratch)) {
                case detail::HoleStatus::finite_hole:
                    return;
                case detail::HoleStatus::ambiguous:
                    if (res.certified)
                        throw PaddingError(
                            "enumerate_contours: ambiguous complement component despite "
                            "certificate; enlarge the window");
                    ++res.ambiguous_skipped;
                    return;
                case detail::HoleStatus::none:
                    break;
            }
            Contour c;
            c.interior = s;
            std::sort(c.interior.begin(), c.interior.end());
            c.edges = std::move(b);
            ++res.total;
            ++res.count_by_size[c.edges.size()];
            visit(c);
        },
        opts);
    return res;
}

struct ContourDistanceResult {
    std::uint64_t distance = 0;
    bool certified = false;
    std::vector<VertexId> witness_interior;
    std::vector<Edge> witness_edges;
};

namespace detail {
inline void fill_witness(const Window& w, const Contour& c, ContourDistanceResult& out) {
    out.witness_interior.clear();
    out.witness_edges.clear();
    for (auto v : c.interior) out.witness_interior.push_back(w.vertex(v));
    for (auto e : c.edges)
        out.witness_edges.emplace_back(w.vertex(w.edge(e).a), w.vertex(w.edge(e).b));
}
}  // namespace detail

// Minimum |gamma| over contours surrounding both x and y, found by
// increasing-boundary-size enumeration. Each level must be certified complete
// (else the minimum could be missed) -- uncertifiable levels raise
// PaddingError asking for a larger window.
inline ContourDistanceResult contour_distance(const Window& w, const VertexId& x,
                                              const VertexId& y) {
    if (x == y) throw DomainError("contour_distance: x == y");
    std::vector<std::uint32_t> pair{w.index_of(x), w.index_of(y)};
    for (std::uint64_t m = 1; m <= w.n_edges(); ++m) {
        ContourDistanceResult out;
        std::uint64_t best = UINT64_MAX;
        auto res = enumerate_contours(w, pair, m, [&](const Contour& c) {
            if (c.edges.size() < best) {
                best = c.edges.size();
                detail::fill_witness(w, c, out);
            }
        });
        if (!res.certified)
            throw PaddingError("contour_distance: enumeration at boundary size " +
                               std::to_string(m) +
                               " is not certified complete; enlarge the window");
        if (best != UINT64_MAX) {
            out.distance = best;
            out.certified = true;
            return out;
        }
    }
    throw BudgetError("contour_distance: no surrounding contour within the window");
}

// Same search, but the window is rebuilt per boundary level from the family's
// anchored containment radius, so the caller never guesses padding.
inline ContourDistanceResult contour_distance_auto(const OraclePtr& g, const VertexId& x,
                                                   const VertexId& y,
                                                   std::uint64_t max_boundary = 64) {
    if (x == y) throw DomainError("contour_distance: x == y");
    auto d = path_distance(*g, x, y, 4096);
    if (!d) throw BudgetError("contour_distance: endpoints farther than 4096 apart");
    for (std::uint64_t m = 1; m <= max_boundary; ++m) {
        auto reach = g->anchored_reach(x, m);
        if (!reach)
            throw PaddingError("contour_distance: no anchored containment certificate at "
                               "boundary size " + std::to_string(m));
        const std::uint64_t radius = std::max<std::uint64_t>(*reach + 1, *d + 1);
        Window w = Window::ball(g, x, static_cast<std::uint32_t>(radius));
        ContourDistanceResult out;
        std::uint64_t best = UINT64_MAX;
        auto res = enumerate_contours(w, {w.index_of(x), w.index_of(y)}, m, [&](const Contour& c) {
            if (c.edges.size() < best) {
                best = c.edges.size();
                detail::fill_witness(w, c, out);
            }
        });
        if (!res.certified)
            throw PaddingError("contour_distance: level " + std::to_string(m) +
                               " not certified despite auto-sizing");
        if (best != UINT64_MAX) {
            out.distance = best;
            out.certified = true;
            return out;
        }
    }
    throw BudgetError("contour_distance: no surrounding contour with boundary <= " +
                      std::to_string(max_boundary));
}

struct FirstHitResult {
    std::vector<Edge> edges;                // distinct first-hit edges, sorted
    std::vector<std::uint64_t> ray_offsets; // k with edge = (ray(k), ray(k+1)), per edge
    std::uint64_t n_contours = 0;
    bool certified = false;
};

// r_n(x, ray): over all contours of size exactly n surrounding x, the first
// ray edge belonging to the contour. The ray is validated as a geodesic up to
// the deepest offset actually used.
inline FirstHitResult first_hit_edges(const Window& w, const VertexId& x, const Ray& ray,
                                      std::uint64_t n) {
    if (ray.at(0) != x) throw DomainError("first_hit_edges: ray must start at x");
    std::uint32_t xi = w.index_of(x);
    FirstHitResult res;
    std::map<Edge, std::uint64_t> hits;
    std::uint64_t deepest = 0;
    auto enum_res = enumerate_contours(w, {xi}, n, [&](const Contour& c) {
        if (c.edges.size() != n) return;
        ++res.n_contours;
        for (std::uint64_t k = 0;; ++k) {
            auto a = w.try_index(ray.at(k));
            auto b = w.try_index(ray.at(k + 1));
            if (!a || !b)
                throw PaddingError("first_hit_edges: ray left the window before meeting the "
                                   "contour; enlarge the window");
            auto e = w.edge_index(*a, *b);
            if (!e) throw OracleError("first_hit_edges: consecutive ray vertices not adjacent");
            if (std::binary_search(c.edges.begin(), c.edges.end(), *e)) {
                hits.emplace(Edge(w.vertex(*a), w.vertex(*b)), k);
                deepest = std::max(deepest, k + 1);
                break;
            }
        }
    });
    res.certified = enum_res.certified;
    if (deepest > 0 && !validate_geodesic_prefix(w.oracle(), ray, deepest))
        throw DomainError("first_hit_edges: ray fails the geodesic certificate");
    for (auto& [e, k] : hits) {
        res.edges.push_back(e);
        res.ray_offsets.push_back(k);
    }
    return res;
}

}  // namespace perco
