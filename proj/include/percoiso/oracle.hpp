#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "percoiso/errors.hpp"
#include "percoiso/vertex.hpp"

namespace perco {

// Lazily generated infinite vertex sequence. at(0) is the origin. Rays used
// as geodesics carry no proof by themselves; callers validate the prefix they
// need (see validate_geodesic_prefix in window.hpp).
struct Ray {
    VertexId origin;
    std::function<VertexId(std::uint64_t)> at;  // at(0) == origin
    std::string label;
};

// Pure adjacency oracle for an infinite bounded-degree graph. Implementations
// must be deterministic (same input, same output) and symmetric, and are
// immutable after construction, hence freely shareable across threads.
class GraphOracle {
public:
    virtual ~GraphOracle() = default;

    virtual const std::string& family() const = 0;
    virtual int max_degree() const = 0;
    virtual VertexId root() const = 0;
    virtual bool contains(const VertexId& v) const = 0;
    virtual std::vector<VertexId> neighbors(const VertexId& v) const = 0;
    virtual bool vertex_transitive() const = 0;

    virtual bool has_bigeodesic() const { return false; }
    virtual std::pair<Ray, Ray> bigeodesic_rays() const {
        throw UnsupportedError(family() + ": no declared bi-geodesic ray pair");
    }

    // Certified bound: every connected W with |boundary(W)| == n has |W| <= cap.
    // nullopt means the family offers no such certificate.
    virtual std::optional<std::uint64_t> interior_cap(std::uint64_t boundary_size) const = 0;

    // Certified containment radius: every connected W containing `anchor` with
    // |boundary(W)| <= boundary_size lies inside ball(anchor, reach). A value
    // of 0 with no candidate sets at all is legitimate (vacuous completeness).
    // Default derives it from interior_cap.
    virtual std::optional<std::uint64_t> anchored_reach(const VertexId& /*anchor*/,
                                                        std::uint64_t boundary_size) const {
        auto cap = interior_cap(boundary_size);
        if (!cap) return std::nullopt;
        return *cap == 0 ? 0 : *cap - 1;
    }

    // True when deleting any finite connected set leaves only infinite
    // components (trees, the line). Lets hole checks skip ray certificates.
    virtual bool complement_always_infinite() const { return false; }

    // A few infinite, non-self-intersecting rays from v, used to certify that
    // a complement component reaches infinity. May be empty.
    virtual std::vector<Ray> escape_rays(const VertexId& v) const = 0;

    virtual std::string format_vertex(const VertexId& v) const = 0;
    virtual VertexId parse_vertex(const std::string& s) const = 0;
};

using OraclePtr = std::shared_ptr<const GraphOracle>;

}  // namespace perco
