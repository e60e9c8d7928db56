#pragma once
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace perco {

// Canonical vertex token: a short sequence of integers whose meaning is
// family specific (coordinates, tree addresses, ...). Equality and the
// lexicographic order are total, which duplicate-free enumeration relies on.
struct VertexId {
    std::vector<std::int64_t> tok;

    VertexId() = default;
    explicit VertexId(std::vector<std::int64_t> t) : tok(std::move(t)) {}
    VertexId(std::initializer_list<std::int64_t> t) : tok(t) {}

    friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

// Unordered edge, stored with the smaller endpoint first.
struct Edge {
    VertexId a, b;

    Edge() = default;
    Edge(VertexId x, VertexId y) {
        if (y < x) std::swap(x, y);
        a = std::move(x);
        b = std::move(y);
    }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct VertexIdHash {
    std::size_t operator()(const VertexId& v) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (auto x : v.tok) {
            h ^= static_cast<std::uint64_t>(x);
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace perco
