#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "percoiso/enumerate.hpp"
#include "percoiso/families.hpp"
#include "percoiso/window.hpp"

using namespace perco;

TEST_CASE("balls on Z^2") {
    auto g = make_family("zd:2");
    auto w0 = Window::ball(g, g->root(), 0);
    CHECK(w0.n_vertices() == 1);
    CHECK(w0.n_edges() == 0);
    CHECK(w0.rim().size() == 1);  // the center itself has outside neighbors

    auto w1 = Window::ball(g, g->root(), 1);
    CHECK(w1.n_vertices() == 5);
    CHECK(w1.n_edges() == 4);

    auto w2 = Window::ball(g, g->root(), 2);
    // ball monotonicity
    for (std::uint32_t i = 0; i < w1.n_vertices(); ++i) CHECK(w2.contains(w1.vertex(i)));
}

TEST_CASE("ball on the 3-regular tree") {
    auto g = make_family("tree:3");
    auto w = Window::ball(g, g->root(), 2);
    CHECK(w.n_vertices() == 10);  // 1 + 3 + 6
    CHECK(w.n_edges() == 9);
}

TEST_CASE("path_distance") {
    auto g = make_family("zd:2");
    CHECK(path_distance(*g, g->parse_vertex("0,0"), g->parse_vertex("3,4"), 10) == 7);
    CHECK(path_distance(*g, g->parse_vertex("2,2"), g->parse_vertex("2,2"), 0) == 0);
    CHECK_FALSE(path_distance(*g, g->parse_vertex("0,0"), g->parse_vertex("3,4"), 6).has_value());

    auto wg = make_family("wedge:ln");
    CHECK(path_distance(*wg, wg->parse_vertex("0,0"), wg->parse_vertex("5,1"), 10) == 6);
}

TEST_CASE("neighbor symmetry and degree bound on all families") {
    for (const char* spec :
         {"zd:2", "zd:3", "line", "tree:3", "tree:4", "wedge:ln", "dl:2,2", "strip:2", "strip:3"}) {
        auto g = make_family(spec);
        INFO(spec);
        // windows verify symmetry and the degree bound at construction
        auto w = Window::ball(g, g->root(), 3);
        CHECK(w.n_vertices() >= 4);
        for (std::uint32_t v = 0; v < w.n_vertices(); ++v)
            CHECK(g->neighbors(w.vertex(v)).size() <= static_cast<std::size_t>(g->max_degree()));
    }
}

TEST_CASE("anchored enumeration counts on Z^2") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 5);
    auto origin = w.index_of(g->root());

    std::uint64_t count1 = 0;
    enumerate_connected_sets(w, origin, 1, [&](const std::vector<std::uint32_t>&) { ++count1; });
    CHECK(count1 == 1);

    std::uint64_t count2 = 0;
    enumerate_connected_sets(w, origin, 2, [&](const std::vector<std::uint32_t>&) { ++count2; });
    CHECK(count2 == 5);  // singleton + 4 dominoes

    std::uint64_t exactly3 = 0;
    enumerate_connected_sets(w, origin, 3, [&](const std::vector<std::uint32_t>& s) {
        if (s.size() == 3) ++exactly3;
    });
    CHECK(exactly3 == 18);  // 3 x 6 fixed trominoes
}

TEST_CASE("enumeration agrees with powerset filtering on small windows") {
    // independent oracle: filter all subsets of a <= 16 vertex window
    for (const char* spec : {"zd:2", "wedge:ln", "tree:3", "line"}) {
        auto g = make_family(spec);
        std::uint32_t radius = std::string(spec) == "zd:2" ? 1 : 3;
        auto w = Window::ball(g, g->root(), radius);
        while (w.n_vertices() > 16) {
            --radius;
            w = Window::ball(g, g->root(), radius);
        }
        INFO(spec << " radius " << radius << " n=" << w.n_vertices());
        auto anchor = w.index_of(g->root());

        std::set<std::vector<std::uint32_t>> naive;
        const std::uint32_t n = w.n_vertices();
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (!(mask >> anchor & 1)) continue;
            std::vector<std::uint32_t> s;
            for (std::uint32_t v = 0; v < n; ++v)
                if (mask >> v & 1) s.push_back(v);
            if (s.size() <= 4 && is_connected(w, s)) naive.insert(s);
        }
        std::set<std::vector<std::uint32_t>> got;
        enumerate_connected_sets(w, anchor, 4, [&](const std::vector<std::uint32_t>& s) {
            auto v = s;
            std::sort(v.begin(), v.end());
            CHECK(got.insert(v).second);  // duplicate-free
        });
        CHECK(got == naive);
    }
}

TEST_CASE("unanchored enumeration is duplicate-free and complete") {
    auto g = make_family("line");
    auto w = Window::ball(g, g->root(), 4);  // 9 vertices
    std::set<std::vector<std::uint32_t>> got;
    enumerate_connected_sets(w, std::nullopt, 3, [&](const std::vector<std::uint32_t>& s) {
        auto v = s;
        std::sort(v.begin(), v.end());
        CHECK(got.insert(v).second);
    });
    // intervals of length 1..3 inside 9 vertices: 9 + 8 + 7
    CHECK(got.size() == 24);
}

TEST_CASE("enumeration budget errors") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 1);
    CHECK_THROWS_AS(enumerate_connected_sets(w, w.index_of(g->root()), 99,
                                             [](const std::vector<std::uint32_t>&) {}),
                    BudgetError);
    EnumOptions opts;
    opts.node_budget = 3;
    CHECK_THROWS_AS(enumerate_connected_sets(
                        w, w.index_of(g->root()), 5, [](const std::vector<std::uint32_t>&) {},
                        opts),
                    BudgetError);
}

TEST_CASE("is_connected and diameter") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 4);
    auto at = [&](std::int64_t x, std::int64_t y) { return w.index_of(VertexId{x, y}); };

    CHECK(is_connected(w, {at(0, 0)}));
    CHECK(diameter(w, {at(0, 0)}) == 0);

    // diagonal pair: disconnected as an induced set, oracle distance 2
    CHECK_FALSE(is_connected(w, {at(0, 0), at(1, 1)}));
    CHECK(diameter(w, {at(0, 0), at(1, 1)}) == 2);

    CHECK(is_connected(w, {at(0, 0), at(1, 0), at(0, 1), at(1, 1)}));
    CHECK(diameter(w, {at(0, 0), at(1, 0), at(0, 1), at(1, 1)}) == 2);
}

TEST_CASE("diameter refuses windows that cannot certify") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 2);
    // both endpoints sit on the rim; a shortcut outside cannot be excluded
    auto a = w.index_of(VertexId{-2, 0});
    auto b = w.index_of(VertexId{2, 0});
    CHECK_THROWS_AS(diameter(w, {a, b}), PaddingError);
}

TEST_CASE("window rim is computed from the oracle") {
    auto g = make_family("wedge:ln");
    auto w = Window::ball(g, g->root(), 4);
    for (std::uint32_t v = 0; v < w.n_vertices(); ++v) {
        bool has_outside = false;
        for (auto& u : g->neighbors(w.vertex(v)))
            if (!w.contains(u)) has_outside = true;
        CHECK(w.on_rim(v) == has_outside);
    }
}
