#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "percoiso/enumerate.hpp"
#include "percoiso/families.hpp"
#include "percoiso/isoperimetry.hpp"

using namespace perco;

TEST_CASE("family spec parsing") {
    CHECK(make_family("zd:2")->max_degree() == 4);
    CHECK(make_family("zd:3")->max_degree() == 6);
    CHECK(make_family("line")->max_degree() == 2);
    CHECK(make_family("tree:3")->max_degree() == 3);
    CHECK(make_family("tree:5")->max_degree() == 5);
    CHECK(make_family("wedge:ln")->max_degree() == 4);
    CHECK(make_family("strip:2")->max_degree() == 3);
    CHECK_THROWS_AS(make_family("zd:x"), ParseError);
    CHECK_THROWS_AS(make_family("zd"), ParseError);
    CHECK_THROWS_AS(make_family("wedge:log10"), ParseError);
    CHECK_THROWS_AS(make_family("dl:3,3"), ParseError);
    CHECK_THROWS_AS(make_family("nosuch"), ParseError);
    try {
        make_family("tree:bad");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);  // parameter position reported
    }
}

TEST_CASE("vertex token round trips") {
    for (const char* spec : {"zd:2", "line", "tree:3", "wedge:ln", "dl:2,2", "strip:2"}) {
        auto g = make_family(spec);
        auto w = Window::ball(g, g->root(), 3);
        for (std::uint32_t i = 0; i < w.n_vertices(); ++i) {
            auto v = w.vertex(i);
            CHECK(g->parse_vertex(g->format_vertex(v)) == v);
        }
    }
}

TEST_CASE("wedge membership: exact thresholds") {
    // EXP_CEIL[k] = ceil(e^k); spot values recomputed with 60-digit arithmetic
    CHECK(detail::EXP_CEIL[0] == 1);
    CHECK(detail::EXP_CEIL[1] == 3);
    CHECK(detail::EXP_CEIL[2] == 8);
    CHECK(detail::EXP_CEIL[5] == 149);
    CHECK(detail::EXP_CEIL[10] == 22027);
    CHECK(detail::EXP_CEIL[13] == 442414);
    CHECK(detail::EXP_CEIL[20] == 485165196LL);
    CHECK(detail::EXP_CEIL[43] == 4727839468229346562LL);

    // heights jump exactly where the table says
    for (int k = 1; k <= 13; ++k) {
        std::int64_t m = detail::EXP_CEIL[k];
        CHECK(detail::log_height(m - 2) == k - 1);
        CHECK(detail::log_height(m - 1) == k);
    }

    // agreement with long-double evaluation over the first million columns
    for (std::int64_t x = 0; x <= 1000000; x += 997) {
        long double l = logl(1.0L + static_cast<long double>(x));
        CHECK(detail::log_height(x) == static_cast<int>(floorl(l + 1e-15L)));
    }
}

TEST_CASE("wedge neighbors near the tip") {
    auto g = make_family("wedge:ln");
    auto nb0 = g->neighbors(g->parse_vertex("0,0"));
    REQUIRE(nb0.size() == 1);
    CHECK(g->format_vertex(nb0[0]) == "1,0");
    // column 2 is the first with height 1
    CHECK(g->contains(g->parse_vertex("2,1")));
    CHECK_FALSE(g->contains(VertexId{1, 1}));
    CHECK_FALSE(g->contains(VertexId{-1, 0}));
}

TEST_CASE("tree root has k distinct neighbors, symmetric") {
    auto g = make_family("tree:3");
    auto nbrs = g->neighbors(g->root());
    REQUIRE(nbrs.size() == 3);
    std::set<VertexId> uniq(nbrs.begin(), nbrs.end());
    CHECK(uniq.size() == 3);
    for (auto& u : nbrs) {
        auto back = g->neighbors(u);
        CHECK(std::count(back.begin(), back.end(), g->root()) == 1);
    }
}

TEST_CASE("bigeodesic verification") {
    CHECK(verify_bigeodesic_prefix(*make_family("zd:2"), 5));
    CHECK(verify_bigeodesic_prefix(*make_family("line"), 6));
    CHECK(verify_bigeodesic_prefix(*make_family("tree:3"), 5));
    CHECK(verify_bigeodesic_prefix(*make_family("strip:2"), 5));
    CHECK(verify_bigeodesic_prefix(*make_family("dl:2,2"), 4));
}

TEST_CASE("the wedge has no bi-geodesic through the tip") {
    auto g = make_family("wedge:ln");
    CHECK_FALSE(g->has_bigeodesic());
    CHECK_THROWS_AS(g->bigeodesic_rays(), UnsupportedError);
    // any two rays from (0,0) share the single first edge, so the cross
    // condition d(x_1, y_1) = 2 already fails
    Ray a{g->parse_vertex("0,0"),
          [g](std::uint64_t k) { return g->parse_vertex(std::to_string(k) + ",0"); }, "+row0"};
    Ray b = a;
    CHECK_FALSE(verify_bigeodesic_prefix(*g, a, b, 3));
}

TEST_CASE("interior caps") {
    auto z2 = make_family("zd:2");
    CHECK(z2->interior_cap(8).value() == 4);     // perimeter-8 polyominoes have <= 4 cells
    CHECK(z2->interior_cap(4).value() == 1);
    CHECK(z2->interior_cap(3).value() == 0);     // below the singleton boundary
    auto t3 = make_family("tree:3");
    CHECK(t3->interior_cap(8).value() == 6);     // n - 2
    CHECK(t3->interior_cap(3).value() == 1);
    auto t4 = make_family("tree:4");
    CHECK(t4->interior_cap(10).value() == 4);    // (n-2)/(k-2)
    CHECK_FALSE(make_family("line")->interior_cap(2).has_value());
    CHECK_FALSE(make_family("wedge:ln")->interior_cap(6).has_value());
    CHECK_FALSE(make_family("dl:2,2")->interior_cap(6).has_value());
}

TEST_CASE("tree boundary identity |b| = (k-2)|W| + 2") {
    for (int k : {3, 4}) {
        auto g = make_family("tree:" + std::to_string(k));
        auto w = Window::ball(g, g->root(), 6);
        DynBitset scratch(w.n_vertices());
        enumerate_connected_sets(w, w.index_of(g->root()), 4,
                                 [&](const std::vector<std::uint32_t>& s) {
                                     auto b = detail::boundary_size_of(w, s, scratch);
                                     CHECK(b == std::uint64_t(k - 2) * s.size() + 2);
                                 });
    }
}

TEST_CASE("DL(2,2): degree, height bookkeeping, symmetry") {
    auto g = make_family("dl:2,2");
    auto w = Window::ball(g, g->root(), 4);
    CHECK(w.n_vertices() > 50);
    for (std::uint32_t i = 0; i < w.n_vertices(); ++i) {
        auto v = w.vertex(i);
        auto nbrs = g->neighbors(v);
        CHECK(nbrs.size() == 4);  // every vertex has degree exactly 4
        std::set<VertexId> uniq(nbrs.begin(), nbrs.end());
        CHECK(uniq.size() == 4);
        for (auto& u : nbrs) {
            auto [tu, tv] = DiestelLeaderOracle::decode(u);
            CHECK(tu.h + tv.h == 0);  // heights sum to zero on every neighbor
            auto back = g->neighbors(u);
            CHECK(std::count(back.begin(), back.end(), v) == 1);
        }
    }
}

TEST_CASE("anchored reach certificates") {
    auto z2 = make_family("zd:2");
    CHECK(z2->anchored_reach(z2->root(), 8).value() == 3);  // cap 4 -> radius 3
    auto line = make_family("line");
    CHECK(line->anchored_reach(line->root(), 1).value() == 0);  // no set has boundary < 2
    CHECK_FALSE(line->anchored_reach(line->root(), 2).has_value());
    auto wg = make_family("wedge:ln");
    // boundary 1 around the tip: only column prefixes up to height 0
    auto r1 = wg->anchored_reach(wg->root(), 1);
    REQUIRE(r1.has_value());
    CHECK(*r1 >= 2);
    auto r4 = wg->anchored_reach(wg->root(), 4);
    REQUIRE(r4.has_value());
    CHECK(*r4 >= 53);  // must cover full columns out to ceil(e^4) - 2
    auto dl = make_family("dl:2,2");
    CHECK(dl->anchored_reach(dl->root(), 3).value() == 0);
    CHECK_FALSE(dl->anchored_reach(dl->root(), 4).has_value());
}

TEST_CASE("window descriptors") {
    auto line = make_family("line");
    auto w = window_from_descriptor(line, "path:4");
    CHECK(w.n_vertices() == 4);
    CHECK(w.n_edges() == 3);
    CHECK(w.rim().size() == 2);

    auto z2 = make_family("zd:2");
    auto box = window_from_descriptor(z2, "box:-1,-1:2,1");
    CHECK(box.n_vertices() == 12);

    auto wg = make_family("wedge:ln");
    auto cols = window_from_descriptor(wg, "cols:0:5");
    CHECK(cols.n_vertices() == 10);  // heights 0,0,1,1,1,1
    CHECK(cols.n_edges() == 12);
}
