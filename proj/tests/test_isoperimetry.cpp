#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "percoiso/enumerate.hpp"
#include "percoiso/families.hpp"
#include "percoiso/isoperimetry.hpp"

using namespace perco;

namespace {

// independent oracle for the connector count: try all edge subsets of E[W]
std::uint64_t brute_connector(const Window& w, const std::vector<std::uint32_t>& W,
                              const std::vector<std::uint32_t>& terminals) {
    if (terminals.size() <= 1) return 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (auto v : W)
        for (auto u : w.adj(v))
            if (u > v && std::find(W.begin(), W.end(), u) != W.end()) edges.push_back({v, u});
    REQUIRE(edges.size() <= 22);
    std::uint64_t best = UINT64_MAX;
    for (std::uint64_t m = 0; m < (1ull << edges.size()); ++m) {
        std::uint64_t k = std::popcount(m);
        if (k >= best) continue;
        // union-find over chosen edges
        std::map<std::uint32_t, std::uint32_t> parent;
        for (auto v : W) parent[v] = v;
        std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (m >> e & 1) parent[find(edges[e].first)] = find(edges[e].second);
        bool ok = true;
        for (auto t : terminals)
            if (find(t) != find(terminals[0])) ok = false;
        if (ok) best = k;
    }
    return best;
}

}  // namespace

TEST_CASE("boundary_report on Z^2") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 5);
    auto at = [&](std::int64_t x, std::int64_t y) { return w.index_of(VertexId{x, y}); };

    SECTION("singleton") {
        auto r = boundary_report(w, {at(0, 0)});
        CHECK(r.boundary_edges.size() == 4);
        CHECK(r.ell == 0);
        CHECK(r.tree_distance == 4);
        CHECK(r.int_vertex_boundary.size() == 1);
        CHECK(r.ext_vertex_boundary.size() == 4);
        CHECK(r.closure.size() == 5);
        CHECK(r.diam == 0);
        CHECK(r.boundary_connected);  // all four edges share the vertex
        CHECK(r.induced_is_tree);
    }
    SECTION("2x2 square") {
        auto r = boundary_report(w, {at(0, 0), at(1, 0), at(0, 1), at(1, 1)});
        CHECK(r.boundary_edges.size() == 8);
        CHECK(r.int_vertex_boundary.size() == 4);
        CHECK(r.ell == 3);  // three edges of the 4-cycle
        CHECK(r.tree_distance == 11);
        CHECK(r.diam == 2);
        CHECK_FALSE(r.boundary_connected);
        CHECK_FALSE(r.induced_is_tree);
    }
    SECTION("rim contact is a padding error") {
        CHECK_THROWS_AS(boundary_report(w, {w.index_of(VertexId{5, 0})}), PaddingError);
    }
    SECTION("disconnected set is a domain error") {
        CHECK_THROWS_AS(boundary_report(w, {at(0, 0), at(1, 1)}), DomainError);
    }
}

TEST_CASE("boundary_report on the 3-regular tree") {
    auto g = make_family("tree:3");
    auto w = Window::ball(g, g->root(), 5);
    auto root = w.index_of(g->root());
    auto child = w.index_of(g->parse_vertex("r.0"));
    auto grand = w.index_of(g->parse_vertex("r.0.0"));
    auto r = boundary_report(w, {root, child, grand});
    CHECK(r.boundary_edges.size() == 5);  // (k-2)|W|+2
    CHECK(r.ell == 2);                    // forced |W|-1 on a tree
    CHECK(r.tree_distance == 7);
}

TEST_CASE("connector count matches the brute-force oracle") {
    std::mt19937 rng(20240811);
    for (const char* spec : {"zd:2", "wedge:ln", "tree:3", "strip:2"}) {
        auto g = make_family(spec);
        auto w = Window::ball(g, g->root(), 7);
        DynBitset eligible(w.n_vertices());
        for (std::uint32_t v = 0; v < w.n_vertices(); ++v)
            if (!w.on_rim(v)) eligible.set(v);
        EnumOptions opts;
        opts.eligible = &eligible;
        std::vector<std::vector<std::uint32_t>> pool;
        enumerate_connected_sets(
            w, w.index_of(g->root()), 6,
            [&](const std::vector<std::uint32_t>& s) {
                if (pool.size() < 4000) pool.push_back(s);
            },
            opts);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::size_t tested = 0;
        for (auto& s : pool) {
            if (tested >= 40) break;
            auto rep = boundary_report(w, s, false);
            auto brute = brute_connector(w, rep.set, rep.int_vertex_boundary);
            INFO(spec << " set size " << s.size());
            CHECK(rep.ell == brute);
            ++tested;
        }
    }
}

TEST_CASE("estimate_R examples") {
    SECTION("tree:3 up to size 3 gives 5/7 exactly") {
        auto g = make_family("tree:3");
        auto w = Window::ball(g, g->root(), 6);
        auto e = estimate_R(w, 3);
        CHECK(e.num == 5);
        CHECK(e.den == 7);
        CHECK(e.value == Catch::Approx(5.0 / 7.0).epsilon(1e-15));
    }
    SECTION("zd:2 size 1 gives 1") {
        auto g = make_family("zd:2");
        auto w = Window::ball(g, g->root(), 3);
        auto e = estimate_R(w, 1);
        CHECK(e.value == 1.0);
    }
    SECTION("zd:2 up to size 4 gives 8/11 at the square") {
        auto g = make_family("zd:2");
        auto w = Window::ball(g, g->root(), 10);
        auto e = estimate_R(w, 4);
        CHECK(e.num == 8);
        CHECK(e.den == 11);
        CHECK(e.minimizer.size() == 4);
    }
}

TEST_CASE("estimate_P examples") {
    SECTION("line up to size 10: 2/ln 9") {
        auto g = make_family("line");
        auto w = Window::ball(g, g->root(), 22);
        auto e = estimate_P(w, 10);
        CHECK(e.num == 2);
        CHECK(e.den == 9);
        CHECK(e.value == Catch::Approx(2.0 / std::log(9.0)).epsilon(1e-12));
    }
    SECTION("zd:2 up to size 4: 10/ln 3") {
        auto g = make_family("zd:2");
        auto w = Window::ball(g, g->root(), 10);
        auto e = estimate_P(w, 4);
        CHECK(e.num == 10);
        CHECK(e.den == 3);
        CHECK(e.value == Catch::Approx(10.0 / std::log(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("estimate_C examples") {
    auto g = make_family("zd:2");
    SECTION("size 4: the 2x2 square, ratio 2") {
        auto w = Window::ball(g, g->root(), 10);
        auto e = estimate_C(w, 4);
        CHECK(e.num == 8);
        CHECK(e.den == 4);
    }
    SECTION("size 9: the 3x3 square, ratio 4/3") {
        auto w = Window::ball(g, g->root(), 20);
        auto e = estimate_C(w, 9);
        CHECK(e.num == 12);
        CHECK(e.den == 9);
        CHECK(e.value == Catch::Approx(4.0 / 3.0).epsilon(1e-15));
    }
    SECTION("tree:3: largest set wins, (s+2)/s") {
        auto t = make_family("tree:3");
        auto w = Window::ball(t, t->root(), 6);
        auto e = estimate_C(w, 3);
        CHECK(e.num == 5);
        CHECK(e.den == 3);
    }
}

TEST_CASE("estimates are nonincreasing in max_size") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 12);
    double prev_r = 2, prev_c = 1e9, prev_p = 1e9;
    for (std::uint32_t s = 1; s <= 5; ++s) {
        auto r = estimate_R(w, s);
        CHECK(r.value <= prev_r + 1e-15);
        prev_r = r.value;
        auto c = estimate_C(w, s);
        CHECK(c.value <= prev_c + 1e-15);
        prev_c = c.value;
        if (s >= 3) {
            auto p = estimate_P(w, s);
            CHECK(p.value <= prev_p + 1e-15);
            prev_p = p.value;
        }
    }
}

TEST_CASE("tree R estimate follows ((k-2)s+2)/((k-1)s+1)") {
    for (int k : {3, 4}) {
        auto g = make_family("tree:" + std::to_string(k));
        auto w = Window::ball(g, g->root(), 9);
        for (std::uint32_t s : {1u, 2u, 3u, 4u}) {
            double expect = 2.0;
            for (std::uint32_t t = 1; t <= s; ++t)
                expect = std::min(expect, double((k - 2) * t + 2) / double((k - 1) * t + 1));
            auto e = estimate_R(w, s);
            INFO("k=" << k << " s=" << s);
            CHECK(e.value == Catch::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("check_constant_inequalities") {
    auto g = make_family("zd:2");
    auto w = Window::ball(g, g->root(), 5);
    auto at = [&](std::int64_t x, std::int64_t y) { return w.index_of(VertexId{x, y}); };
    std::vector<BoundaryReport> reports;
    reports.push_back(boundary_report(w, {at(0, 0)}));
    reports.push_back(boundary_report(w, {at(0, 0), at(1, 0), at(0, 1), at(1, 1)}));
    CHECK(check_constant_inequalities(reports).empty());

    // constructed failure: d^t below the boundary size
    auto bad = reports[0];
    bad.tree_distance = 3;
    reports.push_back(bad);
    auto viol = check_constant_inequalities(reports);
    REQUIRE(viol.size() == 1);
    CHECK(viol[0].report_index == 2);
    CHECK(viol[0].kind == "bracket-lower");

    // manual t-certificate: d^t <= (1+t)|b| holds on Z^2 sets with t = 2
    CHECK(check_constant_inequalities({reports[0], reports[1]}, 2.0).empty());
}

TEST_CASE("per-set Cheeger ratio inequality holds for every enumerated set") {
    for (const char* spec : {"zd:2", "tree:3", "wedge:ln"}) {
        auto g = make_family(spec);
        auto w = Window::ball(g, g->root(), std::string(spec) == "wedge:ln" ? 14 : 8);
        DynBitset eligible(w.n_vertices());
        for (std::uint32_t v = 0; v < w.n_vertices(); ++v)
            if (!w.on_rim(v)) eligible.set(v);
        EnumOptions opts;
        opts.eligible = &eligible;
        std::uint64_t checked = 0;
        enumerate_connected_sets(
            w, w.index_of(g->root()), 5,
            [&](const std::vector<std::uint32_t>& s) {
                auto r = boundary_report(w, s, false);
                double b = static_cast<double>(r.boundary_edges.size());
                double ratio_r = b / static_cast<double>(r.tree_distance);
                double c = b / static_cast<double>(s.size());
                CHECK(ratio_r >= c / (c + 1) - 1e-12);
                ++checked;
            },
            opts);
        // the wedge tip admits only 9 anchored sets of size <= 5
        CHECK(checked >= 9);
    }
}
