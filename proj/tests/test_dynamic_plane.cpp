#include <set>

#include "census.hpp"
#include "doctest.h"
#include "veerweave/dynamic_plane.hpp"
#include "veerweave/errors.hpp"

using namespace veerweave;

namespace {

std::vector<CycleRecord> nonbranch(const DualGraph& g, int max_len) {
    std::vector<CycleRecord> out;
    for (auto& c : enumerate_cycles(g, max_len))
        if (c.classification != TurnClass::Branch) out.push_back(c);
    return out;
}

// Vertices reachable from x by at most `depth` descending steps.
std::set<int> descend(DescendingSet& d, int x, int depth) {
    std::set<int> seen{x};
    std::vector<int> frontier{x};
    for (int k = 0; k < depth; ++k) {
        std::vector<int> next;
        for (int y : frontier)
            for (int z : {d.left(y), d.right(y)})
                if (seen.insert(z).second) next.push_back(z);
        frontier = std::move(next);
    }
    return seen;
}

int delta_of(const VeeringTriangulation& tri) { return params(tri, BoundaryData(tri)).delta; }

}  // namespace

TEST_CASE("branch cycles have no dynamic plane") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const auto g = build_dual_graph(tri);
        std::vector<int> walk{0};
        std::vector<int> pos(static_cast<std::size_t>(g.num_edges()), -1);
        pos[0] = 0;
        for (;;) {
            int next = -1;
            for (int e = 0; e < g.num_edges() && next < 0; ++e)
                if (g.tail[static_cast<std::size_t>(e)] == g.head[static_cast<std::size_t>(walk.back())] && g.branching(walk.back(), e)) next = e;
            REQUIRE(next >= 0);
            if (pos[static_cast<std::size_t>(next)] >= 0) {
                walk.erase(walk.begin(), walk.begin() + pos[static_cast<std::size_t>(next)]);
                break;
            }
            pos[static_cast<std::size_t>(next)] = static_cast<int>(walk.size());
            walk.push_back(next);
        }
        const auto c = make_cycle(g, walk);
        REQUIRE(c.classification == TurnClass::Branch);
        CHECK_THROWS_AS(build_window(tri, c, 2), StageError);
    }
}

TEST_CASE("window layers nest") {
    for (auto sig : {census::kFig8, census::kThree}) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const int delta = delta_of(tri);
        const auto g = build_dual_graph(tri);
        for (const auto& c : nonbranch(g, 3)) {
            auto w = build_window(tri, c, 2);
            auto& d = *w.plane;
            const int R = w.layers();
            const int L = c.length();
            REQUIRE(R == 2 * L);
            CHECK(static_cast<int>(w.step_left.size()) == R);
            CHECK(static_cast<int>(w.boundary.size()) == R + 1);
            for (int i = 0; i <= R; ++i) {
                const int v = w.lifted[static_cast<std::size_t>(i)];
                CHECK(w.vertex_at(i, 0) == v);
                CHECK(d.node(v).tet == c.vertices[static_cast<std::size_t>(i % L)]);
            }
            for (int i = 0; i < R; ++i) {
                const int up = w.lifted[static_cast<std::size_t>(i) + 1];
                const int down = w.step_left[static_cast<std::size_t>(i)] ? d.left(up) : d.right(up);
                CHECK(down == w.lifted[static_cast<std::size_t>(i)]);
                const auto lower = descend(d, w.lifted[static_cast<std::size_t>(i)], 3);
                const auto upper = descend(d, up, 4);
                for (int x : lower) CHECK(upper.count(x) == 1);
                for (const auto& ch : w.chains[static_cast<std::size_t>(i)]) CHECK(ch.length() <= delta - 1);
            }
        }
    }
}

TEST_CASE("phi path from the lifted vertex over one layer") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const auto g = build_dual_graph(tri);
    for (const auto& c : nonbranch(g, 4)) {
        auto w = build_window(tri, c, 2);
        const int R = w.layers();
        const PhiPath p = follow_phi_path(w, 0, R - 1);
        REQUIRE(p.exit_index.size() >= 2);
        CHECK(p.exit_index[0] == 0);
        CHECK(p.exit_offset[0] == 0);
        CHECK(p.exit_index[1] <= 1);
        CHECK(std::abs(p.exit_offset[1]) <= 1);
        CHECK(p.vertices.front() == w.lifted[static_cast<std::size_t>(R - 1)]);
        CHECK(static_cast<int>(p.vertices.size()) == p.length() + 1);
    }
}

TEST_CASE("h lengths and flow graph complexity") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const int delta = delta_of(tri);
    const auto g = build_dual_graph(tri);
    int ab = 0;
    for (const auto& c : nonbranch(g, 6)) {
        const long long L = c.length();
        const auto h = compute_h(tri, c);
        for (const auto& x : h.cycles) {
            CHECK(x.length() * (delta * delta - delta + 1) >= L);
            CHECK(x.length() <= (2 * L - 1) * L);
        }
        if (c.classification == TurnClass::AB && h.cycles.size() > 1) {
            ++ab;
            for (const auto& x : h.cycles) CHECK(x.length() == h.cycles.front().length());
        }
        auto e2 = c.edges;
        e2.insert(e2.end(), c.edges.begin(), c.edges.end());
        const auto h2 = compute_h(tri, make_cycle(g, e2));
        const auto cx = flow_graph_complexity(tri, c);
        REQUIRE(cx.has_value() == !h2.cycles.empty());
        if (!cx) continue;
        CHECK(*cx == boost::rational<long long>(h2.cycles.front().length(), 2));
        if (!h.orientation_reversing && h.cycles.size() == 1) CHECK(*cx == boost::rational<long long>(h.cycles.front().length()));
        CHECK(2 * (delta * delta - delta + 1) * *cx >= boost::rational<long long>(L));
        CHECK(boost::rational<long long>(L) <= 2 * delta * delta * *cx);
    }
    MESSAGE("AB cycles with several images: " << ab);
}

TEST_CASE("complexity bounds") {
    using Q = boost::rational<long long>;
    const auto b = complexity_bounds(2, Q(3, 2));
    CHECK(b.faces == Q(12));
    CHECK(b.squares == Q(12));
    CHECK(b.edge_rectangles == Q(192));
    CHECK(b.tet_rectangles == Q(768));
}
