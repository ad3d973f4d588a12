#include <set>

#include "census.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "veerweave/boundary.hpp"
#include "veerweave/errors.hpp"
#include "veerweave/triangulation.hpp"

using namespace veerweave;

namespace {

oracle::Tri as_oracle(const VeeringTriangulation& tri) { return oracle::from_records(tri.raw().tets); }

std::string axiom_of(const RawTriangulation& raw) {
    auto r = VeeringTriangulation::check(raw);
    if (auto* e = std::get_if<ValidationError>(&r)) return e->axiom();
    return "";
}

}  // namespace

TEST_CASE("census signatures round-trip through the oracle encoder") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        CHECK(oracle::taut_isosig(as_oracle(tri)) == sig);
    }
}

TEST_CASE("native documents round-trip") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const std::string doc = emit_native(tri);
        const auto back = parse_native(doc);
        CHECK(emit_native(back) == doc);
        CHECK(oracle::taut_isosig(as_oracle(back)) == sig);
    }
}

TEST_CASE("parameters agree with the vertex-link oracle") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const BoundaryData bd(tri);
        const Params p = params(tri, bd);
        const auto o = oracle::parameters(as_oracle(tri));
        CHECK(p.N == tri.num_tets());
        CHECK(p.delta == o.delta);
        CHECK(p.nu == o.nu);
        CHECK(p.lambda == o.lambda);
        CHECK(p.delta <= 2 * p.N);
        CHECK(p.lambda <= 2 * p.N);
        CHECK(p.nu <= p.N);
    }
}

TEST_CASE("figure-eight parameters") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const BoundaryData bd(tri);
    const Params p = params(tri, bd);
    CHECK(p.N == 2);
    CHECK(p.delta == 2);
    CHECK(p.nu == 2);
    CHECK(p.lambda == 1);
    CHECK(bd.cusp(0).poles.size() % 2 == 0);
}

TEST_CASE("edge degrees equal stack lengths plus two") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const auto deg = oracle::edge_degrees(as_oracle(tri));
        for (int t = 0; t < tri.num_tets(); ++t)
            for (int e = 0; e < 6; ++e) CHECK(tri.edge_degree(tri.edge_class(t, e)) == deg[t][e]);
        for (int e = 0; e < tri.num_edges(); ++e) {
            const auto st = edge_stacks(tri, e);
            CHECK(st[0].length() + st[1].length() + 2 == tri.edge_degree(e));
            CHECK(st[0].length() >= 1);
            CHECK(st[1].length() >= 1);
        }
    }
}

TEST_CASE("cusp links are tori with 4N triangles in total") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const auto links = oracle::vertex_links(as_oracle(tri));
        const CuspLinks cl(tri);
        int total = 0;
        REQUIRE(static_cast<int>(links.triangles.size()) == tri.num_cusps());
        for (int c = 0; c < tri.num_cusps(); ++c) {
            CHECK(links.euler[c] == 0);
            CHECK(cl.triangles_in_cusp(c) == links.triangles[c]);
            total += links.triangles[c];
        }
        CHECK(total == 4 * tri.num_tets());
    }
}

TEST_CASE("ladderpoles alternate in color and have monochromatic vertices") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        const BoundaryData bd(tri);
        for (int c = 0; c < bd.num_cusps(); ++c) {
            const auto& lad = bd.cusp(c);
            REQUIRE(!lad.poles.empty());
            CHECK(lad.poles[0].color == Color::Blue);
            for (std::size_t i = 0; i < lad.poles.size(); ++i) {
                CHECK(lad.poles[i].color == (i % 2 ? Color::Red : Color::Blue));
                for (int x : lad.poles[i].vertices) CHECK(bd.links().vertex_color(x) == lad.poles[i].color);
            }
            CHECK(intersection(bd.links(), lad.poles[0].steps, lad.transversal) != 0);
            CHECK(std::abs(intersection(bd.links(), lad.poles[0].steps, lad.transversal)) == 1);
        }
    }
}

TEST_CASE("a single flipped color violates the veering condition") {
    for (auto sig : census::kAll) {
        CAPTURE(sig);
        const auto tri = decode_taut_isosig(sig);
        for (int e = 0; e < tri.num_edges(); ++e) {
            RawTriangulation raw = tri.raw();
            REQUIRE(raw.colors.has_value());
            (*raw.colors)[e] = other((*raw.colors)[e]);
            CHECK(axiom_of(raw) == "veering condition");
        }
    }
}

TEST_CASE("swapping all colors gives a valid triangulation of the mirror") {
    for (auto sig : census::kAll) {
        const auto tri = decode_taut_isosig(sig);
        const auto sw = tri.recolored_swap();
        for (int e = 0; e < tri.num_edges(); ++e) CHECK(sw.color(e) == other(tri.color(e)));
        CHECK(axiom_of(sw.raw()) == "");
    }
}

TEST_CASE("rejections name the failing axiom") {
    const auto raw = decode_taut_isosig(census::kFig8).raw();
    SUBCASE("angle sum") {
        RawTriangulation r = raw;
        r.tets[0].taut_pair = (r.tets[0].taut_pair + 1) % 3;
        r.colors.reset();
        r.coorientations.reset();
        CHECK(axiom_of(r) == "angle sum");
    }
    SUBCASE("gluing involution") {
        RawTriangulation r = raw;
        r.tets[0].gluing[0].tet = 5;
        CHECK(axiom_of(r) == "gluing involution");
    }
    SUBCASE("transverse-taut") {
        RawTriangulation r = raw;
        REQUIRE(r.coorientations.has_value());
        (*r.coorientations)[0] = !(*r.coorientations)[0];
        CHECK(axiom_of(r) == "transverse-taut");
    }
    SUBCASE("parse errors are not validation errors") {
        CHECK_THROWS_AS(parse_native("num_tetrahedra 0\n"), ParseError);
        CHECK_THROWS_AS(decode_taut_isosig("cPcbbbiht"), Error);
    }
}

TEST_CASE("toggle and fan counts on the figure-eight") {
    const auto tri = decode_taut_isosig(census::kFig8);
    int toggles = 0;
    for (int t = 0; t < tri.num_tets(); ++t) toggles += tri.kind(t) == TetKind::Toggle;
    CHECK(toggles == 2);
}
