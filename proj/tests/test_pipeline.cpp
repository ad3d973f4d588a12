#include "census.hpp"
#include "doctest.h"
#include "veerweave/pipeline.hpp"

using namespace veerweave;

TEST_CASE("surface index") {
    CHECK(surface_index(1, 4) == 0);
    CHECK(surface_index(1, 4, 0, 4) == -1);
    CHECK(surface_index(1, 3, 0, 3) == Rational(-1, 2));
    CHECK(surface_index(2, 0, 1) == 1);
    CHECK(SurfaceLedger{}.index() == 0);
    SurfaceLedger l;
    l.squares = 3;
    l.triangles = 2;
    l.helicoid_periods = {5};
    CHECK(l.index() == Rational(-3 - 1) - Rational(5, 2));
}

TEST_CASE("cutting preserves index") {
    const CorneredPiece disk{1, 6};
    const auto [a, b] = split_along_arc(disk, 1, 5);
    CHECK(a.chi_top + b.chi_top == disk.chi_top + 1);
    CHECK(a.corners + b.corners == disk.corners + 4);
    CHECK(a.index() + b.index() == disk.index());
    const CorneredPiece annulus{0, 2};
    const auto cut = cut_nonseparating_arc(annulus);
    CHECK(cut.chi_top == 1);
    CHECK(cut.index() == annulus.index());
}

TEST_CASE("worst-case bounds") {
    const auto two = worst_case_bounds(2);
    CHECK(two.at("cusped.complexity_statement") == BigInt(4096000000LL));
    CHECK(two.at("cusped.chi") == -pow(BigInt(10), 10) * (BigInt(1) << 20));
    CHECK(worst_case_bounds(3).at("cusped.complexity_statement") == BigInt(531441) * 1000000);
    const auto closed = worst_case_bounds(2, 1, 1);
    CHECK(closed.at("closed.chi") == -pow(BigInt(10), 13) * (BigInt(1) << 27) * 4);
    CHECK(worst_case_bounds(2, 1, 0).at("closed.B") == 16360);
    CHECK(helicoid_intersection_bound(4, 10, 5) == 409600);
    CHECK_THROWS(two.at("no.such.entry"));
}

TEST_CASE("fig8 certificates") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const auto c = birkhoff_cusped(tri, std::string(census::kFig8));
    CHECK(c.passed());
    CHECK(c.N == 2);
    CHECK_FALSE(c.cut_witness);
    for (const auto& cmp : c.comparisons) CHECK_MESSAGE(cmp.pass(), cmp.name);
    CHECK(render_text(c) == render_text(birkhoff_cusped(tri, std::string(census::kFig8))));

    const auto k = birkhoff_closed(tri, {{1, 0}}, std::string(census::kFig8));
    CHECK(k.passed());
    REQUIRE(k.B.size() == 1);
    CHECK(k.B[0] == 16360);
    for (const auto& cc : k.classes) CHECK(cc.exact());
    CHECK_THROWS_AS(birkhoff_closed(tri, {}), std::invalid_argument);
    CHECK_THROWS_AS(birkhoff_closed(tri, {{0, 1}}), std::invalid_argument);
}
