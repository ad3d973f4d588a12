#include "census.hpp"
#include "doctest.h"
#include "veerweave/errors.hpp"
#include "veerweave/sequencer.hpp"

using namespace veerweave;

namespace {

SequenceBuild fig8_seed(const VeeringTriangulation& tri, int alpha = 1) {
    const ShearingDecomposition sd(tri);
    const auto blue = upper_boundaries(tri, sd, Color::Blue);
    REQUIRE_FALSE(blue.empty());
    const auto d = collect_admissible(tri, {blue.front()});
    return admissible_to_sequence(tri, d, std::vector<int>(static_cast<std::size_t>(tri.num_cusps()), alpha));
}

}  // namespace

TEST_CASE("sequence from one upper boundary") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const BoundaryData bd(tri);
    const auto b = fig8_seed(tri);
    const auto table = validate_sequence(tri, b.sequence);
    CHECK(table == b.sequence.crossings);
    for (int t = 0; t < tri.num_cusps(); ++t) CHECK(table.minimum(bd, t) == 1);
}

TEST_CASE("bad collections and sequences are rejected") {
    const auto tri = decode_taut_isosig(census::kFig8);
    CHECK_THROWS_AS(admissible_to_sequence(tri, {}, {1}), std::invalid_argument);
    auto seq = fig8_seed(tri).sequence;
    for (auto& t : seq.tags) t = Transition::TwoLeft;
    CHECK_THROWS_AS(validate_sequence(tri, seq), StageError);
    seq = fig8_seed(tri).sequence;
    seq.vertices.pop_back();
    CHECK_THROWS_AS(validate_sequence(tri, seq), StageError);
}

TEST_CASE("reversed sequence validates on the mirror") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const auto mirror = tri.recolored_swap();
    const auto seq = fig8_seed(tri).sequence;
    const int P = seq.period();
    EdgeSequence rev;
    rev.color = seq.color == Color::Red ? Color::Blue : Color::Red;
    for (int j = 0; j < P; ++j) {
        const int i = P - 1 - j;
        const int prev = (i + P - 1) % P;
        rev.edges.push_back(seq.edges[static_cast<std::size_t>(i)].reversed());
        rev.vertices.push_back(seq.vertices[static_cast<std::size_t>(prev)]);
        rev.tags.push_back(seq.tags[static_cast<std::size_t>(prev)]);
    }
    CHECK_NOTHROW(validate_sequence(mirror, rev));
}

TEST_CASE("realized cycle with constant beta") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const BoundaryData bd(tri);
    const Params p = params(tri, bd);
    const auto seq = fig8_seed(tri).sequence;
    const auto beta = constant_betas(tri, seq, 4);
    const auto g = realize_gamma_cycle(tri, seq, beta);
    CHECK_NOTHROW(check_cycle(build_dual_graph(tri), g.cycle));
    const long long P = seq.period();
    CHECK(g.cycle.length() <= ((4 + 4) * p.lambda + 3) * p.delta * P);
    CHECK(g.length_bound == BigInt(((4 + 4) * p.lambda + 3) * p.delta * P));
    const BigInt w = (4 + 4) * p.lambda + 3;
    CHECK(g.complexity_bound == 2 * w * w * p.delta * p.delta * P * P);
    CHECK(g.cycle.classification != TurnClass::Branch);
    CHECK_THROWS_AS(constant_betas(tri, seq, 3), std::invalid_argument);
}

TEST_CASE("primitivity floor") {
    const auto tri = decode_taut_isosig(census::kFig8);
    const Params p = params(tri, BoundaryData(tri));
    CHECK(primitivity_floor(p) == 41);
    const auto seq = fig8_seed(tri).sequence;
    const auto b = primitivity_betas(tri, seq);
    for (int v : b.beta) CHECK(v >= primitivity_floor(p));
    CHECK(is_primitive(realize_gamma_cycle(tri, seq, b).cycle.edges));
    CHECK(is_primitive({1, 2, 3}));
    CHECK_FALSE(is_primitive({1, 2, 1, 2}));
}
