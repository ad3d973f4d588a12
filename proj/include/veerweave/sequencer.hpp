#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "veerweave/boundary.hpp"
#include "veerweave/graphs.hpp"
#include "veerweave/shearing.hpp"
#include "veerweave/triangulation.hpp"

namespace veerweave {

using BigInt = boost::multiprecision::cpp_int;

enum class Transition : std::uint8_t { SamePole, TwoLeft };
const char* to_string(Transition t);

// Crossings of an edge sequence with the ladderpole curves of the opposite
// color, indexed by cusp and pole index (poles of the sequence's own color
// stay zero).
struct CrossingTable {
    Color crossed = Color::Blue;
    std::vector<std::vector<int>> counts;
    int minimum(const BoundaryData& bd, int cusp) const;
    // First pole of the crossed color attaining the minimum.
    int argmin(const BoundaryData& bd, int cusp) const;
    bool operator==(const CrossingTable&) const = default;
};

// Cyclic sequence; edges[i] runs from cusp vertices[i-1] to vertices[i] and
// tags[i] describes the step from edges[i] to edges[i+1] at vertices[i].
struct EdgeSequence {
    Color color = Color::Red;
    std::vector<OrientedEdge> edges;
    std::vector<int> vertices;
    std::vector<Transition> tags;
    CrossingTable crossings;
    int period() const { return static_cast<int>(edges.size()); }
};

struct SequenceBuild {
    EdgeSequence sequence;
    std::vector<OrientedEdge> auxiliary;  // d'
    int copies = 0;                       // copies of all edges of the color in d'
    int k() const { return static_cast<int>(auxiliary.size()); }
    // Per cusp: poles of the sequence color in the minimising rotation,
    // their t - s values (exits minus entries) and the resulting u.
    std::vector<std::vector<int>> pole_order, excess, u;
    int merges = 0;
};

// `alpha` has one positive entry per cusp. Throws std::invalid_argument on
// an empty, mixed-color or non-admissible collection.
SequenceBuild admissible_to_sequence(const VeeringTriangulation& tri, const std::vector<OrientedEdge>& d, const std::vector<int>& alpha);

// Recomputes tags and crossings; throws StageError on a broken sequence.
CrossingTable validate_sequence(const VeeringTriangulation& tri, const EdgeSequence& seq);

struct BetaAssignment {
    std::vector<int> beta;
    std::vector<long long> cusp_sums;
    bool primitive_floor = false;
    bool incremented = false;
    int max() const;
};

// Explicit values, one per index of the sequence (each at least 4).
BetaAssignment make_betas(const VeeringTriangulation& tri, const EdgeSequence& seq, std::vector<int> beta);
BetaAssignment constant_betas(const VeeringTriangulation& tri, const EdgeSequence& seq, int value);
int primitivity_floor(const Params& p);
BetaAssignment primitivity_betas(const VeeringTriangulation& tri, const EdgeSequence& seq);

struct GammaRealization {
    CycleRecord cycle;
    // Per index: transversal crossings x of the arc a * b, and the full
    // vertical arc a * b * l^(beta - x) at vertices[i].
    std::vector<int> x;
    std::vector<std::vector<LinkStep>> vertical;
    // Per index: Γ-length of the segment from E_{i} (or H_i) to E_{i+1} (or H_{i+1}).
    std::vector<int> segment_lengths;
    BigInt length_bound;
    BigInt complexity_bound;
    bool x_within_worst_case = true;
};

// Throws std::invalid_argument if beta does not fit the sequence and
// StageError if a segment exceeds its budget.
GammaRealization realize_gamma_cycle(const VeeringTriangulation& tri, const EdgeSequence& seq, const BetaAssignment& beta);

bool is_primitive(const std::vector<int>& edges);

}  // namespace veerweave
