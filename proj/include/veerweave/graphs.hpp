#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "veerweave/boundary.hpp"
#include "veerweave/triangulation.hpp"

namespace veerweave {

// Γ: one vertex per tetrahedron, one edge per face class from the
// tetrahedron below the face to the one above it.
struct DualGraph {
    int num_vertices = 0;
    std::vector<int> tail, head;
    // Per vertex: the two top faces (out-edges) and bottom faces (in-edges),
    // in increasing local face order.
    std::vector<std::array<int, 2>> out_edges, in_edges;
    // For each edge, the out-edge at its head that continues it smoothly.
    std::vector<int> branch_next;

    int num_edges() const { return static_cast<int>(tail.size()); }
    bool branching(int in_edge, int out_edge) const { return branch_next[static_cast<std::size_t>(in_edge)] == out_edge; }
};

// Φ: one vertex per edge class; edge 3t is bottom(t) -> top(t) and edges
// 3t+1, 3t+2 go to the opposite-colour sides of t in increasing local order.
struct FlowGraph {
    int num_vertices = 0;
    std::vector<int> tail, head;
    std::vector<std::vector<int>> out_edges;

    int num_edges() const { return static_cast<int>(tail.size()); }
    int tet_of(int edge) const { return edge / 3; }
};

DualGraph build_dual_graph(const VeeringTriangulation& tri);
FlowGraph build_flow_graph(const VeeringTriangulation& tri);

// Bottom face of t continuing the top face `top_face` smoothly: the one
// containing the opposite-colour side that lies in `top_face`.
int branch_partner(const VeeringTriangulation& tri, int t, int top_face);

enum class GraphKind : std::uint8_t { Dual, Flow };
enum class TurnClass : std::uint8_t { Branch, AB, Generic, None };
const char* to_string(GraphKind k);
const char* to_string(TurnClass c);

struct CycleRecord {
    GraphKind kind = GraphKind::Dual;
    // vertices[i] is the tail of edges[i]; the cycle closes up.
    std::vector<int> vertices;
    std::vector<int> edges;
    TurnClass classification = TurnClass::None;
    int length() const { return static_cast<int>(edges.size()); }
    auto operator<=>(const CycleRecord&) const = default;
};

// Classification of a closed Γ-walk; the turn at vertices[i] goes from
// edges[i-1] to edges[i].
TurnClass classify_cycle(const DualGraph& g, const std::vector<int>& edges);
int count_antibranching_turns(const DualGraph& g, const std::vector<int>& edges);

// Rotation minimising (start vertex, edge sequence) lexicographically.
std::vector<int> canonical_rotation(const std::vector<int>& tails, const std::vector<int>& edges);
CycleRecord make_cycle(const DualGraph& g, std::vector<int> edges);
CycleRecord make_cycle(const FlowGraph& g, std::vector<int> edges);
// Throws std::invalid_argument if the edges do not close up head to tail.
void check_cycle(const DualGraph& g, const CycleRecord& c);
void check_cycle(const FlowGraph& g, const CycleRecord& c);

// All closed walks of length 1..max_len up to rotation, sorted by length and
// then canonical edge sequence. Throws BudgetError beyond the record budget.
std::vector<CycleRecord> enumerate_cycles(const DualGraph& g, int max_len);
std::vector<CycleRecord> enumerate_cycles(const FlowGraph& g, int max_len);

// First homology of the dual 2-complex (a spine of the cusped manifold).
// Classes are vectors over face classes reduced modulo the boundaries of
// the sectors; two chains are homologous iff their reductions agree.
class Homology {
public:
    explicit Homology(const VeeringTriangulation& tri);

    int num_faces() const { return num_faces_; }
    // Canonical representative of a 1-cycle given by face multiplicities.
    std::vector<long long> reduce(std::vector<long long> chain) const;
    bool is_boundary(const std::vector<long long>& chain) const;
    // Rank of the free part and the torsion coefficients (> 1).
    int betti() const { return betti_; }
    const std::vector<long long>& torsion() const { return torsion_; }

    std::vector<long long> of_dual_walk(const std::vector<int>& faces) const;
    std::vector<long long> of_flow_walk(const std::vector<int>& flow_edges) const;
    // Closed path in a cusp link, pushed to its left into the triangulation.
    std::vector<long long> of_link_path(const CuspLinks& links, const std::vector<LinkStep>& closed) const;

private:
    const VeeringTriangulation* tri_;
    int num_faces_ = 0;
    // Row-echelon (Hermite) basis of the sector boundary lattice.
    std::vector<std::vector<long long>> rows_;
    std::vector<int> pivots_;
    int betti_ = 0;
    std::vector<long long> torsion_;
};

// Γ-path of a Φ-edge: from the tetrahedron t of the edge up the stack of its
// head edge to the tetrahedron above that edge.
std::vector<int> flow_edge_dual_path(const VeeringTriangulation& tri, int flow_edge);

std::vector<long long> homology_class(const Homology& h, const CycleRecord& c);

std::string dual_graph_dot(const VeeringTriangulation& tri, const DualGraph& g);
std::string flow_graph_dot(const VeeringTriangulation& tri, const FlowGraph& g);
std::string dual_graph_edge_list(const DualGraph& g);
std::string flow_graph_edge_list(const FlowGraph& g);

}  // namespace veerweave
