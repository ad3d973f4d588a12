#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "veerweave/boundary.hpp"
#include "veerweave/graphs.hpp"
#include "veerweave/triangulation.hpp"

namespace veerweave {

// Descending set Δ(v) of a lifted tetrahedron, generated lazily.
//
// Every vertex x of Δ(v) is a lift of a tetrahedron together with the side
// of the plane on which each of its bottom faces lies. The sector below x
// (dual to its bottom edge) has x as top corner; left(x) and right(x) are
// the far ends of its two top sides. Vertices are named canonically: v, the
// two boundary rays left^k(v) and right^k(v), and for every other vertex the
// top corner of the sector directly above it (its forward flow-graph step)
// together with its position on that sector's bottom side.
class DescendingSet {
public:
    enum class Kind : std::uint8_t { Root, LeftRay, RightRay, Child };
    struct Node {
        Kind kind = Kind::Root;
        int tet = -1;
        int left_face = -1;  // local bottom face on the left
        int index = 0;       // ray offset, or position j on the parent's bottom side
        int parent = -1;
        Side side = Side::Left;
        int flow_edge = -1;  // Φ-edge to the parent
        int n = 0, m = 0;    // left and right bottom side lengths of the sector below
    };

    DescendingSet(const VeeringTriangulation& tri, int tet, int left_face);

    const VeeringTriangulation& triangulation() const { return *tri_; }
    int root() const { return 0; }
    const Node& node(int x) const { return nodes_.at(static_cast<std::size_t>(x)); }
    int size() const { return static_cast<int>(nodes_.size()); }
    int right_face(int x) const;

    int left(int x);
    int right(int x);
    // Forward Φ-step; empty on the boundary of Δ(v).
    std::optional<int> parent(int x) const;
    // Signed offset along ∂Δ(v): -k on the left ray, +k on the right ray.
    std::optional<int> boundary_offset(int x) const;

    // Caps the number of generated vertices; throws BudgetError beyond it.
    void set_budget(std::int64_t cap) { cap_ = cap; }

private:
    struct StackEntry {
        int tet, local_edge;
    };
    int make(Node n);
    int ray(Kind k, int offset);
    int child(int p, Side s, int j);
    int lt(int p, int k);
    int rt(int p, int k);
    // Tetrahedron and orientation one step down through the left or right bottom face.
    std::array<int, 2> step(int tet, int left_face, Side s) const;
    // Stack of the bottom edge below one bottom face, top to bottom, ending
    // at the tetrahedron below the edge.
    std::vector<StackEntry> stack_below(int tet, int face) const;
    void check_step(int x, int y, Side s) const;

    const VeeringTriangulation* tri_;
    std::vector<Node> nodes_;
    std::vector<int> left_, right_;
    std::vector<std::array<std::vector<StackEntry>, 2>> stacks_;
    std::map<std::array<int, 3>, int> child_ids_;
    std::vector<int> left_ray_, right_ray_;
    std::int64_t cap_;
};

// Lift of one chain of sectors hanging from the boundary ray of Δ(v_{i+1})
// that is not on ∂Δ(v_i): sectors given by their top corners, top to bottom.
struct SectorChain {
    std::vector<int> sectors;
    int length() const { return static_cast<int>(sectors.size()); }
};

struct DynamicPlaneWindow {
    CycleRecord cycle;
    int periods = 0;
    bool orientation_preserving = true;
    std::shared_ptr<DescendingSet> plane;  // Δ(v_R), R = periods * L
    std::vector<int> lifted;               // v_0 .. v_R
    // Per step i < R: v_i is the left (true) or right child of v_{i+1}.
    std::vector<bool> step_left;
    int depth = 0;
    // boundary[i][depth + s] is the vertex at offset s on ∂Δ(v_i).
    std::vector<std::vector<int>> boundary;
    std::vector<std::map<int, int>> offset_of;
    // chains[i]: chains between ∂Δ(v_i) and ∂Δ(v_{i+1}) along the new ray.
    std::vector<std::vector<SectorChain>> chains;

    int layers() const { return static_cast<int>(lifted.size()) - 1; }
    int vertex_at(int layer, int offset) const;
};

struct PhiPath {
    int start_layer = 0;
    int start_offset = 0;
    std::vector<int> vertices;  // plane vertices, first is the start
    std::vector<int> edges;     // Φ-edges between consecutive vertices
    // exit_index[i], exit_offset[i]: where the path meets ∂Δ(v_i), i >= start_layer.
    std::vector<int> exit_index, exit_offset;
    int length() const { return static_cast<int>(edges.size()); }
};

// Throws StageError for branch cycles. Requires periods >= 2.
DynamicPlaneWindow build_window(const VeeringTriangulation& tri, const CycleRecord& c, int periods);
// Follows the forward Φ-path from an offset on ∂Δ(v_layer) to the last layer.
PhiPath follow_phi_path(DynamicPlaneWindow& w, int offset, int layer = 0);

struct HResult {
    std::vector<CycleRecord> cycles;
    bool orientation_reversing = false;
    // False when some start point could not be resolved inside the window.
    bool complete = true;
    int periods_used = 0;
};

HResult compute_h(const VeeringTriangulation& tri, const CycleRecord& c);
// Half the common length of the elements of h(c²); empty if h(c²) is empty.
std::optional<boost::rational<long long>> flow_graph_complexity(const VeeringTriangulation& tri, const CycleRecord& c);

// The counting bounds on orbits of faces, squares, edge and tetrahedron
// rectangles in terms of a complexity value.
struct ComplexityBounds {
    boost::rational<long long> faces, squares, edge_rectangles, tet_rectangles;
};
ComplexityBounds complexity_bounds(int delta, boost::rational<long long> complexity);

}  // namespace veerweave
