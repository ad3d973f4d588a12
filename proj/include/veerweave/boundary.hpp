#pragma once

#include <array>
#include <vector>

#include "veerweave/triangulation.hpp"

namespace veerweave {

// An edge e of one tetrahedron: vertices[0], vertices[1] are the endpoints
// of e and vertices[2], vertices[3] the remaining two.
struct EdgeEmbedding {
    int tet = -1;
    Perm4 vertices;
};

enum class Side : std::uint8_t { Left, Right };
inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

struct EdgeStack {
    int edge = -1;
    Side side = Side::Left;
    // Bottom to top, excluding the tetrahedra below and above the edge.
    std::vector<int> tetrahedra;
    std::vector<EdgeEmbedding> embeddings;
    int length() const { return static_cast<int>(tetrahedra.size()); }
};

// Stacks on both sides of edge class e (left first). The edge is oriented
// from its end with the smaller link-vertex id. Throws std::out_of_range.
std::array<EdgeStack, 2> edge_stacks(const VeeringTriangulation& tri, int e);

// Triangulated boundary tori of all cusps.
//
// Link vertices are ends of edges of the triangulation, link edges are
// corners of faces and link triangles are corners of tetrahedra
// (triangle id 4t + v).
class CuspLinks {
public:
    explicit CuspLinks(const VeeringTriangulation& tri);

    int num_vertices() const { return static_cast<int>(vertex_rep_.size()); }
    int num_edges() const { return static_cast<int>(edge_rep_.size()); }

    // Link vertex of the end at v of local edge {v, w} of tetrahedron t.
    int vertex(int t, int v, int w) const { return vertex_of_[16 * t + 4 * v + w]; }
    // Link edge cut out by face f of tetrahedron t near vertex v.
    int edge(int t, int v, int f) const { return edge_of_[16 * t + 4 * v + f]; }

    int vertex_cusp(int x) const { return vertex_cusp_[x]; }
    int vertex_edge_class(int x) const { return vertex_edge_[x]; }
    // The other end of the same edge of the triangulation.
    int opposite_end(int x) const { return opposite_end_[x]; }
    Color vertex_color(int x) const { return tri_->color(vertex_edge_[x]); }
    // Representative (t, v, w) of a link vertex.
    std::array<int, 3> vertex_rep(int x) const { return vertex_rep_[x]; }

    // Endpoints of a link edge, in the order fixed by its representative.
    std::array<int, 2> edge_ends(int y) const { return edge_ends_[y]; }
    int edge_cusp(int y) const { return edge_cusp_[y]; }
    // Representative (t, v, f) of a link edge.
    std::array<int, 3> edge_rep(int y) const { return edge_rep_[y]; }

    // +1 if corners (w1, w2, w3) of triangle (t, v) in increasing local
    // order run counter-clockwise viewed from inside the cusp.
    int triangle_ccw(int t, int v) const;
    // Triangles at the top vertices of a tetrahedron point up.
    bool triangle_points_up(int t, int v) const { return !tri_->is_top_face(t, v); }

    // Half-edge (2 * link edge + end). next_ccw maps a half-edge at a
    // vertex to the next one counter-clockwise around that vertex.
    int next_ccw(int half_edge) const { return next_ccw_[half_edge]; }
    int prev_ccw(int half_edge) const { return prev_ccw_[half_edge]; }
    // Triangle id between a half-edge and its counter-clockwise successor.
    int triangle_after(int half_edge) const { return triangle_after_[half_edge]; }
    // Slot (t, v, f) of the half-edge's link edge on the side of triangle_after.
    std::array<int, 3> slot_after(int half_edge) const { return slot_after_[half_edge]; }
    // Half-edge of slot (t, v, f) at local corner w.
    int half_edge(int t, int v, int f, int corner) const;
    int half_vertex(int half_edge) const { return edge_ends_[half_edge / 2][half_edge % 2]; }

    int num_cusps() const { return tri_->num_cusps(); }
    std::vector<int> cusp_vertices(int cusp) const;
    int triangles_in_cusp(int cusp) const;

    const VeeringTriangulation& triangulation() const { return *tri_; }

private:
    const VeeringTriangulation* tri_;
    std::vector<int> vertex_of_, edge_of_;
    std::vector<std::array<int, 3>> vertex_rep_, edge_rep_;
    std::vector<int> vertex_cusp_, vertex_edge_, opposite_end_;
    std::vector<std::array<int, 2>> edge_ends_;
    std::vector<int> edge_cusp_;
    std::vector<std::array<int, 2>> slot_end_;
    std::vector<int> next_ccw_, prev_ccw_, triangle_after_;
    std::vector<std::array<int, 3>> slot_after_;
};

// An oriented link edge; forward means from edge_ends()[0] to edge_ends()[1].
struct LinkStep {
    int edge = -1;
    bool forward = true;
    auto operator<=>(const LinkStep&) const = default;
};

int step_tail(const CuspLinks& links, LinkStep s);
int step_head(const CuspLinks& links, LinkStep s);
inline LinkStep reversed(LinkStep s) { return {s.edge, !s.forward}; }

// Signed count of crossings of the chain c with the left push-off of the
// simple closed link path gamma; positive when c crosses from right to
// left. For closed c this is the algebraic intersection number.
int intersection(const CuspLinks& links, const std::vector<LinkStep>& gamma, const std::vector<LinkStep>& c);

struct Ladderpole {
    Color color = Color::Blue;
    // Upward closed path: vertices[k] -> vertices[k+1] along steps[k].
    std::vector<int> vertices;
    std::vector<LinkStep> steps;
    int length() const { return static_cast<int>(steps.size()); }
};

struct LadderDecomposition {
    int cusp = -1;
    // Left to right; poles[0] is the blue pole through the smallest link
    // vertex and colors alternate.
    std::vector<Ladderpole> poles;
    // Steps of the transversal: one rung into each ladder going right,
    // closed up along poles[0].
    std::vector<LinkStep> transversal;
    int multiplicity() const { return static_cast<int>(poles.size()) / 2; }
    int max_length() const;
};

// All cusps at once, with per-vertex pole membership.
class BoundaryData {
public:
    explicit BoundaryData(const VeeringTriangulation& tri);

    const CuspLinks& links() const { return links_; }
    const LadderDecomposition& cusp(int c) const { return ladders_.at(static_cast<std::size_t>(c)); }
    int num_cusps() const { return static_cast<int>(ladders_.size()); }
    // Index of the pole containing a link vertex and the position on it.
    int pole_of(int x) const { return pole_of_[x]; }
    int position_on_pole(int x) const { return pos_on_pole_[x]; }

    // Class (p, q) = p t + q l of a closed link path, with t the transversal
    // and l the first pole of its cusp.
    std::array<long long, 2> homology(int cusp, const std::vector<LinkStep>& closed) const;

private:
    CuspLinks links_;
    std::vector<LadderDecomposition> ladders_;
    std::vector<int> pole_of_, pos_on_pole_;
};

// Throws StageError if the boundary of cusp c is not a ladder torus.
LadderDecomposition boundary_triangulation(const BoundaryData& data, int cusp);

struct Params {
    int N = 0;
    int delta = 0;
    int nu = 0;
    int lambda = 0;
};

Params params(const VeeringTriangulation& tri, const BoundaryData& data);

}  // namespace veerweave
