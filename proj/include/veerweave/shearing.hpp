#pragma once

#include <optional>
#include <vector>

#include "veerweave/boundary.hpp"
#include "veerweave/graphs.hpp"
#include "veerweave/triangulation.hpp"

namespace veerweave {

// An edge class with a direction, given by the link vertices at its ends.
struct OrientedEdge {
    int edge = -1;
    int tail = -1;
    int head = -1;
    OrientedEdge reversed() const { return {edge, head, tail}; }
    auto operator<=>(const OrientedEdge&) const = default;
};

// Local edge u -> w of tetrahedron t.
OrientedEdge oriented_edge(const VeeringTriangulation& tri, const CuspLinks& links, int t, int u, int w);

// The equatorial square of t splits it into an upper and a lower half.
struct HalfTet {
    int tet = -1;
    bool upper = false;
    auto operator<=>(const HalfTet&) const = default;
};

struct ShearingRegion {
    Color color = Color::Blue;
    // Cyclic, alternating upper and lower halves; internal_faces[i] joins
    // halves[i] and halves[i + 1].
    std::vector<HalfTet> halves;
    std::vector<int> internal_faces;
    // Tetrahedra whose squares lie on the upper / lower boundary.
    std::vector<int> upper_squares, lower_squares;
    std::vector<int> upper_helical, lower_helical, longitudinal;
    int length() const { return static_cast<int>(halves.size()) / 2; }
};

class ShearingDecomposition {
public:
    explicit ShearingDecomposition(const VeeringTriangulation& tri);

    const std::vector<ShearingRegion>& regions() const { return regions_; }
    int region_of(HalfTet h) const { return region_of_[static_cast<std::size_t>(2 * h.tet + (h.upper ? 1 : 0))]; }
    int region_of_face(int f) const { return face_region_[static_cast<std::size_t>(f)]; }

private:
    std::vector<ShearingRegion> regions_;
    std::vector<int> region_of_, face_region_;
};

// Squares and triangles cooriented upwards, with boundary sides oriented
// accordingly.
struct TransverseSurface {
    std::vector<int> squares;
    std::vector<int> triangles;
    std::vector<OrientedEdge> boundary;
};

TransverseSurface upper_boundary(const VeeringTriangulation& tri, const ShearingDecomposition& sd, int region);

struct Croissant {
    int tip = -1;
    int tip_edge = -1;     // blue edge e of the tip
    int blue_region = -1;  // U'
    int removed_square = -1;
    int red_region = -1;   // U''
    int far_edge = -1;     // e'
    int far_triangle = -1;  // f''
    TransverseSurface surface;
};

// Throws std::invalid_argument if f is internal to a blue region.
Croissant build_croissant(const VeeringTriangulation& tri, const ShearingDecomposition& sd, int f);

// Throws StageError if the collection is not admissible.
std::vector<OrientedEdge> collect_admissible(const VeeringTriangulation& tri, const std::vector<TransverseSurface>& surfaces);
bool is_admissible(const VeeringTriangulation& tri, const std::vector<OrientedEdge>& edges);

struct CutSystem {
    std::vector<int> blocked_tets;
    std::vector<int> blocked_faces;
};

CutSystem cut_system(const std::vector<TransverseSurface>& surfaces);

// A cycle of Γ avoiding the system, if any.
std::optional<CycleRecord> cut_check(const VeeringTriangulation& tri, const CutSystem& system);

// The collection of blue upper boundaries and all croissants.
std::vector<TransverseSurface> croissant_collection(const VeeringTriangulation& tri, const ShearingDecomposition& sd);
// Upper boundaries of all regions of one color.
std::vector<TransverseSurface> upper_boundaries(const VeeringTriangulation& tri, const ShearingDecomposition& sd, Color c);

std::string region_report(const VeeringTriangulation& tri, const ShearingDecomposition& sd);

}  // namespace veerweave
