#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "veerweave/errors.hpp"
#include "veerweave/perm.hpp"

namespace veerweave {

enum class Color : std::uint8_t { Red = 0, Blue = 1 };

constexpr Color other(Color c) { return c == Color::Red ? Color::Blue : Color::Red; }
inline const char* to_string(Color c) { return c == Color::Red ? "red" : "blue"; }

enum class TetKind : std::uint8_t { Toggle, RedFan, BlueFan };
const char* to_string(TetKind k);

// Face `face` of the owning tetrahedron is glued to face `perm[face]` of
// tetrahedron `tet`; vertex i maps to perm[i].
struct Gluing {
    int tet = -1;
    int face = -1;
    Perm4 perm;
};

struct TetRecord {
    std::array<Gluing, 4> gluing;
    // 0, 1, 2 for the pi-labelled opposite pairs 01-23, 02-13, 03-12.
    int taut_pair = 0;
};

// Unvalidated input as read from a document or a signature. Colors are
// indexed by edge class and coorientations by face class, using the
// deterministic class numbering of the gluings.
struct RawTriangulation {
    std::vector<TetRecord> tets;
    std::optional<std::vector<Color>> colors;
    // true: the representative face is a top face (cooriented out of) its tetrahedron.
    std::optional<std::vector<bool>> coorientations;
};

struct TetLocal {
    int tet = -1;
    int index = -1;
    auto operator<=>(const TetLocal&) const = default;
};

// Class identifications induced by a set of gluings; representatives are
// the lexicographically smallest (tetrahedron, local index) pair and class
// ids are ordered by representative.
struct ClassMaps {
    std::vector<std::array<int, 6>> edge_of;
    std::vector<std::array<int, 4>> face_of;
    std::vector<std::array<int, 4>> vertex_of;
    std::vector<TetLocal> edge_rep, face_rep, vertex_rep;
};

ClassMaps compute_classes(const std::vector<TetRecord>& tets);

// An ideal triangulation with a transverse taut structure and a veering
// coloring. Immutable after construction.
class VeeringTriangulation {
public:
    // Validates the raw data and fills in missing coorientations and colors.
    // Throws ValidationError naming the first failing axiom.
    static VeeringTriangulation build(const RawTriangulation& raw);
    // Same checks without throwing.
    static std::variant<VeeringTriangulation, ValidationError> check(const RawTriangulation& raw);

    int num_tets() const { return static_cast<int>(tets_.size()); }
    int num_edges() const { return static_cast<int>(classes_.edge_rep.size()); }
    int num_faces() const { return static_cast<int>(classes_.face_rep.size()); }
    int num_cusps() const { return static_cast<int>(classes_.vertex_rep.size()); }

    const TetRecord& tet(int t) const { return tets_.at(static_cast<std::size_t>(t)); }
    const Gluing& gluing(int t, int face) const { return tets_.at(static_cast<std::size_t>(t)).gluing[static_cast<std::size_t>(face)]; }

    int edge_class(int t, int local_edge) const { return classes_.edge_of[t][local_edge]; }
    int face_class(int t, int face) const { return classes_.face_of[t][face]; }
    int vertex_class(int t, int vertex) const { return classes_.vertex_of[t][vertex]; }
    TetLocal edge_rep(int e) const { return classes_.edge_rep.at(static_cast<std::size_t>(e)); }
    TetLocal face_rep(int f) const { return classes_.face_rep.at(static_cast<std::size_t>(f)); }
    TetLocal vertex_rep(int v) const { return classes_.vertex_rep.at(static_cast<std::size_t>(v)); }

    // Local edge indices of the pi-edges.
    int bottom_local(int t) const { return bottom_[t]; }
    int top_local(int t) const { return opposite_edge(bottom_[t]); }
    int bottom_edge(int t) const { return edge_class(t, bottom_[t]); }
    int top_edge(int t) const { return edge_class(t, top_local(t)); }
    // Vertices (a0 < a1) of the bottom edge and (c0 < c1) of the top edge.
    std::array<int, 2> bottom_vertices(int t) const;
    std::array<int, 2> top_vertices(int t) const;
    bool is_top_face(int t, int face) const;
    // The local side edges whose color differs from the top edge's.
    std::array<int, 2> opposite_color_sides(int t) const;
    std::array<int, 2> same_color_sides(int t) const;

    // +1 if the local vertex order 0123 is positively oriented.
    int orientation(int t) const { return orient_[t]; }

    Color color(int edge) const { return colors_.at(static_cast<std::size_t>(edge)); }
    Color local_color(int t, int local_edge) const { return color(edge_class(t, local_edge)); }
    TetKind kind(int t) const;

    int tet_below_edge(int e) const { return below_edge_[e]; }
    int tet_above_edge(int e) const { return above_edge_[e]; }
    // The tetrahedron having the face as a top face, and the one having it as a bottom face.
    int tet_below_face(int f) const { return below_face_[f]; }
    int tet_above_face(int f) const { return above_face_[f]; }
    // Local face index of face class f inside its tetrahedron below / above.
    int below_face_local(int f) const { return below_face_local_[f]; }
    int above_face_local(int f) const { return above_face_local_[f]; }

    int edge_degree(int e) const { return degree_[e]; }

    // Coorientation flag per face class, in the sense of RawTriangulation.
    bool rep_is_top_face(int f) const;

    // Same combinatorics with every color swapped (the mirror image).
    VeeringTriangulation recolored_swap() const;

    RawTriangulation raw() const;

private:
    std::vector<TetRecord> tets_;
    ClassMaps classes_;
    std::vector<int> bottom_;
    std::vector<int> orient_;
    std::vector<Color> colors_;
    std::vector<int> below_edge_, above_edge_;
    std::vector<int> below_face_, above_face_, below_face_local_, above_face_local_;
    std::vector<int> degree_;
};

// Native text document.
RawTriangulation parse_native_raw(std::string_view text);
VeeringTriangulation parse_native(std::string_view text);
std::string emit_native(const VeeringTriangulation& tri);

// Taut isomorphism signature "<isoSig>_<angle digits>".
RawTriangulation decode_taut_isosig_raw(std::string_view sig);
VeeringTriangulation decode_taut_isosig(std::string_view sig);

// Plain isomorphism signature decoding (gluings only, taut_pair left 0).
std::vector<TetRecord> decode_isosig(std::string_view sig);

}  // namespace veerweave
