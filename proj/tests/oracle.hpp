#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the library except for converting inputs.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "veerweave/triangulation.hpp"

namespace oracle {

using Perm = std::array<int, 4>;

struct Glue {
    int tet = -1;
    int face = -1;
    Perm perm{};
};

struct Tri {
    std::vector<std::array<Glue, 4>> glue;
    std::vector<int> pair;  // 0: 01|23, 1: 02|13, 2: 03|12
    int size() const { return static_cast<int>(glue.size()); }
};

Tri from_records(const std::vector<veerweave::TetRecord>& tets);
veerweave::RawTriangulation to_raw(const Tri& t);

// Calls f on every connected or disconnected face pairing of n tetrahedra
// with every choice of gluing permutations and pi pairs.
void enumerate(int n, const std::function<void(const Tri&)>& f);

// Decides from the definitions whether a veering structure exists. On
// success `colors` (if given) receives one valid coloring per tetrahedron
// local edge, 0 red and 1 blue.
bool admits_veering(const Tri& t, std::vector<std::array<int, 6>>* colors = nullptr);

struct Parameters {
    int delta = 0;
    int nu = 0;
    int lambda = 0;
};
// Requires admits_veering(t).
Parameters parameters(const Tri& t);

// Lexicographically smallest relabelling over tetrahedron and vertex
// permutations, pi pairs included.
std::vector<int> canonical_form(const Tri& t);

// Regina-style isomorphism signature with the taut angle suffix.
std::string taut_isosig(const Tri& t);

// Degrees of the edge classes, listed per tetrahedron local edge.
std::vector<std::array<int, 6>> edge_degrees(const Tri& t);

// Vertex links built from corner identifications: number of link triangles
// of each cusp, listed by the cusp of (tet, vertex).
struct LinkData {
    std::vector<std::array<int, 4>> cusp_of;
    std::vector<int> triangles;
    std::vector<int> euler;  // V - E + F of each link
};
LinkData vertex_links(const Tri& t);

// Number of closed walks of length L in a digraph, tr(A^L).
long long trace_power(int vertices, const std::vector<int>& tail, const std::vector<int>& head, int L);

}  // namespace oracle
