#include "veerweave/shearing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "veerweave/errors.hpp"
#include "veerweave/union_find.hpp"

namespace veerweave {

namespace {

bool face_has(int face, int u, int w) { return face != u && face != w; }

int local_edge_index(int u, int w) {
    static constexpr int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return idx[u][w];
}

constexpr std::array<std::array<int, 2>, 6> kEnds{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Boundary of face `face` of t with the outward orientation.
std::array<std::array<int, 2>, 3> face_cycle(const VeeringTriangulation& tri, int t, int face) {
    std::array<int, 3> v{};
    for (int i = 0, k = 0; i < 4; ++i)
        if (i != face) v[static_cast<std::size_t>(k++)] = i;
    const int sign = ((face % 2 == 0) ? 1 : -1) * tri.orientation(t);
    if (sign < 0) std::swap(v[1], v[2]);
    return {{{v[0], v[1]}, {v[1], v[2]}, {v[2], v[0]}}};
}

// Sides of the upward triangle f of the given color.
std::vector<OrientedEdge> triangle_sides(const VeeringTriangulation& tri, const CuspLinks& links, int f, Color c) {
    const int t = tri.tet_below_face(f);
    std::vector<OrientedEdge> out;
    for (auto [u, w] : face_cycle(tri, t, tri.below_face_local(f)))
        if (tri.local_color(t, local_edge_index(u, w)) == c) out.push_back(oriented_edge(tri, links, t, u, w));
    return out;
}

// Sides of the upward square of t of the given color.
std::vector<OrientedEdge> square_sides(const VeeringTriangulation& tri, const CuspLinks& links, int t, Color c) {
    const int top = tri.top_local(t);
    std::vector<OrientedEdge> out;
    for (int face = 0; face < 4; ++face) {
        if (!tri.is_top_face(t, face)) continue;
        for (auto [u, w] : face_cycle(tri, t, face)) {
            const int le = local_edge_index(u, w);
            if (le != top && tri.local_color(t, le) == c) out.push_back(oriented_edge(tri, links, t, u, w));
        }
    }
    return out;
}

std::vector<int> side_edges(const VeeringTriangulation& tri, int t) {
    std::vector<int> out;
    for (int le = 0; le < 6; ++le)
        if (le != tri.bottom_local(t) && le != tri.top_local(t)) out.push_back(le);
    return out;
}

void sort_unique(std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

OrientedEdge oriented_edge(const VeeringTriangulation& tri, const CuspLinks& links, int t, int u, int w) {
    return {tri.edge_class(t, local_edge_index(u, w)), links.vertex(t, u, w), links.vertex(t, w, u)};
}

ShearingDecomposition::ShearingDecomposition(const VeeringTriangulation& tri) {
    const int n = tri.num_tets();
    auto id = [](HalfTet h) { return static_cast<std::size_t>(2 * h.tet + (h.upper ? 1 : 0)); };
    UnionFind uf(static_cast<std::size_t>(2 * n));
    // Face f joins the upper half below it to the lower half above it.
    for (int f = 0; f < tri.num_faces(); ++f) uf.unite(id({tri.tet_below_face(f), true}), id({tri.tet_above_face(f), false}));
    region_of_.assign(static_cast<std::size_t>(2 * n), -1);
    face_region_.assign(static_cast<std::size_t>(tri.num_faces()), -1);
    std::map<std::size_t, int> root_region;
    for (int t = 0; t < n; ++t) {
        const HalfTet start{t, true};
        if (root_region.count(uf.find(id(start)))) continue;
        const int r = static_cast<int>(regions_.size());
        root_region.emplace(uf.find(id(start)), r);
        ShearingRegion reg;
        // Leave each half through the face it was not entered by.
        HalfTet cur = start;
        int entry = -1;
        do {
            reg.halves.push_back(cur);
            region_of_[id(cur)] = r;
            int exit = -1;
            for (int face = 0; face < 4 && exit < 0; ++face)
                if (tri.is_top_face(cur.tet, face) == cur.upper && face != entry) exit = face;
            const int f = tri.face_class(cur.tet, exit);
            reg.internal_faces.push_back(f);
            face_region_[static_cast<std::size_t>(f)] = r;
            if (cur.upper) {
                cur = {tri.tet_above_face(f), false};
                entry = tri.above_face_local(f);
            } else {
                cur = {tri.tet_below_face(f), true};
                entry = tri.below_face_local(f);
            }
        } while (!(cur == start));
        for (const HalfTet& h : reg.halves) (h.upper ? reg.lower_squares : reg.upper_squares).push_back(h.tet);
        if (reg.upper_squares.size() != reg.lower_squares.size())
            throw StageError("shearing", "region with unequal upper and lower square counts");
        // Internal triangles have two edges of the region's color.
        std::set<Color> majority;
        for (int f : reg.internal_faces) {
            const int t = tri.tet_above_face(f);
            int red = 0;
            for (int le = 0; le < 6; ++le)
                if (face_has(tri.above_face_local(f), kEnds[static_cast<std::size_t>(le)][0], kEnds[static_cast<std::size_t>(le)][1]) &&
                    tri.local_color(t, le) == Color::Red)
                    ++red;
            majority.insert(red >= 2 ? Color::Red : Color::Blue);
        }
        if (majority.size() != 1) throw StageError("shearing", "internal triangles of one region disagree on its color");
        reg.color = *majority.begin();
        for (int t : reg.upper_squares)
            for (int le : side_edges(tri, t))
                (tri.local_color(t, le) == reg.color ? reg.upper_helical : reg.longitudinal).push_back(tri.edge_class(t, le));
        std::vector<int> lower_long;
        for (int t : reg.lower_squares)
            for (int le : side_edges(tri, t))
                (tri.local_color(t, le) == reg.color ? reg.lower_helical : lower_long).push_back(tri.edge_class(t, le));
        sort_unique(reg.upper_helical);
        sort_unique(reg.lower_helical);
        sort_unique(reg.longitudinal);
        sort_unique(lower_long);
        if (lower_long != reg.longitudinal)
            throw StageError("shearing", "upper and lower boundaries do not meet along the longitudinal edges");
        regions_.push_back(std::move(reg));
    }
}

TransverseSurface upper_boundary(const VeeringTriangulation& tri, const ShearingDecomposition& sd, int region) {
    const CuspLinks links(tri);
    const ShearingRegion& reg = sd.regions().at(static_cast<std::size_t>(region));
    TransverseSurface s;
    s.squares = reg.upper_squares;
    for (int t : reg.upper_squares)
        for (const auto& e : square_sides(tri, links, t, other(reg.color))) s.boundary.push_back(e);
    return s;
}

Croissant build_croissant(const VeeringTriangulation& tri, const ShearingDecomposition& sd, int f) {
    if (f < 0 || f >= tri.num_faces()) throw std::out_of_range("face out of range");
    Croissant c;
    c.tip = f;
    const int home = sd.region_of_face(f);
    if (sd.regions()[static_cast<std::size_t>(home)].color != Color::Red)
        throw std::invalid_argument("face " + std::to_string(f) + " is internal to a blue region");
    const int below = tri.tet_below_face(f);
    const int local = tri.below_face_local(f);
    int blue_le = -1;
    for (int le = 0; le < 6; ++le) {
        const auto [u, w] = kEnds[static_cast<std::size_t>(le)];
        if (face_has(local, u, w) && tri.local_color(below, le) == Color::Blue) {
            if (blue_le >= 0) throw StageError("shearing", "red region triangle with two blue edges");
            blue_le = le;
        }
    }
    c.tip_edge = tri.edge_class(below, blue_le);
    // Locate f in the stacks of e: it lies between two stack tetrahedra.
    const auto stacks = edge_stacks(tri, c.tip_edge);
    int side = -1;
    for (int s = 0; s < 2; ++s) {
        const auto& st = stacks[static_cast<std::size_t>(s)];
        for (int i = 0; i + 1 < st.length(); ++i) {
            const int t = st.tetrahedra[static_cast<std::size_t>(i)];
            const auto& emb = st.embeddings[static_cast<std::size_t>(i)];
            for (int face = 0; face < 4; ++face)
                if (tri.is_top_face(t, face) && tri.face_class(t, face) == f && face_has(face, emb.vertices[0], emb.vertices[1])) side = s;
        }
    }
    if (side < 0) throw StageError("shearing", "tip is not between two stack tetrahedra of its blue edge");
    const auto& st = stacks[static_cast<std::size_t>(side)];
    const int q = st.tetrahedra.front();
    const auto& emb = st.embeddings.front();
    c.removed_square = q;
    c.blue_region = sd.region_of({q, false});
    if (c.blue_region != sd.region_of({tri.tet_below_edge(c.tip_edge), true}) || sd.regions()[static_cast<std::size_t>(c.blue_region)].color != Color::Blue)
        throw StageError("shearing", "tip edge is not an upper helical edge of a blue region next to the square");
    c.red_region = sd.region_of({q, true});
    if (sd.regions()[static_cast<std::size_t>(c.red_region)].color != Color::Red)
        throw StageError("shearing", "removed square is not a lower square of a red region");
    const int far_le = opposite_edge(local_edge_index(emb.vertices[0], emb.vertices[1]));
    c.far_edge = tri.edge_class(q, far_le);
    for (int face = 0; face < 4; ++face) {
        const auto [u, w] = kEnds[static_cast<std::size_t>(far_le)];
        if (tri.is_top_face(q, face) && face_has(face, u, w)) c.far_triangle = tri.face_class(q, face);
    }
    if (c.far_triangle < 0 || sd.region_of_face(c.far_triangle) != c.red_region)
        throw StageError("shearing", "far triangle is not internal to the red region above the square");
    const CuspLinks links(tri);
    const ShearingRegion& body = sd.regions()[static_cast<std::size_t>(c.blue_region)];
    for (int t : body.upper_squares) {
        if (t == q) continue;
        c.surface.squares.push_back(t);
        for (const auto& e : square_sides(tri, links, t, Color::Red)) c.surface.boundary.push_back(e);
    }
    c.surface.triangles = {f, c.far_triangle};
    for (int tri_face : c.surface.triangles)
        for (const auto& e : triangle_sides(tri, links, tri_face, Color::Red)) c.surface.boundary.push_back(e);
    return c;
}

bool is_admissible(const VeeringTriangulation& tri, const std::vector<OrientedEdge>& edges) {
    const CuspLinks links(tri);
    std::vector<int> balance(static_cast<std::size_t>(tri.num_cusps()), 0);
    for (const auto& e : edges) {
        ++balance[static_cast<std::size_t>(links.vertex_cusp(e.head))];
        --balance[static_cast<std::size_t>(links.vertex_cusp(e.tail))];
    }
    return std::all_of(balance.begin(), balance.end(), [](int b) { return b == 0; });
}

std::vector<OrientedEdge> collect_admissible(const VeeringTriangulation& tri, const std::vector<TransverseSurface>& surfaces) {
    std::vector<OrientedEdge> out;
    for (const auto& s : surfaces) out.insert(out.end(), s.boundary.begin(), s.boundary.end());
    if (!is_admissible(tri, out)) throw StageError("shearing", "collected boundary edges are not admissible");
    return out;
}

CutSystem cut_system(const std::vector<TransverseSurface>& surfaces) {
    CutSystem cs;
    for (const auto& s : surfaces) {
        cs.blocked_tets.insert(cs.blocked_tets.end(), s.squares.begin(), s.squares.end());
        cs.blocked_faces.insert(cs.blocked_faces.end(), s.triangles.begin(), s.triangles.end());
    }
    sort_unique(cs.blocked_tets);
    sort_unique(cs.blocked_faces);
    return cs;
}

std::optional<CycleRecord> cut_check(const VeeringTriangulation& tri, const CutSystem& system) {
    const DualGraph g = build_dual_graph(tri);
    std::vector<bool> vdead(static_cast<std::size_t>(g.num_vertices), false), edead(static_cast<std::size_t>(g.num_edges()), false);
    for (int t : system.blocked_tets) vdead.at(static_cast<std::size_t>(t)) = true;
    for (int f : system.blocked_faces) edead.at(static_cast<std::size_t>(f)) = true;
    // Iterative DFS with colors; a back edge closes a witness cycle.
    std::vector<int> state(static_cast<std::size_t>(g.num_vertices), 0), via(static_cast<std::size_t>(g.num_vertices), -1);
    for (int s = 0; s < g.num_vertices; ++s) {
        if (vdead[static_cast<std::size_t>(s)] || state[static_cast<std::size_t>(s)]) continue;
        std::vector<std::pair<int, int>> stack{{s, 0}};
        state[static_cast<std::size_t>(s)] = 1;
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k == 2) {
                state[static_cast<std::size_t>(v)] = 2;
                stack.pop_back();
                continue;
            }
            const int e = g.out_edges[static_cast<std::size_t>(v)][static_cast<std::size_t>(k++)];
            const int w = g.head[static_cast<std::size_t>(e)];
            if (edead[static_cast<std::size_t>(e)] || vdead[static_cast<std::size_t>(w)]) continue;
            if (state[static_cast<std::size_t>(w)] == 1) {
                std::vector<int> edges{e};
                for (int x = v; x != w; x = g.tail[static_cast<std::size_t>(via[static_cast<std::size_t>(x)])])
                    edges.push_back(via[static_cast<std::size_t>(x)]);
                std::reverse(edges.begin(), edges.end());
                return make_cycle(g, edges);
            }
            if (state[static_cast<std::size_t>(w)] == 0) {
                state[static_cast<std::size_t>(w)] = 1;
                via[static_cast<std::size_t>(w)] = e;
                stack.emplace_back(w, 0);
            }
        }
    }
    return std::nullopt;
}

std::vector<TransverseSurface> upper_boundaries(const VeeringTriangulation& tri, const ShearingDecomposition& sd, Color c) {
    std::vector<TransverseSurface> out;
    for (int r = 0; r < static_cast<int>(sd.regions().size()); ++r)
        if (sd.regions()[static_cast<std::size_t>(r)].color == c) out.push_back(upper_boundary(tri, sd, r));
    return out;
}

std::vector<TransverseSurface> croissant_collection(const VeeringTriangulation& tri, const ShearingDecomposition& sd) {
    std::vector<TransverseSurface> out = upper_boundaries(tri, sd, Color::Blue);
    for (int f = 0; f < tri.num_faces(); ++f)
        if (sd.regions()[static_cast<std::size_t>(sd.region_of_face(f))].color == Color::Red) out.push_back(build_croissant(tri, sd, f).surface);
    return out;
}

std::string region_report(const VeeringTriangulation& tri, const ShearingDecomposition& sd) {
    std::ostringstream os;
    os << "regions " << sd.regions().size() << "\n";
    for (std::size_t r = 0; r < sd.regions().size(); ++r) {
        const auto& reg = sd.regions()[r];
        os << "region " << r << " color " << to_string(reg.color) << " length " << reg.length() << "\n  halves";
        for (const auto& h : reg.halves) os << ' ' << h.tet << (h.upper ? 'U' : 'L');
        auto list = [&](const char* name, const std::vector<int>& v) {
            os << "\n  " << name;
            for (int x : v) os << ' ' << x;
        };
        list("internal_faces", reg.internal_faces);
        list("upper_squares", reg.upper_squares);
        list("lower_squares", reg.lower_squares);
        list("upper_helical", reg.upper_helical);
        list("lower_helical", reg.lower_helical);
        list("longitudinal", reg.longitudinal);
        os << "\n";
    }
    (void)tri;
    return os.str();
}

}  // namespace veerweave
