#include "veerweave/triangulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <variant>

#include "veerweave/errors.hpp"
#include "veerweave/union_find.hpp"

namespace veerweave {

const char* to_string(TetKind k) {
    switch (k) {
        case TetKind::Toggle: return "toggle";
        case TetKind::RedFan: return "red-fan";
        case TetKind::BlueFan: return "blue-fan";
    }
    return "?";
}

namespace {

std::string tet_loc(int t) { return "tetrahedron " + std::to_string(t); }
std::string face_loc(int t, int f) { return "tetrahedron " + std::to_string(t) + " face " + std::to_string(f); }

// Assigns class ids ordered by the smallest member, given a union-find
// over slots numbered tet * width + local.
std::vector<int> number_classes(UnionFind& uf, std::size_t width, std::vector<TetLocal>& reps) {
    std::vector<int> id(uf.size(), -1);
    reps.clear();
    for (std::size_t i = 0; i < uf.size(); ++i) {
        std::size_t r = uf.find(i);
        if (id[r] < 0) {
            id[r] = static_cast<int>(reps.size());
            reps.push_back({static_cast<int>(i / width), static_cast<int>(i % width)});
        }
        id[i] = id[r];
    }
    return id;
}

std::optional<ValidationError> check_structure(const std::vector<TetRecord>& tets) {
    const int n = static_cast<int>(tets.size());
    if (n < 1) return ValidationError("structure", "document (no tetrahedra)");
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tets[t].gluing[f];
            if (g.tet < 0 || g.tet >= n) return ValidationError("gluing involution", face_loc(t, f) + " (unglued or bad target)");
            if (!g.perm.valid()) return ValidationError("gluing involution", face_loc(t, f) + " (bad permutation)");
            if (g.face != g.perm[f]) return ValidationError("gluing involution", face_loc(t, f) + " (target face disagrees with permutation)");
            if (g.tet == t && g.face == f) return ValidationError("gluing involution", face_loc(t, f) + " (glued to itself)");
            const Gluing& back = tets[g.tet].gluing[g.face];
            if (back.tet != t || back.face != f || !(back.perm == g.perm.inverse()))
                return ValidationError("gluing involution", face_loc(t, f));
        }
        if (tets[t].taut_pair < 0 || tets[t].taut_pair > 2) return ValidationError("taut pair", tet_loc(t));
    }
    return std::nullopt;
}

}  // namespace

ClassMaps compute_classes(const std::vector<TetRecord>& tets) {
    const std::size_t n = tets.size();
    UnionFind edges(6 * n), faces(4 * n), verts(4 * n);
    for (std::size_t t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tets[t].gluing[f];
            if (g.tet < 0) continue;
            const auto u = static_cast<std::size_t>(g.tet);
            faces.unite(4 * t + f, 4 * u + g.perm[f]);
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                verts.unite(4 * t + v, 4 * u + g.perm[v]);
                for (int w = v + 1; w < 4; ++w) {
                    if (w == f) continue;
                    edges.unite(6 * t + edge_index(v, w), 6 * u + edge_index(g.perm[v], g.perm[w]));
                }
            }
        }
    }
    ClassMaps m;
    auto e = number_classes(edges, 6, m.edge_rep);
    auto fc = number_classes(faces, 4, m.face_rep);
    auto vc = number_classes(verts, 4, m.vertex_rep);
    m.edge_of.resize(n);
    m.face_of.resize(n);
    m.vertex_of.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (int i = 0; i < 6; ++i) m.edge_of[t][i] = e[6 * t + i];
        for (int i = 0; i < 4; ++i) {
            m.face_of[t][i] = fc[4 * t + i];
            m.vertex_of[t][i] = vc[4 * t + i];
        }
    }
    return m;
}

std::array<int, 2> VeeringTriangulation::bottom_vertices(int t) const {
    auto v = kEdgeVertices[bottom_[t]];
    return {v[0], v[1]};
}

std::array<int, 2> VeeringTriangulation::top_vertices(int t) const {
    auto v = kEdgeVertices[opposite_edge(bottom_[t])];
    return {v[0], v[1]};
}

bool VeeringTriangulation::is_top_face(int t, int face) const {
    auto b = bottom_vertices(t);
    return face == b[0] || face == b[1];
}

std::array<int, 2> VeeringTriangulation::opposite_color_sides(int t) const {
    std::array<int, 2> out{};
    int k = 0;
    const Color top = local_color(t, top_local(t));
    for (int e = 0; e < 6; ++e) {
        if (e == bottom_[t] || e == top_local(t)) continue;
        if (local_color(t, e) != top) out[k++] = e;
    }
    return out;
}

std::array<int, 2> VeeringTriangulation::same_color_sides(int t) const {
    std::array<int, 2> out{};
    int k = 0;
    const Color top = local_color(t, top_local(t));
    for (int e = 0; e < 6; ++e) {
        if (e == bottom_[t] || e == top_local(t)) continue;
        if (local_color(t, e) == top) out[k++] = e;
    }
    return out;
}

TetKind VeeringTriangulation::kind(int t) const {
    Color b = color(bottom_edge(t)), c = color(top_edge(t));
    if (b != c) return TetKind::Toggle;
    return c == Color::Red ? TetKind::RedFan : TetKind::BlueFan;
}

bool VeeringTriangulation::rep_is_top_face(int f) const {
    TetLocal r = face_rep(f);
    return is_top_face(r.tet, r.index);
}

namespace {

// Side-edge colors forced by the veering condition in tetrahedron t, for
// bottom vertices a, top vertices c and orientation sign o of the vertex
// order 0123. Returns the local edges colored red.
std::array<int, 2> forced_red_sides(std::array<int, 2> a, std::array<int, 2> c, int o) {
    Perm4 sigma(a[0], a[1], c[0], c[1]);
    if (o * sigma.sign() < 0) return {edge_index(a[0], c[1]), edge_index(a[1], c[0])};
    return {edge_index(a[0], c[0]), edge_index(a[1], c[1])};
}

}  // namespace

std::variant<VeeringTriangulation, ValidationError> VeeringTriangulation::check(const RawTriangulation& raw) {
    if (auto err = check_structure(raw.tets)) return *err;
    VeeringTriangulation tri;
    tri.tets_ = raw.tets;
    const int n = tri.num_tets();
    tri.classes_ = compute_classes(tri.tets_);
    const auto& cm = tri.classes_;

    // Connectivity of the dual graph.
    {
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        std::deque<int> q{0};
        seen[0] = true;
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            for (const auto& g : tri.tets_[t].gluing)
                if (!seen[g.tet]) {
                    seen[g.tet] = true;
                    q.push_back(g.tet);
                }
        }
        for (int t = 0; t < n; ++t)
            if (!seen[t]) return ValidationError("connectivity", tet_loc(t));
    }

    // Orientation by propagation: o[u] = -sign(g) o[t].
    tri.orient_.assign(static_cast<std::size_t>(n), 0);
    {
        tri.orient_[0] = 1;
        std::deque<int> q{0};
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.tets_[t].gluing[f];
                int want = -g.perm.sign() * tri.orient_[t];
                if (tri.orient_[g.tet] == 0) {
                    tri.orient_[g.tet] = want;
                    q.push_back(g.tet);
                } else if (tri.orient_[g.tet] != want) {
                    return ValidationError("orientability", face_loc(t, f));
                }
            }
        }
    }

    // Edge ends: an edge must not be identified with itself reversed.
    UnionFind ends(static_cast<std::size_t>(16 * n));
    auto end_slot = [](int t, int v, int w) { return static_cast<std::size_t>(16 * t + 4 * v + w); };
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.tets_[t].gluing[f];
            for (int v = 0; v < 4; ++v)
                for (int w = 0; w < 4; ++w)
                    if (v != w && v != f && w != f) ends.unite(end_slot(t, v, w), end_slot(g.tet, g.perm[v], g.perm[w]));
        }
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e) {
            auto [v, w] = kEdgeVertices[e];
            if (ends.find(end_slot(t, v, w)) == ends.find(end_slot(t, w, v)))
                return ValidationError("edge self-identification", tet_loc(t) + " edge " + std::to_string(e));
        }

    // Angle sum: every edge class carries exactly two pi labels.
    const int ne = tri.num_edges();
    std::vector<int> pi_count(static_cast<std::size_t>(ne), 0);
    tri.degree_.assign(static_cast<std::size_t>(ne), 0);
    for (int t = 0; t < n; ++t) {
        int k = tri.tets_[t].taut_pair;
        ++pi_count[cm.edge_of[t][k]];
        ++pi_count[cm.edge_of[t][5 - k]];
        for (int e = 0; e < 6; ++e) ++tri.degree_[cm.edge_of[t][e]];
    }
    for (int e = 0; e < ne; ++e)
        if (pi_count[e] != 2) {
            TetLocal r = cm.edge_rep[e];
            return ValidationError("angle sum", "edge class " + std::to_string(e) + " (tetrahedron " + std::to_string(r.tet) +
                                                   " edge " + std::to_string(r.index) + ", " +
                                                   std::to_string(pi_count[e]) + " pi labels)");
        }

    // Coorientations. bottom_[t] is one of the two pi edges.
    tri.bottom_.assign(static_cast<std::size_t>(n), -1);
    const int nf = tri.num_faces();
    if (raw.coorientations) {
        if (static_cast<int>(raw.coorientations->size()) != nf)
            return ValidationError("transverse-taut", "coorientation list (expected " + std::to_string(nf) + " entries)");
        for (int t = 0; t < n; ++t) {
            std::vector<int> tops;
            for (int f = 0; f < 4; ++f) {
                int fc = cm.face_of[t][f];
                bool rep_top = (*raw.coorientations)[fc];
                bool is_rep = cm.face_rep[fc].tet == t && cm.face_rep[fc].index == f;
                if (rep_top == is_rep) tops.push_back(f);
            }
            // Top faces are opposite the bottom edge's vertices.
            if (tops.size() != 2) return ValidationError("transverse-taut", tet_loc(t));
            int bottom = edge_index(tops[0], tops[1]);
            int k = tri.tets_[t].taut_pair;
            if (bottom != k && bottom != 5 - k) return ValidationError("transverse-taut", tet_loc(t));
            tri.bottom_[t] = bottom;
        }
    } else {
        // Propagate from tetrahedron 0 whose bottom edge contains vertex 0.
        tri.bottom_[0] = tri.tets_[0].taut_pair;
        std::deque<int> q{0};
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            auto bv = kEdgeVertices[tri.bottom_[t]];
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.tets_[t].gluing[f];
                bool top_here = (f == bv[0] || f == bv[1]);
                int k = tri.tets_[g.tet].taut_pair;
                // In the neighbour the shared face must be a bottom face iff it is top here.
                auto face_is_top_for = [&](int bottom_edge) {
                    auto v = kEdgeVertices[bottom_edge];
                    return g.face == v[0] || g.face == v[1];
                };
                int want = face_is_top_for(k) != top_here ? k : 5 - k;
                if (face_is_top_for(want) == top_here) return ValidationError("transverse-taut", face_loc(t, f));
                if (tri.bottom_[g.tet] < 0) {
                    tri.bottom_[g.tet] = want;
                    q.push_back(g.tet);
                } else if (tri.bottom_[g.tet] != want) {
                    return ValidationError("transverse-taut", face_loc(g.tet, g.face));
                }
            }
        }
    }
    // Each face is top in exactly one tetrahedron.
    tri.below_face_.assign(static_cast<std::size_t>(nf), -1);
    tri.above_face_.assign(static_cast<std::size_t>(nf), -1);
    tri.below_face_local_.assign(static_cast<std::size_t>(nf), -1);
    tri.above_face_local_.assign(static_cast<std::size_t>(nf), -1);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            int fc = cm.face_of[t][f];
            if (tri.is_top_face(t, f)) {
                if (tri.below_face_[fc] >= 0) return ValidationError("transverse-taut", face_loc(t, f));
                tri.below_face_[fc] = t;
                tri.below_face_local_[fc] = f;
            } else {
                if (tri.above_face_[fc] >= 0) return ValidationError("transverse-taut", face_loc(t, f));
                tri.above_face_[fc] = t;
                tri.above_face_local_[fc] = f;
            }
        }
    tri.below_edge_.assign(static_cast<std::size_t>(ne), -1);
    tri.above_edge_.assign(static_cast<std::size_t>(ne), -1);
    for (int t = 0; t < n; ++t) {
        int b = tri.bottom_edge(t), c = tri.top_edge(t);
        if (tri.above_edge_[b] >= 0 || tri.below_edge_[c] >= 0) return ValidationError("transverse-taut", tet_loc(t) + " (pi edges)");
        tri.above_edge_[b] = t;
        tri.below_edge_[c] = t;
    }

    // Veering coloring, forced up to the choice of orientation.
    std::vector<int> forced(static_cast<std::size_t>(ne), -1);
    auto forced_conflict = [&]() -> int {
        for (int t = 0; t < n; ++t) {
            auto red = forced_red_sides(tri.bottom_vertices(t), tri.top_vertices(t), tri.orient_[t]);
            for (int e = 0; e < 6; ++e) {
                if (e == tri.bottom_[t] || e == opposite_edge(tri.bottom_[t])) continue;
                int want = (e == red[0] || e == red[1]) ? 0 : 1;
                int ec = cm.edge_of[t][e];
                if (forced[ec] < 0) forced[ec] = want;
                else if (forced[ec] != want) return t;
            }
        }
        return -1;
    };
    if (raw.colors) {
        if (static_cast<int>(raw.colors->size()) != ne)
            return ValidationError("veering condition", "color list (expected " + std::to_string(ne) + " entries)");
        const auto& col = *raw.colors;
        // Local alternation first, then a globally consistent chirality.
        int chirality = 0;
        for (int t = 0; t < n; ++t) {
            auto red = forced_red_sides(tri.bottom_vertices(t), tri.top_vertices(t), tri.orient_[t]);
            int agree = 0, disagree = 0;
            for (int e = 0; e < 6; ++e) {
                if (e == tri.bottom_[t] || e == opposite_edge(tri.bottom_[t])) continue;
                bool want_red = (e == red[0] || e == red[1]);
                bool is_red = col[cm.edge_of[t][e]] == Color::Red;
                (want_red == is_red ? agree : disagree)++;
            }
            int local = agree == 4 ? 1 : disagree == 4 ? -1 : 0;
            if (local == 0) return ValidationError("veering condition", tet_loc(t));
            if (chirality == 0) chirality = local;
            else if (chirality != local) return ValidationError("veering condition", tet_loc(t) + " (chirality)");
        }
        if (chirality < 0)
            for (auto& o : tri.orient_) o = -o;
        tri.colors_ = col;
    } else {
        if (int bad = forced_conflict(); bad >= 0) return ValidationError("veering condition", tet_loc(bad) + " (no consistent coloring)");
        tri.colors_.resize(static_cast<std::size_t>(ne));
        for (int e = 0; e < ne; ++e) tri.colors_[e] = forced[e] == 0 ? Color::Red : Color::Blue;
    }

    // Every cusp link is a torus: V - E + F = 0 with E = 3F/2.
    {
        std::vector<int> corners(static_cast<std::size_t>(tri.num_cusps()), 0);
        std::vector<std::vector<std::size_t>> link_vertices(static_cast<std::size_t>(tri.num_cusps()));
        for (int t = 0; t < n; ++t)
            for (int v = 0; v < 4; ++v) {
                int cusp = cm.vertex_of[t][v];
                ++corners[cusp];
                for (int w = 0; w < 4; ++w)
                    if (w != v) link_vertices[cusp].push_back(ends.find(end_slot(t, v, w)));
            }
        for (int c = 0; c < tri.num_cusps(); ++c) {
            auto& lv = link_vertices[c];
            std::sort(lv.begin(), lv.end());
            lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
            int chi = static_cast<int>(lv.size()) - corners[c] * 3 / 2 + corners[c];
            if (chi != 0) return ValidationError("cusp link", "cusp " + std::to_string(c) + " (Euler characteristic " + std::to_string(chi) + ")");
        }
    }
    return tri;
}

VeeringTriangulation VeeringTriangulation::build(const RawTriangulation& raw) {
    auto result = check(raw);
    if (auto* err = std::get_if<ValidationError>(&result)) throw *err;
    return std::get<VeeringTriangulation>(std::move(result));
}

VeeringTriangulation VeeringTriangulation::recolored_swap() const {
    RawTriangulation r = raw();
    for (auto& c : *r.colors) c = other(c);
    return build(r);
}

RawTriangulation VeeringTriangulation::raw() const {
    RawTriangulation r;
    r.tets = tets_;
    r.colors = colors_;
    std::vector<bool> co(static_cast<std::size_t>(num_faces()));
    for (int f = 0; f < num_faces(); ++f) co[f] = rep_is_top_face(f);
    r.coorientations = co;
    return r;
}

// ---------------------------------------------------------------------------
// Native document

namespace {

const char* kTautNames[3] = {"01-23", "02-13", "03-12"};

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

int parse_int(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + s + "'");
    }
}

}  // namespace

RawTriangulation parse_native_raw(std::string_view text) {
    RawTriangulation raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    int n = -1;
    std::vector<bool> have_gluing, have_taut;
    std::optional<std::vector<std::string>> color_words, coor_words;
    int colors_line = 0, coor_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto words = split_ws(line);
        if (words.empty()) continue;
        const std::string& key = words[0];
        if (key == "num_tetrahedra") {
            if (n >= 0) throw ParseError(lineno, "duplicate num_tetrahedra");
            if (words.size() != 2) throw ParseError(lineno, "num_tetrahedra takes one value");
            n = parse_int(words[1], lineno);
            if (n < 1) throw ParseError(lineno, "num_tetrahedra must be positive");
            raw.tets.resize(static_cast<std::size_t>(n));
            have_gluing.assign(static_cast<std::size_t>(n), false);
            have_taut.assign(static_cast<std::size_t>(n), false);
            continue;
        }
        if (n < 0) throw ParseError(lineno, "num_tetrahedra must come first");
        if (key == "gluing") {
            if (words.size() != 14) throw ParseError(lineno, "gluing takes a tetrahedron index and 4 entries of (tet face perm)");
            int t = parse_int(words[1], lineno);
            if (t < 0 || t >= n) throw ParseError(lineno, "tetrahedron index out of range");
            if (have_gluing[t]) throw ParseError(lineno, "duplicate gluing line");
            have_gluing[t] = true;
            for (int f = 0; f < 4; ++f) {
                Gluing g;
                g.tet = parse_int(words[2 + 3 * f], lineno);
                g.face = parse_int(words[3 + 3 * f], lineno);
                try {
                    g.perm = Perm4::parse(words[4 + 3 * f]);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(lineno, e.what());
                }
                if (g.tet < 0 || g.tet >= n || g.face < 0 || g.face > 3) throw ParseError(lineno, "gluing target out of range");
                raw.tets[t].gluing[f] = g;
            }
        } else if (key == "taut_pair") {
            if (words.size() != 3) throw ParseError(lineno, "taut_pair takes a tetrahedron index and a pair");
            int t = parse_int(words[1], lineno);
            if (t < 0 || t >= n) throw ParseError(lineno, "tetrahedron index out of range");
            if (have_taut[t]) throw ParseError(lineno, "duplicate taut_pair line");
            auto it = std::find(std::begin(kTautNames), std::end(kTautNames), words[2]);
            if (it == std::end(kTautNames)) throw ParseError(lineno, "taut_pair must be one of 01-23, 02-13, 03-12");
            raw.tets[t].taut_pair = static_cast<int>(it - std::begin(kTautNames));
            have_taut[t] = true;
        } else if (key == "colors") {
            if (color_words) throw ParseError(lineno, "duplicate colors line");
            color_words = std::vector<std::string>(words.begin() + 1, words.end());
            colors_line = lineno;
        } else if (key == "coorientations") {
            if (coor_words) throw ParseError(lineno, "duplicate coorientations line");
            coor_words = std::vector<std::string>(words.begin() + 1, words.end());
            coor_line = lineno;
        } else {
            throw ParseError(lineno, "unknown field '" + key + "'");
        }
    }
    if (n < 0) throw ParseError(0, "missing num_tetrahedra");
    for (int t = 0; t < n; ++t) {
        if (!have_gluing[t]) throw ParseError(0, "missing gluing for tetrahedron " + std::to_string(t));
        if (!have_taut[t]) throw ParseError(0, "missing taut_pair for tetrahedron " + std::to_string(t));
    }
    if (color_words) {
        std::vector<Color> cols;
        for (const auto& w : *color_words) {
            if (w == "red") cols.push_back(Color::Red);
            else if (w == "blue") cols.push_back(Color::Blue);
            else throw ParseError(colors_line, "color must be red or blue, got '" + w + "'");
        }
        raw.colors = cols;
    }
    if (coor_words) {
        std::vector<bool> co;
        for (const auto& w : *coor_words) {
            if (w == "+") co.push_back(true);
            else if (w == "-" || w == "\xE2\x88\x92") co.push_back(false);
            else throw ParseError(coor_line, "coorientation must be + or -, got '" + w + "'");
        }
        raw.coorientations = co;
    }
    return raw;
}

VeeringTriangulation parse_native(std::string_view text) { return VeeringTriangulation::build(parse_native_raw(text)); }

std::string emit_native(const VeeringTriangulation& tri) {
    std::ostringstream os;
    os << "num_tetrahedra " << tri.num_tets() << '\n';
    for (int t = 0; t < tri.num_tets(); ++t) {
        os << "gluing " << t;
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            os << "  " << g.tet << ' ' << g.face << ' ' << g.perm.str();
        }
        os << '\n';
    }
    for (int t = 0; t < tri.num_tets(); ++t) os << "taut_pair " << t << ' ' << kTautNames[tri.tet(t).taut_pair] << '\n';
    os << "colors";
    for (int e = 0; e < tri.num_edges(); ++e) os << ' ' << to_string(tri.color(e));
    os << "\ncoorientations";
    for (int f = 0; f < tri.num_faces(); ++f) os << ' ' << (tri.rep_is_top_face(f) ? '+' : '-');
    os << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Isomorphism signatures

namespace {

int sig_value(char c) {
    if (c >= 'a' && c <= 'z') return c - 'a';
    if (c >= 'A' && c <= 'Z') return c - 'A' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '-') return 63;
    return -1;
}

std::array<Perm4, 24> lexicographic_s4() {
    std::array<Perm4, 24> out;
    std::array<int, 4> p{0, 1, 2, 3};
    int i = 0;
    do {
        out[static_cast<std::size_t>(i++)] = Perm4(p[0], p[1], p[2], p[3]);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace

std::vector<TetRecord> decode_isosig(std::string_view sig) {
    auto fail = [&](const std::string& why) -> ParseError { return ParseError(0, "isoSig '" + std::string(sig) + "': " + why); };
    for (char c : sig)
        if (sig_value(c) < 0) throw fail(std::string("illegal character '") + c + "'");
    std::size_t pos = 0;
    auto need = [&](std::size_t k) {
        if (pos + k > sig.size()) throw fail("truncated");
    };
    auto read = [&](std::size_t nchars) {
        need(nchars);
        long long v = 0;
        for (std::size_t i = 0; i < nchars; ++i) v += static_cast<long long>(sig_value(sig[pos + i])) << (6 * i);
        pos += nchars;
        return v;
    };
    if (sig.empty()) throw fail("empty");
    long long nsimp = read(1);
    std::size_t nchars = 1;
    if (nsimp == 63) {
        nchars = static_cast<std::size_t>(read(1));
        nsimp = read(nchars);
    }
    if (nsimp < 1) throw fail("no tetrahedra");
    const long long nfacets = 4 * nsimp;
    std::vector<int> actions;
    long long covered = 0, njoins = 0;
    while (covered < nfacets) {
        int v = static_cast<int>(read(1));
        for (int j = 0; j < 3; ++j) {
            int a = (v >> (2 * j)) & 3;
            if (covered == nfacets) {
                if (a != 0) throw fail("trailing facet actions");
                continue;
            }
            if (a == 0) throw fail("boundary facets are not supported");
            if (a == 3) throw fail("bad facet action");
            covered += 2;
            if (a == 2) ++njoins;
            if (covered > nfacets) throw fail("facet count overflow");
            actions.push_back(a);
        }
    }
    std::vector<long long> dest(static_cast<std::size_t>(njoins));
    for (auto& d : dest) d = read(nchars);
    std::vector<int> perms(static_cast<std::size_t>(njoins));
    for (auto& p : perms) {
        p = static_cast<int>(read(1));
        if (p >= 24) throw fail("bad permutation index");
    }
    if (pos != sig.size()) throw fail("unexpected trailing characters (multiple components are not supported)");

    const auto s4 = lexicographic_s4();
    std::vector<TetRecord> tets(static_cast<std::size_t>(nsimp));
    std::size_t act = 0, join = 0;
    int next_unused = 1;
    for (int t = 0; t < nsimp; ++t)
        for (int f = 0; f < 4; ++f) {
            if (tets[t].gluing[f].tet >= 0) continue;
            if (act >= actions.size()) throw fail("too few facet actions");
            int a = actions[act++];
            int target;
            Perm4 g;
            if (a == 1) {
                if (next_unused >= nsimp) throw fail("join to a nonexistent tetrahedron");
                target = next_unused++;
            } else {
                target = static_cast<int>(dest[join]);
                g = s4[static_cast<std::size_t>(perms[join])];
                ++join;
                if (target >= next_unused) throw fail("join to an unseen tetrahedron");
            }
            int tf = g[f];
            if (tets[target].gluing[tf].tet >= 0 || (target == t && tf == f)) throw fail("facet glued twice");
            tets[t].gluing[f] = {target, tf, g};
            tets[target].gluing[tf] = {t, f, g.inverse()};
        }
    return tets;
}

RawTriangulation decode_taut_isosig_raw(std::string_view sig) {
    auto us = sig.find('_');
    if (us == std::string_view::npos) throw ParseError(0, "taut isoSig '" + std::string(sig) + "': missing '_' separator");
    RawTriangulation raw;
    raw.tets = decode_isosig(sig.substr(0, us));
    auto digits = sig.substr(us + 1);
    if (digits.size() != raw.tets.size())
        throw ParseError(0, "taut isoSig '" + std::string(sig) + "': expected " + std::to_string(raw.tets.size()) + " angle digits");
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < '0' || digits[i] > '2') throw ParseError(0, "taut isoSig '" + std::string(sig) + "': angle digit must be 0, 1 or 2");
        raw.tets[i].taut_pair = digits[i] - '0';
    }
    return raw;
}

VeeringTriangulation decode_taut_isosig(std::string_view sig) { return VeeringTriangulation::build(decode_taut_isosig_raw(sig)); }

}  // namespace veerweave
