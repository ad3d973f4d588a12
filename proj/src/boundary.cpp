#include "veerweave/boundary.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "veerweave/errors.hpp"
#include "veerweave/union_find.hpp"

namespace veerweave {

namespace {

Perm4 swap23(const Perm4& p) { return Perm4(p[0], p[1], p[3], p[2]); }

// Crosses the face opposite vertices[3].
EdgeEmbedding step_embedding(const VeeringTriangulation& tri, const EdgeEmbedding& emb) {
    const Gluing& g = tri.gluing(emb.tet, emb.vertices[3]);
    return {g.tet, g.perm * swap23(emb.vertices)};
}

}  // namespace

std::array<EdgeStack, 2> edge_stacks(const VeeringTriangulation& tri, int e) {
    if (e < 0 || e >= tri.num_edges()) throw std::out_of_range("edge class " + std::to_string(e) + " out of range");
    const int t0 = tri.tet_below_edge(e);
    auto [a, b] = kEdgeVertices[tri.top_local(t0)];
    CuspLinks links(tri);
    if (links.vertex(t0, b, a) < links.vertex(t0, a, b)) std::swap(a, b);
    int rest[2], k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != a && v != b) rest[k++] = v;
    Perm4 base(a, b, rest[0], rest[1]);
    if (base.sign() * tri.orientation(t0) < 0) base = swap23(base);

    std::array<EdgeStack, 2> out;
    for (int s = 0; s < 2; ++s) {
        // Crossing the face opposite vertices[3] first goes right.
        EdgeStack& st = out[s];
        st.edge = e;
        st.side = s == 0 ? Side::Left : Side::Right;
        EdgeEmbedding emb{t0, s == 0 ? swap23(base) : base};
        for (int guard = 0;; ++guard) {
            emb = step_embedding(tri, emb);
            const int local = edge_index(emb.vertices[0], emb.vertices[1]);
            if (emb.tet == tri.tet_above_edge(e) && local == tri.bottom_local(emb.tet)) break;
            if (guard > 6 * tri.num_tets()) throw StageError("edge stacks", "walk around edge " + std::to_string(e) + " does not close");
            st.tetrahedra.push_back(emb.tet);
            st.embeddings.push_back(emb);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

CuspLinks::CuspLinks(const VeeringTriangulation& tri) : tri_(&tri) {
    const int n = tri.num_tets();
    const std::size_t slots = static_cast<std::size_t>(16 * n);
    UnionFind ends(slots), edges(slots);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                edges.unite(16 * t + 4 * v + f, 16 * g.tet + 4 * g.perm[v] + g.perm[f]);
                for (int w = 0; w < 4; ++w)
                    if (w != v && w != f) ends.unite(16 * t + 4 * v + w, 16 * g.tet + 4 * g.perm[v] + g.perm[w]);
            }
        }
    vertex_of_.assign(slots, -1);
    edge_of_.assign(slots, -1);
    std::vector<int> vid(slots, -1), eid(slots, -1);
    for (std::size_t s = 0; s < slots; ++s) {
        const int t = static_cast<int>(s / 16), v = static_cast<int>(s % 16 / 4), w = static_cast<int>(s % 4);
        if (v == w) continue;
        const std::size_t rv = ends.find(s);
        if (vid[rv] < 0) {
            vid[rv] = static_cast<int>(vertex_rep_.size());
            vertex_rep_.push_back({t, v, w});
        }
        vertex_of_[s] = vid[rv];
        const std::size_t re = edges.find(s);
        if (eid[re] < 0) {
            eid[re] = static_cast<int>(edge_rep_.size());
            edge_rep_.push_back({t, v, w});
        }
        edge_of_[s] = eid[re];
    }
    const int nv = num_vertices(), ne = num_edges();
    vertex_cusp_.resize(static_cast<std::size_t>(nv));
    vertex_edge_.resize(static_cast<std::size_t>(nv));
    opposite_end_.resize(static_cast<std::size_t>(nv));
    for (int x = 0; x < nv; ++x) {
        auto [t, v, w] = vertex_rep_[x];
        vertex_cusp_[x] = tri.vertex_class(t, v);
        vertex_edge_[x] = tri.edge_class(t, edge_index(v, w));
        opposite_end_[x] = vertex(t, w, v);
    }
    // Corners of a link edge slot (t, v, f) in increasing local order.
    auto corners = [](int v, int f) {
        std::array<int, 2> c{};
        int k = 0;
        for (int w = 0; w < 4; ++w)
            if (w != v && w != f) c[k++] = w;
        return c;
    };
    edge_ends_.resize(static_cast<std::size_t>(ne));
    edge_cusp_.resize(static_cast<std::size_t>(ne));
    for (int y = 0; y < ne; ++y) {
        auto [t, v, f] = edge_rep_[y];
        auto c = corners(v, f);
        edge_ends_[y] = {vertex(t, v, c[0]), vertex(t, v, c[1])};
        edge_cusp_[y] = tri.vertex_class(t, v);
    }
    // End index at each corner of every slot, relative to the class representative.
    slot_end_.assign(slots, {-1, -1});
    auto& slot_end = slot_end_;
    for (int y = 0; y < ne; ++y) {
        auto [t, v, f] = edge_rep_[y];
        auto c = corners(v, f);
        slot_end[16 * t + 4 * v + f] = {0, 1};
        const Gluing& g = tri.gluing(t, f);
        const int u = g.tet, vu = g.perm[v], fu = g.perm[f];
        auto cu = corners(vu, fu);
        // Corner c[0] maps to g.perm[c[0]].
        const bool same = g.perm[c[0]] == cu[0];
        slot_end[16 * u + 4 * vu + fu] = same ? std::array<int, 2>{0, 1} : std::array<int, 2>{1, 0};
    }
    next_ccw_.assign(static_cast<std::size_t>(2 * ne), -1);
    prev_ccw_.assign(static_cast<std::size_t>(2 * ne), -1);
    triangle_after_.assign(static_cast<std::size_t>(2 * ne), -1);
    slot_after_.assign(static_cast<std::size_t>(2 * ne), {-1, -1, -1});
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
            std::array<int, 3> w{};
            int k = 0;
            for (int x = 0; x < 4; ++x)
                if (x != v) w[k++] = x;
            if (triangle_ccw(t, v) < 0) std::swap(w[1], w[2]);
            // Counter-clockwise corners w0, w1, w2.
            for (int i = 0; i < 3; ++i) {
                const int p = w[i], q1 = w[(i + 1) % 3], q2 = w[(i + 2) % 3];
                const int from = half_edge(t, v, q2, p), to = half_edge(t, v, q1, p);
                next_ccw_[from] = to;
                prev_ccw_[to] = from;
                triangle_after_[from] = 4 * t + v;
                slot_after_[from] = {t, v, q2};
            }
        }
    for (int h : next_ccw_)
        if (h < 0) throw StageError("boundary", "incomplete rotation system");
}

int CuspLinks::half_edge(int t, int v, int f, int corner) const {
    const std::size_t s = static_cast<std::size_t>(16 * t + 4 * v + f);
    const int first = (v == 0 || f == 0) ? ((v == 1 || f == 1) ? 2 : 1) : 0;
    return 2 * edge_of_[s] + slot_end_[s][corner == first ? 0 : 1];
}

int CuspLinks::triangle_ccw(int t, int v) const {
    std::array<int, 4> order{v, 0, 0, 0};
    int k = 1;
    for (int w = 0; w < 4; ++w)
        if (w != v) order[k++] = w;
    Perm4 p(order[0], order[1], order[2], order[3]);
    return p.sign() * tri_->orientation(t) < 0 ? 1 : -1;
}

std::vector<int> CuspLinks::cusp_vertices(int cusp) const {
    std::vector<int> out;
    for (int x = 0; x < num_vertices(); ++x)
        if (vertex_cusp_[x] == cusp) out.push_back(x);
    return out;
}

int CuspLinks::triangles_in_cusp(int cusp) const {
    int count = 0;
    for (int t = 0; t < tri_->num_tets(); ++t)
        for (int v = 0; v < 4; ++v)
            if (tri_->vertex_class(t, v) == cusp) ++count;
    return count;
}

int step_tail(const CuspLinks& links, LinkStep s) { return links.edge_ends(s.edge)[s.forward ? 0 : 1]; }
int step_head(const CuspLinks& links, LinkStep s) { return links.edge_ends(s.edge)[s.forward ? 1 : 0]; }

namespace {

int tail_half(LinkStep s) { return 2 * s.edge + (s.forward ? 0 : 1); }
int head_half(LinkStep s) { return 2 * s.edge + (s.forward ? 1 : 0); }

// Half-edges strictly counter-clockwise between the outgoing and incoming
// half-edges of gamma at each of its vertices.
std::vector<bool> left_sectors(const CuspLinks& links, const std::vector<LinkStep>& gamma) {
    std::vector<bool> left(static_cast<std::size_t>(2 * links.num_edges()), false);
    const std::size_t n = gamma.size();
    for (std::size_t k = 0; k < n; ++k) {
        const int in = head_half(gamma[k]);
        const int out = tail_half(gamma[(k + 1) % n]);
        for (int h = links.next_ccw(out); h != in; h = links.next_ccw(h)) {
            if (h == out) throw StageError("boundary", "path does not pass consistently through a vertex");
            left[static_cast<std::size_t>(h)] = true;
        }
    }
    return left;
}

}  // namespace

int intersection(const CuspLinks& links, const std::vector<LinkStep>& gamma, const std::vector<LinkStep>& c) {
    auto left = left_sectors(links, gamma);
    int total = 0;
    for (const auto& s : c) {
        if (left[static_cast<std::size_t>(tail_half(s))]) ++total;
        if (left[static_cast<std::size_t>(head_half(s))]) --total;
    }
    return total;
}

// ---------------------------------------------------------------------------

int LadderDecomposition::max_length() const {
    int m = 0;
    for (const auto& p : poles) m = std::max(m, p.length());
    return m;
}

BoundaryData::BoundaryData(const VeeringTriangulation& tri) : links_(tri) {
    const CuspLinks& L = links_;
    const int nv = L.num_vertices(), ne = L.num_edges();
    auto fail = [](const std::string& msg) { return StageError("boundary", msg); };

    // Upward pole step out of each link vertex.
    std::vector<int> up_step(static_cast<std::size_t>(nv), -1), down_step(static_cast<std::size_t>(nv), -1);
    std::vector<int> pole_dir(static_cast<std::size_t>(ne), 0);
    for (int t = 0; t < tri.num_tets(); ++t)
        for (int v = 0; v < 4; ++v) {
            const bool up = L.triangle_points_up(t, v);
            const int pi_local = up ? tri.top_local(t) : tri.bottom_local(t);
            auto [p0, p1] = kEdgeVertices[pi_local];
            const int pi_corner = p0 == v ? p1 : p0;
            const Color c = tri.local_color(t, pi_local);
            int side_corner = -1;
            for (int w = 0; w < 4; ++w)
                if (w != v && w != pi_corner && tri.local_color(t, edge_index(v, w)) == c) side_corner = w;
            if (side_corner < 0) throw fail("triangle without a monochromatic side");
            int face = 6 - v - pi_corner - side_corner;
            const int y = L.edge(t, v, face);
            const int from_corner = up ? side_corner : pi_corner;
            const int dir = L.half_edge(t, v, face, from_corner) % 2 == 0 ? 1 : -1;
            if (pole_dir[y] != 0 && pole_dir[y] != dir) throw fail("inconsistent ladderpole orientation");
            pole_dir[y] = dir;
        }
    for (int y = 0; y < ne; ++y) {
        if (pole_dir[y] == 0) continue;
        auto ends = L.edge_ends(y);
        const int from = pole_dir[y] > 0 ? ends[0] : ends[1];
        const int to = pole_dir[y] > 0 ? ends[1] : ends[0];
        if (up_step[from] >= 0 || down_step[to] >= 0) throw fail("ladderpole branches at a vertex");
        up_step[from] = y;
        down_step[to] = y;
    }
    pole_of_.assign(static_cast<std::size_t>(nv), -1);
    pos_on_pole_.assign(static_cast<std::size_t>(nv), -1);

    const int ncusps = tri.num_cusps();
    for (int cusp = 0; cusp < ncusps; ++cusp) {
        LadderDecomposition ld;
        ld.cusp = cusp;
        auto verts = L.cusp_vertices(cusp);
        // Poles through every vertex; index assigned later.
        std::vector<Ladderpole> raw;
        std::map<int, int> raw_of;
        for (int x : verts) {
            if (raw_of.count(x)) continue;
            if (up_step[x] < 0) throw fail("vertex off every ladderpole");
            Ladderpole p;
            p.color = L.vertex_color(x);
            int cur = x;
            do {
                raw_of[cur] = static_cast<int>(raw.size());
                p.vertices.push_back(cur);
                const int y = up_step[cur];
                LinkStep s{y, pole_dir[y] > 0};
                p.steps.push_back(s);
                cur = step_head(L, s);
                if (L.vertex_color(cur) != p.color) throw fail("ladderpole changes color");
            } while (cur != x && static_cast<int>(p.vertices.size()) <= nv);
            if (cur != x) throw fail("ladderpole does not close");
            raw.push_back(std::move(p));
        }
        // Right neighbour of each raw pole, read off the triangle on the right of a pole step.
        // The half-edge clockwise before a step bounds the triangle on its right.
        auto right_vertex = [&](LinkStep s) { return L.half_vertex(L.prev_ccw(2 * s.edge + (s.forward ? 0 : 1)) ^ 1); };
        std::vector<int> right_of(raw.size(), -1);
        for (std::size_t r = 0; r < raw.size(); ++r) {
            for (const auto& s : raw[r].steps) {
                const int q = raw_of.at(right_vertex(s));
                if (right_of[r] >= 0 && right_of[r] != q) throw fail("ladder borders several poles");
                right_of[r] = q;
            }
        }
        // Start at the blue pole through the smallest blue vertex.
        int start = -1;
        for (int x : verts)
            if (L.vertex_color(x) == Color::Blue) {
                start = raw_of.at(x);
                break;
            }
        if (start < 0) throw fail("cusp without blue vertices");
        std::vector<int> order;
        for (int r = start;;) {
            order.push_back(r);
            r = right_of[r];
            if (r == start) break;
            if (order.size() > raw.size()) throw fail("ladderpoles do not cycle");
        }
        if (order.size() != raw.size()) throw fail("ladderpoles are not cyclically ordered");
        if (order.size() % 2 != 0) throw fail("odd number of ladderpoles");
        for (std::size_t k = 0; k < order.size(); ++k) {
            Ladderpole p = raw[order[k]];
            if (p.color != (k % 2 == 0 ? Color::Blue : Color::Red)) throw fail("ladderpole colors do not alternate");
            // Rotate so the pole starts at its smallest vertex.
            auto it = std::min_element(p.vertices.begin(), p.vertices.end());
            const auto off = it - p.vertices.begin();
            std::rotate(p.vertices.begin(), p.vertices.begin() + off, p.vertices.end());
            std::rotate(p.steps.begin(), p.steps.begin() + off, p.steps.end());
            for (std::size_t i = 0; i < p.vertices.size(); ++i) {
                pole_of_[p.vertices[i]] = static_cast<int>(k);
                pos_on_pole_[p.vertices[i]] = static_cast<int>(i);
            }
            ld.poles.push_back(std::move(p));
        }
        ladders_.push_back(std::move(ld));
    }

    // Transversals: one rung into each ladder towards the right, then up the first pole.
    for (auto& ld : ladders_) {
        const int npoles = static_cast<int>(ld.poles.size());
        const int x0 = ld.poles[0].vertices[0];
        int cur = x0;
        for (int k = 0; k < npoles; ++k) {
            // Rungs leaving cur into the triangles right of its pole: half-edges strictly
            // between the incoming and outgoing pole steps, clockwise from the outgoing one.
            const Ladderpole& pole = ld.poles[k];
            const int i = pos_on_pole_[cur];
            const LinkStep out = pole.steps[i];
            const LinkStep in = pole.steps[(i + pole.length() - 1) % pole.length()];
            const int out_h = 2 * out.edge + (out.forward ? 0 : 1);
            const int in_h = 2 * in.edge + (in.forward ? 1 : 0);
            // Counter-clockwise from in to out sweeps the right side.
            int best = -1;
            for (int h = L.next_ccw(in_h); h != out_h; h = L.next_ccw(h)) {
                const int z = L.half_vertex(h ^ 1);
                if (pole_of_[z] == (k + 1) % npoles && (best < 0 || h / 2 < best / 2)) best = h;
            }
            if (best < 0) throw fail("no rung to the next ladderpole");
            LinkStep s{best / 2, best % 2 == 0};
            ld.transversal.push_back(s);
            cur = step_head(L, s);
        }
        // Back on the first pole: go up to x0.
        const Ladderpole& p0 = ld.poles[0];
        for (int i = pos_on_pole_[cur]; p0.vertices[i] != x0; i = (i + 1) % p0.length()) ld.transversal.push_back(p0.steps[i]);
        if (intersection(L, ld.transversal, p0.steps) != 1) throw fail("transversal does not meet the first ladderpole once");
    }
}

std::array<long long, 2> BoundaryData::homology(int cusp, const std::vector<LinkStep>& closed) const {
    const auto& ld = ladders_.at(static_cast<std::size_t>(cusp));
    const long long q = intersection(links_, ld.transversal, closed);
    const long long p = -intersection(links_, ld.poles[0].steps, closed);
    return {p, q};
}

LadderDecomposition boundary_triangulation(const BoundaryData& data, int cusp) {
    if (cusp < 0 || cusp >= data.num_cusps()) throw std::out_of_range("cusp " + std::to_string(cusp) + " out of range");
    return data.cusp(cusp);
}

Params params(const VeeringTriangulation& tri, const BoundaryData& data) {
    Params p;
    p.N = tri.num_tets();
    for (int e = 0; e < tri.num_edges(); ++e)
        for (const auto& st : edge_stacks(tri, e)) p.delta = std::max(p.delta, st.length());
    for (int c = 0; c < data.num_cusps(); ++c) {
        p.nu = std::max(p.nu, data.cusp(c).multiplicity());
        p.lambda = std::max(p.lambda, data.cusp(c).max_length());
    }
    if (p.delta > 2 * p.N || p.lambda > 2 * p.N || p.nu > p.N)
        throw StageError("params", "rough bounds delta, lambda <= 2N, nu <= N fail");
    return p;
}

}  // namespace veerweave
