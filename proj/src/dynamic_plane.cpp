#include "veerweave/dynamic_plane.hpp"

#include <algorithm>
#include <set>

#include "veerweave/budget.hpp"
#include "veerweave/errors.hpp"

namespace veerweave {

namespace {

bool face_has_edge(int face, int local_edge) {
    auto [a, b] = kEdgeVertices[static_cast<std::size_t>(local_edge)];
    return face != a && face != b;
}

int other_bottom_face(const VeeringTriangulation& tri, int t, int face) {
    for (int f = 0; f < 4; ++f)
        if (f != face && !tri.is_top_face(t, f)) return f;
    throw StageError("dynamic-plane", "tetrahedron without two bottom faces");
}

int flow_edge_to(const VeeringTriangulation& tri, int t, int local_edge) {
    if (local_edge == tri.top_local(t)) return 3 * t;
    auto o = tri.opposite_color_sides(t);
    if (local_edge == std::min(o[0], o[1])) return 3 * t + 1;
    if (local_edge == std::max(o[0], o[1])) return 3 * t + 2;
    throw StageError("dynamic-plane", "sector above a vertex is not carried by the flow graph");
}

}  // namespace

DescendingSet::DescendingSet(const VeeringTriangulation& tri, int tet, int left_face)
    : tri_(&tri), cap_(configured_budget(kDefaultSectorBudget)) {
    if (tri.is_top_face(tet, left_face)) throw std::invalid_argument("left face must be a bottom face");
    Node n;
    n.kind = Kind::Root;
    n.tet = tet;
    n.left_face = left_face;
    make(n);
}

int DescendingSet::right_face(int x) const { return other_bottom_face(*tri_, node(x).tet, node(x).left_face); }

std::vector<DescendingSet::StackEntry> DescendingSet::stack_below(int tet, int face) const {
    std::vector<StackEntry> out;
    int cur = tet, le = tri_->bottom_local(tet);
    for (int guard = 0; guard <= 4 * tri_->num_tets() + 4; ++guard) {
        const Gluing& g = tri_->gluing(cur, face);
        auto [a, b] = kEdgeVertices[static_cast<std::size_t>(le)];
        const int u = g.tet, lu = edge_index(g.perm[a], g.perm[b]), entry = g.perm[face];
        out.push_back({u, lu});
        if (lu == tri_->top_local(u)) {
            if (out.size() < 2) throw StageError("dynamic-plane", "empty stack");
            return out;
        }
        // The sector corner sits at the top of the stack, everything below is smooth.
        const bool same = tri_->local_color(u, lu) == tri_->local_color(u, tri_->top_local(u));
        if (same != (out.size() == 1)) throw StageError("dynamic-plane", "sector is not a diamond");
        int next = -1;
        for (int f = 0; f < 4; ++f)
            if (f != entry && face_has_edge(f, lu)) next = f;
        cur = u;
        le = lu;
        face = next;
    }
    throw StageError("dynamic-plane", "stack walk did not terminate");
}

int DescendingSet::make(Node n) {
    if (static_cast<std::int64_t>(nodes_.size()) >= cap_)
        throw BudgetError("dynamic plane window exceeds " + std::to_string(cap_) + " sectors");
    auto sl = stack_below(n.tet, n.left_face);
    auto sr = stack_below(n.tet, other_bottom_face(*tri_, n.tet, n.left_face));
    n.n = static_cast<int>(sl.size()) - 1;
    n.m = static_cast<int>(sr.size()) - 1;
    nodes_.push_back(n);
    left_.push_back(-1);
    right_.push_back(-1);
    stacks_.push_back({std::move(sl), std::move(sr)});
    return static_cast<int>(nodes_.size()) - 1;
}

std::array<int, 2> DescendingSet::step(int tet, int left_face, Side s) const {
    const int face = s == Side::Left ? left_face : other_bottom_face(*tri_, tet, left_face);
    const Gluing& g = tri_->gluing(tet, face);
    const int y = g.tet, partner = branch_partner(*tri_, y, g.perm[face]);
    return {y, s == Side::Left ? partner : other_bottom_face(*tri_, y, partner)};
}

void DescendingSet::check_step(int x, int y, Side s) const {
    auto expect = step(node(x).tet, node(x).left_face, s);
    if (expect[0] != node(y).tet || expect[1] != node(y).left_face)
        throw StageError("dynamic-plane", "inconsistent descending step");
}

int DescendingSet::ray(Kind k, int offset) {
    if (offset == 0) return root();
    auto& r = k == Kind::LeftRay ? left_ray_ : right_ray_;
    while (static_cast<int>(r.size()) < offset) {
        const int prev = r.empty() ? root() : r.back();
        const Side s = k == Kind::LeftRay ? Side::Left : Side::Right;
        auto d = step(node(prev).tet, node(prev).left_face, s);
        Node n;
        n.kind = k;
        n.tet = d[0];
        n.left_face = d[1];
        n.index = static_cast<int>(r.size()) + 1;
        const int id = make(n);
        r.push_back(id);
        auto& slot = s == Side::Left ? left_ : right_;
        slot[static_cast<std::size_t>(prev)] = id;
    }
    return r[static_cast<std::size_t>(offset - 1)];
}

int DescendingSet::child(int p, Side s, int j) {
    const std::array<int, 3> key{p, s == Side::Left ? 0 : 1, j};
    if (auto it = child_ids_.find(key); it != child_ids_.end()) return it->second;
    const Node& pn = node(p);
    std::array<int, 2> d{};
    if (s == Side::Left) {
        if (j < 1 || j > pn.n) throw std::out_of_range("left child index");
        const int upper = lt(p, pn.n - j + 1);
        d = step(node(upper).tet, node(upper).left_face, Side::Right);
    } else {
        if (j < 1 || j >= pn.m) throw std::out_of_range("right child index");
        const int upper = rt(p, pn.m - j + 1);
        d = step(node(upper).tet, node(upper).left_face, Side::Left);
    }
    const auto& entry = stacks_[static_cast<std::size_t>(p)][s == Side::Left ? 0 : 1][static_cast<std::size_t>(j)];
    if (entry.tet != d[0]) throw StageError("dynamic-plane", "child does not lie on its parent's stack");
    Node n;
    n.kind = Kind::Child;
    n.tet = d[0];
    n.left_face = d[1];
    n.index = j;
    n.parent = p;
    n.side = s;
    n.flow_edge = flow_edge_to(*tri_, entry.tet, entry.local_edge);
    const int id = make(n);
    child_ids_.emplace(key, id);
    return id;
}

// t_k on the left bottom side of the sector below p: t_n = left(p), t_0 its bottom corner.
int DescendingSet::lt(int p, int k) {
    const int n = node(p).n;
    if (k == n) return left(p);
    return child(p, Side::Left, n - k);
}

int DescendingSet::rt(int p, int k) {
    const int m = node(p).m;
    if (k == m) return right(p);
    if (k == 0) return child(p, Side::Left, node(p).n);
    return child(p, Side::Right, m - k);
}

int DescendingSet::left(int x) {
    if (left_[static_cast<std::size_t>(x)] >= 0) return left_[static_cast<std::size_t>(x)];
    const Node n = node(x);
    int y = -1;
    switch (n.kind) {
        case Kind::Root: y = ray(Kind::LeftRay, 1); break;
        case Kind::LeftRay: y = ray(Kind::LeftRay, n.index + 1); break;
        case Kind::RightRay: {
            const int z = ray(Kind::RightRay, n.index - 1);
            y = rt(z, node(z).m - 1);
            break;
        }
        case Kind::Child:
            if (n.side == Side::Left) {
                const int q = lt(n.parent, node(n.parent).n - n.index + 1);
                y = rt(q, node(q).m - 1);
            } else {
                y = rt(n.parent, node(n.parent).m - n.index - 1);
            }
            break;
    }
    check_step(x, y, Side::Left);
    left_[static_cast<std::size_t>(x)] = y;
    return y;
}

int DescendingSet::right(int x) {
    if (right_[static_cast<std::size_t>(x)] >= 0) return right_[static_cast<std::size_t>(x)];
    const Node n = node(x);
    int y = -1;
    switch (n.kind) {
        case Kind::Root: y = ray(Kind::RightRay, 1); break;
        case Kind::RightRay: y = ray(Kind::RightRay, n.index + 1); break;
        case Kind::LeftRay: {
            const int z = ray(Kind::LeftRay, n.index - 1);
            y = lt(z, node(z).n - 1);
            break;
        }
        case Kind::Child:
            if (n.side == Side::Left) {
                const int k = node(n.parent).n - n.index;
                if (k >= 1) {
                    y = lt(n.parent, k - 1);
                } else {
                    const int q = rt(n.parent, 1);
                    y = lt(q, node(q).n - 1);
                }
            } else {
                const int q = rt(n.parent, node(n.parent).m - n.index + 1);
                y = lt(q, node(q).n - 1);
            }
            break;
    }
    check_step(x, y, Side::Right);
    right_[static_cast<std::size_t>(x)] = y;
    return y;
}

std::optional<int> DescendingSet::parent(int x) const {
    const Node& n = node(x);
    if (n.kind != Kind::Child) return std::nullopt;
    return n.parent;
}

std::optional<int> DescendingSet::boundary_offset(int x) const {
    const Node& n = node(x);
    switch (n.kind) {
        case Kind::Root: return 0;
        case Kind::LeftRay: return -n.index;
        case Kind::RightRay: return n.index;
        case Kind::Child: return std::nullopt;
    }
    return std::nullopt;
}

namespace {

struct Lift {
    std::shared_ptr<DescendingSet> plane;
    std::vector<int> lifted;
    std::vector<bool> step_left;
};

// Lifts R steps of the closed walk so that v_R is the root.
Lift lift_cycle(const VeeringTriangulation& tri, const std::vector<int>& edges, const std::vector<int>& tails, int R) {
    const int L = static_cast<int>(edges.size());
    const int top = tails[static_cast<std::size_t>(R % L)];
    int left_face = -1;
    for (int f = 0; f < 4 && left_face < 0; ++f)
        if (!tri.is_top_face(top, f)) left_face = f;
    Lift out;
    out.plane = std::make_shared<DescendingSet>(tri, top, left_face);
    out.lifted.assign(static_cast<std::size_t>(R + 1), -1);
    out.step_left.assign(static_cast<std::size_t>(R), false);
    out.lifted[static_cast<std::size_t>(R)] = out.plane->root();
    for (int i = R - 1; i >= 0; --i) {
        const int up = out.lifted[static_cast<std::size_t>(i + 1)];
        const auto& n = out.plane->node(up);
        const int f = edges[static_cast<std::size_t>(i % L)];
        const bool left = tri.face_class(n.tet, n.left_face) == f;
        if (!left && tri.face_class(n.tet, out.plane->right_face(up)) != f)
            throw StageError("dynamic-plane", "cycle edge is not a bottom face of its head");
        const int down = left ? out.plane->left(up) : out.plane->right(up);
        if (out.plane->node(down).tet != tails[static_cast<std::size_t>(i % L)])
            throw StageError("dynamic-plane", "lifted cycle left its vertices");
        out.lifted[static_cast<std::size_t>(i)] = down;
        out.step_left[static_cast<std::size_t>(i)] = left;
    }
    return out;
}

int boundary_vertex(DescendingSet& d, int v, int offset) {
    int x = v;
    for (int k = 0; k < std::abs(offset); ++k) x = offset < 0 ? d.left(x) : d.right(x);
    return x;
}

// Vertices and Φ-edges of the forward path until it reaches ∂Δ(root).
std::pair<std::vector<int>, std::vector<int>> forward_path(const DescendingSet& d, int x) {
    std::vector<int> verts{x}, edges;
    while (auto p = d.parent(x)) {
        edges.push_back(d.node(x).flow_edge);
        x = *p;
        verts.push_back(x);
    }
    return {verts, edges};
}

std::vector<int> tails_of(const DualGraph& g, const std::vector<int>& edges) {
    std::vector<int> t;
    for (int e : edges) t.push_back(g.tail[static_cast<std::size_t>(e)]);
    return t;
}

bool preserves_orientation(const VeeringTriangulation& tri, const std::vector<int>& edges, const std::vector<int>& tails) {
    const int L = static_cast<int>(edges.size());
    Lift lf = lift_cycle(tri, edges, tails, L);
    return lf.plane->node(lf.lifted[0]).left_face == lf.plane->node(lf.lifted[static_cast<std::size_t>(L)]).left_face;
}

struct InvariantSearch {
    std::vector<std::vector<int>> cycles;  // flow edge sequences
    bool base_resolved = false;
    bool all_resolved = true;
    int periods = 0;
};

// Invariant Φ-paths through ∂Δ(v_0) near v_0, for an orientation-preserving deck step.
InvariantSearch find_invariant(const VeeringTriangulation& tri, const std::vector<int>& edges, const std::vector<int>& tails) {
    const int L = static_cast<int>(edges.size());
    const int span = 2 * L;
    const long long safety = static_cast<long long>(2 * L - 1) * L + L;
    InvariantSearch out;
    for (int periods = 2;; periods *= 2) {
        const long long R = static_cast<long long>(periods) * L;
        if (R > safety + static_cast<long long>(L - 1) * (L - 1) + 2LL * L) break;
        Lift lf = lift_cycle(tri, edges, tails, static_cast<int>(R));
        out = InvariantSearch{};
        out.periods = periods;
        DescendingSet& d = *lf.plane;
        for (int s = -span; s <= span; ++s) {
            auto [alpha, ae] = forward_path(d, boundary_vertex(d, lf.lifted[0], s));
            auto [beta, be] = forward_path(d, boundary_vertex(d, lf.lifted[static_cast<std::size_t>(L)], s));
            std::map<int, int> at;
            for (std::size_t i = 0; i < beta.size(); ++i) at.emplace(beta[i], static_cast<int>(i));
            bool found = false;
            for (std::size_t a = 0; a < alpha.size() && !found; ++a) {
                auto it = at.find(alpha[a]);
                if (it == at.end()) continue;
                const int b = it->second;
                found = true;
                if (static_cast<int>(a) <= b) throw StageError("dynamic-plane", "deck step does not move flow paths forward");
                // The segment of alpha from b to a covers one period.
                out.cycles.emplace_back(ae.begin() + b, ae.begin() + static_cast<std::ptrdiff_t>(a));
            }
            if (s == 0) out.base_resolved = found;
            if (!found) out.all_resolved = false;
        }
        if (out.base_resolved) return out;
    }
    throw StageError("dynamic-plane", "periodicity not detected within " + std::to_string(safety) +
                                          " flow graph steps for a cycle of length " + std::to_string(L));
}

std::vector<CycleRecord> distinct_cycles(const FlowGraph& fg, const std::vector<std::vector<int>>& seqs) {
    std::set<CycleRecord> uniq;
    for (const auto& s : seqs) uniq.insert(make_cycle(fg, s));
    return {uniq.begin(), uniq.end()};
}

std::vector<int> doubled(const std::vector<int>& v) {
    std::vector<int> out = v;
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

void require_nonbranch(const CycleRecord& c, const DualGraph& g) {
    if (c.kind != GraphKind::Dual) throw std::invalid_argument("expected a dual graph cycle");
    check_cycle(g, c);
    if (c.edges.empty()) throw std::invalid_argument("empty cycle");
    if (classify_cycle(g, c.edges) == TurnClass::Branch) throw StageError("dynamic-plane", "branch cycle has no dynamic plane");
}

}  // namespace

int DynamicPlaneWindow::vertex_at(int layer, int offset) const {
    if (std::abs(offset) > depth) throw std::out_of_range("offset beyond window depth");
    return boundary.at(static_cast<std::size_t>(layer)).at(static_cast<std::size_t>(depth + offset));
}

DynamicPlaneWindow build_window(const VeeringTriangulation& tri, const CycleRecord& c, int periods) {
    const DualGraph g = build_dual_graph(tri);
    require_nonbranch(c, g);
    if (periods < 2) throw std::invalid_argument("a window needs at least two periods");
    const int L = c.length(), R = periods * L;
    DynamicPlaneWindow w;
    w.cycle = c;
    w.periods = periods;
    w.orientation_preserving = preserves_orientation(tri, c.edges, c.vertices);
    Lift lf = lift_cycle(tri, c.edges, c.vertices, R);
    w.plane = lf.plane;
    w.lifted = lf.lifted;
    w.step_left = lf.step_left;
    w.depth = R + L;
    DescendingSet& d = *w.plane;
    w.boundary.resize(static_cast<std::size_t>(R + 1));
    w.offset_of.resize(static_cast<std::size_t>(R + 1));
    for (int i = 0; i <= R; ++i) {
        auto& b = w.boundary[static_cast<std::size_t>(i)];
        b.assign(static_cast<std::size_t>(2 * w.depth + 1), -1);
        const int v = w.lifted[static_cast<std::size_t>(i)];
        b[static_cast<std::size_t>(w.depth)] = v;
        for (int k = 1, x = v, y = v; k <= w.depth; ++k) {
            x = d.left(x);
            y = d.right(y);
            b[static_cast<std::size_t>(w.depth - k)] = x;
            b[static_cast<std::size_t>(w.depth + k)] = y;
        }
        for (int s = -w.depth; s <= w.depth; ++s) w.offset_of[static_cast<std::size_t>(i)].emplace(b[static_cast<std::size_t>(w.depth + s)], s);
    }
    w.chains.resize(static_cast<std::size_t>(R));
    for (int i = 0; i < R; ++i) {
        const bool new_right = w.step_left[static_cast<std::size_t>(i)];
        auto& out = w.chains[static_cast<std::size_t>(i)];
        SectorChain cur;
        for (int k = 0; k < w.depth; ++k) {
            const int x = w.vertex_at(i + 1, new_right ? k : -k);
            cur.sectors.push_back(x);
            const auto& n = d.node(x);
            if ((new_right ? n.m : n.n) >= 2) {
                out.push_back(std::move(cur));
                cur = SectorChain{};
            }
        }
        if (!cur.sectors.empty()) out.push_back(std::move(cur));
    }
    return w;
}

PhiPath follow_phi_path(DynamicPlaneWindow& w, int offset, int layer) {
    DescendingSet& d = *w.plane;
    PhiPath p;
    p.start_layer = layer;
    p.start_offset = offset;
    auto [verts, edges] = forward_path(d, w.vertex_at(layer, offset));
    p.vertices = std::move(verts);
    p.edges = std::move(edges);
    std::size_t idx = 0;
    for (int i = layer; i <= w.layers(); ++i) {
        const auto& off = w.offset_of[static_cast<std::size_t>(i)];
        while (idx < p.vertices.size() && !off.count(p.vertices[idx])) ++idx;
        if (idx == p.vertices.size()) throw StageError("dynamic-plane", "window too shallow: flow path left layer " + std::to_string(i) + " beyond its depth");
        p.exit_index.push_back(static_cast<int>(idx));
        p.exit_offset.push_back(off.at(p.vertices[idx]));
    }
    return p;
}

HResult compute_h(const VeeringTriangulation& tri, const CycleRecord& c) {
    const DualGraph g = build_dual_graph(tri);
    const FlowGraph fg = build_flow_graph(tri);
    require_nonbranch(c, g);
    HResult out;
    out.orientation_reversing = !preserves_orientation(tri, c.edges, c.vertices);
    if (!out.orientation_reversing) {
        InvariantSearch s = find_invariant(tri, c.edges, c.vertices);
        out.cycles = distinct_cycles(fg, s.cycles);
        out.complete = s.all_resolved;
        out.periods_used = s.periods;
        return out;
    }
    // Paths invariant under the square; keep those that are invariant under g itself.
    const std::vector<int> e2 = doubled(c.edges);
    InvariantSearch s = find_invariant(tri, e2, tails_of(g, e2));
    std::vector<std::vector<int>> halves;
    for (const auto& seq : s.cycles) {
        const std::size_t n = seq.size();
        if (n % 2 == 0 && std::equal(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(n / 2), seq.begin() + static_cast<std::ptrdiff_t>(n / 2)))
            halves.emplace_back(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(n / 2));
    }
    out.cycles = distinct_cycles(fg, halves);
    out.complete = s.all_resolved;
    out.periods_used = s.periods;
    return out;
}

std::optional<boost::rational<long long>> flow_graph_complexity(const VeeringTriangulation& tri, const CycleRecord& c) {
    const DualGraph g = build_dual_graph(tri);
    const FlowGraph fg = build_flow_graph(tri);
    require_nonbranch(c, g);
    const std::vector<int> e2 = doubled(c.edges);
    InvariantSearch s = find_invariant(tri, e2, tails_of(g, e2));
    auto cycles = distinct_cycles(fg, s.cycles);
    if (cycles.empty()) return std::nullopt;
    for (const auto& x : cycles)
        if (x.length() != cycles.front().length()) throw StageError("dynamic-plane", "elements of h(c^2) have different lengths");
    return boost::rational<long long>(cycles.front().length(), 2);
}

ComplexityBounds complexity_bounds(int delta, boost::rational<long long> complexity) {
    const long long d = delta;
    return {2 * d * d * complexity, 2 * d * d * complexity, 16 * d * d * d * complexity, 32 * d * d * d * d * complexity};
}

}  // namespace veerweave
