#include "veerweave/graphs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "veerweave/budget.hpp"
#include "veerweave/errors.hpp"

namespace veerweave {

namespace {

bool face_contains(int face, int local_edge) {
    auto [a, b] = kEdgeVertices[static_cast<std::size_t>(local_edge)];
    return face != a && face != b;
}

// The two faces of a tetrahedron containing a local edge.
std::array<int, 2> faces_of_edge(int local_edge) {
    std::array<int, 2> out{};
    int k = 0;
    for (int f = 0; f < 4; ++f)
        if (face_contains(f, local_edge)) out[k++] = f;
    return out;
}

// Leaves t through top face `face` containing `local_edge` and keeps going up
// around that edge until it becomes a bottom edge. Returns the face classes crossed.
std::vector<int> climb(const VeeringTriangulation& tri, int t, int local_edge, int face) {
    std::vector<int> out;
    for (int guard = 0; guard <= 4 * tri.num_tets() + 4; ++guard) {
        if (!tri.is_top_face(t, face)) throw StageError("graphs", "climb through a bottom face");
        out.push_back(tri.face_class(t, face));
        const Gluing& g = tri.gluing(t, face);
        auto [a, b] = kEdgeVertices[static_cast<std::size_t>(local_edge)];
        const int u = g.tet, le = edge_index(g.perm[a], g.perm[b]), entry = g.perm[face];
        if (le == tri.bottom_local(u)) return out;
        auto fs = faces_of_edge(le);
        t = u;
        local_edge = le;
        face = fs[0] == entry ? fs[1] : fs[0];
    }
    throw StageError("graphs", "climb did not terminate");
}

}  // namespace

int branch_partner(const VeeringTriangulation& tri, int t, int top_face) {
    for (int o : tri.opposite_color_sides(t))
        if (face_contains(top_face, o)) {
            for (int f : faces_of_edge(o))
                if (f != top_face) return f;
        }
    throw StageError("graphs", "top face without an opposite-colour side");
}

DualGraph build_dual_graph(const VeeringTriangulation& tri) {
    DualGraph g;
    g.num_vertices = tri.num_tets();
    const int nf = tri.num_faces();
    g.tail.resize(static_cast<std::size_t>(nf));
    g.head.resize(static_cast<std::size_t>(nf));
    for (int f = 0; f < nf; ++f) {
        g.tail[f] = tri.tet_below_face(f);
        g.head[f] = tri.tet_above_face(f);
    }
    g.out_edges.assign(static_cast<std::size_t>(g.num_vertices), {-1, -1});
    g.in_edges.assign(static_cast<std::size_t>(g.num_vertices), {-1, -1});
    g.branch_next.assign(static_cast<std::size_t>(nf), -1);
    for (int t = 0; t < g.num_vertices; ++t) {
        int no = 0, ni = 0;
        for (int f = 0; f < 4; ++f) {
            if (tri.is_top_face(t, f))
                g.out_edges[t][no++] = tri.face_class(t, f);
            else
                g.in_edges[t][ni++] = tri.face_class(t, f);
        }
        if (no != 2 || ni != 2) throw StageError("graphs", "tetrahedron without two top faces");
        for (int f = 0; f < 4; ++f)
            if (tri.is_top_face(t, f)) g.branch_next[tri.face_class(t, branch_partner(tri, t, f))] = tri.face_class(t, f);
    }
    return g;
}

FlowGraph build_flow_graph(const VeeringTriangulation& tri) {
    FlowGraph g;
    g.num_vertices = tri.num_edges();
    g.out_edges.assign(static_cast<std::size_t>(g.num_vertices), {});
    for (int t = 0; t < tri.num_tets(); ++t) {
        const int from = tri.bottom_edge(t);
        auto o = tri.opposite_color_sides(t);
        std::array<int, 3> to{tri.top_edge(t), tri.edge_class(t, std::min(o[0], o[1])), tri.edge_class(t, std::max(o[0], o[1]))};
        for (int k = 0; k < 3; ++k) {
            g.out_edges[from].push_back(static_cast<int>(g.tail.size()));
            g.tail.push_back(from);
            g.head.push_back(to[k]);
        }
    }
    for (const auto& out : g.out_edges)
        if (out.size() != 3) throw StageError("graphs", "flow graph vertex without out-degree 3");
    return g;
}

const char* to_string(GraphKind k) { return k == GraphKind::Dual ? "dual" : "flow"; }

const char* to_string(TurnClass c) {
    switch (c) {
        case TurnClass::Branch: return "branch";
        case TurnClass::AB: return "AB";
        case TurnClass::Generic: return "generic";
        case TurnClass::None: return "none";
    }
    return "?";
}

int count_antibranching_turns(const DualGraph& g, const std::vector<int>& edges) {
    const std::size_t n = edges.size();
    int count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!g.branching(edges[(i + n - 1) % n], edges[i])) ++count;
    return count;
}

TurnClass classify_cycle(const DualGraph& g, const std::vector<int>& edges) {
    const int ab = count_antibranching_turns(g, edges);
    if (ab == 0) return TurnClass::Branch;
    if (ab == static_cast<int>(edges.size())) return TurnClass::AB;
    return TurnClass::Generic;
}

std::vector<int> canonical_rotation(const std::vector<int>& tails, const std::vector<int>& edges) {
    const std::size_t n = edges.size();
    if (n == 0) return {};
    // Booth's least rotation of the (tail, edge) sequence.
    auto key = [&](std::size_t i) { return std::pair{tails[i % n], edges[i % n]}; };
    std::vector<std::ptrdiff_t> fail(2 * n, -1);
    std::size_t k = 0;
    for (std::size_t j = 1; j < 2 * n; ++j) {
        std::ptrdiff_t i = fail[j - k - 1];
        while (i != -1 && key(j) != key(k + static_cast<std::size_t>(i) + 1)) {
            if (key(j) < key(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
            i = fail[static_cast<std::size_t>(i)];
        }
        if (i == -1 && key(j) != key(k)) {
            if (key(j) < key(k)) k = j;
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k %= n;
    std::vector<int> out(edges.begin() + static_cast<std::ptrdiff_t>(k), edges.end());
    out.insert(out.end(), edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

namespace {

template <class G>
CycleRecord make_cycle_impl(const G& g, std::vector<int> edges, GraphKind kind) {
    std::vector<int> tails;
    tails.reserve(edges.size());
    for (int e : edges) tails.push_back(g.tail.at(static_cast<std::size_t>(e)));
    CycleRecord c;
    c.kind = kind;
    c.edges = canonical_rotation(tails, edges);
    for (int e : c.edges) c.vertices.push_back(g.tail[static_cast<std::size_t>(e)]);
    return c;
}

template <class G>
void check_cycle_impl(const G& g, const CycleRecord& c) {
    const std::size_t n = c.edges.size();
    if (c.vertices.size() != n) throw std::invalid_argument("cycle vertex and edge counts differ");
    for (std::size_t i = 0; i < n; ++i) {
        const int e = c.edges[i];
        if (e < 0 || e >= g.num_edges()) throw std::invalid_argument("cycle edge out of range");
        if (g.tail[e] != c.vertices[i]) throw std::invalid_argument("cycle vertex is not the tail of its edge");
        if (g.head[e] != g.tail[c.edges[(i + 1) % n]]) throw std::invalid_argument("cycle edges do not compose");
    }
}

template <class G>
std::vector<CycleRecord> enumerate_impl(const G& g, int max_len, GraphKind kind, const DualGraph* dual) {
    std::vector<CycleRecord> out;
    if (max_len <= 0) return out;
    const std::int64_t budget = configured_budget(kDefaultCycleBudget);
    if (max_len > 64) throw BudgetError("cycle length " + std::to_string(max_len) + " exceeds 64");
    std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(g.num_vertices));
    for (int e = 0; e < g.num_edges(); ++e) out_edges[g.tail[e]].push_back(e);
    std::vector<int> path, tails;
    std::int64_t steps = 0;
    for (int s = 0; s < g.num_vertices; ++s) {
        std::function<void(int)> dfs = [&](int v) {
            if (++steps > 64 * budget) throw BudgetError("cycle search exceeded " + std::to_string(64 * budget) + " steps");
            for (int e : out_edges[v]) {
                const int w = g.head[e];
                if (w < s) continue;
                path.push_back(e);
                tails.push_back(v);
                if (w == s && canonical_rotation(tails, path) == path) {
                    CycleRecord c;
                    c.kind = kind;
                    c.edges = path;
                    c.vertices = tails;
                    c.classification = dual ? classify_cycle(*dual, path) : TurnClass::None;
                    out.push_back(std::move(c));
                    if (static_cast<std::int64_t>(out.size()) > budget)
                        throw BudgetError("more than " + std::to_string(budget) + " cycle records");
                }
                if (static_cast<int>(path.size()) < max_len) dfs(w);
                path.pop_back();
                tails.pop_back();
            }
        };
        dfs(s);
    }
    std::sort(out.begin(), out.end(), [](const CycleRecord& a, const CycleRecord& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a.edges < b.edges;
    });
    return out;
}

}  // namespace

CycleRecord make_cycle(const DualGraph& g, std::vector<int> edges) {
    CycleRecord c = make_cycle_impl(g, std::move(edges), GraphKind::Dual);
    check_cycle(g, c);
    c.classification = classify_cycle(g, c.edges);
    return c;
}

CycleRecord make_cycle(const FlowGraph& g, std::vector<int> edges) {
    CycleRecord c = make_cycle_impl(g, std::move(edges), GraphKind::Flow);
    check_cycle(g, c);
    return c;
}

void check_cycle(const DualGraph& g, const CycleRecord& c) {
    check_cycle_impl(g, c);
    if (!c.edges.empty() && c.classification != TurnClass::None && c.classification != classify_cycle(g, c.edges))
        throw std::invalid_argument("stored cycle classification is stale");
}

void check_cycle(const FlowGraph& g, const CycleRecord& c) { check_cycle_impl(g, c); }

std::vector<CycleRecord> enumerate_cycles(const DualGraph& g, int max_len) {
    return enumerate_impl(g, max_len, GraphKind::Dual, &g);
}

std::vector<CycleRecord> enumerate_cycles(const FlowGraph& g, int max_len) {
    return enumerate_impl(g, max_len, GraphKind::Flow, nullptr);
}

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Hermite normal form rows (pivot positive, entries above pivots reduced).
void hermite(std::vector<std::vector<long long>>& m, std::vector<int>& pivots) {
    pivots.clear();
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        for (;;) {
            std::size_t best = m.size();
            for (std::size_t i = r; i < m.size(); ++i)
                if (m[i][c] != 0 && (best == m.size() || std::llabs(m[i][c]) < std::llabs(m[best][c]))) best = i;
            if (best == m.size()) break;
            std::swap(m[r], m[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < m.size(); ++i) {
                if (m[i][c] == 0) continue;
                const long long q = m[i][c] / m[r][c];
                for (std::size_t k = 0; k < cols; ++k) m[i][k] -= q * m[r][k];
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r < m.size() && m[r][c] != 0) {
            if (m[r][c] < 0)
                for (auto& x : m[r]) x = -x;
            for (std::size_t i = 0; i < r; ++i) {
                const long long q = floor_div(m[i][c], m[r][c]);
                for (std::size_t k = 0; k < cols; ++k) m[i][k] -= q * m[r][k];
            }
            pivots.push_back(static_cast<int>(c));
            ++r;
        }
    }
    m.resize(r);
}

// Nontrivial invariant factors of an integer matrix.
std::vector<long long> invariant_factors(std::vector<std::vector<long long>> m) {
    std::vector<long long> out;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        std::size_t pr = rows, pc = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (pr == rows || std::llabs(m[i][j]) < std::llabs(m[pr][pc]))) pr = i, pc = j;
        if (pr == rows) break;
        std::swap(m[t], m[pr]);
        for (auto& row : m) std::swap(row[t], row[pc]);
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            const long long q = m[i][t] / m[t][t];
            for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
            if (m[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            const long long q = m[t][j] / m[t][t];
            for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
            if (m[t][j] != 0) clean = false;
        }
        if (!clean) continue;
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
                    divides = false;
                    break;
                }
        if (!divides) continue;
        out.push_back(std::llabs(m[t][t]));
        ++t;
    }
    return out;
}

}  // namespace

Homology::Homology(const VeeringTriangulation& tri) : tri_(&tri), num_faces_(tri.num_faces()) {
    std::vector<std::vector<long long>> m;
    for (int e = 0; e < tri.num_edges(); ++e) {
        const int tb = tri.tet_below_edge(e), le = tri.top_local(tb);
        auto fs = faces_of_edge(le);
        std::vector<long long> row(static_cast<std::size_t>(num_faces_), 0);
        for (int f : climb(tri, tb, le, fs[0])) ++row[f];
        for (int f : climb(tri, tb, le, fs[1])) --row[f];
        m.push_back(std::move(row));
    }
    std::vector<long long> factors = invariant_factors(m);
    for (long long d : factors)
        if (d > 1) torsion_.push_back(d);
    rows_ = m;
    hermite(rows_, pivots_);
    betti_ = num_faces_ - tri.num_tets() + 1 - static_cast<int>(rows_.size());
}

std::vector<long long> Homology::reduce(std::vector<long long> chain) const {
    if (static_cast<int>(chain.size()) != num_faces_) throw std::invalid_argument("chain has the wrong length");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const std::size_t p = static_cast<std::size_t>(pivots_[i]);
        const long long q = floor_div(chain[p], rows_[i][p]);
        if (q == 0) continue;
        for (std::size_t k = 0; k < chain.size(); ++k) chain[k] -= q * rows_[i][k];
    }
    return chain;
}

bool Homology::is_boundary(const std::vector<long long>& chain) const {
    auto r = reduce(chain);
    return std::all_of(r.begin(), r.end(), [](long long x) { return x == 0; });
}

std::vector<long long> Homology::of_dual_walk(const std::vector<int>& faces) const {
    std::vector<long long> chain(static_cast<std::size_t>(num_faces_), 0);
    for (int f : faces) ++chain.at(static_cast<std::size_t>(f));
    return reduce(std::move(chain));
}

std::vector<int> flow_edge_dual_path(const VeeringTriangulation& tri, int flow_edge) {
    const int t = flow_edge / 3, k = flow_edge % 3;
    int le = tri.top_local(t);
    if (k > 0) {
        auto o = tri.opposite_color_sides(t);
        le = k == 1 ? std::min(o[0], o[1]) : std::max(o[0], o[1]);
    }
    auto fs = faces_of_edge(le);
    const int face = tri.is_top_face(t, fs[0]) ? fs[0] : fs[1];
    return climb(tri, t, le, face);
}

std::vector<long long> Homology::of_flow_walk(const std::vector<int>& flow_edges) const {
    std::vector<int> faces;
    for (int e : flow_edges) {
        auto p = flow_edge_dual_path(*tri_, e);
        faces.insert(faces.end(), p.begin(), p.end());
    }
    return of_dual_walk(faces);
}

std::vector<long long> Homology::of_link_path(const CuspLinks& links, const std::vector<LinkStep>& closed) const {
    std::vector<long long> chain(static_cast<std::size_t>(num_faces_), 0);
    const std::size_t n = closed.size();
    for (std::size_t i = 0; i < n; ++i) {
        const LinkStep in = closed[i], out = closed[(i + 1) % n];
        const int h_in = 2 * in.edge + (in.forward ? 1 : 0), h_out = 2 * out.edge + (out.forward ? 0 : 1);
        for (int a = links.prev_ccw(h_in);; a = links.prev_ccw(a)) {
            if (a == h_out) break;
            auto [t, v, f] = links.slot_after(a);
            (void)v;
            chain[tri_->face_class(t, f)] += tri_->is_top_face(t, f) ? 1 : -1;
        }
    }
    return reduce(std::move(chain));
}

std::vector<long long> homology_class(const Homology& h, const CycleRecord& c) {
    return c.kind == GraphKind::Dual ? h.of_dual_walk(c.edges) : h.of_flow_walk(c.edges);
}

std::string dual_graph_dot(const VeeringTriangulation& tri, const DualGraph& g) {
    std::ostringstream os;
    os << "digraph dual {\n";
    for (int t = 0; t < g.num_vertices; ++t) os << "  t" << t << " [label=\"" << t << " " << to_string(tri.kind(t)) << "\"];\n";
    for (int f = 0; f < g.num_edges(); ++f)
        os << "  t" << g.tail[f] << " -> t" << g.head[f] << " [label=\"f" << f << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string flow_graph_dot(const VeeringTriangulation& tri, const FlowGraph& g) {
    std::ostringstream os;
    os << "digraph flow {\n";
    for (int e = 0; e < g.num_vertices; ++e)
        os << "  e" << e << " [label=\"" << e << "\", color=" << to_string(tri.color(e)) << "];\n";
    for (int k = 0; k < g.num_edges(); ++k)
        os << "  e" << g.tail[k] << " -> e" << g.head[k] << " [label=\"t" << g.tet_of(k) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string dual_graph_edge_list(const DualGraph& g) {
    std::ostringstream os;
    os << "dual_graph " << g.num_vertices << " " << g.num_edges() << "\n";
    for (int f = 0; f < g.num_edges(); ++f) os << f << " " << g.tail[f] << " " << g.head[f] << "\n";
    return os.str();
}

std::string flow_graph_edge_list(const FlowGraph& g) {
    std::ostringstream os;
    os << "flow_graph " << g.num_vertices << " " << g.num_edges() << "\n";
    for (int k = 0; k < g.num_edges(); ++k) os << k << " " << g.tail[k] << " " << g.head[k] << " " << g.tet_of(k) << "\n";
    return os.str();
}

}  // namespace veerweave
