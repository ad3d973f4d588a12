#include "veerweave/sequencer.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "veerweave/errors.hpp"

namespace veerweave {

namespace {

int local_edge_index(int u, int w) {
    static constexpr int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return idx[u][w];
}

int mod(int a, int n) { return ((a % n) + n) % n; }

StageError fail(const std::string& msg) { return StageError("sequencer", msg); }

int pole_count(const BoundaryData& bd, int cusp) { return static_cast<int>(bd.cusp(cusp).poles.size()); }

// Poles of one color at a cusp, left to right.
std::vector<int> poles_of_color(const BoundaryData& bd, int cusp, Color c) {
    std::vector<int> out;
    const auto& poles = bd.cusp(cusp).poles;
    for (int p = 0; p < static_cast<int>(poles.size()); ++p)
        if (poles[static_cast<std::size_t>(p)].color == c) out.push_back(p);
    return out;
}

bool geometric(const BoundaryData& bd, int head, int next_tail, Transition t) {
    const auto& L = bd.links();
    if (L.vertex_cusp(head) != L.vertex_cusp(next_tail)) return false;
    const int n = pole_count(bd, L.vertex_cusp(head));
    const int shift = t == Transition::SamePole ? 0 : -2;
    return bd.pole_of(next_tail) == mod(bd.pole_of(head) + shift, n);
}

CrossingTable empty_table(const BoundaryData& bd, Color crossed) {
    CrossingTable ct;
    ct.crossed = crossed;
    for (int c = 0; c < bd.num_cusps(); ++c) ct.counts.emplace_back(static_cast<std::size_t>(pole_count(bd, c)), 0);
    return ct;
}

CrossingTable table_of(const BoundaryData& bd, const EdgeSequence& seq) {
    CrossingTable ct = empty_table(bd, other(seq.color));
    for (int i = 0; i < seq.period(); ++i) {
        if (seq.tags[static_cast<std::size_t>(i)] != Transition::TwoLeft) continue;
        const int h = seq.edges[static_cast<std::size_t>(i)].head;
        const int c = bd.links().vertex_cusp(h);
        ++ct.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(mod(bd.pole_of(h) - 1, pole_count(bd, c)))];
    }
    return ct;
}

}  // namespace

const char* to_string(Transition t) { return t == Transition::SamePole ? "same" : "left2"; }

int CrossingTable::minimum(const BoundaryData& bd, int cusp) const {
    return counts.at(static_cast<std::size_t>(cusp)).at(static_cast<std::size_t>(argmin(bd, cusp)));
}

int CrossingTable::argmin(const BoundaryData& bd, int cusp) const {
    const auto& row = counts.at(static_cast<std::size_t>(cusp));
    int best = -1;
    for (int p : poles_of_color(bd, cusp, crossed))
        if (best < 0 || row[static_cast<std::size_t>(p)] < row[static_cast<std::size_t>(best)]) best = p;
    return best;
}

SequenceBuild admissible_to_sequence(const VeeringTriangulation& tri, const std::vector<OrientedEdge>& d, const std::vector<int>& alpha) {
    if (d.empty()) throw std::invalid_argument("empty admissible collection");
    const Color col = tri.color(d.front().edge);
    for (const auto& e : d)
        if (tri.color(e.edge) != col) throw std::invalid_argument("collection is not monochromatic");
    if (!is_admissible(tri, d)) throw std::invalid_argument("collection is not admissible");
    const BoundaryData bd(tri);
    const auto& L = bd.links();
    if (static_cast<int>(alpha.size()) != bd.num_cusps()) throw std::invalid_argument("alpha needs one value per cusp");
    for (int a : alpha)
        if (a < 1) throw std::invalid_argument("alpha values must be positive");
    const Params par = params(tri, bd);
    const int M = static_cast<int>(d.size());
    const int max_alpha = *std::max_element(alpha.begin(), alpha.end());

    SequenceBuild out;
    out.copies = (par.nu * M + 1) / 2 + max_alpha + 1;
    std::vector<OrientedEdge> items = d;
    for (int c = 0; c < out.copies; ++c)
        for (int e = 0; e < tri.num_edges(); ++e) {
            if (tri.color(e) != col) continue;
            const auto& rep = tri.edge_rep(e);
            const OrientedEdge oe = oriented_edge(tri, L, rep.tet, kEdgeVertices[static_cast<std::size_t>(rep.index)][0], kEdgeVertices[static_cast<std::size_t>(rep.index)][1]);
            out.auxiliary.push_back(oe.tail < oe.head ? oe : oe.reversed());
        }
    items.insert(items.end(), out.auxiliary.begin(), out.auxiliary.end());
    for (const auto& e : out.auxiliary) items.push_back(e.reversed());
    const int n_items = static_cast<int>(items.size());

    std::vector<int> succ(static_cast<std::size_t>(n_items), -1);
    std::vector<Transition> tag(static_cast<std::size_t>(n_items), Transition::SamePole);
    // Per cusp and pole: entering items (head on the pole) and exiting items.
    std::map<std::pair<int, int>, std::vector<int>> entering, exiting;
    for (int i = 0; i < n_items; ++i) {
        const auto& e = items[static_cast<std::size_t>(i)];
        entering[{L.vertex_cusp(e.head), bd.pole_of(e.head)}].push_back(i);
        exiting[{L.vertex_cusp(e.tail), bd.pole_of(e.tail)}].push_back(i);
    }
    out.pole_order.resize(static_cast<std::size_t>(bd.num_cusps()));
    out.excess.resize(static_cast<std::size_t>(bd.num_cusps()));
    out.u.resize(static_cast<std::size_t>(bd.num_cusps()));
    for (int T = 0; T < bd.num_cusps(); ++T) {
        std::vector<int> poles = poles_of_color(bd, T, col);
        const int n = static_cast<int>(poles.size());
        std::vector<int> diff(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            diff[static_cast<std::size_t>(j)] = static_cast<int>(exiting[{T, poles[static_cast<std::size_t>(j)]}].size()) -
                                                static_cast<int>(entering[{T, poles[static_cast<std::size_t>(j)]}].size());
        // Rotate so that the minimal prefix sum sits at the last pole.
        int run = 0, best = 0, at = n - 1;
        for (int j = 0; j < n; ++j) {
            run += diff[static_cast<std::size_t>(j)];
            if (j == 0 || run < best) best = run, at = j;
        }
        std::rotate(poles.begin(), poles.begin() + (at + 1) % n, poles.end());
        std::rotate(diff.begin(), diff.begin() + (at + 1) % n, diff.end());
        std::vector<int> u(static_cast<std::size_t>(n));
        run = 0;
        for (int j = 0; j < n; ++j) {
            run += diff[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(j)] = alpha[static_cast<std::size_t>(T)] + run;
        }
        if (run != 0) throw fail("unbalanced cusp in an admissible collection");
        for (int j = 0; j < n; ++j) {
            const auto& a = entering[{T, poles[static_cast<std::size_t>(j)]}];
            const auto& b = exiting[{T, poles[static_cast<std::size_t>(j)]}];
            const int jl = mod(j - 1, n);
            const auto& b_left = exiting[{T, poles[static_cast<std::size_t>(jl)]}];
            const int s = static_cast<int>(a.size());
            const int t_left = static_cast<int>(b_left.size());
            const int stay = s - u[static_cast<std::size_t>(jl)];
            if (stay < 1 || stay > static_cast<int>(b.size())) throw fail("too few auxiliary edges at a ladderpole");
            for (int i = 0; i < s; ++i) {
                const int item = a[static_cast<std::size_t>(i)];
                if (i < stay) {
                    succ[static_cast<std::size_t>(item)] = b[static_cast<std::size_t>(i)];
                } else {
                    succ[static_cast<std::size_t>(item)] = b_left[static_cast<std::size_t>(i - s + t_left)];
                    tag[static_cast<std::size_t>(item)] = Transition::TwoLeft;
                }
            }
        }
        out.pole_order[static_cast<std::size_t>(T)] = poles;
        out.excess[static_cast<std::size_t>(T)] = diff;
        out.u[static_cast<std::size_t>(T)] = u;
    }
    std::vector<int> pred(static_cast<std::size_t>(n_items), -1);
    for (int i = 0; i < n_items; ++i) {
        const int nx = succ[static_cast<std::size_t>(i)];
        if (nx < 0 || pred[static_cast<std::size_t>(nx)] >= 0) throw fail("successor assignment is not a bijection");
        pred[static_cast<std::size_t>(nx)] = i;
    }

    // Merge cycles by exchanging labels of two items at the same ladderpole.
    auto cycle_ids = [&]() {
        std::vector<int> id(static_cast<std::size_t>(n_items), -1);
        int next = 0;
        for (int i = 0; i < n_items; ++i) {
            if (id[static_cast<std::size_t>(i)] >= 0) continue;
            for (int x = i; id[static_cast<std::size_t>(x)] < 0; x = succ[static_cast<std::size_t>(x)]) id[static_cast<std::size_t>(x)] = next;
            ++next;
        }
        return std::pair{id, next};
    };
    for (;;) {
        auto [id, count] = cycle_ids();
        if (count == 1) break;
        bool merged = false;
        for (auto& [key, a] : entering) {
            for (std::size_t i = 0; i < a.size() && !merged; ++i)
                for (std::size_t j = i + 1; j < a.size() && !merged; ++j) {
                    const int x = a[i], y = a[j];
                    if (id[static_cast<std::size_t>(x)] == id[static_cast<std::size_t>(y)]) continue;
                    std::swap(succ[static_cast<std::size_t>(x)], succ[static_cast<std::size_t>(y)]);
                    std::swap(tag[static_cast<std::size_t>(x)], tag[static_cast<std::size_t>(y)]);
                    pred[static_cast<std::size_t>(succ[static_cast<std::size_t>(x)])] = x;
                    pred[static_cast<std::size_t>(succ[static_cast<std::size_t>(y)])] = y;
                    merged = true;
                }
            if (merged) break;
        }
        if (!merged)
            for (auto& [key, b] : exiting) {
                for (std::size_t i = 0; i < b.size() && !merged; ++i)
                    for (std::size_t j = i + 1; j < b.size() && !merged; ++j) {
                        const int x = b[i], y = b[j];
                        if (id[static_cast<std::size_t>(x)] == id[static_cast<std::size_t>(y)]) continue;
                        const int px = pred[static_cast<std::size_t>(x)], py = pred[static_cast<std::size_t>(y)];
                        std::swap(succ[static_cast<std::size_t>(px)], succ[static_cast<std::size_t>(py)]);
                        std::swap(tag[static_cast<std::size_t>(px)], tag[static_cast<std::size_t>(py)]);
                        pred[static_cast<std::size_t>(x)] = py;
                        pred[static_cast<std::size_t>(y)] = px;
                        merged = true;
                    }
                if (merged) break;
            }
        if (!merged) throw fail("label exchanges left several sequences");
        ++out.merges;
    }

    EdgeSequence& seq = out.sequence;
    seq.color = col;
    for (int x = 0, n = 0; n < n_items; x = succ[static_cast<std::size_t>(x)], ++n) {
        seq.edges.push_back(items[static_cast<std::size_t>(x)]);
        seq.vertices.push_back(L.vertex_cusp(items[static_cast<std::size_t>(x)].head));
        seq.tags.push_back(tag[static_cast<std::size_t>(x)]);
    }
    if (std::none_of(seq.tags.begin(), seq.tags.end(), [](Transition t) { return t == Transition::SamePole; }))
        throw fail("constructed sequence never stays in a ladderpole");
    seq.crossings = table_of(bd, seq);
    for (int T = 0; T < bd.num_cusps(); ++T)
        if (seq.crossings.minimum(bd, T) != alpha[static_cast<std::size_t>(T)]) throw fail("crossing minimum differs from alpha");
    return out;
}

CrossingTable validate_sequence(const VeeringTriangulation& tri, const EdgeSequence& seq) {
    const BoundaryData bd(tri);
    const auto& L = bd.links();
    const int P = seq.period();
    if (P == 0) throw fail("empty edge sequence");
    if (static_cast<int>(seq.tags.size()) != P || static_cast<int>(seq.vertices.size()) != P) throw fail("sequence fields have different lengths");
    bool stays = false;
    for (int i = 0; i < P; ++i) {
        const auto& e = seq.edges[static_cast<std::size_t>(i)];
        const auto& next = seq.edges[static_cast<std::size_t>((i + 1) % P)];
        if (e.edge < 0 || e.edge >= tri.num_edges()) throw fail("edge out of range");
        if (tri.color(e.edge) != seq.color) throw fail("edge of the wrong color at index " + std::to_string(i));
        if (L.vertex_edge_class(e.tail) != e.edge || L.vertex_edge_class(e.head) != e.edge || L.opposite_end(e.tail) != e.head)
            throw fail("oriented edge ends do not belong to its edge at index " + std::to_string(i));
        if (L.vertex_cusp(e.head) != seq.vertices[static_cast<std::size_t>(i)]) throw fail("vertex list disagrees at index " + std::to_string(i));
        if (L.vertex_cusp(next.tail) != L.vertex_cusp(e.head)) throw fail("edges do not chain at index " + std::to_string(i));
        const Transition t = seq.tags[static_cast<std::size_t>(i)];
        if (!geometric(bd, e.head, next.tail, t)) {
            const Transition alt = t == Transition::SamePole ? Transition::TwoLeft : Transition::SamePole;
            if (geometric(bd, e.head, next.tail, alt)) throw fail("stored tag disagrees with the ladderpoles at index " + std::to_string(i));
            throw fail("transition at index " + std::to_string(i) + " neither stays in a ladderpole nor moves two to the left");
        }
        stays = stays || t == Transition::SamePole;
    }
    if (!stays) throw fail("no index stays in the same ladderpole");
    return table_of(bd, seq);
}

int BetaAssignment::max() const { return beta.empty() ? 0 : *std::max_element(beta.begin(), beta.end()); }

namespace {

BetaAssignment with_sums(const EdgeSequence& seq, int num_cusps, std::vector<int> beta) {
    BetaAssignment b;
    b.beta = std::move(beta);
    b.cusp_sums.assign(static_cast<std::size_t>(num_cusps), 0);
    for (int i = 0; i < seq.period(); ++i) b.cusp_sums[static_cast<std::size_t>(seq.vertices[static_cast<std::size_t>(i)])] += b.beta[static_cast<std::size_t>(i)];
    return b;
}

}  // namespace

BetaAssignment make_betas(const VeeringTriangulation& tri, const EdgeSequence& seq, std::vector<int> beta) {
    if (static_cast<int>(beta.size()) != seq.period()) throw std::invalid_argument("one beta value per sequence index required");
    for (int b : beta)
        if (b < 4) throw std::invalid_argument("beta values must be at least 4");
    return with_sums(seq, tri.num_cusps(), std::move(beta));
}

BetaAssignment constant_betas(const VeeringTriangulation& tri, const EdgeSequence& seq, int value) {
    if (value < 4) throw std::invalid_argument("beta values must be at least 4");
    return with_sums(seq, tri.num_cusps(), std::vector<int>(static_cast<std::size_t>(seq.period()), value));
}

int primitivity_floor(const Params& p) { return (16 * p.lambda + 4) * p.delta + 1; }

bool is_primitive(const std::vector<int>& edges) {
    const std::size_t n = edges.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool periodic = true;
        for (std::size_t i = d; i < n && periodic; ++i) periodic = edges[i] == edges[i - d];
        if (periodic) return false;
    }
    return n > 0;
}

BetaAssignment primitivity_betas(const VeeringTriangulation& tri, const EdgeSequence& seq) {
    const BoundaryData bd(tri);
    BetaAssignment b = constant_betas(tri, seq, primitivity_floor(params(tri, bd)));
    b.primitive_floor = true;
    if (!is_primitive(realize_gamma_cycle(tri, seq, b).cycle.edges)) {
        ++b.beta[0];
        b = with_sums(seq, tri.num_cusps(), b.beta);
        b.primitive_floor = true;
        b.incremented = true;
    }
    return b;
}

namespace {

// Local edge {a, b} of a tetrahedron, remembered at its end a.
struct Slot {
    int tet = -1;
    int a = -1;
    int b = -1;
};

class Walker {
public:
    Walker(const VeeringTriangulation& tri, const BoundaryData& bd, int delta) : tri_(tri), bd_(bd), L_(bd.links()), delta_(delta) {}

    std::vector<int> faces;

    int end(Slot s) const { return L_.vertex(s.tet, s.a, s.b); }
    int edge(Slot s) const { return tri_.edge_class(s.tet, local_edge_index(s.a, s.b)); }
    bool is_bottom(Slot s) const { return local_edge_index(s.a, s.b) == tri_.bottom_local(s.tet); }
    bool is_top(Slot s) const { return local_edge_index(s.a, s.b) == tri_.top_local(s.tet); }

    // The side edge at vertex a of the given color.
    Slot side(int t, int a, Color c) const {
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            const Slot s{t, a, b};
            if (!is_bottom(s) && !is_top(s) && tri_.local_color(t, local_edge_index(a, b)) == c) return s;
        }
        throw fail("no side edge of the requested color");
    }

    // Link edge between the ends at a of two edges sharing a face of one tetrahedron.
    LinkStep step(Slot from, Slot to) const {
        const int face = 6 - from.a - from.b - to.b;
        const int y = L_.edge(from.tet, from.a, face);
        return {y, L_.edge_ends(y)[0] == end(from)};
    }

    // Up the stack of the slot's edge to the tetrahedron above it; `carry`
    // follows along while it stays in the crossed faces.
    Slot climb(Slot s, Slot* carry = nullptr) {
        int steps = 0;
        bool alive = carry != nullptr;
        while (!is_bottom(s)) {
            if (is_top(s)) throw fail("cannot climb from the tetrahedron below an edge");
            int face = -1;
            for (int j = 0; j < 4; ++j)
                if (tri_.is_top_face(s.tet, j) && j != s.a && j != s.b) face = j;
            const Gluing& g = tri_.gluing(s.tet, face);
            faces.push_back(tri_.face_class(s.tet, face));
            if (alive) {
                if (carry->a == face || carry->b == face) alive = false;
                else *carry = {g.tet, g.perm[carry->a], g.perm[carry->b]};
            }
            s = {g.tet, g.perm[s.a], g.perm[s.b]};
            if (++steps > delta_) throw fail("stack climb longer than delta");
        }
        if (carry && !alive) throw fail("carried edge left the climbed stack");
        return s;
    }

    // Bottom edge slot of the tetrahedron above e, at the end x.
    Slot above(int x) const {
        const int e = L_.vertex_edge_class(x);
        const int t = tri_.tet_above_edge(e);
        const auto bv = tri_.bottom_vertices(t);
        for (int k = 0; k < 2; ++k)
            if (L_.vertex(t, bv[static_cast<std::size_t>(k)], bv[static_cast<std::size_t>(1 - k)]) == x) return {t, bv[static_cast<std::size_t>(k)], bv[static_cast<std::size_t>(1 - k)]};
        throw fail("link vertex is not an end of the bottom edge above it");
    }
    Slot below(int x) const {
        const int e = L_.vertex_edge_class(x);
        const int t = tri_.tet_below_edge(e);
        const auto tv = tri_.top_vertices(t);
        for (int k = 0; k < 2; ++k)
            if (L_.vertex(t, tv[static_cast<std::size_t>(k)], tv[static_cast<std::size_t>(1 - k)]) == x) return {t, tv[static_cast<std::size_t>(k)], tv[static_cast<std::size_t>(1 - k)]};
        throw fail("link vertex is not an end of the top edge below it");
    }

private:
    const VeeringTriangulation& tri_;
    const BoundaryData& bd_;
    const CuspLinks& L_;
    int delta_;
};

}  // namespace

GammaRealization realize_gamma_cycle(const VeeringTriangulation& tri, const EdgeSequence& seq, const BetaAssignment& beta) {
    validate_sequence(tri, seq);
    const int P = seq.period();
    if (static_cast<int>(beta.beta.size()) != P) throw std::invalid_argument("one beta per index required");
    for (int b : beta.beta)
        if (b < 4) throw std::invalid_argument("beta values must be at least 4");
    const BoundaryData bd(tri);
    const auto& L = bd.links();
    const Params par = params(tri, bd);
    const Color col = seq.color, opp = other(col);
    Walker w(tri, bd, par.delta);
    GammaRealization out;
    out.x.assign(static_cast<std::size_t>(P), 0);
    out.vertical.resize(static_cast<std::size_t>(P));
    out.segment_lengths.assign(static_cast<std::size_t>(P), 0);

    int i0 = 0;
    while (seq.tags[static_cast<std::size_t>(i0)] != Transition::SamePole) ++i0;
    const auto tag = [&](int i) { return seq.tags[static_cast<std::size_t>(mod(i, P))]; };
    const auto edge = [&](int i) { return seq.edges[static_cast<std::size_t>(mod(i, P))]; };

    // Arrival state at index i0: the tetrahedron above e_{i0}, at its head.
    Slot state = w.above(edge(i0).head);
    const Slot start = state;
    for (int n = 0; n < P; ++n) {
        const int i = mod(i0 + n, P);
        const std::size_t si = static_cast<std::size_t>(i);
        const std::size_t before = w.faces.size();
        const OrientedEdge e = edge(i), next = edge(i + 1);
        const int T = seq.vertices[si];
        std::vector<LinkStep> arc;
        Slot f;
        if (tag(i) == Transition::SamePole) {
            if (w.end(state) != e.head || !w.is_bottom(state)) throw fail("walker lost the head of its edge");
            f = w.side(state.tet, state.a, opp);
            arc.push_back(w.step(state, f));
            f = w.climb(f);
        } else {
            // At H_i, the tetrahedron above the edge just below the tail of e_i.
            const Slot b = w.below(e.head);
            const Slot h = w.side(b.tet, b.b, col);
            Slot g = w.side(b.tet, b.a, opp);
            arc.push_back(w.step(b, g));
            Slot carried = g;
            {
                // Transport g along the stack of h without recording faces.
                const std::size_t mark = w.faces.size();
                const Slot top = w.climb(h, &carried);
                w.faces.resize(mark);
                if (top.tet != state.tet || w.edge(top) != w.edge(state)) throw fail("walker is not at the tetrahedron above h");
            }
            const Slot G = w.climb(carried);
            f = w.side(G.tet, G.a, opp);
            arc.push_back(w.step(G, f));
            f = w.climb(f);
        }
        Slot ep = w.side(f.tet, f.a, col);
        arc.push_back(w.step(f, ep));
        Slot pos = w.climb(ep);
        const int xp = w.end(pos);
        const int y = next.tail;
        if (bd.pole_of(xp) != bd.pole_of(y) || L.vertex_cusp(xp) != T) throw fail("e' is not on the ladderpole of the next edge");
        const auto& pole = bd.cusp(T).poles[static_cast<std::size_t>(bd.pole_of(y))];
        const int len = pole.length();
        const int b_steps = mod(bd.position_on_pole(y) - bd.position_on_pole(xp) - 1, len) + 1;
        std::vector<LinkStep> ab = arc;
        for (int k = 0; k < b_steps; ++k) ab.push_back(pole.steps[static_cast<std::size_t>(mod(bd.position_on_pole(xp) + k, len))]);
        const int x = intersection(L, bd.cusp(T).transversal, ab);
        out.x[si] = x;
        if (tag(i) == Transition::SamePole ? (x < 0 || x > 2) : (x < -3 || x > 4)) out.x_within_worst_case = false;
        const int loops = beta.beta[si] - x;
        if (loops < 0) throw fail("beta smaller than the crossings of a * b");
        const long long total = b_steps + static_cast<long long>(loops) * len;
        const bool stop_early = tag(i + 1) == Transition::TwoLeft;
        const std::size_t climb_start = w.faces.size();
        for (long long k = 0; k < total; ++k) {
            if (stop_early && k + 1 == total) break;
            const Slot up = w.side(pos.tet, pos.a, col);
            pos = w.climb(up);
        }
        arc = ab;
        for (long long k = 0; k < static_cast<long long>(loops) * len; ++k)
            arc.push_back(pole.steps[static_cast<std::size_t>(mod(bd.position_on_pole(y) + static_cast<int>(k), len))]);
        if (static_cast<long long>(w.faces.size() - climb_start) > static_cast<long long>(beta.beta[si] + 4) * par.lambda * par.delta)
            throw fail("ladderpole segment exceeds (beta + 4) lambda delta");
        if (stop_early) {
            state = pos;
        } else {
            if (w.end(pos) != y) throw fail("ladderpole climb missed the next edge");
            state = {pos.tet, pos.b, pos.a};
        }
        out.vertical[si] = std::move(arc);
        out.segment_lengths[si] = static_cast<int>(w.faces.size() - before);
    }
    if (state.tet != start.tet || state.a != start.a || state.b != start.b) throw fail("walk does not close up");
    const DualGraph g = build_dual_graph(tri);
    out.cycle = make_cycle(g, w.faces);
    out.cycle.classification = classify_cycle(g, out.cycle.edges);
    if (out.cycle.classification == TurnClass::Branch) throw fail("realized cycle is a branch cycle");
    const BigInt factor = BigInt(beta.max() + 4) * par.lambda + 3;
    out.length_bound = factor * par.delta * P;
    out.complexity_bound = 2 * factor * factor * par.delta * par.delta * P * P;
    if (BigInt(out.cycle.length()) > out.length_bound) throw fail("realized cycle longer than ((max beta + 4) lambda + 3) delta P");
    return out;
}

}  // namespace veerweave
