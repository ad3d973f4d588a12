#include "veerweave/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "veerweave/errors.hpp"
#include "veerweave/graphs.hpp"

namespace veerweave {

namespace {

StageError fail(const std::string& msg) { return StageError("pipeline", msg); }

BigInt pow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

BigInt ceil_of(const Rational& r) {
    const BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (q * d < n) ++q;
    return q;
}

BigInt floor_of(const Rational& r) {
    const BigInt n = numerator(r), d = denominator(r);
    BigInt q = n / d;
    if (q * d > n) --q;
    return q;
}

int local_edge_index(int u, int w) {
    static constexpr int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return idx[u][w];
}

// Corner arcs of the squares, grouped by cusp. The boundary of a square
// runs along its four side edges with the orientation induced from its top
// faces; the arc at a vertex turns from the incoming to the outgoing side.
std::vector<std::vector<LinkStep>> corner_arcs(const VeeringTriangulation& tri, const CuspLinks& links, const std::vector<TransverseSurface>& surfaces) {
    std::vector<std::vector<LinkStep>> out(static_cast<std::size_t>(tri.num_cusps()));
    for (const auto& s : surfaces) {
        for (int q : s.squares) {
            std::vector<std::pair<int, int>> sides;
            for (int face = 0; face < 4; ++face) {
                if (!tri.is_top_face(q, face)) continue;
                int v[3], k = 0;
                for (int i = 0; i < 4; ++i)
                    if (i != face) v[k++] = i;
                if ((face % 2 == 0 ? 1 : -1) * tri.orientation(q) < 0) std::swap(v[1], v[2]);
                for (int j = 0; j < 3; ++j) {
                    const int u = v[j], w = v[(j + 1) % 3];
                    if (local_edge_index(u, w) != tri.top_local(q)) sides.push_back({u, w});
                }
            }
            for (auto [u, w] : sides) {
                for (auto [w2, z] : sides) {
                    if (w2 != w) continue;
                    const int y = links.edge(q, w, 6 - w - u - z);
                    const int from = links.vertex(q, w, u);
                    out[static_cast<std::size_t>(links.vertex_cusp(from))].push_back({y, links.edge_ends(y)[0] == from});
                }
            }
        }
    }
    return out;
}

std::vector<OrientedEdge> negated(std::vector<OrientedEdge> d) {
    for (auto& e : d) e = e.reversed();
    return d;
}

int count_squares(const std::vector<TransverseSurface>& s) {
    int n = 0;
    for (const auto& x : s) n += static_cast<int>(x.squares.size());
    return n;
}

int count_triangles(const std::vector<TransverseSurface>& s) {
    int n = 0;
    for (const auto& x : s) n += static_cast<int>(x.triangles.size());
    return n;
}

BigInt sequence_k_bound_doubled(const Params& p, int M, int max_alpha) {
    // 2 * ((nu / 2 * M + max alpha + 1) N + M)
    return (BigInt(p.nu) * M + 2 * (max_alpha + 1)) * p.N + 2 * BigInt(M);
}

void compare(BirkhoffCertificate& c, const std::string& name, const BigInt& instance, const BigInt& bound, bool at_least = false) {
    Comparison cmp{name, instance, bound, at_least};
    if (!cmp.pass()) c.failures.push_back(name + ": " + instance.str() + (at_least ? " < " : " > ") + bound.str());
    c.comparisons.push_back(std::move(cmp));
}

// One colored construction in closed mode, always carried out as the red
// construction in `work` (the triangulation itself or its mirror).
struct ClosedSide {
    const VeeringTriangulation* work = nullptr;
    BoundaryData bd;
    std::vector<TransverseSurface> annuli;
    std::vector<std::vector<LinkStep>> chains;
    SideReport report;

    explicit ClosedSide(const VeeringTriangulation& w) : work(&w), bd(w) {}
};

void prepare(ClosedSide& s, const std::vector<Meridian>& m, int N) {
    const VeeringTriangulation& t = *s.work;
    const ShearingDecomposition sd(t);
    s.annuli = upper_boundaries(t, sd, Color::Blue);
    const auto d = negated(collect_admissible(t, s.annuli));
    s.report.collection_size = static_cast<int>(d.size());
    s.report.surfaces = static_cast<int>(s.annuli.size());
    s.chains = corner_arcs(t, s.bd.links(), s.annuli);
    const auto probe = admissible_to_sequence(t, d, std::vector<int>(static_cast<std::size_t>(t.num_cusps()), 1));
    std::vector<int> alpha(static_cast<std::size_t>(t.num_cusps()));
    for (int T = 0; T < t.num_cusps(); ++T) {
        const auto& lad = s.bd.cusp(T);
        const int pole = probe.sequence.crossings.argmin(s.bd, T);
        const long long y = intersection(s.bd.links(), lad.poles[static_cast<std::size_t>(pole)].steps, s.chains[static_cast<std::size_t>(T)]);
        const long long x = intersection(s.bd.links(), lad.transversal, s.chains[static_cast<std::size_t>(T)]);
        const long long a = 3LL * N * m[static_cast<std::size_t>(T)].a - y;
        if (a < 1) throw fail("alpha_T = 3N a_T - y_T is not positive at cusp " + std::to_string(T));
        s.report.y.push_back(y);
        s.report.x.push_back(x);
        s.report.alpha.push_back(a);
        alpha[static_cast<std::size_t>(T)] = static_cast<int>(a);
    }
    s.report.build = admissible_to_sequence(t, d, alpha);
    for (int T = 0; T < t.num_cusps(); ++T)
        if (s.report.build.sequence.crossings.argmin(s.bd, T) != probe.sequence.crossings.argmin(s.bd, T))
            throw fail("minimising ladderpole depends on alpha at cusp " + std::to_string(T));
}

// All but the first beta at each cusp sit at the floor; the first one
// makes the cusp sum hit goal_T - x_T.
void realize_side(ClosedSide& s, const std::vector<long long>& goals, int floor, long long worst_budget_lhs, long long worst_budget_rhs) {
    const VeeringTriangulation& t = *s.work;
    const EdgeSequence& seq = s.report.build.sequence;
    std::vector<int> beta(static_cast<std::size_t>(seq.period()), floor);
    s.report.beta_target.assign(static_cast<std::size_t>(t.num_cusps()), 0);
    for (int T = 0; T < t.num_cusps(); ++T) {
        const long long target = goals[static_cast<std::size_t>(T)] - s.report.x[static_cast<std::size_t>(T)];
        s.report.beta_target[static_cast<std::size_t>(T)] = target;
        int first = -1;
        long long count = 0;
        for (int i = 0; i < seq.period(); ++i) {
            if (seq.vertices[static_cast<std::size_t>(i)] != T) continue;
            if (first < 0) first = i;
            ++count;
        }
        if (first < 0) throw fail("edge sequence misses cusp " + std::to_string(T));
        if (count * floor > target)
            throw fail("beta targets infeasible at cusp " + std::to_string(T) + ": " + std::to_string(count) + " * " + std::to_string(floor) + " > " +
                       std::to_string(target) + " (requires 7N^3 max a ((16 lambda + 4) delta + 1) = " + std::to_string(worst_budget_lhs) +
                       " <= 511 N^5 max a = " + std::to_string(worst_budget_rhs) + ")");
        beta[static_cast<std::size_t>(first)] = static_cast<int>(target - (count - 1) * floor);
    }
    s.report.beta = make_betas(t, seq, std::move(beta));
    s.report.beta.primitive_floor = true;
    s.report.gamma = realize_gamma_cycle(t, seq, s.report.beta);
}

// Boundary chain at cusp T: the corner arcs of the annuli and the vertical
// arcs of the helicoid.
std::vector<LinkStep> boundary_chain(const ClosedSide& s, int T) {
    std::vector<LinkStep> out = s.chains[static_cast<std::size_t>(T)];
    const auto& seq = s.report.build.sequence;
    for (int i = 0; i < seq.period(); ++i)
        if (seq.vertices[static_cast<std::size_t>(i)] == T)
            out.insert(out.end(), s.report.gamma.vertical[static_cast<std::size_t>(i)].begin(), s.report.gamma.vertical[static_cast<std::size_t>(i)].end());
    return out;
}

// Classes in the (t_T, l_T) basis with t_T oriented so that the helicoid of
// a red sequence has positive t_T-component.
std::array<long long, 2> oriented_class(const BoundaryData& bd, int T, const std::vector<LinkStep>& chain) {
    auto c = bd.homology(T, chain);
    c[0] = -c[0];
    return c;
}

std::vector<LinkStep> reversed_chain(const std::vector<LinkStep>& c) {
    std::vector<LinkStep> out;
    out.reserve(c.size());
    for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(reversed(*it));
    return out;
}

std::string join(const std::vector<long long>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

std::uint64_t fingerprint(const std::vector<int>& edges) {
    std::uint64_t h = 1469598103934665603ULL;
    for (int e : edges) {
        h ^= static_cast<std::uint64_t>(e) + 1;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

}  // namespace

Rational surface_index(long long chi_top, long long corners, long long removed_points, long long removed_corners) {
    return Rational(chi_top - removed_points) - Rational(corners + removed_corners, 4);
}

std::array<CorneredPiece, 2> split_along_arc(const CorneredPiece& p, long long chi_first, long long corners_first) {
    if (corners_first < 0 || corners_first > p.corners + 4) throw std::invalid_argument("corner split out of range");
    return {CorneredPiece{chi_first, corners_first}, CorneredPiece{p.chi_top + 1 - chi_first, p.corners + 4 - corners_first}};
}

CorneredPiece cut_nonseparating_arc(const CorneredPiece& p) { return {p.chi_top + 1, p.corners + 4}; }

Rational SurfaceLedger::index() const {
    Rational r = -Rational(squares) - Rational(triangles, 2);
    for (long long P : helicoid_periods) r -= Rational(P, 2);
    return r;
}

Rational SurfaceLedger::complexity_bound() const { return -index() + Rational(piece_intersections) + Rational(helicoid_intersections); }

const BigInt& BoundTable::at(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return e.value;
    throw std::out_of_range("no bound named " + name);
}

BigInt helicoid_intersection_bound(int delta, const BigInt& complexity, long long period) { return 32 * pow(BigInt(delta), 4) * complexity * period; }

BoundTable worst_case_bounds(int N, long long max_a, long long max_b) {
    BoundTable t;
    const BigInt n = N;
    auto add = [&](std::string name, BigInt v) { t.entries.push_back({std::move(name), std::move(v)}); };
    const BigInt c = 834632 * pow(n, 12);
    add("cusped.collection_size", 10 * n * n);
    add("cusped.period", 17 * pow(n, 4));
    add("cusped.complexity", c);
    add("cusped.complexity_statement", pow(BigInt(10), 6) * pow(n, 12));
    add("cusped.index", -ceil_of(Rational(17 * pow(n, 4), 2) + 3 * n * n));
    add("cusped.surface_complexity", ceil_of(Rational(17 * pow(n, 4), 2)) + 3 * n * n + 40 * pow(n, 4) * c + 8704 * pow(n, 8) * c);
    add("cusped.chi", -pow(BigInt(10), 10) * pow(n, 20));
    if (max_a <= 0) return t;
    const BigInt a = max_a, b = max_b < 0 ? -max_b : max_b;
    const BigInt cc = 426436808 * pow(n, 20) * pow(a + b, 2) * pow(a, 2);
    add("closed.B", 511 * pow(n, 5) * a + 6 * n * b + 4 * n);
    add("closed.period", 7 * pow(n, 3) * a);
    add("closed.beta_budget", 511 * pow(n, 5) * a);
    add("closed.complexity", cc);
    add("closed.complexity_statement", pow(BigInt(10), 10) * pow(n, 20) * pow(a + b, 2) * pow(a, 2));
    add("closed.surface_complexity", 8 * pow(n, 3) * a + 14352 * pow(n, 7) * cc * a);
    add("closed.chi", -pow(BigInt(10), 13) * pow(n, 27) * pow(a + b, 2) * pow(a, 3));
    add("closed.y_max", 2 * n);
    add("closed.x_max", 4 * n);
    return t;
}

BirkhoffCertificate birkhoff_cusped(const VeeringTriangulation& tri, const std::string& id) {
    BirkhoffCertificate c;
    c.mode = Mode::Cusped;
    c.triangulation = id;
    c.N = tri.num_tets();
    const BoundaryData bd(tri);
    c.params = params(tri, bd);
    c.worst_case = worst_case_bounds(c.N);

    const ShearingDecomposition sd(tri);
    const auto surfaces = croissant_collection(tri, sd);
    const auto d = collect_admissible(tri, surfaces);
    SideReport side;
    side.color = Color::Red;
    side.collection_size = static_cast<int>(d.size());
    side.surfaces = static_cast<int>(surfaces.size());
    side.build = admissible_to_sequence(tri, negated(d), std::vector<int>(static_cast<std::size_t>(tri.num_cusps()), 1));
    side.beta = constant_betas(tri, side.build.sequence, 4);
    side.gamma = realize_gamma_cycle(tri, side.build.sequence, side.beta);
    const int P = side.build.sequence.period();

    c.cut_witness = cut_check(tri, cut_system(surfaces));
    if (c.cut_witness) c.failures.push_back("cut check: a Γ-cycle avoids the surfaces");

    const BigInt& cx = side.gamma.complexity_bound;
    const int delta = c.params.delta;
    c.ledger.squares = count_squares(surfaces);
    c.ledger.triangles = count_triangles(surfaces);
    c.ledger.corners = 4 * c.ledger.squares + 3 * c.ledger.triangles;
    c.ledger.helicoid_periods = {P};
    c.ledger.piece_intersections = 2 * BigInt(delta) * delta * cx * (c.ledger.squares + c.ledger.triangles);
    c.ledger.helicoid_intersections = helicoid_intersection_bound(delta, cx, P);

    const auto& w = c.worst_case;
    compare(c, "collection_size", side.collection_size, w.at("cusped.collection_size"));
    compare(c, "period", P, w.at("cusped.period"));
    compare(c, "auxiliary_doubled", 2 * BigInt(side.build.k()), sequence_k_bound_doubled(c.params, side.collection_size, 1));
    compare(c, "cycle_length", side.gamma.cycle.length(), side.gamma.length_bound);
    compare(c, "complexity", cx, w.at("cusped.complexity"));
    compare(c, "index", floor_of(c.ledger.index()), w.at("cusped.index"), true);
    compare(c, "surface_complexity", ceil_of(c.ledger.complexity_bound()), w.at("cusped.surface_complexity"));
    compare(c, "chi", floor_of(c.ledger.chi_lower_bound()), w.at("cusped.chi"), true);
    c.sides.push_back(std::move(side));
    return c;
}

BirkhoffCertificate birkhoff_closed(const VeeringTriangulation& tri, const std::vector<Meridian>& meridians, const std::string& id) {
    if (static_cast<int>(meridians.size()) != tri.num_cusps()) throw std::invalid_argument("one meridian per cusp required");
    for (std::size_t T = 0; T < meridians.size(); ++T)
        if (meridians[T].a <= 0) throw std::invalid_argument("meridian at cusp " + std::to_string(T) + " needs a > 0");

    BirkhoffCertificate c;
    c.mode = Mode::Closed;
    c.triangulation = id;
    c.meridians = meridians;
    c.N = tri.num_tets();
    const int N = c.N;
    long long max_a = 0, max_b = 0;
    for (const auto& m : meridians) {
        max_a = std::max(max_a, m.a);
        max_b = std::max(max_b, m.b < 0 ? -m.b : m.b);
    }
    c.worst_case = worst_case_bounds(N, max_a, max_b);

    const VeeringTriangulation mirror = tri.recolored_swap();
    ClosedSide right(tri), left(mirror);
    c.params = params(tri, right.bd);
    right.report.color = Color::Red;
    left.report.color = Color::Blue;
    prepare(right, meridians, N);
    prepare(left, meridians, N);

    // The mirror shares link ids with tri but has its own transversals and
    // first poles; express those in the basis of tri.
    std::vector<std::array<long long, 2>> mt, ml;
    for (int T = 0; T < tri.num_cusps(); ++T) {
        mt.push_back(right.bd.homology(T, left.bd.cusp(T).transversal));
        ml.push_back(right.bd.homology(T, left.bd.cusp(T).poles[0].steps));
        if (ml.back()[0] != 0 || (ml.back()[1] != 1 && ml.back()[1] != -1)) throw fail("mirror ladderpole is not a primitive ladderpole class");
    }

    const int floor = primitivity_floor(c.params);
    const long long budget_lhs = 7LL * N * N * N * max_a * floor;
    const long long budget_rhs = 511LL * N * N * N * N * N * max_a;
    c.B.clear();
    for (const auto& m : meridians) c.B.push_back(511LL * N * N * N * N * N * max_a + 6LL * N * (m.b < 0 ? -m.b : m.b) + 4LL * N);

    const Homology hom(tri);
    constexpr int kMaxPerturbations = 16;
    for (;;) {
        if (c.perturbations > kMaxPerturbations) throw fail("no primitive, distinct pair of cycles found");
        std::vector<long long> goal_r, goal_l;
        for (int T = 0; T < tri.num_cusps(); ++T) {
            const auto& m = meridians[static_cast<std::size_t>(T)];
            goal_r.push_back(c.B[static_cast<std::size_t>(T)] + 6LL * N * m.b);
            // Pre-reversal class of the left boundary in the mirror is
            // (-3N a, q); in tri it must be (3N a, B) before orientation.
            const long long p_m = -3LL * N * m.a;
            const auto& t_ = mt[static_cast<std::size_t>(T)];
            const long long s = ml[static_cast<std::size_t>(T)][1];
            goal_l.push_back((c.B[static_cast<std::size_t>(T)] - p_m * t_[1]) * s);
        }
        realize_side(right, goal_r, floor, budget_lhs, budget_rhs);
        if (!is_primitive(right.report.gamma.cycle.edges)) {
            ++c.B[0];
            ++c.perturbations;
            right.report.beta.incremented = true;
            continue;
        }
        realize_side(left, goal_l, floor, budget_lhs, budget_rhs);
        if (!is_primitive(left.report.gamma.cycle.edges)) {
            ++c.B[0];
            ++c.perturbations;
            left.report.beta.incremented = true;
            continue;
        }
        if (homology_class(hom, right.report.gamma.cycle) == homology_class(hom, left.report.gamma.cycle)) {
            c.collision_detected = true;
            ++c.B[0];
            ++c.perturbations;
            continue;
        }
        break;
    }

    for (int T = 0; T < tri.num_cusps(); ++T) {
        const auto& m = meridians[static_cast<std::size_t>(T)];
        CuspClass cl;
        cl.cusp = T;
        cl.B = c.B[static_cast<std::size_t>(T)];
        cl.right = oriented_class(right.bd, T, boundary_chain(right, T));
        cl.left = oriented_class(right.bd, T, reversed_chain(boundary_chain(left, T)));
        cl.sum = {cl.right[0] + cl.left[0], cl.right[1] + cl.left[1]};
        cl.expected = {6LL * N * m.a, 6LL * N * m.b};
        if (!cl.exact())
            c.failures.push_back("boundary class at cusp " + std::to_string(T) + ": (" + std::to_string(cl.sum[0]) + ", " + std::to_string(cl.sum[1]) +
                                 ") != 6N (a, b)");
        c.classes.push_back(cl);
    }

    const auto& w = c.worst_case;
    const BigInt d2 = BigInt(c.params.delta) * c.params.delta;
    const long long P_r = right.report.build.sequence.period(), P_l = left.report.build.sequence.period();
    c.ledger.squares = count_squares(right.annuli) + count_squares(left.annuli);
    c.ledger.corners = 4 * c.ledger.squares;
    c.ledger.helicoid_periods = {P_r, P_l};
    for (const ClosedSide* s : {&right, &left}) {
        const BigInt& cx = s->report.gamma.complexity_bound;
        c.ledger.piece_intersections += 2 * d2 * cx;
        c.ledger.helicoid_intersections += helicoid_intersection_bound(c.params.delta, cx, P_r + P_l);
    }
    compare(c, "beta_budget", budget_lhs, w.at("closed.beta_budget"));
    for (int T = 0; T < tri.num_cusps(); ++T) {
        const long long formula = c.B[static_cast<std::size_t>(T)] - (T == 0 ? c.perturbations : 0);
        const auto& m = meridians[static_cast<std::size_t>(T)];
        if (formula != 511LL * N * N * N * N * N * max_a + 6LL * N * (m.b < 0 ? -m.b : m.b) + 4LL * N) c.failures.push_back("B_T formula mismatch");
        compare(c, "B_" + std::to_string(T), formula, w.at("closed.B"));
    }
    for (const ClosedSide* s : {&right, &left}) {
        const std::string tag = s == &right ? "right." : "left.";
        const auto& r = s->report;
        int max_alpha = 0;
        for (long long a : r.alpha) max_alpha = std::max(max_alpha, static_cast<int>(a));
        compare(c, tag + "collection_size", r.collection_size, 2 * BigInt(N));
        compare(c, tag + "period", r.build.sequence.period(), w.at("closed.period"));
        compare(c, tag + "auxiliary_doubled", 2 * BigInt(r.build.k()), sequence_k_bound_doubled(c.params, r.collection_size, max_alpha));
        compare(c, tag + "cycle_length", r.gamma.cycle.length(), r.gamma.length_bound);
        compare(c, tag + "complexity", r.gamma.complexity_bound, w.at("closed.complexity"));
    }
    compare(c, "surface_complexity", ceil_of(c.ledger.complexity_bound()), w.at("closed.surface_complexity"));
    compare(c, "chi", floor_of(c.ledger.chi_lower_bound()), w.at("closed.chi"), true);
    c.sides.push_back(std::move(right.report));
    c.sides.push_back(std::move(left.report));
    return c;
}

std::string render_text(const BirkhoffCertificate& c) {
    std::ostringstream os;
    os << "mode: " << (c.mode == Mode::Cusped ? "cusped" : "closed") << "\n";
    os << "triangulation: " << c.triangulation << "\n";
    os << "N: " << c.N << "\ndelta: " << c.params.delta << "\nnu: " << c.params.nu << "\nlambda: " << c.params.lambda << "\n";
    for (std::size_t T = 0; T < c.meridians.size(); ++T) os << "meridian." << T << ": " << c.meridians[T].a << " " << c.meridians[T].b << "\n";
    for (std::size_t T = 0; T < c.B.size(); ++T) os << "B." << T << ": " << c.B[T] << "\n";
    for (const auto& s : c.sides) {
        const std::string p = std::string("side.") + to_string(s.color) + ".";
        const auto& seq = s.build.sequence;
        os << p << "surfaces: " << s.surfaces << "\n";
        os << p << "collection_size: " << s.collection_size << "\n";
        os << p << "auxiliary: " << s.build.k() << "\n";
        os << p << "period: " << seq.period() << "\n";
        if (!s.y.empty()) {
            os << p << "y: " << join(s.y) << "\n" << p << "x: " << join(s.x) << "\n";
            os << p << "alpha: " << join(s.alpha) << "\n" << p << "beta_target: " << join(s.beta_target) << "\n";
        }
        os << p << "beta_max: " << s.beta.max() << "\n";
        os << p << "beta_sums: " << join(s.beta.cusp_sums) << "\n";
        os << p << "beta_incremented: " << (s.beta.incremented ? "yes" : "no") << "\n";
        os << p << "cycle_length: " << s.gamma.cycle.length() << "\n";
        os << p << "cycle_fingerprint: " << std::hex << fingerprint(s.gamma.cycle.edges) << std::dec << "\n";
        os << p << "cycle_length_bound: " << s.gamma.length_bound << "\n";
        os << p << "complexity_bound: " << s.gamma.complexity_bound << "\n";
    }
    for (const auto& cl : c.classes) {
        const std::string p = "class." + std::to_string(cl.cusp) + ".";
        os << p << "right: " << cl.right[0] << " " << cl.right[1] << "\n";
        os << p << "left: " << cl.left[0] << " " << cl.left[1] << "\n";
        os << p << "sum: " << cl.sum[0] << " " << cl.sum[1] << "\n";
        os << p << "expected: " << cl.expected[0] << " " << cl.expected[1] << "\n";
    }
    if (c.mode == Mode::Closed) {
        os << "collision: " << (c.collision_detected ? "yes" : "no") << "\n";
        os << "perturbations: " << c.perturbations << "\n";
    } else {
        os << "cut_check: " << (c.cut_witness ? "cyclic" : "acyclic") << "\n";
    }
    os << "ledger.squares: " << c.ledger.squares << "\nledger.triangles: " << c.ledger.triangles << "\nledger.corners: " << c.ledger.corners << "\n";
    os << "ledger.helicoid_periods: " << join(c.ledger.helicoid_periods) << "\n";
    os << "ledger.index: " << rational_str(c.ledger.index()) << "\n";
    os << "ledger.piece_intersections: " << c.ledger.piece_intersections << "\n";
    os << "ledger.helicoid_intersections: " << c.ledger.helicoid_intersections << "\n";
    os << "ledger.complexity_bound: " << rational_str(c.ledger.complexity_bound()) << "\n";
    for (const auto& e : c.worst_case.entries) os << "worst." << e.name << ": " << e.value << "\n";
    for (const auto& cmp : c.comparisons)
        os << "check." << cmp.name << ": " << cmp.instance << (cmp.at_least ? " >= " : " <= ") << cmp.bound << " " << (cmp.pass() ? "pass" : "FAIL") << "\n";
    os << "result: " << (c.passed() ? "pass" : "fail") << "\n";
    if (!c.passed()) {
        os << "failures:\n";
        for (const auto& f : c.failures) os << "  " << f << "\n";
    }
    return os.str();
}

std::string render_machine(const BirkhoffCertificate& c) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["mode"] = c.mode == Mode::Cusped ? "cusped" : "closed";
    j["triangulation"] = c.triangulation;
    j["N"] = c.N;
    j["params"] = {{"delta", c.params.delta}, {"nu", c.params.nu}, {"lambda", c.params.lambda}};
    j["meridians"] = ordered_json::array();
    for (const auto& m : c.meridians) j["meridians"].push_back({m.a, m.b});
    j["B"] = c.B;
    j["sides"] = ordered_json::array();
    for (const auto& s : c.sides) {
        ordered_json o;
        o["color"] = to_string(s.color);
        o["surfaces"] = s.surfaces;
        o["collection_size"] = s.collection_size;
        o["auxiliary"] = s.build.k();
        o["period"] = s.build.sequence.period();
        o["y"] = s.y;
        o["x"] = s.x;
        o["alpha"] = s.alpha;
        o["beta_target"] = s.beta_target;
        o["beta_max"] = s.beta.max();
        o["beta_sums"] = s.beta.cusp_sums;
        o["beta_incremented"] = s.beta.incremented;
        o["cycle_length"] = s.gamma.cycle.length();
        o["cycle_length_bound"] = s.gamma.length_bound.str();
        o["complexity_bound"] = s.gamma.complexity_bound.str();
        j["sides"].push_back(std::move(o));
    }
    j["classes"] = ordered_json::array();
    for (const auto& cl : c.classes) j["classes"].push_back({{"cusp", cl.cusp}, {"right", cl.right}, {"left", cl.left}, {"sum", cl.sum}, {"expected", cl.expected}});
    j["collision"] = c.collision_detected;
    j["perturbations"] = c.perturbations;
    j["cut_check"] = c.cut_witness ? "cyclic" : "acyclic";
    j["ledger"] = {{"squares", c.ledger.squares},
                   {"triangles", c.ledger.triangles},
                   {"corners", c.ledger.corners},
                   {"helicoid_periods", c.ledger.helicoid_periods},
                   {"index", rational_str(c.ledger.index())},
                   {"piece_intersections", c.ledger.piece_intersections.str()},
                   {"helicoid_intersections", c.ledger.helicoid_intersections.str()},
                   {"complexity_bound", rational_str(c.ledger.complexity_bound())}};
    j["worst_case"] = ordered_json::object();
    for (const auto& e : c.worst_case.entries) j["worst_case"][e.name] = e.value.str();
    j["checks"] = ordered_json::array();
    for (const auto& cmp : c.comparisons)
        j["checks"].push_back({{"name", cmp.name}, {"instance", cmp.instance.str()}, {"bound", cmp.bound.str()}, {"relation", cmp.at_least ? ">=" : "<="}, {"pass", cmp.pass()}});
    j["result"] = c.passed() ? "pass" : "fail";
    j["failures"] = c.failures;
    return j.dump(2) + "\n";
}

}  // namespace veerweave
