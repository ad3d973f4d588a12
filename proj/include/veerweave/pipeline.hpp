#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "veerweave/boundary.hpp"
#include "veerweave/sequencer.hpp"
#include "veerweave/shearing.hpp"
#include "veerweave/triangulation.hpp"

namespace veerweave {

using Rational = boost::multiprecision::cpp_rational;

// ind = chi_top - points - (corners + removed_corners) / 4, where `points`
// interior points and `removed_corners` corners have been deleted.
Rational surface_index(long long chi_top, long long corners, long long removed_points = 0, long long removed_corners = 0);

// A formal surface with corners, tracked only by its underlying Euler
// characteristic and corner count.
struct CorneredPiece {
    long long chi_top = 1;
    long long corners = 0;
    Rational index() const { return surface_index(chi_top, corners); }
};

// Cutting along a properly embedded arc whose endpoints are not corners adds
// four corners; a separating arc splits the piece and raises the total
// Euler characteristic by one. The first part gets `chi_first` and
// `corners_first` of the old and new corners.
std::array<CorneredPiece, 2> split_along_arc(const CorneredPiece& p, long long chi_first, long long corners_first);
CorneredPiece cut_nonseparating_arc(const CorneredPiece& p);

struct SurfaceLedger {
    long long squares = 0;    // index -1 each
    long long triangles = 0;  // index -1/2 each
    std::vector<long long> helicoid_periods;  // index -P/2 each
    long long corners = 0;
    // Upper bounds on the intersections of the boundary orbits with the pieces.
    BigInt piece_intersections = 0;
    BigInt helicoid_intersections = 0;

    Rational index() const;
    // Upper bound on the complexity: -index plus all intersections.
    Rational complexity_bound() const;
    // Lower bound on the Euler characteristic after resolution.
    Rational chi_lower_bound() const { return -complexity_bound(); }
};

struct BoundEntry {
    std::string name;
    BigInt value;
};

struct BoundTable {
    std::vector<BoundEntry> entries;
    const BigInt& at(const std::string& name) const;
};

// Closed-form bounds; max_a = 0 selects the cusped table only.
BoundTable worst_case_bounds(int N, long long max_a = 0, long long max_b = 0);
BigInt helicoid_intersection_bound(int delta, const BigInt& complexity, long long period);

struct Comparison {
    std::string name;
    BigInt instance;
    BigInt bound;
    bool at_least = false;  // instance >= bound instead of <=
    bool pass() const { return at_least ? instance >= bound : instance <= bound; }
};

struct Meridian {
    long long a = 1;
    long long b = 0;
};

// One colored construction: an admissible collection, its sequence and the
// realized Γ-cycle.
struct SideReport {
    Color color = Color::Red;
    int collection_size = 0;
    int surfaces = 0;
    SequenceBuild build;
    BetaAssignment beta;
    GammaRealization gamma;
    // Closed mode, per cusp: crossing counts of the vertical boundary of the
    // square annuli and the resulting alpha and beta-sum targets.
    std::vector<long long> y, x, alpha, beta_target;
};

struct CuspClass {
    int cusp = -1;
    std::array<long long, 2> right{}, left{}, sum{}, expected{};
    long long B = 0;
    bool exact() const { return sum == expected; }
};

enum class Mode { Cusped, Closed };

struct BirkhoffCertificate {
    Mode mode = Mode::Cusped;
    std::string triangulation;
    int N = 0;
    Params params;
    std::vector<Meridian> meridians;
    std::vector<SideReport> sides;
    SurfaceLedger ledger;
    std::vector<CuspClass> classes;
    std::vector<long long> B;
    bool collision_detected = false;
    int perturbations = 0;
    std::optional<CycleRecord> cut_witness;
    std::vector<Comparison> comparisons;
    BoundTable worst_case;
    std::vector<std::string> failures;
    bool passed() const { return failures.empty(); }
};

BirkhoffCertificate birkhoff_cusped(const VeeringTriangulation& tri, const std::string& id = "");
// Throws std::invalid_argument on a missing or non-positive meridian and
// StageError when the beta targets are infeasible.
BirkhoffCertificate birkhoff_closed(const VeeringTriangulation& tri, const std::vector<Meridian>& meridians, const std::string& id = "");

std::string render_text(const BirkhoffCertificate& c);
std::string render_machine(const BirkhoffCertificate& c);

}  // namespace veerweave
