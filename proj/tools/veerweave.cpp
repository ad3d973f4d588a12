#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "veerweave/boundary.hpp"
#include "veerweave/dynamic_plane.hpp"
#include "veerweave/errors.hpp"
#include "veerweave/graphs.hpp"
#include "veerweave/pipeline.hpp"
#include "veerweave/sequencer.hpp"
#include "veerweave/shearing.hpp"
#include "veerweave/triangulation.hpp"

using namespace veerweave;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input;
    std::string format = "text";
    int max_len = 4;
    std::string graph = "dual";
    std::vector<std::string> alpha;
    std::string beta = "minimal";
    std::vector<std::string> meridian;
    std::string dot_path;
};

bool is_signature(const std::string& s) { return s.find('_') != std::string::npos && s.find('/') == std::string::npos && s.find('\\') == std::string::npos; }

VeeringTriangulation load(const std::string& input) {
    if (is_signature(input)) return decode_taut_isosig(input);
    std::ifstream in(input);
    if (!in) throw Error("cannot read " + input);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_native(ss.str());
}

// "T:rest" pairs keyed by cusp.
std::map<int, std::string> cusp_table(const std::vector<std::string>& items, const char* flag, int cusps) {
    std::map<int, std::string> out;
    for (const auto& item : items) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError(std::string(flag) + " expects T:value, got " + item);
        int T = -1;
        try {
            std::size_t used = 0;
            T = std::stoi(item.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": bad cusp index in " + item);
        }
        if (T < 0 || T >= cusps) throw UsageError(std::string(flag) + ": no cusp " + std::to_string(T));
        out[T] = item.substr(colon + 1);
    }
    return out;
}

long long parse_integer(const std::string& s, const char* flag) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(flag) + ": not an integer: " + s);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

ordered_json cycle_json(const CycleRecord& c) {
    return {{"graph", to_string(c.kind)}, {"length", c.length()}, {"class", to_string(c.classification)}, {"vertices", c.vertices}, {"edges", c.edges}};
}

std::string cycle_text(const CycleRecord& c) {
    std::ostringstream os;
    os << to_string(c.kind) << " length " << c.length() << " class " << to_string(c.classification) << " edges";
    for (int e : c.edges) os << ' ' << e;
    return os.str();
}

std::string rational_text(const boost::rational<long long>& r) {
    return r.denominator() == 1 ? std::to_string(r.numerator()) : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string cmd_validate(const VeeringTriangulation& tri, bool machine) {
    const BoundaryData bd(tri);
    const Params p = params(tri, bd);
    int toggles = 0, red = 0, blue = 0;
    for (int t = 0; t < tri.num_tets(); ++t) {
        switch (tri.kind(t)) {
            case TetKind::Toggle: ++toggles; break;
            case TetKind::RedFan: ++red; break;
            case TetKind::BlueFan: ++blue; break;
        }
    }
    std::vector<std::string> colors;
    for (int e = 0; e < tri.num_edges(); ++e) colors.push_back(to_string(tri.color(e)));
    if (machine) {
        ordered_json j{{"valid", true},      {"N", p.N},           {"edges", tri.num_edges()}, {"faces", tri.num_faces()}, {"cusps", tri.num_cusps()},
                       {"delta", p.delta},   {"nu", p.nu},         {"lambda", p.lambda},       {"toggles", toggles},       {"red_fans", red},
                       {"blue_fans", blue},  {"colors", colors}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "valid: yes\nN: " << p.N << "\nedges: " << tri.num_edges() << "\nfaces: " << tri.num_faces() << "\ncusps: " << tri.num_cusps() << "\n";
    os << "delta: " << p.delta << "\nnu: " << p.nu << "\nlambda: " << p.lambda << "\n";
    os << "toggles: " << toggles << "\nred_fans: " << red << "\nblue_fans: " << blue << "\ncolors:";
    for (const auto& c : colors) os << ' ' << c;
    os << "\n";
    return os.str();
}

std::string cmd_boundary(const VeeringTriangulation& tri, bool machine) {
    const BoundaryData bd(tri);
    ordered_json j = ordered_json::array();
    std::ostringstream os;
    for (int c = 0; c < bd.num_cusps(); ++c) {
        const auto& lad = bd.cusp(c);
        ordered_json poles = ordered_json::array();
        os << "cusp " << c << " triangles " << bd.links().triangles_in_cusp(c) << " ladderpoles " << lad.poles.size() << " transversal " << lad.transversal.size()
           << "\n";
        for (const auto& pole : lad.poles) {
            poles.push_back({{"color", to_string(pole.color)}, {"length", pole.length()}, {"vertices", pole.vertices}});
            os << "  " << to_string(pole.color) << " length " << pole.length() << " vertices";
            for (int v : pole.vertices) os << ' ' << v;
            os << "\n";
        }
        j.push_back({{"cusp", c}, {"triangles", bd.links().triangles_in_cusp(c)}, {"ladderpoles", poles}, {"transversal_length", lad.transversal.size()}});
    }
    return machine ? j.dump(2) + "\n" : os.str();
}

std::string cmd_graphs(const VeeringTriangulation& tri, bool machine, const std::string& dot_path) {
    const DualGraph dg = build_dual_graph(tri);
    const FlowGraph fg = build_flow_graph(tri);
    if (!dot_path.empty()) write_file(dot_path, dual_graph_dot(tri, dg) + flow_graph_dot(tri, fg));
    if (machine) {
        ordered_json j;
        j["dual"] = {{"vertices", dg.num_vertices}, {"tail", dg.tail}, {"head", dg.head}, {"branch_next", dg.branch_next}};
        j["flow"] = {{"vertices", fg.num_vertices}, {"tail", fg.tail}, {"head", fg.head}};
        return j.dump(2) + "\n";
    }
    return "dual\n" + dual_graph_edge_list(dg) + "flow\n" + flow_graph_edge_list(fg);
}

std::vector<CycleRecord> cycles_of(const VeeringTriangulation& tri, const Options& o) {
    if (o.graph == "flow") return enumerate_cycles(build_flow_graph(tri), o.max_len);
    return enumerate_cycles(build_dual_graph(tri), o.max_len);
}

std::string cmd_cycles(const VeeringTriangulation& tri, const Options& o, bool machine) {
    const auto cycles = cycles_of(tri, o);
    if (machine) {
        ordered_json j = ordered_json::array();
        for (const auto& c : cycles) j.push_back(cycle_json(c));
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "cycles " << cycles.size() << "\n";
    for (const auto& c : cycles) os << cycle_text(c) << "\n";
    return os.str();
}

std::string cmd_hmap(const VeeringTriangulation& tri, const Options& o, bool machine) {
    const auto cycles = enumerate_cycles(build_dual_graph(tri), o.max_len);
    ordered_json j = ordered_json::array();
    std::ostringstream os;
    for (const auto& c : cycles) {
        if (c.classification == TurnClass::Branch) continue;
        const HResult h = compute_h(tri, c);
        const auto cx = flow_graph_complexity(tri, c);
        ordered_json images = ordered_json::array();
        for (const auto& x : h.cycles) images.push_back(cycle_json(x));
        j.push_back({{"cycle", cycle_json(c)},
                     {"h", images},
                     {"orientation_reversing", h.orientation_reversing},
                     {"complete", h.complete},
                     {"complexity", cx ? rational_text(*cx) : "unknown"}});
        os << cycle_text(c) << "\n  h " << h.cycles.size() << (h.orientation_reversing ? " reversing" : "") << (h.complete ? "" : " incomplete") << "\n";
        for (const auto& x : h.cycles) os << "  " << cycle_text(x) << "\n";
        os << "  complexity " << (cx ? rational_text(*cx) : "unknown") << "\n";
    }
    return machine ? j.dump(2) + "\n" : os.str();
}

std::string cmd_shear(const VeeringTriangulation& tri, bool machine) {
    const ShearingDecomposition sd(tri);
    const auto blue = upper_boundaries(tri, sd, Color::Blue);
    const auto er = croissant_collection(tri, sd);
    const bool e_acyclic = !cut_check(tri, cut_system(blue));
    const bool er_acyclic = !cut_check(tri, cut_system(er));
    const auto witness = cut_check(tri, CutSystem{});
    int red_faces = 0;
    for (const auto& r : sd.regions())
        if (r.color == Color::Red) red_faces += static_cast<int>(r.internal_faces.size());
    if (machine) {
        ordered_json regions = ordered_json::array();
        for (const auto& r : sd.regions()) {
            ordered_json halves = ordered_json::array();
            for (const auto& h : r.halves) halves.push_back({h.tet, h.upper ? "upper" : "lower"});
            regions.push_back({{"color", to_string(r.color)},
                               {"length", r.length()},
                               {"halves", halves},
                               {"internal_faces", r.internal_faces},
                               {"upper_squares", r.upper_squares},
                               {"lower_squares", r.lower_squares},
                               {"upper_helical", r.upper_helical},
                               {"lower_helical", r.lower_helical},
                               {"longitudinal", r.longitudinal}});
        }
        ordered_json j{{"regions", regions},
                       {"croissants", red_faces},
                       {"collection_size", collect_admissible(tri, er).size()},
                       {"cut_upper_boundaries", e_acyclic ? "acyclic" : "cyclic"},
                       {"cut_E_R", er_acyclic ? "acyclic" : "cyclic"},
                       {"empty_witness", witness ? cycle_json(*witness) : ordered_json(nullptr)}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << region_report(tri, sd);
    os << "croissants " << red_faces << "\ncollection_size " << collect_admissible(tri, er).size() << "\n";
    os << "cut_upper_boundaries " << (e_acyclic ? "acyclic" : "cyclic") << "\ncut_E_R " << (er_acyclic ? "acyclic" : "cyclic") << "\n";
    os << "empty_witness " << (witness ? cycle_text(*witness) : "none") << "\n";
    return os.str();
}

std::string cmd_sequence(const VeeringTriangulation& tri, const Options& o, bool machine) {
    std::vector<int> alpha(static_cast<std::size_t>(tri.num_cusps()), 1);
    for (const auto& [T, v] : cusp_table(o.alpha, "--alpha", tri.num_cusps())) {
        const long long a = parse_integer(v, "--alpha");
        if (a < 1) throw UsageError("--alpha values must be positive");
        alpha[static_cast<std::size_t>(T)] = static_cast<int>(a);
    }
    const ShearingDecomposition sd(tri);
    auto d = collect_admissible(tri, croissant_collection(tri, sd));
    for (auto& e : d) e = e.reversed();
    const SequenceBuild sb = admissible_to_sequence(tri, d, alpha);
    const EdgeSequence& seq = sb.sequence;
    const BetaAssignment beta = o.beta == "primitive" ? primitivity_betas(tri, seq) : constant_betas(tri, seq, 4);
    const GammaRealization g = realize_gamma_cycle(tri, seq, beta);
    const BoundaryData bd(tri);
    if (machine) {
        ordered_json edges = ordered_json::array();
        for (int i = 0; i < seq.period(); ++i)
            edges.push_back({{"edge", seq.edges[i].edge}, {"tail", seq.edges[i].tail}, {"head", seq.edges[i].head}, {"cusp", seq.vertices[i]}, {"tag", to_string(seq.tags[i])}});
        ordered_json minima = ordered_json::array();
        for (int c = 0; c < tri.num_cusps(); ++c) minima.push_back({{"cusp", c}, {"minimum", seq.crossings.minimum(bd, c)}, {"pole", seq.crossings.argmin(bd, c)}});
        ordered_json j{{"color", to_string(seq.color)},
                       {"collection_size", d.size()},
                       {"auxiliary", sb.k()},
                       {"period", seq.period()},
                       {"edges", edges},
                       {"crossings", seq.crossings.counts},
                       {"minima", minima},
                       {"beta", beta.beta},
                       {"gamma", cycle_json(g.cycle)},
                       {"x", g.x},
                       {"length_bound", g.length_bound.str()},
                       {"complexity_bound", g.complexity_bound.str()}};
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "color " << to_string(seq.color) << "\ncollection_size " << d.size() << "\nauxiliary " << sb.k() << "\nperiod " << seq.period() << "\n";
    for (int i = 0; i < seq.period(); ++i)
        os << i << " edge " << seq.edges[i].edge << " " << seq.edges[i].tail << "->" << seq.edges[i].head << " cusp " << seq.vertices[i] << " " << to_string(seq.tags[i]) << "\n";
    for (int c = 0; c < tri.num_cusps(); ++c) {
        os << "crossings " << c << ":";
        for (int v : seq.crossings.counts[c]) os << ' ' << v;
        os << " minimum " << seq.crossings.minimum(bd, c) << " pole " << seq.crossings.argmin(bd, c) << "\n";
    }
    os << "beta";
    for (int b : beta.beta) os << ' ' << b;
    os << "\ngamma " << cycle_text(g.cycle) << "\nlength_bound " << g.length_bound << "\ncomplexity_bound " << g.complexity_bound << "\n";
    return os.str();
}

std::vector<Meridian> meridians_of(const VeeringTriangulation& tri, const Options& o) {
    const auto table = cusp_table(o.meridian, "--meridian", tri.num_cusps());
    std::vector<Meridian> out;
    for (int T = 0; T < tri.num_cusps(); ++T) {
        const auto it = table.find(T);
        if (it == table.end()) throw UsageError("--meridian missing for cusp " + std::to_string(T));
        const auto comma = it->second.find(',');
        if (comma == std::string::npos) throw UsageError("--meridian expects T:a,b");
        Meridian m{parse_integer(it->second.substr(0, comma), "--meridian"), parse_integer(it->second.substr(comma + 1), "--meridian")};
        if (m.a <= 0) throw UsageError("--meridian needs a > 0");
        out.push_back(m);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Veering triangulation and Birkhoff section toolkit"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"validate", "check the veering structure and report N, delta, nu, lambda"},
        {"boundary", "ladderpoles and transversals of every cusp"},
        {"graphs", "dual graph and flow graph"},
        {"cycles", "closed walks of the dual or flow graph up to rotation"},
        {"hmap", "h(c) and flow graph complexity for dual graph cycles"},
        {"shear", "shearing regions, croissants and cut checks"},
        {"sequence", "edge sequence and Gamma-cycle from the croissant collection"},
        {"birkhoff-cusped", "Birkhoff section certificate on the cusped manifold"},
        {"birkhoff-closed", "Birkhoff section certificate after filling along meridians"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("input", o.input, "triangulation file or taut isoSig")->required();
        sub->add_option("--format", o.format, "output style")->check(CLI::IsMember({"text", "machine"}));
        if (name == "graphs") sub->add_option("--emit-dot", o.dot_path, "write both graphs in DOT format to this path");
        if (name == "cycles" || name == "hmap") sub->add_option("--max-len", o.max_len, "longest cycle to enumerate")->check(CLI::PositiveNumber);
        if (name == "cycles") sub->add_option("--graph", o.graph, "graph to enumerate")->check(CLI::IsMember({"dual", "flow"}));
        if (name == "sequence") {
            sub->add_option("--alpha", o.alpha, "T:v crossing target per cusp (repeatable, default 1)");
            sub->add_option("--beta", o.beta, "smallest valid beta or the primitivity floor")->check(CLI::IsMember({"minimal", "primitive"}));
        }
        if (name == "birkhoff-closed") sub->add_option("--meridian", o.meridian, "T:a,b per cusp T (repeatable)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, std::cerr, std::cerr);
        return code == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    const bool machine = o.format == "machine";
    try {
        const VeeringTriangulation tri = load(o.input);
        std::string out;
        bool ok = true;
        if (cmd == "validate") out = cmd_validate(tri, machine);
        else if (cmd == "boundary") out = cmd_boundary(tri, machine);
        else if (cmd == "graphs") out = cmd_graphs(tri, machine, o.dot_path);
        else if (cmd == "cycles") out = cmd_cycles(tri, o, machine);
        else if (cmd == "hmap") out = cmd_hmap(tri, o, machine);
        else if (cmd == "shear") out = cmd_shear(tri, machine);
        else if (cmd == "sequence") out = cmd_sequence(tri, o, machine);
        else if (cmd == "birkhoff-cusped") {
            const auto c = birkhoff_cusped(tri, o.input);
            out = machine ? render_machine(c) : render_text(c);
            ok = c.passed();
        } else {
            const auto c = birkhoff_closed(tri, meridians_of(tri, o), o.input);
            out = machine ? render_machine(c) : render_text(c);
            ok = c.passed();
        }
        std::cout << out;
        if (!ok) std::cerr << "error: certificate has failing checks\n";
        return ok ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
