#include <iostream>

#include "criteria.hpp"

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "veerweave";
    const std::string data = argc > 2 ? argv[2] : "data";
    using Fn = criteria::Verdict (*)();
    const std::pair<const char*, Fn> checks[] = {
        {"enumeration oracle agreement", criteria::enumeration_agreement},
        {"h(c) length and homology bounds", criteria::h_map_bounds},
        {"phi-path contraction", [] { return criteria::phi_path_contraction(); }},
        {"admissible collection to edge sequence", [] { return criteria::sequence_construction(); }},
        {"shearing decomposition and cut checks", criteria::shearing_checks},
        {"cusped Birkhoff section pipeline", criteria::cusped_pipeline},
        {"closed Birkhoff section pipeline", criteria::closed_pipeline},
        {"surface index arithmetic", [] { return criteria::index_arithmetic(); }},
    };
    int hard_failures = 0, k = 0;
    for (const auto& [name, fn] : checks) {
        ++k;
        criteria::Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.detail = std::string("exception: ") + e.what();
        }
        std::cout << "criterion " << k << ": " << (v.pass ? "PASS" : "FAIL") << "  " << name << "  " << v.detail << std::endl;
        if (!v.pass && !v.known_unattainable) ++hard_failures;
    }
    const auto v = criteria::cli_determinism(cli, data);
    std::cout << "criterion 9: " << (v.pass ? "PASS" : "FAIL") << "  CLI determinism  " << v.detail << std::endl;
    if (!v.pass) ++hard_failures;
    return hard_failures == 0 ? 0 : 1;
}
