#pragma once

#include <random>

#include "normsnark/extender.hpp"

namespace normsnark::testing {

inline SuperpositionSpec petersen_frame(std::initializer_list<const char*> cycle) {
    SuperpositionSpec spec;
    spec.base = petersen_graph();
    for (const char* l : cycle) spec.cycle.push_back(spec.base.vertex_by_label(l));
    return spec;
}

inline SuperpositionSpec outer_five() { return petersen_frame({"12", "34", "15", "23", "45"}); }
inline SuperpositionSpec six_cycle() { return petersen_frame({"12", "34", "25", "13", "24", "35"}); }

inline SuperpositionSpec uniform(SuperpositionSpec spec, SupervertexKind kind, Perm3 p, int d) {
    spec.kinds.assign(spec.g(), kind);
    spec.junctions.assign(spec.g(), JunctionParams{p, d});
    return spec;
}

/// Random parameters outside the one uncovered case (odd g, every dock 1,
/// every p(1) = 1).
inline SuperpositionSpec random_params(SuperpositionSpec spec, std::mt19937_64& rng) {
    const std::size_t g = spec.g();
    for (;;) {
        spec.kinds.assign(g, SupervertexKind::A);
        spec.junctions.assign(g, {});
        bool all_one = rng() % 3 == 0;
        for (std::size_t i = 0; i < g; ++i) {
            spec.kinds[i] = rng() % 2 ? SupervertexKind::APrime : SupervertexKind::A;
            spec.junctions[i].p = all_perm3()[rng() % 6];
            spec.junctions[i].d = all_one ? 1 : static_cast<int>(rng() % 3) + 1;
        }
        bool uncovered = g % 2 == 1;
        for (const auto& j : spec.junctions) uncovered = uncovered && j.d == 1 && j.p[0] == 1;
        if (!uncovered) return spec;
    }
}

} // namespace normsnark::testing
