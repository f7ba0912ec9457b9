// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "normsnark/oracle.hpp"
#include "test_support.hpp"

using namespace normsnark;
using namespace normsnark::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures.size() < 5) failures.push_back(what);
    }
};

using Clock = std::chrono::steady_clock;

const Multipole& superedge() { return petersen_superedge().multipole; }

std::vector<ColorPermutation> all_color_permutations() {
    std::vector<ColorPermutation> out;
    std::array<int, 5> p{1, 2, 3, 4, 5};
    do out.emplace_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// ---------------------------------------------------------------------------

Outcome templates_contract() {
    Outcome o;
    const auto perms = all_color_permutations();
    std::size_t instances = 0;
    for (TemplateId id : kRFamily) {
        for (const ColorPermutation& pi : perms) {
            TemplateParams prm{pi(Color{1}), pi(Color{2}), pi(Color{3}), std::nullopt};
            EdgeColoring s = make_template(id, prm).coloring;
            ++instances;
            o.check(is_normal(superedge(), s), std::string(to_string(id)) + " not normal");
            o.check(poor_count(superedge(), s) == 9, std::string(to_string(id)) + " poor count != 9");
            if (id == TemplateId::R) {
                TemplateParams swapped{prm.c1, prm.c3, prm.c2, std::nullopt};
                o.check(make_template(TemplateId::Rbar, prm).coloring == make_template(TemplateId::R, swapped).coloring,
                        "Rbar(c1,c2,c3) != R(c1,c3,c2)");
            }
        }
    }
    for (TemplateId id : kLFamily) {
        for (const ColorPermutation& pi : perms) {
            TemplateParams prm{pi(Color{1}), pi(Color{2}), pi(Color{3}),
                               std::array<Color, 2>{pi(Color{4}), pi(Color{5})}};
            EdgeColoring s = make_template(id, prm).coloring;
            ++instances;
            o.check(is_normal(superedge(), s), std::string(to_string(id)) + " not normal");
        }
    }
    o.detail = std::to_string(instances) + " instances, 120 permutations per template";
    return o;
}

Outcome predicate_exhaustion() {
    Outcome o;
    std::size_t checks = 0;
    for (const JunctionContext& ctx : all_junction_contexts()) {
        const SlotColors s = ctx.current();
        for (TemplateId id : kRFamily) {
            o.check(is_right_monochromatic(sigma_color(id, s).coloring, s),
                    std::string(to_string(id)) + " not right-monochromatic at " + to_string(ctx));
            ++checks;
        }
        EdgeColoring r = sigma_color(TemplateId::R, s).coloring;
        EdgeColoring ri = sigma_color(TemplateId::R_I, s).coloring;
        for (int d = 1; d <= 3; ++d) {
            o.check(is_left_compatible(r, s, d) == (d == 2), "R left-compatible iff d=2 fails at " + to_string(ctx));
            o.check(is_left_compatible(ri, s, d) == (d == 3), "R_I left-compatible iff d=3 fails at " + to_string(ctx));
            checks += 2;
        }
        // The L family needs the next slot's colors; read it one slot back.
        const SlotColors prev = ctx.previous();
        for (TemplateId id : {TemplateId::L1, TemplateId::L2}) {
            o.check(is_left_compatible(sigma_color(id, prev).coloring, prev, 1),
                    std::string(to_string(id)) + " not left-compatible at d=1, " + to_string(ctx));
            ++checks;
        }
    }
    o.detail = std::to_string(all_junction_contexts().size()) + " contexts, " + std::to_string(checks) + " checks";
    return o;
}

/// Colors (σ(e_{i+1}), σ(f_{i+1})) that extend a context by one slot.
std::vector<std::pair<Color, Color>> next_pairs(const JunctionContext& ctx) {
    std::vector<std::pair<Color, Color>> out;
    for (int n = 1; n <= 5; ++n)
        for (int f = 1; f <= 5; ++f) {
            JunctionContext next{ctx.a, ctx.c, ctx.b, Color{n}, Color{f}};
            if (next.valid()) out.emplace_back(Color{n}, Color{f});
        }
    return out;
}

Outcome junction_instances() {
    Outcome o;
    std::size_t assemblies = 0;
    for (const JunctionContext& ctx : all_junction_contexts()) {
        const SlotColors prev = ctx.previous();
        // Right-monochromatic members for B_{i-1}.
        std::vector<EdgeColoring> lefts;
        for (TemplateId id : kRFamily) lefts.push_back(sigma_color(id, prev).coloring);
        // Left-compatible members for B_i, by dock.
        std::vector<std::pair<int, EdgeColoring>> rights;
        rights.emplace_back(2, sigma_color(TemplateId::R, ctx.current()).coloring);
        rights.emplace_back(3, sigma_color(TemplateId::R_I, ctx.current()).coloring);
        for (auto [n, f] : next_pairs(ctx)) {
            SlotColors cur{ctx.a, ctx.b, ctx.c, n, f};
            for (TemplateId id : {TemplateId::L1, TemplateId::L2})
                rights.emplace_back(1, sigma_color(id, cur).coloring);
        }
        for (SupervertexKind kind : {SupervertexKind::A, SupervertexKind::APrime}) {
            for (const Perm3& p : all_perm3()) {
                for (const auto& [dock, right] : rights) {
                    const SlotColors cur = ctx.current();
                    o.check(is_left_compatible(right, cur, dock), "member is not left-compatible");
                    EdgeColoring member = kind == SupervertexKind::A ? right : swap_left_chain(right, cur, dock);
                    JunctionLink link{kind, p, dock, ctx.c, std::nullopt};
                    if (kind == SupervertexKind::APrime) link.uu = ctx.b;
                    for (const EdgeColoring& left : lefts) {
                        ++assemblies;
                        o.check(junction_compatible(left, member, link, ctx),
                                std::string(to_string(kind)) + " p=" + to_string(p) + " d=" + std::to_string(dock) +
                                    " at " + to_string(ctx));
                    }
                }
            }
        }
    }
    o.detail = std::to_string(assemblies) + " assemblies";
    return o;
}

Outcome pair_tables() {
    Outcome o;
    std::size_t assemblies = 0, fallbacks = 0;
    auto verify = [&](const PairColoring& pc, SupervertexKind kind, const Perm3& p, int dock,
                      const JunctionContext& ctx, const std::string& what) {
        ++assemblies;
        if (pc.source != PairSource::Table) ++fallbacks;
        JunctionLink link{kind, p, dock, ctx.c, pc.uu};
        o.check(kind == SupervertexKind::A || pc.uu.has_value(), what + ": no u'u'' color");
        o.check(is_left_compatible(pc.left, ctx.previous(), 1), what + ": left member not left-compatible");
        o.check(is_right_monochromatic(pc.right, ctx.current()), what + ": right member not right-monochromatic");
        o.check(junction_compatible(pc.left, pc.right, link, ctx), what + ": assembly not normal");
    };
    for (const JunctionContext& ctx : all_junction_contexts()) {
        for (SupervertexKind kind : {SupervertexKind::A, SupervertexKind::APrime}) {
            for (const Perm3& p : all_perm3()) {
                std::string at = std::string(to_string(kind)) + " p=" + to_string(p) + " " + to_string(ctx);
                try {
                    verify(color_regular_pair(kind, p, ctx), kind, p, 1, ctx, "regular " + at);
                } catch (const std::exception& ex) {
                    o.check(false, "regular " + at + ": " + ex.what());
                }
                for (int d : {2, 3}) {
                    try {
                        verify(color_odd_pair(kind, p, d, ctx), kind, p, d, ctx, "odd d=" + std::to_string(d) + " " + at);
                    } catch (const std::exception& ex) {
                        o.check(false, "odd " + at + ": " + ex.what());
                    }
                }
            }
        }
    }
    o.detail = std::to_string(assemblies) + " pair assemblies, " + std::to_string(fallbacks) +
               " outside the canonical tables";
    return o;
}

Outcome end_to_end_random() {
    Outcome o;
    const SuperpositionSpec frame = outer_five();
    const EdgeColoring sigma = *find_normal_coloring(frame.base);
    std::mt19937_64 rng(20240501);
    std::size_t min_poor = 1000, reversed = 0;
    for (int k = 0; k < 500; ++k) {
        SuperpositionSpec spec = random_params(frame, rng);
        try {
            ExtensionResult res = extend(spec, sigma);
            VerificationReport v = verify_extension(spec, res.superposition, res.coloring, sigma);
            o.check(v.ok(), "run " + std::to_string(k) + " failed verification");
            o.check(v.m_int_preserved, "run " + std::to_string(k) + " changed an off-cycle color");
            o.check(v.counts.poor >= 18, "run " + std::to_string(k) + " has fewer than 18 poor edges");
            min_poor = std::min(min_poor, v.counts.poor);
            reversed += res.stats.reversed;
        } catch (const std::exception& ex) {
            o.check(false, "run " + std::to_string(k) + ": " + ex.what());
        }
    }
    o.detail = "500 runs, min poor " + std::to_string(min_poor) + ", " + std::to_string(reversed) + " via reversal";
    return o;
}

Outcome end_to_end_even() {
    Outcome o;
    SuperpositionSpec spec = uniform(six_cycle(), SupervertexKind::A, {1, 2, 3}, 1);
    const EdgeColoring sigma = *find_normal_coloring(spec.base);
    std::size_t poor = 0;
    try {
        ExtensionResult res = extend(spec, sigma);
        VerificationReport v = verify_extension(spec, res.superposition, res.coloring, sigma);
        o.check(v.ok(), "6-cycle extension failed verification");
        o.check(v.counts.poor >= 18, "6-cycle extension has fewer than 18 poor edges");
        poor = v.counts.poor;
    } catch (const std::exception& ex) {
        o.check(false, std::string("6-cycle: ") + ex.what());
    }
    bool inapplicable = false;
    try {
        extend(uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 1), sigma);
    } catch (const MethodInapplicable&) {
        inapplicable = true;
    } catch (const std::exception&) {
    }
    o.check(inapplicable, "odd trivial case did not raise MethodInapplicable");
    o.detail = "6-cycle poor " + std::to_string(poor) + ", odd trivial case inapplicable";
    return o;
}

Outcome superpositions_are_snarks() {
    Outcome o;
    std::ostringstream detail;
    for (SupervertexKind kind : {SupervertexKind::A, SupervertexKind::APrime}) {
        for (int pass = 0; pass < 2; ++pass) {
            SuperpositionSpec spec = pass == 0 ? uniform(outer_five(), kind, {1, 2, 3}, 2)
                                               : uniform(six_cycle(), kind, {1, 2, 3}, 1);
            Superposition sp = build(spec);
            auto t0 = Clock::now();
            bool bridgeless = is_bridgeless(sp.graph);
            bool colorable = is_three_edge_colorable(sp.graph);
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
            std::string name = std::string(pass == 0 ? "5-cycle" : "6-cycle") + " all-" + to_string(kind) + " (" +
                               std::to_string(sp.graph.vertex_count()) + " vertices)";
            o.check(bridgeless, name + " has a bridge");
            o.check(!colorable, name + " is 3-edge-colorable");
            detail << name << " " << ms << " ms; ";
        }
    }
    o.detail = detail.str();
    return o;
}

Outcome oracle_self_consistency() {
    Outcome o;
    Multipole p = petersen_graph();
    o.check(!is_three_edge_colorable(p), "P10 reported 3-edge-colorable");
    auto s = find_normal_coloring(p);
    o.check(s && is_normal(p, *s), "P10 has no normal 5-edge-coloring");
    Multipole k4;
    for (int i = 0; i < 4; ++i) k4.add_vertex();
    for (std::uint32_t a = 0; a < 4; ++a)
        for (std::uint32_t b = a + 1; b < 4; ++b) k4.add_edge(VertexId{a}, VertexId{b});
    o.check(is_three_edge_colorable(k4), "K4 reported not 3-edge-colorable");
    o.detail = "P10 class 2 with a normal coloring, K4 class 1";
    return o;
}

/// Every cycle of P10, each listed once.
std::vector<std::vector<VertexId>> petersen_cycles() {
    Multipole p = petersen_graph();
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::vector<VertexId>> out;
    std::vector<VertexId> path;
    std::vector<bool> used(10, false);
    std::function<void(VertexId)> dfs = [&](VertexId v) {
        for (const Element& el : p.incident(v)) {
            VertexId w = p.other_end(el.edge(), v);
            if (w == path.front() && path.size() >= 3) {
                std::vector<std::uint32_t> key;
                for (VertexId x : path) key.push_back(x.value);
                std::sort(key.begin(), key.end());
                if (seen.insert(key).second) out.push_back(path);
            } else if (!used[w.value] && w > path.front()) {
                used[w.value] = true;
                path.push_back(w);
                dfs(w);
                path.pop_back();
                used[w.value] = false;
            }
        }
    };
    for (std::uint32_t s = 0; s < 10; ++s) {
        path = {VertexId{s}};
        used.assign(10, false);
        used[s] = true;
        dfs(VertexId{s});
    }
    return out;
}

Outcome structural_counts() {
    Outcome o;
    auto cycles = petersen_cycles();
    std::mt19937_64 rng(5);
    std::set<std::size_t> lengths;
    for (int k = 0; k < 20; ++k) {
        SuperpositionSpec frame;
        frame.base = petersen_graph();
        frame.cycle = cycles[rng() % cycles.size()];
        SuperpositionSpec spec = random_params(frame, rng);
        Superposition sp = build(spec);
        SizeFormula f = expected_size(spec);
        lengths.insert(spec.g());
        o.check(sp.graph.vertex_count() == f.vertices && sp.graph.edge_count() == f.edges,
                "size mismatch for a " + std::to_string(spec.g()) + "-cycle spec");
        o.check(validate(sp.graph).ok(), "built graph is not a valid cubic graph");
    }
    std::string ls;
    for (std::size_t l : lengths) ls += (ls.empty() ? "" : ",") + std::to_string(l);
    o.detail = "20 specs over " + std::to_string(cycles.size()) + " P10 cycles, lengths {" + ls + "}";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "template contracts", templates_contract},
        {2, "predicate exhaustion", predicate_exhaustion},
        {3, "junction instance check", junction_instances},
        {4, "pair tables", pair_tables},
        {5, "end-to-end, odd cycle with random parameters", end_to_end_random},
        {6, "end-to-end, even cycle with every dock 1", end_to_end_even},
        {7, "superpositions are snarks (slow tier)", superpositions_are_snarks},
        {8, "oracle self-consistency", oracle_self_consistency},
        {9, "structural counts", structural_counts},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + ex.what());
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("criterion %d: %s  %s (%.2f s) %s\n", c.number, o.pass ? "PASS" : "FAIL", c.name, secs,
                    o.detail.c_str());
        for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
