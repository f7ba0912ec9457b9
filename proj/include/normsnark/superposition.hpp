#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coloring.hpp"
#include "multipole.hpp"
#include "oracle.hpp"
#include "petersen.hpp"

namespace normsnark {

/// p is B_i's right semiedge permutation (used at A_{i+1}), d is B_i's dock
/// (used at A_i).
struct JunctionParams {
    Perm3 p{1, 2, 3};
    int d = 1;

    friend bool operator==(const JunctionParams&, const JunctionParams&) = default;
};

struct SuperpositionSpec {
    Multipole base;
    std::vector<VertexId> cycle;
    std::vector<SupervertexKind> kinds;
    std::vector<JunctionParams> junctions;

    std::size_t g() const { return cycle.size(); }
    std::size_t next(std::size_t i) const { return (i + 1) % g(); }
    std::size_t prev(std::size_t i) const { return (i + g() - 1) % g(); }
};

struct SpecReport : ValidationReport {
    /// Filled when the caller asked for the (expensive) snark check.
    std::optional<bool> base_is_snark;
};

/// e[i] joins cycle[i] and cycle[i+1]; f[i] is the third edge at cycle[i].
struct CycleEdges {
    std::vector<EdgeId> e;
    std::vector<EdgeId> f;
};

namespace detail {

inline std::optional<CycleEdges> find_cycle_edges(const Multipole& base, const std::vector<VertexId>& cycle,
                                                  std::vector<std::string>* problems) {
    auto fail = [&](std::string msg) -> std::optional<CycleEdges> {
        if (problems) problems->push_back(std::move(msg));
        return std::nullopt;
    };
    const std::size_t g = cycle.size();
    CycleEdges out;
    std::set<std::uint32_t> used;
    for (std::size_t i = 0; i < g; ++i) {
        VertexId a = cycle[i], b = cycle[(i + 1) % g];
        std::optional<EdgeId> pick;
        for (const Element& el : base.incident(a))
            if (el.is_edge() && base.other_end(el.edge(), a) == b && !used.contains(el.index)) {
                pick = el.edge();
                break;
            }
        if (!pick)
            return fail("cycle vertices " + base.vertex(a).label + " and " + base.vertex(b).label +
                        " are not adjacent");
        used.insert(pick->value);
        out.e.push_back(*pick);
    }
    for (std::size_t i = 0; i < g; ++i) {
        std::optional<EdgeId> third;
        for (const Element& el : base.incident(cycle[i]))
            if (el.is_edge() && el.edge() != out.e[i] && el.edge() != out.e[(i + g - 1) % g]) third = el.edge();
        if (!third) return fail("cycle vertex " + base.vertex(cycle[i]).label + " has no third edge");
        out.f.push_back(*third);
    }
    return out;
}

} // namespace detail

inline CycleEdges cycle_edges(const Multipole& base, const std::vector<VertexId>& cycle) {
    std::vector<std::string> problems;
    auto out = detail::find_cycle_edges(base, cycle, &problems);
    if (!out) throw InvalidInput(problems.empty() ? "invalid cycle" : problems.front());
    return *out;
}

inline SpecReport validate_spec(const SuperpositionSpec& spec, bool check_base_snark = false) {
    SpecReport r;
    const Multipole& base = spec.base;
    const std::size_t g = spec.g();
    if (!base.is_closed()) r.problems.push_back("base graph has semiedges");
    for (std::uint32_t v = 0; v < base.vertex_count(); ++v)
        if (base.degree(VertexId{v}) != 3)
            r.problems.push_back("base vertex " + base.vertex(VertexId{v}).label + " is not cubic");
    if (g < 3) r.problems.push_back("cycle length must be at least 3");
    if (spec.kinds.size() != g) r.problems.push_back("kinds must have one entry per cycle vertex");
    if (spec.junctions.size() != g) r.problems.push_back("junctions must have one entry per cycle vertex");
    for (std::size_t i = 0; i < spec.junctions.size(); ++i) {
        if (!is_perm3(spec.junctions[i].p))
            r.problems.push_back("junction " + std::to_string(i) + ": p is not a permutation of {1,2,3}");
        if (spec.junctions[i].d < 1 || spec.junctions[i].d > 3)
            r.problems.push_back("junction " + std::to_string(i) + ": dock must be 1, 2 or 3");
    }
    std::set<std::uint32_t> seen;
    bool ids_ok = true;
    for (VertexId v : spec.cycle) {
        if (v.value >= base.vertex_count()) {
            r.problems.push_back("cycle vertex id " + std::to_string(v.value) + " out of range");
            ids_ok = false;
        } else if (!seen.insert(v.value).second) {
            r.problems.push_back("cycle repeats vertex " + base.vertex(v).label);
            ids_ok = false;
        }
    }
    if (!r.ok() || !ids_ok) return r;

    auto edges = detail::find_cycle_edges(base, spec.cycle, &r.problems);
    if (!edges) return r;
    for (std::size_t i = 0; i < g; ++i) {
        const Edge& f = base.edge(edges->f[i]);
        VertexId other = f.a == spec.cycle[i] ? f.b : f.a;
        if (seen.contains(other.value))
            r.warnings.push_back("f edge at " + base.vertex(spec.cycle[i]).label + " is a chord of the cycle");
    }
    if (check_base_snark) r.base_is_snark = check_snark(base);
    return r;
}

inline void require_valid(const SuperpositionSpec& spec) {
    SpecReport r = validate_spec(spec);
    if (!r.ok()) throw InvalidInput("invalid superposition spec: " + r.problems.front());
}

// ---------------------------------------------------------------------------
// Construction

/// Where the superedge copy of slot i landed.
struct SlotHandles {
    std::array<VertexId, SuperedgeLayout::kVertices> vertex{};
    std::array<EdgeId, SuperedgeLayout::kEdges> edge{};
};

/// A_i, joining B_{i-1} (right side) to B_i (left side).
struct JunctionHandles {
    /// Right semiedge j of B_{i-1} with left semiedge p(j) of B_i: either one
    /// edge, or two halves through a subdividing vertex.
    struct Joint {
        int left_index = 0;
        std::optional<EdgeId> whole;
        std::optional<EdgeId> z_side;
        std::optional<EdgeId> w_side;
        std::optional<VertexId> via;
    };
    std::array<Joint, 3> joints{};
    VertexId u;
    std::optional<VertexId> u1, u2;
    std::optional<EdgeId> uu;
};

struct Superposition {
    Multipole graph;
    std::vector<SlotHandles> slots;
    std::vector<JunctionHandles> junctions;
    /// Base edges off the cycle (M_int edges and f edges) in the built graph.
    std::vector<std::optional<EdgeId>> base_edge;
    /// Base vertices off the cycle in the built graph.
    std::vector<std::optional<VertexId>> base_vertex;
    CycleEdges cycle;
};

struct SizeFormula {
    std::size_t vertices = 0;
    std::size_t edges = 0;
};

/// |V| = |V(base)| − g + Σ(1 for A, 3 for A′) + 8g, |E| = 3|V|/2.
inline SizeFormula expected_size(const SuperpositionSpec& spec) {
    std::size_t v = spec.base.vertex_count() - spec.g() + 8 * spec.g();
    for (SupervertexKind k : spec.kinds) v += k == SupervertexKind::A ? 1 : 3;
    return {v, 3 * v / 2};
}

inline Superposition build(const SuperpositionSpec& spec) {
    require_valid(spec);
    const SuperedgeLayout& L = petersen_superedge();
    const Multipole& base = spec.base;
    const std::size_t g = spec.g();

    Superposition out;
    Multipole& m = out.graph;
    out.cycle = cycle_edges(base, spec.cycle);

    std::vector<int> cycle_pos(base.vertex_count(), -1);
    for (std::size_t i = 0; i < g; ++i) cycle_pos[spec.cycle[i].value] = static_cast<int>(i);

    out.base_vertex.assign(base.vertex_count(), std::nullopt);
    for (std::uint32_t v = 0; v < base.vertex_count(); ++v)
        if (cycle_pos[v] < 0) out.base_vertex[v] = m.add_vertex("G." + base.vertex(VertexId{v}).label);

    out.slots.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        const std::string pre = "B" + std::to_string(i) + ".";
        for (std::uint32_t v = 0; v < L.multipole.vertex_count(); ++v)
            out.slots[i].vertex[v] = m.add_vertex(pre + L.multipole.vertex(VertexId{v}).label);
        for (std::uint32_t e = 0; e < L.multipole.edge_count(); ++e) {
            const Edge& ed = L.multipole.edge(EdgeId{e});
            out.slots[i].edge[e] =
                m.add_edge(out.slots[i].vertex[ed.a.value], out.slots[i].vertex[ed.b.value], pre + ed.label);
        }
    }

    out.junctions.resize(g);
    for (std::size_t i = 0; i < g; ++i) {
        JunctionHandles& J = out.junctions[i];
        const std::string pre = "A" + std::to_string(i) + ".";
        J.u = m.add_vertex(pre + "u");
        if (spec.kinds[i] == SupervertexKind::APrime) {
            J.u1 = m.add_vertex(pre + "u1");
            J.u2 = m.add_vertex(pre + "u2");
        }
    }
    for (std::size_t i = 0; i < g; ++i) {
        JunctionHandles& J = out.junctions[i];
        const std::size_t left_slot = spec.prev(i);
        const Perm3& p = spec.junctions[left_slot].p;
        const int dock = spec.junctions[i].d;
        const std::string pre = "J" + std::to_string(i) + ".";
        int mids = 0;
        for (int j = 1; j <= 3; ++j) {
            const int q = p[j - 1];
            VertexId zv = out.slots[left_slot].vertex[L.multipole.semiedge(L.right[j - 1]).vertex->value];
            VertexId wv = out.slots[i].vertex[L.multipole.semiedge(L.left[q - 1]).vertex->value];
            auto& joint = J.joints[j - 1];
            joint.left_index = q;
            const std::string tag = pre + std::to_string(j);
            std::optional<VertexId> via;
            if (q == dock) via = J.u;
            else if (spec.kinds[i] == SupervertexKind::APrime) via = (mids++ == 0) ? J.u1 : J.u2;
            if (via) {
                joint.via = via;
                joint.z_side = m.add_edge(zv, *via, tag + "a");
                joint.w_side = m.add_edge(*via, wv, tag + "b");
            } else {
                joint.whole = m.add_edge(zv, wv, tag);
            }
        }
        if (spec.kinds[i] == SupervertexKind::APrime) J.uu = m.add_edge(*J.u1, *J.u2, "A" + std::to_string(i) + ".uu");
    }

    std::set<std::uint32_t> cycle_edge_ids;
    for (EdgeId e : out.cycle.e) cycle_edge_ids.insert(e.value);
    out.base_edge.assign(base.edge_count(), std::nullopt);
    auto image = [&](VertexId v) {
        return cycle_pos[v.value] >= 0 ? out.junctions[cycle_pos[v.value]].u : *out.base_vertex[v.value];
    };
    for (std::uint32_t e = 0; e < base.edge_count(); ++e) {
        if (cycle_edge_ids.contains(e)) continue;
        const Edge& ed = base.edge(EdgeId{e});
        out.base_edge[e] = m.add_edge(image(ed.a), image(ed.b), "G." + ed.label);
    }
    return out;
}

/// M_int = base[V \ V(C)], with the f stubs as semiedges.
inline Submultipole m_int(const Multipole& base, const std::vector<VertexId>& cycle) {
    std::set<std::uint32_t> on_cycle;
    for (VertexId v : cycle) on_cycle.insert(v.value);
    std::vector<VertexId> keep;
    for (std::uint32_t v = 0; v < base.vertex_count(); ++v)
        if (!on_cycle.contains(v)) keep.push_back(VertexId{v});
    return induced_submultipole(base, keep);
}

inline EdgeColoring sigma_int(const EdgeColoring& sigma, const Multipole& base, const Submultipole& mint) {
    return restriction(sigma, base, mint);
}

// ---------------------------------------------------------------------------
// Reversal

/// The same graph read along the cycle in the opposite direction: slot k is
/// old slot g−2−k seen through the side swap, A_k is old A_{g−1−k},
/// p'_m = p_{g−3−m}⁻¹ and d'_k = p_{g−2−k}⁻¹(d_{g−1−k}).
inline SuperpositionSpec reverse_spec(const SuperpositionSpec& spec) {
    require_valid(spec);
    const LayoutMap& S = side_swap_iso();
    const SuperedgeLayout& L = petersen_superedge();
    for (int j = 0; j < 3; ++j)
        if (S.semiedge[L.left[j].value] != L.right[j].value)
            throw Error("reverse_spec: side swap does not keep semiedge indices");

    const std::size_t g = spec.g();
    auto mod = [g](long long v) { return static_cast<std::size_t>(((v % static_cast<long long>(g)) + g) % g); };
    SuperpositionSpec out;
    out.base = spec.base;
    out.cycle.resize(g);
    out.kinds.resize(g);
    out.junctions.resize(g);
    for (std::size_t k = 0; k < g; ++k) {
        out.cycle[k] = spec.cycle[g - 1 - k];
        out.kinds[k] = spec.kinds[g - 1 - k];
        const long long kk = static_cast<long long>(k);
        out.junctions[k].p = inverse(spec.junctions[mod(static_cast<long long>(g) - 3 - kk)].p);
        const Perm3 before = inverse(spec.junctions[mod(static_cast<long long>(g) - 2 - kk)].p);
        out.junctions[k].d = before[spec.junctions[g - 1 - k].d - 1];
    }
    return out;
}

/// Vertex map from build(reverse_spec(spec)) to build(spec) by provenance
/// labels; u1/u2 are matched through their superedge neighbors.
inline std::vector<VertexId> reversal_vertex_map(const SuperpositionSpec& spec, const Superposition& original,
                                                 const Superposition& reversed) {
    const LayoutMap& S = side_swap_iso();
    const Multipole& L = petersen_superedge().multipole;
    const std::size_t g = spec.g();
    const Multipole& a = reversed.graph;
    const Multipole& b = original.graph;
    std::vector<std::optional<VertexId>> map(a.vertex_count());

    for (std::uint32_t v = 0; v < spec.base.vertex_count(); ++v)
        if (reversed.base_vertex[v]) map[reversed.base_vertex[v]->value] = *original.base_vertex[v];
    for (std::size_t k = 0; k < g; ++k) {
        const std::size_t old_slot = (2 * g - 2 - k) % g;
        for (std::uint32_t x = 0; x < L.vertex_count(); ++x)
            map[reversed.slots[k].vertex[x].value] = original.slots[old_slot].vertex[S.vertex[x]];
        map[reversed.junctions[k].u.value] = original.junctions[g - 1 - k].u;
    }
    for (std::size_t k = 0; k < g; ++k) {
        const JunctionHandles& J = reversed.junctions[k];
        const JunctionHandles& O = original.junctions[g - 1 - k];
        for (auto mid : {J.u1, J.u2}) {
            if (!mid) continue;
            std::optional<VertexId> anchor;
            for (const Element& el : a.incident(*mid)) {
                VertexId n = a.other_end(el.edge(), *mid);
                if (map[n.value] && n != J.u1 && n != J.u2) anchor = map[n.value];
            }
            for (auto cand : {O.u1, O.u2})
                if (cand && anchor && b.edge_between(*cand, *anchor)) map[mid->value] = *cand;
        }
    }
    std::vector<VertexId> out;
    for (std::uint32_t v = 0; v < map.size(); ++v) {
        if (!map[v]) throw Error("reversal_vertex_map: unmatched vertex " + a.vertex(VertexId{v}).label);
        out.push_back(*map[v]);
    }
    return out;
}

/// build(reverse_spec(spec)) is isomorphic to build(spec) through the
/// provenance map.
inline bool check_reversal(const SuperpositionSpec& spec) {
    Superposition original = build(spec);
    Superposition reversed = build(reverse_spec(spec));
    if (original.graph.vertex_count() != reversed.graph.vertex_count() ||
        original.graph.edge_count() != reversed.graph.edge_count())
        return false;
    std::vector<VertexId> map;
    try {
        map = reversal_vertex_map(spec, original, reversed);
    } catch (const Error&) {
        return false;
    }
    std::set<std::uint32_t> image;
    for (VertexId v : map) image.insert(v.value);
    if (image.size() != map.size()) return false;
    auto edge_multiset = [](const Multipole& m, const std::vector<VertexId>* f) {
        std::multiset<std::pair<std::uint32_t, std::uint32_t>> out;
        for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
            const Edge& ed = m.edge(EdgeId{e});
            std::uint32_t x = f ? (*f)[ed.a.value].value : ed.a.value;
            std::uint32_t y = f ? (*f)[ed.b.value].value : ed.b.value;
            out.emplace(std::min(x, y), std::max(x, y));
        }
        return out;
    };
    return edge_multiset(reversed.graph, &map) == edge_multiset(original.graph, nullptr);
}

/// Carries a coloring of build(reverse_spec(spec)) over to build(spec).
inline EdgeColoring map_reversed_coloring(const SuperpositionSpec& spec, const Superposition& original,
                                          const Superposition& reversed, const EdgeColoring& sigma) {
    std::vector<VertexId> map = reversal_vertex_map(spec, original, reversed);
    const Multipole& a = reversed.graph;
    const Multipole& b = original.graph;
    EdgeColoring out(b);
    for (std::uint32_t e = 0; e < a.edge_count(); ++e) {
        const Edge& ed = a.edge(EdgeId{e});
        std::optional<EdgeId> target;
        if (ed.label.starts_with("G.")) target = b.find_edge(ed.label);
        else target = b.edge_between(map[ed.a.value], map[ed.b.value]);
        if (!target) throw Error("map_reversed_coloring: no image for edge " + ed.label);
        out.set_raw(Element::of(*target), sigma.raw(EdgeId{e}));
    }
    return out;
}

} // namespace normsnark
