#pragma once

#include <algorithm>
#include <array>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "coloring.hpp"
#include "multipole.hpp"
#include "oracle.hpp"

namespace normsnark {

/// Petersen graph as the Kneser graph K(5,2): vertices are 2-subsets of
/// {1..5} labeled "12", "13", ..., adjacent when disjoint.
inline Multipole petersen_graph() {
    Multipole g;
    std::vector<std::array<int, 2>> sets;
    for (int a = 1; a <= 5; ++a)
        for (int b = a + 1; b <= 5; ++b) {
            sets.push_back({a, b});
            g.add_vertex(std::to_string(a) + std::to_string(b));
        }
    for (std::uint32_t i = 0; i < sets.size(); ++i)
        for (std::uint32_t j = i + 1; j < sets.size(); ++j) {
            const auto& s = sets[i];
            const auto& t = sets[j];
            if (s[0] != t[0] && s[0] != t[1] && s[1] != t[0] && s[1] != t[1])
                g.add_edge(VertexId{i}, VertexId{j});
        }
    return g;
}

// ---------------------------------------------------------------------------
// Superedge layout

/// P10 with two vertices at distance 2 removed. Left semiedges l1..l3 hang on
/// w1..w3, right semiedges r1..r3 on z1..z3, and w1 = z1 is the common
/// neighbor of the removed pair.
struct SuperedgeLayout {
    Multipole multipole;
    std::array<SemiedgeId, 3> left{};
    std::array<SemiedgeId, 3> right{};
    std::array<VertexId, 3> w{};
    std::array<VertexId, 3> z{};
    VertexId w4;
    VertexId z4;
    VertexId o;

    static constexpr std::size_t kVertices = 8;
    static constexpr std::size_t kEdges = 9;
    static constexpr std::size_t kSemiedges = 6;
};

namespace detail {

inline SuperedgeLayout derive_superedge() {
    Multipole p = petersen_graph();
    const VertexId u = p.vertex_by_label("12");
    const VertexId v = p.vertex_by_label("13");
    auto neighbors = [&](VertexId x) {
        std::vector<VertexId> out;
        for (const Element& el : p.incident(x)) out.push_back(p.other_end(el.edge(), x));
        std::sort(out.begin(), out.end());
        return out;
    };
    auto nu = neighbors(u);
    auto nv = neighbors(v);
    std::vector<VertexId> common;
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
    if (p.edge_between(u, v) || common.size() != 1)
        throw Error("superedge derivation: removed pair is not at distance 2");
    const VertexId w1 = common[0];
    std::vector<VertexId> wl, zl;
    for (VertexId x : nu)
        if (x != w1) wl.push_back(x);
    for (VertexId x : nv)
        if (x != w1) zl.push_back(x);

    std::vector<VertexId> rest;
    for (std::uint32_t x = 0; x < p.vertex_count(); ++x) {
        VertexId id{x};
        if (id != u && id != v && id != w1 && std::find(wl.begin(), wl.end(), id) == wl.end() &&
            std::find(zl.begin(), zl.end(), id) == zl.end())
            rest.push_back(id);
    }
    auto adjacent_to_both = [&](VertexId a, VertexId b) -> VertexId {
        for (VertexId x : rest)
            if (p.edge_between(x, a) && p.edge_between(x, b)) return x;
        throw Error("superedge derivation: unexpected Petersen structure");
    };
    const VertexId w4 = adjacent_to_both(wl[0], zl[0]);
    const VertexId z4 = adjacent_to_both(wl[1], zl[1]);
    VertexId o{};
    for (VertexId x : rest)
        if (x != w4 && x != z4) o = x;

    const std::array<VertexId, 8> order{w1, wl[0], wl[1], w4, zl[0], zl[1], z4, o};
    const std::array<const char*, 8> names{"w1", "w2", "w3", "w4", "z2", "z3", "z4", "o"};
    std::vector<int> local(p.vertex_count(), -1);
    SuperedgeLayout out;
    for (std::size_t k = 0; k < order.size(); ++k) {
        local[order[k].value] = static_cast<int>(k);
        out.multipole.add_vertex(names[k]);
    }
    std::vector<std::pair<int, int>> edges;
    for (std::uint32_t e = 0; e < p.edge_count(); ++e) {
        const Edge& ed = p.edge(EdgeId{e});
        int a = local[ed.a.value], b = local[ed.b.value];
        if (a < 0 || b < 0) continue;
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) out.multipole.add_edge(VertexId{a}, VertexId{b});

    out.w = {VertexId{0}, VertexId{1}, VertexId{2}};
    out.z = {VertexId{0}, VertexId{4}, VertexId{5}};
    out.w4 = VertexId{3};
    out.z4 = VertexId{6};
    out.o = VertexId{7};
    for (int j = 0; j < 3; ++j) out.left[j] = out.multipole.add_semiedge(out.w[j], "l" + std::to_string(j + 1));
    for (int j = 0; j < 3; ++j) out.right[j] = out.multipole.add_semiedge(out.z[j], "r" + std::to_string(j + 1));
    out.multipole.add_connector("left", {out.left.begin(), out.left.end()});
    out.multipole.add_connector("right", {out.right.begin(), out.right.end()});

    if (out.multipole.edge_count() != SuperedgeLayout::kEdges || !validate(out.multipole).ok())
        throw Error("superedge derivation: layout failed validation");
    return out;
}

} // namespace detail

inline const SuperedgeLayout& petersen_superedge() {
    static const SuperedgeLayout layout = detail::derive_superedge();
    return layout;
}

// ---------------------------------------------------------------------------
// Isomorphisms of the superedge

/// Bijection of the layout's vertices, edges and semiedges. Colorings are
/// pulled back: σ'(x) = σ(φ(x)).
struct LayoutMap {
    std::array<std::uint32_t, SuperedgeLayout::kVertices> vertex{};
    std::array<std::uint32_t, SuperedgeLayout::kEdges> edge{};
    std::array<std::uint32_t, SuperedgeLayout::kSemiedges> semiedge{};
    bool swaps_sides = false;

    friend bool operator==(const LayoutMap&, const LayoutMap&) = default;
};

inline LayoutMap compose(const LayoutMap& f, const LayoutMap& g) {
    LayoutMap out;
    for (std::size_t k = 0; k < out.vertex.size(); ++k) out.vertex[k] = f.vertex[g.vertex[k]];
    for (std::size_t k = 0; k < out.edge.size(); ++k) out.edge[k] = f.edge[g.edge[k]];
    for (std::size_t k = 0; k < out.semiedge.size(); ++k) out.semiedge[k] = f.semiedge[g.semiedge[k]];
    out.swaps_sides = f.swaps_sides != g.swaps_sides;
    return out;
}

inline bool is_identity(const LayoutMap& m) {
    for (std::size_t k = 0; k < m.vertex.size(); ++k)
        if (m.vertex[k] != k) return false;
    for (std::size_t k = 0; k < m.edge.size(); ++k)
        if (m.edge[k] != k) return false;
    for (std::size_t k = 0; k < m.semiedge.size(); ++k)
        if (m.semiedge[k] != k) return false;
    return true;
}

namespace detail {

/// Completes a vertex permutation into a LayoutMap, or fails if it does not
/// preserve edges and map each connector onto a connector.
inline std::optional<LayoutMap> complete_layout_map(const SuperedgeLayout& L,
                                                    const std::array<std::uint32_t, 8>& perm) {
    const Multipole& m = L.multipole;
    LayoutMap out;
    out.vertex = perm;
    for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(EdgeId{e});
        auto image = m.edge_between(VertexId{perm[ed.a.value]}, VertexId{perm[ed.b.value]});
        if (!image) return std::nullopt;
        out.edge[e] = image->value;
    }
    // Semiedge j of a side must go to semiedge j' of the same (or the other) side,
    // attached to the image vertex.
    for (bool swap : {false, true}) {
        bool ok = true;
        for (int side = 0; side < 2 && ok; ++side) {
            const auto& from = side == 0 ? L.left : L.right;
            const auto& to = (side == 0) != swap ? L.left : L.right;
            for (int j = 0; j < 3 && ok; ++j) {
                VertexId at = *m.semiedge(from[j]).vertex;
                std::optional<std::uint32_t> hit;
                for (int k = 0; k < 3; ++k)
                    if (m.semiedge(to[k]).vertex->value == perm[at.value]) hit = to[k].value;
                if (!hit) ok = false;
                else out.semiedge[from[j].value] = *hit;
            }
        }
        if (ok) {
            out.swaps_sides = swap;
            return out;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Every automorphism of the superedge that maps connectors onto connectors,
/// ordered lexicographically by vertex images.
inline const std::vector<LayoutMap>& layout_automorphisms() {
    static const std::vector<LayoutMap> all = [] {
        const SuperedgeLayout& L = petersen_superedge();
        std::vector<LayoutMap> out;
        std::array<std::uint32_t, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
        do {
            if (auto m = detail::complete_layout_map(L, perm)) out.push_back(*m);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }();
    return all;
}

/// I = (w2 w3)(z2 z3)(w4 z4).
inline const LayoutMap& iso_I() {
    static const LayoutMap I = [] {
        const SuperedgeLayout& L = petersen_superedge();
        std::array<std::uint32_t, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
        auto swap = [&](VertexId a, VertexId b) { std::swap(perm[a.value], perm[b.value]); };
        swap(L.w[1], L.w[2]);
        swap(L.z[1], L.z[2]);
        swap(L.w4, L.z4);
        auto m = detail::complete_layout_map(L, perm);
        if (!m || m->swaps_sides) throw Error("iso_I: not an automorphism of the superedge");
        return *m;
    }();
    return I;
}

/// Lexicographically least automorphism exchanging the two connectors.
inline const LayoutMap& side_swap_iso() {
    static const LayoutMap S = [] {
        for (const LayoutMap& m : layout_automorphisms())
            if (m.swaps_sides) return m;
        throw Error("side_swap_iso: no connector-exchanging automorphism");
    }();
    return S;
}

inline EdgeColoring apply_iso(const LayoutMap& map, const EdgeColoring& sigma) {
    const Multipole& m = petersen_superedge().multipole;
    if (!sigma.fits(m)) throw InvalidInput("apply_iso: coloring is not a superedge coloring");
    EdgeColoring out(m);
    for (std::uint32_t e = 0; e < m.edge_count(); ++e)
        out.set_raw(Element::of(EdgeId{e}), sigma.raw(EdgeId{map.edge[e]}));
    for (std::uint32_t s = 0; s < m.semiedge_count(); ++s)
        out.set_raw(Element::of(SemiedgeId{s}), sigma.raw(SemiedgeId{map.semiedge[s]}));
    return out;
}

// ---------------------------------------------------------------------------
// Junction parameters shared by the kit and the superposition

enum class SupervertexKind : std::uint8_t { A, APrime };

inline const char* to_string(SupervertexKind k) { return k == SupervertexKind::A ? "A" : "Aprime"; }

/// p[j-1] = p(j).
using Perm3 = std::array<int, 3>;

inline bool is_perm3(const Perm3& p) {
    int seen = 0;
    for (int v : p) {
        if (v < 1 || v > 3 || (seen & (1 << v))) return false;
        seen |= 1 << v;
    }
    return true;
}

inline Perm3 inverse(const Perm3& p) {
    Perm3 out{};
    for (int j = 1; j <= 3; ++j) out[p[j - 1] - 1] = j;
    return out;
}

/// (f ∘ g)(j) = f(g(j)).
inline Perm3 compose(const Perm3& f, const Perm3& g) {
    return {f[g[0] - 1], f[g[1] - 1], f[g[2] - 1]};
}

/// The six permutations in lexicographic order.
inline const std::array<Perm3, 6>& all_perm3() {
    static const std::array<Perm3, 6> all{Perm3{1, 2, 3}, Perm3{1, 3, 2}, Perm3{2, 1, 3},
                                          Perm3{2, 3, 1}, Perm3{3, 1, 2}, Perm3{3, 2, 1}};
    return all;
}

inline std::string to_string(const Perm3& p) {
    return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
}

// ---------------------------------------------------------------------------
// Base-coloring contexts

/// Base colors seen by one superedge slot k: prev = σ(e_{k-1}),
/// own = σ(e_k), stub = σ(f_k). The forward pair σ(e_{k+1}), σ(f_{k+1}) is
/// only needed to σ-color the L family.
struct SlotColors {
    Color prev;
    Color own;
    Color stub;
    std::optional<Color> next_own;
    std::optional<Color> next_stub;
};

/// The five base colors around junction i:
/// x = σ(e_{i-2}), y = σ(f_{i-1}), a = σ(e_{i-1}), b = σ(e_i), c = σ(f_i).
struct JunctionContext {
    Color x, y, a, b, c;

    SlotColors current() const { return {a, b, c, std::nullopt, std::nullopt}; }
    SlotColors previous() const { return {x, a, y, b, c}; }

    /// Proper at u_{i-1} and u_i, and e_{i-1} normal.
    bool valid() const {
        if (a == b || b == c || a == c || x == y || x == a || y == a) return false;
        Palette xy = static_cast<Palette>(bit(x) | bit(y));
        Palette bc = static_cast<Palette>(bit(b) | bit(c));
        Palette rest = static_cast<Palette>(kAllColors & ~(bit(a) | bc));
        return xy == bc || xy == rest;
    }

    friend bool operator==(const JunctionContext&, const JunctionContext&) = default;
};

inline std::string to_string(const JunctionContext& k) {
    std::ostringstream os;
    os << "x=" << k.x.value() << " y=" << k.y.value() << " a=" << k.a.value() << " b=" << k.b.value()
       << " c=" << k.c.value();
    return os.str();
}

/// All 240 valid contexts in lexicographic (a, b, c, x, y) order.
inline const std::vector<JunctionContext>& all_junction_contexts() {
    static const std::vector<JunctionContext> all = [] {
        std::vector<JunctionContext> out;
        for (int a = 1; a <= 5; ++a)
            for (int b = 1; b <= 5; ++b)
                for (int c = 1; c <= 5; ++c)
                    for (int x = 1; x <= 5; ++x)
                        for (int y = 1; y <= 5; ++y) {
                            JunctionContext k{Color{x}, Color{y}, Color{a}, Color{b}, Color{c}};
                            if (k.valid()) out.push_back(k);
                        }
        return out;
    }();
    return all;
}

/// π with π(1)=b, π(2)=a, π(3)=c and 4, 5 sent to the leftovers in
/// increasing order. π⁻¹ takes a context to its canonical form (a,b,c)=(2,1,3).
inline ColorPermutation canonical_frame(const JunctionContext& k) {
    return ColorPermutation::from_leading(k.b, k.a, k.c);
}

// ---------------------------------------------------------------------------
// Boundary predicates

inline bool is_right_monochromatic(const EdgeColoring& sigma, const SlotColors& s) {
    const SuperedgeLayout& L = petersen_superedge();
    if (!is_normal(L.multipole, sigma)) return false;
    ColorScheme want(s.own, static_cast<Palette>(bit(s.prev) | bit(s.stub)));
    for (SemiedgeId r : L.right)
        if (!schemes_consistent(scheme_of(L.multipole, sigma, r), want)) return false;
    return true;
}

namespace detail {

inline std::array<int, 2> non_dock(int dock) {
    if (dock == 1) return {2, 3};
    if (dock == 2) return {1, 3};
    if (dock == 3) return {1, 2};
    throw InvalidInput("dock must be 1, 2 or 3");
}

} // namespace detail

/// The P^l chain of a left-compatible coloring: the (prev, stub) Kempe chain
/// starting at the first non-dock left semiedge. Empty if its start is not
/// colored with a chain color.
inline std::optional<KempeChain> left_chain(const EdgeColoring& sigma, const SlotColors& s, int dock) {
    const SuperedgeLayout& L = petersen_superedge();
    SemiedgeId start = L.left[detail::non_dock(dock)[0] - 1];
    Color c = sigma.at(start);
    if (c != s.prev && c != s.stub) return std::nullopt;
    return find_kempe_chain(L.multipole, sigma, start, {s.prev, s.stub});
}

inline bool is_left_compatible(const EdgeColoring& sigma, const SlotColors& s, int dock) {
    const SuperedgeLayout& L = petersen_superedge();
    if (!is_normal(L.multipole, sigma)) return false;
    ColorScheme dock_scheme(s.own, static_cast<Palette>(bit(s.prev) | bit(s.stub)));
    ColorScheme other_scheme(s.prev, static_cast<Palette>(bit(s.own) | bit(s.stub)));
    if (!schemes_consistent(scheme_of(L.multipole, sigma, L.left[dock - 1]), dock_scheme)) return false;
    auto nd = detail::non_dock(dock);
    for (int j : nd)
        if (!schemes_consistent(scheme_of(L.multipole, sigma, L.left[j - 1]), other_scheme)) return false;
    auto chain = left_chain(sigma, s, dock);
    if (!chain || chain->terminal != L.left[nd[1] - 1]) return false;
    return is_normal(L.multipole, kempe_swap(L.multipole, sigma, *chain));
}

/// A left-compatible coloring with its P^l chain already swapped, which is the
/// form required across an A′ supervertex.
inline bool is_left_compatible_swapped(const EdgeColoring& sigma, const SlotColors& s, int dock) {
    const SuperedgeLayout& L = petersen_superedge();
    if (!is_normal(L.multipole, sigma)) return false;
    auto chain = left_chain(sigma, s, dock);
    if (!chain || chain->terminal != L.left[detail::non_dock(dock)[1] - 1]) return false;
    return is_left_compatible(kempe_swap(L.multipole, sigma, *chain), s, dock);
}

/// Swaps P^l of a left-compatible coloring.
inline EdgeColoring swap_left_chain(const EdgeColoring& sigma, const SlotColors& s, int dock) {
    const SuperedgeLayout& L = petersen_superedge();
    auto chain = left_chain(sigma, s, dock);
    if (!chain || chain->terminal != L.left[detail::non_dock(dock)[1] - 1])
        throw InvalidInput("swap_left_chain: no Kempe chain between the non-dock left semiedges");
    return kempe_swap(L.multipole, sigma, *chain);
}

// ---------------------------------------------------------------------------
// Two-superedge junction harness

/// How B_{i-1} meets B_i at A_i: right semiedge j of B_{i-1} joins left
/// semiedge p(j) of B_i, and the joint with p(j) = dock passes through u_i.
struct JunctionLink {
    SupervertexKind kind = SupervertexKind::A;
    Perm3 p{1, 2, 3};
    int dock = 1;
    Color f;
    /// Color of u'u'' (A′ only).
    std::optional<Color> uu;
};

/// Superedge colorings chained by links, with open ends left as semiedges
/// and f stubs as semiedges "A<k>.f".
struct SegmentAssembly {
    Multipole graph;
    EdgeColoring coloring;
    std::vector<VertexId> u;
    /// Identified semiedges that disagreed in color, by label.
    std::vector<std::string> conflicts;
};

inline SegmentAssembly assemble_segment(std::span<const EdgeColoring> members, std::span<const JunctionLink> links) {
    const SuperedgeLayout& L = petersen_superedge();
    if (members.empty() || links.size() + 1 != members.size())
        throw InvalidInput("assemble_segment: need one link between consecutive members");

    SegmentAssembly out;
    Multipole& g = out.graph;
    std::vector<std::uint32_t> voff;
    std::vector<std::pair<Element, int>> colors;
    for (std::size_t k = 0; k < members.size(); ++k) {
        if (!members[k].fits(L.multipole)) throw InvalidInput("assemble_segment: not a superedge coloring");
        const std::string pre = "B" + std::to_string(k) + ".";
        voff.push_back(static_cast<std::uint32_t>(g.vertex_count()));
        for (std::uint32_t v = 0; v < L.multipole.vertex_count(); ++v)
            g.add_vertex(pre + L.multipole.vertex(VertexId{v}).label);
        for (std::uint32_t e = 0; e < L.multipole.edge_count(); ++e) {
            const Edge& ed = L.multipole.edge(EdgeId{e});
            EdgeId id = g.add_edge(VertexId{voff[k] + ed.a.value}, VertexId{voff[k] + ed.b.value},
                                   pre + ed.label);
            colors.emplace_back(Element::of(id), members[k].raw(EdgeId{e}));
        }
    }
    auto at = [&](std::size_t k, SemiedgeId s) {
        return VertexId{voff[k] + L.multipole.semiedge(s).vertex->value};
    };
    for (int j = 0; j < 3; ++j) {
        SemiedgeId s = g.add_semiedge(at(0, L.left[j]), "B0.l" + std::to_string(j + 1));
        colors.emplace_back(Element::of(s), members[0].raw(L.left[j]));
    }
    for (std::size_t k = 0; k < links.size(); ++k) {
        const JunctionLink& link = links[k];
        if (!is_perm3(link.p)) throw InvalidInput("assemble_segment: bad permutation");
        if (link.dock < 1 || link.dock > 3) throw InvalidInput("assemble_segment: bad dock");
        const std::string pre = "A" + std::to_string(k + 1) + ".";
        const EdgeColoring& left = members[k];
        const EdgeColoring& right = members[k + 1];
        VertexId u = g.add_vertex(pre + "u");
        out.u.push_back(u);
        SemiedgeId f = g.add_semiedge(u, pre + "f");
        colors.emplace_back(Element::of(f), link.f.value());
        std::vector<VertexId> mids;
        for (int j = 1; j <= 3; ++j) {
            int q = link.p[j - 1];
            VertexId zv = at(k, L.right[j - 1]);
            VertexId wv = at(k + 1, L.left[q - 1]);
            int cz = left.raw(L.right[j - 1]);
            int cw = right.raw(L.left[q - 1]);
            const std::string tag = pre + std::to_string(j);
            if (q == link.dock) {
                colors.emplace_back(Element::of(g.add_edge(zv, u, tag + "a")), cz);
                colors.emplace_back(Element::of(g.add_edge(u, wv, tag + "b")), cw);
            } else if (link.kind == SupervertexKind::A) {
                if (cz != cw) out.conflicts.push_back(tag);
                colors.emplace_back(Element::of(g.add_edge(zv, wv, tag)), cz);
            } else {
                VertexId mid = g.add_vertex(pre + "u" + std::to_string(mids.size() + 1));
                mids.push_back(mid);
                colors.emplace_back(Element::of(g.add_edge(zv, mid, tag + "a")), cz);
                colors.emplace_back(Element::of(g.add_edge(mid, wv, tag + "b")), cw);
            }
        }
        if (link.kind == SupervertexKind::APrime) {
            if (!link.uu) throw InvalidInput("assemble_segment: A' link needs a u'u'' color");
            colors.emplace_back(Element::of(g.add_edge(mids[0], mids[1], pre + "uu")), link.uu->value());
        }
    }
    const std::size_t last = members.size() - 1;
    for (int j = 0; j < 3; ++j) {
        SemiedgeId s = g.add_semiedge(at(last, L.right[j]), "B" + std::to_string(last) + ".r" + std::to_string(j + 1));
        colors.emplace_back(Element::of(s), members[last].raw(L.right[j]));
    }
    out.coloring = EdgeColoring(g);
    for (auto [el, c] : colors) out.coloring.set_raw(el, c);
    return out;
}

/// B_{i-1} and B_i colored by `left` and `right` fit together at A_i: every
/// joined semiedge pair agrees, the assembly is normal and u_i sees {a,b,c}.
inline bool junction_compatible(const EdgeColoring& left, const EdgeColoring& right, const JunctionLink& link,
                                const JunctionContext& ctx) {
    std::array<EdgeColoring, 2> members{left, right};
    std::array<JunctionLink, 1> links{link};
    SegmentAssembly seg = assemble_segment(members, links);
    if (!seg.conflicts.empty() || !seg.coloring.is_total()) return false;
    if (!is_normal(seg.graph, seg.coloring)) return false;
    Palette want = static_cast<Palette>(bit(ctx.a) | bit(ctx.b) | bit(ctx.c));
    return palette(seg.graph, seg.coloring, seg.u[0]) == want;
}

// ---------------------------------------------------------------------------
// Templates

enum class TemplateId : std::uint8_t {
    R, Rbar, R_I, Rbar_I,
    L1, L2, L1bar, L2bar, L1_I, L2_I, L1bar_I, L2bar_I,
};

inline constexpr std::array<TemplateId, 4> kRFamily{TemplateId::R, TemplateId::Rbar, TemplateId::R_I,
                                                    TemplateId::Rbar_I};
inline constexpr std::array<TemplateId, 8> kLFamily{TemplateId::L1,   TemplateId::L2,   TemplateId::L1bar,
                                                    TemplateId::L2bar, TemplateId::L1_I, TemplateId::L2_I,
                                                    TemplateId::L1bar_I, TemplateId::L2bar_I};

inline const char* to_string(TemplateId id) {
    switch (id) {
        case TemplateId::R: return "R";
        case TemplateId::Rbar: return "Rbar";
        case TemplateId::R_I: return "R_I";
        case TemplateId::Rbar_I: return "Rbar_I";
        case TemplateId::L1: return "L1";
        case TemplateId::L2: return "L2";
        case TemplateId::L1bar: return "L1bar";
        case TemplateId::L2bar: return "L2bar";
        case TemplateId::L1_I: return "L1_I";
        case TemplateId::L2_I: return "L2_I";
        case TemplateId::L1bar_I: return "L1bar_I";
        case TemplateId::L2bar_I: return "L2bar_I";
    }
    return "?";
}

inline std::optional<TemplateId> template_from_string(std::string_view s) {
    for (TemplateId id : kRFamily)
        if (s == to_string(id)) return id;
    for (TemplateId id : kLFamily)
        if (s == to_string(id)) return id;
    return std::nullopt;
}

inline bool is_r_family(TemplateId id) { return static_cast<int>(id) < 4; }
inline bool has_bar(TemplateId id) {
    return id == TemplateId::Rbar || id == TemplateId::Rbar_I || id == TemplateId::L1bar ||
           id == TemplateId::L2bar || id == TemplateId::L1bar_I || id == TemplateId::L2bar_I;
}
inline bool has_iso(TemplateId id) {
    return id == TemplateId::R_I || id == TemplateId::Rbar_I || id == TemplateId::L1_I || id == TemplateId::L2_I ||
           id == TemplateId::L1bar_I || id == TemplateId::L2bar_I;
}

/// The same template with I applied once more (I is an involution).
inline TemplateId toggle_iso(TemplateId id) {
    switch (id) {
        case TemplateId::R: return TemplateId::R_I;
        case TemplateId::Rbar: return TemplateId::Rbar_I;
        case TemplateId::R_I: return TemplateId::R;
        case TemplateId::Rbar_I: return TemplateId::Rbar;
        case TemplateId::L1: return TemplateId::L1_I;
        case TemplateId::L2: return TemplateId::L2_I;
        case TemplateId::L1bar: return TemplateId::L1bar_I;
        case TemplateId::L2bar: return TemplateId::L2bar_I;
        case TemplateId::L1_I: return TemplateId::L1;
        case TemplateId::L2_I: return TemplateId::L2;
        case TemplateId::L1bar_I: return TemplateId::L1bar;
        case TemplateId::L2bar_I: return TemplateId::L2bar;
    }
    return id;
}

/// R family uses (c1,c2,c3); the L family adds the chain colors (c1', c2').
struct TemplateParams {
    Color c1{1}, c2{2}, c3{3};
    std::optional<std::array<Color, 2>> chain;
};

struct TemplateInstance {
    TemplateId id;
    TemplateParams params;
    EdgeColoring coloring;
};

/// Canonical R(1,2,3) and L^(1)(1,2,3,(4,5)), derived from their contracts.
struct TemplateBase {
    EdgeColoring r;
    EdgeColoring l1;
    /// Number of L^(1) candidates examined before one was accepted.
    std::size_t l1_candidates_examined = 0;
    std::vector<std::string> notes;
};

namespace detail {

/// Every element colored with one of `colors` lies on `chain`.
inline bool chain_covers(const Multipole& m, const EdgeColoring& sigma, const KempeChain& chain, Palette colors) {
    std::size_t n = 0;
    for (const Element& el : m.elements())
        if (colors & bit(sigma.raw(el))) ++n;
    return n == chain.elements.size();
}

/// Recolors the elements of a canonical chain carrying colors 4/5.
inline EdgeColoring rebind_chain(const EdgeColoring& sigma, int t1, int t2) {
    const Multipole& m = petersen_superedge().multipole;
    EdgeColoring out = sigma;
    for (const Element& el : m.elements()) {
        int c = sigma.raw(el);
        if (c == 4) out.set_raw(el, t1);
        else if (c == 5) out.set_raw(el, t2);
    }
    return out;
}

inline BoundaryConstraint r_contract() {
    const SuperedgeLayout& L = petersen_superedge();
    BoundaryConstraint bc;
    bc.restrict_all(L.multipole, static_cast<Palette>(bit(1) | bit(2) | bit(3)));
    const std::array<int, 3> left{2, 1, 2};
    for (int j = 0; j < 3; ++j) {
        bc.fix(L.left[j], Color{left[j]});
        bc.fix(L.right[j], Color{1});
    }
    bc.require_chain(L.left[0], L.left[2], {Color{2}, Color{3}});
    bc.accept = [](const EdgeColoring& s) {
        const SuperedgeLayout& L = petersen_superedge();
        KempeChain ch = find_kempe_chain(L.multipole, s, L.left[0], {Color{2}, Color{3}});
        return chain_covers(L.multipole, s, ch, static_cast<Palette>(bit(2) | bit(3)));
    };
    return bc;
}

inline bool l1_basic_contract(const EdgeColoring& s) {
    const SuperedgeLayout& L = petersen_superedge();
    KempeChain ch = find_kempe_chain(L.multipole, s, L.left[1], {Color{4}, Color{5}});
    if (ch.terminal != L.left[2]) return false;
    if (!chain_covers(L.multipole, s, ch, static_cast<Palette>(bit(4) | bit(5)))) return false;
    for (auto [t1, t2] : {std::pair{5, 4}, std::pair{1, 3}, std::pair{3, 1}})
        if (!is_normal(L.multipole, rebind_chain(s, t1, t2))) return false;
    return true;
}

inline BoundaryConstraint l1_contract() {
    const SuperedgeLayout& L = petersen_superedge();
    BoundaryConstraint bc;
    const std::array<int, 3> left{2, 4, 4};
    const std::array<int, 3> right{1, 2, 1};
    for (int j = 0; j < 3; ++j) {
        bc.fix(L.left[j], Color{left[j]});
        bc.fix(L.right[j], Color{right[j]});
    }
    bc.require_chain(L.left[1], L.left[2], {Color{4}, Color{5}});
    bc.accept = l1_basic_contract;
    return bc;
}

} // namespace detail

/// The ordered candidates for canonical L^(1): normal colorings with left
/// semiedges (2,4,4), right semiedges (1,2,1), a (4,5) chain from l2 to l3
/// carrying every 4 and 5, and staying normal when the chain is rebound.
inline std::vector<EdgeColoring> l1_candidates() {
    std::vector<EdgeColoring> out;
    enumerate_normal_colorings(petersen_superedge().multipole, detail::l1_contract(), [&](const EdgeColoring& s) {
        out.push_back(s);
        return false;
    });
    return out;
}

/// Canonical R(1,2,3): the least 3-coloring with right semiedges (1,1,1),
/// left semiedges (2,1,2) and all 2/3 elements on a single l1–l3 path.
inline EdgeColoring derive_r_base() {
    auto r = search_normal_coloring(petersen_superedge().multipole, detail::r_contract());
    if (!r) throw Error("template derivation: no coloring satisfies the R contract");
    return *r;
}

namespace detail {

inline EdgeColoring l2_from_l1(const EdgeColoring& l1) {
    return permute_colors(l1, ColorPermutation::transposition(1, 3));
}

/// Builds a template from explicit canonical bases (used while choosing L^(1)).
inline EdgeColoring instantiate(const EdgeColoring& r0, const EdgeColoring& l0, TemplateId id,
                                const TemplateParams& prm) {
    const SuperedgeLayout& L = petersen_superedge();
    EdgeColoring out;
    if (is_r_family(id)) {
        out = permute_colors(r0, ColorPermutation::from_leading(prm.c1, prm.c2, prm.c3));
        if (has_bar(id)) {
            KempeChain ch = find_kempe_chain(L.multipole, out, L.left[0], {prm.c2, prm.c3});
            out = kempe_swap(L.multipole, out, ch);
        }
    } else {
        if (!prm.chain) throw InvalidInput("L-family template needs chain colors");
        const Color c1p = (*prm.chain)[0];
        const Color c2p = (*prm.chain)[1];
        int t1 = 4, t2 = 5;
        ColorPermutation c;
        if (c1p == c2p) throw InvalidInput("L-family chain colors must differ");
        Palette lead = static_cast<Palette>(bit(prm.c1) | bit(prm.c2) | bit(prm.c3));
        if (!(lead & bit(c1p)) && !(lead & bit(c2p))) {
            c = ColorPermutation({prm.c1.value(), prm.c2.value(), prm.c3.value(), c1p.value(), c2p.value()});
        } else if (c1p == prm.c1 && c2p == prm.c3) {
            t1 = 1, t2 = 3;
            c = ColorPermutation::from_leading(prm.c1, prm.c2, prm.c3);
        } else if (c1p == prm.c3 && c2p == prm.c1) {
            t1 = 3, t2 = 1;
            c = ColorPermutation::from_leading(prm.c1, prm.c2, prm.c3);
        } else {
            throw InvalidInput("L-family chain colors must avoid (c1,c2,c3) or be (c1,c3) or (c3,c1)");
        }
        const bool second = id == TemplateId::L2 || id == TemplateId::L2bar || id == TemplateId::L2_I ||
                            id == TemplateId::L2bar_I;
        EdgeColoring base = second ? l2_from_l1(l0) : l0;
        out = permute_colors(rebind_chain(base, t1, t2), c);
        if (has_bar(id)) {
            KempeChain ch = find_kempe_chain(L.multipole, out, L.left[1], {c1p, c2p});
            out = kempe_swap(L.multipole, out, ch);
        }
    }
    if (has_iso(id)) out = apply_iso(iso_I(), out);
    return out;
}

/// Odd-pair table for d=2: (left, right) per p under A and
/// (left, right, u'u'' = σ(e_i) if true else σ(f_i)) under A′.
struct OddRow {
    Perm3 p;
    TemplateId left_a, right_a;
    TemplateId left_ap, right_ap;
    bool uu_is_own;
};

inline const std::array<OddRow, 6>& odd_table() {
    using T = TemplateId;
    static const std::array<OddRow, 6> rows{{
        {{1, 2, 3}, T::L2, T::Rbar, T::L2, T::R, true},
        {{1, 3, 2}, T::L2_I, T::Rbar, T::L2_I, T::R, true},
        {{2, 1, 3}, T::L1, T::R_I, T::L1_I, T::R_I, false},
        {{2, 3, 1}, T::L1_I, T::R_I, T::L1, T::R_I, false},
        {{3, 1, 2}, T::L2_I, T::Rbar, T::L2_I, T::R, true},
        {{3, 2, 1}, T::L2, T::Rbar, T::L2, T::R, true},
    }};
    return rows;
}

/// Canonical contexts: (a,b,c) = (2,1,3), (x,y) over the four allowed pairs.
inline std::array<JunctionContext, 4> canonical_contexts() {
    auto k = [](int x, int y) { return JunctionContext{Color{x}, Color{y}, Color{2}, Color{1}, Color{3}}; };
    return {k(4, 5), k(5, 4), k(1, 3), k(3, 1)};
}

inline TemplateParams sigma_params(TemplateId id, const SlotColors& s) {
    if (is_r_family(id)) return {s.own, s.prev, s.stub, std::nullopt};
    if (!s.next_own || !s.next_stub)
        throw InvalidInput("sigma_color: the L family needs sigma(e_{k+1}) and sigma(f_{k+1})");
    return {*s.next_own, s.own, *s.next_stub, std::array<Color, 2>{s.prev, s.stub}};
}

/// Number of table cells (6 permutations × {A, A′} × 4 canonical contexts)
/// that verify for a candidate L^(1).
inline int odd_table_score(const EdgeColoring& r0, const EdgeColoring& l0) {
    int score = 0;
    for (const JunctionContext& ctx : canonical_contexts()) {
        for (const OddRow& row : odd_table()) {
            for (SupervertexKind kind : {SupervertexKind::A, SupervertexKind::APrime}) {
                bool ap = kind == SupervertexKind::APrime;
                TemplateId lid = ap ? row.left_ap : row.left_a;
                TemplateId rid = ap ? row.right_ap : row.right_a;
                EdgeColoring left = instantiate(r0, l0, lid, sigma_params(lid, ctx.previous()));
                EdgeColoring right = instantiate(r0, l0, rid, sigma_params(rid, ctx.current()));
                JunctionLink link{kind, row.p, 2, ctx.c, std::nullopt};
                if (ap) link.uu = row.uu_is_own ? ctx.b : ctx.c;
                if (is_left_compatible(left, ctx.previous(), 1) && is_right_monochromatic(right, ctx.current()) &&
                    junction_compatible(left, right, link, ctx))
                    ++score;
            }
        }
    }
    return score;
}

inline TemplateBase derive_template_base() {
    TemplateBase base;
    base.r = derive_r_base();
    auto candidates = l1_candidates();
    if (candidates.empty()) throw Error("template derivation: no coloring satisfies the L contract");
    int best = -1;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        int score = odd_table_score(base.r, candidates[k]);
        if (score > best) {
            best = score;
            base.l1 = candidates[k];
            base.l1_candidates_examined = k + 1;
        }
        if (score == 48) break;
    }
    base.notes.push_back("L1 candidates: " + std::to_string(candidates.size()) + ", chosen #" +
                         std::to_string(base.l1_candidates_examined) + " with table score " +
                         std::to_string(best) + "/48");
    return base;
}

} // namespace detail

/// The canonical bases, derived once.
inline const TemplateBase& template_base() {
    static const TemplateBase base = detail::derive_template_base();
    return base;
}

inline TemplateInstance make_template(TemplateId id, const TemplateParams& params) {
    const TemplateBase& base = template_base();
    return {id, params, detail::instantiate(base.r, base.l1, id, params)};
}

/// σ-colored instance for slot colors `s`: R family (own, prev, stub); L
/// family (next_own, own, next_stub, (prev, stub)).
inline TemplateInstance sigma_color(TemplateId id, const SlotColors& s) {
    return make_template(id, detail::sigma_params(id, s));
}

/// Problems found when checking a coloring against its template's contract at
/// the canonical parameters R(1,2,3) / L(1,2,3,(4,5)).
inline std::vector<std::string> check_template_contract(TemplateId id, const EdgeColoring& sigma) {
    const SuperedgeLayout& L = petersen_superedge();
    std::vector<std::string> problems;
    if (!sigma.fits(L.multipole) || !sigma.is_total()) return {"coloring does not cover the superedge"};
    if (!is_normal(L.multipole, sigma)) problems.push_back("not normal");
    if (!problems.empty()) return problems;
    if (is_r_family(id)) {
        SlotColors s{Color{2}, Color{1}, Color{3}, std::nullopt, std::nullopt};
        if (palette_size(sigma.used_colors()) != 3) problems.push_back("R family must use exactly 3 colors");
        if (poor_count(L.multipole, sigma) != 9) problems.push_back("R family must have 9 poor edges");
        if (!is_right_monochromatic(sigma, s)) problems.push_back("not right-side monochromatic");
        bool bar = has_bar(id);
        int dock = has_iso(id) ? 3 : 2;
        bool left = bar ? is_left_compatible_swapped(sigma, s, dock) : is_left_compatible(sigma, s, dock);
        if (!left) problems.push_back("left side does not match the contract at dock " + std::to_string(dock));
    } else {
        SlotColors s{Color{4}, Color{2}, Color{5}, Color{1}, Color{3}};
        if (palette_size(sigma.used_colors()) != 5) problems.push_back("L family must touch all 5 colors");
        bool left = has_bar(id) ? is_left_compatible_swapped(sigma, s, 1) : is_left_compatible(sigma, s, 1);
        if (!left) problems.push_back("left side does not match the contract at dock 1");
    }
    if (!(sigma == make_template(id, is_r_family(id) ? TemplateParams{}
                                                       : TemplateParams{Color{1}, Color{2}, Color{3},
                                                                        std::array<Color, 2>{Color{4}, Color{5}}})
                       .coloring))
        problems.push_back("differs from the registry coloring");
    return problems;
}

// ---------------------------------------------------------------------------
// Registry text format: "template <id>" headers followed by "<label> <color>"
// lines for every edge and semiedge, at canonical parameters.

inline std::string export_registry() {
    const Multipole& m = petersen_superedge().multipole;
    std::ostringstream os;
    auto dump = [&](TemplateId id) {
        TemplateParams prm;
        if (!is_r_family(id)) prm.chain = std::array<Color, 2>{Color{4}, Color{5}};
        EdgeColoring s = make_template(id, prm).coloring;
        os << "template " << to_string(id) << "\n";
        for (const Element& el : m.elements()) os << m.element_label(el) << " " << s.raw(el) << "\n";
    };
    for (TemplateId id : kRFamily) dump(id);
    for (TemplateId id : kLFamily) dump(id);
    return os.str();
}

struct RegistryCheck {
    std::size_t templates = 0;
    std::vector<std::string> problems;
    bool ok() const { return problems.empty() && templates > 0; }
};

/// Parses the text format and re-validates every template against its contract.
inline RegistryCheck validate_registry_text(const std::string& text) {
    const Multipole& m = petersen_superedge().multipole;
    RegistryCheck check;
    std::istringstream in(text);
    std::string line;
    std::optional<TemplateId> current;
    EdgeColoring sigma(m);
    auto finish = [&] {
        if (!current) return;
        ++check.templates;
        for (const auto& p : check_template_contract(*current, sigma))
            check.problems.push_back(std::string(to_string(*current)) + ": " + p);
    };
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a, b;
        ls >> a >> b;
        if (a == "template") {
            finish();
            current = template_from_string(b);
            if (!current) throw ParseError("registry line " + std::to_string(lineno) + ": unknown template " + b);
            sigma = EdgeColoring(m);
            continue;
        }
        if (!current) throw ParseError("registry line " + std::to_string(lineno) + ": color before template header");
        int c = 0;
        try {
            c = std::stoi(b);
        } catch (const std::exception&) {
            throw ParseError("registry line " + std::to_string(lineno) + ": bad color");
        }
        if (c < 1 || c > 5) throw ParseError("registry line " + std::to_string(lineno) + ": color out of range");
        if (auto e = m.find_edge(a)) sigma.set_raw(Element::of(*e), c);
        else if (auto s = m.find_semiedge(a)) sigma.set_raw(Element::of(*s), c);
        else throw ParseError("registry line " + std::to_string(lineno) + ": unknown element " + a);
    }
    finish();
    return check;
}

} // namespace normsnark
