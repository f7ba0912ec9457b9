#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "coloring.hpp"
#include "oracle.hpp"
#include "petersen.hpp"
#include "superposition.hpp"

namespace normsnark {

// ---------------------------------------------------------------------------
// Decomposition into singletons and conjoined pairs

enum class ChunkKind : std::uint8_t { Singleton, RegularPair, OddPair };

inline const char* to_string(ChunkKind k) {
    switch (k) {
        case ChunkKind::Singleton: return "singleton";
        case ChunkKind::RegularPair: return "regular-pair";
        case ChunkKind::OddPair: return "odd-pair";
    }
    return "?";
}

/// A singleton covers `first`; a pair covers `first` (left) and first+1 mod g.
struct Chunk {
    ChunkKind kind;
    std::size_t first;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct EvenChain {
    std::size_t start;
    std::size_t length;

    friend bool operator==(const EvenChain&, const EvenChain&) = default;
};

struct ChainDecomposition {
    /// Ordered by first slot.
    std::vector<Chunk> chunks;
    std::vector<EvenChain> even_chains;
};

/// Requires some dock ≠ 1. A start slot has d_i = 1 and d_{i-1} ≠ 1; its end
/// is the first i*+r with d = 1 followed by a dock ≠ 1. The even-chain covers
/// i*..i*+r for odd r and i*..i*+r+1 for even r.
inline ChainDecomposition decompose(const std::vector<int>& docks) {
    const std::size_t g = docks.size();
    if (g == 0) throw InvalidInput("decompose: empty dock list");
    bool any = false;
    for (int d : docks) {
        if (d < 1 || d > 3) throw InvalidInput("decompose: dock out of range");
        any = any || d != 1;
    }
    if (!any) throw InvalidInput("decompose: every dock is 1");

    ChainDecomposition out;
    std::vector<bool> taken(g, false);
    for (std::size_t i = 0; i < g; ++i) {
        if (docks[i] != 1 || docks[(i + g - 1) % g] == 1) continue;
        std::size_t r = 0;
        while (!(docks[(i + r) % g] == 1 && docks[(i + r + 1) % g] != 1)) ++r;
        const std::size_t length = (r % 2 == 1) ? r + 1 : r + 2;
        out.even_chains.push_back({i, length});
        for (std::size_t k = 0; k < length; k += 2) {
            bool odd = (r % 2 == 0) && k == r;
            out.chunks.push_back({odd ? ChunkKind::OddPair : ChunkKind::RegularPair, (i + k) % g});
            taken[(i + k) % g] = taken[(i + k + 1) % g] = true;
        }
    }
    for (std::size_t i = 0; i < g; ++i)
        if (!taken[i]) out.chunks.push_back({ChunkKind::Singleton, i});
    std::sort(out.chunks.begin(), out.chunks.end(),
              [](const Chunk& a, const Chunk& b) { return a.first < b.first; });
    return out;
}

/// Every dock 1 and even g: consecutive regular pairs (0,1), (2,3), ...
inline ChainDecomposition decompose_all_pairs(std::size_t g) {
    if (g % 2 != 0) throw InvalidInput("decompose_all_pairs: odd cycle length");
    ChainDecomposition out;
    for (std::size_t i = 0; i < g; i += 2) out.chunks.push_back({ChunkKind::RegularPair, i});
    out.even_chains.push_back({0, g});
    return out;
}

// ---------------------------------------------------------------------------
// Chunk colorings

/// (A,2)→R, (A,3)→R_I, (A′,2)→R̄, (A′,3)→R̄_I.
inline TemplateId singleton_template(SupervertexKind kind, int dock) {
    if (dock != 2 && dock != 3) throw InvalidInput("singleton slot needs dock 2 or 3");
    if (kind == SupervertexKind::A) return dock == 2 ? TemplateId::R : TemplateId::R_I;
    return dock == 2 ? TemplateId::Rbar : TemplateId::Rbar_I;
}

inline TemplateInstance color_singleton(SupervertexKind kind, int dock, const SlotColors& s) {
    return sigma_color(singleton_template(kind, dock), s);
}

enum class PairSource : std::uint8_t { Table, Registry, Oracle };

inline const char* to_string(PairSource s) {
    switch (s) {
        case PairSource::Table: return "table";
        case PairSource::Registry: return "registry";
        case PairSource::Oracle: return "oracle";
    }
    return "?";
}

/// Colorings of B_{i-1} (left, left-side compatible at dock 1) and B_i
/// (right, right-side monochromatic) that fit together across A_i.
struct PairColoring {
    std::string left_id;
    std::string right_id;
    EdgeColoring left;
    EdgeColoring right;
    /// u'u'' color at A_i when A_i = A′.
    std::optional<Color> uu;
    PairSource source = PairSource::Table;
};

namespace detail {

inline bool pair_ok(const EdgeColoring& left, const EdgeColoring& right, const JunctionLink& link,
                    const JunctionContext& ctx) {
    return is_left_compatible(left, ctx.previous(), 1) && is_right_monochromatic(right, ctx.current()) &&
           junction_compatible(left, right, link, ctx);
}

/// u'u'' candidates: the preferred color first, then the rest ascending.
inline std::vector<Color> uu_candidates(SupervertexKind kind, std::optional<Color> preferred) {
    if (kind == SupervertexKind::A) return {};
    std::vector<Color> out;
    if (preferred) out.push_back(*preferred);
    for (int c = 1; c <= kColorCount; ++c)
        if (!preferred || c != preferred->value()) out.push_back(Color{c});
    return out;
}

inline std::optional<PairColoring> try_members(TemplateId lid, TemplateId rid, SupervertexKind kind,
                                               const Perm3& p, int dock, const JunctionContext& ctx,
                                               std::optional<Color> preferred_uu, PairSource source) {
    EdgeColoring left = sigma_color(lid, ctx.previous()).coloring;
    EdgeColoring right = sigma_color(rid, ctx.current()).coloring;
    JunctionLink link{kind, p, dock, ctx.c, std::nullopt};
    if (kind == SupervertexKind::A) {
        if (pair_ok(left, right, link, ctx)) return PairColoring{to_string(lid), to_string(rid), left, right, {}, source};
        return std::nullopt;
    }
    for (Color uu : uu_candidates(kind, preferred_uu)) {
        link.uu = uu;
        if (pair_ok(left, right, link, ctx)) return PairColoring{to_string(lid), to_string(rid), left, right, uu, source};
    }
    return std::nullopt;
}

/// Exhaustive search for the left member with the right member fixed.
inline std::optional<PairColoring> oracle_left_member(TemplateId rid, SupervertexKind kind, const Perm3& p, int dock,
                                                      const JunctionContext& ctx,
                                                      std::optional<Color> preferred_uu) {
    const SuperedgeLayout& L = petersen_superedge();
    const SlotColors prev = ctx.previous();
    EdgeColoring right = sigma_color(rid, ctx.current()).coloring;
    std::optional<PairColoring> found;
    BoundaryConstraint bc;
    bc.fix(L.left[0], prev.own);
    bc.fix(L.left[1], prev.prev);
    bc.fix(L.left[2], prev.prev);
    bc.require_chain(L.left[1], L.left[2], {prev.prev, prev.stub});
    bc.accept = [&](const EdgeColoring& left) {
        if (!is_left_compatible(left, prev, 1)) return false;
        JunctionLink link{kind, p, dock, ctx.c, std::nullopt};
        if (kind == SupervertexKind::A) {
            if (!junction_compatible(left, right, link, ctx)) return false;
            found = PairColoring{"oracle", to_string(rid), left, right, {}, PairSource::Oracle};
            return true;
        }
        for (Color uu : uu_candidates(kind, preferred_uu)) {
            link.uu = uu;
            if (junction_compatible(left, right, link, ctx)) {
                found = PairColoring{"oracle", to_string(rid), left, right, uu, PairSource::Oracle};
                return true;
            }
        }
        return false;
    };
    search_normal_coloring(L.multipole, bc);
    return found;
}

inline constexpr std::array<TemplateId, 4> kPairLeft{TemplateId::L1, TemplateId::L2, TemplateId::L1_I,
                                                     TemplateId::L2_I};

inline std::vector<TemplateId> right_order(TemplateId first) {
    std::vector<TemplateId> out{first};
    for (TemplateId id : kRFamily)
        if (id != first) out.push_back(id);
    return out;
}

inline std::optional<PairColoring> search_pair(const std::vector<TemplateId>& rights, SupervertexKind kind,
                                               const Perm3& p, int dock, const JunctionContext& ctx,
                                               std::optional<Color> preferred_uu) {
    for (TemplateId rid : rights)
        for (TemplateId lid : kPairLeft)
            if (auto r = try_members(lid, rid, kind, p, dock, ctx, preferred_uu, PairSource::Registry)) return r;
    for (TemplateId rid : rights)
        if (auto r = oracle_left_member(rid, kind, p, dock, ctx, preferred_uu)) return r;
    return std::nullopt;
}

/// Canonical context of `ctx`: (a,b,c) = (2,1,3).
inline JunctionContext to_canonical(const JunctionContext& ctx, const ColorPermutation& pi) {
    ColorPermutation inv = pi.inverse();
    return {inv(ctx.x), inv(ctx.y), inv(ctx.a), inv(ctx.b), inv(ctx.c)};
}

inline PairColoring from_canonical(PairColoring pc, const ColorPermutation& pi) {
    pc.left = permute_colors(pc.left, pi);
    pc.right = permute_colors(pc.right, pi);
    if (pc.uu) pc.uu = pi(*pc.uu);
    return pc;
}

struct PairKey {
    ChunkKind chunk;
    SupervertexKind kind;
    Perm3 p;
    int dock;
    int x, y;
    auto operator<=>(const PairKey&) const = default;
};

struct PairCache {
    std::mutex mutex;
    std::map<PairKey, std::optional<PairColoring>> entries;
};

inline PairCache& pair_cache() {
    static PairCache cache;
    return cache;
}

inline PairColoring cached_pair(const PairKey& key, const JunctionContext& ctx,
                                const std::function<std::optional<PairColoring>(const JunctionContext&)>& compute) {
    const ColorPermutation pi = canonical_frame(ctx);
    const JunctionContext canon = to_canonical(ctx, pi);
    PairKey k = key;
    k.x = canon.x.value();
    k.y = canon.y.value();
    PairCache& cache = pair_cache();
    std::optional<PairColoring> result;
    bool hit = false;
    {
        std::lock_guard lock(cache.mutex);
        if (auto it = cache.entries.find(k); it != cache.entries.end()) {
            result = it->second;
            hit = true;
        }
    }
    if (!hit) {
        result = compute(canon);
        std::lock_guard lock(cache.mutex);
        cache.entries.emplace(k, result);
    }
    if (!result)
        throw Error(std::string("no coloring found for ") + to_string(key.chunk) + " with p=" + to_string(key.p) +
                    " kind=" + to_string(key.kind) + " at " + to_string(ctx));
    return from_canonical(*result, pi);
}

} // namespace detail

/// d_{i-1} = d_i = 1. Right member R_I under A and R under A′, left member
/// from the L family; other R-family right members and an exhaustive search
/// for the left member are tried if those do not fit.
inline PairColoring color_regular_pair(SupervertexKind kind, const Perm3& p, const JunctionContext& ctx) {
    if (!ctx.valid()) throw InvalidInput("color_regular_pair: invalid context");
    detail::PairKey key{ChunkKind::RegularPair, kind, p, 1, 0, 0};
    return detail::cached_pair(key, ctx, [&](const JunctionContext& canon) {
        TemplateId first = kind == SupervertexKind::A ? TemplateId::R_I : TemplateId::R;
        std::optional<Color> uu = kind == SupervertexKind::APrime ? std::optional<Color>(canon.b) : std::nullopt;
        for (TemplateId lid : detail::kPairLeft)
            if (auto r = detail::try_members(lid, first, kind, p, 1, canon, uu, PairSource::Table)) return r;
        return detail::search_pair(detail::right_order(first), kind, p, 1, canon, uu);
    });
}

/// d_{i-1} = 1, d_i ∈ {2,3}, per the odd-pair table; for d_i = 3 the d = 2
/// row of ι∘p∘ι is used with I applied to both members.
inline PairColoring color_odd_pair(SupervertexKind kind, const Perm3& p, int dock, const JunctionContext& ctx) {
    if (!ctx.valid()) throw InvalidInput("color_odd_pair: invalid context");
    if (dock != 2 && dock != 3) throw InvalidInput("color_odd_pair: dock must be 2 or 3");
    detail::PairKey key{ChunkKind::OddPair, kind, p, dock, 0, 0};
    return detail::cached_pair(key, ctx, [&](const JunctionContext& canon) -> std::optional<PairColoring> {
        const Perm3 iota{1, 3, 2};
        const Perm3 row_p = dock == 2 ? p : compose(iota, compose(p, iota));
        const bool ap = kind == SupervertexKind::APrime;
        std::optional<Color> uu;
        TemplateId lid{}, rid{};
        for (const auto& row : detail::odd_table())
            if (row.p == row_p) {
                lid = ap ? row.left_ap : row.left_a;
                rid = ap ? row.right_ap : row.right_a;
                if (ap) uu = row.uu_is_own ? canon.b : canon.c;
            }
        if (dock == 3) {
            lid = toggle_iso(lid);
            rid = toggle_iso(rid);
        }
        if (auto r = detail::try_members(lid, rid, kind, p, dock, canon, uu, PairSource::Table)) {
            if (!ap || r->uu == uu) return r;
        }
        return detail::search_pair(detail::right_order(rid), kind, p, dock, canon, uu);
    });
}

// ---------------------------------------------------------------------------
// Extension

struct ExtensionStats {
    std::size_t poor = 0;
    std::size_t rich = 0;
    /// Template used per slot, e.g. "R_I" or "L2+swap".
    std::vector<std::string> slot_templates;
    std::vector<std::string> adjustments;
    std::vector<std::string> diagnostics;
    bool reversed = false;
    bool all_pairs_mode = false;
};

struct ExtensionResult {
    Superposition superposition;
    EdgeColoring coloring;
    ExtensionStats stats;
    ChainDecomposition decomposition;
};

struct VerificationReport {
    bool proper = false;
    bool normal = false;
    bool m_int_preserved = false;
    EdgeClassCounts counts;
    std::vector<std::string> issues;

    bool ok() const { return proper && normal && m_int_preserved; }
};

/// Independent check: normality from scratch, poor/rich recount, and every
/// base edge off the cycle (M_int and f edges) keeps its σ color.
inline VerificationReport verify_extension(const SuperpositionSpec& spec, const Superposition& sp,
                                           const EdgeColoring& coloring, const EdgeColoring& sigma) {
    VerificationReport r;
    if (!coloring.fits(sp.graph) || !coloring.is_total()) {
        r.issues.push_back("coloring does not cover the superposition");
        return r;
    }
    NormalityReport nr = normality_report(sp.graph, coloring);
    r.proper = nr.improper_vertices.empty();
    r.normal = nr.normal();
    r.counts = nr.counts;
    for (const auto& v : nr.improper_vertices) r.issues.push_back("improper at " + v);
    for (const auto& e : nr.abnormal_edges) r.issues.push_back("abnormal edge " + e);
    r.m_int_preserved = true;
    for (std::uint32_t e = 0; e < spec.base.edge_count(); ++e) {
        if (!sp.base_edge[e]) continue;
        if (coloring.raw(*sp.base_edge[e]) != sigma.raw(EdgeId{e})) {
            r.m_int_preserved = false;
            r.issues.push_back("edge " + sp.graph.edge(*sp.base_edge[e]).label + " changed color");
        }
    }
    return r;
}

namespace detail {

struct BaseColors {
    std::vector<Color> e, f;
};

inline BaseColors base_colors(const Superposition& sp, const EdgeColoring& sigma) {
    BaseColors out;
    for (EdgeId e : sp.cycle.e) out.e.push_back(sigma.at(e));
    for (EdgeId f : sp.cycle.f) out.f.push_back(sigma.at(f));
    return out;
}

inline JunctionContext context_at(const BaseColors& bc, std::size_t i) {
    const std::size_t g = bc.e.size();
    return {bc.e[(i + 2 * g - 2) % g], bc.f[(i + g - 1) % g], bc.e[(i + g - 1) % g], bc.e[i], bc.f[i]};
}

inline SlotColors slot_colors(const BaseColors& bc, std::size_t k) {
    const std::size_t g = bc.e.size();
    return {bc.e[(k + g - 1) % g], bc.e[k], bc.f[k], bc.e[(k + 1) % g], bc.f[(k + 1) % g]};
}

inline ExtensionResult extend_direct(const SuperpositionSpec& spec, const EdgeColoring& sigma, bool all_pairs) {
    const SuperedgeLayout& L = petersen_superedge();
    const std::size_t g = spec.g();
    ExtensionResult res;
    res.superposition = build(spec);
    const Superposition& sp = res.superposition;
    const BaseColors bc = base_colors(sp, sigma);
    res.stats.all_pairs_mode = all_pairs;

    std::vector<int> docks;
    for (const auto& j : spec.junctions) docks.push_back(j.d);
    res.decomposition = all_pairs ? decompose_all_pairs(g) : decompose(docks);

    std::vector<EdgeColoring> slot(g);
    std::vector<std::string> names(g);
    std::vector<std::optional<Color>> uu(g);
    std::vector<bool> chunk_start(g, false);

    for (const Chunk& ch : res.decomposition.chunks) {
        const std::size_t k = ch.first;
        chunk_start[k] = true;
        if (ch.kind == ChunkKind::Singleton) {
            TemplateInstance t = color_singleton(spec.kinds[k], spec.junctions[k].d, slot_colors(bc, k));
            slot[k] = t.coloring;
            names[k] = to_string(t.id);
            continue;
        }
        const std::size_t i = (k + 1) % g;
        const JunctionContext ctx = context_at(bc, i);
        const Perm3& p = spec.junctions[k].p;
        PairColoring pc = ch.kind == ChunkKind::RegularPair
                              ? color_regular_pair(spec.kinds[i], p, ctx)
                              : color_odd_pair(spec.kinds[i], p, spec.junctions[i].d, ctx);
        if (pc.source != PairSource::Table)
            res.stats.diagnostics.push_back(std::string(to_string(ch.kind)) + " at slots " + std::to_string(k) + "," +
                                            std::to_string(i) + " colored by " + to_string(pc.source) +
                                            " fallback (" + pc.left_id + ", " + pc.right_id + ")");
        slot[k] = pc.left;
        slot[i] = pc.right;
        names[k] = pc.left_id;
        names[i] = pc.right_id;
        uu[i] = pc.uu;
        // A left member entered through A′ carries its P^l chain swapped.
        if (spec.kinds[k] == SupervertexKind::APrime) {
            slot[k] = swap_left_chain(slot[k], slot_colors(bc, k), 1);
            names[k] += "+swap";
            res.stats.adjustments.push_back("swapped P^l of slot " + std::to_string(k) + " at A'" + std::to_string(k));
        }
    }
    for (std::size_t i = 0; i < g; ++i)
        if (chunk_start[i] && spec.kinds[i] == SupervertexKind::APrime) uu[i] = bc.e[i];

    EdgeColoring out(sp.graph);
    for (std::size_t k = 0; k < g; ++k)
        for (std::uint32_t e = 0; e < L.multipole.edge_count(); ++e)
            out.set_raw(Element::of(sp.slots[k].edge[e]), slot[k].raw(EdgeId{e}));
    std::vector<std::string> conflicts;
    for (std::size_t i = 0; i < g; ++i) {
        const JunctionHandles& J = sp.junctions[i];
        const std::size_t left_slot = (i + g - 1) % g;
        for (int j = 1; j <= 3; ++j) {
            const auto& joint = J.joints[j - 1];
            int cz = slot[left_slot].raw(L.right[j - 1]);
            int cw = slot[i].raw(L.left[joint.left_index - 1]);
            if (joint.whole) {
                if (cz != cw) conflicts.push_back(sp.graph.edge(*joint.whole).label);
                out.set_raw(Element::of(*joint.whole), cz);
            } else {
                out.set_raw(Element::of(*joint.z_side), cz);
                out.set_raw(Element::of(*joint.w_side), cw);
            }
        }
        if (J.uu) {
            if (!uu[i]) throw Error("extend: no u'u'' color decided at A" + std::to_string(i));
            out.set_raw(Element::of(*J.uu), uu[i]->value());
        }
    }
    for (std::uint32_t e = 0; e < spec.base.edge_count(); ++e)
        if (sp.base_edge[e]) out.set_raw(Element::of(*sp.base_edge[e]), sigma.raw(EdgeId{e}));

    res.coloring = out;
    res.stats.slot_templates = names;
    for (const auto& c : conflicts) res.stats.diagnostics.push_back("semiedge colors disagree on " + c);
    return res;
}

} // namespace detail

/// Extends a normal coloring σ of the base to the superposition, keeping σ
/// on every base edge off the cycle.
inline ExtensionResult extend(const SuperpositionSpec& spec, const EdgeColoring& sigma) {
    require_valid(spec);
    if (!sigma.fits(spec.base) || !is_normal(spec.base, sigma))
        throw InvalidInput("extend: base coloring is not a normal 5-edge-coloring of the base graph");

    bool all_docks_one = true, all_p_fix_one = true;
    for (const auto& j : spec.junctions) {
        all_docks_one = all_docks_one && j.d == 1;
        all_p_fix_one = all_p_fix_one && j.p[0] == 1;
    }

    ExtensionResult res;
    if (all_docks_one && !all_p_fix_one) {
        SuperpositionSpec rev = reverse_spec(spec);
        ExtensionResult inner = detail::extend_direct(rev, sigma, false);
        Superposition original = build(spec);
        res.coloring = map_reversed_coloring(spec, original, inner.superposition, inner.coloring);
        res.superposition = std::move(original);
        res.stats = inner.stats;
        res.decomposition = inner.decomposition;
        res.stats.reversed = true;
        // Slot k of the reversed spec is slot g-2-k here.
        const std::size_t g = spec.g();
        std::vector<std::string> names(g);
        for (std::size_t k = 0; k < g; ++k) names[(2 * g - 2 - k) % g] = inner.stats.slot_templates[k];
        res.stats.slot_templates = names;
    } else if (all_docks_one) {
        if (spec.g() % 2 != 0)
            throw MethodInapplicable("construction method not applicable: odd cycle with every dock 1 and every p(1) = 1");
        res = detail::extend_direct(spec, sigma, true);
    } else {
        res = detail::extend_direct(spec, sigma, false);
    }

    VerificationReport v = verify_extension(spec, res.superposition, res.coloring, sigma);
    res.stats.poor = v.counts.poor;
    res.stats.rich = v.counts.rich;
    if (!v.ok()) {
        std::string msg = "extend: assembled coloring failed verification";
        for (const auto& s : res.stats.diagnostics) msg += "; " + s;
        for (std::size_t k = 0; k < v.issues.size() && k < 10; ++k) msg += "; " + v.issues[k];
        throw VerificationFailed(msg);
    }
    return res;
}

} // namespace normsnark
