#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coloring.hpp"
#include "multipole.hpp"

namespace normsnark {

/// Size guards; each may be overridden through the named environment variable.
struct SizeGuards {
    /// Elements (edges + semiedges) for the constrained normal-coloring search.
    static std::size_t search_elements() { return from_env("NORMSNARK_SEARCH_LIMIT", 40); }
    /// Vertices of a base graph handed to find_normal_coloring.
    static std::size_t base_vertices() { return from_env("NORMSNARK_BASE_LIMIT", 30); }
    /// Edges for the 3-edge-colorability decision.
    static std::size_t three_coloring_edges() { return from_env("NORMSNARK_3COL_LIMIT", 600); }

private:
    static std::size_t from_env(const char* name, std::size_t fallback) {
        if (const char* v = std::getenv(name)) {
            char* end = nullptr;
            unsigned long long n = std::strtoull(v, &end, 10);
            if (end != v && n > 0) return static_cast<std::size_t>(n);
        }
        return fallback;
    }
};

namespace detail {

inline void require_closed_cubic(const Multipole& g, const char* who) {
    if (!g.is_closed()) throw InvalidInput(std::string(who) + ": graph has semiedges");
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
        if (g.degree(VertexId{v}) != 3)
            throw InvalidInput(std::string(who) + ": vertex " + g.vertex(VertexId{v}).label + " is not cubic");
}

class ThreeEdgeColoring {
public:
    explicit ThreeEdgeColoring(const Multipole& g)
        : g_(g), color_(g.edge_count(), 0), used_(g.vertex_count(), 0) {}

    bool solve() { return step(0, 0); }

    EdgeColoring result() const {
        EdgeColoring out(g_);
        for (std::uint32_t e = 0; e < g_.edge_count(); ++e) out.set_raw(Element::of(EdgeId{e}), color_[e]);
        return out;
    }

private:
    bool step(std::size_t colored, int highest) {
        if (colored == color_.size()) return true;
        int best = -1;
        int best_count = 4;
        unsigned best_avail = 0;
        for (std::uint32_t e = 0; e < color_.size(); ++e) {
            if (color_[e]) continue;
            const Edge& ed = g_.edge(EdgeId{e});
            unsigned avail = 0b1110u & ~static_cast<unsigned>(used_[ed.a.value] | used_[ed.b.value]);
            int count = std::popcount(avail);
            if (count == 0) return false;
            if (count < best_count) {
                best = static_cast<int>(e);
                best_count = count;
                best_avail = avail;
                if (count == 1) break;
            }
        }
        const Edge& ed = g_.edge(EdgeId{static_cast<std::uint32_t>(best)});
        for (int c = 1; c <= 3; ++c) {
            if (!(best_avail & (1u << c))) continue;
            // Colors are interchangeable: open at most one fresh color per branch.
            if (c > highest + 1) break;
            color_[best] = static_cast<std::uint8_t>(c);
            used_[ed.a.value] |= static_cast<std::uint8_t>(1u << c);
            used_[ed.b.value] |= static_cast<std::uint8_t>(1u << c);
            if (step(colored + 1, std::max(highest, c))) return true;
            used_[ed.a.value] &= static_cast<std::uint8_t>(~(1u << c));
            used_[ed.b.value] &= static_cast<std::uint8_t>(~(1u << c));
            color_[best] = 0;
        }
        return false;
    }

    const Multipole& g_;
    std::vector<std::uint8_t> color_;
    std::vector<std::uint8_t> used_;
};

} // namespace detail

/// Exact decision by backtracking: at every vertex the three edge colors are
/// a permutation of {1,2,3}.
inline bool is_three_edge_colorable(const Multipole& g) {
    detail::require_closed_cubic(g, "is_three_edge_colorable");
    if (g.edge_count() > SizeGuards::three_coloring_edges())
        throw SizeGuardExceeded("is_three_edge_colorable: " + std::to_string(g.edge_count()) +
                                " edges exceed the guard");
    return detail::ThreeEdgeColoring(g).solve();
}

inline std::optional<EdgeColoring> find_three_edge_coloring(const Multipole& g) {
    detail::require_closed_cubic(g, "find_three_edge_coloring");
    if (g.edge_count() > SizeGuards::three_coloring_edges())
        throw SizeGuardExceeded("find_three_edge_coloring: edge guard exceeded");
    detail::ThreeEdgeColoring search(g);
    if (!search.solve()) return std::nullopt;
    return search.result();
}

/// Bridge detection by low-link over edge ids (parallel edges are never bridges).
inline bool is_bridgeless(const Multipole& g) {
    const std::size_t n = g.vertex_count();
    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;
    struct Frame {
        VertexId v;
        std::optional<EdgeId> via;
        std::size_t next = 0;
    };
    for (std::uint32_t root = 0; root < n; ++root) {
        if (disc[root] >= 0) continue;
        std::vector<Frame> stack{{VertexId{root}, std::nullopt, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto inc = g.incident(f.v);
            if (f.next < inc.size()) {
                Element el = inc[f.next++];
                if (!el.is_edge() || (f.via && el.edge() == *f.via)) continue;
                VertexId w = g.other_end(el.edge(), f.v);
                if (disc[w.value] < 0) {
                    disc[w.value] = low[w.value] = timer++;
                    stack.push_back({w, el.edge(), 0});
                } else {
                    low[f.v.value] = std::min(low[f.v.value], disc[w.value]);
                }
                continue;
            }
            Frame done = f;
            stack.pop_back();
            if (!stack.empty()) {
                VertexId parent = stack.back().v;
                low[parent.value] = std::min(low[parent.value], low[done.v.value]);
                if (low[done.v.value] > disc[parent.value]) return false;
            }
        }
    }
    return true;
}

/// Length of a shortest cycle (loops and parallel edges count as 1 and 2);
/// 0 for a forest.
inline std::size_t girth(const Multipole& g) {
    const std::size_t n = g.vertex_count();
    std::size_t best = 0;
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(EdgeId{e});
        if (ed.a == ed.b) return 1;
        if (g.edge_between(ed.a, ed.b) != EdgeId{e}) best = 2;
    }
    if (best) return best;
    for (std::uint32_t root = 0; root < n; ++root) {
        std::vector<int> dist(n, -1);
        std::vector<std::optional<EdgeId>> via(n);
        std::vector<VertexId> queue{VertexId{root}};
        dist[root] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            VertexId v = queue[head];
            for (const Element& el : g.incident(v)) {
                if (!el.is_edge() || via[v.value] == el.edge()) continue;
                VertexId w = g.other_end(el.edge(), v);
                if (dist[w.value] < 0) {
                    dist[w.value] = dist[v.value] + 1;
                    via[w.value] = el.edge();
                    queue.push_back(w);
                } else {
                    std::size_t len = static_cast<std::size_t>(dist[v.value] + dist[w.value] + 1);
                    if (!best || len < best) best = len;
                }
            }
        }
    }
    return best;
}

/// Bridgeless and not 3-edge-colorable.
inline bool check_snark(const Multipole& g) {
    return is_bridgeless(g) && !is_three_edge_colorable(g);
}

/// Requirements on a normal 5-edge-coloring beyond normality itself.
struct BoundaryConstraint {
    struct SchemeRequirement {
        SemiedgeId semiedge;
        ColorScheme scheme;
        /// Exact scheme equality; otherwise scheme consistency.
        bool exact = false;
    };
    struct ChainRequirement {
        SemiedgeId from;
        SemiedgeId to;
        std::array<Color, 2> colors;
    };

    std::map<Element, Palette> domains;
    std::vector<SchemeRequirement> schemes;
    std::vector<ChainRequirement> chains;
    std::optional<int> exact_color_count;
    /// Final filter on complete colorings that pass everything else.
    std::function<bool(const EdgeColoring&)> accept;

    BoundaryConstraint& fix(Element el, Color c) {
        restrict(el, bit(c));
        return *this;
    }
    BoundaryConstraint& fix(SemiedgeId s, Color c) { return fix(Element::of(s), c); }
    BoundaryConstraint& restrict(Element el, Palette allowed) {
        auto [it, inserted] = domains.emplace(el, allowed);
        if (!inserted) it->second &= allowed;
        return *this;
    }
    BoundaryConstraint& restrict_all(const Multipole& m, Palette allowed) {
        for (const Element& el : m.elements()) restrict(el, allowed);
        return *this;
    }
    BoundaryConstraint& require_scheme(SemiedgeId s, ColorScheme scheme, bool exact = false) {
        schemes.push_back({s, scheme, exact});
        return *this;
    }
    BoundaryConstraint& require_chain(SemiedgeId from, SemiedgeId to, std::array<Color, 2> colors) {
        chains.push_back({from, to, colors});
        return *this;
    }

    /// True when no requirement singles out a particular color.
    bool color_symmetric() const {
        return domains.empty() && schemes.empty() && chains.empty() && !accept;
    }
};

namespace detail {

class NormalColoringSearch {
public:
    using Visitor = std::function<bool(const EdgeColoring&)>;

    NormalColoringSearch(const Multipole& m, const BoundaryConstraint& bc)
        : m_(m), bc_(bc), sigma_(m), count_(m.vertex_count(), 0), pal_(m.vertex_count(), 0) {
        domain_.assign(m.element_count(), kAllColors);
        for (const auto& [el, allowed] : bc.domains) domain_[flat(el)] &= allowed;
        symmetric_ = bc.color_symmetric();
        build_order();
        for (const auto& req : bc.schemes) {
            const Semiedge& se = m.semiedge(req.semiedge);
            if (!se.vertex) throw InvalidInput("scheme requirement on an isolated-edge semiedge");
            vertex_schemes_.emplace(se.vertex->value, &req);
        }
    }

    /// Calls `visit` on each solution in search order until it returns true.
    void run(const Visitor& visit) {
        for (Palette d : domain_)
            if (d == 0) return;
        visit_ = &visit;
        stop_ = false;
        descend(0, 0);
    }

private:
    std::size_t flat(Element el) const { return el.is_edge() ? el.index : m_.edge_count() + el.index; }

    void build_order() {
        std::vector<bool> placed(m_.element_count(), false);
        for (const Element& el : m_.elements())
            if (palette_size(domain_[flat(el)]) == 1) {
                order_.push_back(el);
                placed[flat(el)] = true;
            }
        std::vector<bool> seen(m_.vertex_count(), false);
        std::vector<VertexId> queue;
        auto visit_component = [&](VertexId root) {
            seen[root.value] = true;
            queue.assign(1, root);
            for (std::size_t head = 0; head < queue.size(); ++head) {
                VertexId v = queue[head];
                for (const Element& el : m_.incident(v)) {
                    if (!placed[flat(el)]) {
                        placed[flat(el)] = true;
                        order_.push_back(el);
                    }
                    if (el.is_edge()) {
                        VertexId w = m_.other_end(el.edge(), v);
                        if (!seen[w.value]) {
                            seen[w.value] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        };
        for (const Element& el : order_)
            if (el.is_semiedge() && m_.semiedge(el.semiedge()).vertex &&
                !seen[m_.semiedge(el.semiedge()).vertex->value])
                visit_component(*m_.semiedge(el.semiedge()).vertex);
        for (std::uint32_t v = 0; v < m_.vertex_count(); ++v)
            if (!seen[v]) visit_component(VertexId{v});
        for (const Element& el : m_.elements())
            if (!placed[flat(el)]) order_.push_back(el);
    }

    std::pair<std::optional<VertexId>, std::optional<VertexId>> ends(Element el) const {
        if (el.is_edge()) {
            const Edge& ed = m_.edge(el.edge());
            return {ed.a, ed.b};
        }
        return {m_.semiedge(el.semiedge()).vertex, std::nullopt};
    }

    bool vertex_complete(VertexId v) const { return count_[v.value] == m_.degree(v); }

    bool check_vertex(VertexId v) const {
        auto [lo, hi] = vertex_schemes_.equal_range(v.value);
        for (auto it = lo; it != hi; ++it) {
            const auto& req = *it->second;
            ColorScheme actual = scheme_of(m_, sigma_, req.semiedge);
            if (req.exact ? !(actual == req.scheme) : !schemes_consistent(actual, req.scheme)) return false;
        }
        for (const Element& el : m_.incident(v)) {
            if (!el.is_edge()) continue;
            VertexId w = m_.other_end(el.edge(), v);
            if (!vertex_complete(w)) continue;
            int n = palette_size(pal_[v.value] | pal_[w.value]);
            if (n == 4) return false;
        }
        return true;
    }

    bool forward_ok(VertexId v) const {
        if (count_[v.value] + 1 != m_.degree(v)) return true;
        for (const Element& el : m_.incident(v)) {
            if (sigma_.raw(el) != 0) continue;
            Palette avail = domain_[flat(el)] & static_cast<Palette>(~pal_[v.value]);
            if (el.is_edge()) avail &= static_cast<Palette>(~pal_[m_.other_end(el.edge(), v).value]);
            return avail != 0;
        }
        return true;
    }

    bool global_ok() const {
        if (bc_.exact_color_count && palette_size(sigma_.used_colors()) != *bc_.exact_color_count) return false;
        for (const auto& req : bc_.chains) {
            Color start = sigma_.at(req.from);
            if (start != req.colors[0] && start != req.colors[1]) return false;
            KempeChain chain = find_kempe_chain(m_, sigma_, req.from, req.colors);
            if (chain.terminal != req.to) return false;
        }
        return !bc_.accept || bc_.accept(sigma_);
    }

    void descend(std::size_t depth, int highest) {
        if (stop_) return;
        if (depth == order_.size()) {
            if (global_ok()) stop_ = (*visit_)(sigma_);
            return;
        }
        const Element el = order_[depth];
        auto [a, b] = ends(el);
        Palette avail = domain_[flat(el)];
        if (a) avail &= static_cast<Palette>(~pal_[a->value]);
        if (b) avail &= static_cast<Palette>(~pal_[b->value]);
        for (int c = 1; c <= kColorCount && !stop_; ++c) {
            if (!(avail & bit(c))) continue;
            if (symmetric_ && c > highest + 1) break;
            if (bc_.exact_color_count && c > highest &&
                palette_size(static_cast<Palette>(used_mask_ | bit(c))) > *bc_.exact_color_count)
                continue;
            assign(el, a, b, c);
            bool ok = true;
            for (auto v : {a, b}) {
                if (!v || !ok) continue;
                if (vertex_complete(*v)) ok = check_vertex(*v);
                else ok = forward_ok(*v);
            }
            if (ok) descend(depth + 1, std::max(highest, c));
            unassign(el, a, b, c);
        }
    }

    void assign(Element el, std::optional<VertexId> a, std::optional<VertexId> b, int c) {
        sigma_.set_raw(el, c);
        for (auto v : {a, b})
            if (v) {
                pal_[v->value] |= bit(c);
                ++count_[v->value];
            }
        if (color_uses_[c]++ == 0) used_mask_ |= bit(c);
    }

    void unassign(Element el, std::optional<VertexId> a, std::optional<VertexId> b, int c) {
        sigma_.clear(el);
        for (auto v : {a, b})
            if (v) {
                pal_[v->value] &= static_cast<Palette>(~bit(c));
                --count_[v->value];
            }
        if (--color_uses_[c] == 0) used_mask_ &= static_cast<Palette>(~bit(c));
    }

    const Multipole& m_;
    const BoundaryConstraint& bc_;
    EdgeColoring sigma_;
    std::vector<std::size_t> count_;
    std::vector<Palette> pal_;
    std::vector<Palette> domain_;
    std::vector<Element> order_;
    std::multimap<std::uint32_t, const BoundaryConstraint::SchemeRequirement*> vertex_schemes_;
    std::array<int, kColorCount + 1> color_uses_{};
    Palette used_mask_ = 0;
    bool symmetric_ = false;
    bool stop_ = false;
    const Visitor* visit_ = nullptr;
};

inline void check_search_guard(const Multipole& m, std::size_t limit, const char* who) {
    if (m.element_count() > limit)
        throw SizeGuardExceeded(std::string(who) + ": " + std::to_string(m.element_count()) +
                                " edges+semiedges exceed the search guard of " + std::to_string(limit));
}

} // namespace detail

/// Enumerates normal 5-edge-colorings satisfying `bc` in search order
/// (elements with a single allowed color first, then breadth-first from the
/// constrained boundary). `visit` returns true to stop.
inline void enumerate_normal_colorings(const Multipole& m, const BoundaryConstraint& bc,
                                       const std::function<bool(const EdgeColoring&)>& visit) {
    detail::check_search_guard(m, SizeGuards::search_elements(), "search_normal_coloring");
    detail::NormalColoringSearch(m, bc).run(visit);
}

/// Least normal 5-edge-coloring in search order satisfying `bc`, or none.
inline std::optional<EdgeColoring> search_normal_coloring(const Multipole& m,
                                                          const BoundaryConstraint& bc = {}) {
    std::optional<EdgeColoring> found;
    enumerate_normal_colorings(m, bc, [&](const EdgeColoring& s) {
        found = s;
        return true;
    });
    return found;
}

/// A normal 5-edge-coloring of a closed cubic graph: a 3-edge-coloring when
/// one exists, the least normal 5-edge-coloring otherwise. Results are cached.
inline std::optional<EdgeColoring> find_normal_coloring(const Multipole& g) {
    detail::require_closed_cubic(g, "find_normal_coloring");
    if (g.vertex_count() > SizeGuards::base_vertices())
        throw SizeGuardExceeded("find_normal_coloring: " + std::to_string(g.vertex_count()) +
                                " vertices exceed the base guard");

    std::string key;
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(EdgeId{e});
        key += std::to_string(ed.a.value) + "," + std::to_string(ed.b.value) + ";";
    }
    static std::mutex mutex;
    static std::map<std::string, std::optional<EdgeColoring>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }

    std::optional<EdgeColoring> result = find_three_edge_coloring(g);
    if (!result) {
        std::optional<EdgeColoring> found;
        detail::NormalColoringSearch(g, BoundaryConstraint{}).run([&](const EdgeColoring& s) {
            found = s;
            return true;
        });
        result = found;
    }
    std::lock_guard lock(mutex);
    cache.emplace(key, result);
    return result;
}

} // namespace normsnark
