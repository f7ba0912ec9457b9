#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multipole.hpp"

namespace normsnark {

inline constexpr int kColorCount = 5;

/// One of the five colors 1..5.
class Color {
public:
    constexpr Color() = default;
    constexpr explicit Color(int v) : value_(static_cast<std::uint8_t>(v)) {
        if (v < 1 || v > kColorCount) throw InvalidInput("color out of range: " + std::to_string(v));
    }
    constexpr int value() const { return value_; }
    friend constexpr auto operator<=>(Color, Color) = default;

private:
    std::uint8_t value_ = 1;
};

/// Set of colors as a bit mask (bit c set for color c).
using Palette = std::uint8_t;

inline constexpr Palette kAllColors = 0b111110;

constexpr Palette bit(int c) { return static_cast<Palette>(1u << c); }
constexpr Palette bit(Color c) { return bit(c.value()); }
constexpr int palette_size(Palette p) { return std::popcount(static_cast<unsigned>(p)); }

inline std::string palette_string(Palette p) {
    std::string out = "{";
    for (int c = 1; c <= kColorCount; ++c) {
        if (!(p & bit(c))) continue;
        if (out.size() > 1) out += ",";
        out += std::to_string(c);
    }
    return out + "}";
}

/// Assignment of colors to the edges and semiedges of a host multipole.
/// Partial and improper assignments are representable; 0 means unset.
class EdgeColoring {
public:
    EdgeColoring() = default;
    explicit EdgeColoring(const Multipole& host)
        : edges_(host.edge_count(), 0), semiedges_(host.semiedge_count(), 0) {}

    std::size_t edge_count() const { return edges_.size(); }
    std::size_t semiedge_count() const { return semiedges_.size(); }

    int raw(Element el) const {
        return el.is_edge() ? edges_.at(el.index) : semiedges_.at(el.index);
    }
    int raw(EdgeId e) const { return edges_.at(e.value); }
    int raw(SemiedgeId s) const { return semiedges_.at(s.value); }

    Color at(Element el) const {
        int c = raw(el);
        if (c == 0) throw InvalidInput("element " + std::to_string(el.index) + " is uncolored");
        return Color{c};
    }
    Color at(EdgeId e) const { return at(Element::of(e)); }
    Color at(SemiedgeId s) const { return at(Element::of(s)); }

    void set(Element el, Color c) { slot(el) = static_cast<std::uint8_t>(c.value()); }
    void set(EdgeId e, Color c) { set(Element::of(e), c); }
    void set(SemiedgeId s, Color c) { set(Element::of(s), c); }
    void set_raw(Element el, int c) { slot(el) = static_cast<std::uint8_t>(c); }
    void clear(Element el) { slot(el) = 0; }

    bool is_total() const {
        for (auto c : edges_)
            if (c == 0) return false;
        for (auto c : semiedges_)
            if (c == 0) return false;
        return true;
    }

    bool fits(const Multipole& m) const {
        return edges_.size() == m.edge_count() && semiedges_.size() == m.semiedge_count();
    }

    Palette used_colors() const {
        Palette p = 0;
        for (auto c : edges_)
            if (c) p |= bit(static_cast<int>(c));
        for (auto c : semiedges_)
            if (c) p |= bit(static_cast<int>(c));
        return p;
    }

    friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;

private:
    std::uint8_t& slot(Element el) { return el.is_edge() ? edges_.at(el.index) : semiedges_.at(el.index); }

    std::vector<std::uint8_t> edges_;
    std::vector<std::uint8_t> semiedges_;
};

enum class EdgeClass : std::uint8_t { Poor, Rich, Abnormal };

inline const char* to_string(EdgeClass c) {
    switch (c) {
        case EdgeClass::Poor: return "poor";
        case EdgeClass::Rich: return "rich";
        case EdgeClass::Abnormal: return "abnormal";
    }
    return "?";
}

/// σ[s] = (lead, pair): the color of s and the other two colors at its end-vertex.
struct ColorScheme {
    Color lead;
    Palette pair = 0;

    ColorScheme() = default;
    ColorScheme(Color l, Palette p) : lead(l), pair(p) {
        if (palette_size(p) != 2 || (p & bit(l)))
            throw InvalidInput("color scheme needs two colors distinct from the lead");
    }
    ColorScheme(int l, int p1, int p2) : ColorScheme(Color{l}, static_cast<Palette>(bit(p1) | bit(p2))) {}

    friend bool operator==(const ColorScheme&, const ColorScheme&) = default;
};

inline std::string to_string(const ColorScheme& s) {
    return "(" + std::to_string(s.lead.value()) + "," + palette_string(s.pair) + ")";
}

/// Equal leads, and equal or complementary pairs.
inline bool schemes_consistent(const ColorScheme& a, const ColorScheme& b) {
    if (a.lead != b.lead) return false;
    Palette complement = kAllColors & static_cast<Palette>(~(bit(b.lead) | b.pair));
    return a.pair == b.pair || a.pair == complement;
}

/// Colors present at v. Requires every element at v to be colored.
inline Palette palette(const Multipole& m, const EdgeColoring& sigma, VertexId v) {
    Palette p = 0;
    for (const Element& el : m.incident(v)) p |= bit(sigma.at(el));
    return p;
}

inline void require_total(const Multipole& m, const EdgeColoring& sigma) {
    if (!sigma.fits(m)) throw InvalidInput("coloring does not match the multipole");
    if (!sigma.is_total()) throw InvalidInput("coloring is partial");
}

/// Adjacent (semi)edges receive distinct colors at every vertex.
inline bool is_proper(const Multipole& m, const EdgeColoring& sigma) {
    require_total(m, sigma);
    for (std::uint32_t v = 0; v < m.vertex_count(); ++v) {
        auto inc = m.incident(VertexId{v});
        if (static_cast<std::size_t>(palette_size(palette(m, sigma, VertexId{v}))) != inc.size()) return false;
    }
    return true;
}

/// Poor: |σ(u) ∪ σ(v)| = 3; rich: 5; anything else is abnormal.
inline EdgeClass classify_edge(const Multipole& m, const EdgeColoring& sigma, EdgeId e) {
    const Edge& ed = m.edge(e);
    int n = palette_size(palette(m, sigma, ed.a) | palette(m, sigma, ed.b));
    if (n == 3) return EdgeClass::Poor;
    if (n == 5) return EdgeClass::Rich;
    return EdgeClass::Abnormal;
}

struct EdgeClassCounts {
    std::size_t poor = 0;
    std::size_t rich = 0;
    std::size_t abnormal = 0;
};

inline EdgeClassCounts classify_all(const Multipole& m, const EdgeColoring& sigma) {
    EdgeClassCounts counts;
    for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
        switch (classify_edge(m, sigma, EdgeId{e})) {
            case EdgeClass::Poor: ++counts.poor; break;
            case EdgeClass::Rich: ++counts.rich; break;
            case EdgeClass::Abnormal: ++counts.abnormal; break;
        }
    }
    return counts;
}

inline bool is_normal(const Multipole& m, const EdgeColoring& sigma) {
    if (!is_proper(m, sigma)) return false;
    for (std::uint32_t e = 0; e < m.edge_count(); ++e)
        if (classify_edge(m, sigma, EdgeId{e}) == EdgeClass::Abnormal) return false;
    return true;
}

inline std::size_t poor_count(const Multipole& m, const EdgeColoring& sigma) {
    return classify_all(m, sigma).poor;
}

inline ColorScheme scheme_of(const Multipole& m, const EdgeColoring& sigma, SemiedgeId s) {
    const Semiedge& se = m.semiedge(s);
    if (!se.vertex) throw InvalidInput("scheme_of: semiedge " + se.label + " belongs to an isolated edge");
    Color lead = sigma.at(s);
    Palette rest = static_cast<Palette>(palette(m, sigma, *se.vertex) & ~bit(lead));
    if (palette_size(rest) != 2)
        throw InvalidInput("scheme_of: end-vertex of " + se.label + " is not properly colored");
    return ColorScheme{lead, rest};
}

/// Maximal path of alternating colors starting with a semiedge.
struct KempeChain {
    std::array<Color, 2> colors{};
    std::vector<Element> elements;
    /// The semiedge the chain ends in, if it does not stop at a vertex.
    std::optional<SemiedgeId> terminal;
};

inline KempeChain find_kempe_chain(const Multipole& m, const EdgeColoring& sigma, SemiedgeId start,
                                   std::array<Color, 2> colors) {
    if (colors[0] == colors[1]) throw InvalidInput("find_kempe_chain: chain colors must differ");
    Color first = sigma.at(start);
    if (first != colors[0] && first != colors[1])
        throw InvalidInput("find_kempe_chain: start semiedge color is not a chain color");
    const Semiedge& se = m.semiedge(start);
    if (!se.vertex) throw InvalidInput("find_kempe_chain: start semiedge has no end-vertex");

    KempeChain chain;
    chain.colors = colors;
    chain.elements.push_back(Element::of(start));
    Element current = Element::of(start);
    VertexId at = *se.vertex;
    Color want = first == colors[0] ? colors[1] : colors[0];
    std::vector<bool> seen(m.vertex_count(), false);
    while (!seen[at.value]) {
        seen[at.value] = true;
        std::optional<Element> next;
        for (const Element& el : m.incident(at))
            if (el != current && sigma.raw(el) == want.value()) next = el;
        if (!next) break;
        chain.elements.push_back(*next);
        if (next->is_semiedge()) {
            chain.terminal = next->semiedge();
            break;
        }
        current = *next;
        at = m.other_end(next->edge(), at);
        want = want == colors[0] ? colors[1] : colors[0];
    }
    return chain;
}

/// Exchanges the two chain colors along the chain. Throws if the chain no
/// longer matches `sigma`.
inline EdgeColoring kempe_swap(const Multipole& m, const EdgeColoring& sigma, const KempeChain& chain) {
    require_total(m, sigma);
    EdgeColoring out = sigma;
    for (std::size_t k = 0; k < chain.elements.size(); ++k) {
        const Element& el = chain.elements[k];
        int c = sigma.raw(el);
        Color expected = (k % 2 == 0) ? sigma.at(chain.elements.front())
                                      : (sigma.at(chain.elements.front()) == chain.colors[0] ? chain.colors[1]
                                                                                             : chain.colors[0]);
        if (c != expected.value()) throw InvalidInput("kempe_swap: stale chain");
        out.set(el, c == chain.colors[0].value() ? chain.colors[1] : chain.colors[0]);
    }
    return out;
}

/// Bijection of {1..5}; entry 0 unused.
class ColorPermutation {
public:
    ColorPermutation() : map_{0, 1, 2, 3, 4, 5} {}

    /// images[c-1] is the image of color c.
    explicit ColorPermutation(std::array<int, 5> images) {
        map_[0] = 0;
        Palette seen = 0;
        for (int c = 1; c <= kColorCount; ++c) {
            int to = images[c - 1];
            if (to < 1 || to > kColorCount || (seen & bit(to)))
                throw InvalidInput("color permutation is not a bijection of {1..5}");
            seen |= bit(to);
            map_[c] = static_cast<std::uint8_t>(to);
        }
    }

    /// Sends 1,2,3 to the given colors and 4,5 to the two leftovers in
    /// increasing order.
    static ColorPermutation from_leading(Color c1, Color c2, Color c3) {
        std::array<int, 5> images{c1.value(), c2.value(), c3.value(), 0, 0};
        int k = 3;
        for (int c = 1; c <= kColorCount; ++c)
            if (c != c1.value() && c != c2.value() && c != c3.value()) {
                if (k >= 5) throw InvalidInput("from_leading: colors must be distinct");
                images[k++] = c;
            }
        return ColorPermutation(images);
    }

    static ColorPermutation transposition(int a, int b) {
        std::array<int, 5> images{1, 2, 3, 4, 5};
        std::swap(images[a - 1], images[b - 1]);
        return ColorPermutation(images);
    }

    Color operator()(Color c) const { return Color{map_[c.value()]}; }
    int apply_raw(int c) const { return c == 0 ? 0 : map_[c]; }

    ColorPermutation inverse() const {
        std::array<int, 5> images{};
        for (int c = 1; c <= kColorCount; ++c) images[map_[c] - 1] = c;
        return ColorPermutation(images);
    }

    /// (this ∘ other)(c) = this(other(c)).
    ColorPermutation compose(const ColorPermutation& other) const {
        std::array<int, 5> images{};
        for (int c = 1; c <= kColorCount; ++c) images[c - 1] = map_[other.map_[c]];
        return ColorPermutation(images);
    }

    friend bool operator==(const ColorPermutation&, const ColorPermutation&) = default;

private:
    std::array<std::uint8_t, 6> map_{};
};

inline EdgeColoring permute_colors(const EdgeColoring& sigma, const ColorPermutation& pi) {
    EdgeColoring out = sigma;
    for (std::uint32_t e = 0; e < sigma.edge_count(); ++e) {
        Element el{ElementKind::Edge, e};
        out.set_raw(el, pi.apply_raw(sigma.raw(el)));
    }
    for (std::uint32_t s = 0; s < sigma.semiedge_count(); ++s) {
        Element el{ElementKind::Semiedge, s};
        out.set_raw(el, pi.apply_raw(sigma.raw(el)));
    }
    return out;
}

/// σ' on M[V']: kept elements keep their color, a semiedge born from a cut
/// edge takes that edge's color.
inline EdgeColoring restriction(const EdgeColoring& sigma, const Multipole& m, const Submultipole& sub) {
    if (!sigma.fits(m)) throw InvalidInput("restriction: coloring does not match the parent multipole");
    if (sub.parent_vertex_count != m.vertex_count() || sub.parent_edge_count != m.edge_count() ||
        sub.parent_semiedge_count != m.semiedge_count())
        throw InvalidInput("restriction: submultipole was not induced from this multipole");
    for (std::size_t v = 0; v < sub.vertex_origin.size(); ++v)
        if (sub.graph.vertex(VertexId{v}).label != m.vertex(sub.vertex_origin[v]).label)
            throw InvalidInput("restriction: submultipole was not induced from this multipole");

    EdgeColoring out(sub.graph);
    for (std::size_t e = 0; e < sub.edge_origin.size(); ++e)
        out.set_raw(Element::of(EdgeId{e}), sigma.raw(sub.edge_origin[e]));
    for (std::size_t s = 0; s < sub.semiedge_origin.size(); ++s)
        out.set_raw(Element::of(SemiedgeId{s}), sigma.raw(sub.semiedge_origin[s]));
    return out;
}

/// Where a coloring fails to be normal, by label.
struct NormalityReport {
    std::vector<std::string> improper_vertices;
    std::vector<std::string> abnormal_edges;
    EdgeClassCounts counts;

    bool normal() const { return improper_vertices.empty() && abnormal_edges.empty(); }
};

inline NormalityReport normality_report(const Multipole& m, const EdgeColoring& sigma) {
    require_total(m, sigma);
    NormalityReport r;
    for (std::uint32_t v = 0; v < m.vertex_count(); ++v) {
        VertexId id{v};
        if (static_cast<std::size_t>(palette_size(palette(m, sigma, id))) != m.degree(id))
            r.improper_vertices.push_back(m.vertex(id).label);
    }
    if (!r.improper_vertices.empty()) return r;
    for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
        EdgeClass c = classify_edge(m, sigma, EdgeId{e});
        if (c == EdgeClass::Poor) ++r.counts.poor;
        else if (c == EdgeClass::Rich) ++r.counts.rich;
        else {
            ++r.counts.abnormal;
            r.abnormal_edges.push_back(m.edge(EdgeId{e}).label);
        }
    }
    return r;
}

} // namespace normsnark
