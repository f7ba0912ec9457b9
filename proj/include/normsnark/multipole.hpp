#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace normsnark {

template <class Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}
    constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
    constexpr explicit Id(int v) : value(static_cast<std::uint32_t>(v)) {}

    friend constexpr auto operator<=>(Id, Id) = default;
};

using VertexId = Id<struct VertexTag>;
using EdgeId = Id<struct EdgeTag>;
using SemiedgeId = Id<struct SemiedgeTag>;

enum class ElementKind : std::uint8_t { Edge, Semiedge };

/// An edge or a semiedge of a multipole; the unit that receives a color.
struct Element {
    ElementKind kind = ElementKind::Edge;
    std::uint32_t index = 0;

    static constexpr Element of(EdgeId e) { return {ElementKind::Edge, e.value}; }
    static constexpr Element of(SemiedgeId s) { return {ElementKind::Semiedge, s.value}; }

    constexpr bool is_edge() const { return kind == ElementKind::Edge; }
    constexpr bool is_semiedge() const { return kind == ElementKind::Semiedge; }
    constexpr EdgeId edge() const { return EdgeId{index}; }
    constexpr SemiedgeId semiedge() const { return SemiedgeId{index}; }

    friend constexpr auto operator<=>(const Element&, const Element&) = default;
};

struct Vertex {
    std::string label;
};

struct Edge {
    VertexId a;
    VertexId b;
    std::string label;
};

/// A dangling half-edge. Attached to one vertex, or paired with a partner
/// semiedge to form an isolated edge.
struct Semiedge {
    std::optional<VertexId> vertex;
    std::optional<SemiedgeId> partner;
    std::string label;
};

/// Ordered group of semiedges; the order is the s_1, s_2, s_3 indexing.
struct Connector {
    std::string name;
    std::vector<SemiedgeId> members;
};

/// Graph with dangling semiedges grouped into connectors. Multi-edges are
/// allowed, loops are not. Labels are unique per element kind and act as
/// stable provenance handles across operations that renumber ids.
class Multipole {
public:
    VertexId add_vertex(std::string label = {}) {
        VertexId id{vertices_.size()};
        if (label.empty()) label = "v" + std::to_string(id.value);
        claim(vertex_index_, label, id.value, "vertex");
        vertices_.push_back({std::move(label)});
        incidence_.emplace_back();
        return id;
    }

    EdgeId add_edge(VertexId a, VertexId b, std::string label = {}) {
        require_vertex(a);
        require_vertex(b);
        if (a == b) throw InvalidInput("loop at vertex " + vertices_[a.value].label + " rejected");
        EdgeId id{edges_.size()};
        if (label.empty()) label = vertices_[a.value].label + "-" + vertices_[b.value].label;
        label = unique_label(edge_index_, std::move(label));
        claim(edge_index_, label, id.value, "edge");
        edges_.push_back({a, b, std::move(label)});
        incidence_[a.value].push_back(Element::of(id));
        incidence_[b.value].push_back(Element::of(id));
        return id;
    }

    SemiedgeId add_semiedge(VertexId v, std::string label = {}) {
        require_vertex(v);
        SemiedgeId id{semiedges_.size()};
        if (label.empty()) label = "s" + std::to_string(id.value);
        claim(semiedge_index_, label, id.value, "semiedge");
        semiedges_.push_back({v, std::nullopt, std::move(label)});
        incidence_[v.value].push_back(Element::of(id));
        return id;
    }

    /// Two mutually partnered semiedges with no end-vertex.
    std::pair<SemiedgeId, SemiedgeId> add_isolated_edge(std::string label_a, std::string label_b) {
        SemiedgeId a{semiedges_.size()};
        SemiedgeId b{semiedges_.size() + 1};
        claim(semiedge_index_, label_a, a.value, "semiedge");
        claim(semiedge_index_, label_b, b.value, "semiedge");
        semiedges_.push_back({std::nullopt, b, std::move(label_a)});
        semiedges_.push_back({std::nullopt, a, std::move(label_b)});
        return {a, b};
    }

    /// Connectors are not checked here; `validate` reports overlaps.
    std::size_t add_connector(std::string name, std::vector<SemiedgeId> members) {
        connectors_.push_back({std::move(name), std::move(members)});
        return connectors_.size() - 1;
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t semiedge_count() const { return semiedges_.size(); }
    std::size_t element_count() const { return edges_.size() + semiedges_.size(); }
    bool is_closed() const { return semiedges_.empty(); }

    const Vertex& vertex(VertexId v) const { return vertices_.at(v.value); }
    const Edge& edge(EdgeId e) const { return edges_.at(e.value); }
    const Semiedge& semiedge(SemiedgeId s) const { return semiedges_.at(s.value); }
    const std::vector<Connector>& connectors() const { return connectors_; }
    const Connector& connector(std::string_view name) const {
        for (const auto& c : connectors_)
            if (c.name == name) return c;
        throw InvalidInput("no connector named " + std::string(name));
    }

    std::span<const Element> incident(VertexId v) const { return incidence_.at(v.value); }
    std::size_t degree(VertexId v) const { return incidence_.at(v.value).size(); }

    VertexId other_end(EdgeId e, VertexId v) const {
        const Edge& ed = edge(e);
        return ed.a == v ? ed.b : ed.a;
    }

    std::optional<EdgeId> edge_between(VertexId a, VertexId b) const {
        for (const Element& el : incident(a))
            if (el.is_edge() && other_end(el.edge(), a) == b) return el.edge();
        return std::nullopt;
    }

    std::optional<VertexId> find_vertex(std::string_view label) const {
        return lookup<VertexId>(vertex_index_, label);
    }
    std::optional<EdgeId> find_edge(std::string_view label) const {
        return lookup<EdgeId>(edge_index_, label);
    }
    std::optional<SemiedgeId> find_semiedge(std::string_view label) const {
        return lookup<SemiedgeId>(semiedge_index_, label);
    }

    VertexId vertex_by_label(std::string_view label) const {
        if (auto v = find_vertex(label)) return *v;
        throw InvalidInput("unknown vertex " + std::string(label));
    }
    SemiedgeId semiedge_by_label(std::string_view label) const {
        if (auto s = find_semiedge(label)) return *s;
        throw InvalidInput("unknown semiedge " + std::string(label));
    }

    std::string element_label(Element el) const {
        return el.is_edge() ? edge(el.edge()).label : semiedge(el.semiedge()).label;
    }

    /// Every edge and semiedge, edges first.
    std::vector<Element> elements() const {
        std::vector<Element> out;
        out.reserve(element_count());
        for (std::uint32_t i = 0; i < edges_.size(); ++i) out.push_back({ElementKind::Edge, i});
        for (std::uint32_t i = 0; i < semiedges_.size(); ++i) out.push_back({ElementKind::Semiedge, i});
        return out;
    }

private:
    using Index = std::map<std::string, std::uint32_t, std::less<>>;

    static void claim(Index& index, const std::string& label, std::uint32_t id, const char* what) {
        if (!index.emplace(label, id).second)
            throw InvalidInput(std::string("duplicate ") + what + " label " + label);
    }

    static std::string unique_label(const Index& index, std::string label) {
        if (!index.contains(label)) return label;
        for (int k = 2;; ++k) {
            std::string candidate = label + "#" + std::to_string(k);
            if (!index.contains(candidate)) return candidate;
        }
    }

    template <class IdT>
    static std::optional<IdT> lookup(const Index& index, std::string_view label) {
        auto it = index.find(label);
        if (it == index.end()) return std::nullopt;
        return IdT{it->second};
    }

    void require_vertex(VertexId v) const {
        if (v.value >= vertices_.size())
            throw InvalidInput("vertex id " + std::to_string(v.value) + " out of range");
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<Semiedge> semiedges_;
    std::vector<Connector> connectors_;
    std::vector<std::vector<Element>> incidence_;
    Index vertex_index_;
    Index edge_index_;
    Index semiedge_index_;
};

struct ValidationReport {
    std::vector<std::string> problems;
    std::vector<std::string> warnings;

    bool ok() const { return problems.empty(); }
};

/// Checks cubicity, semiedge attachment and connector disjointness.
inline ValidationReport validate(const Multipole& m) {
    ValidationReport report;
    for (std::uint32_t v = 0; v < m.vertex_count(); ++v) {
        std::size_t d = m.degree(VertexId{v});
        if (d != 3)
            report.problems.push_back("vertex " + m.vertex(VertexId{v}).label + " has degree " +
                                      std::to_string(d));
    }
    for (std::uint32_t i = 0; i < m.semiedge_count(); ++i) {
        const Semiedge& s = m.semiedge(SemiedgeId{i});
        if (s.vertex && s.partner) {
            report.problems.push_back("semiedge " + s.label + " has both a vertex and a partner");
        } else if (s.partner) {
            if (s.partner->value >= m.semiedge_count() ||
                m.semiedge(*s.partner).partner != SemiedgeId{i} || m.semiedge(*s.partner).vertex)
                report.problems.push_back("semiedge " + s.label + " has a non-mutual partner");
        } else if (!s.vertex) {
            report.problems.push_back("semiedge " + s.label + " is dangling");
        }
    }
    std::vector<int> owner(m.semiedge_count(), -1);
    for (std::size_t c = 0; c < m.connectors().size(); ++c) {
        const Connector& con = m.connectors()[c];
        for (SemiedgeId s : con.members) {
            if (s.value >= m.semiedge_count()) {
                report.problems.push_back("connector " + con.name + " references missing semiedge " +
                                          std::to_string(s.value));
                continue;
            }
            if (owner[s.value] == static_cast<int>(c)) {
                report.problems.push_back("connector " + con.name + " repeats semiedge " +
                                          m.semiedge(s).label);
            } else if (owner[s.value] >= 0) {
                report.problems.push_back("connectors " + m.connectors()[owner[s.value]].name + " and " +
                                          con.name + " overlap at " + m.semiedge(s).label);
            } else {
                owner[s.value] = static_cast<int>(c);
            }
        }
    }
    return report;
}

/// M[V'] together with the map back into M.
struct Submultipole {
    Multipole graph;
    std::vector<VertexId> vertex_origin;
    std::vector<EdgeId> edge_origin;
    /// Parent semiedge kept as is, or the parent edge that was cut.
    std::vector<Element> semiedge_origin;
    std::size_t parent_vertex_count = 0;
    std::size_t parent_edge_count = 0;
    std::size_t parent_semiedge_count = 0;
};

/// Edges inside V' are kept, edges leaving V' become semiedges at their inner
/// end, and semiedges of M hanging on V' are kept. Connectors are restricted
/// to the kept semiedges.
inline Submultipole induced_submultipole(const Multipole& m, std::span<const VertexId> keep) {
    Submultipole sub;
    sub.parent_vertex_count = m.vertex_count();
    sub.parent_edge_count = m.edge_count();
    sub.parent_semiedge_count = m.semiedge_count();

    std::vector<VertexId> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<std::optional<VertexId>> image(m.vertex_count());
    for (VertexId v : sorted) {
        if (v.value >= m.vertex_count())
            throw InvalidInput("induced_submultipole: unknown vertex id " + std::to_string(v.value));
        image[v.value] = sub.graph.add_vertex(m.vertex(v).label);
        sub.vertex_origin.push_back(v);
    }

    for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(EdgeId{e});
        if (image[ed.a.value] && image[ed.b.value]) {
            sub.graph.add_edge(*image[ed.a.value], *image[ed.b.value], ed.label);
            sub.edge_origin.push_back(EdgeId{e});
        }
    }

    std::vector<std::optional<SemiedgeId>> semi_image(m.semiedge_count());
    for (std::uint32_t s = 0; s < m.semiedge_count(); ++s) {
        const Semiedge& se = m.semiedge(SemiedgeId{s});
        if (se.vertex && image[se.vertex->value]) {
            semi_image[s] = sub.graph.add_semiedge(*image[se.vertex->value], se.label);
            sub.semiedge_origin.push_back(Element::of(SemiedgeId{s}));
        }
    }
    for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(EdgeId{e});
        bool in_a = image[ed.a.value].has_value();
        bool in_b = image[ed.b.value].has_value();
        if (in_a == in_b) continue;
        VertexId inner = in_a ? ed.a : ed.b;
        sub.graph.add_semiedge(*image[inner.value], ed.label + "/" + m.vertex(inner).label);
        sub.semiedge_origin.push_back(Element::of(EdgeId{e}));
    }

    for (const Connector& con : m.connectors()) {
        std::vector<SemiedgeId> members;
        for (SemiedgeId s : con.members)
            if (s.value < semi_image.size() && semi_image[s.value]) members.push_back(*semi_image[s.value]);
        if (!members.empty()) sub.graph.add_connector(con.name, std::move(members));
    }
    return sub;
}

namespace detail {

/// Copies `m` dropping the listed semiedges; connector members are remapped.
inline Multipole copy_without_semiedges(const Multipole& m, std::span<const SemiedgeId> drop,
                                        std::span<const EdgeId> drop_edges = {}) {
    Multipole out;
    for (std::uint32_t v = 0; v < m.vertex_count(); ++v) out.add_vertex(m.vertex(VertexId{v}).label);
    for (std::uint32_t e = 0; e < m.edge_count(); ++e) {
        if (std::find(drop_edges.begin(), drop_edges.end(), EdgeId{e}) != drop_edges.end()) continue;
        const Edge& ed = m.edge(EdgeId{e});
        out.add_edge(ed.a, ed.b, ed.label);
    }
    std::vector<std::optional<SemiedgeId>> image(m.semiedge_count());
    std::vector<std::pair<std::uint32_t, SemiedgeId>> partnered;
    for (std::uint32_t s = 0; s < m.semiedge_count(); ++s) {
        if (std::find(drop.begin(), drop.end(), SemiedgeId{s}) != drop.end()) continue;
        const Semiedge& se = m.semiedge(SemiedgeId{s});
        if (se.vertex) {
            image[s] = out.add_semiedge(*se.vertex, se.label);
        } else if (se.partner && se.partner->value > s) {
            auto [a, b] = out.add_isolated_edge(se.label, m.semiedge(*se.partner).label);
            image[s] = a;
            image[se.partner->value] = b;
        }
    }
    for (const Connector& con : m.connectors()) {
        std::vector<SemiedgeId> members;
        for (SemiedgeId s : con.members)
            if (s.value < image.size() && image[s.value]) members.push_back(*image[s.value]);
        out.add_connector(con.name, std::move(members));
    }
    return out;
}

} // namespace detail

/// Joins the end-vertices of two semiedges by a new edge (appended last).
/// Both semiedges disappear; loops are rejected.
inline Multipole identify_semiedges(const Multipole& m, SemiedgeId s1, SemiedgeId s2,
                                    std::string label = {}) {
    if (s1 == s2) throw InvalidInput("identify_semiedges: a semiedge cannot be identified with itself");
    for (SemiedgeId s : {s1, s2}) {
        if (s.value >= m.semiedge_count())
            throw InvalidInput("identify_semiedges: semiedge " + std::to_string(s.value) +
                               " does not exist (already consumed?)");
        if (!m.semiedge(s).vertex)
            throw InvalidInput("identify_semiedges: semiedge " + m.semiedge(s).label +
                               " has no end-vertex");
    }
    VertexId a = *m.semiedge(s1).vertex;
    VertexId b = *m.semiedge(s2).vertex;
    if (a == b)
        throw InvalidInput("identify_semiedges: " + m.semiedge(s1).label + " and " + m.semiedge(s2).label +
                           " share a vertex; loops are rejected");
    if (label.empty()) label = m.semiedge(s1).label + "~" + m.semiedge(s2).label;
    const SemiedgeId drop[] = {s1, s2};
    Multipole out = detail::copy_without_semiedges(m, drop);
    out.add_edge(a, b, std::move(label));
    return out;
}

/// Replaces edge `e` = ab by a-x and x-b through a new degree-2 vertex x
/// (appended last; the two halves are the last two edges, a-side first).
inline Multipole subdivide_edge(const Multipole& m, EdgeId e, std::string vertex_label,
                                std::string label_a_side = {}, std::string label_b_side = {}) {
    if (e.value >= m.edge_count())
        throw InvalidInput("subdivide_edge: unknown edge " + std::to_string(e.value));
    const Edge ed = m.edge(e);
    const EdgeId drop_edges[] = {e};
    Multipole out = detail::copy_without_semiedges(m, {}, drop_edges);
    VertexId x = out.add_vertex(std::move(vertex_label));
    if (label_a_side.empty()) label_a_side = ed.label + ".1";
    if (label_b_side.empty()) label_b_side = ed.label + ".2";
    out.add_edge(ed.a, x, std::move(label_a_side));
    out.add_edge(x, ed.b, std::move(label_b_side));
    return out;
}

/// Offsets of a part copied into a larger multipole by `append`.
struct AppendOffsets {
    std::uint32_t vertex = 0;
    std::uint32_t edge = 0;
    std::uint32_t semiedge = 0;
};

/// Disjoint union in place: copies `part` into `into`, prefixing every label.
/// Connectors are copied with prefixed names.
inline AppendOffsets append(Multipole& into, const Multipole& part, const std::string& prefix) {
    AppendOffsets off{static_cast<std::uint32_t>(into.vertex_count()),
                      static_cast<std::uint32_t>(into.edge_count()),
                      static_cast<std::uint32_t>(into.semiedge_count())};
    for (std::uint32_t v = 0; v < part.vertex_count(); ++v)
        into.add_vertex(prefix + part.vertex(VertexId{v}).label);
    for (std::uint32_t e = 0; e < part.edge_count(); ++e) {
        const Edge& ed = part.edge(EdgeId{e});
        into.add_edge(VertexId{off.vertex + ed.a.value}, VertexId{off.vertex + ed.b.value},
                      prefix + ed.label);
    }
    for (std::uint32_t s = 0; s < part.semiedge_count(); ++s) {
        const Semiedge& se = part.semiedge(SemiedgeId{s});
        if (se.vertex) {
            into.add_semiedge(VertexId{off.vertex + se.vertex->value}, prefix + se.label);
        } else if (se.partner && se.partner->value > s) {
            into.add_isolated_edge(prefix + se.label, prefix + part.semiedge(*se.partner).label);
        }
    }
    for (const Connector& con : part.connectors()) {
        std::vector<SemiedgeId> members;
        for (SemiedgeId s : con.members) members.push_back(SemiedgeId{off.semiedge + s.value});
        into.add_connector(prefix + con.name, std::move(members));
    }
    return off;
}

} // namespace normsnark
