#pragma once

#include <json.hpp>

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "coloring.hpp"
#include "error.hpp"
#include "multipole.hpp"
#include "superposition.hpp"

namespace normsnark {

// ---------------------------------------------------------------------------
// graph6

/// Parses one graph6 line (optional ">>graph6<<" header). Vertices are
/// labeled "0".."n-1".
inline Multipole read_graph6(std::string_view text) {
    constexpr std::string_view header = ">>graph6<<";
    if (text.starts_with(header)) text.remove_prefix(header.size());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    if (text.empty()) throw ParseError("graph6: empty input");
    for (char ch : text)
        if (ch < 63 || ch > 126) throw ParseError("graph6: byte out of range");

    std::size_t pos = 0;
    auto take = [&](std::size_t count) {
        if (pos + count > text.size()) throw ParseError("graph6: truncated size field");
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < count; ++k) v = (v << 6) | static_cast<std::uint64_t>(text[pos++] - 63);
        return v;
    };
    std::uint64_t n = 0;
    if (text[0] != 126) {
        n = take(1);
    } else if (text.size() > 1 && text[1] != 126) {
        pos = 1;
        n = take(3);
    } else {
        pos = 2;
        n = take(6);
    }
    const std::uint64_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
    const std::uint64_t bytes = (bits + 5) / 6;
    if (text.size() - pos != bytes)
        throw ParseError("graph6: expected " + std::to_string(bytes) + " data bytes, found " +
                         std::to_string(text.size() - pos));

    Multipole g;
    for (std::uint64_t v = 0; v < n; ++v) g.add_vertex(std::to_string(v));
    std::uint64_t k = 0;
    for (std::uint64_t j = 1; j < n; ++j)
        for (std::uint64_t i = 0; i < j; ++i, ++k) {
            int byte = text[pos + k / 6] - 63;
            if (byte & (1 << (5 - static_cast<int>(k % 6))))
                g.add_edge(VertexId{static_cast<std::uint32_t>(i)}, VertexId{static_cast<std::uint32_t>(j)});
        }
    // Padding bits must be zero.
    for (std::uint64_t r = bits; r < bytes * 6; ++r)
        if ((text[pos + r / 6] - 63) & (1 << (5 - static_cast<int>(r % 6))))
            throw ParseError("graph6: nonzero padding");
    return g;
}

/// Simple closed graphs only.
inline std::string write_graph6(const Multipole& g) {
    if (!g.is_closed()) throw InvalidInput("graph6: graph has semiedges");
    const std::uint64_t n = g.vertex_count();
    std::vector<bool> adj(n * n, false);
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(EdgeId{e});
        if (adj[ed.a.value * n + ed.b.value]) throw InvalidInput("graph6: parallel edges are not representable");
        adj[ed.a.value * n + ed.b.value] = adj[ed.b.value * n + ed.a.value] = true;
    }
    std::string out;
    auto put = [&](std::uint64_t v, int groups) {
        for (int k = groups - 1; k >= 0; --k) out.push_back(static_cast<char>(((v >> (6 * k)) & 63) + 63));
    };
    if (n < 63) put(n, 1);
    else if (n <= 258047) out.push_back(126), put(n, 3);
    else out.append(2, static_cast<char>(126)), put(n, 6);
    int acc = 0, used = 0;
    for (std::uint64_t j = 1; j < n; ++j)
        for (std::uint64_t i = 0; i < j; ++i) {
            acc = (acc << 1) | (adj[i * n + j] ? 1 : 0);
            if (++used == 6) {
                out.push_back(static_cast<char>(acc + 63));
                acc = used = 0;
            }
        }
    if (used) out.push_back(static_cast<char>((acc << (6 - used)) + 63));
    return out;
}

// ---------------------------------------------------------------------------
// JSON

using json = nlohmann::json;

namespace detail {

inline VertexId json_vertex(const Multipole& g, const json& v) {
    if (v.is_number_integer()) {
        auto idx = v.get<long long>();
        if (idx < 0 || static_cast<std::size_t>(idx) >= g.vertex_count())
            throw InvalidInput("vertex index " + std::to_string(idx) + " out of range");
        return VertexId{static_cast<std::uint32_t>(idx)};
    }
    if (v.is_string()) {
        auto id = g.find_vertex(v.get<std::string>());
        if (!id) throw InvalidInput("unknown vertex " + v.get<std::string>());
        return *id;
    }
    throw ParseError("vertex reference must be a label or an index");
}

} // namespace detail

/// {"vertices": [labels] or n, "edges": [[a,b],...]}; endpoints are labels or
/// indices. A bare string is read as graph6.
inline Multipole graph_from_json(const json& j) {
    if (j.is_string()) return read_graph6(j.get<std::string>());
    if (!j.is_object()) throw ParseError("graph must be an object or a graph6 string");
    if (j.contains("graph6")) return read_graph6(j.at("graph6").get<std::string>());
    try {
        Multipole g;
        const json& vs = j.at("vertices");
        if (vs.is_number_integer()) {
            for (long long v = 0; v < vs.get<long long>(); ++v) g.add_vertex(std::to_string(v));
        } else {
            for (const auto& v : vs) g.add_vertex(v.is_string() ? v.get<std::string>() : v.dump());
        }
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() < 2) throw ParseError("edge must be [a, b]");
            g.add_edge(detail::json_vertex(g, e[0]), detail::json_vertex(g, e[1]));
        }
        return g;
    } catch (const json::exception& ex) {
        throw ParseError(std::string("graph JSON: ") + ex.what());
    }
}

inline json graph_to_json(const Multipole& g) {
    json j;
    j["vertices"] = json::array();
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(g.vertex(VertexId{v}).label);
    j["edges"] = json::array();
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(EdgeId{e});
        j["edges"].push_back({g.vertex(ed.a).label, g.vertex(ed.b).label});
    }
    return j;
}

/// Reads a graph from text: JSON if it starts with '{' or '"', graph6 otherwise.
inline Multipole read_graph(const std::string& text) {
    std::size_t k = text.find_first_not_of(" \t\r\n");
    if (k == std::string::npos) throw ParseError("empty graph input");
    if (text[k] == '{' || text[k] == '"') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& ex) {
            throw ParseError(std::string("JSON: ") + ex.what());
        }
        return graph_from_json(j);
    }
    return read_graph6(text.substr(k, text.find_first_of("\r\n", k) - k));
}

/// {"edges": [[a, b, color], ...]} against the given graph. Parallel edges
/// are matched in order.
inline EdgeColoring coloring_from_json(const Multipole& g, const json& j) {
    EdgeColoring sigma(g);
    try {
        std::vector<bool> used(g.edge_count(), false);
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw ParseError("colored edge must be [a, b, color]");
            VertexId a = detail::json_vertex(g, e[0]);
            VertexId b = detail::json_vertex(g, e[1]);
            int c = e[2].get<int>();
            if (c < 1 || c > kColorCount) throw InvalidInput("color out of range: " + std::to_string(c));
            std::optional<EdgeId> hit;
            for (const Element& el : g.incident(a))
                if (el.is_edge() && !used[el.index] && g.other_end(el.edge(), a) == b) {
                    hit = el.edge();
                    break;
                }
            if (!hit) throw InvalidInput("colored edge " + e[0].dump() + "-" + e[1].dump() + " is not in the graph");
            used[hit->value] = true;
            sigma.set_raw(Element::of(*hit), c);
        }
    } catch (const json::exception& ex) {
        throw ParseError(std::string("coloring JSON: ") + ex.what());
    }
    if (!sigma.is_total()) throw InvalidInput("coloring leaves some edges uncolored");
    return sigma;
}

inline json coloring_to_json(const Multipole& g, const EdgeColoring& sigma) {
    json edges = json::array();
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(EdgeId{e});
        edges.push_back({g.vertex(ed.a).label, g.vertex(ed.b).label, sigma.raw(EdgeId{e})});
    }
    return edges;
}

inline SupervertexKind kind_from_string(const std::string& s) {
    if (s == "A") return SupervertexKind::A;
    if (s == "Aprime" || s == "A'") return SupervertexKind::APrime;
    throw InvalidInput("unknown supervertex kind " + s);
}

/// {"base": graph, "cycle": [...], "kinds": ["A"|"Aprime"], "junctions": [{"p":[i,j,k],"d":n}]}
inline SuperpositionSpec spec_from_json(const json& j) {
    try {
        SuperpositionSpec spec;
        spec.base = graph_from_json(j.at("base"));
        for (const auto& v : j.at("cycle")) spec.cycle.push_back(detail::json_vertex(spec.base, v));
        for (const auto& k : j.at("kinds")) spec.kinds.push_back(kind_from_string(k.get<std::string>()));
        for (const auto& jp : j.at("junctions")) {
            JunctionParams p;
            const auto& arr = jp.at("p");
            if (!arr.is_array() || arr.size() != 3) throw InvalidInput("p must have three entries");
            for (int k = 0; k < 3; ++k) p.p[k] = arr[k].get<int>();
            p.d = jp.at("d").get<int>();
            spec.junctions.push_back(p);
        }
        return spec;
    } catch (const json::exception& ex) {
        throw ParseError(std::string("spec JSON: ") + ex.what());
    }
}

inline json spec_to_json(const SuperpositionSpec& spec) {
    json j;
    j["base"] = graph_to_json(spec.base);
    j["cycle"] = json::array();
    for (VertexId v : spec.cycle) j["cycle"].push_back(spec.base.vertex(v).label);
    j["kinds"] = json::array();
    for (SupervertexKind k : spec.kinds) j["kinds"].push_back(to_string(k));
    j["junctions"] = json::array();
    for (const auto& p : spec.junctions) j["junctions"].push_back({{"p", p.p}, {"d", p.d}});
    return j;
}

// ---------------------------------------------------------------------------
// DOT

/// Undirected DOT; with a coloring, edges carry their color and poor edges
/// are drawn bold.
inline std::string to_dot(const Multipole& g, const EdgeColoring* sigma = nullptr) {
    static const char* palette_names[] = {"black", "red", "blue", "darkgreen", "orange", "purple"};
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) {
            if (ch == '"' || ch == '\\') out.push_back('\\');
            out.push_back(ch);
        }
        return out + "\"";
    };
    std::ostringstream os;
    os << "graph G {\n  node [shape=point];\n";
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) os << "  " << quote(g.vertex(VertexId{v}).label) << ";\n";
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(EdgeId{e});
        os << "  " << quote(g.vertex(ed.a).label) << " -- " << quote(g.vertex(ed.b).label);
        if (sigma && sigma->raw(EdgeId{e})) {
            int c = sigma->raw(EdgeId{e});
            bool poor = sigma->is_total() && classify_edge(g, *sigma, EdgeId{e}) == EdgeClass::Poor;
            os << " [label=\"" << c << "\", color=" << palette_names[c];
            if (poor) os << ", style=bold, penwidth=2.5";
            os << "]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace normsnark
