#include <gtest/gtest.h>

#include "normsnark/oracle.hpp"
#include "normsnark/petersen.hpp"

using namespace normsnark;

namespace {

std::vector<VertexId> all_but(const Multipole& g, std::initializer_list<const char*> drop) {
    std::vector<VertexId> keep;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        bool skip = false;
        for (const char* d : drop) skip = skip || g.vertex(VertexId{v}).label == d;
        if (!skip) keep.push_back(VertexId{v});
    }
    return keep;
}

} // namespace

TEST(Multipole, PetersenIsValidAndClosed) {
    Multipole p = petersen_graph();
    EXPECT_TRUE(validate(p).ok());
    EXPECT_EQ(p.vertex_count(), 10u);
    EXPECT_EQ(p.edge_count(), 15u);
    EXPECT_EQ(p.semiedge_count(), 0u);
}

TEST(Multipole, DeletingOneVertexWithoutStubsIsInvalid) {
    Multipole p = petersen_graph();
    Multipole q;
    auto keep = all_but(p, {"12"});
    std::vector<int> image(p.vertex_count(), -1);
    for (VertexId v : keep) image[v.value] = static_cast<int>(q.add_vertex(p.vertex(v).label).value);
    for (std::uint32_t e = 0; e < p.edge_count(); ++e) {
        const Edge& ed = p.edge(EdgeId{e});
        if (image[ed.a.value] >= 0 && image[ed.b.value] >= 0)
            q.add_edge(VertexId{image[ed.a.value]}, VertexId{image[ed.b.value]});
    }
    ValidationReport r = validate(q);
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.problems.size(), 3u);
}

TEST(Multipole, LoopsAndDuplicateLabelsRejected) {
    Multipole m;
    VertexId a = m.add_vertex("a");
    EXPECT_ANY_THROW(m.add_vertex("a"));
    EXPECT_ANY_THROW(m.add_edge(a, a));
    VertexId b = m.add_vertex("b");
    EdgeId e1 = m.add_edge(a, b);
    EdgeId e2 = m.add_edge(a, b);
    EXPECT_NE(m.edge(e1).label, m.edge(e2).label);
    EXPECT_EQ(m.degree(a), 2u);
}

TEST(Multipole, ConnectorOverlapReported) {
    Multipole m;
    VertexId a = m.add_vertex();
    SemiedgeId s = m.add_semiedge(a);
    m.add_semiedge(a);
    m.add_semiedge(a);
    m.add_connector("x", {s});
    m.add_connector("y", {s});
    EXPECT_FALSE(validate(m).ok());
}

TEST(Multipole, IsolatedEdgeIsValid) {
    Multipole m;
    auto [a, b] = m.add_isolated_edge("p", "q");
    EXPECT_EQ(m.semiedge(a).partner, b);
    EXPECT_TRUE(validate(m).ok());
}

TEST(Submultipole, EmptySet) {
    Multipole p = petersen_graph();
    Submultipole s = induced_submultipole(p, std::span<const VertexId>{});
    EXPECT_EQ(s.graph.vertex_count(), 0u);
    EXPECT_EQ(s.graph.edge_count(), 0u);
    EXPECT_EQ(s.graph.semiedge_count(), 0u);
}

TEST(Submultipole, OneVertexRemoved) {
    Multipole p = petersen_graph();
    auto keep = all_but(p, {"12"});
    Submultipole s = induced_submultipole(p, keep);
    EXPECT_EQ(s.graph.vertex_count(), 9u);
    EXPECT_EQ(s.graph.edge_count(), 12u);
    EXPECT_EQ(s.graph.semiedge_count(), 3u);
    EXPECT_TRUE(validate(s.graph).ok());
}

TEST(Submultipole, ComplementOfOuterFiveCycle) {
    Multipole p = petersen_graph();
    auto keep = all_but(p, {"12", "34", "15", "23", "45"});
    Submultipole s = induced_submultipole(p, keep);
    EXPECT_EQ(s.graph.vertex_count(), 5u);
    EXPECT_EQ(s.graph.edge_count(), 5u);
    EXPECT_EQ(s.graph.semiedge_count(), 5u);
}

TEST(Submultipole, TwoDistanceTwoVerticesRemoved) {
    // 12 and 13 share the neighbor 45.
    Multipole p = petersen_graph();
    Submultipole s = induced_submultipole(p, all_but(p, {"12", "13"}));
    EXPECT_EQ(s.graph.vertex_count(), 8u);
    EXPECT_EQ(s.graph.edge_count(), 9u);
    EXPECT_EQ(s.graph.semiedge_count(), 6u);
    EXPECT_TRUE(validate(s.graph).ok());
}

TEST(Identify, TwoCopiesOfPetersenMinusVertexCloseUp) {
    Multipole p = petersen_graph();
    Submultipole s = induced_submultipole(p, all_but(p, {"12"}));
    Multipole m;
    append(m, s.graph, "a.");
    AppendOffsets off = append(m, s.graph, "b.");
    // Ids shift down by two after each identification; always take the
    // first remaining semiedge of each copy.
    for (int k = 0; k < 3; ++k) {
        SemiedgeId left{0};
        SemiedgeId right{off.semiedge - static_cast<std::uint32_t>(k)};
        m = identify_semiedges(m, left, right);
    }
    EXPECT_TRUE(m.is_closed());
    EXPECT_EQ(m.vertex_count(), 18u);
    EXPECT_TRUE(validate(m).ok());
}

TEST(Identify, SameVertexRejected) {
    Multipole m;
    VertexId a = m.add_vertex();
    SemiedgeId s1 = m.add_semiedge(a);
    SemiedgeId s2 = m.add_semiedge(a);
    EXPECT_ANY_THROW(identify_semiedges(m, s1, s2));
    EXPECT_ANY_THROW(identify_semiedges(m, s1, s1));
    EXPECT_ANY_THROW(identify_semiedges(m, s1, SemiedgeId{7}));
}

TEST(Subdivide, PendantEdgeRestoresCubicity) {
    Multipole p = petersen_graph();
    Multipole q = subdivide_edge(p, EdgeId{0}, "x");
    VertexId x = q.vertex_by_label("x");
    EXPECT_EQ(q.degree(x), 2u);
    q.add_semiedge(x);
    EXPECT_TRUE(validate(q).ok());
}

TEST(Subdivide, TwiceThenJoin) {
    Multipole p = petersen_graph();
    Multipole q = subdivide_edge(p, EdgeId{0}, "u1");
    q = subdivide_edge(q, EdgeId{0}, "u2");
    q.add_edge(q.vertex_by_label("u1"), q.vertex_by_label("u2"), "uu");
    EXPECT_TRUE(validate(q).ok());
    EXPECT_EQ(q.vertex_count(), 12u);
    EXPECT_EQ(q.edge_count(), 18u);
}
