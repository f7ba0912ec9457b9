#include <gtest/gtest.h>

#include "normsnark/oracle.hpp"
#include "test_support.hpp"

using namespace normsnark;
using namespace normsnark::testing;

TEST(Spec, ValidPetersenOuterCycle) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 2);
    SpecReport r = validate_spec(spec, true);
    EXPECT_TRUE(r.ok());
    ASSERT_TRUE(r.base_is_snark);
    EXPECT_TRUE(*r.base_is_snark);
}

TEST(Spec, NonAdjacentConsecutiveVertices) {
    SuperpositionSpec spec = uniform(petersen_frame({"12", "34", "15", "23", "14"}), SupervertexKind::A,
                                     {1, 2, 3}, 2);
    EXPECT_FALSE(validate_spec(spec).ok());
    EXPECT_ANY_THROW(build(spec));
}

TEST(Spec, TooShortAndBadParameters) {
    SuperpositionSpec two = uniform(petersen_frame({"12", "34"}), SupervertexKind::A, {1, 2, 3}, 2);
    EXPECT_FALSE(validate_spec(two).ok());

    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 2);
    spec.junctions[2].d = 4;
    EXPECT_FALSE(validate_spec(spec).ok());
    spec = uniform(outer_five(), SupervertexKind::A, {1, 1, 3}, 2);
    EXPECT_FALSE(validate_spec(spec).ok());
    spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 2);
    spec.kinds.pop_back();
    EXPECT_FALSE(validate_spec(spec).ok());
    spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 2);
    spec.cycle[4] = spec.cycle[1];
    EXPECT_FALSE(validate_spec(spec).ok());
}

TEST(Build, SizesAllA) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 2);
    Superposition sp = build(spec);
    EXPECT_EQ(sp.graph.vertex_count(), 50u);
    EXPECT_EQ(sp.graph.edge_count(), 75u);
    EXPECT_TRUE(validate(sp.graph).ok());
    EXPECT_TRUE(sp.graph.is_closed());
}

TEST(Build, SizesAllAPrime) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::APrime, {1, 2, 3}, 2);
    Superposition sp = build(spec);
    EXPECT_EQ(sp.graph.vertex_count(), 60u);
    EXPECT_EQ(sp.graph.edge_count(), 90u);
    EXPECT_TRUE(validate(sp.graph).ok());
}

TEST(Build, MatchesFormulaOnRandomSpecs) {
    std::mt19937_64 rng(7);
    for (auto frame : {outer_five(), six_cycle()}) {
        for (int k = 0; k < 10; ++k) {
            SuperpositionSpec spec = random_params(frame, rng);
            Superposition sp = build(spec);
            SizeFormula f = expected_size(spec);
            EXPECT_EQ(sp.graph.vertex_count(), f.vertices);
            EXPECT_EQ(sp.graph.edge_count(), f.edges);
            EXPECT_TRUE(validate(sp.graph).ok());
        }
    }
}

TEST(Build, SuperpositionIsSnark) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 2);
    Superposition sp = build(spec);
    EXPECT_TRUE(is_bridgeless(sp.graph));
    EXPECT_FALSE(is_three_edge_colorable(sp.graph));
}

TEST(Build, OffCycleEdgesKeepProvenance) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {2, 3, 1}, 3);
    Superposition sp = build(spec);
    std::size_t kept = 0;
    for (std::uint32_t e = 0; e < spec.base.edge_count(); ++e) {
        if (!sp.base_edge[e]) continue;
        ++kept;
        EXPECT_TRUE(sp.graph.edge(*sp.base_edge[e]).label.starts_with("G."));
    }
    // Five inner edges and five spokes.
    EXPECT_EQ(kept, 10u);
}

TEST(Reverse, ProducesDockOtherThanOne) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 1);
    spec.junctions[2].p = {2, 1, 3};
    SuperpositionSpec rev = reverse_spec(spec);
    bool some = false;
    for (const auto& j : rev.junctions) some = some || j.d != 1;
    EXPECT_TRUE(some);
    EXPECT_TRUE(check_reversal(spec));
}

TEST(Reverse, TrivialStaysTrivial) {
    SuperpositionSpec spec = uniform(outer_five(), SupervertexKind::A, {1, 2, 3}, 1);
    SuperpositionSpec rev = reverse_spec(spec);
    for (const auto& j : rev.junctions) {
        EXPECT_EQ(j.d, 1);
        EXPECT_EQ(j.p, (Perm3{1, 2, 3}));
    }
}

TEST(Reverse, Involution) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        SuperpositionSpec spec = random_params(k % 2 ? six_cycle() : outer_five(), rng);
        SuperpositionSpec twice = reverse_spec(reverse_spec(spec));
        EXPECT_EQ(twice.cycle, spec.cycle);
        EXPECT_EQ(twice.kinds, spec.kinds);
        EXPECT_EQ(twice.junctions, spec.junctions);
        EXPECT_TRUE(check_reversal(spec));
    }
}

TEST(MInt, OuterCycleLeavesInnerCycleAndSpokes) {
    SuperpositionSpec spec = outer_five();
    Submultipole mi = m_int(spec.base, spec.cycle);
    EXPECT_EQ(mi.graph.vertex_count(), 5u);
    EXPECT_EQ(mi.graph.edge_count(), 5u);
    EXPECT_EQ(mi.graph.semiedge_count(), 5u);
    EdgeColoring sigma = *find_normal_coloring(spec.base);
    EXPECT_TRUE(is_normal(mi.graph, sigma_int(sigma, spec.base, mi)));
}

TEST(MInt, EmptyForVertexCoveringSet) {
    Multipole p = petersen_graph();
    std::vector<VertexId> all;
    for (std::uint32_t v = 0; v < 10; ++v) all.push_back(VertexId{v});
    Submultipole mi = m_int(p, all);
    EXPECT_EQ(mi.graph.vertex_count(), 0u);
}
