#include <gtest/gtest.h>

#include "normsnark/oracle.hpp"
#include "normsnark/petersen.hpp"

using namespace normsnark;

namespace {

Multipole k4() {
    Multipole g;
    for (int i = 0; i < 4; ++i) g.add_vertex();
    for (std::uint32_t a = 0; a < 4; ++a)
        for (std::uint32_t b = a + 1; b < 4; ++b) g.add_edge(VertexId{a}, VertexId{b});
    return g;
}

// Two copies of K4 with one edge subdivided, the subdivision vertices joined
// by a bridge.
Multipole bridged() {
    Multipole g;
    for (int i = 0; i < 10; ++i) g.add_vertex();
    auto e = [&](int a, int b) { g.add_edge(VertexId{a}, VertexId{b}); };
    for (int off : {0, 5}) {
        e(off, off + 2);
        e(off, off + 3);
        e(off + 1, off + 2);
        e(off + 1, off + 3);
        e(off + 2, off + 3);
        e(off, off + 4);
        e(off + 1, off + 4);
    }
    e(4, 9);
    return g;
}

} // namespace

TEST(Oracle, K4IsThreeEdgeColorable) {
    Multipole g = k4();
    EXPECT_TRUE(is_three_edge_colorable(g));
    auto s = find_three_edge_coloring(g);
    ASSERT_TRUE(s);
    EXPECT_TRUE(is_proper(g, *s));
    EXPECT_EQ(palette_size(s->used_colors()), 3);
    EXPECT_FALSE(check_snark(g));
}

TEST(Oracle, PetersenIsASnark) {
    Multipole p = petersen_graph();
    EXPECT_FALSE(is_three_edge_colorable(p));
    EXPECT_TRUE(is_bridgeless(p));
    EXPECT_TRUE(check_snark(p));
    EXPECT_EQ(girth(p), 5u);
}

TEST(Oracle, BridgeDetected) {
    Multipole g = bridged();
    EXPECT_TRUE(validate(g).ok());
    EXPECT_FALSE(is_bridgeless(g));
    EXPECT_FALSE(check_snark(g));
}

TEST(Oracle, NonCubicRejected) {
    Multipole g;
    g.add_edge(g.add_vertex(), g.add_vertex());
    EXPECT_ANY_THROW(is_three_edge_colorable(g));
}

TEST(Oracle, PetersenHasNormalColoring) {
    Multipole p = petersen_graph();
    auto s = find_normal_coloring(p);
    ASSERT_TRUE(s);
    EXPECT_TRUE(is_normal(p, *s));
    // Not 3-edge-colorable, so more than three colors are needed.
    EXPECT_GT(palette_size(s->used_colors()), 3);
}

TEST(Oracle, SearchWithFullBoundaryFindsR) {
    const SuperedgeLayout& L = petersen_superedge();
    const EdgeColoring& r = template_base().r;
    BoundaryConstraint bc;
    for (std::uint32_t s = 0; s < L.multipole.semiedge_count(); ++s) bc.fix(SemiedgeId{s}, r.at(SemiedgeId{s}));
    bc.restrict_all(L.multipole, static_cast<Palette>(bit(1) | bit(2) | bit(3)));
    auto found = search_normal_coloring(L.multipole, bc);
    ASSERT_TRUE(found);
    EXPECT_TRUE(is_right_monochromatic(*found, {Color{2}, Color{1}, Color{3}, std::nullopt, std::nullopt}));
    EXPECT_EQ(poor_count(L.multipole, *found), 9u);
}

TEST(Oracle, ThreeColorsOnlyGiveAllPoor) {
    const SuperedgeLayout& L = petersen_superedge();
    BoundaryConstraint bc;
    bc.restrict_all(L.multipole, static_cast<Palette>(bit(1) | bit(2) | bit(3)));
    auto found = search_normal_coloring(L.multipole, bc);
    ASSERT_TRUE(found);
    EXPECT_EQ(poor_count(L.multipole, *found), L.multipole.edge_count());
}

TEST(Oracle, UnsatisfiableConstraint) {
    const SuperedgeLayout& L = petersen_superedge();
    // w1 carries l1 and r1; equal colors there are never proper.
    BoundaryConstraint bc;
    bc.fix(L.left[0], Color{1});
    bc.fix(L.right[0], Color{1});
    EXPECT_FALSE(search_normal_coloring(L.multipole, bc));
}

TEST(Oracle, ExactColorCountFour) {
    // A normal coloring never uses exactly four colors on K4 (no stubs).
    Multipole g = k4();
    BoundaryConstraint bc;
    bc.exact_color_count = 4;
    EXPECT_FALSE(search_normal_coloring(g, bc));
}

TEST(Oracle, SizeGuard) {
    Multipole big;
    for (int i = 0; i < 40; ++i) big.add_vertex();
    for (int i = 0; i < 40; ++i) big.add_edge(VertexId{i}, VertexId{(i + 1) % 40});
    for (int i = 0; i < 20; ++i) big.add_edge(VertexId{i}, VertexId{i + 20});
    EXPECT_THROW(search_normal_coloring(big), SizeGuardExceeded);
    EXPECT_THROW(find_normal_coloring(big), SizeGuardExceeded);
}
