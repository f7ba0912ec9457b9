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

// Perfect matchings {01,23}, {02,13}, {03,12}.
EdgeColoring k4_three(const Multipole& g) {
    EdgeColoring s(g);
    const int colors[] = {1, 2, 3, 3, 2, 1};  // 01 02 03 12 13 23
    for (std::uint32_t e = 0; e < 6; ++e) s.set_raw(Element::of(EdgeId{e}), colors[e]);
    return s;
}

} // namespace

TEST(Coloring, K4ThreeColoringProperAndAllPoor) {
    Multipole g = k4();
    EdgeColoring s = k4_three(g);
    EXPECT_TRUE(is_proper(g, s));
    EXPECT_TRUE(is_normal(g, s));
    EXPECT_EQ(poor_count(g, s), 6u);
}

TEST(Coloring, MonochromaticIsImproper) {
    Multipole p = petersen_graph();
    EdgeColoring s(p);
    for (const Element& el : p.elements()) s.set(el, Color{1});
    EXPECT_FALSE(is_proper(p, s));
}

TEST(Coloring, FourColorsOnK4GiveAnAbnormalEdge) {
    // Exhaustive: no proper coloring of K4 using exactly 4 colors is normal.
    Multipole g = k4();
    EdgeColoring s(g);
    std::size_t proper_four = 0;
    for (int code = 0; code < 4 * 4 * 4 * 4 * 4 * 4; ++code) {
        int x = code;
        for (std::uint32_t e = 0; e < 6; ++e, x /= 4) s.set_raw(Element::of(EdgeId{e}), x % 4 + 1);
        if (!is_proper(g, s) || palette_size(s.used_colors()) != 4) continue;
        ++proper_four;
        EXPECT_FALSE(is_normal(g, s));
    }
    EXPECT_GT(proper_four, 0u);
}

TEST(Coloring, ClassifyBySetArithmetic) {
    Multipole m;
    VertexId a = m.add_vertex(), b = m.add_vertex();
    EdgeId e = m.add_edge(a, b);
    SemiedgeId a1 = m.add_semiedge(a), a2 = m.add_semiedge(a);
    SemiedgeId b1 = m.add_semiedge(b), b2 = m.add_semiedge(b);
    EdgeColoring s(m);
    s.set(e, Color{1});
    s.set(a1, Color{2});
    s.set(a2, Color{3});
    s.set(b1, Color{4});
    s.set(b2, Color{5});
    EXPECT_EQ(classify_edge(m, s, e), EdgeClass::Rich);
    s.set(b1, Color{2});
    s.set(b2, Color{4});
    EXPECT_EQ(classify_edge(m, s, e), EdgeClass::Abnormal);
    s.set(b2, Color{3});
    EXPECT_EQ(classify_edge(m, s, e), EdgeClass::Poor);
}

TEST(Coloring, SchemeOfSemiedge) {
    Multipole m;
    VertexId v = m.add_vertex();
    SemiedgeId s1 = m.add_semiedge(v), s2 = m.add_semiedge(v), s3 = m.add_semiedge(v);
    EdgeColoring s(m);
    s.set(s1, Color{1});
    s.set(s2, Color{2});
    s.set(s3, Color{3});
    EXPECT_EQ(scheme_of(m, s, s1), ColorScheme(1, 2, 3));
}

TEST(Coloring, SchemeConsistency) {
    EXPECT_TRUE(schemes_consistent(ColorScheme(1, 2, 3), ColorScheme(1, 2, 3)));
    EXPECT_TRUE(schemes_consistent(ColorScheme(1, 2, 3), ColorScheme(1, 4, 5)));
    EXPECT_FALSE(schemes_consistent(ColorScheme(1, 2, 3), ColorScheme(2, 1, 3)));
    EXPECT_FALSE(schemes_consistent(ColorScheme(1, 2, 3), ColorScheme(1, 2, 4)));
    EXPECT_ANY_THROW(ColorScheme(1, 1, 3));
}

TEST(Coloring, KempeChainOnAbsentColorsIsTrivial) {
    Multipole m;
    VertexId v = m.add_vertex();
    SemiedgeId s1 = m.add_semiedge(v), s2 = m.add_semiedge(v), s3 = m.add_semiedge(v);
    EdgeColoring s(m);
    s.set(s1, Color{4});
    s.set(s2, Color{1});
    s.set(s3, Color{2});
    KempeChain c = find_kempe_chain(m, s, s1, {Color{4}, Color{5}});
    EXPECT_EQ(c.elements.size(), 1u);
    EXPECT_FALSE(c.terminal);
}

TEST(Coloring, KempeSwapIsInvolution) {
    const TemplateBase& base = template_base();
    const SuperedgeLayout& L = petersen_superedge();
    const Multipole& m = L.multipole;
    const EdgeColoring& r = base.r;
    SemiedgeId start = L.multipole.connector("left").members[1];
    Color c = r.at(start);
    Color other = c == Color{1} ? Color{3} : Color{1};
    KempeChain chain = find_kempe_chain(m, r, start, {c, other});
    EdgeColoring once = kempe_swap(m, r, chain);
    EXPECT_TRUE(is_proper(m, once));
    KempeChain back = find_kempe_chain(m, once, start, {c, other});
    EXPECT_EQ(kempe_swap(m, once, back), r);
    // A chain whose colors no longer alternate is stale.
    ASSERT_GE(chain.elements.size(), 2u);
    EdgeColoring broken = r;
    broken.set(chain.elements[1], Color{5});
    EXPECT_ANY_THROW(kempe_swap(m, broken, chain));
}

TEST(Coloring, PermutationsComposeAndInvert) {
    ColorPermutation p({2, 4, 5, 1, 3});
    EXPECT_EQ(p.compose(p.inverse()), ColorPermutation());
    EXPECT_EQ(ColorPermutation::from_leading(Color{2}, Color{4}, Color{5}), p);
    EXPECT_ANY_THROW(ColorPermutation({1, 1, 2, 3, 4}));
    EXPECT_EQ(ColorPermutation::transposition(1, 3)(Color{1}), Color{3});
}

TEST(Coloring, PermutingRKeepsPoorCount) {
    const SuperedgeLayout& L = petersen_superedge();
    EdgeColoring r = template_base().r;
    EXPECT_EQ(permute_colors(r, ColorPermutation()), r);
    EdgeColoring r245 = permute_colors(r, ColorPermutation::from_leading(Color{2}, Color{4}, Color{5}));
    EXPECT_TRUE(is_normal(L.multipole, r245));
    EXPECT_EQ(poor_count(L.multipole, r245), 9u);
    EXPECT_EQ(r245, make_template(TemplateId::R, {Color{2}, Color{4}, Color{5}, std::nullopt}).coloring);
}

TEST(Restriction, IdentityAndEmpty) {
    Multipole p = petersen_graph();
    EdgeColoring sigma = *find_normal_coloring(p);
    std::vector<VertexId> all;
    for (std::uint32_t v = 0; v < 10; ++v) all.push_back(VertexId{v});
    Submultipole whole = induced_submultipole(p, all);
    EXPECT_EQ(restriction(sigma, p, whole), sigma);
    Submultipole none = induced_submultipole(p, std::span<const VertexId>{});
    EdgeColoring empty = restriction(sigma, p, none);
    EXPECT_EQ(empty.edge_count() + empty.semiedge_count(), 0u);
}

TEST(Restriction, CutEdgesBecomeColoredSemiedges) {
    Multipole p = petersen_graph();
    EdgeColoring sigma = *find_normal_coloring(p);
    VertexId gone = p.vertex_by_label("12");
    std::vector<VertexId> keep;
    for (std::uint32_t v = 0; v < 10; ++v)
        if (VertexId{v} != gone) keep.push_back(VertexId{v});
    Submultipole sub = induced_submultipole(p, keep);
    EdgeColoring r = restriction(sigma, p, sub);
    ASSERT_EQ(sub.graph.semiedge_count(), 3u);
    for (std::uint32_t s = 0; s < 3; ++s) {
        Element origin = sub.semiedge_origin[s];
        ASSERT_TRUE(origin.is_edge());
        EXPECT_EQ(r.raw(SemiedgeId{s}), sigma.raw(origin.edge()));
    }
    EXPECT_TRUE(is_normal(sub.graph, r));
}
