#include <gtest/gtest.h>

#include <ncd/building.hpp>

using namespace ncd;

namespace {

CombinatorialDivisor ex4dim() { return simple_crossings(4, {"V1", "V2"}, {{{"V1", "V2"}, 1}}); }

std::size_t ipow(std::size_t b, int e)
{
    std::size_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

TEST(Building, LevelZero)
{
    auto b = build(local_model(2), 0);
    ASSERT_EQ(b.pieces.size(), 1u);
    EXPECT_EQ(b.divisor.strata[b.pieces[0].stratum].depth, 0);
    EXPECT_TRUE(b.attaching.empty());
}

TEST(Building, Ex4dimPieceCounts)
{
    auto b1 = build(ex4dim(), 1);
    EXPECT_EQ(count_piece_classes(b1), 3u);
    EXPECT_EQ(count_pieces(b1, 1), 2u); // F_1 over V1 and over V2
    auto b2 = build(ex4dim(), 2);
    EXPECT_EQ(count_piece_classes(b2, 2), 4u);
    for (int m = 1; m <= 5; ++m) {
        auto b = build(ex4dim(), m);
        EXPECT_EQ(count_piece_classes(b, 2), static_cast<std::size_t>(m * m));
        EXPECT_EQ(count_piece_classes(b, 1), static_cast<std::size_t>(m));
        EXPECT_EQ(count_pieces(b, 1), static_cast<std::size_t>(2 * m));
    }
}

TEST(Building, LocalPieceCounts)
{
    for (int k = 1; k <= 3; ++k)
        for (int m = 0; m <= 4; ++m) {
            auto b = build(local_model(k), m);
            auto deepest = b.divisor.of_depth(k).at(0);
            EXPECT_EQ(local_labels(b, deepest).size(), ipow(m + 1, k));
            // every local label lies in some global piece
            for (auto& l : local_labels(b, deepest)) EXPECT_NO_THROW(resolve_piece(b, deepest, 0, l));
        }
}

TEST(Building, LocalLabelsAreProductOfRescaledDisks)
{
    for (int k = 1; k <= 3; ++k)
        for (int m = 0; m <= 3; ++m) {
            auto b = build(local_model(k), m);
            auto disk = rescaled_disk(m);
            auto labels = local_labels(b, b.divisor.of_depth(k).at(0));
            EXPECT_EQ(labels.size(), ipow(disk.components.size(), k));
            for (auto& l : labels)
                for (int x : l) EXPECT_TRUE(x >= 0 && x <= m);
        }
}

TEST(Building, MultiBuilding)
{
    for (int m = 1; m <= 3; ++m) {
        auto b = build_multi(ex4dim(), {m, m});
        std::map<std::vector<int>, int> per_pair;
        for (auto& p : b.pieces)
            if (b.divisor.strata[p.stratum].depth == 2) ++per_pair[piece_multilevel(b, p)];
        EXPECT_EQ(per_pair.size(), static_cast<std::size_t>(m * m));
        for (auto& [k, n] : per_pair) EXPECT_EQ(n, 1);
    }
    EXPECT_EQ(count_pieces(build_multi(ex4dim(), {1, 3}), 2), 3u);
    try {
        build_multi(self_crossing_curve(), {1, 2});
        FAIL() << "expected rejection";
    } catch (const StructuralError& e) {
        EXPECT_NE(std::string(e.what()).find("one global scaling parameter"), std::string::npos);
    }
}

TEST(Building, SignLabels)
{
    EXPECT_EQ(sign_labels({1}).size(), 3u);
    EXPECT_EQ(sign_labels({1}, false).size(), 2u);
    EXPECT_EQ(sign_labels({1, 1}, false).size(), 8u);
    auto lvl0 = sign_labels({0}, false);
    ASSERT_EQ(lvl0.size(), 1u);
    EXPECT_EQ(lvl0[0], std::vector<int>{1});
}

TEST(Building, MinusOnlyAboveLevelZero)
{
    for (auto& d : {local_model(3), ex4dim(), self_crossing_curve()}) {
        auto b = build(d, 2);
        for (auto& s : b.strata)
            for (std::size_t i = 0; i < s.signs.size(); ++i)
                if (s.signs[i] == -1) EXPECT_GE(s.levels[i], 1);
    }
}

TEST(Building, DualPairsPerfectMatching)
{
    for (auto& d : {local_model(1), local_model(2), local_model(3), ex4dim(), self_crossing_curve()})
        for (int m = 0; m <= 3; ++m) {
            auto b = build(d, m);
            std::map<std::size_t, int> used;
            for (auto& [x, y] : b.attaching) {
                ++used[x];
                ++used[y];
                auto& a = b.strata[x];
                auto& c = b.strata[y];
                EXPECT_EQ(a.stratum, c.stratum);
            }
            for (auto& [id, n] : used) EXPECT_EQ(n, 1);
            for (auto& s : b.strata) {
                bool infinity = std::find(s.signs.begin(), s.signs.end(), -1) != s.signs.end();
                if (infinity) EXPECT_EQ(used.count(s.id), 1u);
            }
        }
}

TEST(Building, DualPairExamples)
{
    // smooth divisor, m = 1: V in X pairs with the infinity section of F_1
    auto b = build(local_model(1), 1);
    ASSERT_EQ(b.attaching.size(), 1u);
    auto& x = b.strata[b.attaching[0].first];
    auto& y = b.strata[b.attaching[0].second];
    EXPECT_EQ(x.levels, std::vector<int>{0});
    EXPECT_EQ(x.signs, std::vector<int>{1});
    EXPECT_EQ(y.levels, std::vector<int>{1});
    EXPECT_EQ(y.signs, std::vector<int>{-1});
    EXPECT_EQ(b.pieces[x.piece].levels.size(), 0u); // X
    // ex4dim: fibre of F_1 over p pairs with a P1 x infinity edge of F_2
    auto e = build(ex4dim(), 1);
    bool found = false;
    for (auto& [i, j] : e.attaching) {
        auto& s = e.strata[i];
        auto& t = e.strata[j];
        if (s.levels == std::vector<int>{1, 0} && s.signs == std::vector<int>{0, 1} &&
            t.levels == std::vector<int>{1, 1} && t.signs == std::vector<int>{0, -1})
            found = true;
    }
    EXPECT_TRUE(found);
}

TEST(Building, Collapse)
{
    auto d = ex4dim();
    auto b2 = build(d, 2);
    auto c = collapse(b2, {2});
    EXPECT_EQ(c.building.m(), 1);
    // pieces avoiding level 2 map bijectively onto the level-1 building
    std::set<std::size_t> image;
    for (auto& p : b2.pieces)
        if (piece_level(p) < 2) {
            auto q = c.building.pieces[c.piece_map[p.id]];
            EXPECT_EQ(q.levels, p.levels);
            image.insert(q.id);
        }
    EXPECT_EQ(image.size(), build(d, 1).pieces.size());
    auto all = collapse(b2, {1, 2});
    EXPECT_EQ(all.building.pieces.size(), 1u);
    for (auto id : all.piece_map) EXPECT_EQ(id, 0u);
    auto same = collapse(b2, {});
    for (std::size_t i = 0; i < b2.pieces.size(); ++i) EXPECT_EQ(same.piece_map[i], i);
    // a collapsed level merges into the level below: (1,2) under {1} -> (0,1)
    auto c1 = collapse(b2, {1});
    for (auto& p : b2.pieces)
        if (p.levels == std::vector<int>{1, 2}) {
            auto& q = c1.building.pieces[c1.piece_map[p.id]];
            EXPECT_EQ(c1.building.divisor.strata[q.stratum].id, "V2");
            EXPECT_EQ(q.levels, std::vector<int>{1});
        }
    EXPECT_THROW(collapse(b2, {3}), StructuralError);
}

TEST(Building, RescaledDisk)
{
    auto r0 = rescaled_disk(0);
    EXPECT_EQ(r0.components.size(), 1u);
    EXPECT_EQ(r0.divisor_points.size(), 1u);
    auto r2 = rescaled_disk(2);
    EXPECT_EQ(r2.components.size(), 3u);
    EXPECT_EQ(r2.divisor_components(), 3u);
    ASSERT_EQ(r2.attaching.size(), 2u);
    for (std::size_t l = 0; l < 2; ++l) {
        auto a = r2.divisor_points[r2.attaching[l].first];
        auto b = r2.divisor_points[r2.attaching[l].second];
        EXPECT_EQ(a, std::make_pair(static_cast<int>(l), 1));
        EXPECT_EQ(b, std::make_pair(static_cast<int>(l) + 1, -1));
    }
}

TEST(Building, TorusWeight)
{
    EXPECT_EQ(torus_weight(0, 1, 1), std::vector<int>{-1});
    EXPECT_EQ(torus_weight(1, 2, 2), (std::vector<int>{1, -1}));
    EXPECT_EQ(torus_weight(1, 1, 2), (std::vector<int>{0, 0}));
    EXPECT_EQ(torus_weight(0, 3, 3), (std::vector<int>{0, 0, -1}));
    EXPECT_THROW(torus_weight(2, 1, 2), StructuralError);
    // telescoping: weight(a,b) = sum of single steps
    for (int m = 1; m <= 5; ++m)
        for (int a = 0; a <= m; ++a)
            for (int b = a; b <= m; ++b) {
                std::vector<int> sum(m, 0);
                for (int l = a; l < b; ++l) {
                    auto w = torus_weight(l, l + 1, m);
                    for (int k = 0; k < m; ++k) sum[k] += w[k];
                }
                EXPECT_EQ(torus_weight(a, b, m), sum);
            }
}

TEST(Building, JsonDump)
{
    auto j = to_json(build(ex4dim(), 2));
    EXPECT_EQ(j["m"], 2);
    bool saw = false;
    for (auto& row : j["summary"])
        if (row["depth"] == 2) {
            EXPECT_EQ(row["classes"], 4);
            saw = true;
        }
    EXPECT_TRUE(saw);
}
