#include <gtest/gtest.h>

#include <random>

#include <ncd/dimension.hpp>
#include <ncd/fixtures.hpp>

using namespace ncd;

namespace {

// direct evaluation over the rationals
Rational reference_dim(long c1A, int dimX, long chi, long ell, long AV)
{
    return Rational(2 * c1A) + Rational(dimX - 6) * Rational(chi) / 2 + Rational(2 * ell) - Rational(2 * AV);
}

// one component with marked contact points of the given multiplicities
MapType with_contacts(const std::vector<long>& s, long c1A)
{
    MapType mt;
    mt.levels = {0};
    Component f{"f", 0, false, 0, {}};
    long av = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::string id = "x" + std::to_string(i);
        f.points.push_back({id, {"V", {{"V", s[i], 1, 0, std::nullopt, false}}}});
        mt.marked.push_back(id);
        av += s[i];
    }
    mt.components = {f};
    mt.pairings = {c1A, av, 2, static_cast<long>(s.size())};
    return mt;
}

MapType two_decoupled_levels()
{
    MapType mt;
    mt.levels = {2};
    mt.pairings = {3, 3, 2, 1};
    mt.components = {
        {"f", 0, false, 0, {{"y-", {"V", {{"V", 2, 1, 0, std::nullopt, false}}}}}},
        {"g", 0, false, 1,
         {{"y+", {"V", {{"V", 2, -1, 1, std::nullopt, false}}}}, {"z-", {"V", {{"V", 3, 1, 1, std::nullopt, false}}}}}},
        {"h", 0, false, 2,
         {{"z+", {"V", {{"V", 3, -1, 2, std::nullopt, false}}}}, {"x", {"V", {{"V", 3, 1, 2, std::nullopt, false}}}}}},
    };
    mt.nodes = {{"y", "y-", "y+"}, {"z", "z-", "z+"}};
    mt.marked = {"x"};
    return mt;
}

} // namespace

TEST(Dimension, Examples)
{
    EXPECT_EQ(expected_dim({3, 4, 2, 1, 3}), 0); // a line meeting a cubic at one triple point
    for (long chi = -6; chi <= 2; chi += 2) EXPECT_EQ(expected_dim({5, 6, chi, 2, 3}), 2 * 5 + 2 * 2 - 2 * 3);
    EXPECT_THROW(expected_dim({0, 5, 2, 0, 0}), StructuralError);
    EXPECT_THROW(expected_dim({0, 0, 2, 0, 0}), StructuralError);
}

TEST(Dimension, RandomAgainstReference)
{
    std::mt19937 rng(21);
    std::uniform_int_distribution<long> c(-20, 20), chi(-10, 4), ell(0, 8), av(0, 12);
    std::uniform_int_distribution<int> half(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        DimensionInput in{c(rng), 2 * half(rng), chi(rng), ell(rng), av(rng)};
        EXPECT_EQ(Rational(expected_dim(in)), reference_dim(in.c1A, in.dimX, in.chi, in.ell, in.AV));
        auto more = in;
        ++more.ell;
        EXPECT_EQ(expected_dim(more), expected_dim(in) + 2);
        auto c2 = in;
        ++c2.c1A;
        EXPECT_EQ(expected_dim(c2), expected_dim(in) + 2);
    }
}

TEST(Dimension, PartitionIndependence)
{
    std::mt19937 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> parts(1, 4), size(1, 5);
        int ell = parts(rng);
        std::vector<long> a(ell), b(ell);
        long total = 0;
        for (auto& x : a) total += (x = size(rng));
        // a different partition of the same total into ell parts
        long rest = total;
        for (int i = 0; i < ell - 1; ++i) {
            long room = rest - (ell - 1 - i);
            b[i] = std::uniform_int_distribution<long>(1, std::max(1L, room))(rng);
            rest -= b[i];
        }
        b[ell - 1] = rest;
        auto ma = with_contacts(a, 3), mb = with_contacts(b, 3);
        EXPECT_TRUE(degree_check(ma));
        EXPECT_TRUE(degree_check(mb));
        EXPECT_EQ(expected_dim(dimension_input(ma)), expected_dim(dimension_input(mb)));
    }
}

TEST(Dimension, NaiveGapAndBalance)
{
    EXPECT_EQ(naive_gap({1}), 0);
    EXPECT_EQ(naive_gap({2}), -2);
    EXPECT_EQ(naive_gap({3, 3}), -8);
    EXPECT_EQ(naive_gap({}), 0);
    EXPECT_EQ(enhanced_balance({}), 0);
    EXPECT_EQ(enhanced_balance({1, 2, 3}), 0);
    EXPECT_THROW(naive_gap({0}), StructuralError);
    std::mt19937 rng(8);
    std::uniform_int_distribution<int> len(0, 8), depth(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> d(len(rng));
        long ref = 0;
        for (auto& k : d) ref += 2 * (1 - (k = depth(rng)));
        EXPECT_EQ(naive_gap(d), ref);
        EXPECT_EQ(enhanced_balance(d), 0);
    }
}

TEST(Dimension, StratumCodimension)
{
    EXPECT_EQ(stratum_codim(fixtures::smooth_level1()), 2);
    EXPECT_EQ(stratum_codim(fixtures::neck1b()), 2);
    EXPECT_EQ(stratum_codim(two_decoupled_levels()), 4);
    for (auto& n : fixtures::names())
        if (auto mt = fixtures::maptype(n)) EXPECT_GE(stratum_codim(*mt), 2) << n;
}

TEST(Dimension, NodeDepths)
{
    EXPECT_EQ(node_depths(fixtures::smooth_level1()), std::vector<int>{1});
    EXPECT_EQ(node_depths(fixtures::neck1b()), std::vector<int>{2});
    EXPECT_EQ(enhanced_balance(node_depths(fixtures::neck2())), 0);
}
