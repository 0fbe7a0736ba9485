#include <gtest/gtest.h>

#include <ncd/fixtures.hpp>
#include <ncd/levelsys.hpp>

#include "oracles.hpp"
#include "random_maptypes.hpp"

using namespace ncd;

namespace {

std::vector<std::string> maptype_fixtures() { return {"neck1a", "neck1b", "neck2", "neck3", "smooth-level1"}; }

ExactComplex q(long n, long d = 1) { return ExactComplex::from_rational(Rational(n, d)); }

// f on level 0, g on level 1, h on level 2; smooth nodes y (s = 2) and z (s = 3)
MapType two_decoupled_levels()
{
    MapType mt;
    mt.levels = {2};
    mt.pairings = {3, 3, 2, 1};
    mt.components = {
        {"f", 0, false, 0, {{"y-", {"V", {{"V", 2, 1, 0, q(2), false}}}}}},
        {"g", 0, false, 1, {{"y+", {"V", {{"V", 2, -1, 1, q(3), false}}}}, {"z-", {"V", {{"V", 3, 1, 1, q(5), false}}}}}},
        {"h", 0, false, 2, {{"z+", {"V", {{"V", 3, -1, 2, q(7), false}}}}, {"x", {"V", {{"V", 3, 1, 2, q(11), false}}}}}},
    };
    mt.nodes = {{"y", "y-", "y+"}, {"z", "z-", "z+"}};
    mt.marked = {"x"};
    return mt;
}

LevelSystem toy(const std::vector<std::vector<long>>& rows, std::size_t alphas)
{
    LevelSystem sys;
    sys.alpha_count = alphas;
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t j = 0; j < cols; ++j) sys.unknowns.push_back(j < alphas ? "a" + std::to_string(j) : "b" + std::to_string(j));
    for (std::size_t j = alphas; j < cols; ++j) sys.betas.emplace_back(0, static_cast<int>(j - alphas + 1));
    sys.matrix = RationalMatrix(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) sys.matrix(i, j) = rows[i][j];
    return sys;
}

} // namespace

TEST(LevelSystem, SmoothNode)
{
    auto sys = build_system(fixtures::smooth_level1());
    EXPECT_EQ(sys.unknowns, (std::vector<std::string>{"alpha(y)", "beta(1)"}));
    ASSERT_EQ(sys.matrix.rows(), 1u);
    EXPECT_EQ(sys.matrix(0, 0), 3);
    EXPECT_EQ(sys.matrix(0, 1), -1);
    EXPECT_EQ(to_string(sys, 0), "3*alpha(y) - beta(1) = 0");
    auto w = feasible_positive(sys);
    ASSERT_TRUE(w);
    EXPECT_EQ(*w, (std::vector<Rational>{1, 3}));
    EXPECT_EQ(torus_dim(sys), 1u);
    EXPECT_TRUE(beta_relations(sys).empty());
}

TEST(LevelSystem, DepthTwoSingleLevel)
{
    std::mt19937 rng(1);
    for (int found = 0; found < 20;) {
        auto r = oracle::random_single_node(rng, false);
        if (r.s.size() != 2) continue;
        ++found;
        auto sys = build_system(r.mt);
        ASSERT_EQ(sys.matrix.rows(), 2u);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_EQ(sys.matrix(i, 0), r.s[i]);
            EXPECT_EQ(sys.matrix(i, 1), -1);
        }
        // positive solutions exist only for equal multiplicities
        EXPECT_EQ(feasible_positive(sys).has_value(), r.s[0] == r.s[1]);
    }
}

TEST(LevelSystem, ToyFeasibility)
{
    auto ok = toy({{3, -1}}, 1);
    EXPECT_EQ(*feasible_positive(ok), (std::vector<Rational>{1, 3}));
    auto conflict = toy({{1, -1}, {2, -1}}, 1);
    EXPECT_FALSE(feasible_positive(conflict));
    auto negative = toy({{1, 1}}, 1);
    EXPECT_FALSE(feasible_positive(negative));
}

TEST(LevelSystem, Neck1a)
{
    auto mt = fixtures::neck1a();
    auto sys = build_system(mt);
    auto w = feasible_positive(sys);
    ASSERT_TRUE(w);
    auto at = [&](const std::string& n) {
        return (*w)[std::find(sys.unknowns.begin(), sys.unknowns.end(), n) - sys.unknowns.begin()];
    };
    EXPECT_EQ(at("alpha(y1)") * 2, at("beta(1)"));
    EXPECT_EQ(at("alpha(y2)") * 2, at("beta(1)"));
    EXPECT_EQ(at("alpha(x)"), at("beta(1)"));
    EXPECT_EQ(torus_dim(sys), 1u);
}

TEST(LevelSystem, Neck1bFollowsTheTranscribedExample)
{
    auto sys = build_system(fixtures::neck1b());
    EXPECT_EQ(sys.equations.size(), 8u);
    // multiplicities 1 and 2 appear as coefficients
    std::set<Rational> coeffs;
    for (std::size_t i = 0; i < sys.matrix.rows(); ++i)
        for (std::size_t j = 0; j < sys.alpha_count; ++j)
            if (sys.matrix(i, j) != 0) coeffs.insert(sys.matrix(i, j));
    EXPECT_EQ(coeffs, (std::set<Rational>{1, 2}));
    auto w = feasible_positive(sys);
    ASSERT_TRUE(w);
    EXPECT_EQ(torus_dim(sys), 1u);
    auto rel = beta_relations(sys);
    ASSERT_EQ(rel.size(), 1u);
    // both levels rescale at the same rate: beta(2) = beta(1)
    EXPECT_EQ(rel[0][0], -rel[0][1]);
    EXPECT_EQ((*w)[sys.beta_index(0, 1)], (*w)[sys.beta_index(0, 2)]);
}

TEST(LevelSystem, Neck2RateRelation)
{
    auto sys = build_system(fixtures::neck2());
    EXPECT_EQ(torus_dim(sys), 1u);
    auto rel = beta_relations(sys);
    ASSERT_EQ(rel.size(), 1u);
    // beta(2,1) = 2 beta(1,1)
    EXPECT_EQ(rel[0][0], -2 * rel[0][1]);
    EXPECT_EQ(relation_string(sys, rel[0]), "-2*beta(1,1) + beta(2,1) = 0");
    auto w = feasible_positive(sys);
    ASSERT_TRUE(w);
    EXPECT_EQ((*w)[sys.beta_index(1, 1)], 2 * (*w)[sys.beta_index(0, 1)]);
}

TEST(LevelSystem, DecoupledLevels)
{
    auto sys = build_system(two_decoupled_levels());
    EXPECT_EQ(torus_dim(sys), 2u);
    EXPECT_TRUE(beta_relations(sys).empty());
    auto classes = asymptotic_classes(two_decoupled_levels());
    EXPECT_EQ(classes.size(), 2u);
}

TEST(LevelSystem, RelationsAreNullspaceRestrictions)
{
    std::vector<MapType> types;
    for (auto& n : maptype_fixtures()) types.push_back(*fixtures::maptype(n));
    types.push_back(two_decoupled_levels());
    std::mt19937 rng(5);
    for (int i = 0; i < 30; ++i) types.push_back(oracle::random_single_node(rng).mt);
    for (auto& mt : types) {
        auto sys = build_system(mt);
        auto rels = beta_relations(sys);
        EXPECT_EQ(rels.size() + torus_dim(sys), sys.betas.size());
        for (auto& v : rational_nullspace(sys.matrix))
            for (auto& r : rels) {
                Rational dot = 0;
                for (std::size_t k = 0; k < r.size(); ++k) dot += r[k] * v[sys.alpha_count + k];
                EXPECT_EQ(dot, 0);
            }
        EXPECT_LE(torus_dim(sys), sys.betas.size());
        // scaling a positive witness keeps it positive and a solution
        if (auto w = feasible_positive(sys)) {
            std::vector<Rational> scaled;
            for (auto& x : *w) scaled.push_back(x * Rational(7, 3));
            EXPECT_EQ(mat_vec(sys.matrix, scaled), std::vector<Rational>(sys.matrix.rows(), Rational(0)));
        }
    }
}

TEST(LevelSystem, MissingLevelIsStructural)
{
    auto mt = fixtures::smooth_level1();
    mt.levels = {0};
    EXPECT_THROW(build_system(mt), StructuralError);
}

TEST(Gluing, WorkedExamples)
{
    GluingProblem gp;
    gp.lambda = {{q(16)}};
    gp.unknowns = {"x"};
    gp.equations = {{"x/V/1", 4, ExactComplex(), {0}, 0, {1}}};
    auto r = solve_gluing(gp);
    ASSERT_TRUE(r.consistent);
    EXPECT_EQ(r.count, 4);
    EXPECT_EQ(r.solutions.size(), 4u);
    for (auto& sol : r.solutions) EXPECT_EQ(sol[0].pow(Rational(4)), q(16));

    gp.lambda = {{q(1)}};
    gp.equations = {{"b1", 2, q(1, 4), {0}, 0, {1}}, {"b2", 3, q(1, 8), {0}, 0, {1}}};
    r = solve_gluing(gp);
    ASSERT_TRUE(r.consistent);
    EXPECT_EQ(r.count, 1);
    EXPECT_EQ(r.solutions[0][0], q(2));

    gp.equations = {{"b1", 1, q(1, 2), {0}, 0, {1}}, {"b2", 1, q(1, 3), {0}, 0, {1}}};
    r = solve_gluing(gp);
    EXPECT_FALSE(r.consistent);
    EXPECT_EQ(r.violated, "b2");
    EXPECT_TRUE(r.solutions.empty());
}

TEST(Gluing, SingleDirectionCountIsS)
{
    std::mt19937 rng(9);
    for (long s = 1; s <= 8; ++s)
        for (int trial = 0; trial < 25; ++trial) {
            GluingProblem gp;
            gp.lambda = {{oracle::random_complex(rng), oracle::random_complex(rng)}};
            gp.unknowns = {"x"};
            gp.equations = {{"x", s, oracle::random_complex(rng), {0}, 0, {1, 2}}};
            auto r = solve_gluing(gp);
            ASSERT_TRUE(r.consistent);
            EXPECT_EQ(r.count, s);
            ASSERT_EQ(r.solutions.size(), static_cast<std::size_t>(s));
            ExactComplex rhs = gp.lambda[0][0] * gp.lambda[0][1] * gp.equations[0].p.inverse();
            std::set<ExactComplex> seen;
            for (auto& x : r.solutions) {
                EXPECT_EQ(x[0].pow(Rational(s)), rhs);
                seen.insert(x[0]);
            }
            EXPECT_EQ(seen.size(), static_cast<std::size_t>(s));
        }
}

TEST(Gluing, TwoDirectionsMatchBruteForce)
{
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> coin(0, 1);
    int nonempty = 0;
    for (long s1 = 1; s1 <= 4; ++s1)
        for (long s2 = 1; s2 <= 4; ++s2)
            for (int trial = 0; trial < 10; ++trial) {
                ExactComplex mu = oracle::random_complex(rng, 3, 6);
                ExactComplex r1 = mu.pow(Rational(s1)), r2 = mu.pow(Rational(s2));
                if (coin(rng)) r2 *= ExactComplex::root_of_unity(Rational(coin(rng) + 1, 6));
                GluingProblem gp;
                gp.lambda = {{ExactComplex()}};
                gp.unknowns = {"x"};
                gp.equations = {{"d1", s1, r1.inverse(), {0}, 0, {1}}, {"d2", s2, r2.inverse(), {0}, 0, {1}}};
                auto r = solve_gluing(gp);
                long expect = oracle::count_common_roots({r1, r2}, {s1, s2});
                ASSERT_GE(expect, 0);
                EXPECT_EQ(r.consistent ? static_cast<long>(r.count) : 0L, expect) << s1 << "," << s2;
                if (expect > 0) ++nonempty;
            }
    EXPECT_GT(nonempty, 40);
}

TEST(Gluing, LogLinearMatrixEqualsLevelSystem)
{
    std::vector<MapType> types;
    for (auto& n : maptype_fixtures()) types.push_back(*fixtures::maptype(n));
    types.push_back(two_decoupled_levels());
    for (auto& mt : types) {
        std::vector<std::vector<ExactComplex>> ones;
        for (int m : mt.levels) ones.emplace_back(static_cast<std::size_t>(m), ExactComplex());
        auto gp = gluing_problem(mt, ones);
        EXPECT_EQ(log_linear_matrix(gp), build_system(mt).matrix);
    }
}

TEST(Gluing, FixtureGluingSolvable)
{
    for (auto& n : maptype_fixtures()) {
        auto mt = *fixtures::maptype(n);
        std::vector<std::vector<ExactComplex>> lam;
        for (int m : mt.levels) lam.emplace_back(static_cast<std::size_t>(m), ExactComplex());
        auto r = solve_gluing(gluing_problem(mt, lam));
        EXPECT_TRUE(r.consistent) << n;
        EXPECT_GE(r.count, 1) << n;
    }
}

TEST(Gluing, TorusActionFromNullspace)
{
    // (mu, lambda) -> (mu * 2^alpha, lambda * 2^beta) preserves solutions for
    // every (alpha, beta) in the nullspace of the level system
    for (auto& n : maptype_fixtures()) {
        auto mt = *fixtures::maptype(n);
        auto sys = build_system(mt);
        std::vector<std::vector<ExactComplex>> lam;
        for (int m : mt.levels) lam.emplace_back(static_cast<std::size_t>(m), ExactComplex());
        auto gp = gluing_problem(mt, lam);
        auto base = solve_gluing(gp);
        ASSERT_TRUE(base.consistent);
        for (auto& v : rational_nullspace(sys.matrix)) {
            auto moved = gp;
            std::size_t k = 0;
            for (auto& row : moved.lambda)
                for (auto& l : row) l *= q(2).pow(v[sys.alpha_count + k++]);
            auto r = solve_gluing(moved);
            ASSERT_TRUE(r.consistent) << n;
            EXPECT_EQ(r.count, base.count);
            std::vector<ExactComplex> mu = base.solutions[0];
            for (std::size_t j = 0; j < mu.size(); ++j) mu[j] *= q(2).pow(v[j]);
            for (auto& e : moved.equations) {
                ExactComplex lhs = e.p;
                for (auto z : e.nodes) lhs *= mu[z].pow(Rational(e.s));
                ExactComplex rhs;
                for (int l : e.levels) rhs *= moved.lambda[e.direction][l - 1];
                EXPECT_EQ(lhs, rhs) << n << " " << e.label;
            }
        }
    }
}

TEST(Gluing, JsonRoundTrip)
{
    auto mt = fixtures::neck2();
    auto gp = gluing_problem(mt, {{q(3)}, {q(5, 7)}});
    auto j = to_json(gp);
    auto back = gluing_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(to_json(back).dump(), j.dump());
    auto flat = nlohmann::json::parse(R"({"lambda": [{"primes": {"2": 4}}], "unknowns": ["x"],
        "equations": [{"label": "x", "s": 4, "p": {"primes": {}}, "nodes": ["x"], "levels": [1]}]})");
    EXPECT_EQ(solve_gluing(gluing_from_json(flat)).count, 4);
    flat["equations"][0]["nodes"] = {"nope"};
    EXPECT_THROW(gluing_from_json(flat), FormatError);
}

TEST(Asymptotics, Classes)
{
    // neck1b: every node and both levels are tied together
    auto c = asymptotic_classes(fixtures::neck1b());
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].members.size(), 7u);
    for (auto& [name, e] : c[0].exponents) EXPECT_GT(e, 0) << name;
    // neck1a: base points share level 1
    EXPECT_EQ(asymptotic_classes(fixtures::neck1a()).size(), 1u);
    auto infeasible = fixtures::smooth_level1();
    infeasible.levels = {0};
    EXPECT_THROW(asymptotic_classes(infeasible), StructuralError);
}
