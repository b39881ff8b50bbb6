#include <random>

#include <gtest/gtest.h>

#include "keyform/criteria.hpp"
#include "keyform/dualgraph.hpp"
#include "oracles.hpp"

using namespace keyform;

namespace {

const std::vector<PuiseuxPair> kCusp{{3, 5}};

// L~(-1) - (-3) - hub(-2); hub - (-2) - (-3); hub - chain of `chain` vertices of weight -2
DualGraph cusp_graph(std::size_t chain) {
    std::vector<std::pair<std::int64_t, bool>> vs{{-1, true}, {-3, false}, {-2, false}, {-2, false}, {-3, false}};
    std::vector<std::pair<std::size_t, std::size_t>> es{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    std::size_t prev = 2;
    for (std::size_t i = 0; i < chain; ++i) {
        vs.push_back({-2, false});
        es.push_back({prev, vs.size() - 1});
        prev = vs.size() - 1;
    }
    return oracle::make_graph(vs, es);
}

std::size_t components(const DualGraph& g) {
    std::vector<std::size_t> parent(g.vertices.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::size_t c = parent.size();
    for (const auto& [i, j] : g.edges)
        if (find(i) != find(j)) {
            parent[find(i)] = find(j);
            --c;
        }
    return c;
}

}  // namespace

TEST(DualGraph, CuspNoExtraBlowUp) {
    auto g = build_dual_graph(kCusp, 0);
    auto want = oracle::make_graph({{-1, true}, {-3, false}, {-2, false}, {-3, false}}, {{0, 1}, {2, 3}});
    EXPECT_EQ(oracle::canonical_form(g), oracle::canonical_form(want));
    EXPECT_EQ(components(g), 2u);
}

TEST(DualGraph, CuspExtraBlowUps) {
    for (std::int64_t r = 1; r <= 12; ++r)
        EXPECT_EQ(oracle::canonical_form(build_dual_graph(kCusp, r)), oracle::canonical_form(cusp_graph(static_cast<std::size_t>(r - 1))))
            << "r=" << r;
}

TEST(DualGraph, CuspEightBlowUpsLabels) {
    auto g = build_dual_graph(kCusp, 8);
    ASSERT_EQ(g.vertices.size(), 12u);
    EXPECT_EQ(g.edges.size(), 11u);
    auto w = [&](const std::string& label) {
        for (const auto& v : g.vertices)
            if (v.label == label) return v.weight;
        return std::int64_t{0};
    };
    EXPECT_EQ(w("L"), -1);
    EXPECT_EQ(w("E1"), -3);
    EXPECT_EQ(w("E2"), -3);
    EXPECT_EQ(w("E3"), -2);
    EXPECT_EQ(w("E4"), -2);
    for (int i = 5; i <= 11; ++i) EXPECT_EQ(w("E" + std::to_string(i)), -2);
    auto has = [&](std::size_t a, std::size_t b) {
        return std::find(g.edges.begin(), g.edges.end(), std::make_pair(std::min(a, b), std::max(a, b))) != g.edges.end();
    };
    EXPECT_TRUE(has(0, 2));
    EXPECT_TRUE(has(2, 4));
    EXPECT_TRUE(has(4, 3));
    EXPECT_TRUE(has(3, 1));
    EXPECT_TRUE(has(4, 5));
    for (std::size_t i = 5; i < 11; ++i) EXPECT_TRUE(has(i, i + 1));
    EXPECT_EQ(g.estar_attachment, (std::vector<std::string>{"E11"}));
}

TEST(DualGraph, TwoPairs) {
    auto g = build_dual_graph({{3, 5}, {23, 2}}, 1);
    auto want = cusp_graph(7);
    auto& vs = want.vertices;
    std::size_t last_chain = vs.size() - 1;
    vs.push_back({"a", -3, false});
    vs.push_back({"b", -2, false});
    vs.push_back({"c", -2, false});
    want.edges.emplace_back(last_chain, last_chain + 1);
    want.edges.emplace_back(last_chain + 1, last_chain + 2);
    want.edges.emplace_back(last_chain + 2, last_chain + 3);
    EXPECT_EQ(oracle::canonical_form(g), oracle::canonical_form(want));
    EXPECT_EQ(g.vertices.size(), 15u);
    EXPECT_TRUE(is_negative_definite(intersection_matrix(g)));
}

TEST(DualGraph, Errors) {
    EXPECT_THROW(build_dual_graph({{7, 5}}, 0), PreconditionError);
    EXPECT_THROW(build_dual_graph({}, 0), PreconditionError);
    EXPECT_THROW(build_dual_graph(kCusp, -1), PreconditionError);
}

TEST(Export, Dot) {
    auto two = oracle::make_graph({{-1, true}, {-2, false}}, {});
    std::string dot = export_dot(two);
    EXPECT_EQ(dot.rfind("graph G {", 0), 0u);
    EXPECT_EQ(dot.find("--"), std::string::npos);
    EXPECT_NE(dot.find("label=\"w=-2\""), std::string::npos);

    std::string fig = export_dot(build_dual_graph(kCusp, 8));
    std::size_t nodes = 0, edges = 0;
    for (std::size_t p = fig.find("[label="); p != std::string::npos; p = fig.find("[label=", p + 1)) ++nodes;
    for (std::size_t p = fig.find(" -- "); p != std::string::npos; p = fig.find(" -- ", p + 1)) ++edges;
    EXPECT_EQ(nodes, 12u);
    EXPECT_EQ(edges, 11u);
    EXPECT_EQ(fig, export_dot(build_dual_graph(kCusp, 8)));
}

TEST(Export, JsonErrors) {
    EXPECT_THROW(parse_graph_json("{"), ParseError);
    EXPECT_THROW(parse_graph_json(R"({"vertices":[],"edges":[[0,1]],"estar_attachment":[]})"), ParseError);
    EXPECT_THROW(parse_graph_json(R"({"vertices":[]})"), ParseError);
}

// ---- properties, fixed seed ----------------------------------------------------------------------

class DualGraphProperty : public ::testing::Test {
protected:
    std::mt19937_64 rng{0x5eed0006};
};

TEST_F(DualGraphProperty, AgreesWithChartComputation) {
    for (int i = 0; i < 120; ++i) {
        auto pairs = oracle::random_pairs(rng, 2);
        std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, 30)(rng);
        std::vector<Rat> coeffs;
        for (std::size_t k = 0; k < pairs.size(); ++k) coeffs.push_back(oracle::random_coeff(rng));
        EXPECT_EQ(build_dual_graph(pairs, r), oracle::chart_dual_graph(pairs, r, coeffs)) << to_string(pairs) << " r=" << r;
    }
}

TEST_F(DualGraphProperty, JsonRoundTrip) {
    for (int i = 0; i < 120; ++i) {
        auto pairs = oracle::random_pairs(rng, 3);
        std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, 20)(rng);
        auto g = build_dual_graph(pairs, r);
        EXPECT_EQ(parse_graph_json(export_json(g)), g);
    }
}

TEST_F(DualGraphProperty, ShapeInvariants) {
    for (int i = 0; i < 150; ++i) {
        auto pairs = oracle::random_pairs(rng, 3);
        std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, 20)(rng);
        auto g = build_dual_graph(pairs, r);
        std::size_t ls = 0;
        for (const auto& v : g.vertices) {
            EXPECT_LE(v.weight, -1);
            ls += v.is_ltilde;
        }
        EXPECT_EQ(ls, 1u);
        // with E* the graph is a tree
        EXPECT_EQ(g.edges.size() + g.estar_attachment.size(), g.vertices.size());
        EXPECT_LE(components(g), 2u);
        if (r > 0) {
            EXPECT_EQ(components(g), 1u) << to_string(pairs) << " r=" << r;
        }
        if (r > 0) {
            EXPECT_EQ(g.estar_attachment.size(), 1u);
        }
    }
}

TEST(DualGraphSweep, SinglePairVertexCount) {
    for (std::int64_t p = 2; p <= 7; ++p)
        for (std::int64_t q = 1; q < p; ++q) {
            if (std::gcd(p, q) != 1) continue;
            for (std::int64_t r = 0; r <= p * (p - q) + 2; ++r)
                EXPECT_EQ(static_cast<std::int64_t>(build_dual_graph({{q, p}}, r).vertices.size()), oracle::quotient_sum(p, q) + r)
                    << q << "/" << p << " r=" << r;
        }
}

TEST(DualGraphSweep, GrauertCoherence) {
    for (std::int64_t p = 2; p <= 7; ++p)
        for (std::int64_t q = 1; q < p; ++q) {
            if (std::gcd(p, q) != 1) continue;
            for (std::int64_t r = 0; r <= p * (p - q) + 3; ++r) {
                std::vector<PuiseuxPair> pairs{{q, p}};
                EXPECT_EQ(is_negative_definite(intersection_matrix(build_dual_graph(pairs, r))), is_contractible(pairs, r))
                    << q << "/" << p << " r=" << r;
            }
        }
    std::mt19937_64 rng(0x5eed0007);
    for (int i = 0; i < 150; ++i) {
        auto pairs = oracle::random_pairs(rng, 2);
        std::int64_t r = std::uniform_int_distribution<std::int64_t>(0, std::max<std::int64_t>(oracle::max_contractible_r(pairs) + 3, 3))(rng);
        EXPECT_EQ(is_negative_definite(intersection_matrix(build_dual_graph(pairs, r))), is_contractible(pairs, r))
            << to_string(pairs) << " r=" << r;
    }
}

TEST(NegativeDefinite, SmallMatrices) {
    EXPECT_TRUE(is_negative_definite({{-2, 1}, {1, -2}}));
    EXPECT_FALSE(is_negative_definite({{-1, 1}, {1, -1}}));
    EXPECT_FALSE(is_negative_definite({{-1, 1}, {1, -1}}));
    EXPECT_TRUE(is_negative_definite({{-2, 1, 0}, {1, -2, 1}, {0, 1, -2}}));
    EXPECT_FALSE(is_negative_definite({{1}}));
}
