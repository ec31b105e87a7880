#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <set>

#include "fixtures.hpp"
#include "ppsl/generators.hpp"
#include "ppsl/network.hpp"
#include "ppsl/oracle.hpp"
#include "ppsl/random.hpp"

using namespace ppsl;
using fixtures::directed;
using fixtures::symmetric;

namespace {

// Recursive three-colour DFS, kept separate from the library's iterative one.
bool has_cycle_dfs(const PBitNetwork& net) {
    std::vector<int> colour(net.size(), 0);
    std::function<bool(NodeId)> visit = [&](NodeId v) {
        colour[v] = 1;
        for (NodeId c = 0; c < net.size(); ++c) {
            if (net.coupling(c, v) == 0.0) continue;
            if (colour[c] == 1) return true;
            if (colour[c] == 0 && visit(c)) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (NodeId v = 0; v < net.size(); ++v)
        if (colour[v] == 0 && visit(v)) return true;
    return false;
}

void expect_parents_first(const PBitNetwork& net, const std::vector<NodeId>& order) {
    ASSERT_EQ(order.size(), net.size());
    std::vector<std::size_t> pos(net.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    for (NodeId i = 0; i < net.size(); ++i)
        for (const Edge& e : net.inputs(i)) EXPECT_LT(pos[e.from], pos[i]) << e.from << " -> " << i;
}

}  // namespace

TEST(Network, ShapeMismatchThrows) {
    EXPECT_THROW(PBitNetwork(2, {0.0, 0.0, 0.0}, {0.0, 0.0}, 1.0, NetworkKind::Directed), Error);
    try {
        PBitNetwork(2, std::vector<double>(4, 0.0), {0.0}, 1.0, NetworkKind::Directed);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DimensionMismatch);
    }
}

TEST(Network, ResolvesLabelsAndIndices) {
    PBitNetwork net(3, std::vector<double>(9, 0.0), {0, 0, 0}, 1.0, NetworkKind::Directed, {{"A", 2}});
    EXPECT_EQ(net.resolve("A"), 2u);
    EXPECT_EQ(net.resolve("1"), 1u);
    EXPECT_THROW(net.resolve("Z"), Error);
    EXPECT_THROW(net.resolve("3"), Error);
    EXPECT_EQ(net.label_of(2).value(), "A");
}

TEST(Validate, SymmetricPairIsOk) {
    EXPECT_TRUE(validate_network(symmetric(2, {{0, 1, 0.5}})).ok());
}

TEST(Validate, BidirectionalDirectedEdge) {
    const auto rep = validate_network(directed(2, {{1, 0, 0.3}, {0, 1, 0.2}}));
    ASSERT_TRUE(rep.has(ViolationKind::BidirectionalEdge));
    const auto& v = rep.violations.front();
    EXPECT_EQ(v.kind, ViolationKind::BidirectionalEdge);
    EXPECT_EQ(std::set<NodeId>(v.nodes.begin(), v.nodes.end()), (std::set<NodeId>{0, 1}));
}

TEST(Validate, Fig3NetworkIsAcyclic) {
    const auto g = gen_fig3_network(0.8, 1);
    EXPECT_TRUE(validate_network(g.net).ok());
    EXPECT_FALSE(has_cycle_dfs(g.net));
}

TEST(Validate, ReportsEachViolationKind) {
    std::vector<double> j(4, 0.0);
    j[0] = 1.0;  // self loop on 0
    EXPECT_TRUE(validate_network(PBitNetwork(2, j, {0, 0}, 1.0, NetworkKind::Directed)).has(ViolationKind::SelfLoop));

    std::vector<double> asym = {0.0, 0.5, 0.4, 0.0};
    EXPECT_TRUE(validate_network(PBitNetwork(2, asym, {0, 0}, 1.0, NetworkKind::Symmetric))
                    .has(ViolationKind::SymmetryBroken));

    EXPECT_TRUE(validate_network(PBitNetwork(1, {0.0}, {NAN}, 1.0, NetworkKind::Directed))
                    .has(ViolationKind::NonFinite));
    EXPECT_TRUE(validate_network(PBitNetwork(1, {0.0}, {0.0}, 0.0, NetworkKind::Directed))
                    .has(ViolationKind::NonPositiveGain));

    const auto rep = validate_network(directed(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}));
    ASSERT_TRUE(rep.has(ViolationKind::CycleFound));
    EXPECT_FALSE(rep.describe().empty());
}

TEST(TopologicalOrder, Chain) {
    EXPECT_EQ(topological_order(fixtures::chain3()), (std::vector<NodeId>{0, 1, 2}));
}

TEST(TopologicalOrder, Diamond) {
    // A=0, B=1, C=2, D=3
    const auto order = topological_order(directed(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}));
    EXPECT_EQ(order.front(), 0u);
    EXPECT_EQ(order.back(), 3u);
}

TEST(TopologicalOrder, ThreeCycleHasWitness) {
    const auto net = directed(3, {{1, 0, 1.0}, {2, 1, 1.0}, {0, 2, 1.0}});
    try {
        topological_order(net);
        FAIL();
    } catch (const CycleError& e) {
        EXPECT_EQ(e.code(), Errc::CycleDetected);
        const auto& w = e.witness();
        ASSERT_EQ(w.size(), 3u);
        for (std::size_t k = 0; k < w.size(); ++k)
            EXPECT_NE(net.coupling(w[(k + 1) % w.size()], w[k]), 0.0);
    }
}

TEST(TopologicalOrder, SymmetricIsWrongKind) {
    try {
        topological_order(symmetric(2, {{0, 1, 1.0}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::WrongKind);
    }
}

TEST(Fig3, RelayCorrelations) {
    const auto g = gen_fig3_network(0.8, 1);
    EXPECT_EQ(g.net.size(), 19u);
    const auto joint = bn_joint(g.net);
    const auto ab = marginalize(joint, {g.a, g.b});
    const auto am = marginalize(joint, {g.a, g.m1});
    EXPECT_GT(ab[0] + ab[3], 0.5);
    EXPECT_LT(am[0] + am[3], 0.5);
}

TEST(Fig3, BranchProductsAreNegative) {
    const auto g = gen_fig3_network(0.8, 3);
    int branches = 0;
    for (const Edge& in : g.net.inputs(g.m1)) {
        EXPECT_LT(g.net.coupling(in.from, g.a) * in.weight, 0.0);
        ++branches;
    }
    EXPECT_GE(branches, 2);
    for (NodeId i = 0; i < g.net.size(); ++i)
        for (const Edge& e : g.net.inputs(i)) EXPECT_LE(std::abs(e.weight), 1.0);
}

TEST(Fig3, ZeroCouplingDecouplesEnds) {
    const auto g = gen_fig3_network(0.0, 1);
    const auto ab = marginalize(bn_joint(g.net), {g.a, g.b});
    EXPECT_NEAR(ab[0] + ab[3], 0.5, 1e-12);
}

TEST(Fig3, SeedDeterminism) {
    EXPECT_EQ(gen_fig3_network(0.8, 42).net, gen_fig3_network(0.8, 42).net);
    EXPECT_FALSE(gen_fig3_network(0.8, 42).net == gen_fig3_network(0.8, 43).net);
}

TEST(Layered, SmallShapeIsValid) {
    const auto net = gen_layered_random_bn({1, 2, 2, 1}, 0, 5);
    EXPECT_TRUE(validate_network(net).ok());
    EXPECT_EQ(net.size(), 6u);
    for (NodeId i = 0; i < net.size(); ++i)
        for (const Edge& e : net.inputs(i)) EXPECT_LE(std::abs(e.weight), 1.0);
}

TEST(Layered, FourteenNodesWithSkips) {
    const auto net = gen_layered_random_bn({3, 4, 4, 3}, 4, 2);
    EXPECT_EQ(net.size(), 14u);
    EXPECT_TRUE(validate_network(net).ok());
    std::size_t edges = 0;
    for (NodeId i = 0; i < net.size(); ++i) edges += net.inputs(i).size();
    EXPECT_EQ(edges, 3u * 4 + 4 * 4 + 4 * 3 + 4);
}

TEST(Layered, RejectsBadShapes) {
    EXPECT_THROW(gen_layered_random_bn({3}, 0, 1), Error);
    EXPECT_THROW(gen_layered_random_bn({2, 0, 1}, 0, 1), Error);
}

TEST(Layered, PropertyValidAndOrderedOverSeeds) {
    RandomStream shapes(2024, 0);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto layers = 2 + static_cast<std::size_t>(shapes.uniform01() * 4);
        std::vector<std::size_t> sizes;
        for (std::size_t l = 0; l < layers; ++l) sizes.push_back(1 + static_cast<std::size_t>(shapes.uniform01() * 4));
        const auto skips = static_cast<std::size_t>(shapes.uniform01() * 6);
        const auto net = gen_layered_random_bn(sizes, skips, seed);
        EXPECT_TRUE(validate_network(net).ok()) << "seed " << seed;
        EXPECT_FALSE(has_cycle_dfs(net));
        expect_parents_first(net, topological_order(net));
    }
}

TEST(TopologicalOrder, ParentsPrecedeChildrenOnFig3) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = gen_fig3_network(0.8, seed);
        expect_parents_first(g.net, topological_order(g.net));
    }
}

TEST(RandomStream, ReproducibleAndIndependent) {
    RandomStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    bool differs_c = false, differs_d = false;
    for (int k = 0; k < 100; ++k) {
        const auto x = a.bits();
        EXPECT_EQ(x, b.bits());
        differs_c |= x != c.bits();
        differs_d |= x != d.bits();
    }
    EXPECT_TRUE(differs_c);
    EXPECT_TRUE(differs_d);

    RandomStream p(7, 3);
    RandomStream s1 = p.split(0), s2 = p.split(0), s3 = p.split(1);
    EXPECT_EQ(s1.bits(), s2.bits());
    EXPECT_NE(RandomStream(7, 3).split(0).bits(), s3.bits());
}

TEST(RandomStream, UniformMoments) {
    RandomStream r(1, 0);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = r.uniform_pm1();
        ASSERT_GE(u, -1.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.01);
}
