#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ppsl/analysis.hpp"
#include "ppsl/clocked.hpp"
#include "ppsl/generators.hpp"
#include "ppsl/oracle.hpp"

using namespace ppsl;
using fixtures::directed;
using fixtures::sigmoid_p;
using fixtures::symmetric;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

std::vector<NodeId> all_of(const PBitNetwork& net) {
    std::vector<NodeId> v(net.size());
    for (NodeId k = 0; k < net.size(); ++k) v[k] = k;
    return v;
}

}  // namespace

TEST(BnJoint, SingleNode) {
    const auto t = bn_joint(directed(1, {}));
    EXPECT_DOUBLE_EQ(t[0], 0.5);
    EXPECT_DOUBLE_EQ(t[1], 0.5);
}

TEST(BnJoint, ParentChildByHand) {
    const auto t = bn_joint(fixtures::pair());
    // rows: (-1,-1), (-1,+1), (+1,-1), (+1,+1)
    EXPECT_NEAR(t[3], 0.4404, 1e-4);
    EXPECT_NEAR(t[0], 0.4404, 1e-4);
    EXPECT_NEAR(t[1], 0.0596, 1e-4);
    EXPECT_NEAR(t[2], 0.0596, 1e-4);
    EXPECT_NEAR(t[3], 0.5 * sigmoid_p(1.0), 1e-15);
}

TEST(BnJoint, Normalized) {
    EXPECT_NEAR(bn_joint(gen_fig3_network(0.8, 1).net).sum(), 1.0, 1e-12);
    EXPECT_NEAR(bn_joint(gen_layered_random_bn({3, 4, 4, 3}, 4, 1)).sum(), 1.0, 1e-12);
}

TEST(BnJoint, RootMarginalsAreSigmoids) {
    const auto g = gen_fig3_network(0.8, 4);
    const auto joint = bn_joint(g.net);
    for (NodeId v = 0; v < g.net.size(); ++v) {
        if (!g.net.inputs(v).empty()) continue;
        EXPECT_NEAR(marginalize(joint, {v})[1], sigmoid_p(g.net.gain() * g.net.bias(v)), 1e-12) << v;
    }
}

TEST(BnJoint, Errors) {
    EXPECT_EQ(code_of([] { bn_joint(symmetric(2, {{0, 1, 1.0}})); }), Errc::WrongKind);
    EXPECT_EQ(code_of([] { bn_joint(gen_layered_random_bn({2, 2, 2}, 0, 1), 5); }), Errc::TooLarge);
    EXPECT_EQ(code_of([] { bn_joint(directed(23, {})); }), Errc::TooLarge);
}

TEST(Boltzmann, ZeroCouplingIsUniform) {
    const auto t = boltzmann_joint(symmetric(3, {}));
    for (std::size_t c = 0; c < t.size(); ++c) EXPECT_NEAR(t[c], 1.0 / 8, 1e-15);
}

TEST(Boltzmann, PairCountsEachBondOnce) {
    const auto t = boltzmann_joint(symmetric(2, {{0, 1, 1.0}}, {}, 0.5));
    EXPECT_NEAR(t[0] + t[3], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
    EXPECT_NEAR(t[0] + t[3], 0.7311, 1e-4);
}

TEST(Boltzmann, GlobalFlipSymmetry) {
    const auto t = boltzmann_joint(symmetric(4, {{0, 1, 0.7}, {1, 2, -0.4}, {2, 3, 0.9}, {0, 3, -0.2}, {0, 2, 0.3}}));
    for (std::size_t c = 0; c < t.size(); ++c) EXPECT_NEAR(t[c], t[t.size() - 1 - c], 1e-14);
    EXPECT_NEAR(t.sum(), 1.0, 1e-12);
}

TEST(Boltzmann, Errors) {
    EXPECT_EQ(code_of([] { boltzmann_joint(fixtures::pair()); }), Errc::WrongKind);
    EXPECT_EQ(code_of([] { boltzmann_joint(symmetric(3, {}), 2); }), Errc::TooLarge);
}

TEST(Marginalize, AllNodesIsIdentity) {
    const auto net = fixtures::chain3();
    const auto joint = bn_joint(net);
    const auto same = marginalize(joint, all_of(net));
    for (std::size_t c = 0; c < joint.size(); ++c) EXPECT_DOUBLE_EQ(same[c], joint[c]);
}

TEST(Marginalize, IndependentBiasedNode) {
    const auto t = marginalize(bn_joint(directed(2, {}, {1.0, 0.0})), {0});
    EXPECT_NEAR(t[1], 0.8808, 1e-4);
    EXPECT_NEAR(t.sum(), 1.0, 1e-12);
}

TEST(Marginalize, ReordersSubset) {
    const auto net = directed(2, {{0, 1, 1.0}}, {0.5, 0.0});
    const auto joint = bn_joint(net);
    const auto swapped = marginalize(joint, {1, 0});
    EXPECT_NEAR(swapped[1], joint[2], 1e-15);  // child -1, parent +1
    EXPECT_NEAR(swapped[2], joint[1], 1e-15);
}

TEST(Marginalize, UnknownNode) {
    EXPECT_EQ(code_of([] { marginalize(bn_joint(fixtures::pair()), {0, 5}); }), Errc::UnknownNode);
}

TEST(TvDistance, Examples) {
    const DistributionTable p({0}, {0.5, 0.5}), q({0}, {0.75, 0.25});
    EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
    EXPECT_DOUBLE_EQ(tv_distance(p, q), 0.25);
    EXPECT_DOUBLE_EQ(tv_distance(DistributionTable({0}, {1.0, 0.0}), DistributionTable({0}, {0.0, 1.0})), 1.0);
    EXPECT_EQ(code_of([&] { tv_distance(p, DistributionTable({1}, {0.5, 0.5})); }), Errc::SubsetMismatch);
}

TEST(TvDistance, MetricOnRandomTriples) {
    RandomStream r(99, 0);
    auto random_table = [&] {
        std::vector<double> w(8);
        for (double& x : w) x = r.uniform01();
        return DistributionTable::from_weights({0, 1, 2}, w);
    };
    for (int k = 0; k < 200; ++k) {
        const auto a = random_table(), b = random_table(), c = random_table();
        EXPECT_DOUBLE_EQ(tv_distance(a, b), tv_distance(b, a));
        EXPECT_GT(tv_distance(a, b), 0.0);
        EXPECT_LE(tv_distance(a, c), tv_distance(a, b) + tv_distance(b, c) + 1e-15);
        EXPECT_LE(tv_distance(a, b), 1.0);
    }
}

TEST(Distribution, RejectsBadTables) {
    EXPECT_EQ(code_of([] { DistributionTable({0, 1}, {0.5, 0.5}); }), Errc::DimensionMismatch);
    EXPECT_EQ(code_of([] { DistributionTable({0}, {-0.1, 1.1}); }), Errc::InvalidArgument);
    EXPECT_EQ(DistributionTable({4, 7}, {0.1, 0.2, 0.3, 0.4}).bits(2), "10");
}

TEST(CrossCheck, ClockedTopologicalMatchesChainRule) {
    for (const auto& net : {fixtures::pair(), fixtures::chain3(), gen_layered_random_bn({1, 2, 1}, 0, 3)}) {
        ClockedConfig cfg;
        cfg.sweeps = 1000000;
        cfg.seed = 11;
        const double tv = tv_distance(histogram(run_clocked(net, cfg), all_of(net)), bn_joint(net));
        EXPECT_LE(tv, 0.01) << net.size() << " nodes";
    }
}

TEST(CrossCheck, ClockedSymmetricMatchesBoltzmannForEveryPolicy) {
    const auto net = symmetric(4, {{0, 1, 0.8}, {1, 2, -0.6}, {2, 3, 0.5}, {0, 3, 0.4}}, {0.2, -0.1, 0.0, 0.3});
    const auto exact = boltzmann_joint(net);
    for (auto policy : {UpdatePolicy::fixed({0, 1, 2, 3}), UpdatePolicy::fixed({3, 1, 0, 2}),
                        UpdatePolicy::random_permutation()}) {
        ClockedConfig cfg;
        cfg.sweeps = 1000000;
        cfg.policy = policy;
        cfg.seed = 12;
        EXPECT_LE(tv_distance(histogram(run_clocked(net, cfg), all_of(net)), exact), 0.01) << policy.describe();
    }
}
