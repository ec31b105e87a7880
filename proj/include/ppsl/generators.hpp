#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ppsl/network.hpp"
#include "ppsl/random.hpp"

namespace ppsl {

/// Network with an anti-correlating relay: A drives M1 and M1 drives B, each
/// through parallel two-edge branches whose weight product is -r^2. A and M1
/// (and M1 and B) end up anti-correlated, so A and B are positively
/// correlated. The other nodes are distractors with random couplings.
struct RelayNetwork {
    PBitNetwork net;
    NodeId a;
    NodeId m1;
    NodeId b;
};

namespace detail {

inline double uniform_weight(RandomStream& rng) {
    double w = 0.0;
    while (w == 0.0) w = rng.uniform_pm1();
    return w;
}

}  // namespace detail

/// 19-node relay network. Node order is topological. Chain nodes (A, the
/// branch relays, M1, B) only receive from the chain; each distractor
/// receives from two random earlier nodes with weights and bias drawn
/// uniformly from [-1, 1].
inline RelayNetwork gen_fig3_network(double r, std::uint64_t seed, double gain = 1.0) {
    constexpr std::size_t n = 19;
    constexpr std::size_t branches = 3;
    r = std::clamp(r, -1.0, 1.0);

    // Index layout; 'D' marks distractors.
    //  0 A | 1-2 D (roots) | 3-5 X | 6 D | 7 M1 | 8 D | 9-11 Y | 12 D | 13 B | 14-18 D
    const NodeId a = 0, m1 = 7, b = 13;
    const NodeId x0 = 3, y0 = 9;

    std::vector<double> j(n * n, 0.0);
    std::vector<double> h(n, 0.0);
    auto set = [&](NodeId to, NodeId from, double w) { j[to * n + from] = w; };

    for (std::size_t k = 0; k < branches; ++k) {
        set(x0 + k, a, r);
        set(m1, x0 + k, -r);
        set(y0 + k, m1, r);
        set(b, y0 + k, -r);
    }

    std::vector<bool> chain(n, false);
    chain[a] = chain[m1] = chain[b] = true;
    for (std::size_t k = 0; k < branches; ++k) chain[x0 + k] = chain[y0 + k] = true;

    RandomStream rng(seed, 0x46494733);  // "FIG3"
    for (NodeId d = 0; d < n; ++d) {
        if (chain[d]) continue;
        h[d] = rng.uniform_pm1();
        if (d < 3) continue;  // distractor roots
        std::vector<NodeId> earlier(d);
        std::iota(earlier.begin(), earlier.end(), NodeId{0});
        for (int e = 0; e < 2; ++e) {
            auto pick = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(earlier.size()));
            NodeId from = earlier[pick];
            earlier.erase(earlier.begin() + static_cast<std::ptrdiff_t>(pick));
            set(d, from, detail::uniform_weight(rng));
        }
    }

    PBitNetwork net(n, std::move(j), std::move(h), gain, NetworkKind::Directed,
                    {{"A", a}, {"M1", m1}, {"B", b}});
    return {std::move(net), a, m1, b};
}

/// Layered random Bayesian network. Consecutive layers are fully connected;
/// `extra_skip_edges` additional edges jump over at least one layer. All
/// weights are uniform in [-1, 1] and biases are zero. Nodes are numbered
/// layer by layer; "A" labels the first node, "B" the last.
inline PBitNetwork gen_layered_random_bn(const std::vector<std::size_t>& layer_sizes,
                                         std::size_t extra_skip_edges, std::uint64_t seed,
                                         double gain = 1.0) {
    if (layer_sizes.size() < 2)
        throw Error(Errc::InvalidArgument, "layered network needs at least two layers");
    for (std::size_t s : layer_sizes)
        if (s == 0) throw Error(Errc::InvalidArgument, "layer sizes must be positive");

    std::vector<std::size_t> start(layer_sizes.size() + 1, 0);
    for (std::size_t l = 0; l < layer_sizes.size(); ++l) start[l + 1] = start[l] + layer_sizes[l];
    const std::size_t n = start.back();

    std::vector<double> j(n * n, 0.0);
    RandomStream rng(seed, 0x4C415952);  // "LAYR"

    for (std::size_t l = 1; l < layer_sizes.size(); ++l)
        for (NodeId i = start[l]; i < start[l + 1]; ++i)
            for (NodeId p = start[l - 1]; p < start[l]; ++p) j[i * n + p] = detail::uniform_weight(rng);

    std::vector<std::pair<NodeId, NodeId>> skip_candidates;  // (to, from)
    for (std::size_t l = 2; l < layer_sizes.size(); ++l)
        for (NodeId i = start[l]; i < start[l + 1]; ++i)
            for (NodeId p = 0; p < start[l - 1]; ++p) skip_candidates.emplace_back(i, p);

    std::size_t skips = std::min(extra_skip_edges, skip_candidates.size());
    for (std::size_t s = 0; s < skips; ++s) {
        // Partial Fisher-Yates: choose without replacement.
        std::size_t pick = s + static_cast<std::size_t>(rng.uniform01() *
                                                         static_cast<double>(skip_candidates.size() - s));
        std::swap(skip_candidates[s], skip_candidates[pick]);
        auto [to, from] = skip_candidates[s];
        j[to * n + from] = detail::uniform_weight(rng);
    }

    return PBitNetwork(n, std::move(j), std::vector<double>(n, 0.0), gain, NetworkKind::Directed,
                       {{"A", 0}, {"B", n - 1}});
}

}  // namespace ppsl
