#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "ppsl/distribution.hpp"
#include "ppsl/network.hpp"

namespace ppsl {

/// Largest network the enumeration oracles accept by default (4M configurations).
inline constexpr std::size_t kEnumerationCap = 22;

namespace detail {

inline void check_enumerable(const PBitNetwork& net, NetworkKind want, std::size_t cap) {
    if (net.kind() != want)
        throw Error(Errc::WrongKind, std::string("oracle needs a ") + kind_name(want) + " network");
    if (net.size() > cap)
        throw Error(Errc::TooLarge, std::to_string(net.size()) + " nodes exceeds the enumeration cap of " +
                                        std::to_string(cap));
}

inline std::vector<NodeId> all_nodes(const PBitNetwork& net) {
    std::vector<NodeId> v(net.size());
    std::iota(v.begin(), v.end(), NodeId{0});
    return v;
}

inline void decode(std::size_t config, std::vector<int>& m) {
    const std::size_t n = m.size();
    for (std::size_t v = 0; v < n; ++v) m[v] = (config >> (n - 1 - v)) & 1U ? 1 : -1;
}

}  // namespace detail

/// Chain-rule joint of a directed network: the product over nodes of
/// P(m_i | parents) with P(m_i = +1 | parents) = (1 + tanh I_i) / 2 and
/// I_i = I0 (h_i + sum_j J_ij m_j).
inline DistributionTable bn_joint(const PBitNetwork& net, std::size_t cap = kEnumerationCap) {
    detail::check_enumerable(net, NetworkKind::Directed, cap);
    const std::size_t n = net.size();
    std::vector<double> probs(std::size_t{1} << n);
    std::vector<int> m(n);
    for (std::size_t c = 0; c < probs.size(); ++c) {
        detail::decode(c, m);
        double p = 1.0;
        for (NodeId i = 0; i < n; ++i) {
            double field = net.bias(i);
            for (const Edge& e : net.inputs(i)) field += e.weight * m[e.from];
            p *= 0.5 * (1.0 + m[i] * std::tanh(net.gain() * field));
        }
        probs[c] = p;
    }
    return DistributionTable(detail::all_nodes(net), std::move(probs));
}

/// Equilibrium law of a symmetric network,
/// P(m) proportional to exp(I0 (sum_i h_i m_i + sum_{i<j} J_ij m_i m_j)).
inline DistributionTable boltzmann_joint(const PBitNetwork& net, std::size_t cap = kEnumerationCap) {
    detail::check_enumerable(net, NetworkKind::Symmetric, cap);
    const std::size_t n = net.size();
    std::vector<double> logw(std::size_t{1} << n);
    std::vector<int> m(n);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < logw.size(); ++c) {
        detail::decode(c, m);
        double e = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            e += net.bias(i) * m[i];
            for (const Edge& edge : net.inputs(i))
                if (edge.from > i) e += edge.weight * m[i] * m[edge.from];
        }
        logw[c] = net.gain() * e;
        top = std::max(top, logw[c]);
    }
    for (double& w : logw) w = std::exp(w - top);
    return DistributionTable::from_weights(detail::all_nodes(net), std::move(logw));
}

/// The exact distribution appropriate to the network kind.
inline DistributionTable exact_joint(const PBitNetwork& net, std::size_t cap = kEnumerationCap) {
    return net.kind() == NetworkKind::Directed ? bn_joint(net, cap) : boltzmann_joint(net, cap);
}

}  // namespace ppsl
