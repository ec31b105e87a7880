#pragma once

#include <cmath>
#include <tuple>
#include <vector>

#include "ppsl/network.hpp"

namespace fixtures {

using ppsl::NetworkKind;
using ppsl::PBitNetwork;

inline PBitNetwork directed(std::size_t n, std::vector<std::tuple<std::size_t, std::size_t, double>> edges,
                            std::vector<double> h = {}, double gain = 1.0) {
    std::vector<double> j(n * n, 0.0);
    for (auto [from, to, w] : edges) j[to * n + from] = w;
    if (h.empty()) h.assign(n, 0.0);
    return PBitNetwork(n, std::move(j), std::move(h), gain, NetworkKind::Directed);
}

inline PBitNetwork symmetric(std::size_t n, std::vector<std::tuple<std::size_t, std::size_t, double>> edges,
                             std::vector<double> h = {}, double gain = 1.0) {
    std::vector<double> j(n * n, 0.0);
    for (auto [a, b, w] : edges) j[a * n + b] = j[b * n + a] = w;
    if (h.empty()) h.assign(n, 0.0);
    return PBitNetwork(n, std::move(j), std::move(h), gain, NetworkKind::Symmetric);
}

/// parent 0 -> child 1 with J = 1, I0 = 1.
inline PBitNetwork pair() { return directed(2, {{0, 1, 1.0}}); }

/// 0 -> 1 -> 2 with J = 1, I0 = 1.
inline PBitNetwork chain3() { return directed(3, {{0, 1, 1.0}, {1, 2, 1.0}}); }

inline double sigmoid_p(double input) { return 0.5 * (1.0 + std::tanh(input)); }

}  // namespace fixtures
