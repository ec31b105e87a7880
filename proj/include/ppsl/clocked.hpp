#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppsl/network.hpp"
#include "ppsl/random.hpp"
#include "ppsl/trace.hpp"

namespace ppsl {

/// Binary stochastic neuron: sgn(rand(-1,1) + tanh(input)), with sgn(0) = +1.
inline int bsn_update(double input, RandomStream& stream) {
    return stream.uniform_pm1() + std::tanh(input) >= 0.0 ? 1 : -1;
}

/// Linear synapse, I0 (h_i + sum_j J_ij m_j).
template <typename Spin>
double synapse_input(const PBitNetwork& net, std::span<const Spin> state, NodeId i) {
    double field = net.bias(i);
    for (const Edge& e : net.inputs(i)) field += e.weight * state[e.from];
    return net.gain() * field;
}

inline double synapse_input(const PBitNetwork& net, const SpinState& state, NodeId i) {
    if (state.size() != net.size()) throw Error(Errc::DimensionMismatch, "state size differs from network");
    return synapse_input(net, std::span<const int>(state), i);
}

struct UpdatePolicy {
    enum class Kind { Topological, FixedOrder, RandomPermutationPerSweep };

    Kind kind = Kind::Topological;
    std::vector<NodeId> order;  // FixedOrder only

    static UpdatePolicy topological() { return {Kind::Topological, {}}; }
    static UpdatePolicy fixed(std::vector<NodeId> order) { return {Kind::FixedOrder, std::move(order)}; }
    static UpdatePolicy random_permutation() { return {Kind::RandomPermutationPerSweep, {}}; }

    std::string describe() const {
        switch (kind) {
        case Kind::Topological: return "topological";
        case Kind::RandomPermutationPerSweep: return "random";
        case Kind::FixedOrder: {
            std::string s = "fixed:";
            for (std::size_t k = 0; k < order.size(); ++k) s += (k ? "," : "") + std::to_string(order[k]);
            return s;
        }
        }
        return "?";
    }
};

struct ClockedConfig {
    std::uint64_t sweeps = 100000;
    /// Defaults to 10% of `sweeps` when unset.
    std::optional<std::uint64_t> burn_in_sweeps;
    UpdatePolicy policy;
    std::uint64_t seed = 1;

    std::uint64_t burn_in() const { return burn_in_sweeps.value_or(sweeps / 10); }
};

namespace detail {

/// Throws if the network cannot be simulated: cycles raise CycleError, any
/// other structural violation raises ValidationError.
inline void require_valid(const PBitNetwork& net) {
    ValidationReport rep = validate_network(net);
    if (rep.ok()) return;
    for (const auto& v : rep.violations)
        if (v.kind == ViolationKind::CycleFound) throw CycleError(v.nodes);
    throw Error(Errc::ValidationError, rep.describe());
}

}  // namespace detail

/// Sequential sampler: each sweep updates every node once, in policy order,
/// each update seeing the latest state of all other nodes. One sample is
/// recorded at the end of each sweep after burn-in; its time is the sweep
/// number.
inline SampleTrace run_clocked(const PBitNetwork& net, const ClockedConfig& cfg) {
    detail::require_valid(net);
    const std::size_t n = net.size();

    if (cfg.sweeps == 0) throw Error(Errc::InvalidArgument, "sweeps must be positive");
    if (cfg.burn_in() >= cfg.sweeps) throw Error(Errc::InvalidArgument, "burn-in must be shorter than the run");

    std::vector<NodeId> order;
    switch (cfg.policy.kind) {
    case UpdatePolicy::Kind::Topological:
        if (net.kind() != NetworkKind::Directed)
            throw Error(Errc::PolicyMismatch, "topological order requested on a symmetric network");
        order = topological_order(net);
        break;
    case UpdatePolicy::Kind::FixedOrder: {
        order = cfg.policy.order;
        std::vector<bool> seen(n, false);
        bool perm = order.size() == n;
        for (NodeId v : order) {
            if (v >= n || seen[v]) perm = false;
            else seen[v] = true;
        }
        if (!perm) throw Error(Errc::InvalidArgument, "fixed order must be a permutation of all nodes");
        break;
    }
    case UpdatePolicy::Kind::RandomPermutationPerSweep:
        order.resize(n);
        for (NodeId v = 0; v < n; ++v) order[v] = v;
        break;
    }

    RandomStream root(cfg.seed, 0);
    std::vector<RandomStream> node_rng;
    node_rng.reserve(n);
    for (NodeId v = 0; v < n; ++v) node_rng.push_back(root.split(v));
    RandomStream perm_rng = root.split(n);

    std::vector<int> m(n);
    for (NodeId v = 0; v < n; ++v) m[v] = node_rng[v].coin();

    SampleTrace trace(n);
    trace.reserve(cfg.sweeps - cfg.burn_in());
    trace.meta.engine = "clocked";
    trace.meta.seed = cfg.seed;
    trace.meta.params_digest = digest(network_fingerprint(net) + "|sweeps=" + std::to_string(cfg.sweeps) +
                                      "|burn=" + std::to_string(cfg.burn_in()) + "|" + cfg.policy.describe());

    const std::span<const int> view(m);
    for (std::uint64_t sweep = 1; sweep <= cfg.sweeps; ++sweep) {
        if (cfg.policy.kind == UpdatePolicy::Kind::RandomPermutationPerSweep)
            for (std::size_t k = n; k > 1; --k) {
                auto pick = static_cast<std::size_t>(perm_rng.uniform01() * static_cast<double>(k));
                std::swap(order[k - 1], order[pick]);
            }
        for (NodeId v : order) m[v] = bsn_update(synapse_input(net, view, v), node_rng[v]);
        if (sweep > cfg.burn_in()) trace.push(static_cast<double>(sweep), view);
    }
    return trace;
}

}  // namespace ppsl
