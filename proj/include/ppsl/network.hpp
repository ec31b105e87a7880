#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppsl/error.hpp"

namespace ppsl {

using NodeId = std::size_t;

enum class NetworkKind { Directed, Symmetric };

inline const char* kind_name(NetworkKind k) {
    return k == NetworkKind::Directed ? "directed" : "symmetric";
}

struct Edge {
    NodeId from;
    double weight;
};

/// A p-bit network: couplings J, biases h and gain I0.
///
/// Couplings are stored row-major; entry (i, j) is the weight J_ij with which
/// node i receives the state of node j. Immutable once constructed.
class PBitNetwork {
public:
    PBitNetwork(std::size_t n_nodes, std::vector<double> couplings, std::vector<double> biases,
                double gain, NetworkKind kind, std::map<std::string, NodeId> labels = {})
        : n_(n_nodes),
          j_(std::move(couplings)),
          h_(std::move(biases)),
          gain_(gain),
          kind_(kind),
          labels_(std::move(labels)) {
        if (n_ == 0) throw Error(Errc::DimensionMismatch, "network must have at least one node");
        if (j_.size() != n_ * n_)
            throw Error(Errc::DimensionMismatch, "coupling matrix has " + std::to_string(j_.size()) +
                                                     " entries, expected " + std::to_string(n_ * n_));
        if (h_.size() != n_)
            throw Error(Errc::DimensionMismatch, "bias vector has " + std::to_string(h_.size()) +
                                                     " entries, expected " + std::to_string(n_));
        for (const auto& [name, id] : labels_)
            if (id >= n_) throw Error(Errc::UnknownNode, "label '" + name + "' points past the last node");

        in_.resize(n_);
        out_.resize(n_);
        for (NodeId i = 0; i < n_; ++i)
            for (NodeId j = 0; j < n_; ++j)
                if (double w = j_[i * n_ + j]; w != 0.0) {
                    in_[i].push_back({j, w});
                    out_[j].push_back(i);
                }
    }

    std::size_t size() const noexcept { return n_; }
    NetworkKind kind() const noexcept { return kind_; }
    double gain() const noexcept { return gain_; }

    double coupling(NodeId i, NodeId j) const { return j_[i * n_ + j]; }
    double bias(NodeId i) const { return h_[i]; }

    std::span<const double> couplings() const noexcept { return j_; }
    std::span<const double> biases() const noexcept { return h_; }

    /// Nonzero incoming couplings of node i, ordered by source index.
    std::span<const Edge> inputs(NodeId i) const { return in_[i]; }
    /// Nodes that receive from node j.
    std::span<const NodeId> receivers(NodeId j) const { return out_[j]; }

    const std::map<std::string, NodeId>& labels() const noexcept { return labels_; }

    /// Resolves a label, or a plain decimal index, to a node id.
    NodeId resolve(const std::string& name) const {
        if (auto it = labels_.find(name); it != labels_.end()) return it->second;
        if (!name.empty() && name.find_first_not_of("0123456789") == std::string::npos) {
            NodeId id = std::stoul(name);
            if (id < n_) return id;
        }
        throw Error(Errc::UnknownNode, "no node named '" + name + "'");
    }

    std::optional<std::string> label_of(NodeId id) const {
        for (const auto& [name, v] : labels_)
            if (v == id) return name;
        return std::nullopt;
    }

    bool operator==(const PBitNetwork& o) const {
        return n_ == o.n_ && j_ == o.j_ && h_ == o.h_ && gain_ == o.gain_ && kind_ == o.kind_ &&
               labels_ == o.labels_;
    }

private:
    std::size_t n_;
    std::vector<double> j_;
    std::vector<double> h_;
    double gain_;
    NetworkKind kind_;
    std::map<std::string, NodeId> labels_;
    std::vector<std::vector<Edge>> in_;
    std::vector<std::vector<NodeId>> out_;
};

/// Spin configuration, entries in {-1, +1}.
using SpinState = std::vector<int>;

enum class ViolationKind {
    NonFinite,
    NonPositiveGain,
    SelfLoop,
    SymmetryBroken,
    BidirectionalEdge,
    CycleFound,
};

inline const char* violation_name(ViolationKind k) {
    switch (k) {
    case ViolationKind::NonFinite: return "NonFinite";
    case ViolationKind::NonPositiveGain: return "NonPositiveGain";
    case ViolationKind::SelfLoop: return "SelfLoop";
    case ViolationKind::SymmetryBroken: return "SymmetryBroken";
    case ViolationKind::BidirectionalEdge: return "BidirectionalEdge";
    case ViolationKind::CycleFound: return "CycleFound";
    }
    return "Unknown";
}

struct Violation {
    ViolationKind kind;
    /// Offending node indices; for CycleFound the cycle in traversal order.
    std::vector<NodeId> nodes;

    std::string describe() const {
        std::string s = violation_name(kind);
        s += "(";
        for (std::size_t k = 0; k < nodes.size(); ++k) s += (k ? "," : "") + std::to_string(nodes[k]);
        return s + ")";
    }
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }

    bool has(ViolationKind k) const {
        for (const auto& v : violations)
            if (v.kind == k) return true;
        return false;
    }

    std::string describe() const {
        if (ok()) return "Ok";
        std::string s;
        for (const auto& v : violations) s += (s.empty() ? "" : "; ") + v.describe();
        return s;
    }
};

namespace detail {

// Iterative three-colour DFS over the "parent -> child" graph (edge j -> i when
// J_ij != 0). Returns one cycle if present.
inline std::optional<std::vector<NodeId>> find_cycle(const PBitNetwork& net) {
    const std::size_t n = net.size();
    enum : char { White, Grey, Black };
    std::vector<char> colour(n, White);
    std::vector<NodeId> parent(n, n);

    for (NodeId root = 0; root < n; ++root) {
        if (colour[root] != White) continue;
        std::vector<std::pair<NodeId, std::size_t>> stack{{root, 0}};
        colour[root] = Grey;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            auto children = net.receivers(v);
            if (next == children.size()) {
                colour[v] = Black;
                stack.pop_back();
                continue;
            }
            NodeId c = children[next++];
            if (colour[c] == Grey) {
                std::vector<NodeId> cycle{c};
                for (NodeId u = v; u != c; u = parent[u]) cycle.push_back(u);
                std::reverse(cycle.begin() + 1, cycle.end());
                return cycle;
            }
            if (colour[c] == White) {
                colour[c] = Grey;
                parent[c] = v;
                stack.emplace_back(c, 0);
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Structural checks. Reports every violation found rather than stopping at
/// the first one.
inline ValidationReport validate_network(const PBitNetwork& net) {
    ValidationReport rep;
    const std::size_t n = net.size();

    if (!std::isfinite(net.gain())) rep.violations.push_back({ViolationKind::NonFinite, {}});
    else if (net.gain() <= 0.0) rep.violations.push_back({ViolationKind::NonPositiveGain, {}});

    for (NodeId i = 0; i < n; ++i) {
        if (!std::isfinite(net.bias(i))) rep.violations.push_back({ViolationKind::NonFinite, {i}});
        for (NodeId j = 0; j < n; ++j)
            if (!std::isfinite(net.coupling(i, j)))
                rep.violations.push_back({ViolationKind::NonFinite, {i, j}});
    }

    for (NodeId i = 0; i < n; ++i)
        if (net.coupling(i, i) != 0.0) rep.violations.push_back({ViolationKind::SelfLoop, {i}});

    bool has_bidirectional = false;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) {
            double a = net.coupling(i, j), b = net.coupling(j, i);
            if (net.kind() == NetworkKind::Symmetric) {
                if (a != b) rep.violations.push_back({ViolationKind::SymmetryBroken, {i, j}});
            } else if (a != 0.0 && b != 0.0) {
                rep.violations.push_back({ViolationKind::BidirectionalEdge, {i, j}});
                has_bidirectional = true;
            }
        }

    // Two-cycles and self-loops are already reported above.
    if (net.kind() == NetworkKind::Directed && !has_bidirectional && !rep.has(ViolationKind::SelfLoop))
        if (auto cycle = detail::find_cycle(net))
            rep.violations.push_back({ViolationKind::CycleFound, std::move(*cycle)});

    return rep;
}

/// Parent-before-child ordering of a directed network (Kahn's algorithm,
/// lowest ready index first, so the result is unique for a given network).
inline std::vector<NodeId> topological_order(const PBitNetwork& net) {
    if (net.kind() != NetworkKind::Directed)
        throw Error(Errc::WrongKind, "topological order requires a directed network");

    const std::size_t n = net.size();
    std::vector<std::size_t> indegree(n);
    for (NodeId i = 0; i < n; ++i) indegree[i] = net.inputs(i).size();

    std::vector<NodeId> ready;  // min-heap on index
    auto cmp = std::greater<NodeId>{};
    for (NodeId i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push_back(i);
    std::make_heap(ready.begin(), ready.end(), cmp);

    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), cmp);
        NodeId v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (NodeId c : net.receivers(v))
            if (--indegree[c] == 0) {
                ready.push_back(c);
                std::push_heap(ready.begin(), ready.end(), cmp);
            }
    }

    if (order.size() != n) {
        auto cycle = detail::find_cycle(net);
        throw CycleError(cycle.value_or(std::vector<NodeId>{}));
    }
    return order;
}

}  // namespace ppsl
