#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ppsl/error.hpp"
#include "ppsl/network.hpp"

namespace ppsl {

/// Probability table over the spin configurations of an ordered node subset.
///
/// Configuration index c encodes spin +1 at subset position p when bit
/// (k - 1 - p) of c is set, so the first node is the most significant bit and
/// for a pair (A, B) the rows run 00, 01, 10, 11 with 0 meaning spin -1.
class DistributionTable {
public:
    DistributionTable(std::vector<NodeId> nodes, std::vector<double> probs)
        : nodes_(std::move(nodes)), probs_(std::move(probs)) {
        if (nodes_.size() >= 8 * sizeof(std::size_t) || probs_.size() != (std::size_t{1} << nodes_.size()))
            throw Error(Errc::DimensionMismatch, "table of " + std::to_string(nodes_.size()) + " nodes needs " +
                                                     "2^k probabilities, got " + std::to_string(probs_.size()));
        for (double p : probs_)
            if (!(p >= 0.0) || !std::isfinite(p))
                throw Error(Errc::InvalidArgument, "probabilities must be finite and nonnegative");
    }

    /// Scales arbitrary nonnegative weights to sum to one.
    static DistributionTable from_weights(std::vector<NodeId> nodes, std::vector<double> weights) {
        double z = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (!(z > 0.0)) throw Error(Errc::InvalidArgument, "weights sum to zero");
        for (double& w : weights) w /= z;
        return DistributionTable(std::move(nodes), std::move(weights));
    }

    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t config) const { return probs_[config]; }

    double sum() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

    /// Spin (+1/-1) of subset position `pos` in configuration `config`.
    int spin(std::size_t config, std::size_t pos) const {
        return (config >> (nodes_.size() - 1 - pos)) & 1U ? 1 : -1;
    }

    /// Configuration index of a full spin vector restricted to this subset.
    template <typename Spin>
    std::size_t index_of(std::span<const Spin> spins) const {
        std::size_t c = 0;
        for (NodeId v : nodes_) c = (c << 1) | (spins[v] > 0 ? 1U : 0U);
        return c;
    }

    /// "0"/"1" string of a configuration, first node leftmost.
    std::string bits(std::size_t config) const {
        std::string s;
        for (std::size_t p = 0; p < nodes_.size(); ++p) s += spin(config, p) > 0 ? '1' : '0';
        return s;
    }

private:
    std::vector<NodeId> nodes_;
    std::vector<double> probs_;
};

/// Sums out every node not in `subset`; the result follows `subset` order.
inline DistributionTable marginalize(const DistributionTable& table, const std::vector<NodeId>& subset) {
    const auto& nodes = table.nodes();
    const std::size_t k = nodes.size();
    std::vector<std::size_t> shift(subset.size());
    for (std::size_t s = 0; s < subset.size(); ++s) {
        auto it = std::find(nodes.begin(), nodes.end(), subset[s]);
        if (it == nodes.end())
            throw Error(Errc::UnknownNode, "node " + std::to_string(subset[s]) + " is not in the table");
        shift[s] = k - 1 - static_cast<std::size_t>(it - nodes.begin());
    }

    std::vector<double> out(std::size_t{1} << subset.size(), 0.0);
    for (std::size_t c = 0; c < table.size(); ++c) {
        std::size_t m = 0;
        for (std::size_t s : shift) m = (m << 1) | ((c >> s) & 1U);
        out[m] += table[c];
    }
    return DistributionTable(subset, std::move(out));
}

/// Half the L1 distance between two tables over the same node subset.
inline double tv_distance(const DistributionTable& p, const DistributionTable& q) {
    if (p.nodes() != q.nodes())
        throw Error(Errc::SubsetMismatch, "tables are over different node subsets");
    double d = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) d += std::abs(p[c] - q[c]);
    return 0.5 * d;
}

}  // namespace ppsl
