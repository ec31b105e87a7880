#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppsl/error.hpp"
#include "ppsl/network.hpp"

namespace ppsl {

struct TraceMeta {
    std::string engine;
    std::uint64_t seed = 0;
    std::string params_digest;
    std::vector<std::string> warnings;
};

/// Time-stamped spin vectors. Times are in ns for the autonomous engines and
/// in sweeps for the clocked engine; they are strictly increasing.
class SampleTrace {
public:
    explicit SampleTrace(std::size_t n_nodes) : n_(n_nodes) {}

    void reserve(std::size_t samples) {
        times_.reserve(samples);
        spins_.reserve(samples * n_);
    }

    template <typename Spin>
    void push(double t, std::span<const Spin> state) {
        if (state.size() != n_) throw Error(Errc::DimensionMismatch, "state size differs from trace width");
        if (!times_.empty() && !(t > times_.back()))
            throw Error(Errc::InvalidArgument, "trace times must be strictly increasing");
        times_.push_back(t);
        for (Spin s : state) spins_.push_back(s > 0 ? 1 : -1);
    }

    template <typename Spin>
    void push(double t, const std::vector<Spin>& state) {
        push(t, std::span<const Spin>(state));
    }

    std::size_t n_nodes() const noexcept { return n_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    std::span<const double> times() const noexcept { return times_; }
    double time(std::size_t k) const { return times_[k]; }

    std::span<const std::int8_t> state(std::size_t k) const {
        return std::span<const std::int8_t>(spins_).subspan(k * n_, n_);
    }
    int spin(std::size_t k, NodeId node) const { return spins_[k * n_ + node]; }

    /// The sequence of one node's spins.
    std::vector<double> signal(NodeId node) const {
        if (node >= n_) throw Error(Errc::UnknownNode, "node " + std::to_string(node) + " not in trace");
        std::vector<double> x(size());
        for (std::size_t k = 0; k < size(); ++k) x[k] = spins_[k * n_ + node];
        return x;
    }

    TraceMeta meta;

private:
    std::size_t n_;
    std::vector<double> times_;
    std::vector<std::int8_t> spins_;
};

/// 64-bit FNV-1a, printed as 16 hex digits. Used to tag traces with the
/// parameters that produced them.
inline std::string digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Round-trippable text form of a double for digests and files.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string network_fingerprint(const PBitNetwork& net) {
    std::string s = std::to_string(net.size()) + kind_name(net.kind()) + fmt_double(net.gain());
    for (double v : net.biases()) s += "," + fmt_double(v);
    for (double v : net.couplings()) s += "," + fmt_double(v);
    return s;
}

}  // namespace ppsl
