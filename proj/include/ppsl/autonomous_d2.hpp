#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ppsl/autonomous_d1.hpp"
#include "ppsl/clocked.hpp"
#include "ppsl/network.hpp"
#include "ppsl/random.hpp"
#include "ppsl/trace.hpp"

namespace ppsl {

/// Design-2 p-bit: a single fluctuating element whose flip rate is tilted by
/// the input, 1 / (tau_n exp(I m)). Times in ns.
struct D2Params {
    double tau_n = 1.0;
    double tau_s = 0.0;
    /// Defaults to min(tau_n / 20, tau_s / 20 if > 0, tau_n exp(-|I|max) / 10).
    std::optional<double> dt;
    double duration = 1000.0;
    std::size_t record_stride = 1;
    Integrator integrator = Integrator::FixedStep;

    double step(double max_input = 0.0) const {
        if (dt) return *dt;
        double s = std::min(tau_n / 20.0, tau_n * std::exp(-std::abs(max_input)) / 10.0);
        if (tau_s > 0.0) s = std::min(s, tau_s / 20.0);
        return s;
    }

    std::string describe(double max_input = 0.0) const {
        return "d2|tau_n=" + fmt_double(tau_n) + "|tau_s=" + fmt_double(tau_s) + "|dt=" + fmt_double(step(max_input)) +
               "|duration=" + fmt_double(duration) + "|stride=" + std::to_string(record_stride) + "|" +
               integrator_name(integrator);
    }
};

/// Largest |I| any node can see: I0 max_i (|h_i| + sum_j |J_ij|).
inline double max_input(const PBitNetwork& net) {
    double best = 0.0;
    for (NodeId i = 0; i < net.size(); ++i) {
        double s = std::abs(net.bias(i));
        for (const Edge& e : net.inputs(i)) s += std::abs(e.weight);
        best = std::max(best, s);
    }
    return net.gain() * best;
}

/// Probability that a Design-2 p-bit keeps its state over dt.
inline double d2_retention(int m, double input, double dt, double tau_n) {
    return std::exp(-dt / (tau_n * std::exp(input * m)));
}

/// One Design-2 step: keep m with probability exp(-dt / (tau_n exp(I m))),
/// otherwise flip.
inline int d2_step(int m, double input, double dt, double tau_n, RandomStream& stream) {
    return stream.uniform01() < d2_retention(m, input, dt, tau_n) ? m : -m;
}

struct D2Cell {
    double input = 0.0;
    int m = 1;

    /// Stationary state at constant input: P(m = +1) = (1 + tanh I) / 2.
    static D2Cell equilibrated(double input, RandomStream& stream) {
        return {input, bsn_update(input, stream)};
    }

    void step(double target, const D2Params& p, double dt, double decay_s, RandomStream& stream) {
        input = p.tau_s > 0.0 ? detail::relax(input, target, decay_s) : target;
        m = d2_step(m, input, dt, p.tau_n, stream);
    }
};

namespace detail {

inline void check_d2(const D2Params& p, double dt) {
    if (!(p.tau_n > 0.0) || !(p.tau_s >= 0.0))
        throw Error(Errc::InvalidArgument, "d2 needs tau_n > 0 and tau_s >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::InvalidArgument, "dt must be positive");
    if (!(p.duration > 0.0)) throw Error(Errc::InvalidArgument, "duration must be positive");
    if (p.record_stride == 0) throw Error(Errc::InvalidArgument, "record stride must be positive");
}

inline SampleTrace d2_fixed_step(const PBitNetwork& net, const D2Params& p, double dt, std::vector<RandomStream>& rng,
                                 std::vector<D2Cell>& cells) {
    const std::size_t n = net.size();
    const auto steps = static_cast<std::uint64_t>(std::llround(p.duration / dt));
    const double decay_s = p.tau_s > 0.0 ? std::exp(-dt / p.tau_s) : 0.0;

    SampleTrace trace(n);
    trace.reserve(steps / p.record_stride);
    std::vector<int> prev(n), m(n);
    for (NodeId v = 0; v < n; ++v) m[v] = cells[v].m;

    for (std::uint64_t k = 1; k <= steps; ++k) {
        prev = m;
        const std::span<const int> view(prev);
        for (NodeId v = 0; v < n; ++v) {
            cells[v].step(synapse_input(net, view, v), p, dt, decay_s, rng[v]);
            m[v] = cells[v].m;
        }
        if (k % p.record_stride == 0) trace.push(static_cast<double>(k) * dt, std::span<const int>(m));
    }
    return trace;
}

// Continuous-time limit with an instantaneous synapse: node v flips at rate
// 1 / (tau_n exp(I_v m_v)). Each node keeps its own exponential clock, which
// is redrawn whenever its rate changes (valid by memorylessness).
inline SampleTrace d2_event_driven(const PBitNetwork& net, const D2Params& p, double dt,
                                   std::vector<RandomStream>& rng, std::vector<D2Cell>& cells) {
    if (p.tau_s != 0.0)
        throw Error(Errc::InvalidArgument, "event-driven integration requires an instantaneous synapse (tau_s = 0)");
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = net.size();
    const double interval = dt * static_cast<double>(p.record_stride);
    const auto samples = static_cast<std::uint64_t>(std::llround(p.duration / dt)) / p.record_stride;

    std::vector<int> m(n);
    for (NodeId v = 0; v < n; ++v) m[v] = cells[v].m;
    std::vector<double> t_flip(n, inf);
    auto reschedule = [&](NodeId v, double t) {
        const double input = synapse_input(net, std::span<const int>(m), v);
        cells[v].input = input;
        t_flip[v] = t + rng[v].exponential(p.tau_n * std::exp(input * m[v]));
    };
    for (NodeId v = 0; v < n; ++v) reschedule(v, 0.0);

    SampleTrace trace(n);
    trace.reserve(samples);
    std::uint64_t next_sample = 1;

    while (true) {
        NodeId who = 0;
        double t = inf;
        for (NodeId v = 0; v < n; ++v)
            if (t_flip[v] < t) t = t_flip[v], who = v;
        while (next_sample <= samples && static_cast<double>(next_sample) * interval < t) {
            trace.push(static_cast<double>(next_sample) * interval, std::span<const int>(m));
            ++next_sample;
        }
        if (next_sample > samples) break;

        m[who] = -m[who];
        reschedule(who, t);
        for (NodeId c : net.receivers(who)) reschedule(c, t);
    }
    for (NodeId v = 0; v < n; ++v) cells[v].m = m[v];
    return trace;
}

}  // namespace detail

/// Autonomous Design-2 network. Spins start from a fair coin and the synapse
/// from the matching input; see run_autonomous_d1 for the recording rule.
inline SampleTrace run_autonomous_d2(const PBitNetwork& net, const D2Params& p, std::uint64_t seed) {
    detail::require_valid(net);
    const double i_max = max_input(net);
    const double dt = p.step(i_max);
    detail::check_d2(p, dt);
    const std::size_t n = net.size();

    RandomStream root(seed, 0xD2);
    std::vector<RandomStream> rng;
    rng.reserve(n);
    for (NodeId v = 0; v < n; ++v) rng.push_back(root.split(v));

    std::vector<D2Cell> cells(n);
    std::vector<int> coin(n);
    for (NodeId v = 0; v < n; ++v) coin[v] = cells[v].m = rng[v].coin();
    for (NodeId v = 0; v < n; ++v) cells[v].input = synapse_input(net, std::span<const int>(coin), v);

    std::vector<std::string> warnings;
    if (p.integrator == Integrator::FixedStep) {
        if (dt > p.tau_n / 10.0)
            warnings.push_back("UnstableTimestep: dt = " + fmt_double(dt) + " exceeds tau_n / 10");
        if (dt / (p.tau_n * std::exp(-i_max)) >= 0.5)
            warnings.push_back("UnstableTimestep: dt = " + fmt_double(dt) +
                               " is not small against the fastest flip time " +
                               fmt_double(p.tau_n * std::exp(-i_max)));
    }

    SampleTrace trace = p.integrator == Integrator::FixedStep ? detail::d2_fixed_step(net, p, dt, rng, cells)
                                                              : detail::d2_event_driven(net, p, dt, rng, cells);
    trace.meta.engine = "d2";
    trace.meta.seed = seed;
    trace.meta.params_digest = digest(network_fingerprint(net) + "|" + p.describe(i_max));
    trace.meta.warnings = std::move(warnings);
    return trace;
}

}  // namespace ppsl
