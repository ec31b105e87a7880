#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ppsl/clocked.hpp"
#include "ppsl/network.hpp"
#include "ppsl/random.hpp"
#include "ppsl/trace.hpp"

namespace ppsl {

enum class MtjMode { Continuous, Bipolar };

/// How an autonomous engine advances time.
///
/// FixedStep is the synchronous loop: every node is updated once per dt from
/// the previous step's spins. EventDriven integrates the same dynamics
/// exactly in continuous time (the dt -> 0 limit): between stochastic events
/// every quantity evolves in closed form, so only redraws, flips and
/// threshold crossings are visited. It requires an instantaneous synapse.
enum class Integrator { FixedStep, EventDriven };

inline const char* integrator_name(Integrator i) {
    return i == Integrator::FixedStep ? "fixed-step" : "event-driven";
}

/// Design-1 p-bit: a transistor with response time tau_t compared against a
/// fluctuating MTJ with retention time tau_n0. Times are in ns.
struct D1Params {
    double tau_t = 0.001;
    double tau_n0 = 1.0;
    double tau_s = 0.0;
    /// Defaults to min(tau_t, tau_n0, tau_s if > 0) / 20.
    std::optional<double> dt;
    double i_mtj = 0.0;
    double duration = 1000.0;
    MtjMode mtj_mode = MtjMode::Continuous;
    std::size_t record_stride = 1;
    Integrator integrator = Integrator::FixedStep;

    double shortest_time_constant() const {
        double t = std::min(tau_t, tau_n0);
        if (tau_s > 0.0) t = std::min(t, tau_s);
        return t;
    }

    double step() const { return dt.value_or(shortest_time_constant() / 20.0); }

    std::string describe() const {
        return "d1|tau_t=" + fmt_double(tau_t) + "|tau_n0=" + fmt_double(tau_n0) + "|tau_s=" + fmt_double(tau_s) +
               "|dt=" + fmt_double(step()) + "|i_mtj=" + fmt_double(i_mtj) + "|duration=" + fmt_double(duration) +
               "|mode=" + (mtj_mode == MtjMode::Continuous ? "continuous" : "bipolar") +
               "|stride=" + std::to_string(record_stride) + "|" + integrator_name(integrator);
    }
};

namespace detail {

inline double relax(double x, double goal, double decay) { return goal + (x - goal) * decay; }

inline void check_d1(const D1Params& p) {
    if (!(p.tau_t > 0.0) || !(p.tau_n0 > 0.0) || !(p.tau_s >= 0.0))
        throw Error(Errc::InvalidArgument, "d1 needs tau_t > 0, tau_n0 > 0 and tau_s >= 0");
    if (!(p.step() > 0.0) || !std::isfinite(p.step())) throw Error(Errc::InvalidArgument, "dt must be positive");
    if (!(p.duration > 0.0)) throw Error(Errc::InvalidArgument, "duration must be positive");
    if (p.record_stride == 0) throw Error(Errc::InvalidArgument, "record stride must be positive");
}

}  // namespace detail

/// First-order transistor response toward tanh(input) over one step.
inline double rt_relax(double r_t, double input, double dt, double tau_t) {
    return detail::relax(r_t, std::tanh(input), std::exp(-dt / tau_t));
}

/// First-order synapse relaxation; tau_s = 0 is an instantaneous synapse.
inline double synapse_relax(double current, double target, double dt, double tau_s) {
    if (tau_s == 0.0) return target;
    return detail::relax(current, target, std::exp(-dt / tau_s));
}

/// Redraw value for the MTJ: uniform on [-1, 1] or a fair choice of +-1.
inline double mtj_draw(MtjMode mode, RandomStream& stream) {
    return mode == MtjMode::Continuous ? stream.uniform_pm1() : static_cast<double>(stream.coin());
}

/// One step of the fluctuating MTJ: redrawn with probability 1 - exp(-dt/tau_n),
/// otherwise retained.
inline double mtj_step(double r_mtj, double dt, double tau_n, MtjMode mode, RandomStream& stream) {
    // r_flip = sgn(exp(-dt/tau_n) - rand[0,1]) with sgn(0) = +1; -1 means redraw.
    if (std::exp(-dt / tau_n) - stream.uniform01() >= 0.0) return r_mtj;
    return mtj_draw(mode, stream);
}

/// Retention time under a pinning current.
inline double effective_tau_n(double tau_n0, double r_mtj, double i_mtj) {
    return tau_n0 * std::exp(r_mtj * i_mtj);
}

inline int threshold(double r_t, double r_mtj) { return r_t - r_mtj >= 0.0 ? 1 : -1; }

/// Per-step exponential factors of one Design-1 update at a given dt.
struct D1StepFactors {
    double dt;
    double decay_t;
    double decay_s;  // unused when tau_s = 0
    double keep;     // MTJ retention probability at zero pinning

    D1StepFactors(const D1Params& p, double step)
        : dt(step),
          decay_t(std::exp(-step / p.tau_t)),
          decay_s(p.tau_s > 0.0 ? std::exp(-step / p.tau_s) : 0.0),
          keep(std::exp(-step / p.tau_n0)) {}
};

/// State of one Design-1 p-bit.
struct D1Cell {
    double input = 0.0;
    double r_t = 0.0;
    double r_mtj = 0.0;
    int m = 1;

    /// Stationary state at a constant input: r_t settled at tanh(input) and
    /// the MTJ at a fresh draw.
    static D1Cell equilibrated(double input, MtjMode mode, RandomStream& stream) {
        D1Cell c;
        c.input = input;
        c.r_t = std::tanh(input);
        c.r_mtj = mtj_draw(mode, stream);
        c.m = threshold(c.r_t, c.r_mtj);
        return c;
    }

    /// One synchronous step toward `target` (the synapse output computed from
    /// the previous step's spins): synapse, then transistor, then MTJ, then
    /// the comparator. Same arithmetic as synapse_relax, rt_relax and
    /// mtj_step, with the exponentials hoisted into `f`.
    void step(double target, const D1Params& p, const D1StepFactors& f, RandomStream& stream) {
        input = p.tau_s > 0.0 ? detail::relax(input, target, f.decay_s) : target;
        r_t = detail::relax(r_t, std::tanh(input), f.decay_t);
        const double keep = p.i_mtj != 0.0 ? std::exp(-f.dt / effective_tau_n(p.tau_n0, r_mtj, p.i_mtj)) : f.keep;
        if (keep - stream.uniform01() < 0.0) r_mtj = mtj_draw(p.mtj_mode, stream);
        m = threshold(r_t, r_mtj);
    }
};

namespace detail {

inline SampleTrace d1_fixed_step(const PBitNetwork& net, const D1Params& p, std::vector<RandomStream>& rng,
                                 std::vector<D1Cell>& cells) {
    const std::size_t n = net.size();
    const double dt = p.step();
    const auto steps = static_cast<std::uint64_t>(std::llround(p.duration / dt));

    const D1StepFactors f(p, dt);

    SampleTrace trace(n);
    trace.reserve(steps / p.record_stride);

    std::vector<int> prev(n), m(n);
    for (NodeId v = 0; v < n; ++v) m[v] = cells[v].m;

    for (std::uint64_t k = 1; k <= steps; ++k) {
        prev = m;
        const std::span<const int> view(prev);
        for (NodeId v = 0; v < n; ++v) {
            cells[v].step(synapse_input(net, view, v), p, f, rng[v]);
            m[v] = cells[v].m;
        }
        if (k % p.record_stride == 0) trace.push(static_cast<double>(k) * dt, std::span<const int>(m));
    }
    return trace;
}

// Exact continuous-time integration for tau_s = 0. Each node's r_t relaxes
// toward tanh(I) in closed form; the spin changes only when the MTJ is
// redrawn or when r_t crosses the held MTJ value.
inline SampleTrace d1_event_driven(const PBitNetwork& net, const D1Params& p, std::vector<RandomStream>& rng,
                                   std::vector<D1Cell>& cells) {
    if (p.tau_s != 0.0)
        throw Error(Errc::InvalidArgument, "event-driven integration requires an instantaneous synapse (tau_s = 0)");
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = net.size();
    const double interval = p.step() * static_cast<double>(p.record_stride);
    const auto samples = static_cast<std::uint64_t>(std::llround(p.duration / p.step())) / p.record_stride;

    std::vector<double> x0(n), t_ref(n, 0.0), goal(n), t_redraw(n), t_cross(n, inf);
    std::vector<int> m(n);
    for (NodeId v = 0; v < n; ++v) {
        m[v] = cells[v].m;
        x0[v] = cells[v].r_t;
    }

    auto r_t_at = [&](NodeId v, double t) {
        return goal[v] + (x0[v] - goal[v]) * std::exp(-(t - t_ref[v]) / p.tau_t);
    };
    auto rebase = [&](NodeId v, double t) {
        x0[v] = r_t_at(v, t);
        t_ref[v] = t;
    };
    auto schedule_cross = [&](NodeId v, double t) {
        const double c = cells[v].r_mtj, g = goal[v], x = x0[v];
        t_cross[v] = inf;
        const bool heads_down = m[v] > 0 && g < c;
        const bool heads_up = m[v] < 0 && g > c;
        if (heads_down || heads_up) t_cross[v] = t + p.tau_t * std::log((x - g) / (c - g));
    };
    auto schedule_redraw = [&](NodeId v, double t) {
        t_redraw[v] = t + rng[v].exponential(effective_tau_n(p.tau_n0, cells[v].r_mtj, p.i_mtj));
    };
    auto refresh_goal = [&](NodeId v, double t) {
        rebase(v, t);
        goal[v] = std::tanh(synapse_input(net, std::span<const int>(m), v));
        schedule_cross(v, t);
    };

    for (NodeId v = 0; v < n; ++v) goal[v] = std::tanh(synapse_input(net, std::span<const int>(m), v));
    for (NodeId v = 0; v < n; ++v) {
        schedule_redraw(v, 0.0);
        schedule_cross(v, 0.0);
    }

    SampleTrace trace(n);
    trace.reserve(samples);
    std::uint64_t next_sample = 1;
    auto emit_until = [&](double t) {
        while (next_sample <= samples && static_cast<double>(next_sample) * interval < t) {
            trace.push(static_cast<double>(next_sample) * interval, std::span<const int>(m));
            ++next_sample;
        }
    };

    while (true) {
        NodeId who = 0;
        double t = inf;
        bool redraw = false;
        for (NodeId v = 0; v < n; ++v) {
            if (t_redraw[v] < t) t = t_redraw[v], who = v, redraw = true;
            if (t_cross[v] < t) t = t_cross[v], who = v, redraw = false;
        }
        emit_until(t);
        if (next_sample > samples) break;

        rebase(who, t);
        const int before = m[who];
        if (redraw) {
            cells[who].r_mtj = mtj_draw(p.mtj_mode, rng[who]);
            m[who] = threshold(x0[who], cells[who].r_mtj);
            schedule_redraw(who, t);
        } else {
            x0[who] = cells[who].r_mtj;
            m[who] = -m[who];
        }
        schedule_cross(who, t);
        if (m[who] != before)
            for (NodeId c : net.receivers(who)) refresh_goal(c, t);
    }

    const double t_end = static_cast<double>(samples) * interval;
    for (NodeId v = 0; v < n; ++v) {
        cells[v].r_t = r_t_at(v, t_end);
        cells[v].m = m[v];
    }
    return trace;
}

}  // namespace detail

/// Autonomous Design-1 network. Spins start from a fair coin, r_t from
/// tanh of the resulting input, the MTJ from a fresh draw; the first spin
/// vector is then m = sgn(r_t - r_mtj). Samples are recorded every
/// `record_stride` steps of dt.
inline SampleTrace run_autonomous_d1(const PBitNetwork& net, const D1Params& p, std::uint64_t seed) {
    detail::require_valid(net);
    detail::check_d1(p);
    const std::size_t n = net.size();

    RandomStream root(seed, 0xD1);
    std::vector<RandomStream> rng;
    rng.reserve(n);
    for (NodeId v = 0; v < n; ++v) rng.push_back(root.split(v));

    std::vector<int> coin(n);
    for (NodeId v = 0; v < n; ++v) coin[v] = rng[v].coin();
    std::vector<D1Cell> cells(n);
    for (NodeId v = 0; v < n; ++v) {
        cells[v].input = synapse_input(net, std::span<const int>(coin), v);
        cells[v].r_t = std::tanh(cells[v].input);
        cells[v].r_mtj = mtj_draw(p.mtj_mode, rng[v]);
        cells[v].m = threshold(cells[v].r_t, cells[v].r_mtj);
    }

    std::vector<std::string> warnings;
    if (p.integrator == Integrator::FixedStep && p.step() > p.shortest_time_constant() / 10.0)
        warnings.push_back("UnstableTimestep: dt = " + fmt_double(p.step()) +
                           " exceeds a tenth of the shortest time constant " +
                           fmt_double(p.shortest_time_constant()));

    SampleTrace trace = p.integrator == Integrator::FixedStep ? detail::d1_fixed_step(net, p, rng, cells)
                                                              : detail::d1_event_driven(net, p, rng, cells);
    trace.meta.engine = "d1";
    trace.meta.seed = seed;
    trace.meta.params_digest = digest(network_fingerprint(net) + "|" + p.describe());
    trace.meta.warnings = std::move(warnings);
    return trace;
}

}  // namespace ppsl
