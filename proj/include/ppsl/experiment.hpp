#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppsl/analysis.hpp"
#include "ppsl/autonomous_d1.hpp"
#include "ppsl/autonomous_d2.hpp"
#include "ppsl/clocked.hpp"
#include "ppsl/distribution.hpp"
#include "ppsl/io.hpp"
#include "ppsl/oracle.hpp"

namespace ppsl {

enum class EngineKind { Clocked, D1, D2, Oracle };

inline EngineKind parse_engine(const std::string& s) {
    if (s == "clocked") return EngineKind::Clocked;
    if (s == "d1") return EngineKind::D1;
    if (s == "d2") return EngineKind::D2;
    if (s == "oracle") return EngineKind::Oracle;
    throw Error(Errc::InvalidArgument, "unknown engine '" + s + "' (clocked, d1, d2, oracle)");
}

/// Engine settings as they arrive from the command line. Unset values take
/// engine-appropriate defaults.
struct EngineOptions {
    double tau_t = 0.001;
    double tau_n = 1.0;
    double tau_s = 0.0;
    std::optional<double> dt;
    double i_mtj = 0.0;
    MtjMode mtj_mode = MtjMode::Continuous;
    /// Simulated time in ns; defaults to 1e5 tau_n.
    std::optional<double> duration;
    std::uint64_t sweeps = 1000000;
    std::string policy = "topological";
    /// Defaults to the stride giving one sample per tau_n / 10.
    std::optional<std::size_t> stride;
    /// Defaults to event-driven whenever the synapse is instantaneous.
    std::optional<Integrator> integrator;
};

inline MtjMode parse_mtj_mode(const std::string& s) {
    if (s == "continuous") return MtjMode::Continuous;
    if (s == "bipolar") return MtjMode::Bipolar;
    throw Error(Errc::InvalidArgument, "unknown MTJ mode '" + s + "' (continuous, bipolar)");
}

inline std::optional<Integrator> parse_integrator(const std::string& s) {
    if (s == "auto") return std::nullopt;
    if (s == "fixed") return Integrator::FixedStep;
    if (s == "event") return Integrator::EventDriven;
    throw Error(Errc::InvalidArgument, "unknown integrator '" + s + "' (auto, fixed, event)");
}

/// "topological", "random", "reverse" (reversed topological order) or
/// "fixed:<i>,<j>,...".
inline UpdatePolicy parse_policy(const std::string& s, const PBitNetwork& net) {
    if (s == "topological") return UpdatePolicy::topological();
    if (s == "random") return UpdatePolicy::random_permutation();
    if (s == "reverse") {
        auto order = topological_order(net);
        std::reverse(order.begin(), order.end());
        return UpdatePolicy::fixed(std::move(order));
    }
    if (s.rfind("fixed:", 0) == 0) {
        std::vector<NodeId> order;
        for (const auto& tok : detail::split(s.substr(6), ',')) order.push_back(net.resolve(detail::trim(tok)));
        return UpdatePolicy::fixed(std::move(order));
    }
    throw Error(Errc::InvalidArgument, "unknown policy '" + s + "' (topological, random, reverse, fixed:...)");
}

namespace detail {

inline std::size_t auto_stride(const EngineOptions& o, double dt) {
    if (o.stride) return *o.stride;
    return static_cast<std::size_t>(std::max(1LL, std::llround(0.1 * o.tau_n / dt)));
}

inline Integrator pick_integrator(const EngineOptions& o) {
    return o.integrator.value_or(o.tau_s == 0.0 ? Integrator::EventDriven : Integrator::FixedStep);
}

}  // namespace detail

inline D1Params make_d1(const EngineOptions& o) {
    D1Params p;
    p.tau_t = o.tau_t;
    p.tau_n0 = o.tau_n;
    p.tau_s = o.tau_s;
    p.dt = o.dt;
    p.i_mtj = o.i_mtj;
    p.mtj_mode = o.mtj_mode;
    p.duration = o.duration.value_or(1e5 * o.tau_n);
    p.integrator = detail::pick_integrator(o);
    p.record_stride = detail::auto_stride(o, p.step());
    return p;
}

inline D2Params make_d2(const EngineOptions& o, double max_in = 0.0) {
    D2Params p;
    p.tau_n = o.tau_n;
    p.tau_s = o.tau_s;
    p.dt = o.dt;
    p.duration = o.duration.value_or(1e5 * o.tau_n);
    p.integrator = detail::pick_integrator(o);
    p.record_stride = detail::auto_stride(o, p.step(max_in));
    return p;
}

struct RunResult {
    DistributionTable table;
    /// TV distance to the exact distribution, when it is computable.
    std::optional<double> tv_to_oracle;
    std::string params_digest;
    std::vector<std::string> warnings;
    std::optional<SampleTrace> trace;
};

inline std::vector<NodeId> resolve_nodes(const PBitNetwork& net, const std::vector<std::string>& names) {
    std::vector<NodeId> ids;
    for (const auto& n : names) ids.push_back(net.resolve(n));
    if (ids.empty())
        for (NodeId v = 0; v < net.size(); ++v) ids.push_back(v);
    return ids;
}

inline std::optional<DistributionTable> exact_marginal(const PBitNetwork& net, const std::vector<NodeId>& subset) {
    if (net.size() > kEnumerationCap) return std::nullopt;
    return marginalize(exact_joint(net), subset);
}

/// Runs one engine (or the oracle) on a network and histograms `subset`.
inline RunResult run_experiment(const PBitNetwork& net, EngineKind engine, const EngineOptions& o,
                                const std::vector<NodeId>& subset, std::uint64_t seed) {
    if (engine == EngineKind::Oracle) {
        auto table = exact_marginal(net, subset);
        if (!table)
            throw Error(Errc::TooLarge, std::to_string(net.size()) + " nodes exceeds the enumeration cap");
        return {*table, 0.0, digest(network_fingerprint(net) + "|oracle"), {}, std::nullopt};
    }

    SampleTrace trace(net.size());
    switch (engine) {
    case EngineKind::Clocked: {
        ClockedConfig cfg;
        cfg.sweeps = o.sweeps;
        cfg.policy = parse_policy(o.policy, net);
        cfg.seed = seed;
        trace = run_clocked(net, cfg);
        break;
    }
    case EngineKind::D1: trace = run_autonomous_d1(net, make_d1(o), seed); break;
    case EngineKind::D2: trace = run_autonomous_d2(net, make_d2(o, max_input(net)), seed); break;
    case EngineKind::Oracle: break;
    }

    RunResult res{histogram(trace, subset), std::nullopt, trace.meta.params_digest, trace.meta.warnings,
                  std::nullopt};
    if (auto exact = exact_marginal(net, subset)) res.tv_to_oracle = tv_distance(res.table, *exact);
    res.trace = std::move(trace);
    return res;
}

struct SweepPoint {
    double ratio;
    double tv;
};

/// Design-1 runs at tau_t = ratio * tau_n for each ratio, scored by TV distance
/// of the subset histogram from the chain-rule marginal. Every ratio shares
/// the duration and the sampling interval (tau_n / 10 unless a stride is
/// given).
inline std::vector<SweepPoint> sweep_ratio(const PBitNetwork& net, const std::vector<double>& ratios,
                                           const EngineOptions& base, const std::vector<NodeId>& subset,
                                           std::uint64_t seed) {
    if (net.kind() != NetworkKind::Directed)
        throw Error(Errc::WrongKind, "the ratio sweep compares against the chain rule and needs a directed network");
    if (ratios.empty()) return {};
    const DistributionTable exact = marginalize(bn_joint(net), subset);
    std::vector<SweepPoint> out;
    for (double r : ratios) {
        if (!(r > 0.0)) throw Error(Errc::InvalidArgument, "ratios must be positive");
        EngineOptions o = base;
        o.tau_t = r * base.tau_n;
        if (!base.stride && base.dt) o.stride = detail::auto_stride(base, *base.dt);
        const SampleTrace tr = run_autonomous_d1(net, make_d1(o), seed);
        out.push_back({r, tv_distance(histogram(tr, subset), exact)});
    }
    return out;
}

struct Characterization {
    std::vector<SigmoidPoint> sigmoid;
    AutocorrResult autocorr;
    std::optional<StepResponseResult> step;
    std::string step_error;

    double tau_corr() const { return autocorr.fwhm; }
    std::optional<double> tau_step() const {
        return step ? std::optional<double>(step->tau_step) : std::nullopt;
    }
};

/// Single p-bit characterization: sigmoid over I in [-3, 3], zero-input
/// autocorrelation, and the ensemble response to a step from I = -3 to 0.
/// Durations default to 1e5 tau_n per sigmoid point and for the
/// autocorrelation trace; the step window is 10 tau_t (Design 1) or 5 tau_n
/// (Design 2). A step that never settles leaves `step` empty and records why.
inline Characterization characterize(EngineKind engine, const EngineOptions& base, std::uint64_t seed,
                                     std::size_t ensembles = 10000) {
    if (engine != EngineKind::D1 && engine != EngineKind::D2)
        throw Error(Errc::InvalidArgument, "characterization needs an autonomous engine (d1 or d2)");

    EngineOptions o = base;
    o.duration = base.duration.value_or(1e5 * base.tau_n);
    auto engine_for = [&](const EngineOptions& opts, double max_in) -> AutonomousEngine {
        if (engine == EngineKind::D1) return make_d1(opts);
        return make_d2(opts, max_in);
    };

    Characterization ch;
    std::vector<double> inputs;
    for (int k = -6; k <= 6; ++k) inputs.push_back(0.5 * k);
    ch.sigmoid = sigmoid_sweep(engine_for(o, 3.0), inputs, seed);

    EngineOptions ac = o;
    if (!ac.stride) {
        const double dt = engine == EngineKind::D1 ? make_d1(ac).step() : make_d2(ac).step();
        ac.stride = static_cast<std::size_t>(std::max(1LL, std::llround(0.05 * ac.tau_n / dt)));
    }
    const SampleTrace zero = run_engine(engine_for(ac, 0.0), single_node(0.0), stream_key(seed, 1000));
    ch.autocorr = autocorrelation(zero, 0, std::min(3.0 * ac.tau_n, 0.1 * *o.duration));

    EngineOptions st = o;
    st.duration = engine == EngineKind::D1 ? 10.0 * o.tau_t : 5.0 * o.tau_n;
    st.stride = 1;
    try {
        ch.step = step_response(engine_for(st, 3.0), ensembles, -3.0, 0.0, stream_key(seed, 2000));
    } catch (const Error& e) {
        if (e.code() != Errc::NotConverged) throw;
        ch.step_error = e.what();
    }
    return ch;
}

}  // namespace ppsl
