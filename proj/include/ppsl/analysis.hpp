#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <type_traits>
#include <variant>
#include <vector>

#include "ppsl/autonomous_d1.hpp"
#include "ppsl/autonomous_d2.hpp"
#include "ppsl/distribution.hpp"
#include "ppsl/trace.hpp"

namespace ppsl {

/// Empirical frequencies of the subset's configurations over all samples.
inline DistributionTable histogram(const SampleTrace& trace, const std::vector<NodeId>& subset) {
    if (trace.empty()) throw Error(Errc::InvalidArgument, "histogram of an empty trace");
    for (NodeId v : subset)
        if (v >= trace.n_nodes()) throw Error(Errc::UnknownNode, "node " + std::to_string(v) + " not in trace");

    std::vector<double> counts(std::size_t{1} << subset.size(), 0.0);
    const DistributionTable shape(subset, std::vector<double>(counts.size(), 0.0));
    for (std::size_t k = 0; k < trace.size(); ++k) counts[shape.index_of(trace.state(k))] += 1.0;
    return DistributionTable::from_weights(subset, std::move(counts));
}

struct AutocorrResult {
    std::vector<double> lags;
    std::vector<double> c;
    double fwhm = 0.0;
};

/// Biased, normalized autocorrelation of one node's mean-removed signal,
///   c(k) = sum_t x_t x_{t+k} / sum_t x_t^2,
/// for lags up to `max_lag`. The FWHM is the width of the symmetric window
/// around zero lag where c >= 1/2, linearly interpolated between samples.
inline AutocorrResult autocorrelation(const SampleTrace& trace, NodeId node, double max_lag) {
    if (trace.size() < 3) throw Error(Errc::InvalidArgument, "trace too short for autocorrelation");
    const auto times = trace.times();
    const double step = times[1] - times[0];
    for (std::size_t k = 2; k < times.size(); ++k)
        if (std::abs((times[k] - times[k - 1]) - step) > 1e-6 * step)
            throw Error(Errc::InvalidArgument, "autocorrelation needs a uniformly sampled trace");
    const double span = times.back() - times.front() + step;
    if (!(max_lag > 0.0) || span < 10.0 * max_lag)
        throw Error(Errc::InvalidArgument, "trace must cover at least ten times max_lag");

    std::vector<double> x = trace.signal(node);
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double var = 0.0;
    for (double& v : x) {
        v -= mean;
        var += v * v;
    }
    if (var <= 1e-12 * static_cast<double>(x.size()))
        throw Error(Errc::ConstantTrace, "signal of node " + std::to_string(node) + " never changes");

    const auto lags = static_cast<std::size_t>(std::floor(max_lag / step + 1e-9));
    AutocorrResult res;
    res.lags.resize(lags + 1);
    res.c.resize(lags + 1);
    for (std::size_t k = 0; k <= lags; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < x.size(); ++t) s += x[t] * x[t + k];
        res.lags[k] = static_cast<double>(k) * step;
        res.c[k] = s / var;
    }

    for (std::size_t k = 1; k <= lags; ++k)
        if (res.c[k] < 0.5) {
            const double frac = (res.c[k - 1] - 0.5) / (res.c[k - 1] - res.c[k]);
            res.fwhm = 2.0 * (res.lags[k - 1] + frac * step);
            return res;
        }
    throw Error(Errc::NotConverged, "autocorrelation stays above 1/2 out to max_lag");
}

/// Engine selector for single-node characterization.
using AutonomousEngine = std::variant<D1Params, D2Params>;

/// A one-node network whose input is the constant `input`.
inline PBitNetwork single_node(double input) {
    return PBitNetwork(1, {0.0}, {input}, 1.0, NetworkKind::Directed);
}

inline SampleTrace run_engine(const AutonomousEngine& engine, const PBitNetwork& net, std::uint64_t seed) {
    return std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, D1Params>) return run_autonomous_d1(net, p, seed);
            else return run_autonomous_d2(net, p, seed);
        },
        engine);
}

struct SigmoidPoint {
    double input;
    double mean;
};

/// Long-run average output of a single p-bit at each clamped input. Each
/// point runs for the engine's `duration` on its own substream.
inline std::vector<SigmoidPoint> sigmoid_sweep(const AutonomousEngine& engine, const std::vector<double>& inputs,
                                               std::uint64_t seed) {
    std::vector<SigmoidPoint> out;
    out.reserve(inputs.size());
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const SampleTrace tr = run_engine(engine, single_node(inputs[k]), stream_key(seed, k));
        double sum = 0.0;
        for (std::size_t s = 0; s < tr.size(); ++s) sum += tr.spin(s, 0);
        out.push_back({inputs[k], sum / static_cast<double>(tr.size())});
    }
    return out;
}

struct StepResponseResult {
    std::vector<double> times;
    std::vector<double> ensemble_mean;
    double tau_step = 0.0;
    std::size_t n_ensembles = 0;
    double initial_level = 0.0;
    double final_level = 0.0;
};

/// Ensemble step response of a single p-bit. Every member starts in the
/// stationary state at `i_initial`; at t = 0 the input target becomes
/// `i_final` and the engine's fixed-step update runs for `duration`. tau_step
/// is the first time the ensemble mean covers (1 - 1/e) of the gap between
/// its t = 0 value and its settled value (average of the last tenth of the
/// window), interpolated between samples.
inline StepResponseResult step_response(const AutonomousEngine& engine, std::size_t n_ensembles, double i_initial,
                                        double i_final, std::uint64_t seed) {
    if (n_ensembles < 100) throw Error(Errc::InvalidArgument, "step response needs at least 100 ensemble members");

    double dt = 0.0, duration = 0.0;
    std::size_t stride = 1;
    std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, D1Params>) {
                detail::check_d1(p);
                dt = p.step();
            } else {
                // Only i_final drives the dynamics unless the synapse passes
                // through the intermediate inputs.
                dt = p.step(p.tau_s > 0.0 ? std::max(std::abs(i_initial), std::abs(i_final)) : std::abs(i_final));
                detail::check_d2(p, dt);
            }
            duration = p.duration;
            stride = p.record_stride;
        },
        engine);
    const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
    const std::size_t points = steps / stride + 1;
    std::vector<double> sum(points, 0.0);

    RandomStream root(seed, 0x57E9);
    for (std::size_t e = 0; e < n_ensembles; ++e) {
        RandomStream rng = root.split(e);
        std::visit(
            [&](const auto& p) {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, D1Params>) {
                    const D1StepFactors f(p, dt);
                    D1Cell c = D1Cell::equilibrated(i_initial, p.mtj_mode, rng);
                    sum[0] += c.m;
                    for (std::size_t k = 1; k <= steps; ++k) {
                        c.step(i_final, p, f, rng);
                        if (k % stride == 0) sum[k / stride] += c.m;
                    }
                } else {
                    const double decay_s = p.tau_s > 0.0 ? std::exp(-dt / p.tau_s) : 0.0;
                    D2Cell c = D2Cell::equilibrated(i_initial, rng);
                    sum[0] += c.m;
                    for (std::size_t k = 1; k <= steps; ++k) {
                        c.step(i_final, p, dt, decay_s, rng);
                        if (k % stride == 0) sum[k / stride] += c.m;
                    }
                }
            },
            engine);
    }

    StepResponseResult res;
    res.n_ensembles = n_ensembles;
    res.times.resize(points);
    res.ensemble_mean.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
        res.times[k] = static_cast<double>(k * stride) * dt;
        res.ensemble_mean[k] = sum[k] / static_cast<double>(n_ensembles);
    }

    const std::size_t tail = std::max<std::size_t>(1, points / 10);
    res.initial_level = res.ensemble_mean.front();
    res.final_level =
        std::accumulate(res.ensemble_mean.end() - static_cast<std::ptrdiff_t>(tail), res.ensemble_mean.end(), 0.0) /
        static_cast<double>(tail);
    const double gap = res.final_level - res.initial_level;
    if (std::abs(gap) < 5.0 / std::sqrt(static_cast<double>(n_ensembles)))
        throw Error(Errc::NotConverged, "ensemble mean does not move after the step");

    const double level = res.initial_level + (1.0 - std::exp(-1.0)) * gap;
    const double dir = gap > 0.0 ? 1.0 : -1.0;
    for (std::size_t k = 1; k < points; ++k)
        if ((res.ensemble_mean[k] - level) * dir >= 0.0) {
            const double a = res.ensemble_mean[k - 1], b = res.ensemble_mean[k];
            const double frac = (level - a) / (b - a);
            res.tau_step = res.times[k - 1] + frac * (res.times[k] - res.times[k - 1]);
            return res;
        }
    throw Error(Errc::NotConverged, "ensemble mean never crosses the (1 - 1/e) level");
}

}  // namespace ppsl
