#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppsl/experiment.hpp"
#include "ppsl/generators.hpp"

using namespace ppsl;

namespace {

struct Common {
    std::string net_path;
    std::string engine = "d1";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> nodes;
    std::string out;
    std::string mtj_mode = "continuous";
    std::string integrator = "auto";
    EngineOptions eo;
};

void add_engine_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "RNG seed (falls back to PPSL_SEED, then 1)");
    cmd->add_option("--dt", c.eo.dt, "time step in ns (default: engine-specific)");
    cmd->add_option("--tau-t", c.eo.tau_t, "Design-1 transistor response time in ns")->capture_default_str();
    cmd->add_option("--tau-n", c.eo.tau_n, "fluctuation time tau_N (Design 1: tau_N0) in ns")->capture_default_str();
    cmd->add_option("--tau-s", c.eo.tau_s, "synapse relaxation time in ns")->capture_default_str();
    cmd->add_option("--imtj", c.eo.i_mtj, "pinning current I_MTJ (Design 1)")->capture_default_str();
    cmd->add_option("--mtj-mode", c.mtj_mode, "continuous | bipolar")->capture_default_str();
    cmd->add_option("--duration", c.eo.duration, "simulated time in ns");
    cmd->add_option("--stride", c.eo.stride, "record every k-th step (default: one sample per tau_N / 10)");
    cmd->add_option("--integrator", c.integrator, "auto | fixed | event")->capture_default_str();
}

std::uint64_t pick_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("PPSL_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw Error(Errc::InvalidArgument, std::string("PPSL_SEED is not an unsigned integer: '") + env + "'");
    }
    return 1;
}

void finish_options(Common& c) {
    c.eo.mtj_mode = parse_mtj_mode(c.mtj_mode);
    c.eo.integrator = parse_integrator(c.integrator);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text(path, text);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (auto& tok : detail::split(s, ','))
        if (auto t = detail::trim(tok); !t.empty()) out.push_back(t);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(Common& c, const std::string& trace_out) {
    finish_options(c);
    const std::uint64_t seed = pick_seed(c.seed);
    const PBitNetwork net = parse_network_file(c.net_path);
    const auto subset = resolve_nodes(net, c.nodes);
    const RunResult r = run_experiment(net, parse_engine(c.engine), c.eo, subset, seed);

    emit(c.out, distribution_csv(r.table, &net));
    if (!trace_out.empty() && r.trace) write_text(trace_out, trace_csv(*r.trace, &net));

    std::cerr << "seed " << seed << "\n";
    std::cerr << "params " << r.params_digest << "\n";
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    if (r.tv_to_oracle) std::cerr << "tv_to_oracle " << fmt_double(*r.tv_to_oracle) << "\n";
    return 0;
}

int cmd_sweep(Common& c, const std::string& ratios_text) {
    finish_options(c);
    const std::uint64_t seed = pick_seed(c.seed);
    const PBitNetwork net = parse_network_file(c.net_path);
    std::vector<std::string> names = c.nodes;
    if (names.empty()) names = {"A", "B"};
    const auto subset = resolve_nodes(net, names);

    std::vector<double> ratios;
    for (const auto& tok : split_list(ratios_text)) {
        try {
            ratios.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw Error(Errc::InvalidArgument, "ratio '" + tok + "' is not a number");
        }
    }
    std::cerr << "seed " << seed << "\n";
    const auto pts = sweep_ratio(net, ratios, c.eo, subset, seed);
    if (ratios.empty()) {
        std::cerr << "warning: empty ratio list, nothing to do\n";
        return 0;
    }
    std::vector<double> x, y;
    for (const auto& p : pts) x.push_back(p.ratio), y.push_back(p.tv);
    emit(c.out, xy_csv("ratio", "tv", x, y));
    return 0;
}

int cmd_characterize(Common& c, std::size_t ensembles) {
    finish_options(c);
    const std::uint64_t seed = pick_seed(c.seed);
    const EngineKind engine = parse_engine(c.engine);
    const std::string prefix = c.out.empty() ? "characterize" : c.out;
    std::cerr << "seed " << seed << "\n";

    const Characterization ch = characterize(engine, c.eo, seed, ensembles);
    write_text(prefix + "_sigmoid.csv", sigmoid_csv(ch.sigmoid));
    write_text(prefix + "_autocorr.csv", autocorr_csv(ch.autocorr));
    if (!ch.step) {
        std::cerr << "error: " << ch.step_error << "\n";
        std::cout << "tau_corr " << fmt_double(ch.tau_corr()) << " tau_step nan ratio nan\n";
        return 1;
    }
    write_text(prefix + "_step.csv", step_csv(*ch.step));
    std::cout << "tau_corr " << fmt_double(ch.tau_corr()) << " tau_step " << fmt_double(*ch.tau_step())
              << " ratio " << fmt_double(*ch.tau_step() / ch.tau_corr()) << "\n";
    return 0;
}

int cmd_compare(const std::string& a, const std::string& b) {
    const ParsedTable ta = parse_distribution_csv(read_file(a), a);
    const ParsedTable tb = parse_distribution_csv(read_file(b), b);
    if (ta.columns != tb.columns)
        throw Error(Errc::SubsetMismatch, a + " and " + b + " describe different node columns");
    std::cout << fmt_double(tv_distance(ta.table, tb.table)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ppsl: p-bit network simulator"};
    app.require_subcommand(1);

    Common c;
    std::string trace_out, ratios = "1e-3,1e-2,1e-1,1";
    std::size_t ensembles = 10000;

    auto* run = app.add_subcommand("run", "simulate a network and histogram the chosen nodes");
    run->add_option("--net", c.net_path, "network JSON file")->required();
    run->add_option("--engine", c.engine, "clocked | d1 | d2 | oracle")->capture_default_str();
    run->add_option("--nodes", c.nodes, "observed nodes (labels or indices), default all")->delimiter(',');
    run->add_option("--out", c.out, "histogram CSV path (default stdout)");
    run->add_option("--trace-out", trace_out, "also write the sample trace as CSV");
    run->add_option("--sweeps", c.eo.sweeps, "clocked sweeps")->capture_default_str();
    run->add_option("--policy", c.eo.policy, "topological | random | reverse | fixed:i,j,...")->capture_default_str();
    add_engine_flags(run, c);

    auto* oracle = app.add_subcommand("oracle", "exact marginal of the chosen nodes");
    oracle->add_option("--net", c.net_path, "network JSON file")->required();
    oracle->add_option("--nodes", c.nodes, "observed nodes, default all")->delimiter(',');
    oracle->add_option("--out", c.out, "CSV path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Design-1 TV distance from the chain rule versus tau_T / tau_N");
    sweep->add_option("--net", c.net_path, "directed network JSON file")->required();
    sweep->add_option("--ratios", ratios, "comma-separated tau_T / tau_N values")->capture_default_str();
    sweep->add_option("--nodes", c.nodes, "observed nodes, default A,B")->delimiter(',');
    sweep->add_option("--out", c.out, "CSV path (default stdout)");
    add_engine_flags(sweep, c);

    auto* charz = app.add_subcommand("characterize", "single p-bit sigmoid, autocorrelation and step response");
    charz->add_option("--engine", c.engine, "d1 | d2")->capture_default_str();
    charz->add_option("--out", c.out, "output prefix for the three CSVs")->capture_default_str();
    charz->add_option("--ensembles", ensembles, "step-response ensemble size")->capture_default_str();
    add_engine_flags(charz, c);

    std::string cmp_a, cmp_b;
    auto* compare = app.add_subcommand("compare", "TV distance between two distribution CSVs");
    compare->add_option("first", cmp_a)->required();
    compare->add_option("second", cmp_b)->required();

    std::string gen_kind, layers = "2,2,2", gen_out;
    double gen_r = 0.8, gen_gain = 1.0;
    std::size_t skips = 2;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "write a generated network as JSON");
    gen->add_option("kind", gen_kind, "fig3 | layered")->required()->check(CLI::IsMember({"fig3", "layered"}));
    gen->add_option("--r", gen_r, "branch coupling strength (fig3)")->capture_default_str();
    gen->add_option("--layers", layers, "layer sizes (layered)")->capture_default_str();
    gen->add_option("--skips", skips, "extra skip edges (layered)")->capture_default_str();
    gen->add_option("--gain", gen_gain, "gain I0")->capture_default_str();
    gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "JSON path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(c, trace_out);
        if (*oracle) {
            c.engine = "oracle";
            return cmd_run(c, "");
        }
        if (*sweep) return cmd_sweep(c, ratios);
        if (*charz) return cmd_characterize(c, ensembles);
        if (*compare) return cmd_compare(cmp_a, cmp_b);
        if (*gen) {
            if (gen_kind == "fig3") {
                emit(gen_out, serialize_network(gen_fig3_network(gen_r, gen_seed, gen_gain).net));
            } else {
                std::vector<std::size_t> sizes;
                for (const auto& tok : split_list(layers)) sizes.push_back(std::stoul(tok));
                emit(gen_out, serialize_network(gen_layered_random_bn(sizes, skips, gen_seed, gen_gain)));
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
