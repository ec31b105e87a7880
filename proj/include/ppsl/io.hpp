#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppsl/analysis.hpp"
#include "ppsl/distribution.hpp"
#include "ppsl/network.hpp"
#include "ppsl/trace.hpp"

namespace ppsl {

// Network files are JSON:
//
//   {
//     "n_nodes": 3, "kind": "directed", "i0": 1.0,
//     "biases": [0, 0, 0],
//     "edges": [{"from": 0, "to": 1, "w": 0.5}, ...],
//     "labels": {"A": 0, "B": 2}          (optional)
//   }
//
// An edge {from: j, to: i, w} sets J_ij = w. For symmetric networks each
// undirected pair is listed once and mirrored; listing both directions counts
// as a duplicate.

namespace detail {

inline std::string where(const std::string& source, const std::string& field) {
    return source + ": field '" + field + "'";
}

template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const std::string& source) {
    if (!j.contains(key)) throw Error(Errc::ParseError, where(source, key) + " is missing");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, where(source, key) + " has the wrong type (" + e.what() + ")");
    }
}

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') ++line, col = 1;
        else ++col;
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parses network JSON text and validates the result. `source` names the
/// input in diagnostics.
inline PBitNetwork parse_network(const std::string& text, const std::string& source = "<network>") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ParseError, source + ": " + detail::line_col(text, e.byte) + ": malformed JSON");
    }
    if (!j.is_object()) throw Error(Errc::ParseError, source + ": top level must be an object");

    const auto n = detail::get_field<long long>(j, "n_nodes", source);
    if (n <= 0) throw Error(Errc::ParseError, detail::where(source, "n_nodes") + " must be positive");
    const auto nn = static_cast<std::size_t>(n);

    const auto kind_text = detail::get_field<std::string>(j, "kind", source);
    NetworkKind kind;
    if (kind_text == "directed") kind = NetworkKind::Directed;
    else if (kind_text == "symmetric") kind = NetworkKind::Symmetric;
    else throw Error(Errc::ParseError, detail::where(source, "kind") + " must be \"directed\" or \"symmetric\"");

    const auto gain = detail::get_field<double>(j, "i0", source);
    auto biases = detail::get_field<std::vector<double>>(j, "biases", source);
    if (biases.size() != nn)
        throw Error(Errc::ParseError, detail::where(source, "biases") + " has " + std::to_string(biases.size()) +
                                          " entries, expected " + std::to_string(nn));

    std::vector<double> couplings(nn * nn, 0.0);
    if (!j.contains("edges") || !j["edges"].is_array())
        throw Error(Errc::ParseError, detail::where(source, "edges") + " must be an array");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    const auto& edges = j["edges"];
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string src = source + ": edges[" + std::to_string(k) + "]";
        if (!edges[k].is_object()) throw Error(Errc::ParseError, src + " must be an object");
        const auto from = detail::get_field<long long>(edges[k], "from", src);
        const auto to = detail::get_field<long long>(edges[k], "to", src);
        const auto w = detail::get_field<double>(edges[k], "w", src);
        if (from < 0 || to < 0 || from >= n || to >= n)
            throw Error(Errc::ParseError, src + " (" + std::to_string(from) + " -> " + std::to_string(to) +
                                              ") is out of range for " + std::to_string(n) + " nodes");
        const auto f = static_cast<std::size_t>(from), t = static_cast<std::size_t>(to);
        std::pair<std::size_t, std::size_t> key{f, t};
        if (kind == NetworkKind::Symmetric) key = {std::min(f, t), std::max(f, t)};
        if (!seen.insert(key).second)
            throw Error(Errc::ParseError, src + " duplicates edge " + std::to_string(from) + " -> " +
                                              std::to_string(to));
        couplings[t * nn + f] = w;
        if (kind == NetworkKind::Symmetric) couplings[f * nn + t] = w;
    }

    std::map<std::string, NodeId> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_object()) throw Error(Errc::ParseError, detail::where(source, "labels") + " must be an object");
        for (const auto& [name, idx] : j["labels"].items()) {
            if (!idx.is_number_integer() || idx.get<long long>() < 0 || idx.get<long long>() >= n)
                throw Error(Errc::ParseError, detail::where(source, "labels." + name) + " is not a node index");
            labels[name] = idx.get<std::size_t>();
        }
    }

    PBitNetwork net(nn, std::move(couplings), std::move(biases), gain, kind, std::move(labels));
    if (auto rep = validate_network(net); !rep.ok())
        throw Error(Errc::ValidationError, source + ": " + rep.describe());
    return net;
}

inline PBitNetwork parse_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str(), path);
}

inline std::string serialize_network(const PBitNetwork& net) {
    nlohmann::ordered_json j;
    j["n_nodes"] = net.size();
    j["kind"] = kind_name(net.kind());
    j["i0"] = net.gain();
    j["biases"] = std::vector<double>(net.biases().begin(), net.biases().end());
    auto edges = nlohmann::ordered_json::array();
    for (NodeId i = 0; i < net.size(); ++i)
        for (const Edge& e : net.inputs(i)) {
            if (net.kind() == NetworkKind::Symmetric && e.from > i) continue;
            edges.push_back({{"from", e.from}, {"to", i}, {"w", e.weight}});
        }
    j["edges"] = std::move(edges);
    if (!net.labels().empty()) {
        nlohmann::ordered_json labels = nlohmann::ordered_json::object();
        for (const auto& [name, id] : net.labels()) labels[name] = id;
        j["labels"] = std::move(labels);
    }
    return j.dump(2) + "\n";
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, path + ": cannot open for writing");
    out << text;
    if (!out) throw Error(Errc::InvalidArgument, path + ": write failed");
}

// --- CSV ------------------------------------------------------------------

/// Column name of a node: its label if it has one, else "n<index>".
inline std::string node_name(const PBitNetwork* net, NodeId v) {
    if (net)
        if (auto l = net->label_of(v)) return *l;
    return "n" + std::to_string(v);
}

/// One row per configuration: node spins as +-1, then the probability.
inline std::string distribution_csv(const DistributionTable& t, const PBitNetwork* net = nullptr) {
    std::string s;
    for (NodeId v : t.nodes()) s += node_name(net, v) + ",";
    s += "probability\n";
    for (std::size_t c = 0; c < t.size(); ++c) {
        for (std::size_t p = 0; p < t.nodes().size(); ++p) s += (t.spin(c, p) > 0 ? "1," : "-1,");
        s += fmt_double(t[c]) + "\n";
    }
    return s;
}

struct ParsedTable {
    std::vector<std::string> columns;
    DistributionTable table;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t k = 0;
    while (k < s.size() && s[k] == ' ') ++k;
    return s.substr(k);
}

}  // namespace detail

/// Reads a table written by distribution_csv. Rows may come in any order;
/// absent configurations get probability zero. Node ids in the result are
/// the column positions 0..k-1.
inline ParsedTable parse_distribution_csv(const std::string& text, const std::string& source = "<csv>") {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::ParseError, source + ": empty file");
    auto header = detail::split(detail::trim(line), ',');
    if (header.size() < 2 || detail::trim(header.back()) != "probability")
        throw Error(Errc::ParseError, source + ": line 1: last column must be 'probability'");
    header.pop_back();
    const std::size_t k = header.size();
    if (k >= 31) throw Error(Errc::TooLarge, source + ": too many node columns");

    std::vector<double> probs(std::size_t{1} << k, 0.0);
    std::vector<bool> seen(probs.size(), false);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty()) continue;
        auto cells = detail::split(line, ',');
        const std::string at = source + ": line " + std::to_string(lineno);
        if (cells.size() != k + 1) throw Error(Errc::ParseError, at + ": expected " + std::to_string(k + 1) + " columns");
        std::size_t c = 0;
        for (std::size_t p = 0; p < k; ++p) {
            const std::string v = detail::trim(cells[p]);
            if (v == "1" || v == "+1") c = (c << 1) | 1U;
            else if (v == "-1") c <<= 1;
            else throw Error(Errc::ParseError, at + ": spin '" + v + "' is not +-1");
        }
        if (seen[c]) throw Error(Errc::ParseError, at + ": configuration repeated");
        seen[c] = true;
        try {
            std::size_t used = 0;
            const std::string v = detail::trim(cells[k]);
            probs[c] = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
        } catch (const std::exception&) {
            throw Error(Errc::ParseError, at + ": probability is not a number");
        }
    }
    std::vector<NodeId> ids(k);
    for (std::size_t p = 0; p < k; ++p) ids[p] = p;
    for (auto& h : header) h = detail::trim(h);
    return {header, DistributionTable(ids, std::move(probs))};
}

inline std::string trace_csv(const SampleTrace& tr, const PBitNetwork* net = nullptr) {
    std::string s = "t";
    for (NodeId v = 0; v < tr.n_nodes(); ++v) s += "," + node_name(net, v);
    s += "\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        s += fmt_double(tr.time(k));
        for (NodeId v = 0; v < tr.n_nodes(); ++v) s += tr.spin(k, v) > 0 ? ",1" : ",-1";
        s += "\n";
    }
    return s;
}

/// Two-column numeric CSV with a header row.
inline std::string xy_csv(const std::string& xname, const std::string& yname, const std::vector<double>& x,
                          const std::vector<double>& y) {
    std::string s = xname + "," + yname + "\n";
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) s += fmt_double(x[k]) + "," + fmt_double(y[k]) + "\n";
    return s;
}

inline std::string autocorr_csv(const AutocorrResult& r) { return xy_csv("lag", "c", r.lags, r.c); }

inline std::string step_csv(const StepResponseResult& r) { return xy_csv("t", "mean", r.times, r.ensemble_mean); }

inline std::string sigmoid_csv(const std::vector<SigmoidPoint>& pts) {
    std::vector<double> x, y;
    for (const auto& p : pts) x.push_back(p.input), y.push_back(p.mean);
    return xy_csv("input", "mean", x, y);
}

}  // namespace ppsl
