#include "spgsim/netmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spgsim/partition.hpp"

namespace spgsim {

const char* link_name(LinkClass c) {
    switch (c) {
        case LinkClass::SELF: return "SELF";
        case LinkClass::LI: return "LI";
        case LinkClass::GI: return "GI";
    }
    return "?";
}

TopologySpec TopologySpec::preset(int nodes, int gpus_per_node) {
    TopologySpec t;
    t.nodes = nodes;
    t.gpus_per_node = gpus_per_node;
    return t;
}

void TopologySpec::validate() const {
    if (!(beta_li >= beta_gi) || !(beta_gi > 0))
        throw ParameterError("topology: need beta_li >= beta_gi > 0");
    if (!(alpha_gi >= alpha_li) || !(alpha_li >= 0))
        throw ParameterError("topology: need alpha_gi >= alpha_li >= 0");
    if (gpus_per_node <= 0) throw ParameterError("topology: gpus_per_node must be positive");
    if (index_width <= 0 || value_width <= 0)
        throw ParameterError("topology: widths must be positive");
}

std::string TopologySpec::to_json() const {
    nlohmann::ordered_json j;
    j["nodes"] = nodes;
    j["gpus_per_node"] = gpus_per_node;
    j["alpha_li"] = alpha_li;
    j["alpha_gi"] = alpha_gi;
    j["beta_li"] = beta_li;
    j["beta_gi"] = beta_gi;
    j["index_width"] = index_width;
    j["value_width"] = value_width;
    return j.dump();
}

static void apply_field(TopologySpec& t, const std::string& key, double v) {
    if (key == "nodes") t.nodes = static_cast<int>(v);
    else if (key == "gpus_per_node") t.gpus_per_node = static_cast<int>(v);
    else if (key == "alpha_li") t.alpha_li = v;
    else if (key == "alpha_gi") t.alpha_gi = v;
    else if (key == "beta_li") t.beta_li = v;
    else if (key == "beta_gi") t.beta_gi = v;
    else if (key == "index_width") t.index_width = static_cast<int>(v);
    else if (key == "value_width") t.value_width = static_cast<int>(v);
    else throw ParameterError("topology: unknown key '" + key + "'");
}

TopologySpec TopologySpec::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("topology")) j = j["topology"];
    TopologySpec t;
    for (const auto& [key, val] : j.items()) apply_field(t, key, val.get<double>());
    t.validate();
    return t;
}

TopologySpec TopologySpec::from_toml_text(const std::string& text) {
    TopologySpec t;
    std::istringstream in(text);
    std::string line;
    bool in_topology = false;
    bool seen_section = false;
    while (std::getline(in, line)) {
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            seen_section = true;
            in_topology = line == "[topology]";
            continue;
        }
        if (seen_section && !in_topology) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("topology toml: expected key = value");
        auto trim = [](std::string s) {
            const auto b2 = s.find_first_not_of(" \t");
            const auto e2 = s.find_last_not_of(" \t");
            return b2 == std::string::npos ? std::string() : s.substr(b2, e2 - b2 + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            apply_field(t, key, std::stod(val));
        } catch (const std::invalid_argument&) {
            throw ParameterError("topology toml: bad value for '" + key + "'");
        }
    }
    t.validate();
    return t;
}

TopologySpec TopologySpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open topology file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml")
        return from_toml_text(ss.str());
    return from_json_text(ss.str());
}

LinkClass classify(int sender, int receiver, const std::vector<int>& node_of) {
    if (sender < 0 || receiver < 0 || sender >= static_cast<int>(node_of.size()) ||
        receiver >= static_cast<int>(node_of.size()))
        throw RoutingError("classify: rank outside the grid");
    if (sender == receiver) return LinkClass::SELF;
    return node_of[static_cast<std::size_t>(sender)] ==
                   node_of[static_cast<std::size_t>(receiver)]
               ? LinkClass::LI
               : LinkClass::GI;
}

CommLedger::CommLedger(int procs, std::vector<int> node_of) : node_of_(std::move(node_of)) {
    sent_.resize(static_cast<std::size_t>(procs) * 2);
    received_.resize(static_cast<std::size_t>(procs) * 2);
    completion_.resize(static_cast<std::size_t>(procs), 0.0);
}

LedgerCell& CommLedger::cell(std::vector<LedgerCell>& v, int rank, LinkClass c) {
    return v[static_cast<std::size_t>(rank) * 2 + (c == LinkClass::GI ? 1 : 0)];
}

void CommLedger::record_transfer(int sender, int receiver, index_t payload_rows,
                                 index_t payload_nnz, const TopologySpec& topo) {
    const LinkClass c = classify(sender, receiver, node_of_);
    if (c == LinkClass::SELF) return;
    const auto bytes = static_cast<std::uint64_t>(topo.payload_bytes(payload_rows, payload_nnz));
    LedgerCell& s = cell(sent_, sender, c);
    s.messages += 1;
    s.nnz += static_cast<std::uint64_t>(payload_nnz);
    s.bytes += bytes;
    LedgerCell& r = cell(received_, receiver, c);
    r.messages += 1;
    r.nnz += static_cast<std::uint64_t>(payload_nnz);
    r.bytes += bytes;
}

void CommLedger::record_control(int sender, int receiver) {
    const LinkClass c = classify(sender, receiver, node_of_);
    if (c == LinkClass::SELF) return;
    cell(sent_, sender, c).messages += 1;
    cell(received_, receiver, c).messages += 1;
}

void CommLedger::set_completion(int rank, double t) {
    completion_[static_cast<std::size_t>(rank)] = t;
}

double CommLedger::makespan() const {
    return completion_.empty() ? 0.0 : *std::max_element(completion_.begin(), completion_.end());
}

const LedgerCell& CommLedger::sent(int rank, LinkClass c) const {
    return sent_[static_cast<std::size_t>(rank) * 2 + (c == LinkClass::GI ? 1 : 0)];
}

const LedgerCell& CommLedger::received(int rank, LinkClass c) const {
    return received_[static_cast<std::size_t>(rank) * 2 + (c == LinkClass::GI ? 1 : 0)];
}

LedgerCell CommLedger::total_sent(LinkClass c) const {
    LedgerCell total;
    for (int r = 0; r < procs(); ++r) total.add(sent(r, c));
    return total;
}

LedgerCell CommLedger::total_received(LinkClass c) const {
    LedgerCell total;
    for (int r = 0; r < procs(); ++r) total.add(received(r, c));
    return total;
}

std::string CommLedger::to_csv() const {
    std::ostringstream out;
    out << "process,class,messages,nnz,bytes,time\n";
    char buf[64];
    for (int r = 0; r < procs(); ++r) {
        for (const LinkClass c : {LinkClass::LI, LinkClass::GI}) {
            const LedgerCell& s = sent(r, c);
            const auto res = std::to_chars(buf, buf + sizeof(buf), completion(r));
            out << r << ',' << link_name(c) << ',' << s.messages << ',' << s.nnz << ',' << s.bytes
                << ',';
            out.write(buf, res.ptr - buf);
            out.put('\n');
        }
    }
    return out.str();
}

VolumePrediction predict_trident_volume(index_t nnz, int procs, int gpus_per_node) {
    const TridentGrid g = TridentGrid::create(procs, gpus_per_node);
    const double n = static_cast<double>(nnz);
    const double p = static_cast<double>(procs);
    const double lam = static_cast<double>(gpus_per_node);
    VolumePrediction v;
    v.q = g.q;
    v.gi_nnz_per_process_per_iter = 2.0 * n / p;
    v.li_nnz_per_process_per_iter = (lam - 1.0) * n / p;
    v.gi_nnz_per_node_total = 2.0 * n / (std::sqrt(p) * std::sqrt(lam));
    v.summa_gi_nnz_per_process = n / std::sqrt(p);
    v.gi_nnz_per_process_total_exact = 2.0 * static_cast<double>(g.q - 1) * n / p;
    v.li_nnz_per_process_total_exact = static_cast<double>(g.q) * (lam - 1.0) * n / p;
    return v;
}

}  // namespace spgsim
