#include "spgsim/report.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "spgsim/rng.hpp"

namespace spgsim {

ResultChecksum result_checksum(const CsrMatrix& m) {
    ResultChecksum cs;
    cs.nnz = m.nnz();
    for (index_t i = 0; i < m.nrows; ++i) {
        for (index_t t = m.rowptr[static_cast<std::size_t>(i)];
             t < m.rowptr[static_cast<std::size_t>(i) + 1]; ++t) {
            const auto quant = static_cast<std::int64_t>(
                std::llround(m.values[static_cast<std::size_t>(t)] * 1e9));
            std::uint64_t h = mix64(static_cast<std::uint64_t>(i) + 0x51ED270B9A3E51EBULL);
            h = mix64(h ^ static_cast<std::uint64_t>(m.colind[static_cast<std::size_t>(t)]));
            h = mix64(h ^ static_cast<std::uint64_t>(quant));
            cs.hash += h;  // unordered sum, mod 2^64
        }
    }
    return cs;
}

static std::string hash_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["config"] = {{"algo", config.algo},
                   {"procs", config.procs},
                   {"gpus_per_node", config.gpus_per_node},
                   {"matrix_a", config.matrix_a},
                   {"matrix_b", config.matrix_b},
                   {"square", config.square},
                   {"seed", config.seed},
                   {"topology", nlohmann::ordered_json::parse(config.topology.to_json())}};
    j["rounds"] = rounds;
    j["makespan_seconds"] = makespan_seconds;

    nlohmann::ordered_json agg;
    for (const LinkClass c : {LinkClass::GI, LinkClass::LI}) {
        const LedgerCell sent = ledger.total_sent(c);
        agg[c == LinkClass::GI ? "gi" : "li"] = {
            {"messages", sent.messages}, {"nnz_sent", sent.nnz}, {"bytes_sent", sent.bytes}};
    }
    j["aggregate"] = agg;

    nlohmann::ordered_json per;
    for (int r = 0; r < ledger.procs(); ++r) {
        nlohmann::ordered_json row;
        row["rank"] = r;
        row["node"] = ledger.node_of()[static_cast<std::size_t>(r)];
        for (const LinkClass c : {LinkClass::GI, LinkClass::LI}) {
            const std::string p = c == LinkClass::GI ? "gi_" : "li_";
            row[p + "messages"] = ledger.sent(r, c).messages;
            row[p + "nnz_sent"] = ledger.sent(r, c).nnz;
            row[p + "bytes_sent"] = ledger.sent(r, c).bytes;
            row[p + "nnz_recv"] = ledger.received(r, c).nnz;
            row[p + "bytes_recv"] = ledger.received(r, c).bytes;
        }
        row["completion_time"] = ledger.completion(r);
        per.push_back(row);
    }
    j["per_process"] = per;

    j["result"] = {{"nrows", result_nrows},
                   {"ncols", result_ncols},
                   {"nnz", checksum.nnz},
                   {"checksum", hash_hex(checksum.hash)}};
    if (verified.has_value())
        j["verified"] = *verified;
    else
        j["verified"] = nullptr;
    if (!tilemap_json.empty()) j["tilemap"] = nlohmann::ordered_json::parse(tilemap_json);
    return j.dump(2);
}

RunReport make_report(RunConfig config, const DriverResult& result, const TileMap* map,
                      std::optional<bool> verified) {
    RunReport rep;
    rep.config = std::move(config);
    rep.rounds = result.rounds;
    rep.makespan_seconds = result.makespan;
    rep.ledger = result.ledger;
    rep.result_nrows = result.c.nrows;
    rep.result_ncols = result.c.ncols;
    rep.checksum = result_checksum(result.c);
    rep.verified = verified;
    if (map != nullptr) rep.tilemap_json = map->to_json();
    return rep;
}

}  // namespace spgsim
